from dataclasses import dataclass
from enum import Enum
from itertools import chain
from typing import Tuple

import numpy as np

from config import ZERO_CLAMP
from utils.tsplib_handler import TspInstance
from utils.tour_handler import Tour, gene_masses, tour_length, worst_gene_edge, worst_gene_lr


class CrossoverKind(str, Enum):
    MODIFIED = "modified"
    PMX = "pmx"
    COWGC = "cowgc"
    COWLRGC = "cowlrgc"
    COLLISION = "collision"


def parse_kind(name: str) -> CrossoverKind:
    try:
        return CrossoverKind(name.strip().lower())
    except ValueError:
        choices = ", ".join(k.value for k in CrossoverKind)
        raise ValueError(f"unknown crossover {name!r} (choose from {choices})") from None


# =====================================
# ELASTIC COLLISION
# =====================================

@dataclass(frozen=True)
class CollisionOutcome:
    v1_new: np.ndarray
    v2_new: np.ndarray
    stays_1: np.ndarray
    stays_2: np.ndarray


def elastic_collision(m1, v1, m2, v2):
    """
    Head-on elastic collision velocities. Works on scalars or arrays.

    When m1 + m2 == 0 both bodies come out stationary.
    """
    m1, v1, m2, v2 = (np.asarray(x, dtype=float) for x in (m1, v1, m2, v2))
    total = m1 + m2
    moving = total > 0
    safe_total = np.where(moving, total, 1.0)
    a = (m1 - m2) / safe_total
    v1_new = np.where(moving, a * v1 + (2 * m2 / safe_total) * v2, 0.0)
    v2_new = np.where(moving, (2 * m1 / safe_total) * v1 - a * v2, 0.0)
    if v1_new.ndim == 0:
        return float(v1_new), float(v2_new)
    return v1_new, v2_new


def collision_outcome(m1, v1, m2, v2) -> CollisionOutcome:
    """Velocities after impact, clamped near zero, plus which genes stay put"""
    v1_new, v2_new = elastic_collision(m1, v1, m2, v2)
    v1_new = np.where(np.abs(v1_new) <= ZERO_CLAMP, 0.0, v1_new)
    v2_new = np.where(np.abs(v2_new) <= ZERO_CLAMP, 0.0, v2_new)
    # gene 1 moves in +v, gene 2 in -v
    return CollisionOutcome(v1_new, v2_new, v1_new <= 0, v2_new >= 0)


# =====================================
# OPERATORS
# =====================================

def _prefix_fill(head, donor, cut):
    prefix = head[:cut]
    return np.concatenate([prefix, donor[~np.isin(donor, prefix)]])


def modified_crossover(p1: Tour, p2: Tour, cut: int) -> Tuple[Tour, Tour]:
    """Keep each parent's prefix [0, cut), fill the rest in the other parent's order"""
    n = len(p1)
    if not 0 <= cut <= n:
        raise ValueError(f"cut {cut} outside [0, {n}]")
    return _prefix_fill(p1, p2, cut), _prefix_fill(p2, p1, cut)


def _pmx_child(base, donor, a, b):
    child = np.array(base, copy=True)
    child[a:b] = donor[a:b]
    mapping = dict(zip(donor[a:b].tolist(), base[a:b].tolist()))
    for i in chain(range(a), range(b, len(base))):
        city = int(base[i])
        while city in mapping:
            city = mapping[city]
        child[i] = city
    return child


def pmx(p1: Tour, p2: Tour, cut1: int, cut2: int) -> Tuple[Tour, Tour]:
    """Partially mapped crossover over the segment [cut1, cut2)"""
    n = len(p1)
    if not 0 <= cut1 < cut2 <= n:
        raise ValueError(f"invalid PMX cuts ({cut1}, {cut2}) for n={n}")
    return _pmx_child(p1, p2, cut1, cut2), _pmx_child(p2, p1, cut1, cut2)


def cowgc(inst: TspInstance, p1: Tour, p2: Tour) -> Tuple[Tour, Tour]:
    """Cut both parents just before the worst gene of the parent with the longer worst edge"""
    cut1, worst1 = worst_gene_edge(inst, p1)
    cut2, worst2 = worst_gene_edge(inst, p2)
    cut = cut2 if worst2 > worst1 else cut1
    return modified_crossover(p1, p2, cut)


def cowlrgc(inst: TspInstance, p1: Tour, p2: Tour) -> Tuple[Tour, Tour]:
    cut1, worst1 = worst_gene_lr(inst, p1)
    cut2, worst2 = worst_gene_lr(inst, p2)
    cut = cut2 if worst2 > worst1 else cut1
    return modified_crossover(p1, p2, cut)


def _keep_and_fill(parent, donor, keep):
    child = np.array(parent, copy=True)
    child[~keep] = donor[~np.isin(donor, parent[keep])]
    return child


def collision(inst: TspInstance, p1: Tour, p2: Tour, rng: np.random.Generator) -> Tuple[Tour, Tour]:
    """
    Collide the genes of both parents position by position.

    Each gene weighs the distance to its path neighbours. Parent 1 travels
    with a random positive velocity, parent 2 with a random negative one, both
    drawn from [1, tour length]. A gene that bounces back or stops stays in its
    child; the gaps are filled left to right in the other parent's order.
    """
    v1 = rng.uniform(1, tour_length(inst, p1))
    v2 = -rng.uniform(1, tour_length(inst, p2))
    outcome = collision_outcome(gene_masses(inst, p1), v1, gene_masses(inst, p2), v2)
    return _keep_and_fill(p1, p2, outcome.stays_1), _keep_and_fill(p2, p1, outcome.stays_2)


def apply_crossover(kind: CrossoverKind, inst: TspInstance, p1: Tour, p2: Tour, rng: np.random.Generator) -> Tuple[Tour, Tour]:
    """Run one operator, drawing the random cut points MODIFIED and PMX need"""
    n = len(p1)
    if kind == CrossoverKind.MODIFIED:
        return modified_crossover(p1, p2, int(rng.integers(1, n)))
    if kind == CrossoverKind.PMX:
        cut1, cut2 = sorted(int(c) for c in rng.choice(n + 1, size=2, replace=False))
        return pmx(p1, p2, cut1, cut2)
    if kind == CrossoverKind.COWGC:
        return cowgc(inst, p1, p2)
    if kind == CrossoverKind.COWLRGC:
        return cowlrgc(inst, p1, p2)
    if kind == CrossoverKind.COLLISION:
        return collision(inst, p1, p2, rng)
    raise ValueError(f"unknown crossover {kind!r}")
