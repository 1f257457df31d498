import numpy as np
import pytest

from conftest import labels
from utils.crossover_handler import (
    CrossoverKind,
    apply_crossover,
    collision,
    collision_outcome,
    cowgc,
    cowlrgc,
    elastic_collision,
    modified_crossover,
    parse_kind,
    pmx,
)
from utils.tsplib_handler import random_instance
from utils.tour_handler import gene_masses, is_permutation, tour_length, worst_gene_edge

EXAMPLE1 = (labels(1, 3, 8, 7, 5, 6, 2, 9, 4), labels(1, 5, 9, 8, 4, 3, 7, 6, 2))
EXAMPLE2 = (labels(1, 4, 2, 8, 9, 6, 3, 7, 5), labels(1, 9, 5, 7, 8, 2, 3, 4, 6))


@pytest.fixture(scope="module")
def instances_by_size():
    return {n: random_instance(n, seed=1000 + n) for n in range(4, 101)}


def _state(rng):
    return rng.bit_generator.state


# =====================================
# ELASTIC COLLISION
# =====================================

def test_equal_masses_exchange_velocities():
    assert elastic_collision(2.5, 3.0, 2.5, -3.0) == (-3.0, 3.0)
    assert elastic_collision(7.0, 11.0, 7.0, -4.0) == (-4.0, 11.0)


def test_unequal_masses_example():
    assert elastic_collision(1, 2, 3, -2) == (-4.0, 0.0)


def test_massless_second_body():
    v1_new, v2_new = elastic_collision(4.0, 3.0, 0.0, -1.0)
    assert v1_new == 3.0
    assert v2_new == 2 * 3.0 + 1.0


def test_zero_total_mass_is_stationary():
    assert elastic_collision(0.0, 5.0, 0.0, -5.0) == (0.0, 0.0)
    outcome = collision_outcome(0.0, 5.0, 0.0, -5.0)
    assert outcome.stays_1 and outcome.stays_2


def test_conservation_laws():
    rng = np.random.default_rng(7)
    size = 100_000
    m1 = rng.uniform(0, 100, size)
    m2 = rng.uniform(0, 100, size)
    v1 = rng.uniform(-1000, 1000, size)
    v2 = rng.uniform(-1000, 1000, size)
    m1[:10] = 0.0
    m2[10:20] = 0.0
    v1_new, v2_new = elastic_collision(m1, v1, m2, v2)

    momentum_scale = np.abs(m1 * v1) + np.abs(m2 * v2)
    np.testing.assert_array_less(np.abs(m1 * v1 + m2 * v2 - (m1 * v1_new + m2 * v2_new)), 1e-9 * momentum_scale + 1e-300)
    energy = m1 * v1 ** 2 + m2 * v2 ** 2
    energy_new = m1 * v1_new ** 2 + m2 * v2_new ** 2
    np.testing.assert_allclose(energy_new, energy, rtol=1e-9)


def test_outcome_clamps_tiny_velocities():
    # m1 = 3, m2 = 1, v1 = 1, v2 = -1 gives v1' = 0 exactly; nudge it below the clamp
    outcome = collision_outcome(3.0, 1.0 + 1e-14, 1.0, -1.0)
    assert outcome.v1_new == 0.0
    assert outcome.stays_1


# =====================================
# MODIFIED AND PMX
# =====================================

def test_modified_extreme_cuts(rng):
    p1, p2 = rng.permutation(10), rng.permutation(10)
    c1, c2 = modified_crossover(p1, p2, 0)
    assert np.array_equal(c1, p2) and np.array_equal(c2, p1)
    c1, c2 = modified_crossover(p1, p2, 10)
    assert np.array_equal(c1, p1) and np.array_equal(c2, p2)


def test_modified_worked_example():
    p1, p2 = EXAMPLE1
    c1, c2 = modified_crossover(p1, p2, 5)
    assert np.array_equal(c1, labels(1, 3, 8, 7, 5, 9, 4, 6, 2))
    assert np.array_equal(c2, labels(1, 5, 9, 8, 4, 3, 7, 6, 2))


def test_modified_rejects_bad_cut():
    p = np.arange(5)
    with pytest.raises(ValueError):
        modified_crossover(p, p, 6)
    with pytest.raises(ValueError):
        modified_crossover(p, p, -1)


def test_pmx_worked_example():
    p1, p2 = labels(1, 2, 3, 4, 5), labels(3, 4, 5, 1, 2)
    c1, c2 = pmx(p1, p2, 0, 3)
    assert np.array_equal(c1, labels(3, 4, 5, 2, 1))
    assert np.array_equal(c2, labels(1, 2, 3, 5, 4))


def test_pmx_interior_segment():
    p1, p2 = labels(1, 2, 3, 4, 5), labels(3, 4, 5, 1, 2)
    c1, _ = pmx(p1, p2, 1, 3)
    assert np.array_equal(c1, labels(1, 4, 5, 2, 3))


def test_pmx_whole_segment_swaps_parents(rng):
    p1, p2 = rng.permutation(12), rng.permutation(12)
    c1, c2 = pmx(p1, p2, 0, 12)
    assert np.array_equal(c1, p2) and np.array_equal(c2, p1)


def test_pmx_identical_parents(rng):
    p = rng.permutation(15)
    for cut1, cut2 in [(0, 1), (3, 9), (14, 15), (0, 15)]:
        c1, c2 = pmx(p, p, cut1, cut2)
        assert np.array_equal(c1, p) and np.array_equal(c2, p)


@pytest.mark.parametrize("cuts", [(3, 3), (4, 2), (-1, 2), (0, 6)])
def test_pmx_rejects_bad_cuts(cuts):
    p = np.arange(5)
    with pytest.raises(ValueError):
        pmx(p, p, *cuts)


# =====================================
# WORST-GENE CROSSOVERS
# =====================================

def test_cowgc_uses_parent2_cut(fig2):
    p1, p2 = EXAMPLE1
    c1, c2 = cowgc(fig2, p1, p2)
    # parent 2's worst edge (60) beats parent 1's (22): cut before city 4 at position 4
    assert np.array_equal(c1, labels(1, 3, 8, 7, 5, 9, 4, 6, 2))
    assert np.array_equal(c2, labels(1, 5, 9, 8, 3, 7, 6, 2, 4))


def test_cowlrgc_uses_parent1_cut(fig2):
    p1, p2 = EXAMPLE2
    c1, c2 = cowlrgc(fig2, p1, p2)
    # parent 1's worst L+R sum (51, city 8) beats parent 2's (32): cut at position 3
    assert np.array_equal(c1, labels(1, 4, 2, 9, 5, 7, 8, 3, 6))
    assert np.array_equal(c2, labels(1, 9, 5, 4, 2, 8, 6, 3, 7))


def test_cowgc_refills_from_cut(instances_by_size, rng):
    for n in (10, 40, 90):
        inst = instances_by_size[n]
        for _ in range(30):
            p1, p2 = rng.permutation(n), rng.permutation(n)
            cut1, worst1 = worst_gene_edge(inst, p1)
            cut2, worst2 = worst_gene_edge(inst, p2)
            cut = cut2 if worst2 > worst1 else cut1
            c1, c2 = cowgc(inst, p1, p2)
            assert np.array_equal(c1[:cut], p1[:cut])
            first_new = next(city for city in p2 if city not in set(p1[:cut].tolist()))
            assert c1[cut] == first_new


@pytest.mark.parametrize("op", [cowgc, cowlrgc])
def test_worst_gene_identical_parents(op, fig2, rng):
    p = rng.permutation(9)
    c1, c2 = op(fig2, p, p)
    assert np.array_equal(c1, p) and np.array_equal(c2, p)


# =====================================
# COLLISION
# =====================================

def test_collision_identical_parents(fig2, rng):
    p = rng.permutation(9)
    c1, c2 = collision(fig2, p, p, rng)
    assert np.array_equal(c1, p) and np.array_equal(c2, p)


def _oracle_collision(inst, p1, p2, v1, v2):
    m1, m2 = gene_masses(inst, p1), gene_masses(inst, p2)
    keep1, keep2 = [], []
    for i in range(len(p1)):
        total = m1[i] + m2[i]
        if total == 0:
            a = b = 0.0
        else:
            a = ((m1[i] - m2[i]) / total) * v1 + (2 * m2[i] / total) * v2
            b = (2 * m1[i] / total) * v1 - ((m1[i] - m2[i]) / total) * v2
        a = 0.0 if abs(a) <= 1e-12 else a
        b = 0.0 if abs(b) <= 1e-12 else b
        keep1.append(a <= 0)
        keep2.append(b >= 0)

    def build(parent, donor, keep):
        kept = {int(parent[i]) for i in range(len(parent)) if keep[i]}
        fill = iter(int(c) for c in donor if int(c) not in kept)
        return [int(parent[i]) if keep[i] else next(fill) for i in range(len(parent))]

    return build(p1, p2, keep1), build(p2, p1, keep2), keep1


def test_collision_matches_recomputation(fig2):
    for seed in range(50):
        rng = np.random.default_rng(seed)
        p1, p2 = rng.permutation(9), rng.permutation(9)
        twin = np.random.default_rng(seed)
        twin.permutation(9), twin.permutation(9)
        v1 = twin.uniform(1, tour_length(fig2, p1))
        v2 = -twin.uniform(1, tour_length(fig2, p2))

        c1, c2 = collision(fig2, p1, p2, rng)
        e1, e2, keep1 = _oracle_collision(fig2, p1, p2, v1, v2)
        assert c1.tolist() == e1
        assert c2.tolist() == e2
        for i, kept in enumerate(keep1):
            if kept:
                assert c1[i] == p1[i]


def test_collision_draws_exactly_two(fig2, rng):
    p1, p2 = rng.permutation(9), rng.permutation(9)
    a = np.random.default_rng(5)
    b = np.random.default_rng(5)
    collision(fig2, p1, p2, a)
    b.uniform(), b.uniform()
    assert _state(a) == _state(b)


@pytest.mark.parametrize("kind", [CrossoverKind.COWGC, CrossoverKind.COWLRGC])
def test_computed_cuts_draw_nothing(kind, fig2):
    rng = np.random.default_rng(1)
    before = _state(rng)
    apply_crossover(kind, fig2, *EXAMPLE1, rng)
    assert _state(rng) == before


# =====================================
# CLOSURE
# =====================================

def test_permutation_closure(instances_by_size):
    rng = np.random.default_rng(31337)
    for _ in range(10_000):
        n = int(rng.integers(4, 101))
        inst = instances_by_size[n]
        p1, p2 = rng.permutation(n), rng.permutation(n)
        for kind in CrossoverKind:
            for child in apply_crossover(kind, inst, p1, p2, rng):
                assert is_permutation(child, n), (kind, n)


def test_identical_parents_closure(instances_by_size):
    rng = np.random.default_rng(4242)
    for _ in range(500):
        n = int(rng.integers(4, 101))
        p = rng.permutation(n)
        for kind in CrossoverKind:
            c1, c2 = apply_crossover(kind, instances_by_size[n], p, p, rng)
            assert np.array_equal(c1, p) and np.array_equal(c2, p), kind


def test_parse_kind():
    assert parse_kind("COLLISION") is CrossoverKind.COLLISION
    assert parse_kind(" pmx ") is CrossoverKind.PMX
    with pytest.raises(ValueError, match="unknown crossover"):
        parse_kind("ox")
