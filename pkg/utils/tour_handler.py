from dataclasses import dataclass
from typing import Tuple

import numpy as np

from utils.tsplib_handler import TspInstance

# A tour is a 1-D int64 array holding a permutation of 0..n-1
Tour = np.ndarray


class TourError(ValueError):
    """Tour is not a permutation of the instance's cities"""


def validate_tour(tour, n: int) -> Tour:
    """Check that tour is a permutation of 0..n-1 and return it as an int array"""
    tour = np.asarray(tour, dtype=np.int64)
    if tour.ndim != 1 or len(tour) != n:
        raise TourError(f"tour has {tour.size} cities, instance has {n}")
    out_of_range = tour[(tour < 0) | (tour >= n)]
    if out_of_range.size:
        raise TourError(f"city {int(out_of_range[0]) + 1} is outside 1..{n}")
    counts = np.bincount(tour, minlength=n)
    if np.any(counts != 1):
        missing = np.flatnonzero(counts == 0)
        duplicate = np.flatnonzero(counts > 1)
        raise TourError(f"duplicate cities {(duplicate + 1).tolist()}, missing {(missing + 1).tolist()}")
    return tour


def is_permutation(tour, n: int) -> bool:
    tour = np.asarray(tour)
    return tour.shape == (n,) and np.array_equal(np.sort(tour), np.arange(n))


def tour_length(inst: TspInstance, tour: Tour) -> float:
    """Closed-cycle length, closing edge included"""
    return float(inst.table[tour, np.roll(tour, -1)].sum())


def _path_edges(inst, tour):
    return inst.table[tour[:-1], tour[1:]]


def worst_gene_edge(inst: TspInstance, tour: Tour) -> Tuple[int, float]:
    """
    Position of the city with the longest edge from its left neighbour.

    Only open-path edges are scanned, the closing edge is ignored. Returns
    (i + 1, d(t[i], t[i+1])) for the first maximal edge i.
    """
    edges = _path_edges(inst, tour)
    i = int(np.argmax(edges))
    return i + 1, float(edges[i])


def worst_gene_lr(inst: TspInstance, tour: Tour) -> Tuple[int, float]:
    """
    Interior position whose left + right neighbour distances are largest.

    Endpoints are not candidates; ties go to the lowest position.
    """
    edges = _path_edges(inst, tour)
    sums = edges[:-1] + edges[1:]
    i = int(np.argmax(sums))
    return i + 1, float(sums[i])


def gene_masses(inst: TspInstance, tour: Tour) -> np.ndarray:
    # endpoints only have one neighbour on the open path
    edges = _path_edges(inst, tour).astype(float)
    masses = np.zeros(len(tour))
    masses[:-1] += edges
    masses[1:] += edges
    return masses


@dataclass(frozen=True, eq=False)
class Individual:
    tour: Tour
    fitness: float


def make_individual(inst: TspInstance, tour: Tour) -> Individual:
    tour = np.array(tour, dtype=np.int64)
    tour.setflags(write=False)
    return Individual(tour=tour, fitness=tour_length(inst, tour))
