import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_POOL, LOG_EVERY
from utils.crossover_handler import CrossoverKind, apply_crossover, parse_kind
from utils.tsplib_handler import TspInstance
from utils.tour_handler import Individual, Tour, make_individual

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Invalid GA configuration, strategy or benchmark plan"""


# =====================================
# STRATEGIES AND CONFIG
# =====================================

class StrategyMode(str, Enum):
    SINGLE = "single"
    SBC = "sbc"
    SAC = "sac"


@dataclass(frozen=True)
class Strategy:
    mode: StrategyMode
    pool: Tuple[CrossoverKind, ...]

    def __post_init__(self):
        if not self.pool:
            raise ConfigError("crossover pool is empty")
        if len(set(self.pool)) != len(self.pool):
            raise ConfigError(f"crossover pool has duplicates: {[k.value for k in self.pool]}")
        if self.mode == StrategyMode.SINGLE and len(self.pool) != 1:
            raise ConfigError("a single-operator strategy takes exactly one crossover")

    @property
    def label(self) -> str:
        if self.mode == StrategyMode.SINGLE:
            return self.pool[0].value
        return self.mode.value

    @classmethod
    def single(cls, kind: CrossoverKind) -> "Strategy":
        return cls(StrategyMode.SINGLE, (kind,))


def parse_strategy(name: str, pool: Optional[Sequence[str]] = None) -> Strategy:
    """'sbc' / 'sac' take a pool of crossover names, anything else is one operator"""
    name = name.strip().lower()
    try:
        if name in (StrategyMode.SBC.value, StrategyMode.SAC.value):
            kinds = tuple(parse_kind(k) for k in (pool or DEFAULT_POOL))
            return Strategy(StrategyMode(name), kinds)
        if pool:
            raise ConfigError(f"--pool only applies to sbc and sac, not {name!r}")
        return Strategy.single(parse_kind(name))
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(str(e)) from None


@dataclass(frozen=True)
class GaConfig:
    population_size: int
    pc: float
    pm: float
    max_generations: int
    strategy: Strategy
    seed: int = 0

    def validate(self) -> "GaConfig":
        if self.population_size < 4:
            raise ConfigError(f"population size must be at least 4, got {self.population_size}")
        if not 0.0 <= self.pc <= 1.0:
            raise ConfigError(f"crossover probability must be in [0, 1], got {self.pc}")
        if not 0.0 <= self.pm <= 1.0:
            raise ConfigError(f"mutation probability must be in [0, 1], got {self.pm}")
        if self.max_generations < 1:
            raise ConfigError(f"generation budget must be at least 1, got {self.max_generations}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a non-negative 64-bit integer, got {self.seed}")
        return self

    @property
    def events_per_generation(self) -> int:
        # half-up rounding; round(.., 9) absorbs float noise such as 0.83 * 100
        return int(math.floor(round(self.pc * self.population_size / 2, 9) + 0.5))


# =====================================
# POPULATION AND RECORDS
# =====================================

@dataclass
class Population:
    """Individuals kept sorted by ascending fitness"""
    members: List[Individual]

    @cached_property
    def tour_keys(self) -> set:
        return {ind.tour.tobytes() for ind in self.members}

    @property
    def best(self) -> Individual:
        return self.members[0]

    @property
    def mean(self) -> float:
        return float(np.mean([ind.fitness for ind in self.members]))

    def __len__(self):
        return len(self.members)


@dataclass
class GenerationRow:
    generation: int
    best: float
    mean: float
    elapsed_ms: int


@dataclass
class RunRecord:
    per_generation: List[GenerationRow]
    best_tour: Tour
    best_fitness: float
    total_ms: int
    operator_invocations: Dict[CrossoverKind, int]
    per_operator_ms: Dict[CrossoverKind, float]


@dataclass
class OperatorStats:
    """Counts and wall time per crossover operator"""
    invocations: Dict[CrossoverKind, int] = field(default_factory=dict)
    elapsed_ms: Dict[CrossoverKind, float] = field(default_factory=dict)

    def run(self, kind, inst, p1, p2, rng):
        start = time.perf_counter()
        children = apply_crossover(kind, inst, p1, p2, rng)
        self.invocations[kind] = self.invocations.get(kind, 0) + 1
        self.elapsed_ms[kind] = self.elapsed_ms.get(kind, 0.0) + (time.perf_counter() - start) * 1000
        return children


def _run_operator(kind, inst, p1, p2, rng, stats):
    if stats is None:
        return apply_crossover(kind, inst, p1, p2, rng)
    return stats.run(kind, inst, p1, p2, rng)


# =====================================
# GA OPERATIONS
# =====================================

def init_population(inst: TspInstance, size: int, rng: np.random.Generator) -> Population:
    """size random permutations, evaluated and sorted"""
    if size < 4:
        raise ConfigError(f"population size must be at least 4, got {size}")
    members = [make_individual(inst, rng.permutation(inst.n)) for _ in range(size)]
    members.sort(key=lambda ind: ind.fitness)
    return Population(members)


def exchange_mutation(tour: Tour, rng: np.random.Generator) -> Tour:
    """Swap the cities at two distinct random positions"""
    if len(tour) < 2:
        raise ValueError("exchange mutation needs at least 2 cities")
    i, j = rng.choice(len(tour), size=2, replace=False)
    mutated = np.array(tour, copy=True)
    mutated[i], mutated[j] = mutated[j], mutated[i]
    return mutated


def sbc_step(inst: TspInstance, p1: Tour, p2: Tour, pool: Sequence[CrossoverKind], population: Population,
             rng: np.random.Generator, stats: Optional[OperatorStats] = None) -> Tuple[Tour, Tour]:
    """
    Select Best Crossover: run every pooled operator on the same parents and
    keep the two fittest children not already in the population.
    """
    if not pool:
        raise ConfigError("crossover pool is empty")
    candidates = []
    for kind in pool:
        candidates.extend(make_individual(inst, child) for child in _run_operator(kind, inst, p1, p2, rng, stats))
    ranked = sorted(candidates, key=lambda ind: ind.fitness)

    chosen = []
    seen = set(population.tour_keys)
    for ind in ranked:
        key = ind.tour.tobytes()
        if key not in seen:
            chosen.append(ind)
            seen.add(key)
            if len(chosen) == 2:
                break
    if len(chosen) < 2:
        logger.debug(f"⚠️ SBC found {len(chosen)} new offspring, topping up with duplicates")
        for ind in ranked:
            if len(chosen) == 2:
                break
            if not any(ind is c for c in chosen):
                chosen.append(ind)
    return chosen[0].tour, chosen[1].tour


def sac_step(inst: TspInstance, p1: Tour, p2: Tour, pool: Sequence[CrossoverKind], rng: np.random.Generator,
             stats: Optional[OperatorStats] = None) -> Tuple[Tour, Tour]:
    """Select Any Crossover: one operator drawn uniformly from the pool"""
    if not pool:
        raise ConfigError("crossover pool is empty")
    kind = pool[int(rng.integers(len(pool)))]
    return _run_operator(kind, inst, p1, p2, rng, stats)


def _offspring(inst, population, strategy, rng, stats):
    size = len(population)
    # draw order: parent 1, parent 2 (redrawn until distinct), then the strategy's own draws
    i = int(rng.integers(size))
    j = int(rng.integers(size))
    while j == i:
        j = int(rng.integers(size))
    p1, p2 = population.members[i].tour, population.members[j].tour
    if strategy.mode == StrategyMode.SBC:
        return sbc_step(inst, p1, p2, strategy.pool, population, rng, stats)
    if strategy.mode == StrategyMode.SAC:
        return sac_step(inst, p1, p2, strategy.pool, rng, stats)
    return stats.run(strategy.pool[0], inst, p1, p2, rng)


def _maybe_mutate(tour, pm, rng):
    if rng.random() < pm:
        return exchange_mutation(tour, rng)
    return tour


def next_generation(inst: TspInstance, population: Population, config: GaConfig,
                    rng: np.random.Generator, stats: OperatorStats) -> Population:
    """One generation: E crossover events, offspring mutation, (mu + lambda) truncation"""
    offspring = []
    for _ in range(config.events_per_generation):
        c1, c2 = _offspring(inst, population, config.strategy, rng, stats)
        c1 = _maybe_mutate(c1, config.pm, rng)
        c2 = _maybe_mutate(c2, config.pm, rng)
        offspring.append(make_individual(inst, c1))
        offspring.append(make_individual(inst, c2))
    if not offspring:
        return population
    # stable sort: incumbents win ties, then offspring in production order
    merged = sorted(population.members + offspring, key=lambda ind: ind.fitness)
    return Population(merged[:config.population_size])


def run_ga(inst: TspInstance, config: GaConfig,
           on_generation: Optional[Callable[[GenerationRow], None]] = None) -> RunRecord:
    """Run the generational loop for exactly config.max_generations generations"""
    config.validate()
    rng = np.random.default_rng(config.seed)
    strategy = config.strategy
    stats = OperatorStats({k: 0 for k in strategy.pool}, {k: 0.0 for k in strategy.pool})

    logger.info(f"🧬 {inst.name}: {strategy.label} pop={config.population_size} pc={config.pc} "
                f"pm={config.pm} generations={config.max_generations} seed={config.seed}")
    start = time.perf_counter()
    population = init_population(inst, config.population_size, rng)
    rows = []

    for generation in range(1, config.max_generations + 1):
        population = next_generation(inst, population, config, rng, stats)
        row = GenerationRow(generation, population.best.fitness, population.mean,
                            int((time.perf_counter() - start) * 1000))
        rows.append(row)
        if on_generation is not None:
            on_generation(row)
        if generation % LOG_EVERY == 0:
            logger.debug(f"gen {generation}: best={row.best:.0f} mean={row.mean:.1f} ({row.elapsed_ms} ms)")

    total_ms = int((time.perf_counter() - start) * 1000)
    best = population.best
    logger.info(f"✅ {inst.name}: {strategy.label} best={best.fitness:.0f} in {total_ms} ms")
    return RunRecord(
        per_generation=rows,
        best_tour=np.array(best.tour),
        best_fitness=best.fitness,
        total_ms=total_ms,
        operator_invocations=dict(stats.invocations),
        per_operator_ms=dict(stats.elapsed_ms),
    )
