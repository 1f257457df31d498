import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from config import BENCH_COLUMNS, CONVERGENCE_COLUMNS, KNOWN_OPTIMA
from utils.ga_handler import ConfigError, GaConfig, RunRecord, Strategy, run_ga
from utils.tsplib_handler import TspInstance, load_instance

logger = logging.getLogger(__name__)


class BenchError(RuntimeError):
    """A benchmark cell failed; the message names the cell"""


def known_optimum(name: str) -> Optional[int]:
    return KNOWN_OPTIMA.get(name)


@dataclass
class BenchPlan:
    instances: List[str]
    strategies: List[Strategy]
    reps: int
    base_seed: int
    pop: int
    pc: float
    pm: float
    generations: int

    def validate(self) -> "BenchPlan":
        if not self.instances:
            raise ConfigError("no instances to benchmark")
        if not self.strategies:
            raise ConfigError("no strategies to benchmark")
        if self.reps < 1:
            raise ConfigError(f"reps must be at least 1, got {self.reps}")
        for rep in (0, self.reps - 1):
            self.config(self.strategies[0], rep).validate()
        return self

    def config(self, strategy: Strategy, rep: int) -> GaConfig:
        # rep r always runs with base_seed + r, so adding reps never perturbs earlier cells
        return GaConfig(self.pop, self.pc, self.pm, self.generations, strategy, self.base_seed + rep)


@dataclass
class BenchRow:
    instance: str
    strategy: str
    seed: int
    best: float
    optimum: Optional[int]
    elapsed_ms: int


@dataclass
class CellResult:
    row: BenchRow
    ms_per_generation: float
    invocations: int
    operator_ms: float
    record: RunRecord = field(repr=False)


def convergence_frame(record: RunRecord) -> pd.DataFrame:
    return pd.DataFrame(
        [(r.generation, r.best, r.mean, r.elapsed_ms) for r in record.per_generation],
        columns=CONVERGENCE_COLUMNS,
    )


def write_convergence_csv(record: RunRecord, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    convergence_frame(record).to_csv(path, index=False)
    return path


def run_cell(inst: TspInstance, config: GaConfig) -> CellResult:
    """One seeded run turned into a bench row"""
    record = run_ga(inst, config)
    optimum = known_optimum(inst.name)
    if optimum is not None and record.best_fitness < optimum:
        raise BenchError(f"{inst.name}/{config.strategy.label}/seed {config.seed}: "
                         f"best {record.best_fitness} is below the known optimum {optimum}")
    row = BenchRow(inst.name, config.strategy.label, config.seed, record.best_fitness, optimum, record.total_ms)
    return CellResult(
        row=row,
        ms_per_generation=record.total_ms / config.max_generations,
        invocations=sum(record.operator_invocations.values()),
        operator_ms=sum(record.per_operator_ms.values()),
        record=record,
    )


def _cell_safe(args):
    inst, config = args
    try:
        return run_cell(inst, config)
    except BenchError:
        raise
    except Exception as e:
        raise BenchError(f"cell {inst.name}/{config.strategy.label}/seed {config.seed} failed: {e}") from e


def run_bench(plan: BenchPlan, workers: int = 1, out_dir=None) -> List[CellResult]:
    """
    Run every (instance x strategy x rep) cell.

    Results come back in (instance, strategy, rep) order whatever the worker
    count. With out_dir, each cell's convergence trace is written as
    <instance>_<strategy>_<seed>.csv.
    """
    plan.validate()
    instances = [load_instance(spec) for spec in plan.instances]
    cells = [
        (inst, plan.config(strategy, rep))
        for inst in instances
        for strategy in plan.strategies
        for rep in range(plan.reps)
    ]
    logger.info(f"📊 {len(cells)} cells: {len(instances)} instances x {len(plan.strategies)} strategies x {plan.reps} reps")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_cell_safe, cells))
    else:
        results = [_cell_safe(cell) for cell in cells]

    if out_dir is not None:
        for result in results:
            r = result.row
            path = write_convergence_csv(result.record, Path(out_dir) / f"{r.instance}_{r.strategy}_{r.seed}.csv")
            logger.debug(f"📄 Convergence saved: {path}")
    return results


def bench_frame(results: List[CellResult]) -> pd.DataFrame:
    df = pd.DataFrame([vars(r.row) for r in results], columns=BENCH_COLUMNS)
    df["optimum"] = pd.array(df["optimum"].tolist(), dtype="Int64")
    return df


def write_bench_csv(results: List[CellResult], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    bench_frame(results).to_csv(path, index=False)
    return path


def pivot_best(results: List[CellResult]) -> pd.DataFrame:
    """Mean best per instance x strategy plus an Average row, optimum column last"""
    df = bench_frame(results)
    instance_order = list(dict.fromkeys(df["instance"]))
    strategy_order = list(dict.fromkeys(df["strategy"]))
    table = df.pivot_table(index="instance", columns="strategy", values="best", aggfunc="mean")
    table = table.reindex(index=instance_order, columns=strategy_order)
    table.loc["Average"] = table.mean(axis=0)
    optima = {name: known_optimum(name) for name in instance_order}
    table["optimum"] = pd.array([optima.get(name) for name in table.index], dtype="Int64")
    table.columns.name = None
    return table


def pivot_cost(results: List[CellResult]) -> pd.DataFrame:
    """Per-strategy mean time per generation and operator work per run"""
    df = pd.DataFrame([
        {
            "strategy": r.row.strategy,
            "ms_per_generation": r.ms_per_generation,
            "invocations": r.invocations,
            "operator_ms": r.operator_ms,
        }
        for r in results
    ])
    order = list(dict.fromkeys(df["strategy"]))
    return df.groupby("strategy", sort=False).mean().reindex(order)


def summarize(results: List[CellResult]) -> Dict[str, pd.DataFrame]:
    return {"best": pivot_best(results), "cost": pivot_cost(results)}
