#!/usr/bin/env python3
"""
TSP Crossover Lab
Genetic algorithm for TSPLIB instances with the worst-gene, collision and
multi-operator crossover strategies.

  python main.py solve --instance assets/tsplib/eil51.tsp --strategy collision --seed 7 --out output/eil51.csv
  python main.py bench --instances assets/tsplib/eil51.tsp assets/tsplib/berlin52.tsp --strategies sbc,sac,collision,pmx,modified --reps 5 --csv output/bench.csv
  python main.py eval --instance :figure2 --tour tour.tour
  python main.py info --instance assets/tsplib/a280.tsp
"""

import argparse
import logging
import sys
from pathlib import Path

from config import GENERATIONS, PC, PM, POP_SIZE, PRESETS, SEED
from utils.bench_handler import BenchError, BenchPlan, known_optimum, run_bench, summarize, write_bench_csv, write_convergence_csv
from utils.ga_handler import ConfigError, GaConfig, parse_strategy, run_ga
from utils.requirements_checker import check_requirements
from utils.tour_handler import TourError, tour_length, validate_tour
from utils.tsplib_handler import TsplibError, load_instance, parse_tour, write_tour

logger = logging.getLogger("tsp_lab")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_IO = 4
EXIT_TOUR = 5

STRATEGY_CHOICES = ["modified", "pmx", "cowgc", "cowlrgc", "collision", "sbc", "sac"]


def _format_length(value):
    value = float(value)
    return str(int(value)) if value.is_integer() else f"{value:.3f}"


def _split_list(value):
    return [item for item in value.replace(",", " ").split() if item]


def _ga_params(args):
    """Preset first, then explicit flags, then config.py defaults"""
    preset = PRESETS.get(args.preset, {}) if args.preset else {}
    defaults = {"pop": POP_SIZE, "pc": PC, "pm": PM, "generations": GENERATIONS}
    return {
        key: getattr(args, key) if getattr(args, key) is not None else preset.get(key, default)
        for key, default in defaults.items()
    }


# =====================================
# SUBCOMMANDS
# =====================================

def cmd_solve(args):
    if not check_requirements([args.instance], [args.out, args.tour_out]):
        return EXIT_IO
    inst = load_instance(args.instance)
    params = _ga_params(args)
    strategy = parse_strategy(args.strategy, _split_list(args.pool) if args.pool else None)
    config = GaConfig(params["pop"], params["pc"], params["pm"], params["generations"], strategy, args.seed).validate()

    record = run_ga(inst, config)

    if args.out:
        path = write_convergence_csv(record, args.out)
        logger.info(f"📄 Convergence saved: {path}")
    if args.tour_out:
        path = Path(args.tour_out)
        path.write_text(write_tour(record.best_tour, inst.name), encoding="utf-8")
        logger.info(f"📄 Best tour saved: {path}")
    print(_format_length(record.best_fitness))
    return EXIT_OK


def cmd_bench(args):
    if not check_requirements(args.instances, [args.csv]):
        return EXIT_IO
    params = _ga_params(args)
    pool = _split_list(args.pool) if args.pool else None
    strategies = [
        parse_strategy(name, pool if name in ("sbc", "sac") else None)
        for name in _split_list(args.strategies)
    ]
    plan = BenchPlan(args.instances, strategies, args.reps, args.base_seed,
                     params["pop"], params["pc"], params["pm"], params["generations"])

    results = run_bench(plan, workers=args.workers, out_dir=args.out_dir)

    if args.csv:
        path = write_bench_csv(results, args.csv)
        logger.info(f"📄 Bench rows saved: {path}")
    tables = summarize(results)
    print(tables["best"].to_string(float_format=lambda x: f"{x:.1f}"))
    print()
    print(tables["cost"].to_string(float_format=lambda x: f"{x:.2f}"))
    return EXIT_OK


def cmd_eval(args):
    inst = load_instance(args.instance)
    tour = parse_tour(Path(args.tour).read_text(encoding="utf-8"))
    tour = validate_tour(tour, inst.n)
    print(_format_length(tour_length(inst, tour)))
    return EXIT_OK


def cmd_info(args):
    inst = load_instance(args.instance)
    print(f"name: {inst.name}")
    print(f"n: {inst.n}")
    print(f"weight_kind: {inst.weight_kind.value}")
    optimum = known_optimum(inst.name)
    if optimum is not None:
        print(f"optimum: {optimum}")
    return EXIT_OK


# =====================================
# ARGUMENTS
# =====================================

def _add_ga_flags(p):
    p.add_argument("--preset", choices=sorted(PRESETS), help="experiment preset; explicit flags override it")
    p.add_argument("--pop", type=int, help=f"population size (default {POP_SIZE})")
    p.add_argument("--generations", type=int, help=f"generation budget (default {GENERATIONS})")
    p.add_argument("--pc", type=float, help=f"crossover probability (default {PC})")
    p.add_argument("--pm", type=float, help=f"mutation probability (default {PM})")
    p.add_argument("--pool", help="crossovers for sbc/sac, comma separated (default cowgc,cowlrgc,collision)")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(description="Genetic algorithm crossover lab for TSPLIB instances")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common], help="run the GA once")
    solve.add_argument("--instance", required=True, help="TSPLIB file, :figure2 or :random:N[:SEED]")
    solve.add_argument("--strategy", default="sbc", choices=STRATEGY_CHOICES)
    solve.add_argument("--seed", type=int, default=SEED)
    solve.add_argument("--out", help="convergence CSV path")
    solve.add_argument("--tour-out", help="best tour in TSPLIB .tour format")
    _add_ga_flags(solve)
    solve.set_defaults(func=cmd_solve)

    bench = sub.add_parser("bench", parents=[common], help="sweep instances x strategies x reps")
    bench.add_argument("--instances", nargs="+", required=True)
    bench.add_argument("--strategies", default="sbc,sac,collision,pmx,modified",
                       help="comma separated, from " + ",".join(STRATEGY_CHOICES))
    bench.add_argument("--reps", type=int, default=1)
    bench.add_argument("--base-seed", type=int, default=SEED)
    bench.add_argument("--csv", help="summary CSV path")
    bench.add_argument("--out-dir", help="directory for per-cell convergence CSVs")
    bench.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    _add_ga_flags(bench)
    bench.set_defaults(func=cmd_bench)

    evaluate = sub.add_parser("eval", parents=[common], help="length of a .tour file")
    evaluate.add_argument("--instance", required=True)
    evaluate.add_argument("--tour", required=True)
    evaluate.set_defaults(func=cmd_eval)

    info = sub.add_parser("info", parents=[common], help="describe an instance")
    info.add_argument("--instance", required=True)
    info.set_defaults(func=cmd_info)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        return args.func(args)
    except TourError as e:
        logger.error(f"❌ Invalid tour: {e}")
        return EXIT_TOUR
    except TsplibError as e:
        logger.error(f"❌ Parse failure: {e}")
        return EXIT_PARSE
    except ConfigError as e:
        logger.error(f"❌ Bad configuration: {e}")
        return EXIT_USAGE
    except BenchError as e:
        logger.error(f"❌ Bench aborted: {e}")
        return EXIT_PARSE if isinstance(e.__cause__, TsplibError) else EXIT_IO
    except OSError as e:
        logger.error(f"❌ I/O failure: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
