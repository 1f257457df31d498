from pathlib import Path

# =====================================

ASSETS = Path("assets")
TSPLIB_DIR = ASSETS / "tsplib"
OUTPUT = Path("output")
TSPLIB_URL = "http://comopt.ifi.uni-heidelberg.de/software/TSPLIB95/tsp"

# -- GA defaults (first experiment set) --
POP_SIZE = 100
PC = 0.83
PM = 0.02
GENERATIONS = 2000
SEED = 0
DEFAULT_POOL = ["cowgc", "cowlrgc", "collision"]
LOG_EVERY = 100  # generations between DEBUG convergence lines

# Experiment presets; explicit CLI flags override individual fields
PRESETS = {
    "first-083": {"pop": 100, "pc": 0.83, "pm": 0.02, "generations": 2000},
    "first-092": {"pop": 100, "pc": 0.92, "pm": 0.02, "generations": 2000},
    "second-200": {"pop": 200, "pc": 1.0, "pm": 0.0, "generations": 8000},
    "second-100": {"pop": 100, "pc": 1.0, "pm": 0.0, "generations": 8000},
}

# -- Instances --
FIGURE2_NAME = ":figure2"
RANDOM_PREFIX = ":random"
RANDOM_COORD_MAX = 1000

# Known optimal tour lengths of the benchmark instances
KNOWN_OPTIMA = {
    "rat783": 8806,
    "a280": 2579,
    "u159": 42080,
    "ch130": 6110,
    "bier127": 118282,
    "kroA100": 21282,
    "pr76": 108159,
    "berlin52": 7542,
    "att48": 10628,
    "eil51": 426,
    "pr144": 58537,
}

# -- Collision crossover --
ZERO_CLAMP = 1e-12

# -- CSV headers --
CONVERGENCE_COLUMNS = ["generation", "best", "mean", "elapsed_ms"]
BENCH_COLUMNS = ["instance", "strategy", "seed", "best", "optimum", "elapsed_ms"]
