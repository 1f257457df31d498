import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from config import FIGURE2_NAME, RANDOM_PREFIX, RANDOM_COORD_MAX

logger = logging.getLogger(__name__)


class TsplibError(ValueError):
    """Malformed or unsupported TSPLIB content, optionally tied to a line number"""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class WeightKind(str, Enum):
    EUC_2D = "EUC_2D"
    ATT = "ATT"
    EXPLICIT = "EXPLICIT"


WEIGHT_FORMATS = ("FULL_MATRIX", "UPPER_ROW", "LOWER_DIAG_ROW")

# Upper triangle of the 9-city example table, row i holds d(i, j) for j > i
FIGURE2_UPPER = [
    [2, 8, 5, 20, 6, 25, 30, 4],
    [5, 3, 15, 8, 52, 21, 12],
    [27, 6, 10, 20, 14, 7],
    [8, 4, 17, 60, 2],
    [22, 6, 8, 5],
    [15, 6, 8],
    [10, 9],
    [30],
]


@dataclass(frozen=True, eq=False)
class TspInstance:
    name: str
    n: int
    weight_kind: WeightKind
    coords: Optional[np.ndarray] = None
    matrix: Optional[np.ndarray] = None
    table: np.ndarray = field(init=False, repr=False, default=None)

    def __post_init__(self):
        if self.n < 3:
            raise TsplibError(f"instance needs at least 3 cities, got {self.n}")
        if self.weight_kind == WeightKind.EXPLICIT:
            if self.matrix is None or self.coords is not None:
                raise TsplibError("EXPLICIT instance needs a matrix and no coordinates")
            table = np.asarray(self.matrix, dtype=np.int64)
            if table.shape != (self.n, self.n):
                raise TsplibError(f"matrix shape {table.shape} does not match DIMENSION {self.n}")
            if np.any(np.diag(table) != 0):
                raise TsplibError("matrix diagonal must be zero")
            if not np.array_equal(table, table.T):
                raise TsplibError("matrix is not symmetric")
            if np.any(table < 0):
                raise TsplibError("matrix has negative distances")
        else:
            if self.coords is None or self.matrix is not None:
                raise TsplibError(f"{self.weight_kind.value} instance needs coordinates and no matrix")
            coords = np.asarray(self.coords, dtype=float)
            if coords.shape != (self.n, 2):
                raise TsplibError(f"coordinate shape {coords.shape} does not match DIMENSION {self.n}")
            table = _coordinate_table(coords, self.weight_kind)
        table = np.array(table, dtype=np.int64)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)


def _nint(x):
    return np.floor(x + 0.5).astype(np.int64)


def _coordinate_table(coords, kind):
    if kind == WeightKind.EUC_2D:
        return _nint(cdist(coords, coords))
    # ATT pseudo-Euclidean
    r = np.sqrt(cdist(coords, coords, "sqeuclidean") / 10.0)
    t = _nint(r)
    return np.where(t < r, t + 1, t)


def distance_matrix(inst: TspInstance) -> np.ndarray:
    """Read-only n x n integer distance table"""
    return inst.table


def distance(inst: TspInstance, i: int, j: int) -> int:
    if not (0 <= i < inst.n and 0 <= j < inst.n):
        raise IndexError(f"city index out of range for n={inst.n}: ({i}, {j})")
    return int(inst.table[i, j])


# =====================================
# INSTANCE PARSING
# =====================================

def _split_keyword(line, lineno):
    if ":" not in line:
        raise TsplibError(f"expected 'KEY: value', got {line!r}", lineno)
    key, value = line.split(":", 1)
    return key.strip().upper(), value.strip()


def _is_keyword(token):
    return token[:1].isalpha()


def _dimension(header, lineno):
    if "DIMENSION" not in header:
        raise TsplibError("section appears before DIMENSION", lineno)
    value, dim_line = header["DIMENSION"]
    try:
        n = int(value)
    except ValueError:
        raise TsplibError(f"DIMENSION is not an integer: {value!r}", dim_line) from None
    if n < 3:
        raise TsplibError(f"DIMENSION must be at least 3, got {n}", dim_line)
    return n


def _read_coords(lines, start, n, section_line):
    coords = np.full((n, 2), np.nan)
    count = 0
    i = start
    while count < n:
        if i >= len(lines):
            raise TsplibError(f"dimension mismatch: DIMENSION is {n} but NODE_COORD_SECTION has {count} entries", section_line)
        lineno = i + 1
        tokens = lines[i].split()
        i += 1
        if not tokens:
            continue
        if _is_keyword(tokens[0]):
            raise TsplibError(f"dimension mismatch: DIMENSION is {n} but NODE_COORD_SECTION has {count} entries", lineno)
        if len(tokens) != 3:
            raise TsplibError(f"expected 'id x y', got {lines[i - 1].strip()!r}", lineno)
        try:
            node = int(tokens[0])
            x, y = float(tokens[1]), float(tokens[2])
        except ValueError:
            raise TsplibError(f"non-numeric token in {lines[i - 1].strip()!r}", lineno) from None
        if not 1 <= node <= n:
            raise TsplibError(f"node id {node} outside 1..{n}", lineno)
        if not np.isnan(coords[node - 1, 0]):
            raise TsplibError(f"duplicate node id {node}", lineno)
        coords[node - 1] = (x, y)
        count += 1
    return coords, i


def _read_weights(lines, start, expected, section_line):
    values = []
    i = start
    while len(values) < expected:
        if i >= len(lines):
            raise TsplibError(f"dimension mismatch: expected {expected} weights, found {len(values)}", section_line)
        lineno = i + 1
        tokens = lines[i].split()
        i += 1
        if not tokens:
            continue
        if _is_keyword(tokens[0]):
            raise TsplibError(f"dimension mismatch: expected {expected} weights, found {len(values)}", lineno)
        for token in tokens:
            try:
                weight = float(token)
            except ValueError:
                raise TsplibError(f"non-numeric weight {token!r}", lineno) from None
            if not weight.is_integer():
                raise TsplibError(f"non-integer weight {token!r}", lineno)
            values.append(int(weight))
    if len(values) > expected:
        raise TsplibError(f"dimension mismatch: expected {expected} weights, found more", i)
    return values, i


def _weights_to_matrix(values, n, fmt):
    matrix = np.zeros((n, n), dtype=np.int64)
    if fmt == "FULL_MATRIX":
        return np.array(values, dtype=np.int64).reshape(n, n)
    it = iter(values)
    if fmt == "UPPER_ROW":
        for r in range(n):
            for c in range(r + 1, n):
                matrix[r, c] = matrix[c, r] = next(it)
    else:  # LOWER_DIAG_ROW
        for r in range(n):
            for c in range(r + 1):
                matrix[r, c] = matrix[c, r] = next(it)
    return matrix


def _weight_count(n, fmt):
    return {"FULL_MATRIX": n * n, "UPPER_ROW": n * (n - 1) // 2, "LOWER_DIAG_ROW": n * (n + 1) // 2}[fmt]


def _weight_kind(header, lineno):
    if "EDGE_WEIGHT_TYPE" not in header:
        raise TsplibError("missing EDGE_WEIGHT_TYPE", lineno)
    value, type_line = header["EDGE_WEIGHT_TYPE"]
    try:
        return WeightKind(value.upper())
    except ValueError:
        raise TsplibError(f"unsupported EDGE_WEIGHT_TYPE {value!r}", type_line) from None


def _weight_format(header, lineno):
    if "EDGE_WEIGHT_FORMAT" not in header:
        raise TsplibError("EXPLICIT instance without EDGE_WEIGHT_FORMAT", lineno)
    value, fmt_line = header["EDGE_WEIGHT_FORMAT"]
    if value.upper() not in WEIGHT_FORMATS:
        raise TsplibError(f"unsupported EDGE_WEIGHT_FORMAT {value!r}", fmt_line)
    return value.upper()


def parse_instance(text: str) -> TspInstance:
    """Parse the full contents of a TSPLIB .tsp file (0-based cities)"""
    lines = text.splitlines()
    header = {}
    coords = None
    matrix = None
    i = 0
    while i < len(lines):
        lineno = i + 1
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        if line == "EOF":
            break
        keyword = line.split(":", 1)[0].strip().upper()
        if keyword == "NODE_COORD_SECTION":
            n = _dimension(header, lineno)
            kind = _weight_kind(header, lineno)
            if kind == WeightKind.EXPLICIT:
                raise TsplibError("NODE_COORD_SECTION in an EXPLICIT instance", lineno)
            coords, i = _read_coords(lines, i, n, lineno)
        elif keyword == "EDGE_WEIGHT_SECTION":
            n = _dimension(header, lineno)
            if _weight_kind(header, lineno) != WeightKind.EXPLICIT:
                raise TsplibError("EDGE_WEIGHT_SECTION requires EDGE_WEIGHT_TYPE EXPLICIT", lineno)
            fmt = _weight_format(header, lineno)
            values, i = _read_weights(lines, i, _weight_count(n, fmt), lineno)
            matrix = _weights_to_matrix(values, n, fmt)
        elif keyword == "DISPLAY_DATA_SECTION":
            # display coordinates are not used; skip the n entries
            n = _dimension(header, lineno)
            _, i = _read_coords(lines, i, n, lineno)
        elif keyword.endswith("_SECTION"):
            raise TsplibError(f"unsupported section {keyword}", lineno)
        else:
            key, value = _split_keyword(line, lineno)
            header[key] = (value, lineno)

    last = len(lines)
    n = _dimension(header, last)
    kind = _weight_kind(header, last)
    if kind != WeightKind.EXPLICIT and coords is None:
        raise TsplibError("missing NODE_COORD_SECTION", last)
    if kind == WeightKind.EXPLICIT and matrix is None:
        raise TsplibError("missing EDGE_WEIGHT_SECTION", last)
    if "TYPE" in header and header["TYPE"][0].upper() not in ("TSP",):
        raise TsplibError(f"unsupported TYPE {header['TYPE'][0]!r}", header["TYPE"][1])
    name = header.get("NAME", ("unnamed", None))[0]
    return TspInstance(name=name, n=n, weight_kind=kind, coords=coords, matrix=matrix)


# =====================================
# BUILT-IN INSTANCES
# =====================================

def figure2_instance() -> TspInstance:
    """The 9-city worked example; city label k is index k-1"""
    matrix = np.zeros((9, 9), dtype=np.int64)
    for r, row in enumerate(FIGURE2_UPPER):
        for offset, value in enumerate(row):
            c = r + 1 + offset
            matrix[r, c] = matrix[c, r] = value
    return TspInstance(name="figure2", n=9, weight_kind=WeightKind.EXPLICIT, matrix=matrix)


def random_instance(n: int, seed: int = 0) -> TspInstance:
    """Uniformly random integer cities in [0, RANDOM_COORD_MAX)^2 as EUC_2D"""
    rng = np.random.default_rng(seed)
    coords = rng.integers(0, RANDOM_COORD_MAX, size=(n, 2)).astype(float)
    return TspInstance(name=f"random{n}", n=n, weight_kind=WeightKind.EUC_2D, coords=coords)


def is_reserved(spec) -> bool:
    return str(spec) == FIGURE2_NAME or str(spec).startswith(RANDOM_PREFIX + ":")


def load_instance(spec) -> TspInstance:
    """Resolve ':figure2', ':random:N[:SEED]' or a .tsp file path"""
    spec = str(spec)
    if spec == FIGURE2_NAME:
        return figure2_instance()
    if spec.startswith(RANDOM_PREFIX + ":"):
        parts = spec[len(RANDOM_PREFIX) + 1:].split(":")
        try:
            n = int(parts[0])
            seed = int(parts[1]) if len(parts) > 1 else 0
        except ValueError:
            raise TsplibError(f"bad random instance name {spec!r}, expected :random:N[:SEED]") from None
        if n < 3 or seed < 0:
            raise TsplibError(f"bad random instance name {spec!r}, needs N >= 3 and SEED >= 0")
        return random_instance(n, seed)
    path = Path(spec)
    text = path.read_text(encoding="utf-8")
    inst = parse_instance(text)
    logger.debug(f"📄 Loaded {inst.name} ({inst.n} cities, {inst.weight_kind.value}) from {path}")
    return inst


# =====================================
# TOUR FILES
# =====================================

def write_tour(tour, name: str) -> str:
    """Render a 0-based tour as a TSPLIB .tour file"""
    lines = [f"NAME: {name}", "TYPE: TOUR", f"DIMENSION: {len(tour)}", "TOUR_SECTION"]
    lines.extend(str(int(city) + 1) for city in tour)
    lines.extend(["-1", "EOF"])
    return "\n".join(lines) + "\n"


def parse_tour(text: str) -> np.ndarray:
    """
    Parse a TSPLIB .tour file into a 0-based city array.

    Only the file structure is checked here. Entries are returned as listed,
    so a short list or an out-of-range city (label 0 comes back as -1) is
    left for validate_tour to reject against the instance.
    """
    lines = text.splitlines()
    cities = []
    in_section = False
    done = False
    section_line = None
    for idx, raw in enumerate(lines):
        lineno = idx + 1
        line = raw.strip()
        if not line:
            continue
        if line == "EOF":
            break
        if not in_section:
            if line.split(":", 1)[0].strip().upper() == "TOUR_SECTION":
                in_section = True
                section_line = lineno
                continue
            _split_keyword(line, lineno)  # header values are not used, only checked for shape
            continue
        for token in line.split():
            try:
                city = int(token)
            except ValueError:
                raise TsplibError(f"non-numeric tour entry {token!r}", lineno) from None
            if city == -1:
                done = True
                break
            cities.append(city - 1)
        if done:
            break
    if section_line is None:
        raise TsplibError("missing TOUR_SECTION", len(lines))
    return np.array(cities, dtype=np.int64)
