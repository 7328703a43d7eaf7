"""
Hardy Z-function evaluation, zero location and gap statistics on the critical line.

Z(t) is evaluated with the Riemann-Siegel main sum and its first correction
term, vectorised over numpy arrays. Zeros are found by a sign-change scan on a
grid adapted to the local mean spacing, refined by bisection. Scans run in
fixed chunks; the chunk layout depends only on the scan parameters, so serial
and parallel scans produce identical tables.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog
from scipy.integrate import simpson

from rmt_constants import predicted_moment
from zeta_config import (
    DEFAULT_DERIVATIVE_STEP,
    DEFAULT_GRID_FACTOR,
    DEFAULT_MOMENT_MAX_PANELS,
    DEFAULT_MOMENT_PANELS,
    DEFAULT_PRIME_CUTOFF,
    DEFAULT_REFINE_TOL,
    DEFAULT_T_LOWER,
)
from zeta_errors import (
    DomainError,
    InsufficientZerosError,
    OutOfRegimeError,
    PanelBudgetError,
    UnsupportedParameterError,
)

logger = structlog.get_logger(__name__)

TWO_PI = 2.0 * math.pi
MIN_HEIGHT = 10.0
COUNT_REGIME = TWO_PI * math.e

# Riemann-Siegel error with one correction term is below 0.053 t^{-5/4}
REMAINDER_BOUND = 0.053

DEFAULT_CHUNK_POINTS = 2048
ROW_BLOCK = 4096
RESCAN_REFINEMENT = 10
HISTOGRAM_WIDTH = 0.25
HISTOGRAM_LIMIT = 4.0
_C0_GUARD = 1e-4


@dataclass(frozen=True)
class ZeroTable:
    ordinates: Tuple[float, ...]
    t_min: float
    t_max: float
    refine_tolerance: float
    grid_factor: float = DEFAULT_GRID_FACTOR
    expected_count: float = 0.0
    allowance: float = 0.0
    suspect_intervals: Tuple[Tuple[float, float], ...] = ()
    warnings: Tuple[str, ...] = ()

    @property
    def range(self) -> Tuple[float, float]:
        return self.t_min, self.t_max

    @property
    def count(self) -> int:
        return len(self.ordinates)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.ordinates, dtype=np.float64)


@dataclass(frozen=True)
class GapStatistics:
    normalized_gaps: Tuple[float, ...]
    max_gap: float
    mean_gap: float
    local_gaps: Tuple[float, ...] = ()
    max_local_gap: float = 0.0
    mean_local_gap: float = 0.0
    histogram: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "count": len(self.normalized_gaps),
            "max_gap": self.max_gap,
            "mean_gap": self.mean_gap,
            "max_local_gap": self.max_local_gap,
            "mean_local_gap": self.mean_local_gap,
            "histogram": dict(self.histogram),
        }


@dataclass(frozen=True)
class EmpiricalMoment:
    k: int
    h: int
    T: float
    integral_value: float
    predicted: float
    ratio: float
    t_lower: float = DEFAULT_T_LOWER
    panels: int = DEFAULT_MOMENT_PANELS

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "h": self.h,
            "T": self.T,
            "t_lower": self.t_lower,
            "panels": self.panels,
            "integral_value": self.integral_value,
            "predicted": self.predicted,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class ChunkTask:
    index: int
    grid: np.ndarray
    refine_tol: float


@dataclass(frozen=True)
class ChunkResult:
    index: int
    zeros: Tuple[float, ...]
    suspects: Tuple[Tuple[float, float], ...]


def _check_regime(t) -> None:
    smallest = float(np.min(t)) if np.size(t) else MIN_HEIGHT
    if smallest < MIN_HEIGHT:
        raise OutOfRegimeError(f"the Riemann-Siegel expansion is used for t >= {MIN_HEIGHT}, got t={smallest}")


def _theta_array(t: np.ndarray) -> np.ndarray:
    return (0.5 * t * np.log(t / TWO_PI) - 0.5 * t - math.pi / 8.0
            + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t ** 3))


def theta(t: float) -> float:
    """Riemann-Siegel theta, (t/2) log(t/2pi) - t/2 - pi/8 + 1/(48t) + 7/(5760t^3)"""
    _check_regime(t)
    return float(_theta_array(np.float64(t)))


def _c0_raw(p: np.ndarray) -> np.ndarray:
    return np.cos(TWO_PI * (p * p - p - 1.0 / 16.0)) / np.cos(TWO_PI * p)


def _c0(p: np.ndarray) -> np.ndarray:
    """First Riemann-Siegel coefficient; the removable singularities at p = 1/4, 3/4 are averaged over"""
    denominator = np.cos(TWO_PI * p)
    near = np.abs(denominator) < _C0_GUARD
    value = np.cos(TWO_PI * (p * p - p - 1.0 / 16.0)) / np.where(near, 1.0, denominator)
    if np.any(near):
        value[near] = 0.5 * (_c0_raw(p[near] + _C0_GUARD) + _c0_raw(p[near] - _C0_GUARD))
    return value


def _riemann_siegel_block(t: np.ndarray) -> np.ndarray:
    a = np.sqrt(t / TWO_PI)
    n_main = np.floor(a).astype(np.int64)
    width = int(n_main.max())

    n = np.arange(1, width + 1, dtype=np.float64)
    phase = _theta_array(t)[:, None] - t[:, None] * np.log(n)[None, :]
    terms = np.cos(phase) / np.sqrt(n)[None, :]
    terms[n[None, :] > n_main[:, None]] = 0.0
    main = 2.0 * terms.sum(axis=1)

    sign = np.where(n_main % 2 == 1, 1.0, -1.0)
    correction = sign * _c0(a - n_main) / np.sqrt(a)
    return main + correction


def _z_unchecked(t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = np.empty_like(t)
    for start in range(0, t.size, ROW_BLOCK):
        out[start:start + ROW_BLOCK] = _riemann_siegel_block(t[start:start + ROW_BLOCK])
    return out


def z_values(t: Sequence[float]) -> np.ndarray:
    """Z at every point of t"""
    t = np.asarray(t, dtype=np.float64)
    _check_regime(t)
    return _z_unchecked(t)


def z_eval(t: float) -> float:
    """Hardy Z(t) for t >= 10"""
    _check_regime(t)
    return float(_z_unchecked(t)[0])


def z_error_bound(t: float) -> float:
    return REMAINDER_BOUND * t ** -1.25


def count_main_term(T: float) -> float:
    """(T/2pi) log(T/(2pi e)), the Riemann-von Mangoldt main term"""
    if T < COUNT_REGIME:
        raise DomainError(f"the zero-count main term needs T >= 2*pi*e, got {T}")
    return T / TWO_PI * math.log(T / COUNT_REGIME)


def expected_zero_count(t_min: float, t_max: float) -> float:
    if t_max <= COUNT_REGIME:
        return 0.0
    return count_main_term(t_max) - count_main_term(max(t_min, COUNT_REGIME))


def count_allowance(T: float) -> float:
    return 2.0 + 2.0 * math.log(T) / math.pi


def scan_grid(t_min: float, t_max: float, grid_factor: float) -> np.ndarray:
    """Points t_{i+1} = t_i + grid_factor * 2pi / log t_i, closed at t_max"""
    if not (math.isfinite(t_min) and math.isfinite(t_max)):
        raise DomainError(f"scan bounds must be finite, got [{t_min}, {t_max}]")
    points = [t_min]
    t = t_min
    step_scale = grid_factor * TWO_PI
    while True:
        t = t + step_scale / math.log(t)
        if t >= t_max:
            break
        points.append(t)
    points.append(t_max)
    return np.asarray(points, dtype=np.float64)


def _bisect(lo: np.ndarray, hi: np.ndarray, refine_tol: float) -> np.ndarray:
    """Vectorised bisection of sign-change brackets down to refine_tol"""
    if lo.size == 0:
        return lo
    lo = lo.copy()
    hi = hi.copy()
    z_lo = _z_unchecked(lo)

    width = float(np.max(hi - lo))
    iterations = max(0, math.ceil(math.log2(width / refine_tol))) if width > refine_tol else 0
    for _ in range(iterations):
        middle = 0.5 * (lo + hi)
        z_middle = _z_unchecked(middle)
        same = np.signbit(z_middle) == np.signbit(z_lo)
        lo = np.where(same, middle, lo)
        z_lo = np.where(same, z_middle, z_lo)
        hi = np.where(same, hi, middle)
    return 0.5 * (lo + hi)


def _sign_changes(values: np.ndarray) -> np.ndarray:
    signs = np.signbit(values)
    return np.flatnonzero(signs[:-1] != signs[1:])


def _suspects(grid: np.ndarray, values: np.ndarray) -> List[Tuple[float, float]]:
    """Local minima of |Z| between neighbours of the same sign, where a close pair may hide"""
    if values.size < 3:
        return []
    signs = np.signbit(values)
    magnitude = np.abs(values)
    inner = np.arange(1, values.size - 1)
    mask = ((signs[inner - 1] == signs[inner]) & (signs[inner] == signs[inner + 1])
            & (magnitude[inner] < magnitude[inner - 1]) & (magnitude[inner] < magnitude[inner + 1]))
    return [(float(grid[i - 1]), float(grid[i + 1])) for i in inner[mask]]


def _scan_chunk(task: ChunkTask) -> ChunkResult:
    values = _z_unchecked(task.grid)
    brackets = _sign_changes(values)
    zeros = _bisect(task.grid[brackets], task.grid[brackets + 1], task.refine_tol)
    result = ChunkResult(task.index, tuple(float(z) for z in zeros), tuple(_suspects(task.grid, values)))
    logger.debug("chunk_scanned", chunk=task.index, points=task.grid.size, zeros=len(result.zeros))
    return result


def _chunk_tasks(grid: np.ndarray, chunk_points: int, refine_tol: float) -> List[ChunkTask]:
    # consecutive chunks share one boundary point, so each grid pair is in exactly one chunk
    tasks = []
    start = 0
    index = 0
    while start < grid.size - 1:
        stop = min(start + chunk_points, grid.size - 1)
        tasks.append(ChunkTask(index, grid[start:stop + 1], refine_tol))
        start = stop
        index += 1
    return tasks


def _merge(zeros: Sequence[float], refine_tol: float) -> List[float]:
    """Sort and drop zeros closer than 10 * refine_tol to their predecessor"""
    merged: List[float] = []
    for t in sorted(zeros):
        if merged and t - merged[-1] <= 10.0 * refine_tol:
            continue
        merged.append(t)
    return merged


def _checkpoint_signature(t_min: float, t_max: float, grid_factor: float,
                          refine_tol: float, chunk_points: int) -> str:
    return (f"# t_min={t_min!r} t_max={t_max!r} grid_factor={grid_factor!r} "
            f"refine_tol={refine_tol!r} chunk_points={chunk_points}")


def load_checkpoint(path: str, signature: str) -> Dict[int, List[float]]:
    """Completed chunks of an earlier scan with the same parameters"""
    if not os.path.exists(path):
        return {}

    with open(path) as handle:
        header = handle.readline().rstrip("\n")
    if header != signature:
        logger.warning("checkpoint_ignored", path=path, reason="scan parameters differ")
        return {}

    rows = pd.read_csv(path, comment="#", dtype=str)
    done = {int(chunk) for chunk, t in zip(rows["chunk"], rows["t"]) if t == "done"}
    completed: Dict[int, List[float]] = {chunk: [] for chunk in done}
    for chunk, t in zip(rows["chunk"], rows["t"]):
        if t != "done" and int(chunk) in done:
            completed[int(chunk)].append(float(t))

    logger.info("checkpoint_resumed", path=path, chunks=len(completed))
    return completed


def _start_checkpoint(path: str, signature: str) -> None:
    with open(path, "w") as handle:
        handle.write(signature + "\n")
        handle.write("chunk,t\n")


def _append_checkpoint(path: str, result: ChunkResult) -> None:
    rows = [(result.index, repr(t)) for t in result.zeros] + [(result.index, "done")]
    pd.DataFrame(rows, columns=["chunk", "t"]).to_csv(path, mode="a", header=False, index=False)


def _run_chunks(tasks: List[ChunkTask], threads: int):
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            yield from pool.map(_scan_chunk, tasks)
    else:
        yield from map(_scan_chunk, tasks)


def _rescan(interval: Tuple[float, float], grid_factor: float, refine_tol: float) -> List[float]:
    left, right = interval
    step = grid_factor * TWO_PI / math.log(left) / RESCAN_REFINEMENT
    points = max(3, math.ceil((right - left) / step) + 1)
    grid = np.linspace(left, right, points)
    values = _z_unchecked(grid)
    brackets = _sign_changes(values)
    return [float(z) for z in _bisect(grid[brackets], grid[brackets + 1], refine_tol)]


def find_zeros(t_min: float, t_max: float, grid_factor: float = DEFAULT_GRID_FACTOR,
               refine_tol: float = DEFAULT_REFINE_TOL, threads: int = 1,
               checkpoint: Optional[str] = None,
               chunk_points: int = DEFAULT_CHUNK_POINTS) -> ZeroTable:
    """
    Locate the sign-change zeros of Z on [t_min, t_max].

    The zero count is audited against the Riemann-von Mangoldt main term. On a
    deficit, suspect intervals (close pairs the grid may have stepped over) are
    rescanned at a tenth of the step; a discrepancy beyond 2 + 2 log(T)/pi
    is reported in ``warnings``.
    """
    if not (math.isfinite(t_min) and math.isfinite(t_max)):
        raise DomainError(f"scan bounds must be finite, got [{t_min}, {t_max}]")
    if t_min < MIN_HEIGHT:
        raise OutOfRegimeError(f"zero scans start at t >= {MIN_HEIGHT}, got {t_min}")
    if t_max < t_min:
        raise DomainError(f"t_max must not be below t_min, got [{t_min}, {t_max}]")
    if not 0.0 < grid_factor <= 0.5:
        raise DomainError(f"grid_factor must lie in (0, 0.5], got {grid_factor}")
    if refine_tol <= 0:
        raise DomainError(f"refine_tol must be positive, got {refine_tol}")

    expected = expected_zero_count(t_min, t_max)
    allowance = count_allowance(max(t_max, MIN_HEIGHT))
    if t_max == t_min:
        return ZeroTable((), t_min, t_max, refine_tol, grid_factor, expected, allowance)

    grid = scan_grid(t_min, t_max, grid_factor)
    tasks = _chunk_tasks(grid, chunk_points, refine_tol)

    completed: Dict[int, List[float]] = {}
    signature = _checkpoint_signature(t_min, t_max, grid_factor, refine_tol, chunk_points)
    if checkpoint:
        completed = load_checkpoint(checkpoint, signature)
        if not completed:
            _start_checkpoint(checkpoint, signature)

    zeros: List[float] = []
    suspects: List[Tuple[float, float]] = []
    for chunk in sorted(completed):
        zeros.extend(completed[chunk])

    pending = [task for task in tasks if task.index not in completed]
    for result in _run_chunks(pending, threads):
        zeros.extend(result.zeros)
        suspects.extend(result.suspects)
        if checkpoint:
            _append_checkpoint(checkpoint, result)
    if completed:
        # resumed chunks carry no suspect list; recover it from the grid
        for task in tasks:
            if task.index in completed:
                suspects.extend(_suspects(task.grid, _z_unchecked(task.grid)))

    zeros = _merge(zeros, refine_tol)
    logger.info("scan_complete", t_min=t_min, t_max=t_max, zeros=len(zeros),
                expected=round(expected, 3), chunks=len(tasks), threads=threads)

    if len(zeros) < math.floor(expected) and suspects:
        logger.info("close_pair_rescan", suspects=len(suspects), deficit=math.floor(expected) - len(zeros))
        recovered: List[float] = []
        for interval in sorted(set(suspects)):
            recovered.extend(_rescan(interval, grid_factor, refine_tol))
        zeros = _merge(zeros + recovered, refine_tol)

    warnings: List[str] = []
    discrepancy = len(zeros) - expected
    if abs(discrepancy) > allowance:
        message = (f"zero count {len(zeros)} differs from the main term {expected:.3f} "
                   f"by more than {allowance:.3f}")
        logger.warning("zero_count_discrepancy", count=len(zeros), expected=expected, allowance=allowance)
        warnings.append(message)

    return ZeroTable(
        ordinates=tuple(zeros),
        t_min=t_min,
        t_max=t_max,
        refine_tolerance=refine_tol,
        grid_factor=grid_factor,
        expected_count=expected,
        allowance=allowance,
        suspect_intervals=tuple(sorted(set(suspects))),
        warnings=tuple(warnings),
    )


def normalize_gaps(ordinates: Sequence[float], gaps: Optional[Sequence[float]] = None,
                   local_density: bool = False) -> np.ndarray:
    """(t_{n+1} - t_n) / (2pi / log t_n), or with log(t_n / 2pi) when local_density is set"""
    t_n = np.asarray(ordinates, dtype=np.float64)
    if gaps is None:
        gaps = np.diff(t_n)
        t_n = t_n[:-1]
    gaps = np.asarray(gaps, dtype=np.float64)
    scale = np.log(t_n / TWO_PI) if local_density else np.log(t_n)
    return gaps * scale / TWO_PI


def gap_histogram(normalized: np.ndarray) -> Dict[str, int]:
    edges = np.arange(0.0, HISTOGRAM_LIMIT + HISTOGRAM_WIDTH / 2, HISTOGRAM_WIDTH)
    counts, _ = np.histogram(normalized[normalized < HISTOGRAM_LIMIT], bins=edges)
    histogram = {f"[{lo:.2f},{hi:.2f})": int(c) for lo, hi, c in zip(edges[:-1], edges[1:], counts)}
    histogram[f">={HISTOGRAM_LIMIT:.2f}"] = int(np.count_nonzero(normalized >= HISTOGRAM_LIMIT))
    return histogram


def gap_stats(zeros: ZeroTable) -> GapStatistics:
    if zeros.count < 2:
        raise InsufficientZerosError(f"gap statistics need at least two zeros, got {zeros.count}")

    ordinates = zeros.as_array()
    normalized = normalize_gaps(ordinates)
    local = normalize_gaps(ordinates, local_density=True)
    return GapStatistics(
        normalized_gaps=tuple(normalized.tolist()),
        max_gap=float(normalized.max()),
        mean_gap=float(normalized.mean()),
        local_gaps=tuple(local.tolist()),
        max_local_gap=float(local.max()),
        mean_local_gap=float(local.mean()),
        histogram=gap_histogram(normalized),
    )


def zeros_frame(zeros: ZeroTable) -> pd.DataFrame:
    """index, t, gap, r per zero; the last zero has no gap"""
    ordinates = zeros.as_array()
    gaps = np.full(ordinates.size, np.nan)
    ratios = np.full(ordinates.size, np.nan)
    if ordinates.size >= 2:
        gaps[:-1] = np.diff(ordinates)
        ratios[:-1] = normalize_gaps(ordinates)
    return pd.DataFrame({
        "index": np.arange(1, ordinates.size + 1),
        "t": ordinates,
        "gap": gaps,
        "r": ratios,
    })


def empirical_moment(k: int, h: int, T: float, panels: int = DEFAULT_MOMENT_PANELS,
                     t_lower: float = DEFAULT_T_LOWER,
                     max_panels: int = DEFAULT_MOMENT_MAX_PANELS,
                     derivative_step: float = DEFAULT_DERIVATIVE_STEP,
                     prime_cutoff: int = DEFAULT_PRIME_CUTOFF) -> EmpiricalMoment:
    """
    Composite Simpson estimate of int_{t_lower}^T |Z|^{2k-2h} |Z'|^{2h} dt.

    Z' is a central difference with step ``derivative_step``. The prediction is
    a(k) b(h,k) T (log T)^{k^2+2h}; the ratio is informational.
    """
    if not (math.isfinite(T) and math.isfinite(t_lower)):
        raise DomainError(f"integration limits must be finite, got [{t_lower}, {T}]")
    if not 1 <= k <= 3:
        raise UnsupportedParameterError(f"empirical moments are computed for 1 <= k <= 3, got {k}")
    if not 0 <= h <= k:
        raise DomainError(f"h must lie in [0, k], got h={h}, k={k}")
    if t_lower < MIN_HEIGHT:
        raise OutOfRegimeError(f"moment integrals start at t >= {MIN_HEIGHT}, got {t_lower}")
    if T <= t_lower:
        raise DomainError(f"T must exceed the lower limit {t_lower}, got {T}")
    if panels < 2:
        raise DomainError(f"panels must be at least 2, got {panels}")

    panels += panels % 2
    if panels > max_panels:
        raise PanelBudgetError(f"{panels} panels exceed the budget of {max_panels}")

    grid = np.linspace(t_lower, T, panels + 1)
    integrand = np.abs(_z_unchecked(grid)) ** (2 * k - 2 * h)
    if h:
        upper = _z_unchecked(grid + derivative_step)
        lower = _z_unchecked(grid - derivative_step)
        derivative = (upper - lower) / (2 * derivative_step)
        integrand = integrand * np.abs(derivative) ** (2 * h)

    value = float(simpson(integrand, x=grid))
    predicted = predicted_moment(k, h, T, prime_cutoff)
    logger.debug("empirical_moment", k=k, h=h, T=T, panels=panels, value=value, predicted=predicted)
    return EmpiricalMoment(k, h, T, value, predicted, value / predicted, t_lower, panels)
