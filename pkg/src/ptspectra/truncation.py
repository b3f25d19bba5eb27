"""Truncation ladders: follow eigenvalues of H^(M) as M grows and classify them."""
from __future__ import annotations

import enum
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .basis import BasisConfig, hamiltonian_matrix
from .eigen import eigenvalues
from .errors import InvalidInputError, PtSpectraError


class Status(str, enum.Enum):
    CONVERGED_REAL = "converged-real"
    CONVERGED_COMPLEX = "converged-complex"
    NOT_CONVERGED = "not-converged"

    def __str__(self):
        return self.value

    @property
    def converged(self) -> bool:
        return self is not Status.NOT_CONVERGED


@dataclass(frozen=True)
class LadderConfig:
    M_values: tuple[int, ...]
    alpha: float = 1.0
    tol_rel: float = 1e-9
    tol_abs: float = 1e-12
    real_tol: float = 1e-8

    def __post_init__(self):
        ms = tuple(int(m) for m in self.M_values)
        if not ms:
            raise InvalidInputError("ladder needs at least one truncation size")
        if any(m < 1 for m in ms) or any(b <= a for a, b in zip(ms, ms[1:])):
            raise InvalidInputError(f"M_values must be strictly increasing and >= 1: {ms}")
        for name in ("tol_rel", "tol_abs", "real_tol"):
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be positive")
        BasisConfig(ms[0], self.alpha)
        object.__setattr__(self, "M_values", ms)

    @classmethod
    def from_range(cls, start: int, stop: int, step: int, **kw) -> "LadderConfig":
        """Ladder ``start, start+step, ...`` up to and including ``stop``."""
        if step < 1:
            raise InvalidInputError("M step must be >= 1")
        return cls(tuple(range(start, stop + 1, step)), **kw)


def is_real(w: complex, real_tol: float) -> bool:
    return abs(w.imag) <= real_tol * (1 + abs(w))


@dataclass(frozen=True)
class ConvergenceTrace:
    label: int
    points: tuple[tuple[int, complex], ...]
    status: Status
    final_value: complex | None

    @property
    def last(self) -> complex:
        return self.points[-1][1]

    def value_at(self, M: int) -> complex | None:
        for m, w in self.points:
            if m == M:
                return w
        return None


def classify(points, tol_rel: float, tol_abs: float, real_tol: float) -> Status:
    """Two consecutive rung-to-rung steps within tolerance means converged."""
    if len(points) < 3:
        return Status.NOT_CONVERGED
    for k in (-1, -2):
        w, w_prev = points[k][1], points[k - 1][1]
        if abs(w - w_prev) > tol_abs + tol_rel * abs(w):
            return Status.NOT_CONVERGED
    if is_real(points[-1][1], real_tol):
        return Status.CONVERGED_REAL
    return Status.CONVERGED_COMPLEX


def link(previous: Sequence[complex], current: Sequence[complex]) -> list[tuple[int, int]]:
    """Greedy nearest-neighbour matching, smallest distance first.

    Ties are broken by the values themselves, so the result depends only on
    the two value sets and not on the order in which they are supplied.
    """
    prev = np.asarray(previous, dtype=np.complex128)
    cur = np.asarray(current, dtype=np.complex128)
    if prev.size == 0 or cur.size == 0:
        return []
    dist = np.abs(prev[:, None] - cur[None, :])
    ii, jj = np.meshgrid(np.arange(prev.size), np.arange(cur.size), indexing="ij")
    ii, jj, d = ii.ravel(), jj.ravel(), dist.ravel()
    order = np.lexsort(
        (cur.imag[jj], cur.real[jj], prev.imag[ii], prev.real[ii], d)
    )
    used_p = np.zeros(prev.size, bool)
    used_c = np.zeros(cur.size, bool)
    pairs = []
    limit = min(prev.size, cur.size)
    for k in order:
        i, j = ii[k], jj[k]
        if used_p[i] or used_c[j]:
            continue
        used_p[i] = used_c[j] = True
        pairs.append((int(i), int(j)))
        if len(pairs) == limit:
            break
    return pairs


@dataclass
class LadderResult:
    """Trajectories of one ladder plus the rungs where the eigensolver failed."""

    spec: object
    config: LadderConfig
    traces: list[ConvergenceTrace]
    failed_rungs: dict[int, str] = field(default_factory=dict)

    def __iter__(self):
        return iter(self.traces)

    def __len__(self):
        return len(self.traces)

    def __getitem__(self, i):
        return self.traces[i]

    @property
    def converged_real(self) -> list[ConvergenceTrace]:
        return [t for t in self.traces if t.status is Status.CONVERGED_REAL]

    def rows(self):
        """(M, traj, W, status) sorted by M, then trajectory label."""
        out = [(m, t.label, w, t.status) for t in self.traces for m, w in t.points]
        out.sort(key=lambda r: (r[0], r[1]))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("M,traj,re,im,status\n")
        for m, label, w, status in self.rows():
            buf.write(f"{m},{label},{fmt_float(w.real)},{fmt_float(w.imag)},{status}\n")
        return buf.getvalue()


def fmt_float(x: float) -> str:
    """10 significant digits, no locale, no negative zero."""
    if x == 0:
        return "0"
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return format(x, ".10g")


def _rung(spec, M, alpha):
    try:
        return eigenvalues(hamiltonian_matrix(spec, BasisConfig(M, alpha))).values, None
    except PtSpectraError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def run_ladder(spec, config: LadderConfig, workers: int | None = None) -> LadderResult:
    """Diagonalize H^(M) for every rung and follow each eigenvalue across rungs.

    With ``workers`` > 1 the rungs are diagonalized in separate processes; the
    linking step always runs in rung order.
    """
    ms = config.M_values
    alphas = [config.alpha] * len(ms)
    if workers and workers > 1 and len(ms) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            spectra = list(pool.map(_rung, [spec] * len(ms), ms, alphas))
    else:
        spectra = [_rung(spec, m, config.alpha) for m in ms]

    failed: dict[int, str] = {}
    paths: list[list[tuple[int, complex]]] = []
    live: list[int] = []
    for M, (vals, err) in zip(ms, spectra):
        if vals is None:
            failed[M] = err
            continue
        if not live:
            paths = [[(M, complex(w))] for w in vals]
            live = list(range(len(paths)))
            continue
        prev_vals = [paths[p][-1][1] for p in live]
        pairs = link(prev_vals, vals)
        matched = set()
        new_live = []
        for i, j in pairs:
            paths[live[i]].append((M, complex(vals[j])))
            new_live.append(live[i])
            matched.add(j)
        for j, w in enumerate(vals):
            if j not in matched:
                paths.append([(M, complex(w))])
                new_live.append(len(paths) - 1)
        live = new_live

    def sort_key(p):
        w = p[-1][1]
        return (w.real, w.imag)

    paths.sort(key=sort_key)
    traces = []
    for label, pts in enumerate(paths):
        status = classify(pts, config.tol_rel, config.tol_abs, config.real_tol)
        final = pts[-1][1] if status.converged else None
        traces.append(ConvergenceTrace(label, tuple(pts), status, final))
    return LadderResult(spec, config, traces, failed)


def converged_real_spectrum(traces, count: int) -> list[float]:
    vals = sorted(
        t.final_value.real for t in traces if t.status is Status.CONVERGED_REAL
    )
    return vals[:count]


@dataclass(frozen=True)
class ScaleScanResult:
    alphas: np.ndarray
    values: np.ndarray
    plateau_interval: tuple[float, float]
    recommended_alpha: float
    window_ranges: np.ndarray

    def value_at(self, alpha: float) -> complex:
        i = int(np.argmin(np.abs(self.alphas - alpha)))
        return complex(self.values[i])

    @property
    def present(self) -> np.ndarray:
        return np.isfinite(self.values)


def nth_real_eigenvalue(spec, M: int, n: int, alpha: float, real_tol: float = 1e-8):
    vals = eigenvalues(hamiltonian_matrix(spec, BasisConfig(M, alpha))).values
    real = sorted((w for w in vals if is_real(w, real_tol)), key=lambda w: (w.real, w.imag))
    return complex(real[n]) if n < len(real) else None


def scale_scan(spec, M: int, n: int, alpha_grid, window: int = 5, real_tol: float = 1e-8) -> ScaleScanResult:
    """The n-th real eigenvalue of H^(M) over a grid of basis scalings.

    The plateau is the widest run of grid points whose centred moving range of
    |W| (``window`` points) lies below the 25th percentile of all such ranges.
    """
    alphas = np.asarray(alpha_grid, dtype=float)
    if alphas.ndim != 1 or alphas.size < 10:
        raise InvalidInputError("alpha grid needs at least 10 points")
    if np.any(np.diff(alphas) <= 0):
        raise InvalidInputError("alpha grid must be strictly ascending")
    vals = np.full(alphas.size, np.nan + 1j * np.nan, dtype=np.complex128)
    for k, a in enumerate(alphas):
        w = nth_real_eigenvalue(spec, M, n, float(a), real_tol)
        if w is not None:
            vals[k] = w

    half = window // 2
    mag = np.abs(vals)
    ranges = np.full(alphas.size, np.nan)
    for k in range(half, alphas.size - half):
        seg = mag[k - half : k + half + 1]
        if np.all(np.isfinite(seg)):
            ranges[k] = seg.max() - seg.min()
    valid = np.isfinite(ranges)
    if not np.any(valid):
        raise InvalidInputError("no complete window of present eigenvalues on the grid")
    threshold = np.percentile(ranges[valid], 25)
    below = valid & (ranges < threshold)
    if not np.any(below):
        below = valid & (ranges <= threshold)

    best = None
    k = 0
    while k < alphas.size:
        if below[k]:
            j = k
            while j + 1 < alphas.size and below[j + 1]:
                j += 1
            width = alphas[j] - alphas[k]
            if best is None or width > best[0]:
                best = (width, k, j)
            k = j + 1
        else:
            k += 1
    _, i0, i1 = best
    lo, hi = float(alphas[i0]), float(alphas[i1])
    return ScaleScanResult(alphas, vals, (lo, hi), 0.5 * (lo + hi), ranges)
