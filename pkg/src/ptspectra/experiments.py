"""Composite experiments built from the basis, ladder, shooting and WKB modules."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import golden
from .basis import BasisConfig, hamiltonian_matrix
from .eigen import hermitian_eigenvalues
from .errors import NoConvergenceError, PtSpectraError
from .potential import PolynomialPotential, PotentialSpec
from .report import ReportRow, SpectrumReport
from .shooting import ShootingConfig, default_wedges, spectrum
from .truncation import LadderConfig, LadderResult, converged_real_spectrum, is_real, run_ladder
from .wkb import wkb_closed_form, wkb_quadrature

IX3 = PotentialSpec(1j, 3)
TABLE1_LADDER = LadderConfig.from_range(10, 80, 5)


def hermitian_levels(potential, count: int, alpha: float = 1.0, M_start: int = 20,
                     M_step: int = 10, M_max: int = 400, tol: float = 1e-11):
    """Lowest ``count`` eigenvalues of a Hermitian operator by growing M.

    Stops once two successive rungs move every level by at most
    ``tol * (1 + |E|)``.  Returns ``(levels, M_final)``.
    """
    history = []
    M = max(M_start, count + 1)
    while M <= M_max:
        h = hamiltonian_matrix(potential, BasisConfig(M, alpha))
        history.append(hermitian_eigenvalues(h).values.real[:count])
        if len(history) >= 3:
            a, b, c = history[-3:]
            if np.all(np.abs(c - b) <= tol * (1 + np.abs(c))) and np.all(
                np.abs(b - a) <= tol * (1 + np.abs(b))
            ):
                return [float(v) for v in c], M
        M += M_step
    raise NoConvergenceError(f"levels not converged by M = {M_max}")


def shooting_rk(spec, seeds, count=None, config: ShootingConfig | None = None, contour=None):
    config = config or ShootingConfig()
    seeds = list(seeds)
    e_max = 1.5 * max(abs(complex(s)) for s in seeds) + 1.0
    contour = contour or default_wedges(spec, e_max=e_max)
    return spectrum(spec, contour, config, count or len(seeds), seeds)


@dataclass
class Cell:
    row: str
    level: int
    reference: str
    ours: complex | None
    tol: float
    kind: str  # "relative" or "rounded"
    gating: bool

    @property
    def rel_dev(self) -> float | None:
        if self.ours is None:
            return None
        ref = float(self.reference)
        return abs(self.ours - ref) / abs(ref)

    @property
    def passed(self) -> bool:
        if self.ours is None:
            return False
        if self.kind == "rounded":
            d = golden.printed_decimals(self.reference)
            return f"{self.ours.real:.{d}f}" == self.reference
        return self.rel_dev <= self.tol


@dataclass
class Table1Result:
    ladder: LadderResult
    columns: list            # ConvergenceTrace per level, lowest first
    rk: list[complex]
    wkb: list[float]
    wkb_quadrature: list[float]
    cells: list[Cell] = field(default_factory=list)

    def ladder_cell(self, M: int, level: int) -> complex | None:
        if level >= len(self.columns):
            return None
        w = self.columns[level].value_at(M)
        if w is None or not is_real(w, self.ladder.config.real_tol):
            return None
        return w

    @property
    def failures(self) -> list[Cell]:
        return [c for c in self.cells if c.gating and not c.passed]

    @property
    def ok(self) -> bool:
        return not self.failures


def reproduce_table1(workers: int | None = None, shooting_config: ShootingConfig | None = None) -> Table1Result:
    ladder = run_ladder(IX3, TABLE1_LADDER, workers=workers)
    columns = sorted(ladder.converged_real, key=lambda t: t.final_value.real)[:4]
    wkb = [wkb_closed_form(IX3, n).energy for n in range(4)]
    wkb_q = [wkb_quadrature(IX3, n).energy for n in range(4)]
    rk = list(shooting_rk(IX3, wkb, 4, shooting_config))
    res = Table1Result(ladder, columns, rk, wkb, wkb_q)

    for M, row in golden.TABLE1_LADDER.items():
        for level, reference in enumerate(row):
            if reference is None:
                continue
            res.cells.append(Cell(f"M={M}", level, reference, res.ladder_cell(M, level),
                                  golden.ladder_tolerance(M), "relative", True))
    for level, reference in enumerate(golden.TABLE1_RK):
        ours = rk[level] if level < len(rk) else None
        res.cells.append(Cell("RK", level, reference, ours, golden.RK_TOL, "relative", True))
    for level, reference in enumerate(golden.TABLE1_WKB):
        res.cells.append(Cell("WKB", level, reference, complex(wkb[level]), 0.0, "rounded", False))
    return res


def render_table1(res: Table1Result) -> str:
    head = f"{'M':>5}" + "".join(f"{'E' + str(k):>16}" for k in range(4))
    lines = [head, "-" * len(head)]
    for M in TABLE1_LADDER.M_values:
        cells = []
        for k in range(4):
            w = res.ladder_cell(M, k)
            cells.append(f"{w.real:>16.10g}" if w is not None else f"{'-':>16}")
        lines.append(f"{M:>5}" + "".join(cells))
    lines.append("-" * len(head))
    lines.append(f"{'RK':>5}" + "".join(f"{z.real:>16.11g}" for z in res.rk))
    lines.append(f"{'WKB':>5}" + "".join(f"{e:>16.4f}" for e in res.wkb))
    return "\n".join(lines)


@dataclass
class IsospectralResult:
    hermitian: list[float]
    shooting: list[complex]
    M_used: int
    partner: PolynomialPotential

    @property
    def deviations(self) -> list[float]:
        return [abs(a - b) for a, b in zip(self.hermitian, self.shooting)]

    def passes(self, tol: float) -> bool:
        return len(self.shooting) == len(self.hermitian) and all(d <= tol for d in self.deviations)


DEFAULT_PARTNER = PolynomialPotential(((4.0, 4), (-2.0, 1)))
INVERTED_QUARTIC = PotentialSpec(-1, 4)


def isospectral_comparison(n_max: int = 3, partner: PolynomialPotential = DEFAULT_PARTNER,
                           alpha: float = 1.6, shooting_config: ShootingConfig | None = None) -> IsospectralResult:
    """Hermitian partner by diagonalization versus p^2 - x^4 by shooting."""
    count = n_max + 1
    levels, M = hermitian_levels(partner, count, alpha=alpha)
    rk = shooting_rk(INVERTED_QUARTIC, levels, count, shooting_config)
    return IsospectralResult(levels, list(rk), M, partner)


def cross_method_report(spec, methods, count: int, ladder: LadderConfig,
                        shooting_config: ShootingConfig | None, config: dict) -> SpectrumReport:
    """DM / RK / WKB values level by level, with reasons for missing entries."""
    rows = [ReportRow(n) for n in range(count)]
    dm_vals: list[float] = []
    if "dm" in methods:
        lr = run_ladder(spec, ladder)
        dm_vals = converged_real_spectrum(lr, count)
        for r in rows:
            if r.n < len(dm_vals):
                r.dm = complex(dm_vals[r.n])
            else:
                r.notes["dm"] = "no converged real trajectory"
    wkb_vals: list[float] = []
    if "wkb" in methods:
        try:
            wkb_vals = [wkb_closed_form(spec, n).energy for n in range(count)]
            for r, e in zip(rows, wkb_vals):
                r.wkb = e
        except PtSpectraError as exc:
            for r in rows:
                r.notes["wkb"] = str(exc)
    if "rk" in methods:
        seeds = [complex(v) for v in (dm_vals or wkb_vals)]
        if len(seeds) < count and wkb_vals:
            seeds = seeds + [complex(v) for v in wkb_vals[len(seeds):]]
        if not seeds:
            for r in rows:
                r.notes["rk"] = "no seeds (needs dm or wkb)"
        else:
            try:
                rk = shooting_rk(spec, seeds, count, shooting_config)
            except PtSpectraError as exc:
                for r in rows:
                    r.notes["rk"] = str(exc)
            else:
                for r in rows:
                    if r.n < len(rk):
                        r.rk = rk[r.n]
                    else:
                        r.notes["rk"] = "root not found"
    for r in rows:
        for m in ("dm", "rk", "wkb"):
            if m not in methods:
                r.notes.setdefault(m, "not requested")
    return SpectrumReport(rows, config)
