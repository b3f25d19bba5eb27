"""Command-line front end.

Data (CSV or JSON) goes to ``--out`` or stdout; human-readable summaries go to
stderr unless ``--quiet``.  Exit codes: 0 success, 1 tolerance failure,
2 usage error, 3 computational failure.
"""
from __future__ import annotations

import argparse
import copy
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import __version__
from .basis import BasisConfig, hamiltonian_matrix
from .eigen import eigenvalues
from .errors import (
    InvalidDimensionError,
    InvalidInputError,
    PtSpectraError,
    UnsupportedSpecError,
)
from .experiments import (
    TABLE1_LADDER,
    cross_method_report,
    isospectral_comparison,
    render_table1,
    reproduce_table1,
)
from .potential import PolynomialPotential, PotentialSpec, parse_coupling
from .report import dumps, metadata
from .shooting import ContourSpec, ShootingConfig, default_wedges, dominance_radius, spectrum
from .truncation import LadderConfig, fmt_float, run_ladder, scale_scan
from .wkb import wkb_closed_form, wkb_quadrature

EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3

COMMANDS = ("matrix", "ladder", "table1", "isospectral", "scale-scan", "shoot", "wkb", "report")

DEFAULT_POTENTIAL = {"s": "1", "N": 2}
# wkb picks s from --family unless given explicitly
COMMAND_POTENTIAL = {"wkb": {"N": 3}}

DEFAULT_PARAMS: dict[str, dict[str, Any]] = {
    "matrix": {"M": None, "alpha": 1.0, "balance": True},
    "ladder": {"M_start": 10, "M_stop": 80, "M_step": 5, "alpha": 1.0, "tol_rel": 1e-9,
               "tol_abs": 1e-12, "real_tol": 1e-8, "workers": 1},
    "table1": {"workers": 1},
    "isospectral": {"n_max": 3, "tol": 1e-6, "partner": "4:4,-2:1", "alpha": 1.6},
    "scale-scan": {"alpha_range": "0.5:3.0:0.01", "M": 20, "n": 0, "real_tol": 1e-8},
    "shoot": {"theta_right": None, "theta_left": None, "L": None, "seeds": None,
              "count": None, "tol": 1e-12, "energy_tol": 1e-11, "max_iter": 60},
    "wkb": {"family": "pt", "n_range": "0..3", "method": "both"},
    "report": {"count": 4, "M_start": 10, "M_stop": 80, "M_step": 5, "alpha": 1.0,
               "tol_rel": 1e-9, "tol_abs": 1e-12, "real_tol": 1e-8},
}

DEFAULT_METHODS = ["dm", "rk", "wkb"]


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    """Fully resolved inputs of one run; echoed into every JSON report."""

    command: str
    potential: dict[str, Any] = field(default_factory=lambda: dict(DEFAULT_POTENTIAL))
    methods: list[str] = field(default_factory=lambda: list(DEFAULT_METHODS))
    params: dict[str, Any] = field(default_factory=dict)
    emit: str = "csv"
    out: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "potential": copy.deepcopy(self.potential),
            "methods": list(self.methods),
            "params": copy.deepcopy(self.params),
            "emit": self.emit,
            "out": self.out,
        }

    @classmethod
    def resolve(cls, command: str, file_cfg: dict | None, cli: dict) -> "ExperimentConfig":
        """Defaults, then the config file, then explicit flags."""
        cfg = cls(command, potential=dict(COMMAND_POTENTIAL.get(command, DEFAULT_POTENTIAL)),
                  params=copy.deepcopy(DEFAULT_PARAMS[command]))
        if file_cfg:
            if "config" in file_cfg and isinstance(file_cfg["config"], dict):
                file_cfg = file_cfg["config"]
            other = file_cfg.get("command", command)
            if other != command:
                raise UsageError(f"config file is for {other!r}, not {command!r}")
            if "potential" in file_cfg:
                cfg.potential = dict(file_cfg["potential"])
            if "methods" in file_cfg:
                cfg.methods = list(file_cfg["methods"])
            for k, v in file_cfg.get("params", {}).items():
                if k not in cfg.params:
                    raise UsageError(f"unknown parameter {k!r} for {command}")
                cfg.params[k] = v
            cfg.emit = file_cfg.get("emit", cfg.emit)
            cfg.out = file_cfg.get("out", cfg.out)
        if "terms" in cli:
            cfg.potential = {"terms": [list(t) for t in _parse_terms(cli.pop("terms"))]}
        for key in ("s", "N"):
            if key in cli:
                cfg.potential.pop("terms", None)
                cfg.potential[key] = cli.pop(key)
        if "methods" in cli:
            cfg.methods = [m.strip() for m in cli.pop("methods").split(",") if m.strip()]
        for key in ("emit", "out"):
            if key in cli:
                setattr(cfg, key, cli.pop(key))
        cli.pop("quiet", None)
        cli.pop("config", None)
        for k, v in cli.items():
            cfg.params[k] = v
        bad = set(cfg.methods) - set(DEFAULT_METHODS)
        if bad:
            raise UsageError(f"unknown methods {sorted(bad)}")
        if cfg.emit not in ("csv", "json"):
            raise UsageError(f"--emit must be csv or json, not {cfg.emit!r}")
        return cfg

    def build_potential(self):
        pot = self.potential
        try:
            if "terms" in pot:
                return PolynomialPotential.from_pairs(pot["terms"])
            return PotentialSpec(parse_coupling(str(pot["s"])), int(pot["N"]))
        except (PtSpectraError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad potential {pot}: {exc}") from None


def _parse_terms(text: str) -> list[tuple[str, int]]:
    """Validate ``"coef:exp,..."`` and keep the coefficients as typed."""
    try:
        PolynomialPotential.parse(text)
        return [(c.strip(), int(k)) for c, _, k in (ch.partition(":") for ch in text.split(","))]
    except (PtSpectraError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _parse_seeds(text) -> list[complex]:
    if isinstance(text, (list, tuple)):
        return [parse_coupling(str(t)) for t in text]
    try:
        return [parse_coupling(t) for t in str(text).split(",") if t.strip()]
    except InvalidInputError as exc:
        raise UsageError(str(exc)) from None


def _parse_alpha_range(text: str) -> np.ndarray:
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--alpha expects lo:hi:step, got {text!r}") from None
    if step <= 0 or hi <= lo:
        raise UsageError("--alpha needs lo < hi and step > 0")
    count = int(round((hi - lo) / step)) + 1
    return np.round(lo + step * np.arange(count), 12)


def _parse_n_range(text: str) -> range:
    lo, sep, hi = str(text).partition("..")
    try:
        return range(int(lo), int(hi if sep else lo) + 1)
    except ValueError:
        raise UsageError(f"--n-range expects a..b, got {text!r}") from None


class Output:
    def __init__(self, cfg: ExperimentConfig, quiet: bool):
        self.cfg = cfg
        self.quiet = quiet

    def data(self, text: str):
        if self.cfg.out:
            with open(self.cfg.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    def info(self, text: str):
        if not self.quiet:
            print(text, file=sys.stderr)

    def json(self, payload: dict):
        doc = metadata(self.cfg.to_dict())
        doc.update(payload)
        self.data(dumps(doc))


def _csv(header: str, rows) -> str:
    buf = io.StringIO()
    buf.write(header + "\n")
    for row in rows:
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def _pair(z: complex) -> list[float]:
    return [float(fmt_float(z.real)), float(fmt_float(z.imag))]


# -- commands -----------------------------------------------------------------

def cmd_matrix(cfg: ExperimentConfig, out: Output) -> int:
    p = cfg.params
    if p["M"] is None:
        raise UsageError("matrix requires --M")
    spec = cfg.build_potential()
    try:
        basis = BasisConfig(int(p["M"]), float(p["alpha"]))
    except (InvalidDimensionError, InvalidInputError) as exc:
        raise UsageError(str(exc)) from None
    res = eigenvalues(hamiltonian_matrix(spec, basis), balanced=bool(p["balance"]))
    if cfg.emit == "json":
        out.json({"eigenvalues": [_pair(z) for z in res.values],
                  "max_residual": res.max_residual})
    else:
        out.data(_csv("k,re,im", ([str(k), fmt_float(z.real), fmt_float(z.imag)]
                                  for k, z in enumerate(res.values))))
    return EXIT_OK


def _ladder_config(p) -> LadderConfig:
    try:
        return LadderConfig.from_range(int(p["M_start"]), int(p["M_stop"]), int(p["M_step"]),
                                       alpha=float(p["alpha"]), tol_rel=float(p["tol_rel"]),
                                       tol_abs=float(p["tol_abs"]), real_tol=float(p["real_tol"]))
    except (InvalidDimensionError, InvalidInputError) as exc:
        raise UsageError(str(exc)) from None


def cmd_ladder(cfg: ExperimentConfig, out: Output) -> int:
    p = cfg.params
    spec = cfg.build_potential()
    lr = run_ladder(spec, _ladder_config(p), workers=int(p.get("workers") or 1))
    conv = sorted(t.final_value.real for t in lr.converged_real)
    if cfg.emit == "json":
        out.json({
            "rows": [{"M": m, "traj": k, "re": float(fmt_float(w.real)),
                      "im": float(fmt_float(w.imag)), "status": str(st)}
                     for m, k, w, st in lr.rows()],
            "converged_real": [float(fmt_float(v)) for v in conv],
            "failed_rungs": {str(k): v for k, v in lr.failed_rungs.items()},
        })
    else:
        out.data(lr.to_csv())
    if conv:
        out.info("converged-real: " + ", ".join(fmt_float(v) for v in conv))
    else:
        out.info("no converged eigenvalues")
    for m, msg in lr.failed_rungs.items():
        out.info(f"rung M={m} failed: {msg}")
    return EXIT_COMPUTE if lr.failed_rungs else EXIT_OK


def cmd_table1(cfg: ExperimentConfig, out: Output) -> int:
    res = reproduce_table1(workers=int(cfg.params.get("workers") or 1))
    out.info(render_table1(res))
    cells = [
        {"row": c.row, "level": c.level, "reference": c.reference,
         "ours": None if c.ours is None else float(fmt_float(c.ours.real)),
         "rel_dev": c.rel_dev, "tol": c.tol, "comparison": c.kind,
         "gating": c.gating, "pass": c.passed}
        for c in res.cells
    ]
    if cfg.emit == "json":
        table = {str(M): [None if (w := res.ladder_cell(M, k)) is None else float(fmt_float(w.real))
                          for k in range(4)] for M in TABLE1_LADDER.M_values}
        out.json({"table": table, "rk": [_pair(z) for z in res.rk],
                  "wkb": res.wkb, "wkb_quadrature": res.wkb_quadrature, "diff": cells})
    else:
        rows = ([c["row"], str(c["level"]), c["reference"], _blank(c["ours"]), _blank(c["rel_dev"]),
                 fmt_float(c["tol"]), c["comparison"], str(c["gating"]).lower(),
                 "pass" if c["pass"] else "FAIL"] for c in cells)
        out.data(_csv("row,level,reference,ours,rel_dev,tol,comparison,gating,result", rows))
    for c in res.cells:
        if not c.passed:
            tag = "FAIL" if c.gating else "note"
            out.info(f"{tag}: {c.row} E{c.level} reference {c.reference} ours {_blank(None if c.ours is None else c.ours.real)}")
    return EXIT_OK if res.ok else EXIT_TOLERANCE


def _blank(x) -> str:
    return "" if x is None else fmt_float(float(x))


def cmd_isospectral(cfg: ExperimentConfig, out: Output) -> int:
    p = cfg.params
    try:
        partner = PolynomialPotential.parse(str(p["partner"]))
    except (PtSpectraError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    n_max, tol = int(p["n_max"]), float(p["tol"])
    if n_max < 0 or not tol > 0:
        raise UsageError("--n-max must be >= 0 and --tol > 0")
    res = isospectral_comparison(n_max, partner, alpha=float(p["alpha"]))
    if len(res.shooting) < n_max + 1:
        out.info("shooting did not recover every level")
        return EXIT_COMPUTE
    devs = res.deviations
    if cfg.emit == "json":
        out.json({"partner": partner.describe(), "M": res.M_used,
                  "levels": [{"n": k, "hermitian": a, "shooting": _pair(b), "deviation": d}
                             for k, (a, b, d) in enumerate(zip(res.hermitian, res.shooting, devs))],
                  "pass": res.passes(tol)})
    else:
        out.data(_csv("n,hermitian,shooting_re,shooting_im,deviation",
                      ([str(k), fmt_float(a), fmt_float(b.real), fmt_float(b.imag), fmt_float(d)]
                       for k, (a, b, d) in enumerate(zip(res.hermitian, res.shooting, devs)))))
    out.info(f"max deviation {max(devs):.3e} (tol {tol:g}) for p^2 + {partner.describe()} "
             f"vs p^2 - x^4")
    return EXIT_OK if res.passes(tol) else EXIT_TOLERANCE


def cmd_scale_scan(cfg: ExperimentConfig, out: Output) -> int:
    p = cfg.params
    spec = cfg.build_potential()
    grid = _parse_alpha_range(str(p["alpha_range"]))
    try:
        res = scale_scan(spec, int(p["M"]), int(p["n"]), grid, real_tol=float(p["real_tol"]))
    except InvalidInputError as exc:
        raise UsageError(str(exc)) from None
    if cfg.emit == "json":
        out.json({"alpha": [float(a) for a in res.alphas],
                  "values": [None if not np.isfinite(w) else _pair(w) for w in res.values],
                  "plateau_interval": list(res.plateau_interval),
                  "recommended_alpha": res.recommended_alpha})
    else:
        out.data(_csv("alpha,re,im", ([fmt_float(a), fmt_float(w.real), fmt_float(w.imag)]
                                      for a, w in zip(res.alphas, res.values))))
    lo, hi = res.plateau_interval
    out.info(f"plateau [{lo:g}, {hi:g}], recommended alpha {res.recommended_alpha:g}")
    return EXIT_OK


def cmd_shoot(cfg: ExperimentConfig, out: Output) -> int:
    p = cfg.params
    spec = cfg.build_potential()
    if p["seeds"] is None:
        raise UsageError("shoot requires --seeds")
    seeds = _parse_seeds(p["seeds"])
    if not seeds:
        raise UsageError("shoot requires at least one seed")
    e_max = 1.5 * max(abs(z) for z in seeds) + 1.0
    if p["theta_right"] is None or p["theta_left"] is None:
        try:
            base = default_wedges(spec, e_max=e_max)
        except UnsupportedSpecError as exc:
            raise UsageError(f"{exc} (use --theta-right/--theta-left)") from None
    else:
        base = None
    tr = float(p["theta_right"]) if p["theta_right"] is not None else base.theta_right
    tl = float(p["theta_left"]) if p["theta_left"] is not None else base.theta_left
    L = float(p["L"]) if p["L"] is not None else dominance_radius(spec, e_max)
    try:
        contour = ContourSpec(tr, tl, L)
        sc = ShootingConfig(tol=float(p["tol"]), energy_tol=float(p["energy_tol"]),
                            max_iter=int(p["max_iter"]))
    except InvalidInputError as exc:
        raise UsageError(str(exc)) from None
    count = int(p["count"]) if p["count"] is not None else len(seeds)
    res = spectrum(spec, contour, sc, count, seeds)
    if cfg.emit == "json":
        out.json({"eigenvalues": [_pair(z) for z in res.values],
                  "failures": [{"seed": _pair(s), "error": m} for s, m in res.failures],
                  "complete": res.complete})
    else:
        out.data(_csv("n,re,im", ([str(k), fmt_float(z.real), fmt_float(z.imag)]
                                  for k, z in enumerate(res.values))))
    for s, m in res.failures:
        out.info(f"seed {s}: {m}")
    return EXIT_OK if res.complete else EXIT_COMPUTE


def cmd_wkb(cfg: ExperimentConfig, out: Output) -> int:
    p = cfg.params
    family = p["family"]
    pot = cfg.potential
    if "terms" in pot:
        raise UsageError("wkb supports single monomials only")
    N = int(pot.get("N", 3))
    if "s" in pot:
        try:
            s = parse_coupling(str(pot["s"]))
        except InvalidInputError as exc:
            raise UsageError(str(exc)) from None
    elif family == "pt":
        s = -(1j**N)
    elif family == "hermitian":
        s = 1.0
    else:
        raise UsageError(f"--family must be pt or hermitian, not {family!r}")
    try:
        spec = PotentialSpec(s, N)
    except InvalidInputError as exc:
        raise UsageError(str(exc)) from None
    if family == "hermitian" and not spec.is_hermitian():
        raise UsageError("hermitian family needs s > 0 and N even")
    if family == "pt" and spec.pt_scale() is None:
        raise UsageError(f"V = {spec.describe()} is not of the form -c(ix)^N")
    method = p["method"]
    rows = []
    for n in _parse_n_range(p["n_range"]):
        closed = wkb_closed_form(spec, n).energy if method in ("both", "closed-form") else None
        quad = wkb_quadrature(spec, n).energy if method in ("both", "quadrature") else None
        rel = abs(closed - quad) / closed if closed is not None and quad is not None else None
        rows.append((n, closed, quad, rel))
    if cfg.emit == "json":
        out.json({"levels": [{"n": n, "closed_form": c, "quadrature": q, "rel_diff": r}
                             for n, c, q, r in rows]})
    else:
        out.data(_csv("n,closed_form,quadrature,rel_diff",
                      ([str(n), _blank(c), _blank(q), _blank(r)] for n, c, q, r in rows)))
    return EXIT_OK


def cmd_report(cfg: ExperimentConfig, out: Output) -> int:
    p = cfg.params
    spec = cfg.build_potential()
    rep = cross_method_report(spec, cfg.methods, int(p["count"]), _ladder_config(p), None,
                              cfg.to_dict())
    if cfg.emit == "json":
        doc = rep.to_dict()
        out.data(dumps(doc))
    else:
        out.data(rep.to_csv())
    return EXIT_OK


HANDLERS = {
    "matrix": cmd_matrix, "ladder": cmd_ladder, "table1": cmd_table1,
    "isospectral": cmd_isospectral, "scale-scan": cmd_scale_scan, "shoot": cmd_shoot,
    "wkb": cmd_wkb, "report": cmd_report,
}


# -- argument parsing ---------------------------------------------------------

def _common(parser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--emit", choices=("csv", "json"), default=d(argparse.SUPPRESS))
    parser.add_argument("--out", metavar="PATH", default=d(argparse.SUPPRESS))
    parser.add_argument("--quiet", action="store_true", default=d(argparse.SUPPRESS))
    parser.add_argument("--config", metavar="FILE", default=d(argparse.SUPPRESS),
                        help="JSON ExperimentConfig (or a JSON report); flags override it")


def _potential(parser):
    S = argparse.SUPPRESS
    parser.add_argument("--s", default=S, help='coupling: "1", "-1", "i" or a complex literal')
    parser.add_argument("--N", type=int, default=S, help="exponent of x")
    parser.add_argument("--terms", default=S,
                        help='polynomial potential "coef:exp,...", e.g. "4:4,-2:1"')


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parser = argparse.ArgumentParser(prog="ptspectra", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ptspectra {__version__}")
    _common(parser, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matrix", help="all eigenvalues of one truncated matrix")
    _potential(p)
    p.add_argument("--M", type=int, default=S)
    p.add_argument("--alpha", type=float, default=S)
    p.add_argument("--no-balance", dest="balance", action="store_false", default=S)

    for name in ("ladder", "report"):
        p = sub.add_parser(name, help={"ladder": "eigenvalue trajectories over a ladder of M",
                                       "report": "DM / RK / WKB cross-method table"}[name])
        _potential(p)
        p.add_argument("--M-start", dest="M_start", type=int, default=S)
        p.add_argument("--M-stop", dest="M_stop", type=int, default=S)
        p.add_argument("--M-step", dest="M_step", type=int, default=S)
        p.add_argument("--alpha", type=float, default=S)
        p.add_argument("--tol-rel", dest="tol_rel", type=float, default=S)
        p.add_argument("--tol-abs", dest="tol_abs", type=float, default=S)
        p.add_argument("--real-tol", dest="real_tol", type=float, default=S)
        if name == "ladder":
            p.add_argument("--workers", type=int, default=S)
        else:
            p.add_argument("--methods", default=S, help="comma list from dm,rk,wkb")
            p.add_argument("--count", type=int, default=S)

    p = sub.add_parser("table1", help="reproduce the i x^3 convergence table")
    p.add_argument("--workers", type=int, default=S)

    p = sub.add_parser("isospectral", help="p^2 - x^4 by shooting vs its Hermitian partner")
    p.add_argument("--n-max", dest="n_max", type=int, default=S)
    p.add_argument("--tol", type=float, default=S)
    p.add_argument("--partner", default=S, help='partner potential, default "4:4,-2:1"')
    p.add_argument("--alpha", type=float, default=S)

    p = sub.add_parser("scale-scan", help="n-th real eigenvalue versus basis scaling")
    _potential(p)
    p.add_argument("--alpha", dest="alpha_range", default=S, metavar="LO:HI:STEP")
    p.add_argument("--M", type=int, default=S)
    p.add_argument("--n", type=int, default=S)
    p.add_argument("--real-tol", dest="real_tol", type=float, default=S)

    p = sub.add_parser("shoot", help="eigenvalues by complex-contour shooting")
    _potential(p)
    p.add_argument("--theta-right", dest="theta_right", type=float, default=S)
    p.add_argument("--theta-left", dest="theta_left", type=float, default=S)
    p.add_argument("--L", type=float, default=S)
    p.add_argument("--seeds", default=S, help='comma list, e.g. "i,3i" or "0.9,2.9"')
    p.add_argument("--count", type=int, default=S)
    p.add_argument("--tol", type=float, default=S)
    p.add_argument("--energy-tol", dest="energy_tol", type=float, default=S)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=S)

    p = sub.add_parser("wkb", help="WKB estimates, closed form and quadrature")
    _potential(p)
    p.add_argument("--family", choices=("pt", "hermitian"), default=S)
    p.add_argument("--n-range", dest="n_range", default=S, metavar="A..B")
    p.add_argument("--method", choices=("both", "closed-form", "quadrature"), default=S)

    for sp in sub.choices.values():
        _common(sp, suppress=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    cli = {k: v for k, v in vars(ns).items() if k != "command"}
    quiet = bool(cli.get("quiet", False))
    try:
        file_cfg = None
        if "config" in cli:
            try:
                with open(cli["config"], encoding="utf-8") as fh:
                    file_cfg = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"cannot read config: {exc}") from None
        cfg = ExperimentConfig.resolve(ns.command, file_cfg, dict(cli))
        return HANDLERS[ns.command](cfg, Output(cfg, quiet))
    except UsageError as exc:
        print(f"ptspectra {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PtSpectraError, ArithmeticError) as exc:
        print(f"ptspectra {ns.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
