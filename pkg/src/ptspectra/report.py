"""Cross-method spectrum reports and their CSV / JSON serializations."""
from __future__ import annotations

import datetime as _dt
import io
import json
from dataclasses import dataclass, field
from typing import Any

from .truncation import fmt_float


def printed(z: complex | float | None) -> complex | None:
    """Round-trip a value through its 10-significant-digit text form."""
    if z is None:
        return None
    z = complex(z)
    return complex(float(fmt_float(z.real)), float(fmt_float(z.imag)))


def deviation(a, b) -> float | None:
    """|a - b| computed from the printed values, so readers can recompute it."""
    pa, pb = printed(a), printed(b)
    if pa is None or pb is None:
        return None
    return abs(pa - pb)


@dataclass
class ReportRow:
    n: int
    dm: complex | None = None
    rk: complex | None = None
    wkb: float | None = None
    notes: dict[str, str] = field(default_factory=dict)

    @property
    def dm_rk(self):
        return deviation(self.dm, self.rk)

    @property
    def dm_wkb(self):
        return deviation(self.dm, self.wkb)

    @property
    def rk_wkb(self):
        return deviation(self.rk, self.wkb)


def _num(x: float | None) -> str:
    return "" if x is None else fmt_float(x)


def _cplx_cells(z):
    if z is None:
        return ["", ""]
    return [fmt_float(z.real), fmt_float(z.imag)]


def _cplx_json(z):
    if z is None:
        return None
    z = complex(z)
    return [float(fmt_float(z.real)), float(fmt_float(z.imag))]


def timestamp() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def metadata(config: dict) -> dict:
    from . import __version__

    return {"config": config, "tool": "ptspectra", "version": __version__, "timestamp": timestamp()}


@dataclass
class SpectrumReport:
    rows: list[ReportRow]
    config: dict[str, Any]

    CSV_HEADER = "n,dm_re,dm_im,rk_re,rk_im,wkb,dev_dm_rk,dev_dm_wkb,dev_rk_wkb,notes"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(self.CSV_HEADER + "\n")
        for r in self.rows:
            notes = "; ".join(f"{k}: {v}" for k, v in sorted(r.notes.items()))
            cells = [str(r.n), *_cplx_cells(r.dm), *_cplx_cells(r.rk), _num(r.wkb),
                     _num(r.dm_rk), _num(r.dm_wkb), _num(r.rk_wkb), _csv_quote(notes)]
            buf.write(",".join(cells) + "\n")
        return buf.getvalue()

    def to_dict(self) -> dict:
        out = metadata(self.config)
        out["levels"] = [
            {
                "n": r.n,
                "dm": _cplx_json(r.dm),
                "rk": _cplx_json(r.rk),
                "wkb": None if r.wkb is None else float(fmt_float(r.wkb)),
                "dev_dm_rk": r.dm_rk,
                "dev_dm_wkb": r.dm_wkb,
                "dev_rk_wkb": r.rk_wkb,
                "notes": dict(sorted(r.notes.items())),
            }
            for r in self.rows
        ]
        return out


def _csv_quote(text: str) -> str:
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def strip_timestamp(text: str) -> dict:
    data = json.loads(text)
    data.pop("timestamp", None)
    return data
