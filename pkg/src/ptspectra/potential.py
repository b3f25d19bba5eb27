"""Potentials of the form V(x) = s x^N and sums of such monomials."""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidInputError

_PRESETS = {"1": 1 + 0j, "-1": -1 + 0j, "i": 1j, "-i": -1j}


def parse_coupling(text: str | complex | float) -> complex:
    """Parse a coupling constant.

    Accepts the presets ``"1"``, ``"-1"``, ``"i"`` as well as any complex literal,
    written with either ``i`` or ``j`` as the imaginary unit (``"0.5i"``,
    ``"1+2i"``, ``"-3j"``).
    """
    if isinstance(text, (int, float, complex)):
        return complex(text)
    raw = text.strip().replace(" ", "")
    if raw in _PRESETS:
        return _PRESETS[raw]
    try:
        return complex(raw.replace("i", "j"))
    except ValueError:
        raise InvalidInputError(f"cannot parse coupling {text!r}") from None


def _canonical_pt_coupling(N: int) -> complex:
    """Coupling s for which s x^N = -(ix)^N."""
    return -(1j**N)


@dataclass(frozen=True)
class PotentialSpec:
    """A single monomial potential ``s * x**N``."""

    s: complex
    N: int

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))
        if int(self.N) != self.N or self.N < 2:
            raise InvalidInputError(f"exponent N must be an integer >= 2, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        if self.s == 0 or not cmath.isfinite(self.s):
            raise InvalidInputError(f"coupling s must be finite and nonzero, got {self.s}")

    @property
    def terms(self) -> tuple[tuple[complex, int], ...]:
        return ((self.s, self.N),)

    @property
    def degree(self) -> int:
        return self.N

    @property
    def leading(self) -> complex:
        return self.s

    def is_hermitian(self) -> bool:
        return self.s.imag == 0 and self.s.real > 0 and self.N % 2 == 0

    def pt_scale(self) -> float | None:
        """Return c > 0 with s x^N = -c (ix)^N, or None outside that family."""
        ratio = self.s / _canonical_pt_coupling(self.N)
        if abs(ratio.imag) <= 1e-14 * abs(ratio) and ratio.real > 0:
            return ratio.real
        return None

    def __call__(self, x):
        return self.s * x**self.N

    def describe(self) -> str:
        return f"{_fmt_coef(self.s)}*x^{self.N}"


@dataclass(frozen=True)
class PolynomialPotential:
    """Sum of monomials ``sum(c * x**k for c, k in terms)``.

    Only needed for operators like ``p^2 + 4x^4 - 2x``; the Hamiltonian builder
    treats a :class:`PotentialSpec` as a one-term polynomial.
    """

    terms: tuple[tuple[complex, int], ...]

    def __post_init__(self):
        merged: dict[int, complex] = {}
        for coef, k in self.terms:
            if int(k) != k or k < 0:
                raise InvalidInputError(f"exponents must be nonnegative integers, got {k}")
            merged[int(k)] = merged.get(int(k), 0j) + complex(coef)
        clean = tuple(sorted(((c, k) for k, c in merged.items() if c != 0), key=lambda t: -t[1]))
        if not clean:
            raise InvalidInputError("polynomial potential has no nonzero terms")
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence]) -> "PolynomialPotential":
        return cls(tuple((parse_coupling(c), int(k)) for c, k in pairs))

    @classmethod
    def parse(cls, text: str) -> "PolynomialPotential":
        """Parse ``"coef:exp,coef:exp"``, e.g. ``"4:4,-2:1"``."""
        pairs = []
        for chunk in text.split(","):
            coef, _, k = chunk.partition(":")
            if not k:
                raise InvalidInputError(f"bad term {chunk!r}; expected coef:exponent")
            pairs.append((coef, int(k)))
        return cls.from_pairs(pairs)

    @property
    def degree(self) -> int:
        return self.terms[0][1]

    @property
    def leading(self) -> complex:
        return self.terms[0][0]

    def is_hermitian(self) -> bool:
        return (
            all(c.imag == 0 for c, _ in self.terms)
            and self.leading.real > 0
            and self.degree % 2 == 0
        )

    def __call__(self, x):
        total = 0
        for c, k in self.terms:
            total = total + c * x**k
        return total

    def describe(self) -> str:
        return " + ".join(f"{_fmt_coef(c)}*x^{k}" for c, k in self.terms)


def _fmt_coef(c: complex) -> str:
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return f"{c.imag!r}i"
    return f"({c.real!r}{c.imag:+}i)"
