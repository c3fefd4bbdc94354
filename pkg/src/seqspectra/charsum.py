"""Exact arithmetic in Q(sqrt(p*)), p* = -p, and count-vector reduction.

The embedding is fixed by sqrt(p*) = sum_t (t/p) w^t = +i sqrt(p), which
holds for p = 3 mod 4 with w = exp(2 pi i / p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import NotInQuadraticSubfield


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _half(x: int) -> int:
    if x % 2:
        raise ArithmeticError("result is not a half-integer combination")
    return x // 2


@dataclass(frozen=True, order=True)
class QuadValue:
    """The number (two_a + two_b * sqrt(-p)) / 2 for a fixed prime ``p``.

    ``p`` takes part in equality so values from different fields never
    collide. Ordering is by (p, two_a, two_b).
    """

    p: int
    two_a: int
    two_b: int = 0

    @classmethod
    def integer(cls, p: int, m: int) -> QuadValue:
        return cls(p, 2 * m, 0)

    @classmethod
    def sqrt_pstar_power(cls, p: int, m: int) -> QuadValue:
        """sqrt(p*)^m, using sqrt(p*)^2 = -p."""
        c = (-p) ** (m // 2)
        return cls(p, 0, 2 * c) if m % 2 else cls(p, 2 * c, 0)

    # -- ring operations ---------------------------------------------------
    def _coerce(self, other) -> QuadValue:
        if isinstance(other, QuadValue):
            if other.p != self.p:
                raise ValueError("mixing values from different primes")
            return other
        if isinstance(other, (int, np.integer)):
            return QuadValue.integer(self.p, int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadValue(self.p, self.two_a + o.two_a, self.two_b + o.two_b)

    __radd__ = __add__

    def __neg__(self) -> QuadValue:
        return QuadValue(self.p, -self.two_a, -self.two_b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.two_b == 0 and o.two_a % 2 == 0:
            m = o.two_a // 2
            return QuadValue(self.p, self.two_a * m, self.two_b * m)
        ta = self.two_a * o.two_a - self.p * self.two_b * o.two_b
        tb = self.two_a * o.two_b + self.two_b * o.two_a
        return QuadValue(self.p, _half(ta), _half(tb))

    __rmul__ = __mul__

    def conj(self) -> QuadValue:
        return QuadValue(self.p, self.two_a, -self.two_b)

    def norm4(self) -> int:
        """4 |v|^2 = two_a^2 + p two_b^2, exact."""
        return self.two_a**2 + self.p * self.two_b**2

    @property
    def is_rational(self) -> bool:
        return self.two_b == 0

    @property
    def real(self) -> Fraction:
        return Fraction(self.two_a, 2)

    def to_complex(self) -> complex:
        return complex(self.two_a / 2, self.two_b / 2 * math.sqrt(self.p))

    def to_json(self) -> dict[str, str]:
        return {"twoA": str(self.two_a), "twoB": str(self.two_b)}

    @classmethod
    def from_json(cls, p: int, obj: Mapping[str, str]) -> QuadValue:
        return cls(p, int(obj["twoA"]), int(obj["twoB"]))

    def __str__(self) -> str:
        return f"({self.two_a} {'+' if self.two_b >= 0 else '-'} {abs(self.two_b)}√-{self.p})/2"


ValueDistribution = dict  # QuadValue -> occurrence count


def residue_classes(p: int) -> tuple[np.ndarray, np.ndarray]:
    qr = sorted({(t * t) % p for t in range(1, p)})
    nqr = [t for t in range(1, p) if t not in set(qr)]
    return np.array(qr, dtype=np.int64), np.array(nqr, dtype=np.int64)


def counts_to_quadvalue(counts, p: int) -> QuadValue:
    """Exact value of sum_t counts[t] w^t, provided it lies in Q(sqrt(p*))."""
    cv = [int(c) for c in counts]
    if len(cv) != p:
        raise ValueError(f"count vector has length {len(cv)}, expected {p}")
    qr, nqr = residue_classes(p)
    cq = {cv[t] for t in qr}
    cn = {cv[t] for t in nqr}
    if len(cq) != 1 or len(cn) != 1:
        raise NotInQuadraticSubfield(f"counts {cv} are not class-constant")
    c_q, c_n = cq.pop(), cn.pop()
    return QuadValue(p, 2 * cv[0] - c_q - c_n, c_q - c_n)


def count_rows_to_quadvalues(rows: np.ndarray, p: int) -> list[QuadValue]:
    """Vectorised :func:`counts_to_quadvalue` over an (m, p) array."""
    rows = np.asarray(rows, dtype=np.int64)
    qr, nqr = residue_classes(p)
    c_q = rows[:, qr[0]]
    c_n = rows[:, nqr[0]]
    ok = np.all(rows[:, qr] == c_q[:, None], axis=1) & np.all(rows[:, nqr] == c_n[:, None], axis=1)
    if not np.all(ok):
        bad = int(np.flatnonzero(~ok)[0])
        raise NotInQuadraticSubfield(f"row {bad} = {rows[bad].tolist()} is not class-constant")
    ta = 2 * rows[:, 0] - c_q - c_n
    tb = c_q - c_n
    return [QuadValue(p, int(a), int(b)) for a, b in zip(ta.tolist(), tb.tolist())]


def galois_sigma(v: QuadValue, l: int) -> QuadValue:
    """Automorphism w -> w^l restricted to Q(sqrt(p*))."""
    if not 1 <= l <= v.p - 1:
        raise ValueError(f"l = {l} outside 1..{v.p - 1}")
    return QuadValue(v.p, v.two_a, legendre(l, v.p) * v.two_b)


def mu(v: QuadValue) -> Fraction:
    """sum_{l=1}^{p-1} sigma_l(v); the sqrt(p*) parts cancel."""
    total = QuadValue(v.p, 0, 0)
    for l in range(1, v.p):
        total = total + galois_sigma(v, l)
    assert total.two_b == 0
    return Fraction(total.two_a, 2)


def float_value(counts, p: int) -> complex:
    """sum_t counts[t] exp(2 pi i t / p) in floating point."""
    t = np.arange(p)
    return complex(np.sum(np.asarray(counts, dtype=float) * np.exp(2j * np.pi * t / p)))
