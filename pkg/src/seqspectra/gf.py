"""The field tower F_p < F_{p^k} < F_{p^n} with log/antilog tables.

Elements of F_{p^n} are canonical integers ``sum(c[i] * p**i)`` where ``c`` is
the coefficient vector in the polynomial basis (1, alpha, ..., alpha^(n-1)).
Subfield elements are ordinary F_{p^n} encodings fixed by x -> x^(p^m); prime
field elements c in F_p therefore encode as the integer c itself.

Every arithmetic method accepts either a Python int or an integer ndarray and
returns the same kind.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

from .errors import CapExceeded, InvalidParams, ZeroArgument

DEFAULT_CAP = 2**26


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def prime_factors(m: int) -> list[int]:
    """Distinct prime factors of ``m`` by trial division."""
    out = []
    f = 2
    while f * f <= m:
        if m % f == 0:
            out.append(f)
            while m % f == 0:
                m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out.append(m)
    return out


def decimation(p: int, n: int, k: int) -> int:
    return (p**n + 1) // (p**k + 1) + (p**n - 1) // 2


@dataclass(frozen=True)
class FieldParams:
    """Validated parameters (p, n, k, d).

    ``d`` defaults to (p^n+1)/(p^k+1) + (p^n-1)/2; passing any other value
    raises :class:`InvalidParams`.
    """

    p: int
    n: int
    k: int
    d: int | None = None

    def __post_init__(self) -> None:
        p, n, k = self.p, self.n, self.k
        if not is_prime(p):
            raise InvalidParams(f"p = {p} is not prime")
        if p % 4 != 3:
            raise InvalidParams(f"p ≡ 3 mod 4 violated (p = {p})")
        if n < 1 or n % 2 == 0:
            raise InvalidParams(f"n must be odd (n = {n})")
        if k < 1 or n % k != 0:
            raise InvalidParams(f"k must divide n (n = {n}, k = {k})")
        q = p**n
        if (q + 1) % (p**k + 1) != 0 or (q - 1) % 2 != 0:
            raise InvalidParams("d summands are not integers")
        expected = decimation(p, n, k)
        if self.d is None:
            object.__setattr__(self, "d", expected)
        elif self.d != expected:
            raise InvalidParams(
                f"d = {self.d} does not equal (p^n+1)/(p^k+1) + (p^n-1)/2 = {expected}"
            )
        N = q - 1
        if gcd(self.d, N) != 2:
            raise InvalidParams(f"gcd(d, p^n - 1) = {gcd(self.d, N)}, expected 2")
        if (self.d * (p**k + 1) - 2) % N != 0:
            raise InvalidParams("d·(p^k + 1) ≢ 2 mod p^n - 1")

    @property
    def e(self) -> int:
        return self.n // self.k

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def N(self) -> int:
        return self.p**self.n - 1

    @property
    def pk(self) -> int:
        return self.p**self.k


def _companion(coeffs: tuple[int, ...], p: int) -> np.ndarray:
    # multiplication-by-x on coefficient column vectors, modulus monic
    n = len(coeffs)
    L = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n):
        L[i, i - 1] = 1
    for i in range(n):
        L[i, n - 1] = (-coeffs[i]) % p
    return L


def _matpow(M: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(M.shape[0], dtype=np.int64)
    base = M % p
    while e:
        if e & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        e >>= 1
    return result


def find_primitive_modulus(p: int, n: int) -> tuple[int, ...]:
    """Smallest monic primitive polynomial of degree ``n`` over F_p.

    Candidates x^n + c[n-1]x^(n-1) + ... + c[0] are ordered by the integer
    sum(c[i] * p**i), i.e. lexicographically with the x^(n-1) coefficient
    most significant. Returned as (c[0], ..., c[n-1], 1).
    """
    N = p**n - 1
    cofactors = [N // r for r in prime_factors(N)]
    eye = np.eye(n, dtype=np.int64)
    for enc in range(1, p**n):
        coeffs = tuple((enc // p**i) % p for i in range(n))
        if coeffs[0] == 0:
            continue
        L = _companion(coeffs, p)
        if not np.array_equal(_matpow(L, N, p), eye):
            continue
        if any(np.array_equal(_matpow(L, c, p), eye) for c in cofactors):
            continue
        return coeffs + (1,)
    raise AssertionError(f"no primitive polynomial of degree {n} over F_{p}")


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """Immutable context for F_{p^n} and its subfields."""

    params: FieldParams
    modulus: tuple[int, ...]
    alpha: int
    exp: np.ndarray
    log: np.ndarray
    digits: np.ndarray

    # -- parameters --------------------------------------------------------
    @property
    def p(self) -> int:
        return self.params.p

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def e(self) -> int:
        return self.params.e

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def q(self) -> int:
        return self.params.q

    @cached_property
    def _place(self) -> np.ndarray:
        return self.p ** np.arange(self.n, dtype=np.int64)

    @property
    def minus_one(self) -> int:
        return self.p - 1

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def nonzero(self) -> np.ndarray:
        return np.arange(1, self.q, dtype=np.int64)

    # -- arithmetic ----------------------------------------------------------
    def encode(self, coeffs) -> int | np.ndarray:
        c = np.asarray(coeffs, dtype=np.int64) % self.p
        r = c @ self._place
        return int(r) if np.ndim(r) == 0 else r

    def add(self, x, y):
        r = ((self.digits[x] + self.digits[y]) % self.p) @ self._place
        return int(r) if np.ndim(r) == 0 else r

    def neg(self, x):
        r = ((self.p - self.digits[x]) % self.p) @ self._place
        return int(r) if np.ndim(r) == 0 else r

    def sub(self, x, y):
        r = ((self.digits[x] - self.digits[y]) % self.p) @ self._place
        return int(r) if np.ndim(r) == 0 else r

    def scale(self, c: int, x):
        """Multiply by the prime-field scalar ``c``."""
        r = ((c * self.digits[x]) % self.p) @ self._place
        return int(r) if np.ndim(r) == 0 else r

    def mul(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        r = self.exp[(self.log[x] + self.log[y]) % self.N]
        r = np.where((x == 0) | (y == 0), 0, r)
        return int(r) if r.ndim == 0 else r

    def pow(self, x, e: int):
        x = np.asarray(x, dtype=np.int64)
        if e == 0:
            r = np.ones_like(x)
        else:
            if e < 0 and np.any(x == 0):
                raise ZeroArgument("zero has no inverse")
            r = self.exp[(self.log[x] * (e % self.N)) % self.N]
            r = np.where(x == 0, 0, r)
        return int(r) if r.ndim == 0 else r

    def inv(self, x):
        return self.pow(x, -1)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def frobenius(self, x, j: int = 1):
        return self.pow(x, self.p**j)

    def alpha_pow(self, i):
        r = self.exp[np.asarray(i, dtype=np.int64) % self.N]
        return int(r) if np.ndim(r) == 0 else r

    # -- traces, characters, subfields ------------------------------------
    def trace(self, x, m: int = 1):
        """Relative trace tr_m^n(x) = sum of x^(p^(m*i)) for i < n/m."""
        if m < 1 or self.n % m != 0:
            raise ValueError(f"m = {m} does not divide n = {self.n}")
        total = x
        cur = x
        for _ in range(self.n // m - 1):
            cur = self.pow(cur, self.p**m)
            total = self.add(total, cur)
        return total

    @cached_property
    def tr1_table(self) -> np.ndarray:
        """tr_1^n of every encoding, as integers in [0, p)."""
        t = np.asarray(self.trace(self.elements(), 1), dtype=np.int64)
        t.flags.writeable = False
        return t

    @cached_property
    def trk_table(self) -> np.ndarray:
        t = np.asarray(self.trace(self.elements(), self.k), dtype=np.int64)
        t.flags.writeable = False
        return t

    @cached_property
    def tr1_exp(self) -> np.ndarray:
        """tr_1^n(alpha^i) for i in [0, N): the base m-sequence."""
        t = self.tr1_table[self.exp]
        t.flags.writeable = False
        return t

    @cached_property
    def dlog(self) -> np.ndarray:
        """d * log(x) mod N for x = alpha^i, indexed by i."""
        t = (np.arange(self.N, dtype=np.int64) * (self.d % self.N)) % self.N
        t.flags.writeable = False
        return t

    @cached_property
    def power_d(self) -> np.ndarray:
        """x -> x^d as a lookup table over all encodings."""
        t = np.asarray(self.pow(self.elements(), self.d), dtype=np.int64)
        t.flags.writeable = False
        return t

    def in_subfield(self, x, m: int):
        return np.asarray(self.pow(x, self.p**m)) == np.asarray(x)

    def subfield_elements(self, m: int) -> np.ndarray:
        if self.n % m != 0:
            raise ValueError(f"m = {m} does not divide n = {self.n}")
        step = self.N // (self.p**m - 1)
        return np.sort(np.concatenate([[0], self.exp[::step]]))

    def eta(self, x, m: int | None = None):
        """Quadratic character of F_{p^m}, m defaulting to n."""
        m = self.n if m is None else m
        xs = np.asarray(x, dtype=np.int64)
        if np.any(xs == 0):
            raise ZeroArgument("eta(0) is undefined")
        if not np.all(self.in_subfield(xs, m)):
            raise ValueError(f"argument is not in F_(p^{m})")
        v = np.asarray(self.pow(xs, (self.p**m - 1) // 2))
        if not np.all((v == 1) | (v == self.minus_one)):
            raise AssertionError("Euler criterion returned a value outside {1, -1}")
        r = np.where(v == 1, 1, -1)
        return int(r) if r.ndim == 0 else r

    @cached_property
    def dual_basis(self) -> tuple[int, ...]:
        """Trace-dual (w.r.t. tr_k^n) of the basis (1, alpha, ..., alpha^(e-1))."""
        e = self.e
        gram = [
            [int(self.trk_table[self.alpha_pow(i + j)]) for j in range(e)]
            for i in range(e)
        ]
        ginv = matrix_inverse(self, gram)
        out = []
        for i in range(e):
            acc = 0
            for m in range(e):
                acc = self.add(acc, self.mul(ginv[i][m], self.alpha_pow(m)))
            out.append(acc)
        return tuple(out)

    def subfield_coords(self, x) -> list:
        """Coordinates of ``x`` over F_{p^k} in the basis (1, alpha, ..., alpha^(e-1))."""
        coords = [self.trk_table[self.mul(x, g)] for g in self.dual_basis]
        return [int(c) if np.ndim(c) == 0 else c for c in coords]

    def from_coords(self, coords) -> int | np.ndarray:
        acc = 0
        for i, c in enumerate(coords):
            acc = self.add(acc, self.mul(c, self.alpha_pow(i)))
        return acc


def matrix_inverse(ctx: FieldCtx, M: list[list[int]]) -> list[list[int]]:
    """Gauss-Jordan inverse of a square matrix with entries in F_{p^n}."""
    size = len(M)
    A = [list(row) + [1 if i == j else 0 for j in range(size)] for i, row in enumerate(M)]
    for col in range(size):
        piv = next((r for r in range(col, size) if A[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[col], A[piv] = A[piv], A[col]
        s = ctx.inv(A[col][col])
        A[col] = [ctx.mul(s, v) for v in A[col]]
        for r in range(size):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [ctx.sub(v, ctx.mul(f, w)) for v, w in zip(A[r], A[col])]
    return [row[size:] for row in A]


def build_field(p: int, n: int, k: int, cap: int = DEFAULT_CAP, d: int | None = None) -> FieldCtx:
    """Validate (p, n, k[, d]) and build the table-backed field context."""
    params = FieldParams(p, n, k, d)
    q = params.q
    if q > cap:
        raise CapExceeded(f"p^n = {q} exceeds table cap {cap}")
    N = q - 1
    modulus = find_primitive_modulus(p, n)
    L = _companion(modulus[:-1], p)

    vecs = np.zeros((N, n), dtype=np.int64)
    vecs[0, 0] = 1
    m, Lm = 1, L.copy()
    while m < N:
        take = min(m, N - m)
        vecs[m : m + take] = (vecs[:take] @ Lm.T) % p
        m += take
        Lm = (Lm @ Lm) % p
    place = p ** np.arange(n, dtype=np.int64)
    exp = vecs @ place
    log = np.full(q, -1, dtype=np.int64)
    log[exp] = np.arange(N, dtype=np.int64)
    if np.any(log[1:] < 0):
        raise AssertionError("alpha is not primitive")
    digits = (np.arange(q, dtype=np.int64)[:, None] // place[None, :]) % p
    for arr in (exp, log, digits):
        arr.flags.writeable = False
    return FieldCtx(
        params=params,
        modulus=modulus,
        alpha=int(exp[1]),
        exp=exp,
        log=log,
        digits=digits,
    )
