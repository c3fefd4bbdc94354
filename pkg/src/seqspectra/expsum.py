"""Exact evaluation of S(a, b) = sum_x chi(ax + bx^d) and its value distribution.

Full distributions use the substitution x -> x/a, which gives
S(a, b) = S(1, b a^(-d)) for a != 0. Only the p^n sums S(1, c) and the p^n
sums S(0, b) are ever tallied, so a distribution costs O(p^(2n)) lookups.
"""

from __future__ import annotations

import os
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import mpmath
import numpy as np

from .charsum import QuadValue, counts_to_quadvalue, count_rows_to_quadvalues
from .errors import NonIntegerCount
from .gf import FieldCtx

_CHUNK_ELEMS = 1 << 21


def default_threads() -> int:
    return os.cpu_count() or 1


def sab_counts(ctx: FieldCtx, a: int, b: int) -> np.ndarray:
    """Tally of tr(ax + bx^d) over every x, as a length-p vector."""
    x = ctx.elements()
    vals = (ctx.tr1_table[ctx.mul(a, x)] + ctx.tr1_table[ctx.mul(b, ctx.power_d)]) % ctx.p
    return np.bincount(vals, minlength=ctx.p)


def sab(ctx: FieldCtx, a: int, b: int) -> QuadValue:
    return counts_to_quadvalue(sab_counts(ctx, a, b), ctx.p)


def _rows_for_exponents(ctx: FieldCtx, ms: np.ndarray, with_linear: bool) -> np.ndarray:
    # row i tallies tr(x) + tr(alpha^ms[i] x^d) (or just the second term) over x in F
    u, D, N, p = ctx.tr1_exp, ctx.dlog, ctx.N, ctx.p
    idx = (ms[:, None] + D[None, :]) % N
    vals = u[idx]
    if with_linear:
        vals = (vals + u[None, :]) % p
    vals = vals + (np.arange(len(ms), dtype=np.int64) * p)[:, None]
    counts = np.bincount(vals.ravel(), minlength=len(ms) * p).reshape(len(ms), p)
    counts[:, 0] += 1  # x = 0
    return counts


def _count_table(ctx: FieldCtx, with_linear: bool, threads: int) -> np.ndarray:
    N, p, q = ctx.N, ctx.p, ctx.q
    rows_per_chunk = max(1, _CHUNK_ELEMS // N)
    chunks = [
        np.arange(s, min(s + rows_per_chunk, N), dtype=np.int64)
        for s in range(0, N, rows_per_chunk)
    ]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda ms: _rows_for_exponents(ctx, ms, with_linear), chunks))
    else:
        parts = [_rows_for_exponents(ctx, ms, with_linear) for ms in chunks]
    by_exponent = np.concatenate(parts)

    table = np.zeros((q, p), dtype=np.int64)
    table[ctx.exp] = by_exponent
    if with_linear:
        table[0] = np.bincount(ctx.tr1_table, minlength=p)  # S(1, 0)
    else:
        table[0, 0] = q  # S(0, 0)
    return table


@dataclass(frozen=True, eq=False)
class ReducedSums:
    """S(1, c) and S(0, c) for every c, stored as ids into ``values``."""

    values: tuple[QuadValue, ...]
    one_ids: np.ndarray
    zero_ids: np.ndarray
    one_counts: np.ndarray
    zero_counts: np.ndarray

    def ids(self, ctx: FieldCtx, a, b) -> np.ndarray:
        """Value ids of S(a, b), vectorised over arrays a and b."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        safe_a = np.where(a == 0, 1, a)
        c = ctx.mul(b, ctx.pow(safe_a, -ctx.d))
        return np.where(a == 0, self.zero_ids[b], self.one_ids[c])

    def value(self, ctx: FieldCtx, a: int, b: int) -> QuadValue:
        return self.values[int(self.ids(ctx, a, b))]


_reduced_cache: "weakref.WeakKeyDictionary[FieldCtx, ReducedSums]" = weakref.WeakKeyDictionary()


def reduced_sums(ctx: FieldCtx, threads: int | None = None) -> ReducedSums:
    """Tabulate S(1, c) and S(0, c); cached per context."""
    cached = _reduced_cache.get(ctx)
    if cached is not None:
        return cached
    threads = default_threads() if threads is None else threads
    one = _count_table(ctx, True, threads)
    zero = _count_table(ctx, False, threads)
    both = np.concatenate([one, zero])
    uniq, inverse = np.unique(both, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    values = tuple(count_rows_to_quadvalues(uniq, ctx.p))
    for arr in (one, zero):
        arr.flags.writeable = False
    out = ReducedSums(
        values=values,
        one_ids=inverse[: ctx.q],
        zero_ids=inverse[ctx.q :],
        one_counts=one,
        zero_counts=zero,
    )
    _reduced_cache[ctx] = out
    return out


def clear_cache() -> None:
    _reduced_cache.clear()


def candidate_values(ctx: FieldCtx) -> list[QuadValue]:
    """The ten candidate values v0..v9 in their conventional order."""
    p, n, k = ctx.p, ctx.n, ctx.k
    h = p ** ((n - 1) // 2)  # j p^(n/2) = h sqrt(p*)
    r = p ** ((n + k) // 2)  # sqrt(p^k) p^(n/2)
    pk = p**k
    return [
        QuadValue(p, 2 * p**n, 0),
        QuadValue(p, 0, 0),
        QuadValue(p, 0, 2 * h),
        QuadValue(p, 0, -2 * h),
        QuadValue(p, r, h),
        QuadValue(p, r, -h),
        QuadValue(p, -r, h),
        QuadValue(p, -r, -h),
        QuadValue(p, 0, (pk + 1) * h),
        QuadValue(p, 0, -(pk + 1) * h),
    ]


def excluded_values(ctx: FieldCtx) -> list[QuadValue]:
    """+-j (p^k - 1)/2 p^(n/2), ruled out by the Weil bound."""
    h = ctx.p ** ((ctx.n - 1) // 2)
    t = (ctx.p**ctx.k - 1) * h
    return [QuadValue(ctx.p, 0, t), QuadValue(ctx.p, 0, -t)]


def value_distribution_bruteforce(ctx: FieldCtx, threads: int | None = None) -> dict[QuadValue, int]:
    """Occurrence count of every S(a, b) over all p^(2n) pairs."""
    rs = reduced_sums(ctx, threads)
    one = np.bincount(rs.one_ids, minlength=len(rs.values))
    zero = np.bincount(rs.zero_ids, minlength=len(rs.values))
    dist: dict[QuadValue, int] = {}
    for i, v in enumerate(rs.values):
        c = int(one[i]) * ctx.N + int(zero[i])
        if c:
            dist[v] = c
    return dict(sorted(dist.items()))


def _exact_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise NonIntegerCount(f"{what} = {x} is not an integer")
    if x < 0:
        raise NonIntegerCount(f"{what} = {x} is negative")
    return int(x)


def closed_form_counts(ctx: FieldCtx) -> list[int]:
    """Omega_0..Omega_9 from the closed-form distribution, aligned with candidate_values."""
    p, n, k = ctx.p, ctx.n, ctx.k
    q, pk = p**n, p**k
    F = Fraction
    s = p ** ((n - k) // 2)
    zero = F((pk - 1) * (q * q - 1), 2 * (pk + 1))
    jay = F(q * q - 1, 4) - F((q - 1) ** 2, 2 * (pk - 1))
    plus = F((q - 1) * (p ** (n - k) + s), 2)
    minus = F((q - 1) * (p ** (n - k) - s), 2)
    big = F((p ** (n - k) - 1) * (q - 1), p ** (2 * k) - 1)
    raw = [F(1), zero, jay, jay, plus, plus, minus, minus, big, big]
    names = ["p^n", "0", "+j", "-j", "v4", "v5", "v6", "v7", "v8", "v9"]
    return [_exact_int(x, f"Omega({nm})") for x, nm in zip(raw, names)]


def closed_form_distribution(ctx: FieldCtx) -> dict[QuadValue, int]:
    """Closed-form distribution; values with count zero are omitted."""
    dist: dict[QuadValue, int] = {}
    for v, c in zip(candidate_values(ctx), closed_form_counts(ctx)):
        if c:
            dist[v] = dist.get(v, 0) + c
    return dict(sorted(dist.items()))


def moment_checks(dist: dict[QuadValue, int], ctx: FieldCtx) -> dict[str, bool]:
    """Zeroth, first and second moments must all equal p^(2n) exactly."""
    target = QuadValue.integer(ctx.p, ctx.q**2)
    zero = QuadValue(ctx.p, 0, 0)
    m0 = sum(dist.values())
    m1 = sum((v * c for v, c in dist.items()), zero)
    m2 = sum((v * v * c for v, c in dist.items()), zero)
    return {
        "sum_count": m0 == ctx.q**2,
        "sum_value": m1 == target,
        "sum_value_squared": m2 == target,
    }


def conjugate_symmetric(dist: dict[QuadValue, int]) -> bool:
    return all(dist.get(v.conj(), 0) == c for v, c in dist.items())


def magnitude_bound_times4(ctx: FieldCtx) -> int:
    """4 (1 + ((p^k+1)/2)^2 p^n)."""
    return 4 + (ctx.p**ctx.k + 1) ** 2 * ctx.q


@dataclass
class WeilReport:
    degree: int
    checked: int
    violations: int
    max_ratio: float  # largest |sum|^2 / bound^2 seen

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _abs2_exceeds(counts: np.ndarray, p: int, bound_sq: int) -> tuple[bool, float]:
    # |sum c_t w^t|^2 = sum_u r_u w^u with r the cyclic autocorrelation of c
    c = [int(x) for x in counts]
    r = [sum(c[t] * c[(t - u) % p] for t in range(p)) for u in range(p)]
    if len(set(r[1:])) <= 1:
        val = r[0] - (r[1] if p > 1 else 0)
        return val > bound_sq, val / bound_sq if bound_sq else float(val > 0)
    with mpmath.workdps(60):
        val = mpmath.mpf(r[0]) + sum(
            r[u] * 2 * mpmath.cos(2 * mpmath.pi * u / p) for u in range(1, (p + 1) // 2)
        )
        return val > bound_sq, float(val / bound_sq) if bound_sq else float(val > 0)


def weil_bound_check(ctx: FieldCtx, degree: int, samples: Iterable[tuple[int, int]]) -> WeilReport:
    """Check |sum chi(a x^degree + b x)| <= (degree - 1) p^(n/2) on each sample."""
    if degree < 1 or degree % ctx.p == 0:
        raise ValueError(f"degree {degree} must be positive and prime to p")
    x = ctx.elements()
    xl = ctx.pow(x, degree)
    bound_sq = (degree - 1) ** 2 * ctx.q
    checked = violations = 0
    worst = 0.0
    for a, b in samples:
        if degree == 1 and ctx.add(a, b) == 0:
            continue  # f is identically zero
        vals = (ctx.tr1_table[ctx.mul(a, xl)] + ctx.tr1_table[ctx.mul(b, x)]) % ctx.p
        counts = np.bincount(vals, minlength=ctx.p)
        bad, ratio = _abs2_exceeds(counts, ctx.p, bound_sq)
        checked += 1
        violations += bad
        worst = max(worst, ratio)
    return WeilReport(degree, checked, violations, worst)


def sab_batch(ctx: FieldCtx, a, b) -> list[QuadValue]:
    """Direct tallies of S(a_i, b_i) for paired arrays, no reduction identity."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    x = ctx.elements()
    p = ctx.p
    rows = max(1, _CHUNK_ELEMS // ctx.q)
    out: list[QuadValue] = []
    for s in range(0, len(a), rows):
        aa, bb = a[s : s + rows, None], b[s : s + rows, None]
        vals = (ctx.tr1_table[ctx.mul(aa, x[None, :])] + ctx.tr1_table[ctx.mul(bb, ctx.power_d[None, :])]) % p
        vals = vals + (np.arange(len(aa), dtype=np.int64) * p)[:, None]
        counts = np.bincount(vals.ravel(), minlength=len(aa) * p).reshape(len(aa), p)
        out.extend(count_rows_to_quadvalues(counts, p))
    return out
