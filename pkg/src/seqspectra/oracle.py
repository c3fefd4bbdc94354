"""Slow, independent reference computations used to cross-check the fast paths.

Nothing here touches the log/antilog tables for multiplication: powers are
taken by square-and-multiply on coefficient vectors modulo the defining
polynomial.
"""

from __future__ import annotations

import cmath
from typing import Callable

import numpy as np

from .charsum import QuadValue, counts_to_quadvalue
from .gf import FieldCtx


def float_char_sum(ctx: FieldCtx, f: Callable[[np.ndarray], np.ndarray]) -> complex:
    """sum_x exp(2 pi i f(x) / p) over every encoding x, in double precision."""
    expo = np.asarray(f(ctx.elements()), dtype=np.int64) % ctx.p
    return complex(np.sum(np.exp(2j * np.pi * expo / ctx.p)))


def exhaustive_roots(ctx: FieldCtx, evaluator: Callable[[np.ndarray], np.ndarray], nonzero: bool = False) -> list[int]:
    xs = ctx.nonzero() if nonzero else ctx.elements()
    vals = np.asarray(evaluator(xs))
    return xs[vals == 0].tolist()


def naive_weight(cw) -> int:
    return int(np.count_nonzero(np.asarray(cw)))


# -- polynomial-basis arithmetic without tables ----------------------------------

def _coeffs(ctx: FieldCtx, x: int) -> list[int]:
    return [(x // ctx.p**i) % ctx.p for i in range(ctx.n)]


def _enc(ctx: FieldCtx, c: list[int]) -> int:
    return sum((v % ctx.p) * ctx.p**i for i, v in enumerate(c))


def poly_mul(ctx: FieldCtx, x: int, y: int) -> int:
    p, n = ctx.p, ctx.n
    cx, cy = _coeffs(ctx, x), _coeffs(ctx, y)
    prod = [0] * (2 * n - 1)
    for i, u in enumerate(cx):
        if u:
            for j, v in enumerate(cy):
                prod[i + j] += u * v
    mod = ctx.modulus
    for deg in range(2 * n - 2, n - 1, -1):
        c = prod[deg] % p
        if c:
            for i in range(n + 1):
                prod[deg - n + i] -= c * mod[i]
    return _enc(ctx, [v % p for v in prod[:n]])


def poly_pow(ctx: FieldCtx, x: int, e: int) -> int:
    result, base = 1, x
    while e:
        if e & 1:
            result = poly_mul(ctx, result, base)
        base = poly_mul(ctx, base, base)
        e >>= 1
    return result


def poly_trace(ctx: FieldCtx, x: int) -> int:
    """Absolute trace as an integer in [0, p)."""
    total = [0] * ctx.n
    cur = x
    for _ in range(ctx.n):
        total = [(s + c) for s, c in zip(total, _coeffs(ctx, cur))]
        cur = poly_pow(ctx, cur, ctx.p)
    t = [v % ctx.p for v in total]
    assert all(v == 0 for v in t[1:]), "trace left the prime field"
    return t[0]


def naive_sab(ctx: FieldCtx, a: int, b: int) -> QuadValue:
    """S(a, b) by summing over every x with table-free arithmetic."""
    counts = [0] * ctx.p
    for x in range(ctx.q):
        u = _enc(ctx, [s + t for s, t in zip(_coeffs(ctx, poly_mul(ctx, a, x)),
                                              _coeffs(ctx, poly_mul(ctx, b, poly_pow(ctx, x, ctx.d))))])
        counts[poly_trace(ctx, u)] += 1
    return counts_to_quadvalue(counts, ctx.p)


def naive_value_distribution(ctx: FieldCtx) -> dict[QuadValue, int]:
    """O(p^(3n)) distribution; only for the smallest fields."""
    tr = [poly_trace(ctx, x) for x in range(ctx.q)]
    xd = [poly_pow(ctx, x, ctx.d) for x in range(ctx.q)]
    dist: dict[QuadValue, int] = {}
    p = ctx.p
    for a in range(ctx.q):
        ax = [poly_mul(ctx, a, x) for x in range(ctx.q)]
        for b in range(ctx.q):
            counts = [0] * p
            for x in range(ctx.q):
                # trace is additive: tr(ax + b x^d) = tr(ax) + tr(b x^d)
                counts[(tr[ax[x]] + tr[poly_mul(ctx, b, xd[x])]) % p] += 1
            v = counts_to_quadvalue(counts, p)
            dist[v] = dist.get(v, 0) + 1
    return dict(sorted(dist.items()))


def float_sab(ctx: FieldCtx, a: int, b: int) -> complex:
    return float_char_sum(ctx, lambda x: ctx.tr1_table[ctx.mul(a, x)] + ctx.tr1_table[ctx.mul(b, ctx.power_d)])


def omega(p: int) -> complex:
    return cmath.exp(2j * cmath.pi / p)
