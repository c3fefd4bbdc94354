"""The cyclic code C = {c(a, b) : c_i = tr(a alpha^i + b alpha^(di))} and its weights.

The weight of c(a, b) is p^(n-1)(p-1) - mu(S(a, b))/p, so the weight
distribution follows from the value distribution of S without touching
individual codewords.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .charsum import QuadValue, mu
from .errors import NonIntegerWeight
from .expsum import reduced_sums, sab, value_distribution_bruteforce
from .gf import FieldCtx
from .quadform import rank_mod_p


def codeword(ctx: FieldCtx, a: int, b: int) -> np.ndarray:
    i = np.arange(ctx.N, dtype=np.int64)
    first = ctx.tr1_table[ctx.mul(a, ctx.exp)]
    second = ctx.tr1_table[ctx.mul(b, ctx.alpha_pow(ctx.d * i % ctx.N))]
    return (first + second) % ctx.p


def codewords_for_a(ctx: FieldCtx, a: int) -> np.ndarray:
    """Rows c(a, b) for every b, indexed by the encoding of b."""
    first = ctx.tr1_table[ctx.mul(a, ctx.exp)]
    bd = ctx.mul(ctx.elements()[:, None], ctx.exp[ctx.dlog][None, :])
    return (first[None, :] + ctx.tr1_table[bd]) % ctx.p


def weight_from_value(ctx: FieldCtx, v: QuadValue) -> int:
    w = Fraction(ctx.p ** (ctx.n - 1) * (ctx.p - 1)) - mu(v) / ctx.p
    if w.denominator != 1 or not 0 <= w <= ctx.N:
        raise NonIntegerWeight(f"weight {w} from S = {v} is not an integer in [0, N]")
    return int(w)


def weight_via_mu(ctx: FieldCtx, a: int, b: int) -> int:
    return weight_from_value(ctx, sab(ctx, a, b))


def weight_distribution(ctx: FieldCtx, threads: int | None = None) -> dict[int, int]:
    """Weight distribution composed from the brute-force S-value distribution."""
    out: dict[int, int] = {}
    for v, c in value_distribution_bruteforce(ctx, threads).items():
        w = weight_from_value(ctx, v)
        out[w] = out.get(w, 0) + c
    return dict(sorted(out.items()))


def weight_distribution_closed(ctx: FieldCtx) -> dict[int, int]:
    """Closed-form weight distribution; zero-count weights dropped."""
    p, n, k, q = ctx.p, ctx.n, ctx.k, ctx.q
    s = p ** ((n - k) // 2)
    half = p ** ((n + k) // 2 - 1)
    base = p ** (n - 1) * (p - 1)
    if (p - 1) * half % 2:
        raise NonIntegerWeight("(p-1) p^((n+k)/2-1) / 2 is not an integer")
    dev = (p - 1) * half // 2
    table = [
        (0, 1),
        (base, (q - 1) * (q - 2 * p ** (n - k) + 1)),
        (base + dev, (q - 1) * (p ** (n - k) - s)),
        (base - dev, (q - 1) * (p ** (n - k) + s)),
    ]
    out: dict[int, int] = {}
    for w, c in table:
        if c:
            out[w] = out.get(w, 0) + c
    return dict(sorted(out.items()))


def dimension_check(ctx: FieldCtx, exhaustive: bool | None = None) -> bool:
    """True iff (a, b) -> c(a, b) is injective, i.e. the code has dimension 2n.

    The exhaustive route hashes every codeword; the other computes the F_p
    rank of the 2n generator rows c(alpha^t, 0), c(0, alpha^t).
    """
    if exhaustive is None:
        exhaustive = ctx.q**2 * ctx.N <= 50_000_000
    if exhaustive:
        seen = set()
        for a in range(ctx.q):
            for row in codewords_for_a(ctx, a):
                seen.add(row.tobytes())
        return len(seen) == ctx.q**2
    basis = [ctx.p**i for i in range(ctx.n)]
    rows = [codeword(ctx, t, 0) for t in basis] + [codeword(ctx, 0, t) for t in basis]
    return rank_mod_p(np.stack(rows), ctx.p) == 2 * ctx.n


def weights_all_pairs(ctx: FieldCtx, threads: int | None = None) -> np.ndarray:
    """Weight of c(a, b) via mu for every pair, shape (q, q) indexed [a, b]."""
    rs = reduced_sums(ctx, threads)
    wv = np.array([weight_from_value(ctx, v) for v in rs.values], dtype=np.int64)
    out = np.empty((ctx.q, ctx.q), dtype=np.int64)
    b = ctx.elements()
    for a in range(ctx.q):
        out[a] = wv[rs.ids(ctx, a, b)]
    return out
