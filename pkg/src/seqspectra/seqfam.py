"""The family G = {s_beta(t) = tr(alpha^t) + tr(beta alpha^(dt))} and its correlations.

Correlations are C(tau) = sum_t w^(s1(t+tau) - s2(t)), which equals
-1 + S(delta - 1, beta1 delta^d - beta2) with delta = alpha^tau.

Spectrum scopes (ordered pairs of family indices):
    "all-shifts"          every (beta1, beta2, tau) except beta1 == beta2 with tau == 0
    "distinct-pairs"      beta1 != beta2, every tau
    "out-of-phase-auto"   beta1 == beta2, tau != 0
"""

from __future__ import annotations

import numpy as np

from .charsum import QuadValue, counts_to_quadvalue
from .expsum import reduced_sums, sab
from .gf import FieldCtx

SCOPES = ("all-shifts", "distinct-pairs", "out-of-phase-auto")


def family_member(ctx: FieldCtx, beta: int) -> np.ndarray:
    t = np.arange(ctx.N, dtype=np.int64)
    u = ctx.tr1_exp
    second = ctx.tr1_table[ctx.mul(beta, ctx.alpha_pow(ctx.d * t % ctx.N))]
    return (u + second) % ctx.p


def family(ctx: FieldCtx) -> np.ndarray:
    """All p^n members, row beta is s_beta."""
    return np.stack([family_member(ctx, beta) for beta in range(ctx.q)])


def correlation(ctx: FieldCtx, beta1: int, beta2: int, tau: int) -> QuadValue:
    """Direct tally of the correlation at shift ``tau``."""
    if not 0 <= tau < ctx.N:
        raise ValueError(f"tau = {tau} outside [0, {ctx.N})")
    s1 = family_member(ctx, beta1)
    s2 = family_member(ctx, beta2)
    diff = (np.roll(s1, -tau) - s2) % ctx.p
    return counts_to_quadvalue(np.bincount(diff, minlength=ctx.p), ctx.p)


def correlation_via_sab(ctx: FieldCtx, beta1: int, beta2: int, tau: int) -> QuadValue:
    delta = ctx.alpha_pow(tau)
    a = ctx.sub(delta, 1)
    b = ctx.sub(ctx.mul(beta1, ctx.pow(delta, ctx.d)), beta2)
    return sab(ctx, a, b) - 1


def _check_scope(scope: str) -> None:
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}; expected one of {SCOPES}")


def _in_scope(scope: str, same: bool, tau: int) -> bool:
    if scope == "all-shifts":
        return not (same and tau == 0)
    if scope == "distinct-pairs":
        return not same
    return same and tau != 0


def family_spectrum_direct(ctx: FieldCtx, scope: str = "all-shifts") -> dict[QuadValue, int]:
    """Spectrum by tallying every in-scope correlation (small fields only)."""
    _check_scope(scope)
    p, N = ctx.p, ctx.N
    seqs = family(ctx)
    shift = (np.arange(N)[:, None] + np.arange(N)[None, :]) % N  # [tau, t] -> t + tau
    acc: dict[tuple[int, ...], int] = {}
    for b1 in range(ctx.q):
        shifted = seqs[b1][shift]  # (tau, t)
        for b2 in range(ctx.q):
            diff = (shifted - seqs[b2][None, :]) % p
            counts = np.stack([(diff == t).sum(axis=1) for t in range(p)], axis=1)
            for tau in range(N):
                if _in_scope(scope, b1 == b2, tau):
                    key = tuple(counts[tau].tolist())
                    acc[key] = acc.get(key, 0) + 1
    out: dict[QuadValue, int] = {}
    for key, c in acc.items():
        v = counts_to_quadvalue(key, p)
        out[v] = out.get(v, 0) + c
    return dict(sorted(out.items()))


def family_spectrum(ctx: FieldCtx, scope: str = "all-shifts", threads: int | None = None) -> dict[QuadValue, int]:
    """Spectrum through the S(a, b) tables.

    For a fixed tau, b = beta1 delta^d - beta2 runs over the field and each b
    is hit by p^n ordered pairs; the scope only removes the pairs with
    beta1 == beta2, which all sit at b = beta1 (delta^d - 1).
    """
    _check_scope(scope)
    rs = reduced_sums(ctx, threads)
    q = ctx.q
    b_all = ctx.elements()
    weights = np.zeros(len(rs.values), dtype=np.int64)
    for tau in range(ctx.N):
        delta = ctx.alpha_pow(tau)
        a = ctx.sub(delta, 1)
        ids = rs.ids(ctx, a, b_all)
        g = ctx.sub(ctx.pow(delta, ctx.d), 1)  # delta^d - 1
        # multiplicity of each b among beta1 == beta2 pairs
        same = np.zeros(q, dtype=np.int64)
        if g == 0:
            same[0] = q
        else:
            same[:] = 1
        total = np.full(q, q, dtype=np.int64)
        if scope == "all-shifts":
            mult = total - same if tau == 0 else total
        elif scope == "distinct-pairs":
            mult = total - same
        else:
            mult = same if tau != 0 else np.zeros(q, dtype=np.int64)
        weights += np.bincount(ids, weights=mult, minlength=len(rs.values)).astype(np.int64)
    out = {}
    for v, w in zip(rs.values, weights.tolist()):
        if w:
            c = v - 1
            out[c] = out.get(c, 0) + int(w)
    return dict(sorted(out.items()))


def family_bound_times4(ctx: FieldCtx) -> int:
    return 4 + (ctx.p**ctx.k + 1) ** 2 * ctx.q


def max_norm4(spectrum: dict[QuadValue, int]) -> int:
    return max((v.norm4() for v, c in spectrum.items() if c), default=0)
