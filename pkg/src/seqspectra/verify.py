"""The full property suite behind ``seqspectra verify``.

Checks run exhaustively when the field is small and on a seeded random
sample otherwise; each result records which mode was used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import code, expsum, oracle, quadform, seqfam
from .charsum import mu
from .gf import FieldCtx

EXHAUSTIVE_PAIRS = 200_000


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    mode: str = "exhaustive"

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "mode": self.mode, "detail": self.detail}


@dataclass
class VerifyReport:
    params: dict
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "params": self.params,
            "checks": [c.to_json() for c in self.checks],
            "allPassed": self.passed,
        }


def pair_sample(ctx: FieldCtx, samples: int, seed: int, nonzero: bool = False,
                limit: int | None = None):
    """All pairs when there are at most max(samples, limit), else a seeded sample."""
    limit = EXHAUSTIVE_PAIRS if limit is None else limit
    lo = 1 if nonzero else 0
    m = ctx.q - lo
    if m * m <= max(samples, limit):
        grid = np.arange(lo, ctx.q, dtype=np.int64)
        a, b = np.meshgrid(grid, grid, indexing="ij")
        return a.ravel(), b.ravel(), "exhaustive"
    rng = np.random.default_rng(seed)
    return rng.integers(lo, ctx.q, samples), rng.integers(lo, ctx.q, samples), f"sampled({samples})"


def run(ctx: FieldCtx, samples: int = 10_000, seed: int = 0, threads: int | None = None) -> VerifyReport:
    p, n, k, q = ctx.p, ctx.n, ctx.k, ctx.q
    rep = VerifyReport({"p": p, "n": n, "k": k, "d": ctx.d, "N": ctx.N})
    add = rep.checks.append

    add(Check("params: gcd(d, N) = 2 and d(p^k+1) = 2 mod N",
              gcd(ctx.d, ctx.N) == 2 and (ctx.d * (p**k + 1) - 2) % ctx.N == 0))

    rs = expsum.reduced_sums(ctx, threads)
    observed = set(rs.values)
    cands = set(expsum.candidate_values(ctx))
    add(Check("candidates: every S(a,b) is a candidate value", observed <= cands,
              f"{len(observed)} distinct values"))
    excl = [v for v in expsum.excluded_values(ctx) if v not in cands]
    add(Check("excluded-values: +-j(p^k-1)p^(n/2)/2 never occurs", not (observed & set(excl)),
              "coincides with +-j p^(n/2) when p^k = 3" if not excl else ""))

    bf = expsum.value_distribution_bruteforce(ctx, threads)
    cf = expsum.closed_form_distribution(ctx)
    add(Check("distribution: brute force equals closed form", bf == cf))
    for name, ok in expsum.moment_checks(bf, ctx).items():
        add(Check(f"moments: {name} = p^(2n)", ok))
    add(Check("conjugate-symmetry: Omega(v) = Omega(conj v)", expsum.conjugate_symmetric(bf)))
    add(Check("mu-integrality: mu(S)/p is an integer for every value",
              all((mu(v) / p).denominator == 1 for v in observed)))

    a, b, mode = pair_sample(ctx, samples, seed + 1)
    direct = expsum.sab_batch(ctx, a, b)
    via_table = [rs.values[i] for i in rs.ids(ctx, a, b).tolist()]
    add(Check("reduction: S(a,b) = S(1, b a^-d)", direct == via_table, mode=mode))

    keep = (a != 0) | (b != 0)
    a2, b2 = a[keep], b[keep]
    direct2 = [v for v, kp in zip(direct, keep.tolist()) if kp]
    s1 = quadform.s_closed_batch(ctx, a2, b2, 1)
    s2 = quadform.s_closed_batch(ctx, a2, b2, -1)
    halves = [x + y for x, y in zip(s1, s2)]
    dual_ok = all(h.two_a == 2 * v.two_a and h.two_b == 2 * v.two_b for h, v in zip(halves, direct2))
    add(Check("dual-path: (S1+S2)/2 from Gram closed forms equals direct S(a,b)", dual_ok, mode=mode))
    add(Check("excluded-pair: (S1, S2) never +-j p^(n/2), -+j p^k p^(n/2)",
              not any(quadform.weil_excluded_pair(ctx, x, y) for x, y in zip(s1, s2)), mode=mode))

    wa, wb, wmode = pair_sample(ctx, min(samples, 2000), seed + 2, nonzero=True, limit=0)
    weil = expsum.weil_bound_check(ctx, (p**k + 1) // 2, zip(wa.tolist(), wb.tolist()))
    add(Check("weil-bound: a x^((p^k+1)/2) + b x", weil.passed,
              f"checked {weil.checked}, max |sum|^2/bound^2 = {weil.max_ratio:.6f}", wmode))

    census = quadform.n1_n2_census(ctx)
    n1, n2 = quadform.n1_n2_formula(ctx)
    sizes_ok = set(census.kernel_sizes) <= {1, p**k, p ** (2 * k)}
    cmode = "exhaustive" if census.exhaustive else "orbit-reduced"
    add(Check("kernel-sizes: in {1, p^k, p^2k}", sizes_ok,
              str(dict(sorted(census.kernel_sizes.items()))), cmode))
    add(Check("kernel-sign-pair: one of phi_{+-a,b} has trivial kernel", census.sign_pair_violations == 0, mode=cmode))
    add(Check("kernel-census: N1, N2", (census.n1, census.n2) == (n1, n2),
              f"N1={census.n1} (expected {n1}), N2={census.n2} (expected {n2})", cmode))

    for s in range(1, max(n, 2)):
        bl = quadform.bluher_census(ctx, s)
        exp_u, exp_m = bl.expected(ctx)
        ok = (bl.support_ok(ctx) and bl.unique_root_psi == exp_u and bl.many_root_psi == exp_m
              and bl.power_condition_ok and sum(bl.histogram.values()) == q - 1)
        add(Check(f"bluher: root census s={s}", ok, str(bl.histogram)))

    wd = code.weight_distribution(ctx, threads)
    add(Check("weights: distribution equals closed form",
              wd == code.weight_distribution_closed(ctx), str(wd)))
    exhaustive_dim = q * q * ctx.N <= 50_000_000
    add(Check("dimension: c(a, b) injective, 2n", code.dimension_check(ctx, exhaustive_dim),
              mode="exhaustive" if exhaustive_dim else "generator-rank"))

    spec = seqfam.family_spectrum(ctx, "all-shifts", threads)
    bound = seqfam.family_bound_times4(ctx)
    mx = seqfam.max_norm4(spec)
    add(Check("family-bound: 4|C|^2 <= 4 + (p^k+1)^2 p^n", mx <= bound, f"max {mx} vs bound {bound}",
              "reduced-path"))

    oa, ob, omode = pair_sample(ctx, max(min(samples, 1000), 1000), seed + 3, limit=0)
    tol = 1e-6 * p ** (n / 2)
    worst = 0.0
    vals = [rs.values[i] for i in rs.ids(ctx, oa, ob).tolist()]
    for x, y, v in zip(oa.tolist(), ob.tolist(), vals):
        worst = max(worst, abs(oracle.float_sab(ctx, x, y) - v.to_complex()))
    add(Check("oracle: exact values match float sums", worst <= tol,
              f"max abs error {worst:.3e} (tol {tol:.3e})", omode))
    return rep
