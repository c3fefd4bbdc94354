"""Quadratic forms Q(x) = tr_k^n(s a x^(p^k+1) + b x^2) over F_{p^k}.

Two independent routes give the rank of Q: the kernel of the linearized
polynomial phi_{sa,b}, and Gram-matrix diagonalization. The diagonal form
also yields Delta, whose quadratic character fixes the sign of the
closed-form character sum.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .charsum import QuadValue, counts_to_quadvalue
from .errors import NonSubfieldKernel, UnsupportedBranch
from .gf import FieldCtx


@dataclass(frozen=True)
class LinearizedPoly:
    """c2 x^(p^2k) + c1 x^(p^k) + c0 x."""

    c2: int
    c1: int
    c0: int

    def __call__(self, ctx: FieldCtx, x):
        pk = ctx.p**ctx.k
        t2 = ctx.mul(self.c2, ctx.pow(x, pk * pk))
        t1 = ctx.mul(self.c1, ctx.pow(x, pk))
        return ctx.add(ctx.add(t2, t1), ctx.mul(self.c0, x))

    def is_zero(self) -> bool:
        return self.c2 == self.c1 == self.c0 == 0


@dataclass(frozen=True)
class DiagForm:
    rank: int
    delta: int
    eta_delta: int
    diagonal: tuple[int, ...] = field(default=(), compare=False)


def phi(ctx: FieldCtx, a: int, b: int, sign: int = 1) -> LinearizedPoly:
    """phi_{sign*a, b}(x) = (sa)^(p^k) x^(p^2k) + 2 b^(p^k) x^(p^k) + sa x."""
    sa = ctx.scale(sign % ctx.p, a)
    return LinearizedPoly(ctx.frobenius(sa, ctx.k), ctx.scale(2, ctx.frobenius(b, ctx.k)), sa)


# -- ranks over F_p ------------------------------------------------------------

def _inverse_table(p: int) -> np.ndarray:
    return np.array([0] + [pow(i, -1, p) for i in range(1, p)], dtype=np.int64)


def rank_mod_p(M, p: int) -> int:
    return int(batched_rank_mod_p(np.asarray(M, dtype=np.int64)[None], p)[0])


def batched_rank_mod_p(Ms: np.ndarray, p: int) -> np.ndarray:
    """Rank over F_p of each matrix in a (batch, rows, cols) stack."""
    M = np.array(Ms, dtype=np.int64) % p
    B, R, C = M.shape
    inv = _inverse_table(p)
    used = np.zeros((B, R), dtype=bool)
    rank = np.zeros(B, dtype=np.int64)
    for c in range(C):
        cand = (M[:, :, c] != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        bi = np.flatnonzero(has)
        pr = cand[bi].argmax(axis=1)
        prow = (M[bi, pr, :] * inv[M[bi, pr, c]][:, None]) % p
        M[bi, pr, :] = prow
        f = M[bi, :, c].copy()
        f[np.arange(len(bi)), pr] = 0
        M[bi] = (M[bi] - f[:, :, None] * prow[:, None, :]) % p
        used[bi, pr] = True
        rank[bi] += 1
    return rank


def phi_matrix(ctx: FieldCtx, lp: LinearizedPoly) -> np.ndarray:
    """n x n matrix over F_p of x -> lp(x) in the polynomial basis."""
    basis = ctx.p ** np.arange(ctx.n, dtype=np.int64)
    return ctx.digits[lp(ctx, basis)].T.copy()


def kernel_size(ctx: FieldCtx, lp: LinearizedPoly) -> int:
    if lp.is_zero():
        raise ValueError("zero linearized polynomial")
    return ctx.p ** (ctx.n - rank_mod_p(phi_matrix(ctx, lp), ctx.p))


class PhiMatrices:
    """phi_{sa,b} matrices are F_p-linear in (a, b); this precomputes the
    images of basis vectors so kernels can be computed in batches."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        n = ctx.n
        basis = [ctx.p**i for i in range(n)]
        self.a_part = np.stack([phi_matrix(ctx, phi(ctx, t, 0)) for t in basis]).reshape(n, n * n)
        self.b_part = np.stack([phi_matrix(ctx, phi(ctx, 0, t)) for t in basis]).reshape(n, n * n)

    def kernel_sizes(self, a, b, sign: int = 1) -> np.ndarray:
        ctx = self.ctx
        n, p = ctx.n, ctx.p
        Ad = ctx.digits[np.asarray(a, dtype=np.int64)]
        Bd = ctx.digits[np.asarray(b, dtype=np.int64)]
        Ms = ((sign % p) * (Ad @ self.a_part) + Bd @ self.b_part) % p
        ranks = batched_rank_mod_p(Ms.reshape(-1, n, n), p)
        return p ** (n - ranks)


def _log_pk(ctx: FieldCtx, size: int) -> int:
    pk = ctx.p**ctx.k
    t = 0
    while size % pk == 0 and size > 1:
        size //= pk
        t += 1
    if size != 1:
        raise NonSubfieldKernel(f"kernel size is not a power of p^k = {pk}")
    return t


def rank_of_form(ctx: FieldCtx, a: int, b: int, sign: int = 1) -> int:
    return ctx.e - _log_pk(ctx, kernel_size(ctx, phi(ctx, a, b, sign)))


# -- Gram matrices and diagonalization ------------------------------------------

def form_value(ctx: FieldCtx, a: int, b: int, sign: int, x):
    """Q(x) = tr_k^n(s a x^(p^k+1) + b x^2), an element of F_{p^k}."""
    sa = ctx.scale(sign % ctx.p, a)
    inner = ctx.add(ctx.mul(sa, ctx.pow(x, ctx.p**ctx.k + 1)), ctx.mul(b, ctx.pow(x, 2)))
    r = ctx.trk_table[inner]
    return int(r) if np.ndim(r) == 0 else r


def gram_matrix(ctx: FieldCtx, a: int, b: int, sign: int = 1) -> list[list[int]]:
    """Symmetric A with x^T A x = Q(x) in the basis (1, alpha, ..., alpha^(e-1))."""
    e = ctx.e
    half = (ctx.p + 1) // 2
    basis = [ctx.alpha_pow(i) for i in range(e)]
    diag = [form_value(ctx, a, b, sign, w) for w in basis]
    A = [[0] * e for _ in range(e)]
    for j in range(e):
        A[j][j] = diag[j]
        for l in range(j + 1, e):
            both = form_value(ctx, a, b, sign, ctx.add(basis[j], basis[l]))
            v = ctx.scale(half, ctx.sub(ctx.sub(both, diag[j]), diag[l]))
            A[j][l] = A[l][j] = v
    return A


def quadratic_eval(ctx: FieldCtx, A: list[list[int]], coords) -> int:
    acc = 0
    for j, row in enumerate(A):
        for l, v in enumerate(row):
            acc = ctx.add(acc, ctx.mul(v, ctx.mul(coords[j], coords[l])))
    return acc


def matrix_rank(ctx: FieldCtx, A: list[list[int]]) -> int:
    """Rank by plain row reduction over the field (no symmetry used)."""
    M = [list(r) for r in A]
    rank = 0
    cols = len(M[0]) if M else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        s = ctx.inv(M[rank][c])
        M[rank] = [ctx.mul(s, v) for v in M[rank]]
        for r in range(len(M)):
            if r != rank and M[r][c] != 0:
                f = M[r][c]
                M[r] = [ctx.sub(v, ctx.mul(f, w)) for v, w in zip(M[r], M[rank])]
        rank += 1
    return rank


def congruent_diagonalize(ctx: FieldCtx, M: list[list[int]], m: int | None = None) -> DiagForm:
    """Reduce a symmetric matrix over F_{p^m} to diag(h_1..h_r, 0..0) by congruence."""
    m = ctx.k if m is None else m
    A = [list(r) for r in M]
    size = len(A)

    def swap(i: int, j: int) -> None:
        A[i], A[j] = A[j], A[i]
        for row in A:
            row[i], row[j] = row[j], row[i]

    def add_to(i: int, j: int) -> None:
        # row_i += row_j, then col_i += col_j
        A[i] = [ctx.add(x, y) for x, y in zip(A[i], A[j])]
        for row in A:
            row[i] = ctx.add(row[i], row[j])

    diag = []
    for t in range(size):
        piv = next((i for i in range(t, size) if A[i][i] != 0), None)
        if piv is None:
            off = next(((i, j) for i in range(t, size) for j in range(i + 1, size) if A[i][j] != 0), None)
            if off is None:
                break
            i, j = off
            add_to(i, j)  # new A[i][i] = 2 A[i][j] != 0 since p is odd
            piv = i
        swap(t, piv)
        h = A[t][t]
        hinv = ctx.inv(h)
        for u in range(t + 1, size):
            f = ctx.mul(A[u][t], hinv)
            if f == 0:
                continue
            A[u] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(A[u], A[t])]
            for row in A:
                row[u] = ctx.sub(row[u], ctx.mul(f, row[t]))
        diag.append(h)
    delta = 1
    for h in diag:
        delta = ctx.mul(delta, h)
    return DiagForm(len(diag), delta, ctx.eta(delta, m), tuple(diag))


def qf_sum_closed(ctx: FieldCtx, df: DiagForm) -> QuadValue:
    """sum_x w^(tr_1^k Q(x)) for a form over F_{p^k} in e variables.

    Equals eta(Delta) G^r (p^k)^(e-r) with G = sqrt(p*)^k the quadratic Gauss
    sum of F_{p^k} (k odd).
    """
    p, k, e, r = ctx.p, ctx.k, ctx.e, df.rank
    if p**k % 4 != 3:
        raise UnsupportedBranch("closed form implemented only for p^k = 3 mod 4")
    return QuadValue.sqrt_pstar_power(p, k * r) * (df.eta_delta * p ** (k * (e - r)))


def s_closed(ctx: FieldCtx, a: int, b: int, sign: int = 1) -> QuadValue:
    """S_1 (sign=+1) or S_2 (sign=-1) via Gram diagonalization."""
    return qf_sum_closed(ctx, congruent_diagonalize(ctx, gram_matrix(ctx, a, b, sign)))


def s_direct(ctx: FieldCtx, a: int, b: int, sign: int = 1) -> QuadValue:
    """S_1 / S_2 by summing chi(s a x^(p^k+1) + b x^2) over every x."""
    x = ctx.elements()
    sa = ctx.scale(sign % ctx.p, a)
    t = ctx.tr1_table
    vals = (t[ctx.mul(sa, ctx.pow(x, ctx.p**ctx.k + 1))] + t[ctx.mul(b, ctx.pow(x, 2))]) % ctx.p
    return counts_to_quadvalue(np.bincount(vals, minlength=ctx.p), ctx.p)


def sab_dual_path(ctx: FieldCtx, a: int, b: int) -> QuadValue:
    """S(a, b) = (S_1 + S_2)/2 with both halves from closed forms."""
    total = s_closed(ctx, a, b, 1) + s_closed(ctx, a, b, -1)
    if total.two_a % 2 or total.two_b % 2:
        raise ArithmeticError(f"S_1 + S_2 = {total} is not divisible by 2")
    return QuadValue(ctx.p, total.two_a // 2, total.two_b // 2)


# -- censuses ---------------------------------------------------------------------

@dataclass
class KernelCensus:
    n1: int
    n2: int
    kernel_sizes: Counter
    sign_pair_violations: int
    exhaustive: bool

    def expected(self, ctx: FieldCtx) -> tuple[int, int]:
        return n1_n2_formula(ctx)


def n1_n2_formula(ctx: FieldCtx) -> tuple[int, int]:
    p, n, k, q = ctx.p, ctx.n, ctx.k, ctx.q
    n1 = 2 * p ** (n - k) * (q - 1)
    num = 2 * (p ** (n - k) - 1) * (q - 1)
    assert num % (p ** (2 * k) - 1) == 0
    return n1, num // (p ** (2 * k) - 1)


def _census_block(pm: PhiMatrices, a: np.ndarray, b: np.ndarray, weight: int, acc: dict) -> None:
    ctx = pm.ctx
    pk = ctx.p**ctx.k
    k_plus = pm.kernel_sizes(a, b, 1)
    k_minus = pm.kernel_sizes(a, b, -1)
    for ks in (k_plus, k_minus):
        vals, cnts = np.unique(ks, return_counts=True)
        for v, c in zip(vals.tolist(), cnts.tolist()):
            acc["sizes"][v] += c * weight
    acc["viol"] += int(np.count_nonzero((k_plus != 1) & (k_minus != 1))) * weight
    big = np.maximum(k_plus, k_minus)
    acc["n1"] += int(np.count_nonzero(big == pk)) * weight
    acc["n2"] += int(np.count_nonzero(big == pk * pk)) * weight


def n1_n2_census(ctx: FieldCtx, exhaustive: bool | None = None, chunk: int = 1 << 16) -> KernelCensus:
    """Count (a, b) in F* x F* whose phi_{+-a,b} kernel has size p^k (N1) or p^2k (N2).

    The non-exhaustive route uses the scaling x -> lambda x, under which
    (a, b) and (a lambda^(p^k+1), b lambda^2) have equal kernel sizes; b then
    only needs the representatives 1 and alpha, each standing for (p^n-1)/2
    values.
    """
    if exhaustive is None:
        exhaustive = ctx.q**2 <= 4_000_000
    pm = PhiMatrices(ctx)
    acc = {"sizes": Counter(), "viol": 0, "n1": 0, "n2": 0}
    nz = ctx.nonzero()
    if exhaustive:
        aa, bb = np.meshgrid(nz, nz, indexing="ij")
        aa, bb = aa.ravel(), bb.ravel()
        for s in range(0, len(aa), chunk):
            _census_block(pm, aa[s : s + chunk], bb[s : s + chunk], 1, acc)
    else:
        for b0 in (1, ctx.alpha):
            bb = np.full(len(nz), b0, dtype=np.int64)
            for s in range(0, len(nz), chunk):
                _census_block(pm, nz[s : s + chunk], bb[s : s + chunk], ctx.N // 2, acc)
    return KernelCensus(acc["n1"], acc["n2"], acc["sizes"], acc["viol"], exhaustive)


@dataclass
class BluherCensus:
    s: int
    g: int
    histogram: dict[int, int]
    unique_root_psi: int
    many_root_psi: int
    power_condition_ok: bool

    def expected(self, ctx: FieldCtx) -> tuple[int, int]:
        p, n, g = ctx.p, ctx.n, self.g
        return p ** (n - g), (p ** (n - g) - 1) // (p ** (2 * g) - 1)

    def support_ok(self, ctx: FieldCtx) -> bool:
        return set(self.histogram) <= {0, 1, 2, ctx.p**self.g + 1}


def bluher_census(ctx: FieldCtx, s: int) -> BluherCensus:
    """Root counts in F* of z^(p^s+1) - psi z + psi for every psi in F*.

    A nonzero z != 1 is a root for exactly one psi, namely z^(p^s+1)/(z-1),
    so one pass over z yields every count.
    """
    g = gcd(s, ctx.n)
    z = ctx.nonzero()
    z = z[z != 1]
    zm1 = ctx.sub(z, 1)
    psi = ctx.mul(ctx.pow(z, ctx.p**s + 1), ctx.inv(zm1))
    per_psi = np.bincount(psi, minlength=ctx.q)[1:]
    vals, cnts = np.unique(per_psi, return_counts=True)
    hist = {int(v): int(c) for v, c in zip(vals, cnts)}
    many = ctx.p**g + 1
    qualifying = np.isin(per_psi[psi - 1], [1, many])
    expo = (ctx.q - 1) // (ctx.p**g - 1)
    ok = bool(np.all(np.asarray(ctx.pow(zm1[qualifying], expo)) == 1))
    return BluherCensus(s, g, hist, hist.get(1, 0), hist.get(many, 0), ok)


# -- batched variants -------------------------------------------------------------

def gram_matrices(ctx: FieldCtx, a, b, sign: int = 1) -> np.ndarray:
    """Stack of Gram matrices, shape (len(a), e, e), for arrays a and b."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    e = ctx.e
    half = (ctx.p + 1) // 2
    basis = [ctx.alpha_pow(i) for i in range(e)]
    out = np.zeros((len(a), e, e), dtype=np.int64)
    diag = [np.asarray(form_value(ctx, a, b, sign, w)) for w in basis]
    for j in range(e):
        out[:, j, j] = diag[j]
        for l in range(j + 1, e):
            both = np.asarray(form_value(ctx, a, b, sign, ctx.add(basis[j], basis[l])))
            v = ctx.scale(half, ctx.sub(ctx.sub(both, diag[j]), diag[l]))
            out[:, j, l] = v
            out[:, l, j] = v
    return out


def batched_diagonalize(ctx: FieldCtx, Ms: np.ndarray, m: int | None = None):
    """Vectorised :func:`congruent_diagonalize`; returns (rank, delta, eta) arrays."""
    m = ctx.k if m is None else m
    A = np.array(Ms, dtype=np.int64)
    B, e, _ = A.shape
    rank = np.zeros(B, dtype=np.int64)
    delta = np.ones(B, dtype=np.int64)
    active = np.ones(B, dtype=bool)
    ar = np.arange(e)
    for t in range(e):
        idx = np.flatnonzero(active)
        if len(idx) == 0:
            break
        sub = A[idx]
        diag_nz = sub[:, ar, ar] != 0
        diag_nz[:, :t] = False
        has_diag = diag_nz.any(axis=1)
        piv = np.where(has_diag, diag_nz.argmax(axis=1), -1)

        # no usable diagonal: fold an off-diagonal entry onto the diagonal
        need = np.flatnonzero(~has_diag)
        if len(need):
            blk = sub[need] != 0
            blk[:, :t, :] = False
            blk[:, :, :t] = False
            blk[:, ar, ar] = False
            flat = blk.reshape(len(need), -1)
            found = flat.any(axis=1)
            done = need[~found]
            active[idx[done]] = False
            fix = need[found]
            pos = flat[found].argmax(axis=1)
            i, j = pos // e, pos % e
            rows = sub[fix]
            r_ = np.arange(len(fix))
            rows[r_, i, :] = ctx.add(rows[r_, i, :], rows[r_, j, :])
            rows[r_, :, i] = ctx.add(rows[r_, :, i], rows[r_, :, j])
            sub[fix] = rows
            piv[fix] = i
        keep = piv >= 0
        idx, sub, piv = idx[keep], sub[keep], piv[keep]
        if len(idx) == 0:
            break

        # symmetric swap of t and piv
        perm = np.tile(ar, (len(idx), 1))
        perm[np.arange(len(idx)), t] = piv
        perm[np.arange(len(idx)), piv] = t
        sub = sub[np.arange(len(idx))[:, None, None], perm[:, :, None], perm[:, None, :]]

        h = sub[:, t, t]
        hinv = np.asarray(ctx.inv(h))
        for u in range(t + 1, e):
            f = np.asarray(ctx.mul(sub[:, u, t], hinv))
            sub[:, u, :] = ctx.sub(sub[:, u, :], ctx.mul(f[:, None], sub[:, t, :]))
            sub[:, :, u] = ctx.sub(sub[:, :, u], ctx.mul(f[:, None], sub[:, :, t]))
        A[idx] = sub
        rank[idx] += 1
        delta[idx] = ctx.mul(delta[idx], h)
    eta = np.asarray(ctx.eta(delta, m))
    return rank, delta, eta


def s_closed_batch(ctx: FieldCtx, a, b, sign: int = 1) -> list[QuadValue]:
    rank, _, eta = batched_diagonalize(ctx, gram_matrices(ctx, a, b, sign))
    memo: dict[tuple[int, int], QuadValue] = {}
    out = []
    for r, s in zip(rank.tolist(), eta.tolist()):
        key = (r, s)
        if key not in memo:
            memo[key] = qf_sum_closed(ctx, DiagForm(r, 1, s))
        out.append(memo[key])
    return out


def sab_dual_path_batch(ctx: FieldCtx, a, b) -> list[QuadValue]:
    s1 = s_closed_batch(ctx, a, b, 1)
    s2 = s_closed_batch(ctx, a, b, -1)
    out = []
    for x, y in zip(s1, s2):
        t = x + y
        if t.two_a % 2 or t.two_b % 2:
            raise ArithmeticError(f"S_1 + S_2 = {t} is not divisible by 2")
        out.append(QuadValue(ctx.p, t.two_a // 2, t.two_b // 2))
    return out


def weil_excluded_pair(ctx: FieldCtx, s1: QuadValue, s2: QuadValue) -> bool:
    """True for (S_1, S_2) = (+-j p^(n/2), -+j p^k p^(n/2)) in either order."""
    if s1.two_a or s2.two_a:
        return False
    h = 2 * ctx.p ** ((ctx.n - 1) // 2)
    small, big = h, h * ctx.p**ctx.k
    mags = {abs(s1.two_b), abs(s2.two_b)}
    return mags == {small, big} and (s1.two_b > 0) != (s2.two_b > 0)
