from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import field
from seqspectra.charsum import QuadValue
from seqspectra.errors import NonSubfieldKernel, UnsupportedBranch
from seqspectra.expsum import reduced_sums, sab, sab_batch
from seqspectra.oracle import exhaustive_roots
from seqspectra.quadform import (
    DiagForm,
    LinearizedPoly,
    PhiMatrices,
    _log_pk,
    batched_diagonalize,
    batched_rank_mod_p,
    bluher_census,
    congruent_diagonalize,
    form_value,
    gram_matrices,
    gram_matrix,
    kernel_size,
    matrix_rank,
    n1_n2_census,
    n1_n2_formula,
    phi,
    qf_sum_closed,
    quadratic_eval,
    rank_mod_p,
    rank_of_form,
    s_closed,
    s_closed_batch,
    s_direct,
    sab_dual_path,
    sab_dual_path_batch,
    weil_excluded_pair,
)


def all_pairs(ctx, lo=0):
    g = np.arange(lo, ctx.q)
    return [m.ravel() for m in np.meshgrid(g, g, indexing="ij")]


# -- linearized polynomials and kernels ----------------------------------------------

def test_phi_coefficients(f731):
    ctx = f731
    a, b = 5, 77
    pk = ctx.p**ctx.k
    lp = phi(ctx, a, b, 1)
    assert lp == LinearizedPoly(ctx.pow(a, pk), ctx.scale(2, ctx.pow(b, pk)), a)
    lm = phi(ctx, a, b, -1)
    assert lm == LinearizedPoly(ctx.pow(ctx.neg(a), pk), ctx.scale(2, ctx.pow(b, pk)), ctx.neg(a))


def test_kernel_identity(f331):
    assert kernel_size(f331, LinearizedPoly(0, 0, 1)) == 1
    with pytest.raises(ValueError):
        kernel_size(f331, LinearizedPoly(0, 0, 0))


def test_kernel_b_zero_is_power_of_p(f731):
    for a in range(1, f731.q, 17):
        size = kernel_size(f731, phi(f731, a, 0))
        assert size in {1, 7, 49, 343}


@pytest.mark.parametrize("pnk", [(3, 3, 1), (3, 3, 3), (7, 3, 1)])
def test_kernel_matches_root_scan(pnk):
    ctx = field(*pnk)
    rng = np.random.default_rng(2)
    for a, b in rng.integers(0, ctx.q, (300, 2)).tolist():
        if a == b == 0:
            continue
        lp = phi(ctx, a, b, 1)
        roots = exhaustive_roots(ctx, lambda x: lp(ctx, x))
        assert len(roots) == kernel_size(ctx, lp)


@pytest.mark.parametrize("pnk", [(3, 3, 1), (3, 5, 1), (7, 3, 1), (3, 3, 3)])
def test_kernel_sizes_and_sign_pair_exhaustive(pnk):
    ctx = field(*pnk)
    census = n1_n2_census(ctx, exhaustive=True)
    pk = ctx.p**ctx.k
    assert set(census.kernel_sizes) <= {1, pk, pk * pk}
    assert census.sign_pair_violations == 0
    assert (census.n1, census.n2) == n1_n2_formula(ctx)


def test_n1_n2_examples():
    assert n1_n2_formula(field(3, 3, 1)) == (468, 52)
    assert n1_n2_formula(field(3, 3, 3))[1] == 0
    assert n1_n2_formula(field(3, 5, 1))[0] == 39204
    c = n1_n2_census(field(3, 3, 1))
    assert (c.n1, c.n2) == (468, 52) and c.exhaustive


@pytest.mark.parametrize("pnk", [(3, 3, 1), (7, 3, 1), (3, 5, 1)])
def test_orbit_census_equals_exhaustive(pnk):
    ctx = field(*pnk)
    full = n1_n2_census(ctx, exhaustive=True)
    orbit = n1_n2_census(ctx, exhaustive=False)
    assert (orbit.n1, orbit.n2, orbit.sign_pair_violations) == (full.n1, full.n2, full.sign_pair_violations)
    assert orbit.kernel_sizes == full.kernel_sizes


def test_phi_matrices_match_scalar(f731):
    pm = PhiMatrices(f731)
    rng = np.random.default_rng(4)
    a, b = rng.integers(0, f731.q, (2, 200))
    for sign in (1, -1):
        sizes = pm.kernel_sizes(a, b, sign)
        for x, y, s in zip(a.tolist(), b.tolist(), sizes.tolist()):
            if x or y:
                assert s == kernel_size(f731, phi(f731, x, y, sign))


def test_rank_mod_p():
    assert rank_mod_p(np.eye(4, dtype=int), 3) == 4
    assert rank_mod_p([[1, 2], [2, 4]], 7) == 1
    assert rank_mod_p([[1, 1], [1, 1]], 2) == 1
    assert rank_mod_p(np.zeros((3, 3), dtype=int), 5) == 0
    rng = np.random.default_rng(0)
    Ms = rng.integers(0, 3, (100, 4, 4))
    assert batched_rank_mod_p(Ms, 3).tolist() == [rank_mod_p(M, 3) for M in Ms]


def test_rank_of_form(f731):
    ctx = f731
    for a, b in [(1, 0), (0, 1), (3, 4), (100, 200)]:
        for sign in (1, -1):
            r = rank_of_form(ctx, a, b, sign)
            assert r in {ctx.e, ctx.e - 1, ctx.e - 2}
            assert ctx.p ** (ctx.k * (ctx.e - r)) == kernel_size(ctx, phi(ctx, a, b, sign))


def test_log_pk_rejects_non_power():
    ctx = field(3, 9, 3)
    assert _log_pk(ctx, 27 * 27) == 2
    with pytest.raises(NonSubfieldKernel):
        _log_pk(ctx, 9)


# -- Gram matrices ------------------------------------------------------------------

@pytest.mark.parametrize("pnk", [(3, 3, 1), (3, 9, 3), (7, 3, 1), (3, 5, 1)])
def test_gram_reproduces_form(pnk):
    ctx = field(*pnk)
    rng = np.random.default_rng(9)
    for a, b in rng.integers(0, ctx.q, (5, 2)).tolist():
        for sign in (1, -1):
            A = gram_matrix(ctx, a, b, sign)
            assert all(A[i][j] == A[j][i] for i in range(ctx.e) for j in range(ctx.e))
            for x in rng.integers(0, ctx.q, 20).tolist():
                coords = ctx.subfield_coords(x)
                assert quadratic_eval(ctx, A, coords) == form_value(ctx, a, b, sign, x)


@pytest.mark.parametrize("pnk", [(3, 3, 1), (3, 9, 3), (7, 3, 1), (3, 5, 1)])
def test_gram_rank_equals_kernel_rank(pnk):
    ctx = field(*pnk)
    rng = np.random.default_rng(10)
    pairs = rng.integers(0, ctx.q, (60, 2)).tolist() + [(1, 0), (0, 1)]
    for a, b in pairs:
        if a == b == 0:
            continue
        for sign in (1, -1):
            A = gram_matrix(ctx, a, b, sign)
            r = rank_of_form(ctx, a, b, sign)
            assert matrix_rank(ctx, A) == r
            assert congruent_diagonalize(ctx, A).rank == r


def test_gram_e1(f333):
    b = 5
    A = gram_matrix(f333, 0, b)
    # tr_k^n is the identity when k = n, so Q(x) = b x^2
    assert A == [[b]]
    assert matrix_rank(f333, A) == 1


def test_gram_matrices_batched(f731):
    rng = np.random.default_rng(1)
    a, b = rng.integers(0, f731.q, (2, 50))
    G = gram_matrices(f731, a, b, -1)
    for i in range(50):
        assert G[i].tolist() == gram_matrix(f731, int(a[i]), int(b[i]), -1)


# -- diagonalization -----------------------------------------------------------------

def test_diagonalize_trivial(f731):
    z = congruent_diagonalize(f731, [[0] * 3 for _ in range(3)])
    assert (z.rank, z.delta, z.eta_delta) == (0, 1, 1)
    eye = congruent_diagonalize(f731, [[int(i == j) for j in range(3)] for i in range(3)])
    assert (eye.rank, eye.delta, eye.eta_delta) == (3, 1, 1)


def test_diagonalize_zero_diagonal(f731):
    # hyperbolic plane: needs the off-diagonal fold
    d = congruent_diagonalize(f731, [[0, 1], [1, 0]])
    assert d.rank == 2
    # det = -1, a non-square in F_7
    assert d.eta_delta == -1


def _random_invertible(ctx, rng, e, subfield):
    while True:
        P = [[int(subfield[i]) for i in rng.integers(0, len(subfield), e)] for _ in range(e)]
        if matrix_rank(ctx, P) == e:
            return P


def _congruence(ctx, P, M):
    e = len(M)
    PM = [[0] * e for _ in range(e)]
    for i in range(e):
        for j in range(e):
            acc = 0
            for t in range(e):
                acc = ctx.add(acc, ctx.mul(P[i][t], M[t][j]))
            PM[i][j] = acc
    out = [[0] * e for _ in range(e)]
    for i in range(e):
        for j in range(e):
            acc = 0
            for t in range(e):
                acc = ctx.add(acc, ctx.mul(PM[i][t], P[j][t]))
            out[i][j] = acc
    return out


@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_diagonal_invariants_under_congruence(seed):
    ctx = field(3, 9, 3)
    rng = np.random.default_rng(seed)
    sub = ctx.subfield_elements(ctx.k)
    a, b = (int(x) for x in rng.integers(0, ctx.q, 2))
    M = gram_matrix(ctx, a, b, int(rng.choice([1, -1])))
    P = _random_invertible(ctx, rng, ctx.e, sub)
    d0 = congruent_diagonalize(ctx, M)
    d1 = congruent_diagonalize(ctx, _congruence(ctx, P, M))
    assert (d0.rank, d0.eta_delta) == (d1.rank, d1.eta_delta)


def test_batched_diagonalize_matches_scalar():
    for pnk in [(3, 9, 3), (7, 3, 1), (3, 5, 1)]:
        ctx = field(*pnk)
        rng = np.random.default_rng(12)
        a, b = rng.integers(0, ctx.q, (2, 300))
        a[:20] = 0
        b[20:40] = 0
        for sign in (1, -1):
            G = gram_matrices(ctx, a, b, sign)
            rank, delta, eta = batched_diagonalize(ctx, G)
            for i in range(len(a)):
                if a[i] == b[i] == 0:
                    continue
                d = congruent_diagonalize(ctx, G[i].tolist())
                assert (rank[i], eta[i]) == (d.rank, d.eta_delta)


# -- closed form sums --------------------------------------------------------------

def test_qf_sum_rank_zero(f731):
    assert qf_sum_closed(f731, DiagForm(0, 1, 1)) == QuadValue.integer(7, 343)


def test_qf_sum_unsupported_branch():
    fake = SimpleNamespace(p=3, k=2, e=1)
    with pytest.raises(UnsupportedBranch):
        qf_sum_closed(fake, DiagForm(1, 1, 1))


def test_trace_square_form(f331):
    # a = 0, b = 1: Q = tr(x^2), full rank
    v = s_closed(f331, 0, 1)
    assert v.two_a == 0 and abs(v.two_b) == 6
    assert v == s_direct(f331, 0, 1)


@pytest.mark.parametrize("pnk", [(3, 3, 1), (3, 3, 3), (7, 3, 1)])
def test_closed_equals_direct_exhaustive(pnk):
    ctx = field(*pnk)
    a, b = all_pairs(ctx)
    keep = (a != 0) | (b != 0)
    a, b = a[keep], b[keep]
    if ctx.q > 100:
        a, b = a[::97], b[::97]
    for sign in (1, -1):
        closed = s_closed_batch(ctx, a, b, sign)
        assert closed == [s_direct(ctx, x, y, sign) for x, y in zip(a.tolist(), b.tolist())]


@pytest.mark.parametrize("pnk", [(3, 9, 3), (3, 5, 1), (11, 3, 1), (7, 3, 3)])
def test_closed_equals_direct_sampled(pnk):
    ctx = field(*pnk)
    rng = np.random.default_rng(13)
    a, b = rng.integers(0, ctx.q, (2, 150))
    for x, y in zip(a.tolist(), b.tolist()):
        for sign in (1, -1):
            assert s_closed(ctx, x, y, sign) == s_direct(ctx, x, y, sign)


@pytest.mark.parametrize("pnk", [(3, 3, 1), (7, 3, 1)])
def test_dual_path_exhaustive(pnk):
    ctx = field(*pnk)
    a, b = all_pairs(ctx)
    keep = (a != 0) | (b != 0)
    a, b = a[keep], b[keep]
    rs = reduced_sums(ctx)
    assert sab_dual_path_batch(ctx, a, b) == [rs.values[i] for i in rs.ids(ctx, a, b)]


def test_dual_path_scalar(f331):
    for a in range(27):
        for b in range(27):
            if a or b:
                assert sab_dual_path(f331, a, b) == sab(f331, a, b)


def test_weil_excluded_pair_never_occurs(f731):
    a, b = all_pairs(f731, lo=1)
    s1 = s_closed_batch(f731, a, b, 1)
    s2 = s_closed_batch(f731, a, b, -1)
    assert not any(weil_excluded_pair(f731, x, y) for x, y in zip(s1, s2))
    h = 2 * 7
    assert weil_excluded_pair(f731, QuadValue(7, 0, h), QuadValue(7, 0, -7 * h))
    assert not weil_excluded_pair(f731, QuadValue(7, 0, h), QuadValue(7, 0, 7 * h))


# -- Bluher census ------------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 3])
def test_bluher_333_s1(k):
    ctx = field(3, 3, k)
    bl = bluher_census(ctx, 1)
    assert bl.unique_root_psi == 9
    assert bl.many_root_psi == 1
    assert set(bl.histogram) <= {0, 1, 2, 4}
    assert sum(bl.histogram.values()) == ctx.q - 1
    assert bl.power_condition_ok


@pytest.mark.parametrize("pnk", [(3, 3, 1), (3, 5, 1), (7, 3, 1), (3, 9, 3), (11, 3, 1)])
def test_bluher_formulas_all_s(pnk):
    ctx = field(*pnk)
    for s in range(1, ctx.n):
        bl = bluher_census(ctx, s)
        assert (bl.unique_root_psi, bl.many_root_psi) == bl.expected(ctx)
        assert bl.support_ok(ctx) and bl.power_condition_ok
        assert sum(bl.histogram.values()) == ctx.q - 1


def test_bluher_matches_root_scan(f331):
    ctx = f331
    bl = bluher_census(ctx, 1)
    hist = {}
    for psi in range(1, ctx.q):
        roots = exhaustive_roots(
            ctx,
            lambda z: ctx.add(ctx.sub(ctx.pow(z, ctx.p + 1), ctx.mul(psi, z)), psi),
            nonzero=True,
        )
        hist[len(roots)] = hist.get(len(roots), 0) + 1
    assert hist == bl.histogram
