import numpy as np
import pytest

from conftest import field
from seqspectra.charsum import QuadValue
from seqspectra.code import (
    codeword,
    codewords_for_a,
    dimension_check,
    weight_distribution,
    weight_distribution_closed,
    weight_from_value,
    weight_via_mu,
    weights_all_pairs,
)
from seqspectra.errors import NonIntegerWeight
from seqspectra.expsum import reduced_sums
from seqspectra.oracle import naive_weight

W331 = {0: 1, 15: 312, 18: 260, 21: 156}


def test_zero_codeword(f331):
    cw = codeword(f331, 0, 0)
    assert len(cw) == f331.N and naive_weight(cw) == 0


def test_m_sequence_codeword_weight(f731):
    for a in (1, 5, 200):
        assert naive_weight(codeword(f731, a, 0)) == 7**2 * 6


def test_cyclic_shift(f731):
    ctx = f731
    rng = np.random.default_rng(0)
    for a, b in rng.integers(0, ctx.q, (20, 2)).tolist():
        shifted = np.roll(codeword(ctx, a, b), -1)
        assert np.array_equal(shifted, codeword(ctx, ctx.mul(a, ctx.alpha), ctx.mul(b, ctx.alpha_pow(ctx.d))))


def test_linearity(f731):
    ctx = f731
    rng = np.random.default_rng(1)
    for a1, b1, a2, b2 in rng.integers(0, ctx.q, (20, 4)).tolist():
        lhs = codeword(ctx, ctx.add(a1, a2), ctx.add(b1, b2))
        rhs = (codeword(ctx, a1, b1) + codeword(ctx, a2, b2)) % ctx.p
        assert np.array_equal(lhs, rhs)


def test_codewords_for_a(f331):
    rows = codewords_for_a(f331, 7)
    for b in range(f331.q):
        assert np.array_equal(rows[b], codeword(f331, 7, b))


def test_weight_examples(f331):
    assert weight_via_mu(f331, 0, 0) == 0
    h = 2 * 3
    assert weight_from_value(f331, QuadValue(3, 0, h)) == 18
    assert weight_from_value(f331, QuadValue(3, 9, 3)) == 15
    # a concrete pair with S = (sqrt3 + j) 3 sqrt3 / 2
    ctx = f331
    pair = next((a, b) for a in range(1, 27) for b in range(27)
                if weight_via_mu(ctx, a, b) == 15)
    assert naive_weight(codeword(ctx, *pair)) == 15


def test_weight_rejects_non_integer(f331):
    with pytest.raises(NonIntegerWeight):
        weight_from_value(f331, QuadValue(3, 1, 1))


@pytest.mark.parametrize("pnk", [(3, 3, 1), (7, 3, 1)])
def test_weight_via_mu_exhaustive(pnk):
    ctx = field(*pnk)
    W = weights_all_pairs(ctx)
    for a in range(ctx.q):
        naive = np.count_nonzero(codewords_for_a(ctx, a), axis=1)
        assert np.array_equal(naive, W[a])


@pytest.mark.parametrize("pnk", [(3, 5, 1), (3, 9, 3), (11, 3, 1)])
def test_weight_via_mu_sampled(pnk):
    ctx = field(*pnk)
    rs = reduced_sums(ctx)
    rng = np.random.default_rng(6)
    for a, b in rng.integers(0, ctx.q, (300, 2)).tolist():
        assert naive_weight(codeword(ctx, a, b)) == weight_from_value(ctx, rs.value(ctx, a, b))


def test_distribution_331(f331):
    assert weight_distribution(f331) == W331
    assert weight_distribution_closed(f331) == W331
    assert sum(W331.values()) == 729
    # independent count over every codeword
    naive = {}
    for a in range(27):
        for w in np.count_nonzero(codewords_for_a(f331, a), axis=1).tolist():
            naive[w] = naive.get(w, 0) + 1
    assert naive == W331


def test_distribution_731(f731):
    wd = weight_distribution(f731)
    assert wd == {0: 1, 273: 19152, 294: 84132, 315: 14364}
    assert sorted(wd) == [0, 294 - 21, 294, 294 + 21]


@pytest.mark.parametrize("pnk", [(3, 5, 1), (3, 5, 5), (7, 3, 3), (11, 3, 1), (3, 3, 3), (3, 1, 1)])
def test_distribution_closed(pnk):
    ctx = field(*pnk)
    wd = weight_distribution(ctx)
    assert wd == weight_distribution_closed(ctx)
    assert sum(wd.values()) == ctx.q**2 and wd[0] == 1
    assert all(0 <= w <= ctx.N for w in wd)
    if ctx.k < ctx.n:
        assert len(wd) == 4


def test_distribution_k_equals_n():
    ctx = field(3, 3, 3)
    wd = weight_distribution_closed(ctx)
    # p^((n-k)/2) = 1, so the base class keeps (q-1)(q - 2 + 1) words
    base = 9 * 2
    assert wd.get(base, 0) == 26 * (27 - 2 + 1)
    assert sum(wd.values()) == 729


@pytest.mark.parametrize("pnk", [(3, 3, 1), (3, 3, 3), (7, 3, 1)])
def test_dimension_exhaustive(pnk):
    assert dimension_check(field(*pnk), exhaustive=True)


@pytest.mark.parametrize("pnk", [(3, 3, 1), (3, 9, 3), (11, 3, 1)])
def test_dimension_generator_rank(pnk):
    assert dimension_check(field(*pnk), exhaustive=False)


def test_zero_kernel(f331):
    zeros = [(a, b) for a in range(27) for b in range(27) if not codeword(f331, a, b).any()]
    assert zeros == [(0, 0)]


def test_minimum_nonzero_weight_positive(f731):
    W = weights_all_pairs(f731)
    W[0, 0] = f731.N
    assert W.min() > 0
