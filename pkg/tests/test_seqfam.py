import numpy as np
import pytest

from conftest import field
from seqspectra.charsum import QuadValue, counts_to_quadvalue
from seqspectra.expsum import candidate_values
from seqspectra.seqfam import (
    SCOPES,
    correlation,
    correlation_via_sab,
    family,
    family_bound_times4,
    family_member,
    family_spectrum,
    family_spectrum_direct,
    max_norm4,
)


def test_member_zero_is_m_sequence(f331):
    s0 = family_member(f331, 0)
    assert len(s0) == f331.N
    assert np.array_equal(s0, f331.tr1_exp)
    assert np.count_nonzero(s0 == 0) == 3 ** (f331.n - 1) - 1 == 8


def test_members_distinct(f331):
    rows = {tuple(r) for r in family(f331).tolist()}
    assert len(rows) == f331.q


def test_member_definition(f731):
    beta = 123
    s = family_member(f731, beta)
    for t in (0, 1, 50, 341):
        u = f731.alpha_pow(t)
        want = (f731.trace(u) + f731.trace(f731.mul(beta, f731.pow(u, f731.d)))) % 7
        assert s[t] == f731.tr1_table[f731.add(u, f731.mul(beta, f731.pow(u, f731.d)))] == want % 7


def test_in_phase_autocorrelation(f331):
    for beta in (0, 1, 13):
        assert correlation(f331, beta, beta, 0) == QuadValue.integer(3, f331.N)


def test_m_sequence_two_level(f331, f731):
    for ctx in (f331, f731):
        for tau in range(1, ctx.N):
            assert correlation(ctx, 0, 0, tau) == QuadValue.integer(ctx.p, -1)


def test_correlation_identity_exhaustive_331(f331):
    ctx = f331
    seqs = family(ctx)
    for b1 in range(ctx.q):
        for b2 in range(ctx.q):
            for tau in range(ctx.N):
                diff = (np.roll(seqs[b1], -tau) - seqs[b2]) % 3
                direct = counts_to_quadvalue(np.bincount(diff, minlength=3), 3)
                assert direct == correlation_via_sab(ctx, b1, b2, tau)


def test_correlation_identity_sampled(f731):
    rng = np.random.default_rng(8)
    for b1, b2, tau in zip(*rng.integers(0, f731.q, (2, 200)), rng.integers(0, f731.N, 200)):
        assert correlation(f731, int(b1), int(b2), int(tau)) == correlation_via_sab(f731, int(b1), int(b2), int(tau))


def test_tau_range(f331):
    with pytest.raises(ValueError):
        correlation(f331, 0, 0, f331.N)


@pytest.mark.parametrize("scope", SCOPES)
def test_spectrum_paths_agree(f331, scope):
    direct = family_spectrum_direct(f331, scope)
    assert direct == family_spectrum(f331, scope)
    q, N = f331.q, f331.N
    expected_total = {"all-shifts": q * q * N - q, "distinct-pairs": q * (q - 1) * N, "out-of-phase-auto": q * (N - 1)}
    assert sum(direct.values()) == expected_total[scope]


def test_spectrum_keys_are_shifted_candidates():
    for pnk in [(3, 3, 1), (3, 5, 1), (7, 3, 1), (3, 3, 3)]:
        ctx = field(*pnk)
        cands = {v - 1 for v in candidate_values(ctx)}
        assert set(family_spectrum(ctx)) <= cands


def test_bound_331(f331):
    assert family_bound_times4(f331) == 4 + 16 * 27 == 436
    spec = family_spectrum_direct(f331, "all-shifts")
    assert max_norm4(spec) <= 436
    # sqrt(109) is the magnitude bound
    assert max(abs(v.to_complex()) for v in spec) <= 109**0.5 + 1e-12


@pytest.mark.parametrize("pnk", [(3, 5, 1), (7, 3, 1), (7, 3, 3), (11, 3, 1), (3, 5, 5)])
def test_bound_reduced(pnk):
    ctx = field(*pnk)
    for scope in SCOPES:
        spec = family_spectrum(ctx, scope)
        assert max_norm4(spec) <= family_bound_times4(ctx)
    if pnk == (3, 5, 1):
        assert family_bound_times4(ctx) == 3892


def test_out_of_phase_auto_only_distribution_values(f331):
    spec = family_spectrum(f331, "out-of-phase-auto")
    assert QuadValue.integer(3, -1) in spec


def test_unknown_scope(f331):
    with pytest.raises(ValueError):
        family_spectrum(f331, "")
    with pytest.raises(ValueError):
        family_spectrum_direct(f331, "unordered")
