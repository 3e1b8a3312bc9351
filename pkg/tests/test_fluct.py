import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qotto import cycle, distrib, fluct, qdyn, thermal


def forward_and_reverse(xe, xc, c, h):
    xi = qdyn.TransitionProbabilities(xe, xc)
    fwd = cycle.discrete_joint(cycle.enumerate_histories(xi, c, h))
    return fwd, fluct.reverse_peaks(xi, c, h)


def test_sigma_values(ref_thermal):
    assert fluct.entropy_production(1.6, 3.6, ref_thermal) == pytest.approx(0.95516, abs=1e-5)
    assert fluct.entropy_production(0.0, 0.0, ref_thermal) == 0.0


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_sigma_antisymmetric(ref_thermal, w, q):
    assert fluct.entropy_production(-w, -q, ref_thermal) == -fluct.entropy_production(w, q, ref_thermal)


def test_reverse_adiabatic_support(cold, hot):
    fwd, rev = forward_and_reverse(0.0, 0.0, cold, hot)
    assert sorted(zip(rev.w.tolist(), rev.q.tolist())) == [(-1.6, -3.6), (0.0, 0.0), (1.6, 3.6)]
    # by hand: the reversed engine reaches (-1.6, -3.6) from a cold ground state and
    # a hot excited outcome, the weight of forward history (+, -, -, +)
    assert rev.prob_at_key((2, -2)) == pytest.approx(cold.p_excited * hot.p_ground, rel=1e-14)
    assert rev.prob_at_key((-2, 2)) == pytest.approx(cold.p_ground * hot.p_excited, rel=1e-14)
    # the detailed relation pairs forward (1.6, 3.6) with reverse (-1.6, -3.6):
    # the two Gibbs weights trade places
    assert fwd.prob_at_key((-2, 2)) == pytest.approx(rev.prob_at_key((-2, 2)), rel=1e-14)
    assert fwd.prob_at_key((-2, 2)) / rev.prob_at_key((2, -2)) == pytest.approx(
        cold.p_ground * hot.p_excited / (cold.p_excited * hot.p_ground), rel=1e-13)


@given(st.floats(0, 1), st.floats(0, 1))
def test_reverse_normalised(cold, hot, xe, xc):
    _, rev = forward_and_reverse(xe, xc, cold, hot)
    assert rev.total() == pytest.approx(1.0, abs=1e-12)


@given(st.floats(0, 1), st.floats(0, 1))
def test_reverse_is_forward_with_strokes_exchanged(cold, hot, xe, xc):
    _, rev = forward_and_reverse(xe, xc, cold, hot)
    fwd_swapped, _ = forward_and_reverse(xc, xe, cold, hot)
    assert rev.keys == fwd_swapped.keys
    np.testing.assert_allclose(rev.prob, fwd_swapped.prob, rtol=1e-13, atol=1e-16)


def test_adiabatic_detailed_ft(cold, hot, ref_thermal):
    fwd, rev = forward_and_reverse(0.0, 0.0, cold, hot)
    rep = fluct.detailed_ft_check(fwd, rev, ref_thermal)
    by_peak = {(e.w, e.q): e for e in rep.entries}
    e = by_peak[(1.6, 3.6)]
    expected = np.log(cold.p_ground * hot.p_excited / (cold.p_excited * hot.p_ground))
    assert e.ln_ratio == pytest.approx(expected, rel=1e-13)
    assert e.ln_ratio == pytest.approx(0.9551, abs=1e-4)
    assert abs(e.residual) < 1e-10
    assert by_peak[(0.0, 0.0)].ln_ratio == 0.0
    assert rep.one_sided == []


def test_detailed_ft_along_sweep(cycle_at, ref_thermal):
    for tau in (200.0, 260.0, 320.0):
        res = cycle_at(tau)
        rev = fluct.reverse_peaks(res.xi, res.cold, res.hot)
        rep = fluct.detailed_ft_check(res.peaks, rev, ref_thermal)
        assert len(rep.entries) == 9
        assert rep.max_abs_residual < 1e-10


def test_one_sided_peaks_are_listed(cold, hot, ref_thermal):
    fwd, _ = forward_and_reverse(0.2, 0.2, cold, hot)
    # keep only the origin peak of the reverse set
    rev = cycle.peaks_from_keys({(0, 0): 1.0}, 2.0, 3.6)
    rep = fluct.detailed_ft_check(fwd, rev, ref_thermal)
    assert len(rep.entries) == 1
    assert len(rep.one_sided) == 8


def test_no_overlap_is_an_error(ref_thermal):
    fwd = cycle.peaks_from_keys({(2, 2): 1.0}, 2.0, 3.6)
    rev = cycle.peaks_from_keys({(2, 2): 1.0}, 2.0, 3.6)
    with pytest.raises(ValueError, match="no peaks in common"):
        fluct.detailed_ft_check(fwd, rev, ref_thermal)


# probabilities are kept clear of the subnormal range, where a peak weight of
# order 1e-313 has lost most of its significant digits and the log ratio with it
xis = st.one_of(st.just(0.0), st.just(1.0), st.floats(1e-100, 1.0))
fts = dict(xe=xis, xc=xis, kT1=st.floats(0.3, 20), kT2=st.floats(0.3, 60))


@settings(max_examples=1000, deadline=None)
@given(**fts)
def test_fluctuation_theorems_randomised(xe, xc, kT1, kT2):
    c = thermal.gibbs_populations(2.0, kT1)
    h = thermal.gibbs_populations(3.6, kT2)
    with pytest.warns(RuntimeWarning) if kT2 <= kT1 else _nullcontext():
        th = thermal.ThermalConfig(kT1, kT2)
    fwd, rev = forward_and_reverse(xe, xc, c, h)
    ift, mean_sigma = fluct.integral_ft(fwd, th)
    assert abs(ift - 1.0) < 1e-12
    assert mean_sigma >= -1e-12
    rep = fluct.detailed_ft_check(fwd, rev, th)
    assert rep.max_abs_residual < 1e-10


class _nullcontext:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def test_matched_baths_give_zero_mean_sigma(cold, hot):
    c = thermal.gibbs_populations(2.0, 5.0)
    h = thermal.gibbs_populations(3.6, 5.0)
    fwd, _ = forward_and_reverse(0.3, 0.1, c, h)
    with pytest.warns(RuntimeWarning):
        th = thermal.ThermalConfig(5.0, 5.0)
    ift, mean_sigma = fluct.integral_ft(fwd, th)
    assert ift == pytest.approx(1.0, abs=1e-13)
    # Sigma = -W/kT there, so <Sigma> >= 0 says no net work comes out
    assert mean_sigma >= 0


def test_adiabatic_mean_sigma(make_peaks, cold, hot, ref_thermal):
    pk = make_peaks(0.0)
    _, mean_sigma = fluct.integral_ft(pk, ref_thermal)
    sig = fluct.entropy_production(1.6, 3.6, ref_thermal)
    assert mean_sigma == pytest.approx(sig * (cold.p_ground * hot.p_excited - cold.p_excited * hot.p_ground), rel=1e-12)
    assert mean_sigma == pytest.approx(0.195, abs=0.002)


def test_mean_sigma_lower_near_adiabatic(cycle_at, ref_thermal):
    s200 = fluct.integral_ft(cycle_at(200.0).peaks, ref_thermal)[1]
    s320 = fluct.integral_ft(cycle_at(320.0).peaks, ref_thermal)[1]
    assert s320 < s200


def test_mean_sigma_nondecreasing_in_xi(make_peaks, ref_thermal):
    xs = np.linspace(0.0, 0.5, 101)
    sig = [fluct.integral_ft(make_peaks(x), ref_thermal)[1] for x in xs]
    assert np.all(np.diff(sig) >= 0)


def test_entropy_records(make_peaks, ref_thermal):
    pk = make_peaks(0.1)
    recs = fluct.entropy_records(pk, ref_thermal)
    assert len(recs) == 9
    assert sum(r.prob * r.sigma for r in recs) == pytest.approx(fluct.integral_ft(pk, ref_thermal)[1], rel=1e-13)


def test_broadened_detailed_ratio_is_approximate(cycle_at, ref_thermal):
    """Diagnostic: the Lorentzian-broadened grid only follows the relation near peaks."""
    res = cycle_at(200.0)
    rev = fluct.reverse_peaks(res.xi, res.cold, res.hot)
    dev = {}
    for gamma in (0.15, 0.05):
        axis = np.array([-3.6, -1.6, 1.6, 3.6])
        fwd_g = distrib.broaden_joint(res.peaks, gamma, axis, axis)
        rev_g = distrib.broaden_joint(rev, gamma, axis, axis)
        ratio = np.log(fwd_g.density[2, 3] / rev_g.density[1, 0])
        dev[gamma] = abs(ratio - fluct.entropy_production(1.6, 3.6, ref_thermal))
    assert dev[0.15] > 1e-6
    assert dev[0.05] < dev[0.15]
