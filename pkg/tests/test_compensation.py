import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fsscomp.cascade import CascadeParams, EmissionEvent, precession_rate, raw_pair_state
from fsscomp.compensation import (
    MismatchSpec,
    RampParams,
    compensated_pair_state,
    constant_phase,
    exciton_splitting,
    ideal_ramp,
    instantaneous_frequencies,
    mismatch_of,
    ramp_from_mismatch,
    total_phase,
    total_phase_array,
)
from fsscomp.core_state import bell_state

W3 = 3.0 / 0.6582119569

finite = st.floats(-50, 50, allow_nan=False)
delays = st.floats(0, 20, allow_nan=False)


def test_total_phase_without_ramp_is_precession():
    assert total_phase(RampParams(), CascadeParams(3.0), EmissionEvent(0.4, 1.0)) == pytest.approx(
        4.5578, abs=1e-4
    )


@given(delays, delays)
def test_ideal_ramp_phase_vanishes(t1, t2):
    p = CascadeParams(3.0)
    assert abs(total_phase(ideal_ramp(p), p, EmissionEvent(t1, t2))) < 1e-12


def test_ideal_ramp_with_delta_t_gives_constant_offset():
    p = CascadeParams(3.0)
    r = ideal_ramp(p)
    r = RampParams(**{**r.__dict__, "t_prop_xx": 0.3})
    for e in (EmissionEvent(0, 0), EmissionEvent(1.3, 0.2), EmissionEvent(0.01, 5.0)):
        assert total_phase(r, p, e) == pytest.approx(1.3673, abs=1e-4)
        assert total_phase(r, p, e) == pytest.approx(W3 * 0.3, abs=1e-12)


def test_total_phase_matches_term_by_term_expansion():
    # each photon/polarization phase K*(arrival time) + phi0, summed directly
    r = RampParams(1.1, -0.4, 2.3, 0.7, 0.2, -0.3, 0.5, 0.05, 0.9, 1.7, 0.2, 0.4)
    p = CascadeParams(2.0)
    t1, t2 = 0.37, 1.21
    arr_xx = t1 + r.t_prop_xx - r.t_start_xx
    arr_x = t1 + t2 + r.t_prop_x - r.t_start_x
    hh = (r.k_hxx * arr_xx + r.phi0_hxx) + (r.k_hx * arr_x + r.phi0_hx)
    vv = (r.k_vxx * arr_xx + r.phi0_vxx) + (r.k_vx * arr_x + r.phi0_vx) + precession_rate(p) * t2
    assert total_phase(r, p, EmissionEvent(t1, t2)) == pytest.approx(vv - hh, abs=1e-12)


def test_compensated_state_examples():
    p = CascadeParams(3.0)
    e = EmissionEvent(0.8, 2.1)
    assert compensated_pair_state(ideal_ramp(p), p, e).allclose(bell_state("PhiPlus"), 1e-12)
    assert compensated_pair_state(RampParams(), p, e) == raw_pair_state(p, e)
    r = RampParams(**{**ideal_ramp(p).__dict__, "phi0_vxx": 1.0, "phi0_vx": math.pi - 1.0})
    for e in (EmissionEvent(0, 0), EmissionEvent(0.3, 0.9), EmissionEvent(2.0, 4.0)):
        assert compensated_pair_state(r, p, e).allclose(bell_state("PhiMinus"), 1e-12)


def test_ideal_ramp_examples():
    r = ideal_ramp(CascadeParams(3.0))
    assert r.k_vx == pytest.approx(-4.5578, abs=1e-4)
    assert r.k_vxx == pytest.approx(4.5578, abs=1e-4)
    r0 = ideal_ramp(CascadeParams(0.0), k_hx=1.5, k_hxx=-2.0)
    assert (r0.k_vx, r0.k_hx, r0.k_vxx, r0.k_hxx) == (1.5, 1.5, -2.0, -2.0)


@given(finite, finite, st.floats(0, 30))
def test_ideal_ramp_round_trip(a, b, fss):
    p = CascadeParams(fss)
    d1, d2 = mismatch_of(ideal_ramp(p, a, b), p)
    assert abs(d1) < 1e-12 and abs(d2) < 1e-12


def test_mismatch_of_examples():
    p = CascadeParams(3.0)
    d1, d2 = mismatch_of(RampParams(), p)
    assert d1 == pytest.approx(4.5578, abs=1e-4) and d2 == 0
    r = RampParams(k_vx=-4.5578 + 1.0, k_vxx=4.5578)
    d1, d2 = mismatch_of(r, p)
    assert d1 == pytest.approx(1.0, abs=1e-4)
    assert d2 == pytest.approx(1.0, abs=1e-12)


def test_ramp_from_mismatch_examples():
    p = CascadeParams(3.0)
    r = ramp_from_mismatch(MismatchSpec(0, 0, 0), p)
    ideal = ideal_ramp(p)
    assert (r.k_vx, r.k_vxx, r.k_hx, r.k_hxx) == (ideal.k_vx, ideal.k_vxx, 0.0, 0.0)
    r = ramp_from_mismatch(MismatchSpec(1, 0, 0), p)
    assert r.k_vx == pytest.approx(-3.5578, abs=1e-4)
    assert r.k_vxx == pytest.approx(3.5578, abs=1e-4)
    r = ramp_from_mismatch(MismatchSpec(0, 0, 0.3), p)
    assert constant_phase(r) == pytest.approx(W3 * 0.3, abs=1e-12)
    assert total_phase(r, p, EmissionEvent(0.5, 0.5)) == pytest.approx(W3 * 0.3, abs=1e-12)


@given(finite, finite, st.floats(-5, 5), st.floats(0, 30))
def test_ramp_from_mismatch_round_trip(d1, d2, dt, fss):
    p = CascadeParams(fss)
    r = ramp_from_mismatch(MismatchSpec(d1, d2, dt), p)
    got1, got2 = mismatch_of(r, p)
    assert got1 == pytest.approx(d1, abs=1e-12)
    assert got2 == pytest.approx(d2, abs=1e-12)
    assert r.t_prop_x == r.t_start_x
    assert r.t_prop_xx - r.t_start_xx == dt


@given(finite, finite, finite, finite, finite, st.floats(0, 10), delays, delays)
def test_total_phase_is_affine_with_mismatch_slopes(kvxx, khxx, kvx, khx, phi0, fss, t1, t2):
    # central finite differences reproduce the mismatch slopes
    r = RampParams(kvxx, khxx, kvx, khx, phi0_vx=phi0, t_prop_xx=0.2)
    p = CascadeParams(fss)
    d1, d2 = mismatch_of(r, p)
    h = 0.5
    f = lambda a, b: total_phase(r, p, EmissionEvent(a, b))
    s1 = (f(t1 + 2 * h, t2) - f(t1, t2)) / (2 * h)
    s2 = (f(t1, t2 + 2 * h) - f(t1, t2)) / (2 * h)
    scale = 1 + max(abs(kvxx), abs(khxx), abs(kvx), abs(khx), fss) * (1 + t1 + t2)
    assert abs(s1 - d2) < 1e-13 * scale * 100
    assert abs(s2 - d1) < 1e-13 * scale * 100


def test_total_phase_finite_difference_tight():
    r = RampParams(1.25, -0.5, 0.75, 2.0)
    p = CascadeParams(3.0)
    d1, d2 = mismatch_of(r, p)
    f = lambda a, b: total_phase(r, p, EmissionEvent(a, b))
    assert abs((f(1.5, 1.0) - f(0.5, 1.0)) - d2) < 1e-10
    assert abs((f(0.5, 2.0) - f(0.5, 1.0)) - d1) < 1e-10


@given(finite, finite, st.floats(0, 10))
def test_mismatch_zero_means_event_independent(a, b, fss):
    p = CascadeParams(fss)
    r = RampParams(**{**ideal_ramp(p, a, b).__dict__, "phi0_hx": 0.3, "t_prop_x": 0.7})
    ref = total_phase(r, p, EmissionEvent(0, 0))
    for e in (EmissionEvent(1, 0), EmissionEvent(0, 1), EmissionEvent(3.3, 7.1)):
        assert total_phase(r, p, e) == pytest.approx(ref, abs=1e-11 * (1 + abs(a) + abs(b) + fss))


def test_total_phase_array_matches_scalar():
    r = RampParams(1.0, 0.2, -3.0, 0.4, 0.1, 0.0, 0.2, 0.0, 0.5, 0.0, 0.1, 0.3)
    p = CascadeParams(3.0)
    t1 = np.array([0.0, 0.3, 2.0])
    t2 = np.array([1.0, 0.0, 0.7])
    arr = total_phase_array(r, p, t1, t2)
    assert list(arr) == [total_phase(r, p, EmissionEvent(a, b)) for a, b in zip(t1, t2)]


def test_instantaneous_frequencies():
    p = CascadeParams(3.0, exciton_energy=10.0)
    wh, wv = instantaneous_frequencies(RampParams(), p)
    assert wv - wh == pytest.approx(4.5578, abs=1e-4)
    wh, wv = instantaneous_frequencies(ideal_ramp(p), p)
    assert abs(wv - wh) < 1e-12
    wh, wv = instantaneous_frequencies(RampParams(), CascadeParams(0.0, exciton_energy=10.0))
    assert wv == wh
    with pytest.raises(ValueError):
        instantaneous_frequencies(RampParams(), CascadeParams(3.0))


def test_instantaneous_frequencies_optical_carrier():
    # a realistic 1.4 eV exciton: carrier ~2e6 rad/ns
    p = CascadeParams(3.0, exciton_energy=1.4e6)
    wh, wv = instantaneous_frequencies(ideal_ramp(p), p)
    assert wh == pytest.approx((1.4e6 - 1.5) / 0.6582119569, rel=1e-12)
    assert abs(wv - wh) < 1e-8
    assert exciton_splitting(ideal_ramp(p), p) == 0.0


@given(finite, finite, finite, st.floats(0, 10))
def test_degeneracy_iff_zero_d_omega1(kvx, khx, kvxx, fss):
    p = CascadeParams(fss, exciton_energy=0.0)
    r = RampParams(k_vxx=kvxx, k_vx=kvx, k_hx=khx)
    d1, _ = mismatch_of(r, p)
    assert exciton_splitting(r, p) == d1
    wh, wv = instantaneous_frequencies(r, p)
    assert abs((wv - wh) - d1) < 1e-13 * (1 + abs(kvx) + abs(khx) + fss)
    if abs(d1) >= 1e-10:
        assert wv != wh


def test_ramp_and_mismatch_reject_non_finite():
    with pytest.raises(ValueError):
        RampParams(k_vx=math.inf)
    with pytest.raises(ValueError):
        MismatchSpec(math.nan, 0, 0)
