import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lossyhom import (
    ConfigError,
    DegenerateError,
    OverlapModel,
    ScatteringAmplitudes,
    bunching_probability,
    hom_coincidence_probability,
    modified_coincidence_probability,
    overlap,
    same_port_probability,
    scatter_two_photons,
)

from oracles import bosonic_probabilities, fock_output, labeled_photon_probabilities

amplitude = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)


def random_amps(rng, n):
    for _ in range(n):
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        z *= rng.uniform(0.05, 1.0) / np.linalg.norm(z)
        yield ScatteringAmplitudes(complex(z[0]), complex(z[1]))


# ---- scatter_two_photons --------------------------------------------------------

def test_pass_through_coupler_keeps_one_one():
    assert scatter_two_photons(ScatteringAmplitudes(1.0, 0.0)) == (0, 0, 1)


def test_ideal_splitter_gives_noon_state(ideal_amps):
    out = scatter_two_photons(ideal_amps)
    assert abs(out.amp_11) < 1e-16
    assert abs(out.amp_20) ** 2 == pytest.approx(0.5)
    assert abs(out.amp_02) ** 2 == pytest.approx(0.5)


def test_scatter_degenerate_raises():
    with pytest.raises(DegenerateError):
        scatter_two_photons(ScatteringAmplitudes(0j, 0j))


def test_probabilities_query_needs_nonzero_norm():
    from lossyhom.fock_interference import TwoPhotonOutput

    with pytest.raises(DegenerateError):
        TwoPhotonOutput(0j, 0j, 0j).probabilities()


def test_scatter_matches_operator_expansion():
    for amps in random_amps(np.random.default_rng(1), 300):
        out = scatter_two_photons(amps)
        ref = fock_output(*amps)
        assert abs(out.amp_20 - ref[(2, 0)]) < 1e-14
        assert abs(out.amp_02 - ref[(0, 2)]) < 1e-14
        assert abs(out.amp_11 - ref[(1, 1)]) < 1e-14


def test_bunching_equals_state_same_mode_fraction():
    for amps in random_amps(np.random.default_rng(2), 300):
        p20, p02, _ = scatter_two_photons(amps).probabilities()
        assert bunching_probability(amps) == pytest.approx(p20 + p02, abs=1e-12)


# ---- coincidence probabilities -----------------------------------------------

@pytest.mark.parametrize("x,expected", [(1.0, 0.0), (0.0, 0.5), (0.5, 0.25)])
def test_hom_ideal_splitter(ideal_amps, x, expected):
    assert hom_coincidence_probability(ideal_amps, x) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("x,expected", [(1.0, 0.25), (0.0, 0.125)])
def test_modified_ideal_splitter(ideal_amps, x, expected):
    assert modified_coincidence_probability(ideal_amps, x) == pytest.approx(expected, abs=1e-15)


def test_modified_zero_cross_amplitude():
    for x in (0.0, 0.3, 1.0):
        assert modified_coincidence_probability(ScatteringAmplitudes(0.8, 0.0), x) == 0.0


@pytest.mark.parametrize("x", [-0.01, 1.01, float("nan")])
def test_overlap_outside_unit_interval_rejected(ideal_amps, x):
    with pytest.raises(ConfigError):
        hom_coincidence_probability(ideal_amps, x)
    with pytest.raises(ConfigError):
        modified_coincidence_probability(ideal_amps, x)


def test_x_zero_matches_labeled_photon_enumeration():
    for amps in random_amps(np.random.default_rng(3), 300):
        coinc, both1, both2, mod = labeled_photon_probabilities(*amps)
        assert hom_coincidence_probability(amps, 0.0) == pytest.approx(coinc, abs=1e-15)
        assert same_port_probability(amps, 0.0) == pytest.approx(both1, abs=1e-15)
        assert same_port_probability(amps, 0.0) == pytest.approx(both2, abs=1e-15)
        assert modified_coincidence_probability(amps, 0.0) == pytest.approx(mod, abs=1e-15)


def test_partial_overlap_is_mixture_of_distinguishable_and_bosonic():
    rng = np.random.default_rng(4)
    for amps in random_amps(rng, 200):
        x = rng.uniform()
        dist = labeled_photon_probabilities(*amps)
        bos = bosonic_probabilities(*amps)
        mix = [(1 - x) * d + x * b for d, b in zip(dist, bos)]
        assert hom_coincidence_probability(amps, x) == pytest.approx(mix[0], abs=1e-14)
        assert same_port_probability(amps, x) == pytest.approx(mix[2], abs=1e-14)
        assert modified_coincidence_probability(amps, x) == pytest.approx(mix[3], abs=1e-14)


@settings(max_examples=200, deadline=None)
@given(r=amplitude, t=amplitude)
def test_post_selected_normalisation(r, t):
    amps = ScatteringAmplitudes(r, t)
    total0 = hom_coincidence_probability(amps, 0.0) + 2 * same_port_probability(amps, 0.0)
    assert total0 == pytest.approx((abs(r) ** 2 + abs(t) ** 2) ** 2, abs=1e-12)
    total1 = hom_coincidence_probability(amps, 1.0) + 2 * same_port_probability(amps, 1.0)
    if abs(r) + abs(t) > 0:
        assert total1 == pytest.approx(scatter_two_photons(amps).norm2, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(r=amplitude, t=amplitude, xs=st.tuples(*[st.floats(0.0, 1.0)] * 3))
def test_coincidence_probabilities_are_affine_in_overlap(r, t, xs):
    amps = ScatteringAmplitudes(r, t)
    x0, x1, x2 = xs
    if abs(x1 - x0) < 1e-6:
        return
    for fn in (hom_coincidence_probability, modified_coincidence_probability):
        y0, y1, y2 = fn(amps, x0), fn(amps, x1), fn(amps, x2)
        predicted = y0 + (y1 - y0) * (x2 - x0) / (x1 - x0)
        assert y2 == pytest.approx(predicted, abs=1e-12)


def test_dip_and_peak_extrema_at_full_overlap(ideal_amps):
    xs = np.linspace(0, 1, 11)
    hom = [hom_coincidence_probability(ideal_amps, x) for x in xs]
    mod = [modified_coincidence_probability(ideal_amps, x) for x in xs]
    assert np.argmin(hom) == 10 and np.argmax(mod) == 10


def test_modified_ratio_is_one_plus_x(ideal_amps):
    base = modified_coincidence_probability(ideal_amps, 0.0)
    for x in np.linspace(0, 1, 21):
        assert modified_coincidence_probability(ideal_amps, x) / base == pytest.approx(1 + x, rel=1e-15)


# ---- overlap ------------------------------------------------------------------

def test_overlap_reference_points():
    m = OverlapModel(162.6, 10.0)
    assert overlap(m, 10.0) == 1.0
    assert overlap(m, 10.0 + 162.6) == pytest.approx(math.exp(-1), rel=1e-15)
    assert overlap(m, 10.0 - 162.6) == pytest.approx(0.367879, abs=1e-6)
    assert overlap(m, 10.0 + 3 * 162.6) == pytest.approx(1.234e-4, rel=1e-3)


@settings(max_examples=100, deadline=None)
@given(lc=st.floats(1.0, 1e3), c=st.floats(-1e3, 1e3), d1=st.floats(0.0, 2e3), d2=st.floats(0.0, 2e3))
def test_overlap_even_and_decreasing(lc, c, d1, d2):
    m = OverlapModel(lc, c)
    assert overlap(m, c + d1) == pytest.approx(overlap(m, c - d1), rel=1e-12, abs=1e-300)
    lo, hi = sorted((d1, d2))
    assert overlap(m, c + lo) >= overlap(m, c + hi) * (1 - 1e-15)
    assert 0.0 <= overlap(m, c + hi) <= 1.0


def test_overlap_vectorised():
    m = OverlapModel(100.0)
    xs = np.array([-100.0, 0.0, 100.0])
    np.testing.assert_allclose(overlap(m, xs), [math.exp(-1), 1.0, math.exp(-1)])


@pytest.mark.parametrize("lc", [0.0, -5.0, float("inf")])
def test_overlap_model_validation(lc):
    with pytest.raises(ConfigError):
        OverlapModel(lc)
