"""
quantum_channel：信道模型与零差测量
"""
import math

import numpy as np
import pytest

from core_math import VACUUM_VARIANCE, DomainError, loss_db_to_transmittance
from quantum_channel import (
    GaussianModState,
    Lossless,
    BeamSplitter,
    NoisyGaussian,
    InterceptResend,
    propagate,
    parse_channel,
    homodyne_sample,
    homodyne_samples,
)
from quantum_channel.homodyne import effect_outside_prob, outside_indicators


def test_state_constructors():
    s = GaussianModState.from_alpha(1.0 + 2.0j)
    assert (s.mean_x, s.mean_p) == pytest.approx((math.sqrt(2.0), 2.0 * math.sqrt(2.0)))
    assert s.var_x == s.var_p == VACUUM_VARIANCE

    sq = GaussianModState.p_squeezed(0.0, 1.0, 0.125)
    assert sq.var_x * sq.var_p == pytest.approx(VACUUM_VARIANCE ** 2)
    with pytest.raises(DomainError):
        GaussianModState(0.0, 0.0, var_x=-1.0)


def test_lossless_is_identity():
    s = GaussianModState(1.5, -0.5, 0.2, 1.25)
    assert propagate(s, Lossless()) == s


def test_beam_splitter_attenuates_and_adds_vacuum():
    t = 0.8
    s = propagate(GaussianModState(2.0, -1.0, 0.125, 2.0), BeamSplitter(t))
    assert s.mean_x == pytest.approx(2.0 * math.sqrt(t))
    assert s.mean_p == pytest.approx(-math.sqrt(t))
    assert s.var_x == pytest.approx(t * 0.125 + (1 - t) * VACUUM_VARIANCE)
    assert s.var_p == pytest.approx(t * 2.0 + (1 - t) * VACUUM_VARIANCE)


def test_beam_splitter_keeps_coherent_states_at_vacuum_noise():
    s = propagate(GaussianModState.coherent(3.0, 4.0), BeamSplitter(0.3))
    assert s.var_x == pytest.approx(VACUUM_VARIANCE)
    assert s.var_p == pytest.approx(VACUUM_VARIANCE)


@pytest.mark.parametrize("t", [0.0, 1.2, -0.1])
def test_beam_splitter_rejects_bad_transmittance(t):
    with pytest.raises(DomainError):
        BeamSplitter(t)


def test_noisy_channel_adds_excess():
    s = propagate(GaussianModState.coherent(1.0, 1.0), NoisyGaussian(0.5, excess_x=0.1, excess_p=0.2))
    assert s.var_x == pytest.approx(0.6)
    assert s.var_p == pytest.approx(0.7)


def test_intercept_resend_resets_variances(rng):
    means = rng.normal(0.0, 3.0, size=(1000, 2))
    variances = np.full((1000, 2), 0.1)
    out_means, out_vars = InterceptResend().apply(means, variances, rng)
    assert np.all(out_vars == VACUUM_VARIANCE)
    # 每行恰好一个分量被置 0
    zero_count = np.sum(out_means == 0.0, axis=1)
    assert np.all(zero_count == 1)
    assert 0.4 < np.mean(out_means[:, 0] == 0.0) < 0.6


def test_intercept_resend_fixed_basis(rng):
    means = np.array([[1.0, 2.0]] * 10)
    out_means, _ = InterceptResend("x").apply(means, np.full((10, 2), 0.5), rng)
    assert np.all(out_means[:, 1] == 0.0)
    with pytest.raises(DomainError):
        InterceptResend().apply(means, np.full((10, 2), 0.5), None)


def test_parse_channel():
    assert isinstance(parse_channel({"type": "lossless"}), Lossless)
    bs = parse_channel({"type": "beamsplitter", "loss_db": 1.0})
    assert bs.transmittance == pytest.approx(loss_db_to_transmittance(1.0))
    assert parse_channel({"type": "loss", "transmittance": 0.5}).transmittance == 0.5
    noisy = parse_channel({"type": "noisy", "transmittance": 0.9, "excess": 0.05})
    assert (noisy.excess_x, noisy.excess_p) == (0.05, 0.05)
    assert parse_channel({"type": "intercept_resend", "basis_strategy": "p"}).basis_strategy == "p"
    with pytest.raises(DomainError):
        parse_channel({"type": "teleport"})


def test_homodyne_statistics(rng):
    s = GaussianModState(1.0, -2.0, 0.25, 0.5)
    values = homodyne_samples(np.full(20000, s.mean_p), np.full(20000, s.var_p), rng)
    assert np.mean(values) == pytest.approx(-2.0, abs=0.02)
    assert np.var(values) == pytest.approx(0.5, rel=0.05)

    outcome = homodyne_sample(s, "x", rng)
    assert outcome.quadrature == "x"
    with pytest.raises(DomainError):
        homodyne_sample(s, "y", rng)


def test_effect_outside_prob_matches_sampling(rng):
    s = GaussianModState.p_squeezed(0.0, 0.3, 0.2)
    exact = effect_outside_prob(s, "p", 0.0, 0.5)
    samples = homodyne_samples(np.full(50000, s.mean_p), np.full(50000, s.var_p), rng)
    empirical = np.mean(outside_indicators(samples, np.zeros(50000), 0.5))
    assert empirical == pytest.approx(exact, abs=4 * math.sqrt(exact * (1 - exact) / 50000))
