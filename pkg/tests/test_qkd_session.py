"""
qkd_session 组件：配置、记录、公开信道、Alice/Bob、纠错
"""
import io
import json
import math

import numpy as np
import pytest

from core_math import DomainError, VACUUM_VARIANCE, variance_from_squeezing_db
from bit_encoding import build_equiprobable_slices
from bit_encoding.slices import slice_labels_batch
from css_codes import nested_pair
from key_rates import CORRECTED_EP1_ZERO_LOSS, css_rate
from qkd_session import (
    LabSettings,
    SessionConfig,
    SliceConfig,
    ConfigError,
    load_session_config,
    Role,
    Verdict,
    OscillatorRecord,
    SessionReport,
    Transcript,
    alice_prepare,
    permute,
    unpermute,
    coherent_ensemble,
    squeezed_ensemble,
    check_source_indistinguishability,
)
from qkd_session.bob import (
    ChannelFit,
    bob_measure,
    fit_channel,
    bit_check_indicators,
    estimate_bit_error,
    collect_F_statistics,
)
from qkd_session.reconciliation import (
    error_upper_bound,
    expected_failed_blocks,
    estimate_slice_errors,
    key_hex,
    reconcile,
)


# ---------------------------------------------------------------- 配置

def test_default_config_is_valid():
    cfg = SessionConfig()
    cfg.validate()
    assert cfg.total_oscillators == 2000 + 1000 + 1000
    assert cfg.phase_errors == (CORRECTED_EP1_ZERO_LOSS, 0.0071)
    assert cfg.bin_spacings == pytest.approx((math.sqrt(math.pi), math.sqrt(math.pi)))


def test_probe_route_counts():
    cfg = SessionConfig(phase_route="coherent-probes", cutoff=2, probe_copies=100)
    assert cfg.probe_count == 9
    assert cfg.n_phase == 900


@pytest.mark.parametrize("data", [
    {"n_keys": 10},
    {"slices": {"m": 2, "rule": "map"}},
    {"n_key": "many"},
    {"n_key": 0},
    {"phase_route": "teleport"},
    {"channel": {"type": "wormhole"}},
    {"channel": {"type": "beamsplitter", "transmittance": 1.5}},
    {"codes": {"name": "golay23"}},
    {"slices": {"decode": "psychic"}},
    {"e_p_slices": [0.1]},
    {"verify_fraction": 1.0},
    {"eps_max": 0.5},
])
def test_bad_configs_rejected(data):
    with pytest.raises(ConfigError):
        SessionConfig.from_dict(data)


def test_config_rejects_non_object():
    with pytest.raises(ConfigError):
        SessionConfig.from_dict([1, 2, 3])


def test_config_respects_oscillator_cap(monkeypatch):
    monkeypatch.setattr(LabSettings, "MAX_OSCILLATORS", 100)
    with pytest.raises(ConfigError):
        SessionConfig.from_dict({})


def test_config_round_trip_and_seed():
    cfg = SessionConfig.from_dict({"alpha": 0.8, "slices": {"m": 2, "labeling": "gray"},
                                   "e_p_slices": [0.01, 0.02], "test_centers": [0.0]})
    assert cfg.slices == SliceConfig(m=2, labeling="gray")
    assert cfg.e_p_slices == (0.01, 0.02)
    again = SessionConfig.from_dict(cfg.to_dict())
    assert again == cfg
    assert cfg.with_seed(5).seed == 5
    assert cfg.with_seed(None) is cfg


def test_load_session_config(tmp_path, config_dir):
    cfg = load_session_config(config_dir / "lossless.json")
    assert cfg.alpha == 0.8
    assert cfg.phase_route == "squeezed-checks"

    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ConfigError):
        load_session_config(broken)
    with pytest.raises(ConfigError):
        load_session_config(tmp_path / "missing.json")


def test_codes_from_files(config_dir):
    cfg = SessionConfig(codes={"name": "file", "h1_file": str(config_dir / "hamming_7_4.txt"),
                               "h2_file": str(config_dir / "simplex_7_3.txt")})
    cfg.validate()
    assert cfg.build_codes().secret_bits == 1


def test_lab_settings_reload(monkeypatch):
    monkeypatch.setenv("LAB_DEFAULT_SEED", "42")
    monkeypatch.setenv("PORT", "not-a-number")
    monkeypatch.setenv("ACCESS_PASSWORD", "")
    LabSettings.reload()
    try:
        assert LabSettings.DEFAULT_SEED == 42
        assert LabSettings.PORT == 10000
        assert any("ACCESS_PASSWORD" in p for p in LabSettings.validate_config())
    finally:
        monkeypatch.undo()
        LabSettings.reload()


# ---------------------------------------------------------------- 记录与公开信道

def test_roles_and_verdicts():
    assert Role.KEY.quadrature == "x" and Role.BITCHECK.quadrature == "x"
    assert Role.CHECK.quadrature == "p" and Role.PROBE.quadrature == "p"
    assert not Role.KEY.discloses
    assert [v.exit_code for v in Verdict] == [0, 2, 3]
    with pytest.raises(ValueError):
        OscillatorRecord(index=0, role=Role.KEY, alice_x=1.0, alice_p=0.0, disclosed=1.0)


def test_report_non_volatile_dict():
    report = SessionReport(verdict=Verdict.GATE_ABORT, e_b=0.5, e_b_halfwidth=0.01, phi=0.3,
                           gate_rate=-1.0, phase_route="squeezed-checks", seed=1, config={},
                           resources={"pid": 1}, elapsed_seconds=2.0)
    data = report.to_dict(volatile=False)
    assert data["verdict"] == "abort-gate"
    assert data["exit_code"] == 2
    assert "resources" not in data and "elapsed_seconds" not in data
    assert "resources" in report.to_dict()


def test_transcript_leak_accounting():
    t = Transcript()
    t.publish("permutation", {"pi": np.arange(5)})
    t.publish("check_disclosure", {"values": np.array([0.5, 1.5])}, values=np.array([0.5, 1.5]))
    t.publish("syndrome", {"syndromes": np.zeros((4, 3), dtype=np.uint8)}, values=np.zeros((4, 3)))
    assert t.leaked_bits == 14
    assert t.syndrome_bits() == 12
    assert t.disclosed_values() == 2
    assert t.kinds() == ["permutation", "check_disclosure", "syndrome"]
    assert t.contains_any(np.array([1.5]))
    assert not t.contains_any(np.array([2.5]))
    with pytest.raises(ValueError):
        t.publish("gossip", {})

    stream = io.StringIO()
    t.dump_ndjson(stream)
    lines = [json.loads(line) for line in stream.getvalue().splitlines()]
    assert [m["seq"] for m in lines] == [0, 1, 2]
    assert lines[1]["payload"]["values"] == [0.5, 1.5]


# ---------------------------------------------------------------- Alice

def test_squeezed_ensemble_matches_coherent_average_state():
    var_p = variance_from_squeezing_db(6.0)
    coh = coherent_ensemble(15.5)
    sq = squeezed_ensemble(15.5, var_p)
    assert check_source_indistinguishability(coh, sq)
    assert not check_source_indistinguishability(coh, coherent_ensemble(15.0))
    with pytest.raises(DomainError):
        squeezed_ensemble(0.1, var_p)


def test_alice_prepare_layout(rng):
    cfg = SessionConfig(n_key=20, n_bitcheck=10, n_checks=5)
    batch, records = alice_prepare(cfg, rng)
    assert batch.size == 35 == len(records)
    assert batch.roles[:20] == [Role.KEY] * 20
    assert batch.roles[20:30] == [Role.BITCHECK] * 10
    assert list(batch.indices(Role.CHECK)) == list(range(30, 35))
    var_p = variance_from_squeezing_db(6.0)
    np.testing.assert_allclose(batch.variances[30:], [[VACUUM_VARIANCE ** 2 / var_p, var_p]] * 5)
    assert len(batch.states()) == 35


def test_alice_prepare_probes(rng):
    cfg = SessionConfig(n_key=5, n_bitcheck=5, phase_route="coherent-probes", cutoff=1, probe_copies=3)
    batch, records = alice_prepare(cfg, rng)
    assert batch.size == 5 + 5 + 12
    assert batch.probes.size == 4
    assert list(batch.probe_index[10:]) == [0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3]
    assert records[10].probe_index == 0 and records[0].probe_index is None


def test_check_states_are_indistinguishable_on_average(rng):
    cfg = SessionConfig(n_key=1, n_bitcheck=1, n_checks=40000)
    batch, _ = alice_prepare(cfg, rng)
    checks = batch.indices(Role.CHECK)
    totals = np.var(batch.means[checks], axis=0) + batch.variances[checks[0]]
    np.testing.assert_allclose(totals, [16.0, 16.0], rtol=0.03)


def test_permutation_round_trip(rng):
    values = rng.normal(size=(10, 2))
    pi = rng.permutation(10)
    np.testing.assert_array_equal(unpermute(permute(values, pi), pi), values)
    assert unpermute(permute(list("abcdef"), [2, 0, 1, 5, 4, 3]), [2, 0, 1, 5, 4, 3]) == list("abcdef")
    with pytest.raises(DomainError):
        permute(values, [0, 0, 1, 2, 3, 4, 5, 6, 7, 8])
    with pytest.raises(DomainError):
        unpermute(values, [0, 1])


# ---------------------------------------------------------------- Bob

def test_bob_measure_uses_role_quadrature(rng):
    means = np.array([[1.0, -1.0], [2.0, -2.0]])
    variances = np.full((2, 2), 1e-12)
    out = bob_measure(means, variances, [Role.KEY, Role.CHECK], rng)
    assert out == pytest.approx([1.0, -2.0], abs=1e-5)


def test_fit_channel_recovers_gain_and_noise(rng):
    x = rng.normal(0.0, 4.0, size=5000)
    y = 0.9 * x + rng.normal(0.0, math.sqrt(0.5), size=5000)
    fit = fit_channel(x, y)
    assert fit.gain == pytest.approx(0.9, abs=0.01)
    assert fit.noise_variance == pytest.approx(0.5, rel=0.08)
    with pytest.raises(DomainError):
        fit_channel([1.0], [1.0])
    with pytest.raises(DomainError):
        fit_channel([0.0, 0.0], [1.0, 2.0])


def test_bit_error_estimate():
    indicators = bit_check_indicators([0.0, 1.0, 2.0, 3.0], [0.1, 1.9, 2.0, 3.0], 1.0, 0.5)
    assert indicators.tolist() == [0, 1, 0, 0]
    est = estimate_bit_error([1] * 10 + [0] * 90)
    assert est.e_b == pytest.approx(0.1)
    assert est.samples == 100
    assert 0.04 < est.halfwidth < 0.08
    with pytest.raises(DomainError):
        estimate_bit_error([])


def test_collect_F_statistics():
    outcomes = np.array([0.0, 2.0, 0.1, -3.0])
    probe_index = np.array([0, 0, 1, 1])
    F, indicators = collect_F_statistics(outcomes, probe_index, 2, [0.0, 2.0], 0.5)
    assert F.tolist() == [[0.5, 0.5], [0.5, 1.0]]
    assert indicators[1][1].tolist() == [1, 1]
    with pytest.raises(DomainError):
        collect_F_statistics(outcomes, probe_index, 3, [0.0], 0.5)


# ---------------------------------------------------------------- 纠错

def test_error_upper_bound():
    assert error_upper_bound(0.0, 1000) == pytest.approx(0.003)
    assert error_upper_bound(0.1, 100) == pytest.approx(0.1 + 3 * math.sqrt(0.09 / 100))
    assert error_upper_bound(0.1, 0) == 1.0
    fails, e_up = expected_failed_blocks(0.0, 1000, 142, 7, 1)
    assert e_up == pytest.approx(0.003)
    assert fails == pytest.approx(0.027, abs=0.002)


def test_key_hex():
    assert key_hex(np.array([1, 0, 1, 0, 1, 0, 1, 0], dtype=np.uint8)) == "aa"
    assert key_hex(np.array([1], dtype=np.uint8)) == "80"
    assert key_hex(np.zeros(0, dtype=np.uint8)) == ""


def _clean_key(rng, size=70):
    s = build_equiprobable_slices(math.sqrt(15.5), 2)
    x = rng.normal(0.0, math.sqrt(15.5), size=size)
    labels = slice_labels_batch(x, s).astype(np.int64)
    return s, x, labels


def test_reconcile_noiseless_keeps_both_slices(rng):
    s, x, labels = _clean_key(rng)
    transcript = Transcript()
    result = reconcile(labels, x, s, "nearest", ChannelFit(1.0, 1e-6), nested_pair("hamming7"),
                       [0.0, 0.0], [0.0, 0.0], 1000, 0.1, transcript)
    assert result.agreement
    assert result.alice_bits.size == 20
    assert [r.disclosed for r in result.slices] == [False, False]
    assert all(r.residual_errors == 0 for r in result.slices)
    assert transcript.syndrome_bits() == 2 * 10 * 3


def test_reconcile_discloses_slice_with_negative_rate(rng):
    s, x, labels = _clean_key(rng)
    transcript = Transcript()
    result = reconcile(labels, x, s, "nearest", ChannelFit(1.0, 1e-6), nested_pair("hamming7"),
                       [0.2, 0.0], [0.5, 0.0], 1000, 0.1, transcript)
    assert [r.disclosed for r in result.slices] == [True, False]
    assert result.slices[0].rate == pytest.approx(css_rate(0.2, 0.5))
    assert result.slices[0].rate < 0
    assert result.alice_bits.size == 10
    assert result.agreement
    assert transcript.leaked_bits == 70 + 10 * 3


def test_reconcile_input_checks(rng):
    s, x, labels = _clean_key(rng, size=69)
    with pytest.raises(ValueError):
        reconcile(labels, x, s, "nearest", ChannelFit(1.0, 1e-6), nested_pair("hamming7"),
                  [0.0, 0.0], [0.0, 0.0], 1000, 0.1, Transcript())
    s, x, labels = _clean_key(rng)
    with pytest.raises(ValueError):
        reconcile(labels, x, s, "map-sbar", ChannelFit(1.0, 1e-6), nested_pair("hamming7"),
                  [0.0, 0.0], [0.0, 0.0], 1000, 0.1, Transcript())


def test_estimate_slice_errors_noiseless(rng):
    s, x, labels = _clean_key(rng, size=500)
    assert estimate_slice_errors(labels, x, s, "nearest", ChannelFit(1.0, 1e-6)) == [0.0, 0.0]
