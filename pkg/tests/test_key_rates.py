"""
key_rates：速率公式、切片误码、阈值、速率表
"""
import io
import math
import time

import numpy as np
import pytest
from scipy import special

from core_math import DomainError, binary_entropy, loss_db_to_transmittance, squeezing_db
from bit_encoding import SQRT_PI, build_equiprobable_slices
from key_rates import (
    css_rate,
    slice_rates,
    gaussian_mutual_info,
    critical_error_rate,
    rate_formula_audit,
    periodic_bit_error,
    slice_error_rates,
    monte_carlo_slice_error_rates,
    best_decode_configuration,
    clear_slice_error_cache,
    format_discrepancy_table,
    ThresholdError,
    solve_threshold,
    PUBLISHED_ROWS,
    MODULATION_VARIANCE,
    MODULATION_CONVENTIONS,
    TABLE_MODULATION_VARIANCE,
    CORRECTED_EP1_ZERO_LOSS,
    DEFAULT_LOSSES,
    provenance,
    TableError,
    build_table_rows,
    write_table_csv,
)
from key_rates.bit_errors import STRICT_SLICE1_PP, STRICT_SLICE2_FACTOR
from key_rates.published import published_phase_errors, PRINTED_EP1_ZERO_LOSS


def test_css_rate_known_values():
    assert css_rate(0.0, 0.0) == 1.0
    assert css_rate(0.0377, 0.137) == pytest.approx(0.192, abs=0.001)
    assert css_rate(0.0311, 0.0533) == pytest.approx(0.500, abs=0.002)
    assert css_rate(0.0311, 0.00533) == pytest.approx(0.752, abs=0.002)
    assert css_rate(0.2, 0.2) < 0


def test_slice_rates_clip_negative():
    rates, total = slice_rates([0.0311, 0.2], [0.00533, 0.4])
    assert rates[1] == 0.0
    assert total == pytest.approx(rates[0])
    with pytest.raises(DomainError):
        slice_rates([0.1], [0.1, 0.2])


def test_gaussian_mutual_info():
    assert gaussian_mutual_info(31.0) == 2.5
    assert gaussian_mutual_info(0.0) == 0.0
    with pytest.raises(DomainError):
        gaussian_mutual_info(-1.0)


def test_critical_error_rate():
    e = critical_error_rate()
    assert e == pytest.approx(0.110028, abs=1e-5)
    assert 1.0 - 2.0 * binary_entropy(e) == pytest.approx(0.0, abs=1e-9)


def test_rate_formula_audit_flags_zero_loss_slice_one():
    entries = rate_formula_audit()
    assert len(entries) == 8
    assert sum(e["consistent"] for e in entries) == 7

    anomaly = next(e for e in entries if e["loss_db"] == 0.0 and e["slice"] == 1)
    assert not anomaly["consistent"]
    assert anomaly["e_p"] == PRINTED_EP1_ZERO_LOSS
    assert anomaly["computed_rate"] == pytest.approx(0.500, abs=0.002)
    assert anomaly["corrected_rate"] == pytest.approx(0.752, abs=0.002)


def test_published_phase_errors():
    assert published_phase_errors(0.0)[0] == CORRECTED_EP1_ZERO_LOSS
    assert published_phase_errors(0.0, corrected=False)[0] == PRINTED_EP1_ZERO_LOSS
    assert published_phase_errors(1.4) == [None, 0.456]
    with pytest.raises(KeyError):
        published_phase_errors(0.5)
    assert len(PUBLISHED_ROWS) == 5
    assert "corrected" in provenance()


def test_periodic_bit_error_bounded_by_gaussian_tail():
    exact, bound = periodic_bit_error(0.3, SQRT_PI)
    assert exact <= bound
    assert exact == pytest.approx(bound, rel=1e-6)

    exact, bound = periodic_bit_error(0.8, SQRT_PI)
    assert exact < bound

    exact, _ = periodic_bit_error(20.0, SQRT_PI)
    assert exact == pytest.approx(0.5, abs=1e-3)

    with pytest.raises(DomainError):
        periodic_bit_error(0.0, SQRT_PI)


def test_slice_error_rates_remainder_rule_zero_loss():
    s = build_equiprobable_slices(math.sqrt(MODULATION_VARIANCE), 2)
    e = slice_error_rates(1.0, MODULATION_VARIANCE, s, "map-sbar")
    assert 0.02 < e[0] < 0.045
    assert e[1] < 1e-3
    assert e[1] < e[0]


def test_slice_errors_grow_with_loss():
    s = build_equiprobable_slices(math.sqrt(MODULATION_VARIANCE), 2)
    low = slice_error_rates(1.0, MODULATION_VARIANCE, s, "map")
    high = slice_error_rates(loss_db_to_transmittance(1.4), MODULATION_VARIANCE, s, "map")
    assert high[0] > low[0]
    assert high[1] > low[1]


def test_slice_error_rates_rejects_unknown_rule():
    s = build_equiprobable_slices(1.0, 2)
    with pytest.raises(DomainError):
        slice_error_rates(1.0, 1.0, s, "magic")


def _slice_map(v_mod, labeling="binary"):
    return build_equiprobable_slices(math.sqrt(v_mod), 2, labeling)


@pytest.mark.slow
@pytest.mark.parametrize("loss_db", [row.loss_db for row in PUBLISHED_ROWS])
def test_slice_error_rates_agree_with_monte_carlo(rng, loss_db):
    s = _slice_map(TABLE_MODULATION_VARIANCE)
    t = loss_db_to_transmittance(loss_db)
    exact = slice_error_rates(t, TABLE_MODULATION_VARIANCE, s, "map-sbar")
    sampled, sigma = monte_carlo_slice_error_rates(t, TABLE_MODULATION_VARIANCE, s, "map-sbar", 2_000_000, rng)
    for i in range(2):
        assert abs(sampled[i] - exact[i]) <= 3 * sigma[i], f"切片 {i + 1}: {sampled[i]} vs {exact[i]}"


@pytest.mark.slow
@pytest.mark.parametrize("rule", ["map", "nearest", "nearest-sbar"])
def test_other_rules_agree_with_monte_carlo(rng, rule):
    s = _slice_map(MODULATION_VARIANCE)
    t = loss_db_to_transmittance(0.4)
    exact = slice_error_rates(t, MODULATION_VARIANCE, s, rule)
    sampled, sigma = monte_carlo_slice_error_rates(t, MODULATION_VARIANCE, s, rule, 1_000_000, rng)
    assert abs(sampled[0] - exact[0]) <= 3 * sigma[0]


def test_table_configuration_meets_strict_tier():
    s = _slice_map(TABLE_MODULATION_VARIANCE)
    for row in PUBLISHED_ROWS:
        e_b = slice_error_rates(loss_db_to_transmittance(row.loss_db), TABLE_MODULATION_VARIANCE, s, "map-sbar")
        if row.e_b[0] is not None:
            assert abs(e_b[0] - row.e_b[0]) <= STRICT_SLICE1_PP / 100.0, f"{row.loss_db} dB 切片 1: {e_b[0]}"
        ratio = e_b[1] / row.e_b[1]
        assert 1.0 / STRICT_SLICE2_FACTOR <= ratio <= STRICT_SLICE2_FACTOR, f"{row.loss_db} dB 切片 2: {e_b[1]}"


def test_modulation_conventions():
    assert MODULATION_CONVENTIONS["signal"] == MODULATION_VARIANCE == 15.5
    assert MODULATION_CONVENTIONS["total"] == TABLE_MODULATION_VARIANCE == 15.0


def test_slice_error_rates_cached_per_configuration():
    clear_slice_error_cache()
    s = _slice_map(TABLE_MODULATION_VARIANCE)
    first = slice_error_rates(1.0, TABLE_MODULATION_VARIANCE, s, "map-sbar")
    started = time.perf_counter()
    again = slice_error_rates(1.0, TABLE_MODULATION_VARIANCE, s, "map-sbar")
    assert again == first
    assert time.perf_counter() - started < 0.01


def test_default_table_is_fast():
    clear_slice_error_cache()
    started = time.perf_counter()
    rows = build_table_rows(DEFAULT_LOSSES)
    elapsed = time.perf_counter() - started
    assert len(rows) == len(DEFAULT_LOSSES)
    assert elapsed < 1.0, f"速率表耗时 {elapsed:.2f}s"


def test_best_decode_configuration_rejects_unknown_convention():
    with pytest.raises(DomainError):
        best_decode_configuration(conventions=("half",))


@pytest.mark.slow
def test_best_decode_configuration_meets_strict_tier():
    result = best_decode_configuration(rules=("map-sbar", "nearest-sbar"))
    table = format_discrepancy_table(result)
    assert len(result["configurations"]) == 8
    assert result["strict_tier_met"], f"没有配置达到严格档位:\n{table}"
    assert result["winner"]["convention"] in MODULATION_CONVENTIONS

    reference = next(c for c in result["configurations"]
                     if (c["convention"], c["labeling"], c["decode"]) == ("total", "binary", "map-sbar"))
    assert reference["strict_tier"], table
    assert reference["v_mod"] == TABLE_MODULATION_VARIANCE
    for config in result["configurations"]:
        assert len(config["rows"]) == len(PUBLISHED_ROWS)


def test_threshold_symmetric_erfc():
    result = solve_threshold("symmetric-erfc")
    e = special.erfc(SQRT_PI / (2.0 * result.sigma_tilde))
    assert e == pytest.approx(0.110028, abs=1e-5)
    assert result.threshold_db == pytest.approx(squeezing_db(result.sigma_tilde ** 2))
    assert result.critical_error == pytest.approx(0.110028, abs=1e-5)


def test_threshold_lattice_needs_no_more_squeezing():
    erfc_db = solve_threshold("symmetric-erfc").threshold_db
    lattice_db = solve_threshold("symmetric-lattice").threshold_db
    assert lattice_db <= erfc_db + 1e-6


def test_threshold_unknown_model():
    with pytest.raises(ThresholdError):
        solve_threshold("nope")


def test_table_zero_loss_total_rate():
    rows = build_table_rows([0.0])
    row = rows[0]
    assert row["e_p1"] == CORRECTED_EP1_ZERO_LOSS
    assert row["R1"] == pytest.approx(0.752, abs=0.01)
    assert row["R2"] == pytest.approx(0.938, abs=0.005)
    assert row["R_total"] == pytest.approx(1.69, abs=0.01)
    assert row["R_total"] == pytest.approx(
        max(css_rate(row["e_b1"], row["e_p1"]), 0) + max(css_rate(row["e_b2"], row["e_p2"]), 0))
    assert row["note"]


def test_table_missing_slice_one_shows_dash():
    rows = build_table_rows([1.4])
    assert rows[0]["e_p1"] is None
    assert rows[0]["R1"] is None

    stream = io.StringIO()
    write_table_csv(rows, stream)
    data_line = stream.getvalue().splitlines()[1]
    assert data_line.startswith("1.4,")
    assert ",-," in data_line


@pytest.mark.parametrize("loss_db, column, expected, tolerance", [
    (1.4, "R2", 0.00114, 2e-4),
    (1.0, "R2", 0.0147, 5e-4),
    (0.4, "R1", 0.193, 0.01),
])
def test_table_rates_match_published(loss_db, column, expected, tolerance):
    row = build_table_rows([loss_db])[0]
    assert row[column] == pytest.approx(expected, abs=tolerance)


def test_table_empty_is_header_only():
    stream = io.StringIO()
    write_table_csv(build_table_rows([]), stream)
    assert stream.getvalue() == "loss_db,e_b1,e_p1,R1,e_b2,e_p2,R2,R_total,note\r\n"


@pytest.mark.parametrize("losses, source", [([0.5], "paper"), ([-1.0], "paper"), ([0.0], "simulated"), ([0.0], "published")])
def test_table_errors(losses, source):
    with pytest.raises(TableError):
        build_table_rows(losses, source)
