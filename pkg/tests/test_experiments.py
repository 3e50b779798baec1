import io
import math

import numpy as np
import pytest

from fsscomp.analytic import gated_coherence
from fsscomp.cascade import CascadeParams, precession_rate
from fsscomp.compensation import MismatchSpec
from fsscomp.experiments import (
    GATING_COLUMNS,
    SWEEP_COLUMNS,
    evaluate_mismatch,
    gating_tradeoff,
    sweep_delay,
    sweep_mismatch,
)
from fsscomp.montecarlo import McConfig

W3 = precession_rate(CascadeParams(3.0))


def test_grid_contract(dot):
    res = sweep_mismatch(dot, (-2, 2), (-1, 3), steps=(3, 5))
    assert len(res) == 15
    d1, d2 = res.column("d_omega1"), res.column("d_omega2")
    assert sorted(set(d1)) == [-2.0, 0.0, 2.0]
    assert sorted(set(d2)) == [-1.0, 0.0, 1.0, 2.0, 3.0]
    # d_omega1 is the outer loop
    np.testing.assert_array_equal(d1[:5], -2.0)
    for name in ("fidelity_phi_plus", "fidelity_phi_minus", "concurrence", "purity"):
        col = res.column(name)
        assert np.all((col >= 0) & (col <= 1))
    assert set(res.column("method")) == {"analytic"}


def test_origin_is_perfect(dot):
    row, _ = evaluate_mismatch(dot, MismatchSpec())
    assert row.fidelity_phi_plus == pytest.approx(1, abs=1e-12)
    assert row.concurrence == pytest.approx(1, abs=1e-12)


def test_precession_offset_is_the_uncompensated_baseline(dot):
    row, _ = evaluate_mismatch(dot, MismatchSpec(W3, 0.0))
    assert row.fidelity_phi_plus == pytest.approx(0.523, abs=5e-4)
    assert row.concurrence == pytest.approx(0.214, abs=5e-4)


def test_concurrence_factorizes(dot):
    res = sweep_mismatch(dot, steps=9)
    c = res.column("concurrence").reshape(9, 9)
    mid = 4
    np.testing.assert_allclose(c, np.outer(c[:, mid], c[mid, :]), atol=1e-9, rtol=0)


def test_delay_sweep(dot):
    res = sweep_delay(dot)
    assert len(res) == 121
    dt = res.column("delta_t")
    np.testing.assert_allclose(res.column("concurrence"), 1, atol=1e-12)
    expected = (1 + np.cos(W3 * dt)) / 2
    np.testing.assert_allclose(res.column("fidelity_phi_plus"), expected, atol=1e-9)
    np.testing.assert_allclose(
        res.column("fidelity_phi_plus") + res.column("fidelity_phi_minus"), 1, atol=1e-12
    )


def test_delay_half_period(dot):
    half = math.pi / W3
    assert half == pytest.approx(0.6893, abs=1e-4)
    row, _ = evaluate_mismatch(dot, MismatchSpec(0, 0, half))
    assert row.fidelity_phi_plus == pytest.approx(0, abs=1e-12)
    assert row.fidelity_phi_minus == pytest.approx(1, abs=1e-12)
    assert row.concurrence == pytest.approx(1, abs=1e-12)


def test_gating_columns_and_limits(dot):
    res = gating_tradeoff(dot, (0.01, 10.0), steps=200)
    assert res.columns == GATING_COLUMNS
    acc = res.column("acceptance")
    assert np.all(np.diff(acc) > 0)
    last = res.rows[-1]
    assert last.acceptance == pytest.approx(1, abs=5e-5)
    assert last.concurrence == pytest.approx(0.214, abs=2e-3)
    first = res.rows[0]
    assert first.acceptance < 0.01
    assert first.concurrence > 0.999


def test_gated_coherence_decreases_within_one_precession_period(dot):
    period = 2 * math.pi / W3
    res = gating_tradeoff(dot, (0.01, period), steps=200)
    assert np.all(np.diff(res.column("concurrence")) < 0)


def test_gated_coherence_is_not_monotone_beyond_one_period(dot):
    # |c| reaches a first minimum near one precession period, then ripples
    # around the ungated value
    gates = np.linspace(0.5, 4.0, 701)
    mags = np.array([abs(gated_coherence(t, W3, 1.0)[0]) for t in gates])
    rising = np.flatnonzero(np.diff(mags) > 0)
    k = rising[0]
    assert gates[k] == pytest.approx(2 * math.pi / W3, abs=0.2)
    assert mags.max(initial=0, where=gates > gates[k]) > mags[k] + 0.05


def test_log_gating_grid(dot):
    res = gating_tradeoff(dot, (0.01, 10.0), steps=4, log=True)
    np.testing.assert_allclose(res.column("t_gate"), [0.01, 0.1, 1.0, 10.0])


@pytest.mark.parametrize(
    "call",
    [
        lambda p: sweep_mismatch(p, (1, 1), (-1, 1)),
        lambda p: sweep_mismatch(p, (2, 1), (-1, 1)),
        lambda p: sweep_mismatch(p, steps=1),
        lambda p: sweep_delay(p, (0, 0)),
        lambda p: gating_tradeoff(p, (0, 1)),
        lambda p: sweep_mismatch(p, steps=3, method="guess"),
    ],
)
def test_bad_ranges_rejected(dot, call):
    with pytest.raises(ValueError):
        call(dot)


def test_csv_format(dot):
    res = sweep_mismatch(dot, steps=3)
    text = res.to_csv()
    lines = text.split("\n")
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert text.endswith("\n") and "\r" not in text
    assert len(lines) == 1 + 9 + 1
    fields = lines[1].split(",")
    assert fields[-2:] == ["0", "analytic"]
    assert float(fields[0]) == -5.0
    # nine significant digits
    assert lines[5].split(",")[3] == "1"
    row = res.rows[1]
    assert fields != lines[2].split(",")
    assert lines[2].split(",")[5] == f"{row.concurrence:.9g}"


def test_csv_byte_identical(dot, tmp_path):
    a = sweep_mismatch(dot, steps=5).to_csv(tmp_path / "a.csv")
    sweep_mismatch(dot, steps=5).to_csv(tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.csv").read_bytes() == a.encode()
    buf = io.StringIO()
    sweep_mismatch(dot, steps=5).to_csv(buf)
    assert buf.getvalue() == a


def test_monte_carlo_rows_report_sample_counts(dot):
    cfg = McConfig(seed=5, batch_size=1000, max_samples=20_000)
    res = sweep_delay(dot, (0, 1), steps=2, cfg=cfg, method="monte_carlo")
    assert set(res.column("method")) == {"monte_carlo"}
    assert np.all(res.column("n_samples") >= 2000)
    assert np.all(res.column("n_samples") % 1000 == 0)
