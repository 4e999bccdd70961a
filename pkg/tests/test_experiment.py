"""Tests for the sweep harness, persistence, and chart rendering."""

import math

import numpy as np
import pytest

from helpers import hurwitz_unitary, rank_sum_z
from nmecut.errors import InvalidParameterError
from nmecut.estimator import RandomSource
from nmecut.experiment import (
    CsvFormatError,
    ExperimentConfig,
    ExperimentRecord,
    check_records,
    haar_random_unitary,
    loglog_slope,
    read_csv,
    render_svg,
    run_sweep,
    run_trial,
    write_csv,
)
from nmecut.linalg import H, I2


class TestHaarRandomUnitary:
    def test_unitarity(self):
        gen = RandomSource(1, 0).generator()
        for _ in range(1000):
            w = haar_random_unitary(gen)
            assert np.abs(w.conj().T @ w - I2).max() <= 1e-12

    def test_fixed_seed_reproduces(self):
        a = haar_random_unitary(RandomSource(42, 3))
        b = haar_random_unitary(RandomSource(42, 3))
        np.testing.assert_array_equal(a, b)

    def test_first_entry_moment(self):
        # Haar moment E|W00|^2 = 1/2 in dimension 2; the oracle is an
        # independent angle-parametrized sampler.
        gen = RandomSource(7, 0).generator()
        samples = 100_000
        mean = np.mean([abs(haar_random_unitary(gen)[0, 0]) ** 2 for _ in range(samples)])
        assert mean == pytest.approx(0.5, abs=0.01)
        oracle_gen = np.random.default_rng(7)
        oracle = np.mean([abs(hurwitz_unitary(oracle_gen)[0, 0]) ** 2 for _ in range(20_000)])
        assert oracle == pytest.approx(0.5, abs=0.02)
        assert mean == pytest.approx(oracle, abs=0.02)


class TestRunTrial:
    def test_deterministic_zero_error(self):
        error = run_trial(1.0, I2, 100, RandomSource(0, 0))
        assert error == 0.0

    def test_pure_shot_noise_tail(self):
        # At k = 1 and <Z> = 0 the error is |mean of N fair +/-1 draws|;
        # its 95th percentile stays below 2.8/sqrt(N).
        shots = 5000
        gen = RandomSource(13, 0).generator()
        errors = np.array([run_trial(1.0, H, shots, gen) for _ in range(300)])
        assert np.quantile(errors, 0.95) <= 2.8 / math.sqrt(shots)

    def test_error_grows_without_entanglement(self):
        # Paired states, same shot budget: the k = 0 errors dominate the
        # k = 1 errors (rank-sum at 4 sigma).
        shots = 5000
        states = 200
        errors = {}
        for k in (0.0, 1.0):
            values = np.empty(states)
            for i in range(states):
                w = haar_random_unitary(RandomSource(100, i))
                values[i] = run_trial(k, w, shots, RandomSource(200 + int(k), i))
            errors[k] = values
        assert rank_sum_z(errors[0.0], errors[1.0]) > 4.0

    def test_error_bounded(self):
        gen = RandomSource(3, 0).generator()
        for _ in range(200):
            w = haar_random_unitary(gen)
            assert run_trial(0.0, w, 250, gen) <= 2.0


class TestRunSweep:
    def test_identity_prep_gives_zero_error(self):
        config = ExperimentConfig(
            f_values=(1.0,), shot_grid=(100,), n_states=1, seed=1, identity_prep=True
        )
        records = run_sweep(config)
        assert len(records) == 1
        assert records[0].avg_error == 0.0
        assert records[0].k == 1.0

    def test_record_schema(self):
        config = ExperimentConfig(
            f_values=(0.5, 0.8), shot_grid=(50, 100, 200), n_states=5, seed=3
        )
        records = run_sweep(config)
        assert len(records) == 6
        for r in records:
            assert math.isfinite(r.avg_error) and r.avg_error >= 0.0
            assert r.std_error >= 0.0
            assert r.n_states == 5
        assert [(r.f, r.shots) for r in records] == [
            (f, s) for f in (0.5, 0.8) for s in (50, 100, 200)
        ]

    def test_paired_sequences_share_preparations(self):
        base = ExperimentConfig(f_values=(0.5, 1.0), shot_grid=(64,), n_states=4, seed=9)
        paired = run_sweep(base)
        unpaired = run_sweep(
            ExperimentConfig(
                f_values=(0.5, 1.0), shot_grid=(64,), n_states=4, seed=9, paired=False
            )
        )
        # Pairing is internal; both runs share the schema but the unpaired
        # run draws different preparations for the second f, so the error
        # values differ there.
        assert paired[1].avg_error != unpaired[1].avg_error

    def test_deterministic_records(self):
        config = ExperimentConfig(f_values=(0.7,), shot_grid=(100, 200), n_states=6, seed=21)
        assert run_sweep(config) == run_sweep(config)

    def test_config_validation(self):
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(f_values=(0.4,)).validate()
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(shot_grid=(100, 100)).validate()
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(shot_grid=()).validate()
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(n_states=0).validate()
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(mode="bogus").validate()


class TestSweepInvariants:
    def test_endpoint_ordering_at_largest_budget(self, acceptance_sweep):
        # avg_error non-increasing in f at the largest budget, with the
        # endpoints separated by at least 4 sigma of the paired errors.
        records, _ = acceptance_sweep
        top = max(r.shots for r in records)
        at_top = {r.f: r for r in records if r.shots == top}
        fs = sorted(at_top)
        errors = [at_top[f].avg_error for f in fs]
        # allow adjacent cells to tie within noise, but no inversions beyond it
        for a, b in zip(fs, fs[1:]):
            assert at_top[b].avg_error <= at_top[a].avg_error + 4.0 * max(
                at_top[a].std_error, at_top[b].std_error
            )
        low, high = at_top[fs[0]], at_top[fs[-1]]
        spread = math.hypot(low.std_error, high.std_error)
        assert (low.avg_error - high.avg_error) / spread > 4.0
        assert errors[0] > errors[-1]

    def test_errors_well_below_hard_bound(self, acceptance_sweep):
        records, _ = acceptance_sweep
        assert all(0.0 <= r.avg_error <= 2.0 for r in records)

    def test_per_f_slopes_near_square_root_law(self, acceptance_sweep):
        records, _ = acceptance_sweep
        by_f = {}
        for r in records:
            by_f.setdefault(r.f, []).append((r.shots, r.avg_error))
        for f, cells in by_f.items():
            cells.sort()
            slope = loglog_slope([c[0] for c in cells], [c[1] for c in cells])
            assert -0.65 <= slope <= -0.35, f"f={f}: slope {slope}"


class TestCsvRoundTrip:
    def test_empty_records_write_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_csv([], str(path))
        assert path.read_text() == "f,k,shots,avg_error,std_error,n_states\n"

    def test_single_record_layout(self, tmp_path):
        record = ExperimentRecord(f=1.0, k=1.0, shots=500, avg_error=0.012, std_error=0.001, n_states=200)
        path = tmp_path / "one.csv"
        write_csv([record], str(path))
        lines = path.read_text().splitlines()
        assert len(lines) == 2
        assert len(lines[1].split(",")) == 6

    def test_round_trip_identity(self, tmp_path):
        records = [
            ExperimentRecord(
                f=0.5 + 0.1 * i,
                k=0.123456789 * i,
                shots=250 * (i + 1),
                avg_error=0.1 / (i + 1),
                std_error=0.01 / (i + 1),
                n_states=100,
            )
            for i in range(5)
        ]
        path = tmp_path / "round.csv"
        write_csv(records, str(path))
        assert read_csv(str(path)) == records

    def test_byte_identical_reruns(self, tmp_path):
        config = ExperimentConfig(f_values=(0.6, 1.0), shot_grid=(64, 128), n_states=8, seed=77)
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(run_sweep(config), str(first))
        write_csv(run_sweep(config), str(second))
        assert first.read_bytes() == second.read_bytes()

    def test_rejects_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(CsvFormatError):
            read_csv(str(path))

    def test_rejects_malformed_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("f,k,shots,avg_error,std_error,n_states\n0.5,0,oops,0.1,0.01,10\n")
        with pytest.raises(CsvFormatError):
            read_csv(str(path))


def synthetic_records(f_values, shot_values, scale=1.0, slope=-0.5):
    records = []
    for f in f_values:
        # Error amplitude proportional to the overhead of the matching cut.
        amplitude = scale * (2.0 / f - 1.0)
        for shots in shot_values:
            records.append(
                ExperimentRecord(
                    f=f,
                    k=0.0,
                    shots=shots,
                    avg_error=amplitude * shots**slope,
                    std_error=0.0,
                    n_states=1,
                )
            )
    return records


class TestChecksAndPlot:
    def test_loglog_slope_recovers_exponent(self):
        shots = [250, 500, 1000, 2000]
        errors = [0.9 * s**-0.5 for s in shots]
        assert loglog_slope(shots, errors) == pytest.approx(-0.5, abs=1e-12)

    def test_check_passes_on_well_formed_records(self):
        records = synthetic_records((0.5, 0.75, 1.0), (250, 500, 1000, 2000, 4000))
        assert check_records(records) == []

    def test_check_flags_bad_slope(self):
        records = synthetic_records((0.5, 1.0), (250, 500, 1000, 2000), slope=-0.1)
        failures = check_records(records)
        assert any("slope" in msg for msg in failures)

    def test_check_flags_inverted_ordering(self):
        records = synthetic_records((0.5, 1.0), (250, 1000, 2000))
        flipped = [
            ExperimentRecord(
                f=r.f, k=r.k, shots=r.shots,
                avg_error=r.avg_error * (9.0 if r.f == 1.0 else 1.0),
                std_error=r.std_error, n_states=r.n_states,
            )
            for r in records
        ]
        failures = check_records(flipped)
        assert any("not above" in msg for msg in failures)

    def test_check_ignores_small_budgets(self):
        records = synthetic_records((0.5, 1.0), (250, 500))
        flipped = [
            ExperimentRecord(
                f=r.f, k=r.k, shots=r.shots, avg_error=0.05, std_error=0.0, n_states=1
            )
            for r in records
        ]
        # Equal errors below the 1000-shot threshold: ordering not enforced,
        # and constant series fail the slope band instead.
        failures = check_records(flipped)
        assert all("slope" in msg for msg in failures)

    def test_render_svg_polylines_and_legend(self, tmp_path):
        records = synthetic_records(
            (0.5, 0.6, 0.7, 0.8, 0.9, 1.0), (250, 500, 1000, 2000)
        )
        path = tmp_path / "chart.svg"
        render_svg(records, str(path))
        text = path.read_text()
        assert text.count("<polyline") == 6
        legend_order = [text.index(f"f = {f:g}") for f in (0.5, 0.6, 0.7, 0.8, 0.9, 1.0)]
        assert legend_order == sorted(legend_order)
        assert "1e-" in text  # log-scale decade labels

    def test_render_single_point_series_as_marker(self, tmp_path):
        records = synthetic_records((0.5,), (1000,))
        path = tmp_path / "point.svg"
        render_svg(records, str(path))
        text = path.read_text()
        assert "<polyline" not in text
        assert "<circle" in text

    def test_render_skips_nonpositive_errors(self, tmp_path):
        records = [
            ExperimentRecord(f=1.0, k=1.0, shots=100, avg_error=0.0, std_error=0.0, n_states=1),
            ExperimentRecord(f=1.0, k=1.0, shots=200, avg_error=0.01, std_error=0.0, n_states=1),
        ]
        path = tmp_path / "zeros.svg"
        render_svg(records, str(path))
        assert path.read_text().count("<circle") == 1

    def test_render_rejects_empty(self, tmp_path):
        with pytest.raises(InvalidParameterError):
            render_svg([], str(tmp_path / "none.svg"))
