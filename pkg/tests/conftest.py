"""Session-scoped fixtures shared across the suite."""

import time

import pytest

from nmecut.experiment import ExperimentConfig, run_sweep

ACCEPTANCE_SWEEP_CONFIG = ExperimentConfig(
    f_values=(0.5, 0.6, 0.7, 0.8, 0.9, 1.0),
    shot_grid=tuple(range(250, 5001, 250)),
    n_states=200,
    seed=20240901,
)


@pytest.fixture(scope="session")
def acceptance_sweep():
    """Desk-scale sweep (200 states, 20 budgets, 6 overlaps), run once.

    Returns (records, elapsed_seconds); several tests assert different
    invariants on the same data.
    """
    start = time.perf_counter()
    records = run_sweep(ACCEPTANCE_SWEEP_CONFIG)
    elapsed = time.perf_counter() - start
    return records, elapsed
