"""Monte Carlo estimation of cut expectation values.

Branch outcomes are drawn from their exact binomial distribution rather than
per-shot trajectories: for a +/-1 observable the sampled mean of n shots is
fully determined by the success count, so the two are statistically
identical and the binomial draw is orders of magnitude cheaper.  Randomness
comes from counter-based Philox streams keyed by (seed, stream_id), so
identical keys reproduce identical draws across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import (
    InvalidObservableError,
    InvalidParameterError,
    InvalidProbabilityError,
    NotHermitianError,
    NotUnitaryError,
    ZeroShotsError,
)
from .linalg import DensityOperator, Matrix, as_matrix, dagger
from .qpd import QuasiProbDecomposition
from .channels import QuantumChannel

OBSERVABLE_TOL = 1e-10
PROBABILITY_TOL = 1e-10

MODES = ("stratified", "multinomial")


@dataclass(frozen=True)
class RandomSource:
    """Reproducible stream key: (seed, stream_id) -> Philox generator."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array(
            [self.seed & 0xFFFFFFFFFFFFFFFF, self.stream_id & 0xFFFFFFFFFFFFFFFF],
            dtype=np.uint64,
        )
        return np.random.Generator(np.random.Philox(key=key))


RngLike = Union[RandomSource, np.random.Generator]


def as_generator(rng: RngLike) -> np.random.Generator:
    """Materialize a generator; passes plain generators through unchanged."""
    if isinstance(rng, RandomSource):
        return rng.generator()
    return rng


@dataclass(frozen=True)
class ShotAllocation:
    """Deterministic split of a shot budget across decomposition terms."""

    total: int
    per_term: tuple[int, ...]

    def __post_init__(self) -> None:
        if sum(self.per_term) != self.total:
            raise InvalidParameterError("per-term shots must sum to the total")


def exact_expectation(prep: np.ndarray, observable: np.ndarray) -> float:
    """<0| W^dag O W |0> for a unitary preparation W and Hermitian O."""
    w = as_matrix(prep)
    obs = as_matrix(observable)
    residual = np.abs(dagger(w) @ w - np.eye(w.shape[0])).max()
    if residual > 1e-10:
        raise NotUnitaryError(f"max |W^dag W - I| = {residual:.3e} > 1e-10")
    herm = np.abs(obs - dagger(obs)).max()
    if herm > 1e-10:
        raise NotHermitianError(f"max |O - O^dag| = {herm:.3e} > 1e-10")
    column = w[:, 0]
    return float(np.real(column.conj() @ obs @ column))


def allocate_shots(qpd: QuasiProbDecomposition, total: int) -> ShotAllocation:
    """Largest-remainder split of `total` shots proportional to |c_i|/kappa.

    Ties go to the lower term index.  Whenever the budget covers every
    nonzero-probability term, each such term is guaranteed at least one shot
    so that no signed term is silently dropped.
    """
    if total < 0:
        raise InvalidParameterError(f"total must be >= 0, got {total}")
    probs = qpd.probabilities
    quotas = probs * total
    counts = np.floor(quotas).astype(int)
    remainder = total - int(counts.sum())
    order = sorted(range(len(probs)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:remainder]:
        counts[i] += 1
    nonzero = [i for i, p in enumerate(probs) if p > 0]
    if total >= len(nonzero):
        for i in nonzero:
            if counts[i] == 0:
                donor = max(range(len(counts)), key=lambda j: (counts[j], -j))
                counts[donor] -= 1
                counts[i] += 1
    return ShotAllocation(total=total, per_term=tuple(int(c) for c in counts))


def _plus_probability(
    ch: QuantumChannel, state: DensityOperator, observable: Matrix
) -> float:
    """Probability of the +1 outcome when measuring O after the channel."""
    value = float(np.real(np.trace(observable @ ch.apply(state).matrix)))
    p = 0.5 * (1.0 + value)
    if p < -PROBABILITY_TOL or p > 1.0 + PROBABILITY_TOL:
        raise InvalidProbabilityError(f"outcome probability {p} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def _check_observable(observable: np.ndarray) -> Matrix:
    obs = as_matrix(observable)
    herm = np.abs(obs - dagger(obs)).max()
    if herm > 1e-10:
        raise NotHermitianError(f"max |O - O^dag| = {herm:.3e} > 1e-10")
    eigs = np.linalg.eigvalsh(obs)
    if np.any(np.abs(np.abs(eigs) - 1.0) > OBSERVABLE_TOL):
        raise InvalidObservableError(f"observable eigenvalues {eigs} are not all +/-1")
    return obs


def sample_branch_expectation(
    ch: QuantumChannel,
    input_state: DensityOperator,
    observable: np.ndarray,
    shots: int,
    rng: RngLike,
) -> float:
    """Finite-shot estimate of tr[O Channel(rho)] for a +/-1 observable.

    Draws the +1 count from Binomial(shots, p_plus) with the exact outcome
    probability and returns (2 n_plus - shots)/shots; unbiased by
    construction.
    """
    if shots < 1:
        raise ZeroShotsError(f"shots must be >= 1, got {shots}")
    obs = _check_observable(observable)
    p_plus = _plus_probability(ch, input_state, obs)
    n_plus = int(as_generator(rng).binomial(shots, p_plus))
    return (2.0 * n_plus - shots) / shots


def estimate_cut_expectation(
    qpd: QuasiProbDecomposition,
    prep: np.ndarray,
    observable: np.ndarray,
    total_shots: int,
    rng: RngLike,
    mode: str = "stratified",
) -> float:
    """Signed recombination of finite-shot branch estimates.

    stratified: the budget is split proportionally to the coefficients and
    each branch is sampled with its share; the estimate is sum_i c_i est_i.
    multinomial: every shot first draws a term index with probability p_i,
    then a single +/-1 outcome weighted by sign(c_i) * kappa; the mean over
    all shots is returned.  Both are unbiased for the exact expectation
    whenever the decomposition reconstructs the identity.
    """
    if total_shots < 1:
        raise ZeroShotsError(f"total_shots must be >= 1, got {total_shots}")
    if mode not in MODES:
        raise InvalidParameterError(f"mode must be one of {MODES}, got {mode!r}")
    w = as_matrix(prep)
    obs = _check_observable(observable)
    state = DensityOperator.from_matrix(
        np.outer(w[:, 0], w[:, 0].conj())
    )
    gen = as_generator(rng)

    if mode == "stratified":
        allocation = allocate_shots(qpd, total_shots)
        estimate = 0.0
        for term, shots in zip(qpd.terms, allocation.per_term):
            if shots == 0:
                continue
            branch = sample_branch_expectation(term.channel, state, obs, shots, gen)
            estimate += term.coefficient * branch
        return estimate

    counts = gen.multinomial(total_shots, qpd.probabilities)
    kappa = qpd.kappa
    accumulated = 0.0
    for term, n in zip(qpd.terms, counts):
        if n == 0:
            continue
        p_plus = _plus_probability(term.channel, state, obs)
        n_plus = int(gen.binomial(int(n), p_plus))
        sign = 1.0 if term.coefficient > 0 else -1.0
        accumulated += sign * kappa * (2.0 * n_plus - int(n))
    return accumulated / total_shots
