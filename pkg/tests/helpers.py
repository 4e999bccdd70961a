"""Shared test utilities: random states and independent statistical oracles."""

from __future__ import annotations

import itertools
import math

import numpy as np


def random_density_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Ginibre construction: A A^dag normalized to unit trace."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = a @ a.conj().T
    return m / np.trace(m).real


def random_pure_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def hurwitz_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar 2x2 unitary from the angle parametrization (QR-free oracle).

    cos^2(theta) is uniform on [0, 1]; the two phases are uniform on
    [0, 2pi); a global phase completes U(2).
    """
    theta = math.acos(math.sqrt(rng.uniform(0.0, 1.0)))
    phi = rng.uniform(0.0, 2.0 * math.pi)
    chi = rng.uniform(0.0, 2.0 * math.pi)
    alpha = rng.uniform(0.0, 2.0 * math.pi)
    c, s = math.cos(theta), math.sin(theta)
    su2 = np.array(
        [
            [np.exp(1j * phi) * c, np.exp(1j * chi) * s],
            [-np.exp(-1j * chi) * s, np.exp(-1j * phi) * c],
        ]
    )
    return np.exp(1j * alpha) * su2


def brute_force_partial_trace(matrix: np.ndarray, dims: list[int], traced: set[int]) -> np.ndarray:
    """Index-contraction oracle for the partial trace, no reshaping tricks."""
    n = len(dims)
    keep = [i for i in range(n) if i not in traced]
    traced_list = sorted(traced)
    keep_dims = [dims[i] for i in keep]
    out_dim = int(np.prod(keep_dims))
    out = np.zeros((out_dim, out_dim), dtype=complex)

    def flat(assignment: dict[int, int]) -> int:
        index = 0
        for pos in range(n):
            index = index * dims[pos] + assignment[pos]
        return index

    def packed(values: tuple[int, ...]) -> int:
        index = 0
        for d, v in zip(keep_dims, values):
            index = index * d + v
        return index

    for row_vals in itertools.product(*[range(d) for d in keep_dims]):
        for col_vals in itertools.product(*[range(d) for d in keep_dims]):
            total = 0.0 + 0.0j
            for tr_vals in itertools.product(*[range(dims[i]) for i in traced_list]):
                row = dict(zip(keep, row_vals))
                row.update(zip(traced_list, tr_vals))
                col = dict(zip(keep, col_vals))
                col.update(zip(traced_list, tr_vals))
                total += matrix[flat(row), flat(col)]
            out[packed(row_vals), packed(col_vals)] = total
    return out


def rank_sum_z(a: np.ndarray, b: np.ndarray) -> float:
    """Mann-Whitney z statistic (normal approximation, midranks for ties).

    Positive when `a` is stochastically larger than `b`.
    """
    combined = np.concatenate([a, b])
    order = np.argsort(combined, kind="mergesort")
    ranks = np.empty(combined.size)
    sorted_vals = combined[order]
    i = 0
    while i < combined.size:
        j = i
        while j + 1 < combined.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    n1, n2 = a.size, b.size
    rank_sum = ranks[:n1].sum()
    mean = n1 * (n1 + n2 + 1) / 2.0
    std = math.sqrt(n1 * n2 * (n1 + n2 + 1) / 12.0)
    return (rank_sum - mean) / std
