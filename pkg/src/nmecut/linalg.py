"""Dense complex-matrix kernel for systems of up to three qubits.

Everything here is exact double-precision arithmetic on small (at most 8x8)
matrices.  Qubit ordering convention: the leftmost tensor factor is qubit 0
and the most significant bit of a computational-basis index.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from .errors import (
    DimensionMismatchError,
    InvalidParameterError,
    NotHermitianError,
    NotPositiveError,
    NotUnitTraceError,
)

Matrix = npt.NDArray[np.complex128]

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
NORM_TOL = 1e-12

VALID_DENSITY_DIMS = (2, 4, 8)

# Single-qubit building blocks.
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
# Phase convention: S = diag(1, i), so (SH) Z (SH)^dag = Y exactly.
S = np.array([[1, 0], [0, 1j]], dtype=complex)
PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}

# CNOT with qubit 0 as control, qubit 1 as target.
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def as_matrix(a: npt.ArrayLike) -> Matrix:
    """Coerce to a complex128 2-d array, rejecting NaN/Inf entries."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2:
        raise InvalidParameterError(f"expected a 2-d matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise InvalidParameterError("matrix contains non-finite entries")
    return m


def dagger(a: Matrix) -> Matrix:
    """Conjugate transpose."""
    return a.conj().T


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> Matrix:
    """Kronecker product with the first factor as the most significant qubit."""
    return np.kron(as_matrix(a), as_matrix(b))


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class DensityOperator:
    """Positive, Hermitian, unit-trace operator on 1-3 qubits."""

    dim: int
    matrix: Matrix

    def __post_init__(self) -> None:
        m = as_matrix(self.matrix)
        if m.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"matrix shape {m.shape} does not match dim {self.dim}"
            )
        if self.dim not in VALID_DENSITY_DIMS:
            raise InvalidParameterError(
                f"dim must be one of {VALID_DENSITY_DIMS}, got {self.dim}"
            )
        herm = np.abs(m - dagger(m)).max()
        if herm > HERMITIAN_TOL:
            raise NotHermitianError(f"max |M - M^dag| = {herm:.3e} > {HERMITIAN_TOL}")
        tr = m.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise NotUnitTraceError(f"|tr(M) - 1| = {abs(tr - 1.0):.3e} > {TRACE_TOL}")
        # Full eigendecomposition: 8x8 is cheap and yields the residual.
        lo = float(np.linalg.eigvalsh(m).min())
        if lo < -POSITIVITY_TOL:
            raise NotPositiveError(f"minimum eigenvalue {lo:.3e} < -{POSITIVITY_TOL}")
        object.__setattr__(self, "matrix", _freeze(m))

    @classmethod
    def from_matrix(cls, m: npt.ArrayLike) -> "DensityOperator":
        m = as_matrix(m)
        return cls(dim=m.shape[0], matrix=m)


@dataclass(frozen=True)
class PureState:
    """Unit-norm complex amplitude vector on 1-3 qubits."""

    dim: int
    amplitudes: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        v = np.array(self.amplitudes, dtype=complex)
        if v.ndim != 1 or v.shape[0] != self.dim:
            raise DimensionMismatchError(
                f"amplitude vector shape {v.shape} does not match dim {self.dim}"
            )
        if self.dim & (self.dim - 1) != 0 or self.dim < 2:
            raise InvalidParameterError(f"dim must be a power of two, got {self.dim}")
        nrm = float(np.linalg.norm(v))
        if abs(nrm - 1.0) > NORM_TOL:
            raise InvalidParameterError(f"|norm - 1| = {abs(nrm - 1.0):.3e} > {NORM_TOL}")
        v.flags.writeable = False
        object.__setattr__(self, "amplitudes", v)

    @classmethod
    def from_amplitudes(cls, v: npt.ArrayLike) -> "PureState":
        v = np.asarray(v, dtype=complex)
        return cls(dim=v.shape[0], amplitudes=v)

    def density(self) -> DensityOperator:
        """|psi><psi| as a validated density operator."""
        return DensityOperator.from_matrix(np.outer(self.amplitudes, self.amplitudes.conj()))


def validate_density(m: npt.ArrayLike) -> DensityOperator:
    """Validate a raw matrix as a density operator or raise the named violation."""
    return DensityOperator.from_matrix(m)


def partial_trace(
    rho: DensityOperator, dims: Sequence[int], traced: Iterable[int]
) -> DensityOperator:
    """Trace out the listed subsystems of a composite density operator.

    `dims` lists the subsystem dimensions in tensor order; `traced` holds the
    indices (into `dims`) to remove.  The trace of the result is preserved.
    """
    dims = list(dims)
    traced_set = set(traced)
    if prod(dims) != rho.dim:
        raise DimensionMismatchError(
            f"product of dims {dims} = {prod(dims)} does not match rho.dim {rho.dim}"
        )
    n = len(dims)
    if not traced_set or not traced_set < set(range(n)):
        raise InvalidParameterError(
            f"traced must be a nonempty proper subset of subsystem indices, got {sorted(traced_set)}"
        )
    tensor = rho.matrix.reshape(dims + dims)
    row_idx = list(range(n))
    col_idx = [n + i for i in range(n)]
    for i in traced_set:
        col_idx[i] = row_idx[i]
    keep = [i for i in range(n) if i not in traced_set]
    out_idx = [row_idx[i] for i in keep] + [n + i for i in keep]
    reduced = np.einsum(tensor, row_idx + col_idx, out_idx)
    d = prod(dims[i] for i in keep)
    return DensityOperator(dim=d, matrix=reduced.reshape(d, d))
