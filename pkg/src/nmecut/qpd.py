"""Quasiprobability decompositions of the single-qubit identity wire.

Two decompositions are provided: the entanglement-free cut with overhead 3,
and the teleportation-based cut over the pair |phi_k> with coefficients

    a = (k^2 + 1) / (k + 1)^2    on each conjugated teleportation term,
    b = (k - 1)^2 / (k + 1)^2    on the negated measure-and-flip term,

whose overhead kappa = 2a + b = 4(k^2+1)/(k+1)^2 - 1 = 2/f - 1 is optimal.
Reconstruction of the identity is checked through Choi matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isfinite

import numpy as np

from .channels import (
    QuantumChannel,
    conjugate_channel,
    measure_prepare_channel,
    measure_prepare_flip_channel,
    teleportation_channel,
)
from .errors import InvalidParameterError, OutOfRangeError
from .linalg import H, S, Matrix
from .states import NmeParameter, _as_param, nme_state

COEFFICIENT_SUM_TOL = 1e-12

U1 = H
U2 = S @ H


@dataclass(frozen=True)
class QpdTerm:
    """One signed term of a decomposition.

    `consumes_resource` marks terms whose execution uses up one copy of the
    entangled pair (the teleportation branches).
    """

    coefficient: float
    channel: QuantumChannel
    consumes_resource: bool = False

    def __post_init__(self) -> None:
        c = float(self.coefficient)
        if not isfinite(c) or c == 0.0:
            raise InvalidParameterError(f"coefficient must be finite and nonzero, got {c}")
        object.__setattr__(self, "coefficient", c)


@dataclass(frozen=True)
class QuasiProbDecomposition:
    """Ordered signed mixture sum_i c_i F_i with sum c_i = 1."""

    terms: tuple[QpdTerm, ...]
    kappa: float = field(init=False)

    def __post_init__(self) -> None:
        terms = tuple(self.terms)
        if not terms:
            raise InvalidParameterError("a decomposition needs at least one term")
        total = sum(t.coefficient for t in terms)
        if abs(total - 1.0) > COEFFICIENT_SUM_TOL:
            raise InvalidParameterError(
                f"|sum of coefficients - 1| = {abs(total - 1.0):.3e} > {COEFFICIENT_SUM_TOL}"
            )
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "kappa", float(sum(abs(t.coefficient) for t in terms)))

    @property
    def probabilities(self) -> np.ndarray:
        """Sampling weights |c_i| / kappa."""
        return np.array([abs(t.coefficient) for t in self.terms]) / self.kappa

    @property
    def signs(self) -> np.ndarray:
        return np.array([1.0 if t.coefficient > 0 else -1.0 for t in self.terms])

    def describe(self) -> str:
        """Line-oriented plain-text listing: index, coefficient, channel, flag."""
        lines = []
        for i, t in enumerate(self.terms):
            flag = "resource" if t.consumes_resource else "-"
            lines.append(f"{i}  {t.coefficient:+.12g}  {t.channel.name}  {flag}")
        lines.append(f"kappa {self.kappa:.12g}")
        return "\n".join(lines)


def harada_wire_cut() -> QuasiProbDecomposition:
    """Entanglement-free optimal cut of the identity wire (kappa = 3).

    Measure-and-prepare in the H and SH bases, minus the measure-and-flip
    channel.
    """
    terms = (
        QpdTerm(1.0, measure_prepare_channel(U1, name="measure-prepare[H]")),
        QpdTerm(1.0, measure_prepare_channel(U2, name="measure-prepare[SH]")),
        QpdTerm(-1.0, measure_prepare_flip_channel()),
    )
    return QuasiProbDecomposition(terms)


def nme_wire_cut(k: "float | NmeParameter") -> QuasiProbDecomposition:
    """Teleportation-based cut of the identity wire using the pair |phi_k>.

    The two positive terms conjugate the teleportation channel by H and SH
    and each consume one entangled pair per shot; at k = 1 the negative term
    has coefficient zero and is omitted.
    """
    p = _as_param(k)
    kk = p.k
    a = (kk * kk + 1.0) / ((kk + 1.0) * (kk + 1.0))
    b = (kk - 1.0) * (kk - 1.0) / ((kk + 1.0) * (kk + 1.0))
    tel = teleportation_channel(nme_state(p).density())
    terms = [
        QpdTerm(a, conjugate_channel(U1, tel, name="teleport[H]"), consumes_resource=True),
        QpdTerm(a, conjugate_channel(U2, tel, name="teleport[SH]"), consumes_resource=True),
    ]
    if b != 0.0:
        terms.append(QpdTerm(-b, measure_prepare_flip_channel()))
    return QuasiProbDecomposition(tuple(terms))


def optimal_overhead(f: float) -> float:
    """Minimal sampling overhead 2/f - 1 for a resource of overlap f."""
    f = float(f)
    if not 0.5 - 1e-12 <= f <= 1.0 + 1e-12:
        raise OutOfRangeError(f"f must lie in [0.5, 1], got {f}")
    return 2.0 / min(max(f, 0.5), 1.0) - 1.0


def optimal_overhead_pure(k: "float | NmeParameter") -> float:
    """Minimal sampling overhead 4(k^2+1)/(k+1)^2 - 1 for the pure pair |phi_k>."""
    p = _as_param(k)
    kk = p.k
    return 4.0 * (kk * kk + 1.0) / ((kk + 1.0) * (kk + 1.0)) - 1.0


def resource_consumption_rate(k: "float | NmeParameter") -> float:
    """Expected entangled pairs consumed per sampled shot: 2(k^2+1)/(k+1)^2.

    Equals the signed-weight mass (p1 + p2) * kappa on the teleportation
    terms and the inverse overlap of |phi_k> with the maximally entangled
    state.
    """
    p = _as_param(k)
    if p.k <= 0.0:
        raise InvalidParameterError(f"k must be > 0, got {p.k}")
    kk = p.k
    return 2.0 * (kk * kk + 1.0) / ((kk + 1.0) * (kk + 1.0))


def reconstruct_channel(qpd: QuasiProbDecomposition) -> Matrix:
    """Signed Choi sum sum_i c_i Choi(F_i).

    Not a physical channel in general (coefficients may be negative); equals
    the identity Choi matrix exactly when the decomposition is a valid wire
    cut.
    """
    out = np.zeros_like(qpd.terms[0].channel.choi)
    for t in qpd.terms:
        out = out + t.coefficient * t.channel.choi
    return out
