"""Mixed initial states: purification and the trace-rule probability.

A mixed state is lifted to a pure state on a doubled system whose partial
trace over the ancilla reproduces it. Measurement probabilities can then
be computed two ways, through the purified expectation value or directly
by the trace rule; the two routes must agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_EPS,
    as_complex,
    dag,
    partial_trace,
    tensor,
    frozen,
    validate_density,
    validate_projector,
    validate_tolerance,
)

# eigenvalues at or below this are treated as zero and excluded
EIGENVALUE_CUTOFF = 1e-12


@dataclass(frozen=True)
class Purification:
    """Pure state on system (x) ancilla whose reduction is `source`."""

    state: np.ndarray = field(repr=False)
    dims: tuple[int, int]
    source: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "state", frozen(as_complex(self.state)))
        object.__setattr__(self, "source", frozen(as_complex(self.source)))
        object.__setattr__(self, "dims", (int(self.dims[0]), int(self.dims[1])))

    def reduced(self) -> np.ndarray:
        """Partial trace of the purified projector over the ancilla."""
        return partial_trace(np.outer(self.state, self.state.conj()), self.dims, keep=0)


def purify(rho, eps: float = DEFAULT_EPS) -> Purification:
    """Purify a density operator over a minimal ancilla.

    Eigendecomposes rho, keeps the positive eigenpairs (r_i, |i>), and
    returns sum_i sqrt(r_i) |i> (x) |i> with the ancilla running over its
    canonical basis in descending-eigenvalue order. The ancilla dimension
    equals the number of positive eigenvalues.

    Raises:
        ValueError: rho is not a valid density operator.
    """
    validate_tolerance(eps)
    rho = as_complex(rho)
    validate_density(rho, eps)
    vals, vecs = np.linalg.eigh((rho + dag(rho)) / 2.0)
    # stable sort keeps eigh's tie order, so degenerate spectra pair
    # eigenvector i with ancilla slot i
    by_descending = np.argsort(-vals, kind="stable")
    order = [int(i) for i in by_descending if vals[i] > EIGENVALUE_CUTOFF]
    dim_a1 = rho.shape[0]
    dim_a2 = len(order)
    state = np.zeros(dim_a1 * dim_a2, dtype=np.complex128)
    for slot, i in enumerate(order):
        ancilla = np.zeros(dim_a2, dtype=np.complex128)
        ancilla[slot] = 1.0
        state += np.sqrt(vals[i]) * tensor(vecs[:, i], ancilla)
    return Purification(state=state, dims=(dim_a1, dim_a2), source=rho)


def purified_probability(rho, projector, eps: float = DEFAULT_EPS) -> float:
    """Outcome probability via the purified state: <phi|(E (x) I)|phi>."""
    validate_tolerance(eps)
    projector = as_complex(projector)
    validate_projector(projector, eps)
    pur = purify(rho, eps)
    lifted = tensor(projector, np.eye(pur.dims[1]))
    return float(np.vdot(pur.state, lifted @ pur.state).real)


def mixed_probability(rho, projector, eps: float = DEFAULT_EPS) -> float:
    """Outcome probability of a projector in a mixed state, tr(rho E).

    Computes both the purified expectation value and the trace rule and
    returns the trace-rule value; the routes agreeing within eps is part
    of the contract.

    Raises:
        ValueError: invalid projector or density operator, or routes
            disagreeing beyond eps.
    """
    validate_tolerance(eps)
    rho = as_complex(rho)
    projector = as_complex(projector)
    validate_projector(projector, eps)
    if projector.shape != rho.shape:
        raise ValueError(
            f"projector shape {projector.shape} does not match state shape {rho.shape}"
        )
    via_purification = purified_probability(rho, projector, eps)
    via_trace = float(np.trace(rho @ projector).real)
    if abs(via_purification - via_trace) > eps:
        raise ValueError(
            f"purified route {via_purification!r} disagrees with trace route {via_trace!r}"
        )
    return via_trace
