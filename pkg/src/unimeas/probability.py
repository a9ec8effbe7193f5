"""Three equivalent expressions of projective outcome probability.

The expectation value <psi|P|psi>, the summed squared overlaps with an
orthonormal basis of the projector's range, and the trace tr(P|psi><psi|)
all compute the same number. Raw values are returned unclamped so that
equivalence tests see the actual arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (
    DEFAULT_EPS,
    as_complex,
    dag,
    validate_projector,
    validate_tolerance,
)
from .spectral import range_basis


@dataclass(frozen=True)
class ProbabilityTriple:
    """The three probability expressions evaluated on one (state, projector) pair."""

    expectation_form: float
    born_form: float
    trace_form: float

    @property
    def max_pairwise_diff(self) -> float:
        vals = (self.expectation_form, self.born_form, self.trace_form)
        return max(abs(a - b) for a in vals for b in vals)


def expectation_form(psi, p, eps: float = DEFAULT_EPS) -> float:
    """Expectation value <psi|P|psi> of a projector."""
    validate_tolerance(eps)
    psi = as_complex(psi)
    p = as_complex(p)
    validate_projector(p, eps)
    if p.shape[0] != psi.size:
        raise ValueError(f"projector dim {p.shape[0]} does not match state dim {psi.size}")
    return float(np.vdot(psi, p @ psi).real)


def born_form(psi, basis: Sequence[np.ndarray], eps: float = DEFAULT_EPS) -> float:
    """Summed squared overlaps with an orthonormal range basis.

    Raises:
        ValueError: basis vectors are not orthonormal within eps.
    """
    validate_tolerance(eps)
    psi = as_complex(psi)
    vecs = [as_complex(v).reshape(-1) for v in basis]
    if not vecs:
        raise ValueError("range basis must contain at least one vector")
    q = np.column_stack(vecs)
    defect = float(np.max(np.abs(dag(q) @ q - np.eye(len(vecs)))))
    if defect > eps:
        raise ValueError(f"range basis is not orthonormal (defect {defect:.3e})")
    return float(sum(abs(np.vdot(psi, v)) ** 2 for v in vecs))


def trace_form(psi, p, eps: float = DEFAULT_EPS) -> float:
    """Trace rule tr(P|psi><psi|), evaluated by explicit trace."""
    validate_tolerance(eps)
    psi = as_complex(psi)
    p = as_complex(p)
    validate_projector(p, eps)
    if p.shape[0] != psi.size:
        raise ValueError(f"projector dim {p.shape[0]} does not match state dim {psi.size}")
    return float(np.trace(p @ np.outer(psi, psi.conj())).real)


def forms_triple(psi, p, eps: float = DEFAULT_EPS) -> ProbabilityTriple:
    """Evaluate all three forms, deriving the range basis from the projector."""
    basis = range_basis(p, eps)
    if basis:
        born = born_form(psi, basis, eps)
    else:
        born = 0.0  # zero projector has an empty range
    return ProbabilityTriple(
        expectation_form=expectation_form(psi, p, eps),
        born_form=born,
        trace_form=trace_form(psi, p, eps),
    )
