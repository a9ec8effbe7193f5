"""Branch structure of states before and after premeasurement.

An object state splits over the observable's eigenprojectors into weighted
orthogonal branches; the joint final state splits the same way over the
lifted pointer projectors, with matching weights whenever the model
measures exactly (probability reproducibility). Each branch also evolves
independently: applying the unitary to a single initial branch lands
exactly on the corresponding pointer branch of the final state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import DEFAULT_EPS, as_complex, frozen, tensor, validate_tolerance
from .measurement import CheckReport, MeasurementModel, premeasure
from .spectral import SpectralForm


@dataclass(frozen=True)
class BranchDecomposition:
    """Per-outcome weights and normalized branch states of a decomposed ket.

    Outcomes whose amplitude falls below the drop threshold appear in
    `dropped` and carry no branch state.
    """

    outcomes: np.ndarray
    amplitudes: np.ndarray
    branch_states: tuple[np.ndarray, ...] = field(repr=False)
    dropped: np.ndarray = field(default_factory=lambda: np.array([], dtype=np.int64))

    def __post_init__(self):
        object.__setattr__(self, "outcomes", frozen(np.asarray(self.outcomes, dtype=np.int64)))
        object.__setattr__(self, "amplitudes", frozen(np.asarray(self.amplitudes, dtype=np.float64)))
        object.__setattr__(self, "branch_states", tuple(frozen(as_complex(b)) for b in self.branch_states))
        object.__setattr__(self, "dropped", frozen(np.asarray(self.dropped, dtype=np.int64)))

    def reconstruct(self) -> np.ndarray:
        """Amplitude-weighted sum of the branch states."""
        out = np.zeros_like(self.branch_states[0]) if self.branch_states else np.array([])
        for a, b in zip(self.amplitudes, self.branch_states):
            out = out + a * b
        return out


def _decompose(state: np.ndarray, projectors, eps: float) -> BranchDecomposition:
    outcomes, amplitudes, branches, dropped = [], [], [], []
    for k, p in enumerate(projectors):
        piece = p @ state
        a = float(np.linalg.norm(piece))
        if a < eps:
            dropped.append(k)
            continue
        outcomes.append(k)
        amplitudes.append(a)
        branches.append(piece / a)
    return BranchDecomposition(
        np.array(outcomes, dtype=np.int64),
        np.array(amplitudes),
        tuple(branches),
        np.array(dropped, dtype=np.int64),
    )


def decompose_initial(phi, observable: SpectralForm, eps: float = DEFAULT_EPS) -> BranchDecomposition:
    """Split an object state over the observable's eigenprojectors.

    Amplitude k is ||E_k phi||, equal to <phi|E_k|phi>**(1/2) by projector
    idempotency; branch states keep the phase inherited from E_k phi.
    """
    validate_tolerance(eps)
    phi = as_complex(phi)
    if phi.shape != (observable.dim,):
        raise ValueError(f"state has shape {phi.shape}, expected ({observable.dim},)")
    return _decompose(phi, observable.projectors, eps)


def check_prc(model: MeasurementModel, phi_a, eps: float = DEFAULT_EPS) -> CheckReport:
    """Probability reproducibility: pointer statistics reproduce object statistics.

    For each outcome k, compares <Phi_f|F_k|Phi_f> against <phi|E_k|phi>,
    where Phi_f is the premeasured joint state. Assumes the model passes
    the dynamical check.
    """
    validate_tolerance(eps)
    phi_a = as_complex(phi_a)
    final = premeasure(model, phi_a)
    residuals = np.zeros(model.outcomes)
    witness = None
    for k in range(model.outcomes):
        pointer_prob = float(np.vdot(final, model.lifted_pointer(k) @ final).real)
        object_prob = float(np.vdot(phi_a, model.observable.projectors[k] @ phi_a).real)
        residuals[k] = abs(pointer_prob - object_prob)
        if residuals[k] > eps and witness is None:
            witness = (
                f"outcome {k}: pointer probability {pointer_prob:.12g} "
                f"vs object probability {object_prob:.12g}"
            )
    max_residual = float(np.max(residuals)) if residuals.size else 0.0
    return CheckReport(max_residual <= eps, residuals, max_residual, witness)


def decompose_final(model: MeasurementModel, phi_a, eps: float = DEFAULT_EPS) -> BranchDecomposition:
    """Split the premeasured joint state over the lifted pointer projectors.

    For exact models the amplitudes equal <phi|E_k|phi>**(1/2), the same
    weights the initial decomposition assigns.
    """
    validate_tolerance(eps)
    phi_a = as_complex(phi_a)
    final = premeasure(model, phi_a)
    lifted = [model.lifted_pointer(k) for k in range(model.outcomes)]
    return _decompose(final, lifted, eps)


def evolve_branch(model: MeasurementModel, phi_a, k: int) -> np.ndarray:
    """Evolve one initial branch on its own: U((E_k phi) (x) phi_B).

    Returns an unnormalized vector; for exact models it equals the pointer
    branch F_k Phi_f of the full final state, and it is the zero vector
    when E_k annihilates phi.
    """
    phi_a = as_complex(phi_a)
    if phi_a.shape != (model.dim_a,):
        raise ValueError(f"state has shape {phi_a.shape}, expected ({model.dim_a},)")
    if not 0 <= k < model.outcomes:
        raise ValueError(f"outcome index {k} out of range")
    branch = model.observable.projectors[k] @ phi_a
    return model.unitary @ tensor(branch, model.instrument_state)
