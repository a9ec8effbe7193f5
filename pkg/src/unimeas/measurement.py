"""Premeasurement models: canonical construction, evolution, condition checks.

A model couples an object observable to an instrument pointer through a
joint unitary. The calibration check asks that eigenstates of an object
projector end up as eigenstates of the coindexed pointer projector; the
dynamical check asks that the pointer projector commutes past the unitary
into the object projector on the initial subspace. Both quantify over
basis vectors only, which linearity extends to arbitrary object states.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_EPS,
    as_complex,
    basis_ket,
    complete_to_unitary,
    dag,
    frozen,
    tensor,
    validate_ket,
    validate_tolerance,
)
from .spectral import SpectralForm, range_basis


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a condition check; passed iff max_residual <= tolerance."""

    passed: bool
    per_outcome_residuals: np.ndarray
    max_residual: float
    witness: str | None = None

    def __post_init__(self):
        object.__setattr__(
            self,
            "per_outcome_residuals",
            frozen(np.asarray(self.per_outcome_residuals, dtype=np.float64)),
        )


@dataclass(frozen=True)
class MeasurementModel:
    """Object observable, pointer observable, instrument state, and unitary."""

    dim_a: int
    dim_b: int
    observable: SpectralForm
    pointer: SpectralForm
    instrument_state: np.ndarray = field(repr=False)
    unitary: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "instrument_state", frozen(as_complex(self.instrument_state)))
        object.__setattr__(self, "unitary", frozen(as_complex(self.unitary)))

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    @property
    def outcomes(self) -> int:
        return self.observable.outcomes

    def lifted_pointer(self, k: int) -> np.ndarray:
        """Pointer projector k acting on the joint space, I_A (x) F_k."""
        return tensor(np.eye(self.dim_a), self.pointer.projectors[k])

    def validate(self, eps: float = DEFAULT_EPS) -> None:
        """Check coindexing, unitarity, and both spectral forms."""
        validate_tolerance(eps)
        if self.observable.dim != self.dim_a:
            raise ValueError(
                f"observable dimension {self.observable.dim} != dim_a {self.dim_a}"
            )
        if self.pointer.dim != self.dim_b:
            raise ValueError(
                f"pointer dimension {self.pointer.dim} != dim_b {self.dim_b}"
            )
        if self.observable.outcomes != self.pointer.outcomes:
            raise ValueError(
                f"observable has {self.observable.outcomes} outcomes, "
                f"pointer has {self.pointer.outcomes}"
            )
        try:
            self.observable.validate(eps)
        except ValueError as exc:
            raise ValueError(f"observable: {exc}") from exc
        try:
            self.pointer.validate(eps)
        except ValueError as exc:
            raise ValueError(f"pointer: {exc}") from exc
        if self.instrument_state.size != self.dim_b:
            raise ValueError(
                f"instrument_state: dim {self.instrument_state.size}, expected {self.dim_b}"
            )
        try:
            validate_ket(self.instrument_state, eps)
        except ValueError as exc:
            raise ValueError(f"instrument_state: {exc}") from exc
        u = self.unitary
        if u.shape != (self.dim, self.dim):
            raise ValueError(f"unitary: shape {u.shape}, expected {(self.dim, self.dim)}")
        defect = float(np.max(np.abs(dag(u) @ u - np.eye(self.dim))))
        if defect > eps:
            raise ValueError(f"unitary: unitarity defect {defect:.3e} exceeds {eps}")


def build_canonical_model(observable: SpectralForm) -> MeasurementModel:
    """Minimal model measuring the given observable exactly.

    The instrument gets one dimension per outcome, pointer projectors
    |k><k| with eigenvalues k, and initial state |0>. On the initial
    subspace the unitary keeps each object branch intact while moving the
    pointer to the branch label:

        |psi>|0>  ->  sum_k (E_k |psi>) (x) |k>

    and is completed deterministically elsewhere.
    """
    dim_a = observable.dim
    n_out = observable.outcomes
    dim_b = n_out
    dim = dim_a * dim_b

    pointer = SpectralForm(
        np.arange(n_out, dtype=np.float64),
        tuple(np.outer(basis_ket(dim_b, k), basis_ket(dim_b, k).conj()) for k in range(n_out)),
    )
    instrument_state = basis_ket(dim_b, 0)

    images = []
    for i in range(dim_a):
        v = np.zeros(dim, dtype=np.complex128)
        for k in range(n_out):
            v += tensor(observable.projectors[k] @ basis_ket(dim_a, i), basis_ket(dim_b, k))
        images.append(v)
    completed = complete_to_unitary(images)

    # input e_i (x) |0> lives at joint index i*dim_b; route the prescribed
    # images there and fill the remaining columns with the completion
    unitary = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(dim_a):
        unitary[:, i * dim_b] = completed[:, i]
    rest = iter(range(dim_a, dim))
    for j in range(dim):
        if j % dim_b != 0:
            unitary[:, j] = completed[:, next(rest)]

    return MeasurementModel(
        dim_a=dim_a,
        dim_b=dim_b,
        observable=observable,
        pointer=pointer,
        instrument_state=instrument_state,
        unitary=unitary,
    )


def premeasure(model: MeasurementModel, phi_a) -> np.ndarray:
    """Joint final state U (phi_a (x) instrument_state)."""
    phi_a = as_complex(phi_a)
    if phi_a.shape != (model.dim_a,):
        raise ValueError(
            f"object state has shape {phi_a.shape}, expected ({model.dim_a},)"
        )
    return model.unitary @ tensor(phi_a, model.instrument_state)


def check_calibration(model: MeasurementModel, eps: float = DEFAULT_EPS) -> CheckReport:
    """Eigenstate condition: object eigenstates yield pointer eigenstates.

    For each outcome k and each orthonormal basis vector e of the range of
    the object projector E_k, verifies F_k U(e (x) phi_B) = U(e (x) phi_B).
    """
    validate_tolerance(eps)
    residuals = np.zeros(model.outcomes)
    witness = None
    for k in range(model.outcomes):
        f_lift = model.lifted_pointer(k)
        worst = 0.0
        for j, e in enumerate(range_basis(model.observable.projectors[k], eps)):
            final = model.unitary @ tensor(e, model.instrument_state)
            r = float(np.linalg.norm(f_lift @ final - final))
            if r > worst:
                worst = r
            if r > eps and witness is None:
                witness = f"outcome {k}, range basis vector {j}: residual {r:.3e}"
        residuals[k] = worst
    max_residual = float(np.max(residuals)) if residuals.size else 0.0
    return CheckReport(max_residual <= eps, residuals, max_residual, witness)


def check_dynamical(model: MeasurementModel, eps: float = DEFAULT_EPS) -> CheckReport:
    """Operator condition: F_k U equals U E_k on the initial subspace.

    For each outcome k and each canonical basis vector e of the object
    space, verifies F_k U(e (x) phi_B) = U((E_k e) (x) phi_B).
    """
    validate_tolerance(eps)
    residuals = np.zeros(model.outcomes)
    witness = None
    for k in range(model.outcomes):
        f_lift = model.lifted_pointer(k)
        e_k = model.observable.projectors[k]
        worst = 0.0
        for i in range(model.dim_a):
            e = basis_ket(model.dim_a, i)
            lhs = f_lift @ (model.unitary @ tensor(e, model.instrument_state))
            rhs = model.unitary @ tensor(e_k @ e, model.instrument_state)
            r = float(np.linalg.norm(lhs - rhs))
            if r > worst:
                worst = r
            if r > eps and witness is None:
                witness = f"outcome {k}, basis vector {i}: residual {r:.3e}"
        residuals[k] = worst
    max_residual = float(np.max(residuals)) if residuals.size else 0.0
    return CheckReport(max_residual <= eps, residuals, max_residual, witness)
