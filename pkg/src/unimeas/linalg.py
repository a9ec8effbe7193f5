"""Dense complex linear algebra over finite-dimensional Hilbert spaces.

All states are 1-D complex128 arrays, all operators square 2-D complex128
arrays. Composite indices are first-factor major throughout the package:
the pair (i_a, i_b) maps to i_a * dim_b + i_b.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

DEFAULT_EPS = 1e-9

# largest composite dimension tensor() will produce
_MAX_TENSOR_DIM = 1 << 20

# residual norm below which a Gram-Schmidt candidate counts as dependent
_INDEPENDENCE_TOL = 1e-8


def as_complex(a) -> np.ndarray:
    return np.asarray(a, dtype=np.complex128)


def dag(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_complex(a).conj().T


def ket(amplitudes) -> np.ndarray:
    """Normalized state vector built from a sequence of amplitudes."""
    v = as_complex(amplitudes).reshape(-1)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


def basis_ket(dim: int, index: int) -> np.ndarray:
    """Canonical basis vector |index> in dimension dim."""
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dim {dim}")
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def uniform_ket(dim: int) -> np.ndarray:
    """Equal-amplitude superposition over the canonical basis."""
    return np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128)


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two vectors or two operators.

    Both operands must be of the same kind (1-D with 1-D, 2-D with 2-D).
    The composite index convention is (i_a, i_b) -> i_a * dim_b + i_b.
    """
    a = as_complex(a)
    b = as_complex(b)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise ValueError(
            f"tensor expects two vectors or two operators, got ndim {a.ndim} and {b.ndim}"
        )
    if a.shape[0] * b.shape[0] > _MAX_TENSOR_DIM:
        raise ValueError(
            f"tensor product dimension {a.shape[0] * b.shape[0]} exceeds {_MAX_TENSOR_DIM}"
        )
    return np.kron(a, b)


def partial_trace(rho, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Reduced operator on one factor of a bipartite system.

    Args:
        rho: operator on the composite space of dimension dims[0] * dims[1].
        dims: the two factor dimensions, first-factor-major indexing.
        keep: 0 to keep the first factor, 1 to keep the second.

    Returns:
        The reduced operator on the kept factor; the trace is preserved.
    """
    da, db = int(dims[0]), int(dims[1])
    rho = as_complex(rho)
    if rho.ndim != 2 or rho.shape != (da * db, da * db):
        raise ValueError(
            f"operator shape {rho.shape} does not match factor dims {da}x{db}"
        )
    if keep not in (0, 1):
        raise ValueError(f"keep must be 0 or 1, got {keep}")
    r = rho.reshape(da, db, da, db)
    if keep == 0:
        return np.einsum("ajbj->ab", r)
    return np.einsum("iaib->ab", r)


def complete_to_unitary(columns: Sequence[np.ndarray], eps: float = DEFAULT_EPS) -> np.ndarray:
    """Complete mutually orthonormal columns to a full unitary.

    The inputs become the first columns, reproduced exactly. The remaining
    columns come from Gram-Schmidt over the canonical basis in index order;
    each accepted candidate is orthogonalized twice against everything kept
    so far, which keeps the loss of orthogonality at machine level.

    Raises:
        ValueError: input columns are not orthonormal within eps.
    """
    validate_tolerance(eps)
    cols = [as_complex(c).reshape(-1) for c in columns]
    if not cols:
        raise ValueError("at least one input column is required")
    dim = cols[0].size
    if any(c.size != dim for c in cols):
        raise ValueError("input columns have mismatched dimensions")
    if len(cols) > dim:
        raise ValueError(f"{len(cols)} columns cannot be orthonormal in dimension {dim}")
    q = np.column_stack(cols)
    gram = dag(q) @ q
    defect = np.max(np.abs(gram - np.eye(len(cols))))
    if defect > eps:
        raise ValueError(f"input columns are not orthonormal (defect {defect:.3e})")

    kept = list(cols)
    for j in range(dim):
        if len(kept) == dim:
            break
        q = np.column_stack(kept)
        v = basis_ket(dim, j)
        for _ in range(2):
            v = v - q @ (dag(q) @ v)
        n = np.linalg.norm(v)
        if n > _INDEPENDENCE_TOL:
            kept.append(v / n)
    if len(kept) != dim:
        raise ValueError("Gram-Schmidt completion failed to span the space")
    return np.column_stack(kept)


def hermiticity_defect(a) -> float:
    a = as_complex(a)
    return float(np.max(np.abs(a - dag(a))))


def is_hermitian(a, eps: float = DEFAULT_EPS) -> bool:
    return hermiticity_defect(a) <= eps


def validate_tolerance(eps: float) -> None:
    if not 0.0 < eps < 1.0:
        raise ValueError(f"tolerance must lie in (0, 1), got {eps}")


def validate_ket(v, eps: float = DEFAULT_EPS) -> None:
    """Raise unless v is a finite norm-one vector."""
    v = as_complex(v)
    if v.ndim != 1:
        raise ValueError(f"state must be a vector, got ndim {v.ndim}")
    if not np.all(np.isfinite(v.view(np.float64))):
        raise ValueError("state contains non-finite amplitudes")
    n = np.linalg.norm(v)
    if abs(n - 1.0) > eps:
        raise ValueError(f"state norm {n} is not 1 within {eps}")


def validate_projector(p, eps: float = DEFAULT_EPS) -> None:
    """Raise unless p is Hermitian and idempotent within eps."""
    p = as_complex(p)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValueError(f"projector must be square, got shape {p.shape}")
    if hermiticity_defect(p) > eps:
        raise ValueError("projector is not Hermitian")
    if np.max(np.abs(p @ p - p)) > eps:
        raise ValueError("projector is not idempotent")


def validate_density(rho, eps: float = DEFAULT_EPS) -> None:
    """Raise unless rho is Hermitian, positive semidefinite, and trace one."""
    rho = as_complex(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density operator must be square, got shape {rho.shape}")
    if hermiticity_defect(rho) > eps:
        raise ValueError("density operator is not Hermitian")
    lo = float(np.min(np.linalg.eigvalsh((rho + dag(rho)) / 2.0)))
    if lo < -eps:
        raise ValueError(f"density operator has negative eigenvalue {lo:.3e}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > eps:
        raise ValueError(f"density operator trace {tr} is not 1 within {eps}")


def frozen(a: np.ndarray) -> np.ndarray:
    """Read-only view-safe copy, for immutable record fields."""
    out = np.array(a)
    out.setflags(write=False)
    return out
