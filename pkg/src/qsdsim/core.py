"""Dense complex operator algebra on small Hilbert spaces.

Everything in this package lives on spaces of dimension <= 4 (a two-state
system, a two-dimensional internal "iso" space carrying the non-commuting
noise, or their tensor product), so all linear algebra is dense complex128
and exactness beats cleverness.  Operators are plain ``numpy`` arrays;
the wrapper types below only add the invariants that a bare array cannot
express (hermiticity of a density operator, the weight carried by an
unnormalized trajectory state).

Conventions fixed here and relied on everywhere else:

* tensor products are ordered system-first, iso-second,
* trajectory states are never renormalized; their squared norm is the
  statistical weight of the trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "HERMITIAN_ATOL",
    "TRACE_ATOL",
    "EIGENVALUE_FLOOR",
    "ComplexOperator",
    "DensityOperator",
    "TrajectoryState",
    "dagger",
    "kron",
    "partial_trace_iso",
    "pauli",
    "identity",
    "is_hermitian",
    "is_unitary",
]

# Tolerances for the queryable operator predicates.  Absolute, per entry.
HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-10
EIGENVALUE_FLOOR = -1e-10


def _as_square_matrix(op) -> np.ndarray:
    """Coerce to a square complex128 matrix, rejecting anything else."""
    mat = np.asarray(op, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    return mat


def dagger(op) -> np.ndarray:
    """Hermitian adjoint: result[i, j] = conj(op[j, i])."""
    return _as_square_matrix(op).conj().T.copy()


def kron(a, b) -> np.ndarray:
    """Tensor product of two square operators, system-first, iso-second.

    The joint index is ``i_sys * dim(b) + i_iso``; ``partial_trace_iso``
    assumes exactly this ordering.
    """
    return np.kron(_as_square_matrix(a), _as_square_matrix(b))


def partial_trace_iso(joint, sys_dim: int, iso_dim: int) -> np.ndarray:
    """Trace out the iso factor of an operator on the joint space.

    Inverse of ``kron`` in the sense that
    ``partial_trace_iso(kron(a, rho_iso)) == a * trace(rho_iso)``.
    """
    mat = _as_square_matrix(joint)
    if sys_dim <= 0 or iso_dim <= 0 or mat.shape[0] != sys_dim * iso_dim:
        raise ValueError(
            f"joint dimension {mat.shape[0]} does not factor as "
            f"{sys_dim} x {iso_dim}"
        )
    return np.einsum("aibi->ab", mat.reshape(sys_dim, iso_dim, sys_dim, iso_dim))


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def pauli(i: int) -> np.ndarray:
    """Standard Pauli matrix sigma_i, i in {1, 2, 3}."""
    if i not in (1, 2, 3):
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {i}")
    return _PAULI[i - 1].copy()


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def is_hermitian(op, atol: float = HERMITIAN_ATOL) -> bool:
    mat = _as_square_matrix(op)
    return bool(np.all(np.abs(mat - mat.conj().T) <= atol))


def is_unitary(op, atol: float = HERMITIAN_ATOL) -> bool:
    mat = _as_square_matrix(op)
    return bool(np.all(np.abs(mat @ mat.conj().T - np.eye(mat.shape[0])) <= atol))


@dataclass(frozen=True)
class ComplexOperator:
    """A dense complex square matrix with queryable structure predicates.

    Nothing is assumed about the matrix; hermiticity and unitarity are
    checked on demand with an explicit tolerance.
    """

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _as_square_matrix(self.matrix))
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "ComplexOperator":
        return ComplexOperator(dagger(self.matrix))

    def is_hermitian(self, atol: float = HERMITIAN_ATOL) -> bool:
        return is_hermitian(self.matrix, atol)

    def is_unitary(self, atol: float = HERMITIAN_ATOL) -> bool:
        return is_unitary(self.matrix, atol)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.matrix, dtype=dtype or np.complex128)


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian (validated) density operator, optionally trace-normalized.

    ``normalized=True`` additionally requires unit trace and eigenvalues
    above a small negative floor; raw ensemble means that have not been
    divided by their trace should use ``normalized=False``.
    """

    matrix: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        mat = _as_square_matrix(self.matrix)
        if not is_hermitian(mat, HERMITIAN_ATOL):
            raise ValueError("density operator is not Hermitian within 1e-12")
        if self.normalized:
            tr = np.trace(mat).real
            if abs(tr - 1.0) > TRACE_ATOL:
                raise ValueError(f"normalized density operator has trace {tr!r}")
            eigmin = float(np.linalg.eigvalsh(mat).min())
            if eigmin < EIGENVALUE_FLOOR:
                raise ValueError(
                    f"normalized density operator has eigenvalue {eigmin:.3e}"
                )
        object.__setattr__(self, "matrix", mat)
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.matrix, dtype=dtype or np.complex128)


@dataclass(frozen=True)
class TrajectoryState:
    """Unnormalized pure state of one linear-theory trajectory.

    The squared norm is the trajectory's ensemble weight and must never be
    divided out mid-run; renormalizing would silently turn the linear
    evolution into the nonlinear one.
    """

    vec: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.vec, dtype=np.complex128)
        if vec.ndim != 1 or vec.size == 0:
            raise ValueError(f"state vector must be 1-d and non-empty, got shape {vec.shape}")
        object.__setattr__(self, "vec", vec)
        self.vec.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.vec.size

    @property
    def weight(self) -> float:
        """Squared norm; the statistical weight of this trajectory."""
        return float(np.vdot(self.vec, self.vec).real)

    def projector(self) -> np.ndarray:
        """|psi><psi| without normalization."""
        return np.outer(self.vec, self.vec.conj())
