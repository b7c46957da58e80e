"""Samplers and moment algebra for commuting and Pauli fluctuations.

A commuting fluctuation increment over a step dt is a single complex
Gaussian with E[dxi conj(dxi)] = dt.  A Pauli increment is built from three
independent such components attached to the Pauli matrices,

    dxi = (1/sqrt(3)) * sum_i dxi_i * sigma_i,

which reproduces the same first and second moments at the operator level,
E[dxi dxi^dag] = dt * I, but changes the fourth-order *exchange* mean: for
two increments X = dxi(t), Y = dxi(t') at distinct times,

    E[Y X Y^dag X^dag] = eta * dt^2,

with eta = 1 for commuting noise and eta = -1/3 for Pauli noise.  The
exchange constant is what separates the two noise families everywhere
downstream, so this module evaluates it both algebraically (exact matrix
sum over the 9 Pauli index pairs) and by Monte Carlo.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import identity, pauli
from .streams import RandomStream

__all__ = [
    "FluctuationKind",
    "ScalarIncrement",
    "IsoIncrement",
    "EtaMethod",
    "EtaResult",
    "sample_scalar",
    "sample_pauli",
    "iso_matrix",
    "pauli_exchange_sum",
    "exchange_mean_algebraic",
    "exchange_mean_mc",
    "fourth_moment_mc",
    "unbalanced_moment_mc",
]

_SQRT3 = np.sqrt(3.0)
_SIGMA = np.stack([pauli(1), pauli(2), pauli(3)])


class FluctuationKind(enum.Enum):
    """Commutation family of the elementary fluctuations."""

    COMMUTING = "commuting"
    PAULI = "pauli"


class EtaMethod(enum.Enum):
    ALGEBRAIC = "algebraic"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class ScalarIncrement:
    """One commuting fluctuation sample over a step (units time^1/2)."""

    value: complex


@dataclass(frozen=True)
class IsoIncrement:
    """One Pauli fluctuation sample: three components and their iso matrix."""

    components: np.ndarray  # shape (3,), complex

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=np.complex128)
        if comps.shape != (3,):
            raise ValueError(f"expected 3 components, got shape {comps.shape}")
        object.__setattr__(self, "components", comps)
        self.components.setflags(write=False)

    @property
    def matrix(self) -> np.ndarray:
        """(1/sqrt(3)) sum_i components[i] * sigma_i, by construction."""
        return iso_matrix(self.components)


def iso_matrix(components) -> np.ndarray:
    """Map 3 complex components to the 2x2 iso-space matrix.

    Batched: input shape (..., 3) gives output shape (..., 2, 2).
    """
    comps = np.asarray(components, dtype=np.complex128)
    return np.tensordot(comps, _SIGMA, axes=([-1], [0])) / _SQRT3


@dataclass(frozen=True)
class EtaResult:
    """Exchange-constant estimate with its uncertainty."""

    eta: float
    standard_error: float
    method: EtaMethod

    def __post_init__(self):
        if self.standard_error < 0:
            raise ValueError("standard_error must be non-negative")


def _check_dt(dt: float):
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")


def sample_scalar(stream: RandomStream, dt: float) -> ScalarIncrement:
    """One commuting increment: complex Gaussian with E[z conj(z)] = dt."""
    _check_dt(dt)
    return ScalarIncrement(stream.complex_gaussian(dt))


def sample_pauli(stream: RandomStream, dt: float) -> IsoIncrement:
    """One Pauli increment: three independent components, variance dt each."""
    _check_dt(dt)
    return IsoIncrement(stream.complex_gaussian(dt, size=3))


def pauli_exchange_sum() -> np.ndarray:
    """sum_{i,i'} sigma_i' sigma_i sigma_i' sigma_i over all 9 index pairs.

    Equals -3 * I: the 3 diagonal pairs contribute +I each, the 6
    off-diagonal pairs -I each.
    """
    total = np.zeros((2, 2), dtype=np.complex128)
    for ip in range(3):
        for i in range(3):
            total += _SIGMA[ip] @ _SIGMA[i] @ _SIGMA[ip] @ _SIGMA[i]
    return total


def exchange_mean_algebraic(kind: FluctuationKind) -> EtaResult:
    """Exact exchange constant from the operator algebra.

    For Pauli noise the second-order exchange mean reduces to
    (1/9) * sum_{i,i'} sigma_i' sigma_i sigma_i' sigma_i, whose scalar
    part is eta; the traceless residue must vanish identically.
    """
    if kind is FluctuationKind.COMMUTING:
        return EtaResult(1.0, 0.0, EtaMethod.ALGEBRAIC)
    mean = pauli_exchange_sum() / 9.0
    eta = np.trace(mean).real / 2.0
    residue = np.abs(mean - eta * identity(2)).max()
    if residue > 1e-12:
        raise RuntimeError(
            f"exchange mean is not proportional to the identity (residue {residue:.3e})"
        )
    return EtaResult(float(eta), 0.0, EtaMethod.ALGEBRAIC)


def _draw_pair(kind: FluctuationKind, stream: RandomStream, dt: float, n: int):
    """Two independent increment batches, as (n,2,2) matrices or (n,) scalars."""
    if kind is FluctuationKind.PAULI:
        x = iso_matrix(stream.complex_gaussian(dt, size=(n, 3)))
        y = iso_matrix(stream.complex_gaussian(dt, size=(n, 3)))
    else:
        x = stream.complex_gaussian(dt, size=n)
        y = stream.complex_gaussian(dt, size=n)
    return x, y


def _scalar_part(batch: np.ndarray) -> np.ndarray:
    """Identity coefficient of a batch of 2x2 matrices (or pass scalars through)."""
    if batch.ndim == 1:
        return batch
    return np.trace(batch, axis1=-2, axis2=-1) / 2.0


def exchange_mean_mc(
    kind: FluctuationKind, n_samples: int, dt: float, stream: RandomStream
) -> EtaResult:
    """Monte Carlo exchange constant from fresh increment pairs.

    Averages the identity coefficient of Y X Y^dag X^dag / dt^2 over
    independent pairs (X, Y) drawn at two distinct times.
    """
    if n_samples < 100:
        raise ValueError(f"need at least 100 samples, got {n_samples}")
    _check_dt(dt)
    x, y = _draw_pair(kind, stream, dt, n_samples)
    if kind is FluctuationKind.PAULI:
        prod = y @ x @ np.conj(np.swapaxes(y, -1, -2)) @ np.conj(np.swapaxes(x, -1, -2))
    else:
        prod = y * x * np.conj(y) * np.conj(x)
    vals = _scalar_part(prod).real / dt**2
    eta = float(vals.mean())
    se = float(vals.std(ddof=1) / np.sqrt(n_samples))
    return EtaResult(eta, se, EtaMethod.MONTE_CARLO)


def fourth_moment_mc(
    kind: FluctuationKind,
    n_samples: int,
    dt: float,
    stream: RandomStream,
    ordering: str = "direct",
):
    """Scalar part of a fourth-order two-time mean, with standard error.

    ordering="direct" averages Y X X^dag Y^dag / dt^2 (expected 1 for both
    kinds); ordering="exchange" averages Y X Y^dag X^dag / dt^2 (expected
    eta).  Returns (estimate, standard_error).
    """
    if ordering not in ("direct", "exchange"):
        raise ValueError(f"unknown ordering {ordering!r}")
    _check_dt(dt)
    x, y = _draw_pair(kind, stream, dt, n_samples)
    if kind is FluctuationKind.PAULI:
        xd = np.conj(np.swapaxes(x, -1, -2))
        yd = np.conj(np.swapaxes(y, -1, -2))
        prod = y @ x @ (xd @ yd if ordering == "direct" else yd @ xd)
    else:
        prod = y * x * np.conj(x) * np.conj(y)
    vals = _scalar_part(prod).real / dt**2
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(n_samples))


def unbalanced_moment_mc(
    kind: FluctuationKind,
    n_dxi: int,
    m_dagger: int,
    n_samples: int,
    dt: float,
    stream: RandomStream,
):
    """Estimate E[dxi^n (dxi^dag)^m] for n != m; rotation invariance makes it 0.

    Returns (mean, standard_error) where both are 2x2 arrays for Pauli noise
    and complex scalars for commuting noise; the standard error is per entry
    (max over real/imaginary parts).
    """
    if n_dxi == m_dagger:
        raise ValueError("moment is balanced; only unbalanced means are covered")
    _check_dt(dt)
    if kind is FluctuationKind.PAULI:
        x = iso_matrix(stream.complex_gaussian(dt, size=(n_samples, 3)))
        xd = np.conj(np.swapaxes(x, -1, -2))
        prod = np.broadcast_to(np.eye(2, dtype=np.complex128), x.shape).copy()
        for _ in range(n_dxi):
            prod = prod @ x
        for _ in range(m_dagger):
            prod = prod @ xd
    else:
        x = stream.complex_gaussian(dt, size=n_samples)
        prod = x**n_dxi * np.conj(x) ** m_dagger
    scale = dt ** ((n_dxi + m_dagger) / 2.0)
    prod = prod / scale
    mean = prod.mean(axis=0)
    se = np.maximum(
        prod.real.std(axis=0, ddof=1), prod.imag.std(axis=0, ddof=1)
    ) / np.sqrt(n_samples)
    if kind is FluctuationKind.COMMUTING:
        return complex(mean), float(se)
    return mean, se
