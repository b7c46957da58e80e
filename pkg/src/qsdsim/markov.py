"""Linear Markovian quantum state diffusion and its master equation.

The linear trajectory equation evolves an *unnormalized* state

    |dpsi> = [ -(i/hbar) H dt - (1/2) sum_j L_j^dag L_j dt
               + sum_j L_j dxi_j ] |psi>,

where the self-adjoint drift -(1/2) sum L^dag L is fixed by trace
conservation of the ensemble density operator.  The same model evolves
deterministically through the Lindblad master equation

    drho/dt = -(i/hbar)[H, rho]
              + sum_j ( L_j rho L_j^dag - (1/2){L_j^dag L_j, rho} ),

and the weighted ensemble mean rho = M |psi><psi| of the trajectories must
reproduce it; that equivalence is the central consistency check of the
linear theory and is what the test suite pins down statistically.

Trajectory stepping is Euler-Maruyama (weak order 1, enough for 3-sigma
statistical acceptance); the master equation uses a classical fixed-step
RK4, which at gamma*dt <= 1e-3 is exact to ~1e-12 on these 2x2 problems.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DensityOperator, TrajectoryState, is_hermitian
from .fluctuations import ScalarIncrement
from .streams import RandomStream

__all__ = [
    "LindbladModel",
    "EnsembleEstimate",
    "drift_from_trace_condition",
    "step_linear_qsd",
    "step_master",
    "solve_master",
    "run_qsd_ensemble",
    "ensemble_density",
]

# Trajectories are evolved in fixed-size batches; the reduction over
# batches is in trajectory order, so results are chunking-independent by
# construction except for float summation order, which this constant pins.
_CHUNK = 2048


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian (energy units) plus Lindblad operators (time^-1/2 units)."""

    hamiltonian: np.ndarray
    lindblads: tuple

    def __post_init__(self):
        h = np.asarray(self.hamiltonian, dtype=np.complex128)
        ls = tuple(np.asarray(op, dtype=np.complex128) for op in self.lindblads)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError(f"Hamiltonian must be square, got shape {h.shape}")
        if not is_hermitian(h):
            raise ValueError("Hamiltonian is not Hermitian within 1e-12")
        for op in ls:
            if op.shape != h.shape:
                raise ValueError(
                    f"Lindblad operator shape {op.shape} does not match {h.shape}"
                )
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "lindblads", ls)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]


@dataclass(frozen=True)
class EnsembleEstimate:
    """Trace-normalized ensemble density with raw per-entry standard errors."""

    rho: DensityOperator
    n_trajectories: int
    per_entry_standard_error: np.ndarray

    def __post_init__(self):
        if self.n_trajectories < 1:
            raise ValueError("need at least one trajectory")
        se = np.asarray(self.per_entry_standard_error, dtype=float)
        if (se < 0).any():
            raise ValueError("standard errors must be non-negative")
        object.__setattr__(self, "per_entry_standard_error", se)


def drift_from_trace_condition(model: LindbladModel) -> np.ndarray:
    """Self-adjoint drift -(1/2) sum_j L_j^dag L_j required by trace
    conservation; the skew-adjoint part is -H/hbar and lives in the stepper."""
    out = np.zeros((model.dim, model.dim), dtype=np.complex128)
    for op in model.lindblads:
        out -= 0.5 * (op.conj().T @ op)
    return out


def step_linear_qsd(
    state: TrajectoryState,
    model: LindbladModel,
    dt: float,
    increments,
    hbar: float = 1.0,
) -> TrajectoryState:
    """One Euler-Maruyama step of the linear trajectory equation.

    ``increments`` supplies one complex noise sample per Lindblad operator
    (ScalarIncrement or bare complex).  The state is left unnormalized.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    vals = [inc.value if isinstance(inc, ScalarIncrement) else complex(inc) for inc in increments]
    if len(vals) != len(model.lindblads):
        raise ValueError(
            f"got {len(vals)} increments for {len(model.lindblads)} Lindblad operators"
        )
    psi = state.vec
    dpsi = (-1j / hbar) * dt * (model.hamiltonian @ psi)
    dpsi += dt * (drift_from_trace_condition(model) @ psi)
    for op, dxi in zip(model.lindblads, vals):
        dpsi += dxi * (op @ psi)
    return TrajectoryState(psi + dpsi)


def _lindblad_rhs(rho: np.ndarray, model: LindbladModel, hbar: float) -> np.ndarray:
    h = model.hamiltonian
    out = (-1j / hbar) * (h @ rho - rho @ h)
    for op in model.lindblads:
        opd = op.conj().T
        ldl = opd @ op
        out += op @ rho @ opd - 0.5 * (ldl @ rho + rho @ ldl)
    return out


def step_master(
    rho: DensityOperator, model: LindbladModel, dt: float, hbar: float = 1.0
) -> DensityOperator:
    """One RK4 step of the master equation; trace preserved to integrator order."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    mat = _rk4_step(np.asarray(rho, dtype=np.complex128), model, dt, hbar)
    # Symmetrize away the ~1e-17 float asymmetry RK4 leaves behind.
    mat = 0.5 * (mat + mat.conj().T)
    return DensityOperator(mat, normalized=rho.normalized)


def _rk4_step(mat, model, dt, hbar):
    k1 = _lindblad_rhs(mat, model, hbar)
    k2 = _lindblad_rhs(mat + 0.5 * dt * k1, model, hbar)
    k3 = _lindblad_rhs(mat + 0.5 * dt * k2, model, hbar)
    k4 = _lindblad_rhs(mat + dt * k3, model, hbar)
    return mat + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def solve_master(
    rho0: DensityOperator,
    model: LindbladModel,
    t_final: float,
    dt: float,
    hbar: float = 1.0,
) -> DensityOperator:
    """Integrate the master equation to t_final with fixed RK4 steps.

    The step is shrunk so an integer number of steps lands exactly on
    t_final.
    """
    if t_final < 0:
        raise ValueError("t_final must be non-negative")
    if t_final == 0:
        return rho0
    n_steps = max(1, int(np.ceil(t_final / dt)))
    h = t_final / n_steps
    mat = np.asarray(rho0, dtype=np.complex128)
    for _ in range(n_steps):
        mat = _rk4_step(mat, model, h, hbar)
    mat = 0.5 * (mat + mat.conj().T)
    return DensityOperator(mat, normalized=rho0.normalized)


def run_qsd_ensemble(
    model: LindbladModel,
    psi0,
    t_final: float,
    n_steps: int,
    n_traj: int,
    master_seed: int,
    hbar: float = 1.0,
) -> EnsembleEstimate:
    """Evolve n_traj independent linear QSD trajectories and average them.

    Trajectory i draws its whole noise path from RandomStream(master_seed, i),
    so the estimate is reproducible and independent of batching.  Noise per
    trajectory is laid out as one complex Gaussian block of shape
    (n_steps, n_lindblads) with variance dt per sample.
    """
    if n_traj < 1:
        raise ValueError("need at least one trajectory")
    if n_steps < 1:
        raise ValueError("need at least one step")
    psi0 = np.asarray(psi0, dtype=np.complex128)
    dim = psi0.size
    dt = t_final / n_steps
    n_l = len(model.lindblads)
    drift = np.eye(dim) + dt * (
        (-1j / hbar) * model.hamiltonian + drift_from_trace_condition(model)
    )
    l_stack = (
        np.stack(model.lindblads) if n_l else np.zeros((0, dim, dim), dtype=np.complex128)
    )

    mean = np.zeros((dim, dim), dtype=np.complex128)
    sumsq = np.zeros((dim, dim), dtype=float)
    done = 0
    while done < n_traj:
        count = min(_CHUNK, n_traj - done)
        noise = np.empty((count, n_steps, n_l), dtype=np.complex128)
        for i in range(count):
            stream = RandomStream(master_seed, done + i)
            noise[i] = stream.complex_gaussian(dt, size=(n_steps, n_l))
        psi = np.broadcast_to(psi0, (count, dim)).copy()
        for k in range(n_steps):
            new = psi @ drift.T
            for j in range(n_l):
                new += noise[:, k, j, None] * (psi @ l_stack[j].T)
            psi = new
        outer = psi[:, :, None] * psi[:, None, :].conj()
        mean += outer.sum(axis=0)
        sumsq += (np.abs(outer - outer.mean(axis=0)) ** 2).sum(axis=0) + count * np.abs(
            outer.mean(axis=0)
        ) ** 2
        done += count
    mean /= n_traj
    # Per-entry complex sample variance around the global mean.
    var = sumsq / n_traj - np.abs(mean) ** 2
    se = np.sqrt(np.maximum(var, 0.0) / n_traj)
    return _estimate_from_moments(mean, se, n_traj)


def ensemble_density(trajectories) -> EnsembleEstimate:
    """Weighted ensemble density rho = mean(|psi><psi|), trace-normalized.

    Weights ride along in the unnormalized state norms; the raw mean has
    trace 1 only in expectation, so the returned density is divided by its
    trace and the residual is reported implicitly through the standard
    errors of the raw entries.
    """
    states = list(trajectories)
    if not states:
        raise ValueError("empty trajectory list")
    dims = {s.dim for s in states}
    if len(dims) != 1:
        raise ValueError(f"trajectories have mixed dimensions {sorted(dims)}")
    outer = np.stack([s.projector() for s in states])
    mean = outer.mean(axis=0)
    n = len(states)
    if n > 1:
        se = outer.std(axis=0, ddof=0) / np.sqrt(n)
    else:
        se = np.zeros(mean.shape, dtype=float)
    return _estimate_from_moments(mean, np.asarray(se, dtype=float), n)


def _estimate_from_moments(mean, se, n) -> EnsembleEstimate:
    tr = np.trace(mean).real
    if tr <= 0:
        raise ValueError(f"ensemble mean has non-positive trace {tr}")
    mat = mean / tr
    mat = 0.5 * (mat + mat.conj().T)
    rho = DensityOperator(mat, normalized=True)
    return EnsembleEstimate(rho, n, se)
