"""Two-arm matter interferometer in a fluctuating background.

The wave packet in each arm is a single basis state with projector P1 or
P2; packets separate at t = 0, drift apart by x(t) (measured in light
seconds, c = 1), and recombine at t = T with x(0) = x(T) = 0.  The
interaction Hamiltonian vanishes in the interaction representation, so all
dynamics comes from the noise coupling.

Three noise scenarios are modeled:

* delta: each arm is hit by its own white noise; equivalent to Markovian
  linear QSD with L1 = sqrt(gamma) P1, L2 = sqrt(gamma) P2, and the
  off-diagonal density entries decay as exp(-gamma t).
* commuting propagating: two scalar noise fields travel between the arms
  at the speed of light (one each way).  Every sample hits each arm
  exactly once, the accumulated generator is proportional to the
  identity, and the interference pattern is untouched.
* pauli propagating: same light-line scheduling, but the samples are
  non-commuting iso-space increments.  Reordering no longer cancels and
  the off-diagonal ratio drops to 1 - (8/3) gamma^2 A, where
  A = integral x(t) dt is the space-time area between the arms and the
  8/3 combines the geometric factor 2A with (1 - eta) = 4/3.

Time is discretized in n_steps slices.  A "+" sample labeled by its
arrival index j at packet 1 hits P1 at step j and P2 at step j + d_j,
where d_j = round(x(t_j) / dt); a "-" sample hits P1 at j and P2 at
j - d_j.  Delays are inverted per sample rather than per application
step so that every sample is referenced exactly twice on the grid (the
spec of a simple repeated fluctuation); the difference against scheduling
by application time is O(dt).  Fields are pregenerated on the index range
[-d_max, n_steps + d_max); samples whose partner application falls
outside [0, T] contribute single touches, a boundary effect of relative
order x_max / T (identically absent for triangle geometries with
x_max <= T/4, where both touches of every in-range sample stay in range).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import kron, pauli
from .dyson import FluctuationSchedule, IncrementRef, ScheduleTerm
from .fluctuations import FluctuationKind, iso_matrix
from .markov import LindbladModel, drift_from_trace_condition
from .streams import RandomStream

__all__ = [
    "P1",
    "P2",
    "ScenarioKind",
    "Scenario",
    "InterferometerGeometry",
    "SuppressionMethod",
    "SuppressionReport",
    "make_triangle_geometry",
    "lightline_times",
    "draw_fields",
    "fluctuation_operator",
    "build_schedule",
    "simulate_scenario_mc",
    "suppression_analytic",
    "oracle_characteristic_sums",
    "ETA_PAULI",
]

P1 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
P2 = np.array([[0, 0], [0, 1]], dtype=np.complex128)

ETA_PAULI = -1.0 / 3.0

# Trajectory batch size for the vectorized engines.  Results are reduced
# in trajectory order; the constant only bounds memory (and pins float
# summation order).
_CHUNK = 2000
_N_BOOT = 200


class ScenarioKind(enum.Enum):
    DELTA = "delta"
    COMMUTING = "commuting"
    PAULI = "pauli"

    @property
    def fluctuation_kind(self) -> FluctuationKind:
        if self is ScenarioKind.DELTA:
            raise ValueError("delta noise is Markovian; no propagating fluctuation kind")
        return (
            FluctuationKind.COMMUTING
            if self is ScenarioKind.COMMUTING
            else FluctuationKind.PAULI
        )


@dataclass(frozen=True)
class Scenario:
    """Noise scenario plus its decoherence rate gamma (s^-1)."""

    kind: ScenarioKind
    gamma: float

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma}")


class SuppressionMethod(enum.Enum):
    ANALYTIC = "analytic"
    MONTE_CARLO = "monte_carlo"
    ORACLE = "oracle"


@dataclass(frozen=True)
class SuppressionReport:
    """Off-diagonal survival ratio |rho_12(T)| / |rho_12(0)|."""

    offdiag_ratio: float
    standard_error: float
    method: SuppressionMethod
    diagnostics: dict | None = None

    def __post_init__(self):
        if self.standard_error < 0:
            raise ValueError("standard_error must be non-negative")
        if self.method is SuppressionMethod.ANALYTIC and self.standard_error != 0:
            raise ValueError("analytic ratios carry no standard error")
        if self.offdiag_ratio < 0:
            raise ValueError("off-diagonal ratio cannot be negative")


@dataclass(frozen=True)
class InterferometerGeometry:
    """Arm separation history x(t) on a uniform grid over [0, T].

    ``separation`` must satisfy x(0) = x(T) = 0 (packets coincide at the
    split and the recombination), 0 <= x(t) <= T/4 (slow packets: the
    separation is tiny against the drift time, so light delays can be
    evaluated at either touch), and ``area`` is the enclosed space-time
    area integral of x(t) in time^2 units.
    """

    T: float
    n_steps: int
    separation: object  # callable t -> x(t)
    area: float

    def __post_init__(self):
        if self.T <= 0:
            raise ValueError(f"drift time must be positive, got {self.T}")
        if self.n_steps < 10:
            raise ValueError(f"need at least 10 grid steps, got {self.n_steps}")
        x = self.x_grid
        tol = 1e-9 * max(self.T, 1.0)
        if abs(float(self.separation(0.0))) > tol or abs(float(self.separation(self.T))) > tol:
            raise ValueError("separation must vanish at t=0 and t=T")
        if (x < -tol).any():
            raise ValueError("separation must be non-negative")
        if x.max() > self.T / 4 + tol:
            raise ValueError(
                f"separation {x.max():.3g} exceeds the slow-packet bound T/4 = {self.T / 4:.3g}"
            )
        if x.max() > 0 and round(x.max() / self.dt) < 1:
            raise ValueError(
                "grid too coarse to represent the maximum delay: "
                f"x_max = {x.max():.3g} is below one step dt = {self.dt:.3g}"
            )

    @property
    def dt(self) -> float:
        return self.T / self.n_steps

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps) * self.dt

    @property
    def x_grid(self) -> np.ndarray:
        return np.array([float(self.separation(t)) for t in self.times])

    @property
    def max_delay_steps(self) -> int:
        return int(round(self.x_grid.max() / self.dt))


def make_triangle_geometry(T: float, x_max: float, n_steps: int) -> InterferometerGeometry:
    """Triangle separation x(t) = x_max (1 - |2t/T - 1|); area x_max T / 2."""
    if x_max < 0:
        raise ValueError(f"x_max must be non-negative, got {x_max}")

    def separation(t: float) -> float:
        return x_max * (1.0 - abs(2.0 * t / T - 1.0))

    return InterferometerGeometry(
        T=T, n_steps=n_steps, separation=separation, area=x_max * T / 2.0
    )


def lightline_times(t: float, geometry: InterferometerGeometry):
    """(t+, t-, t++, t--): light-line touch times for separation x(t)."""
    if not 0 <= t <= geometry.T:
        raise ValueError(f"time {t} outside [0, {geometry.T}]")
    x = float(geometry.separation(t))
    return (t + x, t - x, t + 2 * x, t - 2 * x)


# ---------------------------------------------------------------------------
# Discrete light-line scheduling


def _target_maps(geometry: InterferometerGeometry):
    """P2 application step for every sample on the extended index range.

    Returns (j0, tgt_plus, tgt_minus): sample j (array position p = j - j0)
    arrives at packet 1 at step j and hits packet 2 at step tgt_plus[p]
    ("+" samples travel 1 -> 2) or tgt_minus[p] ("-" samples travel 2 -> 1,
    hitting packet 2 first).  Delays are rounded to the nearest grid index.
    """
    n, dt, t_total = geometry.n_steps, geometry.dt, geometry.T
    d_max = geometry.max_delay_steps
    j0 = -d_max
    js = np.arange(j0, n + d_max)
    t_clamped = np.clip(js * dt, 0.0, t_total)
    delays = np.array([int(round(float(geometry.separation(t)) / dt)) for t in t_clamped])
    return j0, js + delays, js - delays


def draw_fields(geometry: InterferometerGeometry, kind: FluctuationKind, stream: RandomStream) -> dict:
    """Pregenerated +/- noise tables on the extended index range.

    Returns {"plus": a, "minus": a} with arrays of shape (n_ext,) for
    commuting noise and (n_ext, 3) for Pauli components.  The draw layout
    (fields in sorted name order, components fastest) matches
    ``dyson.draw_schedule_samples`` on the schedule built by
    ``build_schedule``, so both paths replay identical samples from equal
    streams.
    """
    n_ext = geometry.n_steps + 2 * geometry.max_delay_steps
    if kind is FluctuationKind.PAULI:
        block = stream.complex_gaussian(geometry.dt, size=6 * n_ext)
        half = block.reshape(2, 3, n_ext)
        return {"minus": half[0].T.copy(), "plus": half[1].T.copy()}
    block = stream.complex_gaussian(geometry.dt, size=2 * n_ext)
    return {"minus": block[:n_ext], "plus": block[n_ext:]}


def _field_names(kind: FluctuationKind):
    if kind is FluctuationKind.PAULI:
        return ["minus_1", "minus_2", "minus_3", "plus_1", "plus_2", "plus_3"]
    return ["minus", "plus"]


def build_schedule(
    geometry: InterferometerGeometry, kind: FluctuationKind, gamma: float
) -> FluctuationSchedule:
    """Explicit per-step schedule of dF(t_k) for the Dyson engine.

    dF(t_k) = sqrt(gamma) [ P1 (dxi+(t_k) + dxi-(t_k))
                           + P2 (dxi+(t_k^-) + dxi-(t_k^+)) ],

    with the P2 references resolved per sample on the grid (see module
    docstring).  Pauli schedules live on the joint system (x) iso space
    with one scalar field per iso component; commuting schedules live on
    the 2-dim system space.
    """
    if gamma < 0:
        raise ValueError(f"gamma must be non-negative, got {gamma}")
    n = geometry.n_steps
    j0, tgt_plus, tgt_minus = _target_maps(geometry)
    root = math.sqrt(gamma)
    if kind is FluctuationKind.PAULI:
        p1_ops = [root / math.sqrt(3.0) * kron(P1, pauli(i)) for i in (1, 2, 3)]
        p2_ops = [root / math.sqrt(3.0) * kron(P2, pauli(i)) for i in (1, 2, 3)]
        plus_fields = ["plus_1", "plus_2", "plus_3"]
        minus_fields = ["minus_1", "minus_2", "minus_3"]
    else:
        p1_ops, p2_ops = [root * P1], [root * P2]
        plus_fields, minus_fields = ["plus"], ["minus"]

    d_max = -j0
    steps = [[] for _ in range(n)]
    for k in range(n):
        for op, name in zip(p1_ops, plus_fields):
            steps[k].append(ScheduleTerm(op, IncrementRef(name, k)))
        for op, name in zip(p1_ops, minus_fields):
            steps[k].append(ScheduleTerm(op, IncrementRef(name, k)))
    for pos, j in enumerate(range(j0, n + d_max)):
        kp = int(tgt_plus[pos])
        if 0 <= kp < n:
            for op, name in zip(p2_ops, plus_fields):
                steps[kp].append(ScheduleTerm(op, IncrementRef(name, j)))
        km = int(tgt_minus[pos])
        if 0 <= km < n:
            for op, name in zip(p2_ops, minus_fields):
                steps[km].append(ScheduleTerm(op, IncrementRef(name, j)))

    span = (j0, n - 1 + d_max)
    spans = {name: span for name in _field_names(kind)}
    return FluctuationSchedule(
        n_steps=n, dt=geometry.dt, steps=tuple(tuple(s) for s in steps), field_spans=spans
    )


def fluctuation_operator(
    k: int,
    geometry: InterferometerGeometry,
    fields: dict,
    kind: FluctuationKind,
    gamma: float,
) -> np.ndarray:
    """dF(t_k) assembled from pregenerated field tables (see build_schedule)."""
    if not 0 <= k < geometry.n_steps:
        raise ValueError(f"step {k} outside the grid")
    j0, tgt_plus, tgt_minus = _target_maps(geometry)
    plus, minus = fields["plus"], fields["minus"]
    if len(plus) != len(tgt_plus) or len(minus) != len(tgt_minus):
        raise ValueError("field tables do not cover the extended index range")
    pos = k - j0
    a = plus[pos] + minus[pos]
    b = plus[tgt_plus == k].sum(axis=0) + minus[tgt_minus == k].sum(axis=0)
    root = math.sqrt(gamma)
    if kind is FluctuationKind.PAULI:
        return root * (kron(P1, iso_matrix(a)) + kron(P2, iso_matrix(b)))
    return root * (a * P1 + b * P2)


# ---------------------------------------------------------------------------
# Monte Carlo simulation


def _bootstrap_ratio(num, den, master_seed, stream_index, n_boot):
    """SE of |mean(num)| / mean(den) under trajectory resampling."""
    n = len(num)
    stream = RandomStream(master_seed, stream_index)
    ratios = np.empty(n_boot)
    for b in range(n_boot):
        idx = stream.integers(0, n, size=n)
        ratios[b] = abs(num[idx].mean()) / den[idx].mean().real
    return float(ratios.std(ddof=1))


def _check_rho0(rho0) -> np.ndarray:
    rho = np.asarray(rho0, dtype=np.complex128)
    if rho.shape != (2, 2):
        raise ValueError("the interferometer model is two-dimensional")
    if abs(rho[0, 1]) == 0:
        raise ValueError("off-diagonal reference undefined: rho0[0,1] is zero")
    return rho


def _mul2(m00, m01, m10, m11, k00, k01, k10, k11):
    """Batched 2x2 product M @ K on component arrays."""
    return (
        m00 * k00 + m01 * k10,
        m00 * k01 + m01 * k11,
        m10 * k00 + m11 * k10,
        m10 * k01 + m11 * k11,
    )


def _scatter_targets(values, targets, n_out):
    """Accumulate values[..., p] into out[..., targets[p]], duplicates summed.

    values: (rows, n_src) complex; targets: (n_src,) int in [0, n_out).
    """
    rows = values.shape[0]
    flat = (targets[None, :] + n_out * np.arange(rows)[:, None]).ravel()
    re = np.bincount(flat, weights=values.real.ravel(), minlength=rows * n_out)
    im = np.bincount(flat, weights=values.imag.ravel(), minlength=rows * n_out)
    return (re + 1j * im).reshape(rows, n_out)


def _run_propagating(geometry, kind, gamma, n_traj, master_seed):
    """Per-trajectory propagator statistics for the propagating scenarios.

    Evolves the pure-fluctuation propagator K_F = prod (I + dF(t_k)).
    Orthogonality of P1 and P2 makes K_F block diagonal,
    K_F = P1 (x) A + P2 (x) B, with A and B ordered products over the
    arm-1 and arm-2 noise sequences (2x2 iso matrices for Pauli noise,
    complex scalars for commuting noise), which is what gets evolved here.

    Returns (u, v1, v2, iso_stats): u_i = tr(A B^dag)/2, v1_i = tr(A A^dag)/2,
    v2_i = tr(B B^dag)/2 per trajectory (scalar products for commuting
    noise); iso_stats accumulates the iso-space reduction for the Pauli
    identity check, else None.
    """
    n, dtg = geometry.n_steps, geometry.dt
    j0, tgt_plus, tgt_minus = _target_maps(geometry)
    n_ext = len(tgt_plus)
    d_max = -j0
    root = math.sqrt(gamma)
    is_pauli = kind is FluctuationKind.PAULI
    ncomp = 3 if is_pauli else 1

    valid_p = (tgt_plus >= 0) & (tgt_plus < n)
    valid_m = (tgt_minus >= 0) & (tgt_minus < n)
    src_p, dst_p = np.nonzero(valid_p)[0], tgt_plus[valid_p]
    src_m, dst_m = np.nonzero(valid_m)[0], tgt_minus[valid_m]

    u = np.empty(n_traj, dtype=np.complex128)
    v1 = np.empty(n_traj)
    v2 = np.empty(n_traj)
    iso_sum = np.zeros((2, 2), dtype=np.complex128)
    iso_sumsq = np.zeros((2, 2))

    done = 0
    while done < n_traj:
        count = min(_CHUNK, n_traj - done)
        block = np.empty((count, 2 * ncomp * n_ext), dtype=np.complex128)
        for i in range(count):
            stream = RandomStream(master_seed, done + i)
            block[i] = stream.complex_gaussian(dtg, size=2 * ncomp * n_ext)
        fields = block.reshape(count, 2, ncomp, n_ext)
        minus, plus = fields[:, 0], fields[:, 1]  # (count, ncomp, n_ext)

        alpha = plus[:, :, d_max : d_max + n] + minus[:, :, d_max : d_max + n]
        beta = _scatter_targets(
            plus[:, :, src_p].reshape(count * ncomp, -1), dst_p, n
        ) + _scatter_targets(minus[:, :, src_m].reshape(count * ncomp, -1), dst_m, n)
        beta = beta.reshape(count, ncomp, n)

        if is_pauli:
            a_legs, b_legs = _evolve_pauli(alpha, beta, root)
            u[done : done + count] = 0.5 * sum(
                a * b.conj() for a, b in zip(a_legs, b_legs)
            )
            v1[done : done + count] = 0.5 * sum(np.abs(a) ** 2 for a in a_legs)
            v2[done : done + count] = 0.5 * sum(np.abs(b) ** 2 for b in b_legs)
            iso = _iso_reduction(a_legs, b_legs)
            iso_sum += iso.sum(axis=0)
            iso_sumsq += (np.abs(iso) ** 2).sum(axis=0)
        else:
            a = np.ones(count, dtype=np.complex128)
            b = np.ones(count, dtype=np.complex128)
            for k in range(n):
                a = a * (1.0 + root * alpha[:, 0, k])
                b = b * (1.0 + root * beta[:, 0, k])
            u[done : done + count] = a * b.conj()
            v1[done : done + count] = np.abs(a) ** 2
            v2[done : done + count] = np.abs(b) ** 2
        done += count

    iso_stats = None
    if is_pauli:
        mean = iso_sum / n_traj
        var = iso_sumsq / n_traj - np.abs(mean) ** 2
        iso_stats = (mean, np.sqrt(np.maximum(var, 0.0) / n_traj))
    return u, v1, v2, iso_stats


def _evolve_pauli(alpha, beta, root):
    """Ordered products of (I + sqrt(gamma) iso-increment) per arm.

    alpha, beta: (count, 3, n) component arrays.  Returns the four matrix
    components (m00, m01, m10, m11) of each arm's product as (count,)
    arrays.
    """
    count, _, n = alpha.shape
    scale = root / math.sqrt(3.0)
    legs = []
    for comps in (alpha, beta):
        k00 = np.ones(count, dtype=np.complex128)
        k01 = np.zeros(count, dtype=np.complex128)
        k10 = np.zeros(count, dtype=np.complex128)
        k11 = np.ones(count, dtype=np.complex128)
        c1, c2, c3 = comps[:, 0], comps[:, 1], comps[:, 2]
        for k in range(n):
            # I + scale * (c1 sigma1 + c2 sigma2 + c3 sigma3)
            m00 = 1.0 + scale * c3[:, k]
            m11 = 1.0 - scale * c3[:, k]
            m01 = scale * (c1[:, k] - 1j * c2[:, k])
            m10 = scale * (c1[:, k] + 1j * c2[:, k])
            k00, k01, k10, k11 = _mul2(m00, m01, m10, m11, k00, k01, k10, k11)
        legs.append((k00, k01, k10, k11))
    return legs


def _iso_reduction(a_legs, b_legs):
    """Per-trajectory system-trace of K (I/2 x I/2) K^dag.

    Diagnostic for the "iso factor stays proportional to the identity"
    claim; both arms enter with weight 1/2, and the initial iso state I/2
    contributes the second 1/2.
    """
    out = np.zeros((len(a_legs[0]), 2, 2), dtype=np.complex128)
    for m00, m01, m10, m11 in (a_legs, b_legs):
        out[:, 0, 0] += np.abs(m00) ** 2 + np.abs(m01) ** 2
        out[:, 0, 1] += m00 * m10.conj() + m01 * m11.conj()
        out[:, 1, 0] += m10 * m00.conj() + m11 * m01.conj()
        out[:, 1, 1] += np.abs(m10) ** 2 + np.abs(m11) ** 2
    return 0.25 * out


def _run_delta(geometry, gamma, rho0, n_traj, master_seed):
    """Linear QSD trajectories for the delta scenario (L_j = sqrt(gamma) P_j).

    Mixed initial states are split over the eigenvectors of rho0 with
    largest-remainder allocation of trajectories, each outer product
    rescaled so the allocation is exactly faithful.  Returns per-trajectory
    (m12, w): the (1,2) entry of |psi><psi| and the weight <psi|psi>.
    """
    t_total = geometry.T
    n_steps = max(10, min(int(math.ceil(1000.0 * gamma * t_total)), 50000))
    dt = t_total / n_steps
    evals, evecs = np.linalg.eigh(rho0)
    keep = evals > 1e-12
    evals, evecs = evals[keep], evecs[:, keep]
    shares = evals * n_traj
    alloc = np.floor(shares).astype(int)
    remainder = np.argsort(shares - alloc)[::-1]
    for i in range(n_traj - alloc.sum()):
        alloc[remainder[i % len(alloc)]] += 1

    model = LindbladModel(
        hamiltonian=np.zeros((2, 2)),
        lindblads=(math.sqrt(gamma) * P1, math.sqrt(gamma) * P2),
    )
    decay = 1.0 + dt * np.diag(drift_from_trace_condition(model))  # diagonal model
    root = math.sqrt(gamma)

    m12 = np.empty(n_traj, dtype=np.complex128)
    w = np.empty(n_traj)
    starts = np.repeat(np.arange(len(alloc)), alloc)
    done = 0
    while done < n_traj:
        count = min(_CHUNK, n_traj - done)
        which = starts[done : done + count]
        psi = evecs[:, which].T.copy()
        scale = np.sqrt(evals[which] * n_traj / alloc[which])
        psi *= scale[:, None]
        noise = np.empty((count, n_steps, 2), dtype=np.complex128)
        for i in range(count):
            stream = RandomStream(master_seed, done + i)
            noise[i] = stream.complex_gaussian(dt, size=(n_steps, 2))
        for k in range(n_steps):
            psi = psi * decay[None, :] + root * noise[:, k, :] * psi
        m12[done : done + count] = psi[:, 0] * psi[:, 1].conj()
        w[done : done + count] = np.abs(psi[:, 0]) ** 2 + np.abs(psi[:, 1]) ** 2
        done += count
    return m12, w


def simulate_scenario_mc(
    scenario: Scenario,
    geometry: InterferometerGeometry,
    rho0,
    n_traj: int,
    master_seed: int,
    n_boot: int = _N_BOOT,
) -> SuppressionReport:
    """Monte Carlo off-diagonal survival ratio with bootstrap standard error.

    Per-trajectory randomness is keyed by (master_seed, trajectory_index);
    the bootstrap uses stream index n_traj.  The ensemble mean is
    trace-normalized before the (1,2) entry is compared against rho0, and
    for the Pauli scenario the joint-space mean is iso-traced.
    """
    if n_traj < 100:
        raise ValueError(f"need at least 100 trajectories, got {n_traj}")
    rho = _check_rho0(rho0)
    p11, p22 = rho[0, 0].real, rho[1, 1].real

    if scenario.kind is ScenarioKind.DELTA:
        m12, w = _run_delta(geometry, scenario.gamma, rho, n_traj, master_seed)
        num = m12 / abs(rho[0, 1])
        den = w.astype(np.complex128)
        ratio = abs(num.mean()) / den.mean().real
        diagnostics = {"n_trajectories": n_traj}
    else:
        kind = scenario.kind.fluctuation_kind
        u, v1, v2, iso_stats = _run_propagating(
            geometry, kind, scenario.gamma, n_traj, master_seed
        )
        num = u
        den = (p11 * v1 + p22 * v2).astype(np.complex128)
        ratio = abs(num.mean()) / den.mean().real
        diagnostics = {"n_trajectories": n_traj}
        if iso_stats is not None:
            diagnostics["iso_reduced_mean"] = iso_stats[0]
            diagnostics["iso_reduced_se"] = iso_stats[1]
    se = _bootstrap_ratio(num, den, master_seed, n_traj, n_boot)
    return SuppressionReport(
        offdiag_ratio=float(ratio),
        standard_error=se,
        method=SuppressionMethod.MONTE_CARLO,
        diagnostics=diagnostics,
    )


def suppression_analytic(
    scenario: Scenario, geometry: InterferometerGeometry
) -> SuppressionReport:
    """Closed-form survival ratios of the three scenarios.

    delta: exp(-gamma T); commuting: 1 (pure cancellation); pauli:
    1 - (8/3) gamma^2 A to second order, valid only while that correction
    is small.
    """
    if scenario.kind is ScenarioKind.DELTA:
        ratio = math.exp(-scenario.gamma * geometry.T)
    elif scenario.kind is ScenarioKind.COMMUTING:
        ratio = 1.0
    else:
        suppression = (8.0 / 3.0) * scenario.gamma**2 * geometry.area
        if suppression > 0.5:
            raise ValueError(
                f"outside perturbative validity: (8/3) gamma^2 A = {suppression:.3g} > 0.5"
            )
        ratio = 1.0 - suppression
    return SuppressionReport(ratio, 0.0, SuppressionMethod.ANALYTIC)


def oracle_characteristic_sums(
    geometry: InterferometerGeometry, n_steps: int, eta: float
):
    """Brute-force double sums behind the second-order density change.

    Evaluates, on a fresh n_steps grid, the characteristic-function sums
    of the time-ordered fourth-order pairing count: with t'-- = t' - 2x(t')
    and dt^2 weights,

        coeff_rho0 = 4 * sum_{t < t'} dt^2                       -> 2 T^2
        coeff_od   = sum [3 X(t<t') + X(t<t'--) + eta X(t'--<=t<t')] dt^2
                     - coeff_rho0                                -> 2 A (eta - 1)

    The exchange window [t'--, t') is taken half-open so the two
    characteristic functions partition X(t < t') exactly and the
    commuting case (eta = 1) vanishes identically on every grid.
    Convergence to the continuum values is first order in dt.
    """
    if n_steps < 10:
        raise ValueError(f"need at least 10 oracle steps, got {n_steps}")
    dt = geometry.T / n_steps
    t = np.arange(n_steps) * dt
    x = np.array([float(geometry.separation(tp)) for tp in t])
    if x.max() > 0 and 2 * x.max() < dt:
        raise ValueError("oracle grid too coarse: max delay spans less than one cell")
    tpp = t - 2 * x
    earlier = t[:, None] < t[None, :]
    s1 = np.count_nonzero(earlier)
    s2 = np.count_nonzero(t[:, None] < tpp[None, :])
    s3 = np.count_nonzero((t[:, None] >= tpp[None, :]) & earlier)
    coeff_rho0 = 4.0 * s1 * dt**2
    coeff_od = (s2 + eta * s3 - s1) * dt**2
    return float(coeff_rho0), float(coeff_od)
