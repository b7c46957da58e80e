"""Time-ordered propagators and their perturbative expansion on a grid.

A :class:`FluctuationSchedule` spells out, step by step, the differential
fluctuation operator as a sum of (constant operator) x (complex increment)
terms, where each increment is referenced by a (field, time index) pair.
Referencing the *same* sample at two different steps is what makes the
evolution non-Markovian: a "simple repeated" fluctuation acts on the
system at exactly two times, and the schedule validator enforces that no
sample is used more than twice.

Given a table of increment samples, the propagator is the ordered product

    K = (I + dG(t_{n-1})) ... (I + dG(t_1)) (I + dG(t_0)),

later times applied on the left, which agrees with the per-step matrix
exponential up to O(dG^2) per step (below the working order throughout).
The perturbative terms K^(0) = I, K^(n) = sum_k dG(t_k) K^(n-1)(< t_k)
are accumulated with strict time ordering: the inner sum runs over
strictly earlier steps only, so two-step schedules give exactly
K^(2) = dG(t_1) dG(t_0) with no equal-time products.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .core import identity, partial_trace_iso
from .fluctuations import FluctuationKind
from .streams import RandomStream

__all__ = [
    "IncrementRef",
    "ScheduleTerm",
    "FluctuationSchedule",
    "DysonTerms",
    "draw_schedule_samples",
    "fluctuation_matrix",
    "time_ordered_propagator",
    "dyson_terms",
    "density_second_order",
    "drift_second_order",
]


@dataclass(frozen=True)
class IncrementRef:
    """Reference to one increment sample: field name plus time index.

    Indices may be negative; boundary effects are handled by generating
    fields on an extended index range.
    """

    field: str
    index: int


@dataclass(frozen=True)
class ScheduleTerm:
    """One (operator) x (increment) contribution to dF at a single step."""

    operator: np.ndarray
    ref: IncrementRef

    def __post_init__(self):
        op = np.asarray(self.operator, dtype=np.complex128)
        if op.ndim != 2 or op.shape[0] != op.shape[1]:
            raise ValueError(f"term operator must be square, got shape {op.shape}")
        object.__setattr__(self, "operator", op)
        self.operator.setflags(write=False)


@dataclass(frozen=True)
class FluctuationSchedule:
    """Per-step composition of the differential fluctuation operator.

    ``steps[k]`` lists the terms of dF(t_k).  ``field_spans`` maps each
    field name to the inclusive index range (lo, hi) its sample table must
    cover; it defaults to the range actually referenced.
    """

    n_steps: int
    dt: float
    steps: tuple
    field_spans: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError("schedule needs at least one step")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        steps = tuple(tuple(terms) for terms in self.steps)
        if len(steps) != self.n_steps:
            raise ValueError(f"got {len(steps)} step entries for n_steps={self.n_steps}")
        uses = Counter(term.ref for terms in steps for term in terms)
        overused = [ref for ref, n in uses.items() if n > 2]
        if overused:
            ref = overused[0]
            raise ValueError(
                f"increment ({ref.field}, {ref.index}) referenced "
                f"{uses[ref]} times; a fluctuation may appear at most twice"
            )
        spans = dict(self.field_spans)
        for ref in uses:
            lo, hi = spans.get(ref.field, (ref.index, ref.index))
            spans[ref.field] = (min(lo, ref.index), max(hi, ref.index))
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "field_spans", spans)

    @property
    def dim(self) -> int:
        for terms in self.steps:
            for term in terms:
                return term.operator.shape[0]
        raise ValueError("schedule has no terms; dimension undefined")

    def sample(self, samples: dict, ref: IncrementRef) -> complex:
        lo, _ = self.field_spans[ref.field]
        table = samples[ref.field]
        pos = ref.index - lo
        if not 0 <= pos < len(table):
            raise KeyError(f"increment ({ref.field}, {ref.index}) not covered by samples")
        return table[pos]


@dataclass(frozen=True)
class DysonTerms:
    """Perturbative orders K^(0) ... K^(n_max); K^(0) is the identity."""

    orders: tuple

    def __post_init__(self):
        orders = tuple(np.asarray(k, dtype=np.complex128) for k in self.orders)
        if not orders:
            raise ValueError("need at least order zero")
        dim = orders[0].shape[0]
        if not np.array_equal(orders[0], np.eye(dim)):
            raise ValueError("order zero must be the identity")
        object.__setattr__(self, "orders", orders)


def draw_schedule_samples(schedule: FluctuationSchedule, stream: RandomStream) -> dict:
    """Fresh increment tables covering every span, one per field.

    Fields are drawn in sorted name order as a single complex-Gaussian
    block with variance dt per sample, so the layout is reproducible and
    matches the batched engines that consume the same streams.
    """
    names = sorted(schedule.field_spans)
    lengths = [schedule.field_spans[f][1] - schedule.field_spans[f][0] + 1 for f in names]
    block = stream.complex_gaussian(schedule.dt, size=sum(lengths))
    out, pos = {}, 0
    for name, length in zip(names, lengths):
        out[name] = block[pos : pos + length]
        pos += length
    return out


def fluctuation_matrix(schedule: FluctuationSchedule, samples: dict, k: int) -> np.ndarray:
    """Assemble dF(t_k) = sum_terms operator * increment."""
    if not 0 <= k < schedule.n_steps:
        raise ValueError(f"step {k} outside schedule of {schedule.n_steps} steps")
    dim = schedule.dim
    out = np.zeros((dim, dim), dtype=np.complex128)
    for term in schedule.steps[k]:
        out += term.operator * schedule.sample(samples, term.ref)
    return out


def time_ordered_propagator(
    schedule: FluctuationSchedule, samples: dict, drift=None
) -> np.ndarray:
    """Ordered product K = prod_k (I + dG(t_k)), later steps on the left.

    ``drift`` is an optional constant operator added as drift*dt per step;
    by default the propagator is the pure fluctuation propagator K_F.
    """
    dim = schedule.dim
    k_total = identity(dim)
    drift_term = None if drift is None else np.asarray(drift, dtype=np.complex128) * schedule.dt
    for k in range(schedule.n_steps):
        dg = fluctuation_matrix(schedule, samples, k)
        if drift_term is not None:
            dg = dg + drift_term
        k_total = k_total + dg @ k_total
    return k_total


def dyson_terms(schedule: FluctuationSchedule, samples: dict, n_max: int) -> DysonTerms:
    """Perturbative orders of the propagator with strict time ordering."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    dim = schedule.dim
    partials = [identity(dim)] + [np.zeros((dim, dim), dtype=np.complex128) for _ in range(n_max)]
    for k in range(schedule.n_steps):
        dg = fluctuation_matrix(schedule, samples, k)
        # Descending order: partials[n-1] still excludes step k, which is
        # exactly the strict ordering of the iterated integral.
        for n in range(n_max, 0, -1):
            partials[n] = partials[n] + dg @ partials[n - 1]
    return DysonTerms(tuple(partials))


def _lift_rho0(rho0, kind: FluctuationKind, op_dim: int):
    """Initial density on the schedule's space, plus the system dimension."""
    rho = np.asarray(rho0, dtype=np.complex128)
    sys_dim = rho.shape[0]
    if kind is FluctuationKind.PAULI:
        if op_dim != 2 * sys_dim:
            raise ValueError(
                f"Pauli schedule dimension {op_dim} does not match system "
                f"dimension {sys_dim} x iso dimension 2"
            )
        return np.kron(rho, np.eye(2) / 2.0), sys_dim
    if op_dim != sys_dim:
        raise ValueError(
            f"schedule dimension {op_dim} does not match density dimension {sys_dim}"
        )
    return rho, sys_dim


def density_second_order(
    rho0,
    schedule: FluctuationSchedule,
    kind: FluctuationKind,
    n_mc: int,
    stream: RandomStream,
) -> np.ndarray:
    """Monte Carlo mean of the lowest non-vanishing fluctuation terms,

        M[ K^(1) rho0 K^(1)dag  +  K^(2) rho0 K^(2)dag ],

    over fresh increment samples.  Cross terms of different order carry
    unbalanced means and vanish; the result is iso-traced back to the
    system space for Pauli schedules.
    """
    if n_mc < 100:
        raise ValueError(f"need at least 100 Monte Carlo samples, got {n_mc}")
    rho, sys_dim = _lift_rho0(rho0, kind, schedule.dim)
    acc = np.zeros_like(rho)
    for _ in range(n_mc):
        samples = draw_schedule_samples(schedule, stream)
        terms = dyson_terms(schedule, samples, 2).orders
        for k_n in terms[1:]:
            acc += k_n @ rho @ k_n.conj().T
    acc /= n_mc
    if kind is FluctuationKind.PAULI:
        return partial_trace_iso(acc, sys_dim, 2)
    return acc


def drift_second_order(k2_mean) -> np.ndarray:
    """Self-adjoint drift -(1/2) M[K_F^(n1)dag K_F^(n1)] restoring the trace.

    Adding S = drift_second_order(M[K^dag K]) to the expansion cancels the
    rho0-proportional part of the fluctuation terms, which is how the trace
    condition fixes the drift at the working order.
    """
    mat = np.asarray(k2_mean, dtype=np.complex128)
    return -0.5 * mat
