"""Probe states and the output states they produce under each hypothesis.

Output factors are always arranged as ``B_1..B_N, C_1..C_N`` followed by the
reference register ``R`` when there is one, so that the two hypotheses are
exchanged by a single B <-> C factor swap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from math import factorial

import numpy as np

from .combinat import GroupPartition, group_partitions
from .numkernel import permute_vector_factors
from .quantum import (
    HypothesisSpec,
    MultiState,
    Rng,
    apply_channel,
    frobenius_distance,
    hypothesis_channel,
    permutation_unitary,
    sample_parameter,
)

INVARIANCE_TOL = 1e-9
INVARIANCE_SAMPLES = 3


@dataclass(frozen=True)
class ClassicalProbe:
    inputs: tuple


@dataclass(frozen=True)
class CoherentProbe:
    pass


@dataclass(frozen=True)
class SingletProbe:
    partition: GroupPartition | None = None


@dataclass(frozen=True)
class ReferenceProbe:
    pass


ProbeKind = ClassicalProbe | CoherentProbe | SingletProbe | ReferenceProbe


def active_probes(n: int, d: int) -> int:
    """Probes actually used by the singlet strategies: the largest multiple of d not above n."""
    return d * (n // d)


def coherent_probe(n: int, d: int) -> MultiState:
    if n < 1:
        raise ValueError("n must be positive")
    e0 = np.full(d, 1 / np.sqrt(d), dtype=complex)
    psi = e0
    for _ in range(n - 1):
        psi = np.kron(psi, e0)
    return MultiState.from_ket(psi, [d] * n)


def _parity(perm) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def singlet_vector(d: int) -> np.ndarray:
    """``(1/sqrt(d!)) sum eps_{k1..kd} |k1..kd>``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    psi = np.zeros(d ** d, dtype=complex)
    amp = 1 / np.sqrt(factorial(d))
    for perm in permutations(range(d)):
        idx = 0
        for k in perm:
            idx = idx * d + k
        psi[idx] = _parity(perm) * amp
    return psi


def singlet_state(d: int) -> MultiState:
    return MultiState.from_ket(singlet_vector(d), [d] * d)


def grouped_singlet_vector(p: GroupPartition, n: int, d: int) -> np.ndarray:
    if p.n != n or p.d != d:
        raise ValueError(f"partition {p.groups} is not valid for n={n}, d={d}")
    s = singlet_vector(d)
    psi = np.ones(1, dtype=complex)
    for _ in p.groups:
        psi = np.kron(psi, s)
    flat = [x for g in p.groups for x in g]
    return permute_vector_factors(psi, [d] * n, list(np.argsort(flat)))


def grouped_singlet_state(p: GroupPartition, n: int, d: int) -> MultiState:
    return MultiState.from_ket(grouped_singlet_vector(p, n, d), [d] * n)


def reference_probe(n: int, d: int) -> MultiState:
    """Equal superposition of every singlet grouping, each tagged by an orthonormal reference ket."""
    parts = group_partitions(n, d)
    g = len(parts)
    psi = np.zeros((d ** n, g), dtype=complex)
    for i, p in enumerate(parts):
        psi[:, i] = grouped_singlet_vector(p, n, d)
    return MultiState.from_ket(psi.reshape(-1) / np.sqrt(g), [d] * n + [g])


def probe_state(probe: ProbeKind, n: int, d: int) -> MultiState:
    """Input state fed to the N uses of the process (padding applied for singlet strategies)."""
    if isinstance(probe, CoherentProbe):
        return coherent_probe(n, d)
    if isinstance(probe, ClassicalProbe):
        inputs = tuple(int(a) for a in probe.inputs)
        if len(inputs) != n or any(not 0 <= a < d for a in inputs):
            raise ValueError(f"classical inputs {inputs} invalid for n={n}, d={d}")
        idx = 0
        for a in inputs:
            idx = idx * d + a
        psi = np.zeros(d ** n, dtype=complex)
        psi[idx] = 1
        return MultiState.from_ket(psi, [d] * n)
    na = active_probes(n, d)
    if na == 0:
        raise ValueError(f"n={n} is smaller than d={d}; no singlet group fits")
    if isinstance(probe, SingletProbe):
        p = probe.partition or GroupPartition.contiguous(na, d)
        return grouped_singlet_state(p, na, d)
    if isinstance(probe, ReferenceProbe):
        return reference_probe(na, d)
    raise TypeError(f"unknown probe kind {probe!r}")


def _is_invariant_probe(probe: ProbeKind, spec: HypothesisSpec) -> bool:
    if isinstance(probe, ClassicalProbe):
        return False
    if isinstance(probe, CoherentProbe):
        return spec.dependence == "permutation"
    return True


def canonical_order(n: int, has_reference: bool) -> list[int]:
    """Factor order taking ``B1 C1 B2 C2 .. [R]`` to ``B1..BN C1..CN [R]``."""
    order = [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)]
    return order + [2 * n] if has_reference else order


def _synthesize(spec: HypothesisSpec, probe_in: MultiState, n_probes: int, param) -> MultiState:
    ch = hypothesis_channel(spec, param)
    s = probe_in
    for k in reversed(range(n_probes)):
        s = apply_channel(ch, s, [k])
    return s.permute(canonical_order(n_probes, len(probe_in.dims) > n_probes))


def output_state(spec: HypothesisSpec, probe: ProbeKind, n: int, rng: Rng | None = None) -> MultiState:
    """State of all outputs after N uses of a process from ``spec``.

    With a fixed ``spec.parameter`` the process is applied once. With an
    unknown dependence the probe must be invariant: three hidden parameters
    are drawn from ``rng`` (seed 0 if omitted), the outputs are checked to
    agree to 1e-9 in Frobenius norm, and the first is returned.

    Padding: for singlet-type probes only the first ``d * (n // d)`` uses are
    probed; the rest are ignored and do not appear in the output.
    """
    d = spec.d
    probe_in = probe_state(probe, n, d)
    n_probes = len(probe_in.dims) - (1 if isinstance(probe, ReferenceProbe) else 0)
    if spec.parameter is not None:
        return _synthesize(spec, probe_in, n_probes, spec.parameter)
    if not _is_invariant_probe(probe, spec):
        raise ValueError(f"{type(probe).__name__} is not invariant under unknown {spec.dependence} "
                         "dependence; fix spec.parameter")
    rng = Rng(0) if rng is None else rng
    outs = [_synthesize(spec, probe_in, n_probes, sample_parameter(spec, rng))
            for _ in range(INVARIANCE_SAMPLES)]
    for i in range(len(outs)):
        for j in range(i + 1, len(outs)):
            spread = frobenius_distance(outs[i], outs[j])
            if spread > INVARIANCE_TOL:
                raise ValueError(f"output depends on the hidden parameter (spread {spread:.3e})")
    return outs[0]


def output_pair(probe: ProbeKind, n: int, d: int, dependence: str = "unitary",
                rng: Rng | None = None) -> tuple[MultiState, MultiState]:
    """Outputs under H1 (cause -> B) and H2 (cause -> C) for the same probe."""
    rng = Rng(0) if rng is None else rng
    h1 = HypothesisSpec("first", d, dependence)
    return output_state(h1, probe, n, rng.fork(1)), output_state(h1.swapped(), probe, n, rng.fork(2))


def swap_b_c(state: MultiState, n: int) -> MultiState:
    """Exchange the B block and the C block of a canonically ordered output state."""
    order = list(range(n, 2 * n)) + list(range(n)) + list(range(2 * n, len(state.dims)))
    return state.permute(order)


# ----------------------------------------------------------------- classical

@dataclass(frozen=True)
class Distribution:
    """Exact distribution over outcomes ``(b_1..b_N, c_1..c_N)``."""

    d: int
    n: int
    probs: dict

    def __getitem__(self, outcome) -> Fraction:
        return self.probs.get(tuple(outcome), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.probs.values(), Fraction(0))


def effect_weights(inputs, d: int, perm=None) -> dict:
    """Probability of each effect-slot tuple ``pi(inputs)`` with ``pi`` uniform (or fixed)."""
    inputs = tuple(int(a) for a in inputs)
    if any(not 0 <= a < d for a in inputs):
        raise ValueError(f"inputs {inputs} out of range for d={d}")
    perms = [tuple(perm)] if perm is not None else list(permutations(range(d)))
    w = Fraction(1, len(perms))
    out: dict = {}
    for pi in perms:
        b = tuple(pi[a] for a in inputs)
        out[b] = out.get(b, Fraction(0)) + w
    return out


def classical_output_distribution(inputs, spec: HypothesisSpec) -> Distribution:
    """Outputs of N classical queries: effect slot ``pi(a)``, other slot uniformly random."""
    if spec.dependence != "permutation":
        raise ValueError("classical hypotheses use permutation dependence")
    inputs = tuple(int(a) for a in inputs)
    d, n = spec.d, len(inputs)
    perm = None
    if spec.parameter is not None:
        u = np.asarray(spec.parameter)
        perm = tuple(int(x) for x in (u if u.ndim == 1 else np.argmax(np.abs(u), axis=0)))
        permutation_unitary(perm)
    eff = effect_weights(inputs, d, perm)
    uniform = Fraction(1, d ** n)
    probs = {}
    for e, pe in eff.items():
        for r in product(range(d), repeat=n):
            key = e + r if spec.effect_slot == "first" else r + e
            probs[key] = pe * uniform
    return Distribution(d, n, probs)
