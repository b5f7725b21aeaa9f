"""Closed-form error probabilities, decay rates and lower bounds.

Each probability ``p_*`` has a ``log2_p_*`` twin that stays finite far past
float underflow; decay-rate fits work on the log2 values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .combinat import multiplicity
from .numkernel import state_fidelity
from .quantum import Channel, MultiState, Rng, apply_channel, random_ket

FIDELITY_SKIP = 1e-10


def _from_log2(x: float) -> float:
    return 2.0 ** x if x > -1074 else 0.0


def _check_nd(n: int, d: int) -> None:
    if n < 1 or d < 2:
        raise ValueError(f"need n >= 1 and d >= 2, got n={n}, d={d}")


# ------------------------------------------------------------ two hypotheses

def log2_p_classical(n: int, d: int) -> float:
    _check_nd(n, d)
    return -1.0 - (n - 1) * math.log2(d)


def p_classical(n: int, d: int) -> float:
    """Optimal parallel classical error ``1 / (2 d^(n-1))``."""
    _check_nd(n, d)
    if (n - 1) * math.log2(d) < 1000:
        return 1.0 / (2 * d ** (n - 1))
    return _from_log2(log2_p_classical(n, d))


def log2_p_coherent(n: int, d: int) -> float:
    _check_nd(n, d)
    return -1.0 - n * math.log2(d)


def p_coherent(n: int, d: int) -> float:
    """Error of the uniform-superposition probe against permutations, ``1 / (2 d^n)``."""
    _check_nd(n, d)
    if n * math.log2(d) < 1000:
        return 1.0 / (2 * d ** n)
    return _from_log2(log2_p_coherent(n, d))


def padded_n(n: int, d: int) -> int:
    return d * (n // d)


def log2_p_singlet(n: int, d: int) -> float:
    if n < d:
        raise ValueError(f"singlet strategy needs n >= d (n={n}, d={d})")
    return log2_p_coherent(padded_n(n, d), d)


def p_singlet(n: int, d: int) -> float:
    """Grouped-singlet strategy; only ``d * floor(n/d)`` probes are used."""
    if n < d:
        raise ValueError(f"singlet strategy needs n >= d (n={n}, d={d})")
    return p_coherent(padded_n(n, d), d)


def _check_multiple(n: int, d: int) -> None:
    _check_nd(n, d)
    if n % d:
        raise ValueError(f"reference strategy needs d | n (n={n}, d={d})")


def log2_p_reference(n: int, d: int, m: int | None = None) -> float:
    _check_multiple(n, d)
    m = multiplicity(n, d) if m is None else m
    lm = math.log2(m)
    x = 2.0 ** (-2 * lm) if lm < 500 else 0.0
    # m/(2 d^n) * (1 - sqrt(1 - 1/m^2)) rewritten as (1/m) / (2 d^n (1 + sqrt(1 - 1/m^2)))
    return -lm - 1.0 - n * math.log2(d) - math.log2(1.0 + math.sqrt(1.0 - x))


def p_reference(n: int, d: int, m: int | None = None) -> float:
    """Reference-entangled strategy, ``m/(2 d^n) (1 - sqrt(1 - 1/m^2))``.

    ``m`` defaults to the trivial-irrep multiplicity; passing it explicitly is
    only useful for fault injection.
    """
    _check_multiple(n, d)
    m = multiplicity(n, d) if m is None else m
    if m < 1e150 and n * math.log2(d) < 1000:
        x = 1.0 / (float(m) * m)
        return (m / (2.0 * d ** n)) * (x / (1.0 + math.sqrt(1.0 - x)))
    return _from_log2(log2_p_reference(n, d, m))


def log2_p_reference_asymptotic(n: int, d: int) -> float:
    _check_multiple(n, d)
    return -2.0 - math.log2(multiplicity(n, d)) - n * math.log2(d)


def p_reference_asymptotic(n: int, d: int) -> float:
    """Large-n form ``1 / (4 m d^n)``."""
    return _from_log2(log2_p_reference_asymptotic(n, d))


def p_reference_padded(n: int, d: int) -> float:
    """Reference strategy on the first ``d * floor(n/d)`` probes; a blind guess (1/2) if none fit."""
    na = padded_n(n, d)
    return 0.5 if na == 0 else p_reference(na, d)


def log2_seq_lower_bound(n: int, d: int) -> float:
    _check_nd(n, d)
    return -2.0 - 2 * n * math.log2(d)


def seq_lower_bound(n: int, d: int) -> float:
    """``1 / (4 d^(2n))``, valid for every sequential strategy."""
    return _from_log2(log2_seq_lower_bound(n, d))


def log2_indefinite_lower_bound(n: int, d: int) -> float:
    _check_nd(n, d)
    lx = -2 * n * math.log2(d)
    x = 2.0 ** lx
    return lx - 1.0 - math.log2(1.0 + math.sqrt(1.0 - x))


def indefinite_lower_bound(n: int, d: int) -> float:
    """``(1 - sqrt(1 - d^(-2n))) / 2``, computed as ``x / (2 (1 + sqrt(1 - x)))``."""
    _check_nd(n, d)
    x = 2.0 ** (-2 * n * math.log2(d))
    if x == 0.0:
        return _from_log2(log2_indefinite_lower_bound(n, d))
    return x / (2.0 * (1.0 + math.sqrt(1.0 - x)))


# ------------------------------------------------------------ other problems

def p_multi_k(n: int, d: int, k: int, side: Literal["classical", "quantum"]) -> float:
    """Leading term of the k-candidate error; corrections are O(d^(-2n))."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if side == "classical":
        return (k - 1) * p_classical(n, d)
    if side == "quantum":
        return (k - 1) * p_coherent(n, d)
    raise ValueError(f"unknown side {side!r}")


def _log_base(m: int, d: int) -> float:
    q = round(math.log(m) / math.log(d))
    if d ** q == m:
        return float(q)
    return math.log(m) / math.log(d)


def cause_id(n: int | None, d: int, m: int,
             mode: Literal["error", "classical_queries", "quantum_queries"],
             eps: float = 0.0) -> float | int:
    """Identifying which of m candidate variables is the cause.

    ``error``: ``(m-1) / (d^(2n) + m - 1)`` for a known unitary.
    ``classical_queries``: ``ceil(log_d m)``.
    ``quantum_queries``: ``ceil((1 + eps) log_d(m) / 2)``.
    """
    if m < 2:
        raise ValueError("need at least two candidates")
    if mode == "error":
        if n is None or n < 0:
            raise ValueError("error mode needs n >= 0")
        return (m - 1) / (d ** (2 * n) + m - 1)
    if mode == "classical_queries":
        q = 0
        while d ** q < m:
            q += 1
        return q
    if mode == "quantum_queries":
        if eps < 0:
            raise ValueError("eps must be non-negative")
        return math.ceil((1 + eps) * _log_base(m, d) / 2)
    raise ValueError(f"unknown mode {mode!r}")


# --------------------------------------------------------------- decay rates

@dataclass(frozen=True)
class RatePoint:
    n: int
    d: int
    log2_p: float
    strategy: str = ""

    @classmethod
    def from_probability(cls, n: int, d: int, p: float, strategy: str = "") -> "RatePoint":
        return cls(n, d, math.log2(p), strategy)

    @property
    def p(self) -> float:
        return _from_log2(self.log2_p)


def decay_rate_fit(points: list[RatePoint]) -> float:
    """Least-squares slope of ``-log2 p`` against n."""
    if len(points) < 2:
        raise ValueError("need at least two points")
    n = np.array([p.n for p in points], dtype=float)
    y = -np.array([p.log2_p for p in points], dtype=float)
    if not np.isfinite(y).all():
        raise ValueError("log2 values must be finite")
    nc = n - n.mean()
    if not (nc ** 2).sum():
        raise ValueError("points need at least two distinct n")
    return float((nc * (y - y.mean())).sum() / (nc ** 2).sum())


_RATE_FACTORS = {
    "classical": 1, "coherent": 1, "singlet": 1, "link_classical": 1,
    "reference": 2, "quantum_limit": 2, "seq_bound": 2, "indefinite_bound": 2, "link_quantum": 2,
}


def decay_rate_closed(kind: str, d: int) -> float:
    """Asymptotic rate: ``log2 d`` for classical-type kinds, ``2 log2 d`` for reference-type ones."""
    if kind not in _RATE_FACTORS:
        raise ValueError(f"unknown kind {kind!r}; choose from {sorted(_RATE_FACTORS)}")
    return _RATE_FACTORS[kind] * math.log2(d)


def rate_points(kind: str, d: int, ns) -> list[RatePoint]:
    fn = {"classical": log2_p_classical, "coherent": log2_p_coherent, "singlet": log2_p_singlet,
          "reference": log2_p_reference, "seq_bound": log2_seq_lower_bound,
          "indefinite_bound": log2_indefinite_lower_bound}[kind]
    return [RatePoint(n, d, fn(n, d), kind) for n in ns]


# ------------------------------------------------------- fidelity divergence

def _extended_output(c: Channel, psi: np.ndarray, ref_dim: int) -> np.ndarray:
    s = MultiState.from_ket(psi, c.in_dims + (ref_dim,))
    return apply_channel(c, s, range(len(c.in_dims))).rho


def fidelity_divergence_estimate(c1: Channel, c2: Channel, ref_dim: int, samples: int,
                                 rng: Rng) -> float:
    """Running minimum of ``F(C1(rho1), C2(rho2)) / F(rho1, rho2)`` over sampled pure inputs.

    The inputs live on the channel input extended by a reference of dimension
    ``ref_dim``. The pair ``rho1 = rho2 = |0><0|`` is always included, and
    each sample contributes a random pair and a random identical pair. Being
    a minimum over a subset, the result upper-bounds the true divergence.
    """
    if c1.in_dims != c2.in_dims or c1.out_dims != c2.out_dims:
        raise ValueError("channels must share input and output dimensions")
    if samples < 1 or ref_dim < 1:
        raise ValueError("samples and ref_dim must be positive")
    dim = c1.d_in * ref_dim
    e0 = np.zeros(dim, dtype=complex)
    e0[0] = 1
    pairs = [(e0, e0)]
    for _ in range(samples):
        a, b = random_ket(dim, rng), random_ket(dim, rng)
        pairs += [(a, b), (a, a)]
    best = math.inf
    for a, b in pairs:
        f_in = abs(np.vdot(a, b)) ** 2
        if f_in <= FIDELITY_SKIP:
            continue
        f_out = state_fidelity(_extended_output(c1, a, ref_dim), _extended_output(c2, b, ref_dim))
        best = min(best, f_out / f_in)
    if best is math.inf:
        raise ValueError("every sampled pair had vanishing input fidelity")
    return float(best)


def min_interrogations(log2_p, d: int, threshold: float, n_max: int = 100_000) -> tuple[int, float]:
    """Smallest n with ``p(n) <= threshold`` for a log2-domain error function; returns ``(n, p(n))``."""
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    target = math.log2(threshold)
    for n in range(1, n_max + 1):
        lp = log2_p(n, d)
        if lp <= target:
            return n, _from_log2(lp)
    raise ValueError(f"threshold {threshold} not reached for n <= {n_max}")


def log2_p_reference_padded(n: int, d: int) -> float:
    na = padded_n(n, d)
    return -1.0 if na == 0 else log2_p_reference(na, d)
