"""Minimum-error discrimination, quantum and classical."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import factorial, sqrt
from typing import Literal

import numpy as np

from .numkernel import hermitian_eig, low_rank_trace_norm, trace_norm
from .quantum import MultiState, Rng
from .strategies import effect_weights

LOW_RANK_MAX_RANK = 256
DENSE_MAX_DIM = 1024
SRM_CUTOFF = 1e-12
MC_CHUNK = 1 << 18

Method = Literal["helstrom", "srm", "tv_enumeration", "monte_carlo"]


@dataclass(frozen=True)
class DiscriminationResult:
    error_probability: float | Fraction
    method: Method
    diagnostics: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.error_probability)


def helstrom_error(rho1: MultiState, rho2: MultiState, prior1: float = 0.5,
                   path: Literal["auto", "dense", "low_rank"] = "auto") -> DiscriminationResult:
    """Optimal two-state error ``(1 - ||p1 rho1 - p2 rho2||_1) / 2``.

    ``path='auto'`` switches to the low-rank trace norm when both states are
    ensembles of rank <= 256 living in more than 1024 dimensions.
    """
    if rho1.dims != rho2.dims:
        raise ValueError(f"dims differ: {rho1.dims} vs {rho2.dims}")
    if not 0.0 <= prior1 <= 1.0:
        raise ValueError("prior1 must lie in [0, 1]")
    p1, p2 = prior1, 1.0 - prior1
    if path == "auto":
        low = (rho1.ensemble is not None and rho2.ensemble is not None
               and max(rho1.rank_bound, rho2.rank_bound) <= LOW_RANK_MAX_RANK
               and rho1.dim > DENSE_MAX_DIM)
        path = "low_rank" if low else "dense"
    if path == "low_rank":
        if rho1.ensemble is None or rho2.ensemble is None:
            raise ValueError("low-rank path needs both states in ensemble form")
        (w1, v1), (w2, v2) = rho1.ensemble, rho2.ensemble
        tn = low_rank_trace_norm(p1 * w1, v1, p2 * w2, v2)
    elif path == "dense":
        tn = trace_norm(p1 * rho1.rho - p2 * rho2.rho)
    else:
        raise ValueError(f"unknown path {path!r}")
    err = min(max((1.0 - tn) / 2.0, 0.0), 1.0)
    return DiscriminationResult(err, "helstrom", {"trace_norm": tn, "path": path})


def srm_error(states: list[MultiState], priors=None) -> DiscriminationResult:
    """Error of the square-root ("pretty good") measurement; an upper bound on the optimum."""
    k = len(states)
    if k < 2:
        raise ValueError("need at least two states")
    if any(s.dims != states[0].dims for s in states):
        raise ValueError("states act on different spaces")
    priors = np.full(k, 1.0 / k) if priors is None else np.asarray(priors, dtype=float)
    if priors.size != k or abs(priors.sum() - 1.0) > 1e-12 or (priors < 0).any():
        raise ValueError("priors must be a probability vector with one entry per state")
    weighted = [p * s.rho for p, s in zip(priors, states)]
    spec = hermitian_eig(sum(weighted))
    w, v = spec.eigenvalues, spec.eigenvectors
    keep = w > SRM_CUTOFF * w.max()
    inv_sqrt = (v[:, keep] / np.sqrt(w[keep])) @ v[:, keep].conj().T
    success = 0.0
    for pr in weighted:
        e = inv_sqrt @ pr @ inv_sqrt
        success += float(np.real(np.vdot(e.conj().T, pr)))
    return DiscriminationResult(min(max(1.0 - success, 0.0), 1.0), "srm", {"success": success})


# ----------------------------------------------------------------- classical

def check_classical_feasible(d: int, n: int) -> None:
    """Exhaustive classical computations are limited to d <= 3, n <= 4."""
    if d < 2 or n < 1:
        raise ValueError(f"invalid (d, n) = ({d}, {n})")
    if d > 3 or n > 4:
        raise ValueError(f"(d, n) = ({d}, {n}) exceeds the enumeration guard d <= 3, n <= 4")


def classical_error_for_inputs(inputs, d: int) -> Fraction:
    """Exact optimal error for fixed query inputs: ``(1 - TV(P1, P2)) / 2``."""
    inputs = tuple(inputs)
    n = len(inputs)
    f = effect_weights(inputs, d)
    tuples = list(product(range(d), repeat=n))
    zero = Fraction(0)
    diff = sum((abs(f.get(b, zero) - f.get(c, zero)) for b in tuples for c in tuples), zero)
    tv = diff / (2 * d ** n)
    return (1 - tv) / 2


def input_patterns(n: int, d: int):
    """One input tuple per composition of n into at most d positive parts (value j repeated k_j times)."""
    def comps(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(1, total - parts + 2):
            for rest in comps(total - first, parts - 1):
                yield (first,) + rest

    for parts in range(1, min(n, d) + 1):
        for c in comps(n, parts):
            yield tuple(v for v, k in enumerate(c) for _ in range(k))


def classical_optimum(d: int, n: int) -> DiscriminationResult:
    """Best parallel classical strategy, searched over input multiplicity patterns (exact)."""
    check_classical_feasible(d, n)
    best, best_inputs = None, None
    for inputs in input_patterns(n, d):
        e = classical_error_for_inputs(inputs, d)
        if best is None or e < best:
            best, best_inputs = e, inputs
    return DiscriminationResult(best, "tv_enumeration", {"inputs": best_inputs})


def monte_carlo_classical(d: int, n: int, inputs, trials: int, rng: Rng) -> DiscriminationResult:
    """Simulate the classical test and score the exact likelihood-ratio decision.

    Trials run in chunks; chunk ``i`` draws from ``rng.fork(i)`` so the
    estimate depends only on the seed and the trial count.
    """
    check_classical_feasible(d, n)
    inputs = np.asarray(inputs, dtype=int)
    if inputs.shape != (n,) or (inputs < 0).any() or (inputs >= d).any():
        raise ValueError(f"inputs {inputs.tolist()} invalid for n={n}, d={d}")
    if trials < 1:
        raise ValueError("trials must be positive")
    perms = np.array(list(permutations(range(d))))
    # likelihood of an effect tuple, as an integer count of consistent permutations
    weight = np.zeros(d ** n, dtype=np.int64)
    for b, w in effect_weights(tuple(inputs), d).items():
        weight[_encode(np.array(b)[None, :], d)[0]] = int(w * factorial(d))
    errors = 0
    done = 0
    chunk_id = 0
    while done < trials:
        m = min(MC_CHUNK, trials - done)
        g = rng.fork(chunk_id).gen
        hyp = g.integers(0, 2, m)
        effect = perms[g.integers(0, len(perms), m)][:, inputs]
        noise = g.integers(0, d, (m, n))
        first = hyp[:, None] == 0
        b = np.where(first, effect, noise)
        c = np.where(first, noise, effect)
        guess = (weight[_encode(c, d)] > weight[_encode(b, d)]).astype(int)
        errors += int(np.count_nonzero(guess != hyp))
        done += m
        chunk_id += 1
    p_hat = errors / trials
    se = sqrt(p_hat * (1 - p_hat) / trials)
    return DiscriminationResult(p_hat, "monte_carlo", {"trials": trials, "std_err": se, "errors": errors})


def _encode(rows: np.ndarray, d: int) -> np.ndarray:
    code = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(rows.shape[1]):
        code = code * d + rows[:, j]
    return code
