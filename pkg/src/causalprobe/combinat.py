"""Groupings of probes into singlets and the SU(d)-invariant multiplicity."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import factorial

import numpy as np

from .numkernel import hermitian_eig

INVARIANT_DIM_LIMIT = 4096


def _check(n: int, d: int) -> None:
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if n < 1 or n % d:
        raise ValueError(f"n={n} is not a positive multiple of d={d}")


@dataclass(frozen=True)
class GroupPartition:
    """Unordered division of probes ``0..n-1`` into groups of equal size.

    Stored canonically: elements sorted inside each group, groups sorted by
    their smallest element.
    """

    groups: tuple

    def __post_init__(self):
        groups = tuple(sorted((tuple(sorted(int(x) for x in g)) for g in self.groups),
                              key=lambda g: g[0] if g else -1))
        object.__setattr__(self, "groups", groups)
        if not groups or not groups[0]:
            raise ValueError("empty partition")
        size = len(groups[0])
        if any(len(g) != size for g in groups):
            raise ValueError("groups have different sizes")
        flat = sorted(x for g in groups for x in g)
        if flat != list(range(len(flat))):
            raise ValueError(f"groups {groups} do not cover 0..{len(flat) - 1} exactly once")

    @property
    def n(self) -> int:
        return sum(len(g) for g in self.groups)

    @property
    def d(self) -> int:
        return len(self.groups[0])

    @classmethod
    def contiguous(cls, n: int, d: int) -> "GroupPartition":
        _check(n, d)
        return cls(tuple(tuple(range(i, i + d)) for i in range(0, n, d)))


def partition_count(n: int, d: int) -> int:
    """``n! / ((d!)^(n/d) (n/d)!)``."""
    _check(n, d)
    t = n // d
    return factorial(n) // (factorial(d) ** t * factorial(t))


def group_partitions(n: int, d: int) -> list[GroupPartition]:
    _check(n, d)

    def rec(remaining):
        if not remaining:
            yield ()
            return
        first, rest = remaining[0], remaining[1:]
        for mates in combinations(rest, d - 1):
            left = tuple(x for x in rest if x not in mates)
            for tail in rec(left):
                yield ((first,) + mates,) + tail

    return [GroupPartition(g) for g in rec(tuple(range(n)))]


def multiplicity(n: int, d: int) -> int:
    """Multiplicity of the trivial representation of SU(d) in ``U -> U^(x)n``.

    Equal to the number of standard Young tableaux of the d x (n/d)
    rectangle, evaluated with the hook length formula in exact integers:
    ``n! * prod_i (d-i)! / (n/d + d - i)!``.
    """
    _check(n, d)
    t = n // d
    num = factorial(n)
    den = 1
    for i in range(1, d + 1):
        num *= factorial(d - i)
        den *= factorial(t + d - i)
    q, r = divmod(num, den)
    assert r == 0, "hook formula must give an integer"
    return q


def su_generators(d: int) -> list[np.ndarray]:
    """Generalized Gell-Mann matrices: a traceless Hermitian basis of su(d)."""
    gens = []
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=complex)
            s[j, k] = s[k, j] = 1
            a = np.zeros((d, d), dtype=complex)
            a[j, k], a[k, j] = -1j, 1j
            gens += [s, a]
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1
        diag[l] = -l
        gens.append(np.diag(diag * np.sqrt(2 / (l * (l + 1)))).astype(complex))
    return gens


def collective(g: np.ndarray, n: int) -> np.ndarray:
    """``sum_k I (x) ... (x) g_k (x) ... (x) I`` on n factors."""
    d = g.shape[0]
    total = np.zeros((d ** n, d ** n), dtype=complex)
    for k in range(n):
        total += np.kron(np.kron(np.eye(d ** k), g), np.eye(d ** (n - k - 1)))
    return total


def invariant_subspace_dim(n: int, d: int) -> int:
    """Dimension of the common null space of all collective su(d) generators (dense)."""
    if d < 2 or n < 1:
        raise ValueError("need d >= 2 and n >= 1")
    if d ** n > INVARIANT_DIM_LIMIT:
        raise ValueError(f"d**n = {d ** n} exceeds the dense limit {INVARIANT_DIM_LIMIT}")
    casimir = np.zeros((d ** n, d ** n), dtype=complex)
    for g in su_generators(d):
        j = collective(g, n)
        casimir += j.conj().T @ j
    w = hermitian_eig(casimir).eigenvalues
    return int(np.sum(np.abs(w) <= 1e-9))


@lru_cache(maxsize=None)
def spin_paths(n: int, twice_spin: int = 0) -> int:
    """Number of ways n spin-1/2 particles couple to total spin ``twice_spin / 2``.

    Counts walks j -> j +- 1/2 that never go negative; for ``twice_spin = 0``
    this is the SU(2) singlet multiplicity.
    """
    counts = {0: 1}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for j2, c in counts.items():
            nxt[j2 + 1] = nxt.get(j2 + 1, 0) + c
            if j2 > 0:
                nxt[j2 - 1] = nxt.get(j2 - 1, 0) + c
        counts = nxt
    return counts.get(twice_spin, 0)
