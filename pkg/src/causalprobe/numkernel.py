"""Dense complex linear algebra used throughout the package.

Operators are plain ``numpy`` arrays of dtype ``complex128``. Every function
here is pure: inputs are never modified in place.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

HERMITIAN_RTOL = 1e-10
PSD_FLOOR = 1e-10


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order and the matching orthonormal eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {a.shape}")
    return a


def is_hermitian(m: np.ndarray) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    if m.size == 0:
        return True
    scale = 1.0 + np.abs(m).max()
    return bool(np.abs(m - m.conj().T).max() <= HERMITIAN_RTOL * scale)


def _require_hermitian(m: np.ndarray) -> np.ndarray:
    m = as_matrix(m)
    if not is_hermitian(m):
        raise ValueError("matrix is not Hermitian within tolerance")
    return m


def kron(*ops) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    if not ops:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, (as_matrix(o) for o in ops))


def partial_trace(m, dims, keep) -> np.ndarray:
    """Trace out every factor of ``m`` not listed in ``keep``.

    Parameters
    ----------
    m : (D, D) array
        Operator on the tensor product of spaces with dimensions ``dims``.
    dims : sequence of int
        Factor dimensions, ``prod(dims) == D``.
    keep : iterable of int
        Indices of the factors to keep. The result lists them in their
        original relative order regardless of the order given here.

    Returns
    -------
    (d_keep, d_keep) array
    """
    m = as_matrix(m)
    dims = [int(x) for x in dims]
    total = int(np.prod(dims)) if dims else 1
    if m.shape != (total, total):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    keep = sorted(set(int(k) for k in keep))
    for k in keep:
        if not 0 <= k < len(dims):
            raise ValueError(f"keep index {k} out of range for {len(dims)} factors")
    n = len(dims)
    t = m.reshape(dims + dims)
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out = [i for i in keep] + [i + n for i in keep]
    res = np.einsum(t, row + col, out)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return res.reshape(dk, dk)


def permute_factors(m, dims, order) -> np.ndarray:
    """Reorder the tensor factors of an operator: new factor ``j`` is old factor ``order[j]``."""
    m = as_matrix(m)
    dims = list(dims)
    n = len(dims)
    order = list(order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"{order} is not a permutation of {n} factors")
    t = m.reshape(dims + dims).transpose(order + [n + k for k in order])
    return t.reshape(m.shape)


def permute_vector_factors(v, dims, order) -> np.ndarray:
    """Same as :func:`permute_factors` for kets; extra trailing axes (columns) are carried along."""
    v = np.asarray(v, dtype=complex)
    dims = list(dims)
    n = len(dims)
    tail = v.shape[1:]
    t = v.reshape(dims + list(tail)).transpose(list(order) + list(range(n, n + len(tail))))
    return t.reshape(v.shape)


def hermitian_eig(h) -> Spectrum:
    h = _require_hermitian(h)
    h = (h + h.conj().T) / 2
    w, v = np.linalg.eigh(h)
    return Spectrum(w[::-1].copy(), v[:, ::-1].copy())


def trace_norm(g) -> float:
    """Sum of absolute eigenvalues of a Hermitian operator."""
    g = _require_hermitian(g)
    w = np.linalg.eigvalsh((g + g.conj().T) / 2)
    return float(np.abs(w).sum())


def low_rank_trace_norm(weights1, vectors1, weights2, vectors2) -> float:
    """Trace norm of ``sum_i w1_i |v1_i><v1_i| - sum_j w2_j |v2_j><v2_j|``.

    Vectors are the columns of ``vectors1`` / ``vectors2`` and need not be
    orthogonal or normalized. The difference is projected onto an orthonormal
    basis of the joint column span, so the cost depends on the ranks and not
    on the ambient dimension (beyond one thin SVD).
    """
    w1 = np.asarray(weights1, dtype=float).ravel()
    w2 = np.asarray(weights2, dtype=float).ravel()
    v1 = np.asarray(vectors1, dtype=complex)
    v2 = np.asarray(vectors2, dtype=complex)
    if v1.ndim == 1:
        v1 = v1[:, None]
    if v2.ndim == 1:
        v2 = v2[:, None]
    if (w1 < 0).any() or (w2 < 0).any():
        raise ValueError("weights must be non-negative")
    if v1.shape[1] != w1.size or v2.shape[1] != w2.size:
        raise ValueError("number of weights and vectors differ")
    if v1.shape[0] != v2.shape[0]:
        raise ValueError(f"ambient dimensions differ: {v1.shape[0]} vs {v2.shape[0]}")
    joint = np.hstack([v1, v2])
    if joint.shape[1] == 0:
        return 0.0
    u, s, _ = np.linalg.svd(joint, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return 0.0
    q = u[:, s > s[0] * joint.shape[1] * np.finfo(float).eps]
    a = q.conj().T @ v1
    b = q.conj().T @ v2
    diff = (a * w1) @ a.conj().T - (b * w2) @ b.conj().T
    diff = (diff + diff.conj().T) / 2
    return float(np.abs(np.linalg.eigvalsh(diff)).sum())


def psd_factor(m) -> np.ndarray:
    """``A`` with ``A A^dag = m`` for PSD ``m``.

    Eigenvalues in [-1e-10, 0) are clamped to zero, and so are positive ones
    at rounding-noise level (below ``dim * eps * max eigenvalue``), whose
    square roots would otherwise leak into fidelities.
    """
    spec = hermitian_eig(m)
    w = spec.eigenvalues
    if w.size and w.min() < -PSD_FLOOR:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w.min():.3e})")
    cut = max(w.max(initial=0.0), 0.0) * w.size * np.finfo(float).eps
    keep = w > cut
    return spec.eigenvectors[:, keep] * np.sqrt(w[keep])


def psd_sqrt(m) -> np.ndarray:
    a = psd_factor(m)
    return a @ a.conj().T if a.shape[1] else np.zeros_like(as_matrix(m))


def state_fidelity(rho, sigma) -> float:
    """Squared Uhlmann fidelity ``(tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``.

    Evaluated as the squared nuclear norm of ``A^dag B`` where ``rho = A A^dag``
    and ``sigma = B B^dag``.
    """
    rho = as_matrix(rho)
    sigma = as_matrix(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    a, b = psd_factor(rho), psd_factor(sigma)
    if not a.shape[1] or not b.shape[1]:
        return 0.0
    s = np.linalg.svd(a.conj().T @ b, compute_uv=False)
    return float(s.sum() ** 2)
