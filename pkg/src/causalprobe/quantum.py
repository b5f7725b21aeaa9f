"""States, channels and the causal-hypothesis processes.

A :class:`MultiState` is a density operator on an ordered list of tensor
factors. It is held either densely or as a weighted ensemble of kets
(``rho = sum_i w_i |v_i><v_i|``); the ensemble form is what makes the
low-rank trace norm usable on very large output spaces.

A :class:`Channel` is a Kraus list plus input/output factor dimensions.
Channel equality is always decided on Choi matrices (Frobenius distance).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .numkernel import (
    PSD_FLOOR,
    as_matrix,
    is_hermitian,
    partial_trace,
    permute_factors,
    permute_vector_factors,
)

CPTP_TOL = 1e-9
TP_TOL = 1e-10
STATE_TOL = 1e-10

Reversibility = Literal["reversible", "faithful_only", "neither"]


class Rng:
    """Seeded, counter-based (Philox) random source.

    ``fork(k)`` derives an independent stream from the same seed, so parallel
    workers can be handed reproducible streams without sharing state.
    """

    def __init__(self, seed: int, stream: Sequence[int] = ()):
        self.seed = int(seed) & 0xFFFF_FFFF_FFFF_FFFF
        self.stream = tuple(int(s) for s in stream)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.stream)
        self.gen = np.random.Generator(np.random.Philox(ss))

    def fork(self, stream_id: int) -> "Rng":
        return Rng(self.seed, self.stream + (int(stream_id),))

    def __repr__(self):
        return f"Rng(seed={self.seed}, stream={self.stream})"


def _prod(dims) -> int:
    return int(np.prod(dims)) if len(dims) else 1


class MultiState:
    """Density operator tagged with its subsystem dimensions."""

    def __init__(self, rho=None, dims=None, *, ensemble=None, validate: bool = True):
        if dims is None:
            raise ValueError("dims are required")
        self.dims = tuple(int(x) for x in dims)
        if any(x < 1 for x in self.dims):
            raise ValueError(f"invalid dims {self.dims}")
        if (rho is None) == (ensemble is None):
            raise ValueError("give exactly one of rho or ensemble")
        self._rho = None
        self.ensemble = None
        if rho is not None:
            self._rho = as_matrix(rho)
            if self._rho.shape != (self.dim, self.dim):
                raise ValueError(f"rho shape {self._rho.shape} does not match dims {self.dims}")
        else:
            w, v = ensemble
            w = np.asarray(w, dtype=float).ravel()
            v = np.asarray(v, dtype=complex)
            if v.ndim == 1:
                v = v[:, None]
            if v.shape != (self.dim, w.size):
                raise ValueError(f"ensemble shape {v.shape} does not match dims {self.dims}")
            if (w < 0).any():
                raise ValueError("ensemble weights must be non-negative")
            self.ensemble = (w, v)
        if validate:
            self._validate()

    @classmethod
    def from_ket(cls, psi, dims) -> "MultiState":
        return cls(dims=dims, ensemble=(np.ones(1), np.asarray(psi, dtype=complex).ravel()))

    @property
    def dim(self) -> int:
        return _prod(self.dims)

    @property
    def rho(self) -> np.ndarray:
        if self._rho is None:
            w, v = self.ensemble
            self._rho = (v * w) @ v.conj().T
        return self._rho

    @property
    def rank_bound(self) -> int:
        return self.ensemble[0].size if self.ensemble is not None else self.dim

    def trace(self) -> float:
        if self.ensemble is not None:
            w, v = self.ensemble
            return float(np.sum(w * np.sum(np.abs(v) ** 2, axis=0)))
        return float(np.trace(self._rho).real)

    def _validate(self):
        if abs(self.trace() - 1.0) > STATE_TOL:
            raise ValueError(f"state trace {self.trace()!r} differs from 1")
        if self._rho is not None:
            if not is_hermitian(self._rho):
                raise ValueError("state is not Hermitian")
            lo = np.linalg.eigvalsh((self._rho + self._rho.conj().T) / 2).min()
            if lo < -STATE_TOL:
                raise ValueError(f"state is not PSD (min eigenvalue {lo:.3e})")

    def permute(self, order) -> "MultiState":
        """New factor ``j`` is old factor ``order[j]``."""
        dims = [self.dims[k] for k in order]
        if self.ensemble is not None:
            w, v = self.ensemble
            return MultiState(dims=dims, ensemble=(w, permute_vector_factors(v, self.dims, order)),
                              validate=False)
        return MultiState(permute_factors(self._rho, self.dims, order), dims, validate=False)

    def reduced(self, keep) -> np.ndarray:
        return partial_trace(self.rho, self.dims, keep)

    def purity(self) -> float:
        return frobenius_inner(self, self)

    def __repr__(self):
        form = f"ensemble rank<={self.rank_bound}" if self.ensemble is not None else "dense"
        return f"MultiState(dims={self.dims}, {form})"


def frobenius_inner(a: MultiState, b: MultiState) -> float:
    """``tr(a b)`` computed without forming dense matrices when both are ensembles."""
    if a.dims != b.dims:
        raise ValueError("dims differ")
    if a.ensemble is not None and b.ensemble is not None:
        wa, va = a.ensemble
        wb, vb = b.ensemble
        g = np.abs(va.conj().T @ vb) ** 2
        return float(wa @ g @ wb)
    return float(np.real(np.vdot(a.rho.conj().T, b.rho)))


def frobenius_distance(a: MultiState, b: MultiState) -> float:
    """``||a - b||_F``; ensembles are compared inside their joint span to avoid cancellation."""
    if a.dims != b.dims:
        raise ValueError("dims differ")
    if a.ensemble is None or b.ensemble is None:
        return float(np.linalg.norm(a.rho - b.rho))
    (wa, va), (wb, vb) = a.ensemble, b.ensemble
    q, _ = np.linalg.qr(np.hstack([va, vb]))
    pa, pb = q.conj().T @ va, q.conj().T @ vb
    return float(np.linalg.norm((pa * wa) @ pa.conj().T - (pb * wb) @ pb.conj().T))


@dataclass(frozen=True)
class Channel:
    """CPTP map given by Kraus operators ``K: prod(in_dims) -> prod(out_dims)``."""

    kraus: tuple
    in_dims: tuple
    out_dims: tuple
    label: str = field(default="", compare=False)

    def __post_init__(self):
        kraus = tuple(as_matrix(k) for k in self.kraus)
        object.__setattr__(self, "kraus", kraus)
        object.__setattr__(self, "in_dims", tuple(int(x) for x in self.in_dims))
        object.__setattr__(self, "out_dims", tuple(int(x) for x in self.out_dims))
        if not kraus:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = (self.d_out, self.d_in)
        for k in kraus:
            if k.shape != shape:
                raise ValueError(f"Kraus operator shape {k.shape}, expected {shape}")
        tp = sum(k.conj().T @ k for k in kraus)
        if np.abs(tp - np.eye(self.d_in)).max() > TP_TOL:
            raise ValueError("Kraus operators are not trace preserving")

    @property
    def d_in(self) -> int:
        return _prod(self.in_dims)

    @property
    def d_out(self) -> int:
        return _prod(self.out_dims)

    def __call__(self, x) -> np.ndarray:
        """Apply to a (not necessarily positive) operator on the full input space."""
        x = as_matrix(x)
        return sum(k @ x @ k.conj().T for k in self.kraus)


# ---------------------------------------------------------------- channel algebra

def compose(second: Channel, first: Channel) -> Channel:
    """``second o first``."""
    if first.d_out != second.d_in:
        raise ValueError("dimension mismatch in composition")
    kraus = [b @ a for b in second.kraus for a in first.kraus]
    return Channel(kraus, first.in_dims, second.out_dims)


def tensor(*channels: Channel) -> Channel:
    kraus = [np.ones((1, 1), dtype=complex)]
    in_dims, out_dims = (), ()
    for c in channels:
        kraus = [np.kron(a, b) for a in kraus for b in c.kraus]
        in_dims += c.in_dims
        out_dims += c.out_dims
    return Channel(kraus, in_dims, out_dims)


def identity_channel(d: int) -> Channel:
    return Channel([np.eye(d)], (d,), (d,), label="identity")


def unitary_channel(u) -> Channel:
    u = as_matrix(u)
    check_unitary(u)
    return Channel([u], (u.shape[1],), (u.shape[0],), label="unitary")


def replacer_channel(sigma, d_in: int) -> Channel:
    """``rho -> tr(rho) sigma``."""
    sigma = as_matrix(sigma)
    w, v = np.linalg.eigh((sigma + sigma.conj().T) / 2)
    kraus = []
    for lam, vec in zip(w, v.T):
        if lam > 1e-15:
            for j in range(d_in):
                k = np.zeros((sigma.shape[0], d_in), dtype=complex)
                k[:, j] = np.sqrt(lam) * vec
                kraus.append(k)
    return Channel(kraus, (d_in,), (sigma.shape[0],), label="replacer")


def depolarizing_channel(d: int, p: float = 1.0) -> Channel:
    """``rho -> (1-p) rho + p tr(rho) I/d``; ``p = 1`` is completely depolarizing."""
    kraus = [np.sqrt(1 - p) * np.eye(d)] if p < 1 else []
    for i in range(d):
        for j in range(d):
            k = np.zeros((d, d), dtype=complex)
            k[i, j] = np.sqrt(p / d)
            kraus.append(k)
    return Channel(kraus, (d,), (d,), label="depolarizing")


def swap_channel(d: int) -> Channel:
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[j * d + i, i * d + j] = 1
    return Channel([s], (d, d), (d, d), label="swap")


# ------------------------------------------------------------------ Choi & tests

def choi_from_kraus(kraus) -> np.ndarray:
    """Unnormalized Choi matrix ``sum_ij |i><j| (x) C(|i><j|)``, input factor first."""
    kraus = [as_matrix(k) for k in kraus]
    vecs = np.stack([k.T.reshape(-1) for k in kraus], axis=1)
    return vecs @ vecs.conj().T


def choi_of(c: Channel) -> np.ndarray:
    return choi_from_kraus(c.kraus)


def is_cptp(m, in_dim: int, out_dim: int, tol: float = CPTP_TOL) -> bool:
    m = np.asarray(m, dtype=complex)
    if m.shape != (in_dim * out_dim,) * 2 or not is_hermitian(m):
        return False
    if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -tol:
        return False
    marginal = partial_trace(m, [in_dim, out_dim], [0])
    return bool(np.abs(marginal - np.eye(in_dim)).max() <= tol)


def channel_distance(a: Channel, b: Channel) -> float:
    if (a.d_in, a.d_out) != (b.d_in, b.d_out):
        raise ValueError("channels act on different spaces")
    return float(np.linalg.norm(choi_of(a) - choi_of(b)))


def apply_channel(c: Channel, s: MultiState, on_factors) -> MultiState:
    """Apply ``c`` to the listed factors of ``s``.

    The selected factors are replaced, in place of the first of them, by the
    channel's output factors; the remaining factors keep their order.
    """
    on = [int(k) for k in on_factors]
    if len(set(on)) != len(on) or any(not 0 <= k < len(s.dims) for k in on):
        raise ValueError(f"bad factor selection {on} for {len(s.dims)} factors")
    if tuple(s.dims[k] for k in on) != c.in_dims:
        raise ValueError(f"factors {on} have dims {[s.dims[k] for k in on]}, channel expects {c.in_dims}")
    rest = [k for k in range(len(s.dims)) if k not in on]
    front = s.permute(on + rest)
    rest_dims = [s.dims[k] for k in rest]
    r = _prod(rest_dims)
    out_dims = list(c.out_dims) + rest_dims
    if front.ensemble is not None:
        w, v = front.ensemble
        t = v.reshape(c.d_in, r * w.size)
        vs = [(k @ t).reshape(c.d_out * r, w.size) for k in c.kraus]
        new = MultiState(dims=out_dims, ensemble=(np.tile(w, len(vs)), np.hstack(vs)), validate=False)
    else:
        t = front.rho.reshape(c.d_in, r, c.d_in, r)
        acc = np.zeros((c.d_out, r, c.d_out, r), dtype=complex)
        for k in c.kraus:
            acc += np.einsum("ai,irjs,bj->arbs", k, t, k.conj(), optimize=True)
        new = MultiState(acc.reshape(c.d_out * r, c.d_out * r), out_dims, validate=False)
    # move the output block back to where the first selected factor was
    pos = sum(1 for k in rest if k < min(on))
    n_out = len(c.out_dims)
    order = list(range(n_out, n_out + pos)) + list(range(n_out)) + list(range(n_out + pos, len(out_dims)))
    return new.permute(order)


def reduced_process(d_chan: Channel, aux_state: MultiState, n_keep: int = 1) -> Channel:
    """``rho -> tr_{B'} D(rho (x) alpha)``.

    ``aux_state`` lives on the trailing input factors of ``d_chan`` (A'); the
    first ``n_keep`` output factors form B and the rest (B') are traced out.
    An auxiliary state of total dimension 1 stands for a trivial A'.
    """
    n_aux = 0 if aux_state.dim == 1 else len(aux_state.dims)
    a_dims = d_chan.in_dims[: len(d_chan.in_dims) - n_aux]
    if n_aux and d_chan.in_dims[len(a_dims):] != aux_state.dims:
        raise ValueError("auxiliary state does not match the trailing input factors")
    b_dims = d_chan.out_dims[:n_keep]
    db, dbp = _prod(b_dims), _prod(d_chan.out_dims[n_keep:])
    da = _prod(a_dims)
    w, v = np.linalg.eigh((aux_state.rho + aux_state.rho.conj().T) / 2)
    kraus = []
    for lam, vec in zip(w, v.T):
        if lam <= PSD_FLOOR:
            continue
        attach = np.kron(np.eye(da), np.sqrt(lam) * vec[:, None])
        for k in d_chan.kraus:
            ka = (k @ attach).reshape(db, dbp, da)
            kraus.extend(ka[:, j, :] for j in range(dbp))
    return Channel(kraus, a_dims, b_dims, label="reduced")


def marginal_channel(c: Channel, keep) -> Channel:
    """Trace out every output factor except those in ``keep`` (kept in original order)."""
    keep = sorted(keep)
    n = len(c.out_dims)
    order = keep + [k for k in range(n) if k not in keep]
    dk = _prod([c.out_dims[k] for k in keep])
    drest = c.d_out // dk
    kraus = []
    for k in c.kraus:
        kt = permute_vector_factors(k, c.out_dims, order).reshape(dk, drest, c.d_in)
        kraus.extend(kt[:, j, :] for j in range(drest))
    return Channel(kraus, c.in_dims, tuple(c.out_dims[k] for k in keep))


def is_constant(c: Channel, tol: float = 1e-9) -> bool:
    """True iff ``c(X) = tr(X) c(I/d)`` on every matrix unit ``|i><j|`` (hence everywhere)."""
    d = c.d_in
    ref = c(np.eye(d) / d)
    worst = 0.0
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            worst = max(worst, np.abs(c(e) - (i == j) * ref).max())
    return bool(worst <= tol)


def verify_reversible(c: Channel, r: Channel, tol: float = 1e-9) -> Reversibility:
    """Classify ``c`` against a candidate inverse ``r``.

    ``r o c = id_A`` makes ``c`` correctable (faithful); additionally
    ``c o r = id_B`` makes it reversible. Only the supplied ``r`` is tried.
    """
    if c.d_in != r.d_out or c.d_out != r.d_in:
        raise ValueError("candidate inverse has the wrong shape")
    left = channel_distance(compose(r, c), identity_channel(c.d_in)) <= tol
    if not left:
        return "neither"
    right = channel_distance(compose(c, r), identity_channel(c.d_out)) <= tol
    return "reversible" if right else "faithful_only"


# ------------------------------------------------------------------- sampling

def check_unitary(u, tol: float = 1e-10) -> None:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1] or np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() > tol:
        raise ValueError("matrix is not unitary")


def haar_unitary(d: int, rng: Rng) -> np.ndarray:
    """Haar-distributed unitary: QR of a Ginibre matrix with the R-diagonal phases divided out."""
    z = (rng.gen.standard_normal((d, d)) + 1j * rng.gen.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_permutation(d: int, rng: Rng) -> tuple:
    return tuple(int(x) for x in rng.gen.permutation(d))


def permutation_unitary(perm) -> np.ndarray:
    """``U = sum_i |perm[i]><i|``."""
    perm = [int(p) for p in perm]
    d = len(perm)
    if sorted(perm) != list(range(d)):
        raise ValueError(f"{perm} is not a permutation of 0..{d - 1}")
    u = np.zeros((d, d), dtype=complex)
    u[perm, list(range(d))] = 1.0
    return u


def random_ket(d: int, rng: Rng) -> np.ndarray:
    z = rng.gen.standard_normal(d) + 1j * rng.gen.standard_normal(d)
    return z / np.linalg.norm(z)


def random_density(d: int, rng: Rng, rank: int | None = None) -> np.ndarray:
    rank = d if rank is None else rank
    g = rng.gen.standard_normal((d, rank)) + 1j * rng.gen.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_channel(d_in: int, d_out: int, n_kraus: int, rng: Rng) -> Channel:
    """Kraus blocks of a Haar-random isometry ``C^{d_in} -> C^{n_kraus} (x) C^{d_out}``."""
    u = haar_unitary(n_kraus * d_out, rng)[:, :d_in]
    blocks = u.reshape(n_kraus, d_out, d_in)
    return Channel(list(blocks), (d_in,), (d_out,), label="random")


# ---------------------------------------------------------------- hypotheses

@dataclass(frozen=True)
class HypothesisSpec:
    """A causal hypothesis family: which output factor carries the cause.

    ``effect_slot='first'`` is H1 (``U . U^dag (x) I/d``), ``'second'`` is H2
    (``I/d (x) V . V^dag``). ``parameter`` fixes the dependence; ``None``
    means it is unknown.
    """

    effect_slot: Literal["first", "second"]
    d: int
    dependence: Literal["permutation", "unitary"] = "unitary"
    parameter: object = field(default=None, compare=False)

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be at least 2")
        if self.effect_slot not in ("first", "second"):
            raise ValueError(f"bad effect_slot {self.effect_slot!r}")
        if self.dependence not in ("permutation", "unitary"):
            raise ValueError(f"bad dependence {self.dependence!r}")

    def swapped(self) -> "HypothesisSpec":
        other = "second" if self.effect_slot == "first" else "first"
        return HypothesisSpec(other, self.d, self.dependence, self.parameter)


def dependence_unitary(spec: HypothesisSpec, param) -> np.ndarray:
    if spec.dependence == "permutation" and np.ndim(param) == 1:
        return permutation_unitary(param)
    u = as_matrix(param)
    if u.shape != (spec.d, spec.d):
        raise ValueError(f"parameter has shape {u.shape}, expected {(spec.d, spec.d)}")
    check_unitary(u)
    if spec.dependence == "permutation":
        if not np.allclose(np.abs(u), np.round(np.abs(u))) or not np.allclose(u.imag, 0):
            raise ValueError("parameter is not a permutation matrix")
    return u


def sample_parameter(spec: HypothesisSpec, rng: Rng) -> np.ndarray:
    if spec.dependence == "permutation":
        return permutation_unitary(random_permutation(spec.d, rng))
    return haar_unitary(spec.d, rng)


def hypothesis_channel(spec: HypothesisSpec, param=None) -> Channel:
    """The process ``A -> B (x) C`` of a hypothesis with a definite dependence."""
    param = spec.parameter if param is None else param
    if param is None:
        raise ValueError("hypothesis_channel needs a concrete permutation or unitary")
    u = dependence_unitary(spec, param)
    d = spec.d
    basis = np.eye(d)
    kraus = []
    for i in range(d):
        ket = basis[:, i : i + 1] / np.sqrt(d)
        kraus.append(np.kron(u, ket) if spec.effect_slot == "first" else np.kron(ket, u))
    return Channel(kraus, (d,), (d, d), label=f"H[{spec.effect_slot}]")
