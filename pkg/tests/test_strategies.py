from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from causalprobe.combinat import GroupPartition, group_partitions, multiplicity, partition_count
from causalprobe.numkernel import kron, partial_trace
from causalprobe.quantum import HypothesisSpec, MultiState, Rng, frobenius_distance, haar_unitary
from causalprobe.strategies import (
    ClassicalProbe,
    CoherentProbe,
    ReferenceProbe,
    SingletProbe,
    active_probes,
    canonical_order,
    classical_output_distribution,
    coherent_probe,
    grouped_singlet_state,
    grouped_singlet_vector,
    output_pair,
    output_state,
    probe_state,
    reference_probe,
    singlet_state,
    singlet_vector,
    swap_b_c,
)


def dm(psi):
    return np.outer(psi, np.conj(psi))


def test_coherent_probe_amplitudes():
    s = coherent_probe(3, 2)
    psi = s.ensemble[1][:, 0]
    assert np.allclose(np.abs(psi), 1 / np.sqrt(8))
    perm = np.array([[0, 1], [1, 0]])
    u = kron(perm, perm, perm)
    assert np.allclose(u @ psi, psi)


def test_singlet_d2():
    assert np.allclose(singlet_vector(2), [0, 1, -1, 0] / np.sqrt(2))


def test_singlet_d3_signs():
    psi = singlet_vector(3)
    idx = lambda a, b, c: 9 * a + 3 * b + c
    amp = 1 / np.sqrt(6)
    assert np.isclose(psi[idx(0, 1, 2)], amp)
    assert np.isclose(psi[idx(1, 2, 0)], amp)
    assert np.isclose(psi[idx(1, 0, 2)], -amp)
    assert np.isclose(psi[idx(2, 1, 0)], -amp)
    assert np.isclose(np.linalg.norm(psi), 1)
    assert np.count_nonzero(np.abs(psi) > 1e-15) == 6


@pytest.mark.parametrize("d", [2, 3, 4])
def test_singlet_picks_up_determinant(d):
    u = haar_unitary(d, Rng(d))
    psi = singlet_vector(d)
    assert np.allclose(kron(*[u] * d) @ psi, np.linalg.det(u) * psi)


def test_singlet_is_maximally_mixed_on_one_factor():
    rho = singlet_state(3).rho
    assert np.allclose(partial_trace(rho, [3, 3, 3], [0]), np.eye(3) / 3)


def test_grouped_singlet_partial_trace():
    p = GroupPartition(((0, 2), (1, 3)))
    rho = grouped_singlet_state(p, 4, 2).rho
    assert np.allclose(partial_trace(rho, [2] * 4, [0, 2]), dm(singlet_vector(2)))
    assert np.allclose(partial_trace(rho, [2] * 4, [0, 1]), np.eye(4) / 4)


def test_grouped_singlet_wrong_size():
    with pytest.raises(ValueError):
        grouped_singlet_vector(GroupPartition.contiguous(4, 2), 6, 2)


@pytest.mark.parametrize("n,d", [(2, 2), (4, 2), (6, 2), (3, 3), (6, 3)])
def test_reference_probe(n, d):
    s = reference_probe(n, d)
    g = partition_count(n, d)
    assert s.dims == (d,) * n + (g,)
    psi = s.ensemble[1][:, 0]
    assert np.isclose(np.linalg.norm(psi), 1)
    # reference register is a uniform mixture only when groupings are orthogonal
    vecs = np.stack([grouped_singlet_vector(p, n, d) for p in group_partitions(n, d)], axis=1)
    gram = vecs.conj().T @ vecs
    assert np.allclose(partial_trace(dm(psi), s.dims, [n]), gram.T / g)


@pytest.mark.parametrize("n,d", [(2, 2), (4, 2), (6, 2), (8, 2), (3, 3), (6, 3)])
def test_grouped_singlets_span_has_dimension_m(n, d):
    vecs = np.stack([grouped_singlet_vector(p, n, d) for p in group_partitions(n, d)], axis=1)
    s = np.linalg.svd(vecs, compute_uv=False)
    assert int(np.sum(s > 1e-10 * s[0])) == multiplicity(n, d)


def test_active_probes_and_padding():
    assert active_probes(5, 2) == 4
    assert active_probes(2, 3) == 0
    assert probe_state(SingletProbe(), 5, 2).dims == (2,) * 4
    assert probe_state(ReferenceProbe(), 7, 3).dims == (3,) * 6 + (10,)
    with pytest.raises(ValueError):
        probe_state(SingletProbe(), 1, 2)


def test_canonical_order():
    assert canonical_order(2, False) == [0, 2, 1, 3]
    assert canonical_order(2, True) == [0, 2, 1, 3, 4]


def test_coherent_output_h1():
    spec = HypothesisSpec("first", 3, "permutation")
    out = output_state(spec, CoherentProbe(), 2, Rng(3))
    e0 = np.full(3, 1 / np.sqrt(3))
    want = kron(dm(e0), dm(e0), np.eye(9) / 9)
    assert out.dims == (3,) * 4
    assert np.abs(out.rho - want).max() < 1e-12


def test_singlet_output_h2():
    spec = HypothesisSpec("second", 2)
    out = output_state(spec, SingletProbe(), 2, Rng(4))
    want = kron(np.eye(4) / 4, dm(singlet_vector(2)))
    assert np.abs(out.rho - want).max() < 1e-12


def test_reference_output_h1():
    spec = HypothesisSpec("first", 2)
    out = output_state(spec, ReferenceProbe(), 4, Rng(5))
    assert out.dims == (2,) * 8 + (3,)
    ref = reference_probe(4, 2).rho
    keep_b_r = [0, 1, 2, 3, 8]
    assert np.abs(out.reduced(keep_b_r) - ref).max() < 1e-12
    assert np.abs(out.reduced([4, 5, 6, 7]) - np.eye(16) / 16).max() < 1e-12
    assert np.isclose(out.purity(), 1 / 16)


@pytest.mark.parametrize("probe,n,d,dep", [
    (CoherentProbe(), 2, 2, "permutation"),
    (SingletProbe(), 4, 2, "unitary"),
    (ReferenceProbe(), 4, 2, "unitary"),
    (ReferenceProbe(), 3, 3, "unitary"),
])
def test_hypotheses_related_by_b_c_swap(probe, n, d, dep):
    a, b = output_pair(probe, n, d, dep, Rng(11))
    na = n if isinstance(probe, CoherentProbe) else active_probes(n, d)
    assert frobenius_distance(swap_b_c(a, na), b) < 1e-10


def test_output_with_fixed_parameter():
    u = haar_unitary(2, Rng(8))
    spec = HypothesisSpec("first", 2, parameter=u)
    out = output_state(spec, ClassicalProbe((0, 1)), 2)
    want = kron(dm(u[:, 0]), dm(u[:, 1]), np.eye(4) / 4)
    assert np.abs(out.rho - want).max() < 1e-12


def test_non_invariant_probe_rejected():
    with pytest.raises(ValueError):
        output_state(HypothesisSpec("first", 2), ClassicalProbe((0, 0)), 2, Rng(0))
    with pytest.raises(ValueError):
        output_state(HypothesisSpec("first", 2, "unitary"), CoherentProbe(), 2, Rng(0))


def test_output_deterministic():
    a = output_pair(ReferenceProbe(), 4, 2, "unitary", Rng(2))[0]
    b = output_pair(ReferenceProbe(), 4, 2, "unitary", Rng(2))[0]
    assert np.array_equal(a.rho, b.rho)


def test_classical_distribution_d2():
    dist = classical_output_distribution((0, 0), HypothesisSpec("first", 2, "permutation"))
    assert len(dist.probs) == 8
    assert dist.total() == 1
    assert set(dist.probs.values()) == {Fraction(1, 8)}
    assert dist[(0, 0, 1, 0)] == Fraction(1, 8)
    assert dist[(0, 1, 0, 0)] == 0


def test_classical_distribution_d3():
    dist = classical_output_distribution((0, 1), HypothesisSpec("first", 3, "permutation"))
    assert len(dist.probs) == 54
    assert dist.total() == 1
    # effect slot never repeats a value for distinct inputs
    assert all(o[0] != o[1] for o in dist.probs)


def test_classical_single_query_uninformative():
    h1 = classical_output_distribution((1,), HypothesisSpec("first", 3, "permutation"))
    h2 = classical_output_distribution((1,), HypothesisSpec("second", 3, "permutation"))
    assert h1.probs == h2.probs


def test_classical_fixed_permutation():
    spec = HypothesisSpec("second", 3, "permutation", parameter=(2, 0, 1))
    dist = classical_output_distribution((0, 1), spec)
    assert dist.total() == 1
    for b, c in product(product(range(3), repeat=2), [(2, 0)]):
        assert dist[b + c] == Fraction(1, 9)
