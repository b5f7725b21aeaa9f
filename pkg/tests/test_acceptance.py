"""Acceptance criteria 1-10, each at its stated tolerance.

Every test records a verdict through the ``acceptance`` fixture; the summary
section at the end of the run prints one PASS/FAIL line per criterion.
"""

import math
import time
from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from causalprobe import formulas as fm
from causalprobe.cli import claim_numbers
from causalprobe.combinat import invariant_subspace_dim, multiplicity, spin_paths
from causalprobe.discrimination import classical_optimum, helstrom_error, monte_carlo_classical
from causalprobe.numkernel import trace_norm
from causalprobe.quantum import (
    HypothesisSpec,
    MultiState,
    Rng,
    apply_channel,
    channel_distance,
    choi_of,
    compose,
    depolarizing_channel,
    frobenius_distance,
    haar_unitary,
    hypothesis_channel,
    is_cptp,
    random_channel,
    random_density,
    random_permutation,
    swap_channel,
    unitary_channel,
)
from causalprobe.strategies import CoherentProbe, ReferenceProbe, SingletProbe, output_pair, output_state

INSTANCES = 100


def test_criterion_1_classical_optimum(acceptance):
    t0 = time.perf_counter()
    bad = []
    for d, n in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3)]:
        got = classical_optimum(d, n).error_probability
        if not (isinstance(got, Fraction) and got == Fraction(1, 2 * d ** (n - 1))):
            bad.append((d, n, got))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 10
    acceptance(1, ok, f"exact 1/(2d^(n-1)) on 6 cases, {elapsed:.2f}s" if ok else f"mismatch {bad}, {elapsed:.2f}s")
    assert ok


def test_criterion_2_coherent(acceptance):
    t0 = time.perf_counter()
    worst = 0.0
    for d, n in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)]:
        a, b = output_pair(CoherentProbe(), n, d, "permutation", Rng(2))
        got = helstrom_error(a, b, path="dense").error_probability
        worst = max(worst, abs(got - 1 / (2 * d ** n)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 5
    acceptance(2, ok, f"max |err - 1/(2d^n)| = {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_criterion_3_singlet(acceptance):
    worst, slow = 0.0, 0.0
    for d, n in [(2, 2), (2, 4), (3, 3)]:
        t0 = time.perf_counter()
        a, b = output_pair(SingletProbe(), n, d, "unitary", Rng(3))
        assert a.dim == (d ** n) ** 2
        got = helstrom_error(a, b, path="dense").error_probability
        worst = max(worst, abs(got - 1 / (2 * d ** n)))
        slow = max(slow, time.perf_counter() - t0)
    ok = worst <= 1e-9 and slow < 60
    acceptance(3, ok, f"max |err - 1/(2d^n)| = {worst:.2e}, slowest case {slow:.2f}s")
    assert ok


def test_criterion_4_reference(acceptance):
    t0 = time.perf_counter()
    a, b = output_pair(ReferenceProbe(), 4, 2, "unitary", Rng(4))
    assert a.dim == 768
    dense = helstrom_error(a, b, path="dense").error_probability
    low = helstrom_error(a, b, path="low_rank").error_probability
    elapsed = time.perf_counter() - t0
    want = (1 - math.sqrt(3) / 2) / 16
    ok = (abs(dense - want) <= 1e-9 and abs(low - dense) <= 1e-9 and multiplicity(4, 2) == 2
          and abs(fm.p_reference(4, 2) - want) <= 1e-9 and elapsed < 120)
    acceptance(4, ok, f"dense {dense:.12g}, low-rank {low:.12g}, target {want:.12g}, {elapsed:.2f}s")
    assert ok


def test_criterion_5_multiplicity(acceptance):
    expected = (1, 2, 5, 14, 42, 132)
    got = tuple(multiplicity(n, 2) for n in range(2, 13, 2))
    null_ok = all(invariant_subspace_dim(n, 2) == multiplicity(n, 2) for n in (2, 4, 6))
    spin_ok = all(spin_paths(n) == multiplicity(n, 2) for n in range(2, 13, 2))
    # printed form: constant (n/d + d - 1)! under the product over i
    literal = Fraction(factorial(2))
    for i in (1, 2):
        literal *= Fraction(factorial(2 - i), factorial(2 // 2 + 2 - 1))
    ok = got == expected and null_ok and spin_ok and literal.denominator != 1
    acceptance(5, ok, f"m(n,2) = {got}, null space {null_ok}, spin paths {spin_ok}, printed form at (2,2) = {literal}")
    assert ok


def test_criterion_6_claim(acceptance):
    r = claim_numbers(2, 1e-6)
    ok = r["quantum_n"] == 12 and r["classical_n"] == 20
    acceptance(6, ok, f"quantum n = {r['quantum_n']} (p = {r['quantum_p']:.4g}), "
                      f"classical n = {r['classical_n']} (p = {r['classical_p']:.4g})")
    assert ok


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("kind,factor", [("classical", 1), ("reference", 2)])
def test_criterion_7_decay_rates(acceptance, kind, factor, d):
    ns = [n for n in range(40, 81) if n % d == 0]
    slope = fm.decay_rate_fit(fm.rate_points(kind, d, ns))
    target = factor * math.log2(d)
    rel = (slope - target) / target
    ok = abs(rel) <= 0.02
    acceptance(7, ok, f"{kind} d={d}: slope {slope:.5f} vs {target:.5f} ({rel:+.2%})")
    assert ok


def test_criterion_8_bound_ordering(acceptance):
    worst = -math.inf
    for d in (2, 3):
        for n in range(d, 13, d):
            chain = [fm.seq_lower_bound(n, d), fm.indefinite_lower_bound(n, d), fm.p_reference(n, d),
                     fm.p_coherent(n, d), fm.p_classical(n, d)]
            worst = max(worst, max(a - b for a, b in zip(chain, chain[1:])))
    ok = worst <= 1e-15
    acceptance(8, ok, f"largest step violation {worst:.3e} (slack 1e-15)")
    assert ok


def test_criterion_9_monte_carlo(acceptance):
    r = monte_carlo_classical(2, 2, (0, 0), 10 ** 6, Rng(9))
    again = monte_carlo_classical(2, 2, (0, 0), 10 ** 6, Rng(9))
    z = (r.error_probability - 0.25) / r.diagnostics["std_err"]
    ok = abs(z) <= 3 and r.error_probability == again.error_probability
    acceptance(9, ok, f"p_hat {r.error_probability:.6f}, z = {z:+.2f}, repeat identical "
                      f"{r.error_probability == again.error_probability}")
    assert ok


def test_criterion_10_properties(acceptance):
    root = Rng(10)
    cptp_fail = 0
    worst_dp = worst_ui = worst_inv = worst_fact = 0.0
    for i in range(INSTANCES):
        r = root.fork(i)
        d = 2 + i % 2
        channels = [hypothesis_channel(HypothesisSpec("first", d), haar_unitary(d, r)),
                    hypothesis_channel(HypothesisSpec("second", d), haar_unitary(d, r)),
                    hypothesis_channel(HypothesisSpec("first", d, "permutation"), random_permutation(d, r)),
                    random_channel(d, d, 3, r), depolarizing_channel(d, 0.5), swap_channel(d)]
        cptp_fail += sum(not is_cptp(choi_of(c), c.d_in, c.d_out) for c in channels)

        a, b = MultiState(random_density(d * d, r), (d, d)), MultiState(random_density(d * d, r), (d, d))
        ch = random_channel(d, d, 2, r)
        before = helstrom_error(a, b).error_probability
        after = helstrom_error(apply_channel(ch, a, [0]), apply_channel(ch, b, [0])).error_probability
        worst_dp = max(worst_dp, before - after)

        g = a.rho - b.rho
        u = haar_unitary(d * d, r)
        worst_ui = max(worst_ui, abs(trace_norm(u @ g @ u.conj().T) - trace_norm(g)))

        # two independent hidden parameters must give the same output
        for probe, n, dd, dep in ((SingletProbe(), 2, 2, "unitary"), (CoherentProbe(), 2, d, "permutation")):
            spec = HypothesisSpec("first", dd, dep)
            outs = [output_state(HypothesisSpec("first", dd, dep, p), probe, n)
                    for p in (spec_param(spec, r), spec_param(spec, r))]
            worst_inv = max(worst_inv, frobenius_distance(*outs))

        uc = haar_unitary(d, r)
        c, inv = unitary_channel(uc), unitary_channel(uc.conj().T)
        e = random_channel(d, d + 1, 2, r)
        worst_fact = max(worst_fact, channel_distance(e, compose(compose(e, inv), c)))
    ok = (cptp_fail == 0 and worst_dp <= 1e-10 and worst_ui <= 1e-10 and worst_inv <= 1e-9
          and worst_fact <= 1e-9)
    acceptance(10, ok, f"{INSTANCES} instances: CPTP failures {cptp_fail}, data-processing excess {worst_dp:.1e}, "
                       f"unitary invariance {worst_ui:.1e}, probe spread {worst_inv:.1e}, "
                       f"factorization {worst_fact:.1e}")
    assert ok


def spec_param(spec, r):
    if spec.dependence == "permutation":
        return random_permutation(spec.d, r)
    return haar_unitary(spec.d, r)
