"""Decay rates and the limits of any strategy
============================================

The error of each strategy falls roughly like 2^(-R N). Classical queries
reach R = log2 d. The reference strategy reaches 2 log2 d, and no sequential
strategy, nor one using indefinite causal order, can beat that.

The log2-domain formulas let us fit rates far past float underflow. At
moderate N the reference strategy still carries a polynomial prefactor,
since m(N, d) grows like d^N / N^((d^2-1)/2). That prefactor drags the
fitted slope below 2 log2 d: it is within 2% for d = 2 over N in [40, 80],
and about 3% short for d = 3.

Run it with ``python3 demos/rates_and_bounds.py``.
"""

import math

from causalprobe import formulas as fm
from causalprobe.quantum import HypothesisSpec, Rng, haar_unitary, hypothesis_channel

for d in (2, 3):
    ns = [n for n in range(40, 81) if n % d == 0]
    for kind in ("classical", "reference", "seq_bound", "indefinite_bound"):
        slope = fm.decay_rate_fit(fm.rate_points(kind, d, ns))
        closed = fm.decay_rate_closed(kind, d)
        print(f"d={d} {kind:17s} fitted {slope:.5f}  asymptotic {closed:.5f}  ({(slope - closed) / closed:+.2%})")

##############################################################################
# The slope deficit shrinks slowly with N.

for lo in (42, 402, 4002):
    ns = list(range(lo, 2 * lo + 1, 3))
    print(f"d=3 reference over [{lo}, {2 * lo}]: {fm.decay_rate_fit(fm.rate_points('reference', 3, ns)):.5f}"
          f" (target {2 * math.log2(3):.5f})")

##############################################################################
# Bound chain at small N. The fidelity divergence between the two fixed
# hypothesis channels is 1/d^2, which gives the sequential bound 1/(4 d^(2N)).

for n in (2, 4, 6):
    print(f"n={n}: seq {fm.seq_lower_bound(n, 2):.3e} <= indefinite {fm.indefinite_lower_bound(n, 2):.3e}"
          f" <= reference {fm.p_reference(n, 2):.3e} <= coherent {fm.p_coherent(n, 2):.3e}"
          f" <= classical {fm.p_classical(n, 2):.3e}")

r = Rng(3)
c1 = hypothesis_channel(HypothesisSpec("first", 2), haar_unitary(2, r))
c2 = hypothesis_channel(HypothesisSpec("second", 2), haar_unitary(2, r))
print("fidelity divergence estimate:", fm.fidelity_divergence_estimate(c1, c2, 2, 50, r.fork(1)))
