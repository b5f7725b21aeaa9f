"""Helstrom error on a 61440-dimensional space
=============================================

The reference strategy at N = 6, d = 2 entangles six probes with a register
labelling the 15 ways to pair them into singlets. The output space has
dimension 2^6 * 2^6 * 15 = 61440, far too large for a dense trace norm.

Both output states have low rank, though. Each is the noise half (maximally
mixed, 64 terms) tensored with a pure state, so each is an ensemble of at
most 64 kets. The trace norm of a difference of two such ensembles only
depends on their joint span of at most 128 vectors, so a 128 x 128
eigenproblem replaces a 61440 x 61440 one.

Run it with ``python3 demos/reference_low_rank.py``.
"""

import time

from causalprobe import formulas as fm
from causalprobe.combinat import multiplicity
from causalprobe.discrimination import helstrom_error
from causalprobe.quantum import Rng
from causalprobe.strategies import ReferenceProbe, output_pair

n, d = 6, 2

t0 = time.perf_counter()
a, b = output_pair(ReferenceProbe(), n, d, "unitary", Rng(6))
print(f"output dims {a.dims}, total {a.dim}, ensemble ranks {a.rank_bound}, {b.rank_bound}")

res = helstrom_error(a, b)
print(f"path {res.diagnostics['path']}: error {res.error_probability:.12g}  ({time.perf_counter() - t0:.1f}s)")

##############################################################################
# The closed form uses the multiplicity m of the trivial representation,
# here m(6, 2) = 5, which is the number of independent singlet pairings.

m = multiplicity(n, d)
print(f"closed form with m={m}: {fm.p_reference(n, d):.12g}")
print(f"asymptotic 1/(4 m d^N):   {fm.p_reference_asymptotic(n, d):.12g}")
