"""Three ways to count invariant states
=====================================

The reference strategy's error depends on m(N, d), the number of copies of
the trivial representation in U -> U^(x)N. This demo computes it three
independent ways and checks that they agree:

1. the hook length formula for a d x (N/d) rectangle,
2. the common null space of the collective su(d) generators,
3. for d = 2, counting spin-coupling paths that end at total spin zero.

A fourth view is the span of the singlet groupings themselves. Its
dimension is also m, because the groupings are overcomplete.

Run it with ``python3 demos/multiplicity_oracles.py``.
"""

import numpy as np

from causalprobe.combinat import group_partitions, invariant_subspace_dim, multiplicity, partition_count, spin_paths
from causalprobe.strategies import grouped_singlet_vector

print(" n  d   hook  null  paths  groupings  span")
for n, d in [(2, 2), (4, 2), (6, 2), (8, 2), (3, 3), (6, 3)]:
    hook = multiplicity(n, d)
    null = invariant_subspace_dim(n, d) if d ** n <= 729 else "-"
    paths = spin_paths(n) if d == 2 else "-"
    vecs = np.stack([grouped_singlet_vector(p, n, d) for p in group_partitions(n, d)], axis=1)
    s = np.linalg.svd(vecs, compute_uv=False)
    span = int(np.sum(s > 1e-10 * s[0]))
    print(f"{n:2d} {d:2d} {hook:6d} {null!s:>5} {paths!s:>6} {partition_count(n, d):10d} {span:5d}")

##############################################################################
# Larger values come from the hook formula alone, in exact integers.

for d in (2, 3, 4):
    print(f"d={d}:", [multiplicity(n, d) for n in range(d, 9 * d, d)])
