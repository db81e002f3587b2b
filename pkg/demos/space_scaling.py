"""Peak live table entries on cliques with a chain decomposition, depth 6 to 14.

A clique keeps every ancestor relevant at every level, which is the worst case
for table size. The classic three-label DP grows like 3^t. The hybrid solver
branches on the root path and only keeps subset tables, so it grows like 2^t.
The slopes come from a least-squares fit of log2(peak) against t.
"""

import numpy as np

from tdsolve import SolveStats
from tdsolve.baseline import domset_classic_dp
from tdsolve.generators import clique_chain
from tdsolve.hybrid import HybridSolver

ts = np.arange(6, 15)
dp, hy = [], []
print(f"{'t':>3} {'classic DP':>12} {'hybrid':>10}")
for t in ts:
    g, td = clique_chain(int(t))
    st = SolveStats("classic-dp")
    domset_classic_dp(g, td, stats=st)
    h = HybridSolver(g, td, "fast", memo=False)
    h.solve()
    dp.append(st.peak_live_table_entries)
    hy.append(h.stats.peak_live_table_entries)
    print(f"{t:>3} {dp[-1]:>12} {hy[-1]:>10}")

dp_slope = np.polyfit(ts, np.log2(dp), 1)[0]
hy_slope = np.polyfit(ts, np.log2(hy), 1)[0]
print(f"\nlog2 slope, classic DP: {dp_slope:.3f} (log2 3 = {np.log2(3):.3f})")
print(f"log2 slope, hybrid:     {hy_slope:.3f}")
