"""Build a small certified gadget corpus at s = 3 and solve it through the bench.

Each instance glues testers for a family I with the enforcer of one probe spec.
The manifest stores the optimum the construction predicts, and the bench
compares it with what the solver returns.
"""

import json
import sys
import tempfile
from itertools import combinations
from pathlib import Path

from tdsolve.cli import run
from tdsolve.gadgets import color_specs, ds_family_instance, ds_specs, coloring_family_instance

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="tdsolve-"))

specs = ds_specs(3)
for k, I in enumerate(combinations(specs, 2)):
    if k >= 4:
        break
    for j, probe in enumerate(specs[:2]):
        inst = ds_family_instance(I, probe)
        inst.write(out, f"ds_{k}_{j}")
        print(f"ds_{k}_{j}: n={inst.graph.n:>3} expected={inst.expected} "
              f"probe in I={probe in I} certified by {inst.certified_by}")

cspecs = color_specs(3)
for j, probe in enumerate(cspecs):
    inst = coloring_family_instance(cspecs[:2], probe)
    inst.write(out, f"col_{j}")
    print(f"col_{j}: n={inst.graph.n:>3} expected colourable={inst.expected}")

print(f"\nwrote corpus to {out}; bench output:")
run(["--bench", str(out), "--algo", "branch"])
