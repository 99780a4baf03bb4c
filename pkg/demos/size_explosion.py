"""Term size blows up exponentially while machine work stays polynomial.

The KN machine substitutes, so its step count tracks the size of the normal
form.  The useful MAM shares instead and stays close to linear in n.
"""

import numpy as np

from lambdamachines.harness import bench, size_explosion
from lambdamachines.strategies import Strategy, normalize
from lambdamachines.terms import size

report = bench("size-explosion", 12, ["kn", "mam"])
print(report.to_csv())

n = np.array([r.n for r in report.rows], dtype=float)
kn = np.array([r.steps["kn"] for r in report.rows], dtype=float)
mam = np.array([r.steps["mam"] for r in report.rows], dtype=float)
print("\nkn ratio step to step:", np.round(kn[1:] / kn[:-1], 3))
print("mam fitted slope:", round(np.polyfit(n, mam, 1)[0], 3))

for k in range(1, 7):
    nf, beta = normalize(Strategy.NO, size_explosion(k))
    print(f"n={k}  term size {size(size_explosion(k)):3}  normal form size {size(nf):4}  beta {beta}")
