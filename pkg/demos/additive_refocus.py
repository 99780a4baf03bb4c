"""Watch both additive machines sum (1+2)+(4+8), one configuration per line.

The bracketed part is the focus, the rest is the surrounding context; the
arrow mark says whether the machine is descending or returning a value.
"""

from lambdamachines import additive as A
from lambdamachines import core
from lambdamachines.harness import render_trace
from lambdamachines.machines import ADD_L, ADD_R

e = A.parse_additive("(1+2)+(4+8)")
print("input:", A.show(e), " potential:", A.potential(e))

for machine in (ADD_L, ADD_R):
    res = core.run(machine, e)
    print(f"\n{machine.name}: {res.stats.total} steps, per rule {dict(res.stats.per_rule)}")
    print(render_trace(machine, res.trace, "refocus"))

# steps are always one more than four times the number of sums
for src in ("7", "1+2", "((1+1)+1)+1", "1+(2+(3+(4+5)))"):
    x = A.parse_additive(src)
    n = core.run(ADD_L, x).stats.total
    print(f"{src:>18}  steps={n:3}  potential={A.potential(x)}")
