"""Five reduction strategies on a handful of classic terms.

Each cell is the beta count to the strategy's normal form, or "div" when the
fuel runs out first.
"""

from lambdamachines.errors import FuelExhausted
from lambdamachines.strategies import Strategy, classify_nf, normalize
from lambdamachines.terms import parse, show

TERMS = ["K I Omega", r"(\x. x x) (I I)", "c2 c2", r"\x. (\y. y) x", "(K I) (I I)", "Omega"]
FUEL = 200


def cell(s, t):
    try:
        nf, steps = normalize(s, t, FUEL)
    except FuelExhausted:
        return "div"
    return str(steps)


print("term".ljust(20) + "".join(s.value.rjust(7) for s in Strategy))
for src in TERMS:
    t = parse(src)
    print(src.ljust(20) + "".join(cell(s, t).rjust(7) for s in Strategy))

t = parse(r"\x. (\y. y) x")
print("\nweak strategies stop under the binder:")
for s in (Strategy.CBN, Strategy.NO):
    nf, _ = normalize(s, t)
    print(f"  {s.value:5} {show(nf):14} {classify_nf(s, nf).name}")
