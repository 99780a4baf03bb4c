"""Every lambda machine on c2 c2, then a lockstep check over the corpus."""

from lambdamachines.harness import compare, render_value, sn_corpus
from lambdamachines.machines import LAMBDA, MACHINES, STRATEGY, run
from lambdamachines.terms import parse

t = parse("c2 c2")
print(f"{'machine':10} {'strategy':8} {'steps':>6} {'beta':>5}  result")
for name in STRATEGY:
    res = run(name, t)
    value = render_value(MACHINES[name], res.value)
    print(f"{name:10} {STRATEGY[name].value:8} {res.stats.total:6} {res.stats.beta:5}  {value}")

# weak machines only get as far as a closure here
res = run("krivine", parse(r"\x. (\y. y) x"))
print("\nkrivine on \\x. (\\y. y) x gives", render_value(MACHINES["krivine"], res.value))

corpus = sn_corpus()
report = compare(list(STRATEGY), None, corpus)
print(f"\n{len(corpus)} corpus terms:", report.summary())
