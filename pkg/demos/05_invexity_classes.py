"""
Generalized approximate invexity classes
========================================

Five classes, each a quantified implication over pairs (x, y) near a base
point and over the Jacobian polytope at y. The polytope's universal
quantifier reduces exactly to vertices; existential premises additionally
mix vertices over a deterministic simplex grid.

The showcase: with the kernel eta(x, y) = -|x - y| the kinked objective
(x, phi(x)) is approximately invex at 0, while with eta(x, y) = x - y
(approximate convexity) the same inequality is refutable, with a witness
pair sitting just below the kink.
"""

from vvicert import Kernel, SamplingPlan, check_invex_class
from vvicert.cli import load_problem

problem = load_problem("example23")
f, cone, e = problem.f, problem.cone, problem.e
plan = SamplingPlan(seed=42)

negnorm = problem.kernel  # the fixture ships with negNormDifference
diff = Kernel("difference", f.n)

v = check_invex_class("invex", f, cone, negnorm, e, [0.0], r=0.25, plan=plan)
print("invex with eta = -|x-y| :", v.status)

v = check_invex_class("invex", f, cone, diff, e, [0.0], r=0.25, plan=plan)
print("invex with eta = x-y    :", v.status)
print("  witness pair x =", v.witness["x"], " y =", v.witness["y"])
print("  f(x) =", v.witness["fx"], " f(y) =", v.witness["fy"])

# The weaker pseudo/quasi classes of both types, on the same instance.
for cls in ("pseudo1", "pseudo2", "quasi1", "quasi2"):
    v = check_invex_class(cls, f, cone, negnorm, e, [0.0], r=0.25, plan=plan)
    print(f"{cls:8} with eta = -|x-y| : {v.status}")

# The two-piece objective of the worked optimization problem is pseudo
# invex of type II at 0 on the wider ball used by its verification.
ex5 = load_problem("example5")
v = check_invex_class(
    "pseudo2", ex5.f, ex5.cone, ex5.kernel, ex5.e, [0.0], r=0.5, plan=plan
)
print("\nexample5 pseudo type II (r=0.5):", v.status)
