"""
Expressions, predicates, and exact derivatives
==============================================

Function pieces, region predicates, and kernels are written as plain text in
a small rational-arithmetic language. Each piece formula must be smooth, so
differentiation is exact symbolic manipulation, not finite differencing.
"""

import numpy as np

from vvicert import differentiate, evaluate, parse, parse_predicate, to_string
from vvicert.exprlang import evaluate_many, predicate_holds

# The first component of the worked two-piece objective, on its x >= 0 branch.
f1 = parse("-x1^3 - x1^2 + 5*x1", dim=1)
print("f1(1)      =", evaluate(f1, [1.0]))

# Its derivative is -3 x^2 - 2 x + 5; at the kink it evaluates to 5.
d1 = differentiate(f1, var=0)
print("f1'        =", to_string(d1))
print("f1'(0)     =", evaluate(d1, [0.0]))
print("f1'(1)     =", evaluate(d1, [1.0]))

# Evaluation is vectorized over batches of points.
grid = np.linspace(-1, 1, 5)[:, None]
print("f1 on grid =", evaluate_many(f1, grid))

# Predicates describe piece regions. Equality uses a small absolute
# tolerance so boundaries are detectable in floating point; abs is allowed
# here (and only here).
region = parse_predicate("x1 >= 0 and abs(x1) <= 1.5", dim=1)
for x in (-0.5, 0.0, 1.0, 2.0):
    print(f"region({x:+.1f}) = {predicate_holds(region, [x])}")
