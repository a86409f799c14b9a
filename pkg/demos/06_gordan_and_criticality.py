"""
Gordan's alternative and vector critical points
===============================================

Gordan's theorem: for any matrix A exactly one of these holds,
  (1) A x <_C 0 for some x, or
  (2) A^T y = 0 for some nonzero y >=_C 0.
Vector criticality asks for a strictly interior mu with mu^T A = 0 for some
A in the Jacobian polytope; by the alternative, a point fails to be critical
exactly when every polytope element admits a strict descent direction.
"""

import numpy as np

from vvicert import SamplingPlan, check_vector_critical, gordan_alternative
from vvicert.cli import load_problem
from vvicert.cone import OrderingCone

orthant = OrderingCone.orthant(2)

# Rows with opposite signs cannot both be made negative: alternative 2.
cert = gordan_alternative(np.array([[1.0], [-1.0]]), orthant)
print("A = rows (1), (-1)  ->", f"alternative {cert.alternative}, y = {cert.y}")

# The identity admits the uniform descent direction: alternative 1.
cert = gordan_alternative(np.eye(2), orthant)
print("A = identity        ->", f"alternative {cert.alternative}, x = {cert.x}")

# The Jacobian vertex (5, -2) of the worked example balances with
# y = (2/7, 5/7): 5 y1 - 2 y2 = 0.
cert = gordan_alternative(np.array([[5.0], [-2.0]]), orthant)
print("A = (5, -2)^T       ->", f"alternative {cert.alternative}, y = {cert.y}")

# Criticality at the kink of the worked example: the first vertex already
# admits mu = (2/7, 5/7), so 0 is a vector critical point.
problem = load_problem("example5")
verdict = check_vector_critical(problem.f, problem.cone, [0.0], SamplingPlan())
print("\nexample5 at 0:", verdict.status)
print("  lambda =", verdict.certificate["lambda"])
print("  mu     =", verdict.certificate["mu"])

# A strictly improving linear objective has no critical points: every
# sampled Jacobian mixture comes with a Gordan descent direction.
from vvicert.problem import Problem

linear = Problem.from_dict(
    {
        "version": "vvicert/1",
        "n": 1,
        "m": 2,
        "domain": [[-2.0, 2.0]],
        "pieces": [{"region": "0 <= 1", "components": ["x1", "x1"]}],
        "cone": {"orthant": 2},
        "kernel": {"kind": "difference"},
        "e": [0.1, 0.1],
    },
)
verdict = check_vector_critical(linear.f, linear.cone, [0.0], SamplingPlan())
print("\nlinear (x, x) at 0:", verdict.status)
print("  first evidence:", verdict.witness["evidence"][0])
