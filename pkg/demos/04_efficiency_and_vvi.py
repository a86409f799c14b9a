"""
Quasi efficiency and vector variational inequalities
====================================================

Semi-decision checks: a verdict either refutes with a concrete witness that
replays, or certifies explicitly "up to sampling" with the whole sampling
plan recorded. Nothing here claims a proof.
"""

from vvicert import SamplingPlan, check_quasi_efficient, check_vvi
from vvicert.cli import load_problem
from vvicert.problem import Problem

problem = load_problem("example5")
f, cone, kernel, e = problem.f, problem.cone, problem.kernel, problem.e
plan = SamplingPlan(seed=42)

# The origin is a local quasi efficient point of the two-piece objective:
# no sampled x in the ball beats f(0) even after the e*||eta|| handicap.
verdict = check_quasi_efficient(f, cone, kernel, e, [0.0], r=0.25, plan=plan)
print("quasi efficiency at 0:", verdict.status)
print(" ", verdict.reason)

# The origin also solves the Stampacchia inequality: no x makes
# A @ eta(x, 0) <=_C 0 for every Jacobian vertex A at 0.
verdict = check_vvi("svvi", f, cone, kernel, [0.0], plan)
print("SVVI at 0:", verdict.status, f"({verdict.stats['sampleCount']} samples)")

# A linear objective with identical components fails both checks, and the
# verdicts carry the witness.
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
    name="linear",
)
verdict = check_quasi_efficient(
    linear.f, linear.cone, linear.kernel, linear.e, [0.0], r=0.25, plan=plan
)
print("\nlinear objective, quasi efficiency at 0:", verdict.status)
print("  witness x =", verdict.witness["x"])

verdict = check_vvi("svvi", linear.f, linear.cone, linear.kernel, [0.0], plan)
print("linear objective, SVVI at 0:", verdict.status)
print("  witness x =", verdict.witness["x"])
