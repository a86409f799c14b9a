"""
Generalized Jacobian polytopes of piecewise-smooth functions
============================================================

For a continuous selection of smooth pieces, the generalized Jacobian at a
point is the convex hull of the analytic Jacobians of every piece active
there. At interior points of a single region this is a singleton; at piece
boundaries the hull carries every crossing's Jacobian as a vertex.
"""

from vvicert import Kernel, lipschitz_estimate
from vvicert.cli import load_problem

problem = load_problem("example5")
f = problem.f
print(f)

# A smooth point: one active piece, one vertex, equal to the analytic Jacobian.
poly = f.clarke_jacobian([1.0])
print("\nat x=1:", [v.ravel().tolist() for v in poly.vertices])

# The kink at 0: both pieces are active, two vertex matrices.
poly = f.clarke_jacobian([0.0])
print("at x=0:", [v.ravel().tolist() for v in poly.vertices],
      "active pieces:", poly.active_pieces)

# The componentwise outer box encloses the polytope row by row; it is the
# Cartesian-product relaxation of the true Jacobian set.
box = f.cartesian_outer_box([0.0])
for i in range(f.m):
    print(f"component {i + 1} gradient range: {box[i].tolist()}")

# Displacement kernels generalize x - y; structural flags are established on
# a declared deterministic sample.
diff = Kernel("difference", f.n)
negnorm = Kernel("negNormDifference", f.n)
print("\ndifference flags :", diff.flags(f.inner_box()).to_dict())
print("negNorm flags    :", negnorm.flags(f.inner_box()).to_dict())

# A sampled local Lipschitz constant (componentwise output norm).
est = lipschitz_estimate(f, [0.0], 0.5, samples=4000, seed=0)
print(f"\nsampled Lipschitz constant on B(0, 0.5): {est.constant:.4f}")
