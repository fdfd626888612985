"""Inverse nets and invertibility criteria in the finite operator ideal.

The singular system of a full-rank operator yields the net U_m with
T U_m equal to the orthogonal projection onto the leading output directions;
rank-deficient operators are refuted.  Three criteria - range density,
smallest singular value, and the minimum of ||T* a|| over unit states -
agree on every operator.
"""

import numpy as np

from approxinv import operators

rng = np.random.default_rng(42)
n = 8
t = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))

system = operators.svd(t)
print("singular values:", np.round(system.values, 4))
print(f"reconstruction error: {np.abs(system.reconstruct() - t).max():.2e}")

net = operators.right_inverse_net(t)
print("\nprojection identity T U_m = P_m")
for m in (1, 4, 8):
    proj = operators.output_projection(system, m)
    print(f"  m={m}:  ||T U_m - P_m||op = {operators.op_norm(t @ net(m) - proj):.2e}")

c = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
print("\nideal-norm residuals ||T U_m C - C|| (p = 2)")
for m in (2, 4, 6, 8):
    resid = operators.schatten_norm(t @ net(m) @ c - c, 2.0)
    print(f"  m={m}:  {resid:.4f}")

print("\nthree-way criterion agreement")
for label, op in (
    ("full rank", t),
    ("column zeroed", np.where(np.arange(n) == 2, 0.0, 1.0) * t),
):
    by_rank = operators.range_kernel_refuter(op, 1e-8).dense_range
    smallest = float(operators.singular_values(op)[-1])
    by_state = operators.min_pure_state_norm(op, 500, seed=1)
    print(
        f"  {label}: dense range {by_rank}, sigma_min {smallest:.2e},"
        f" min state norm {by_state:.2e}"
    )

print("\nideal norms respect the contracts")
f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
one = operators.rank_one(f, g)
print(f"  rank-one ideal norms (all p): {operators.schatten_norm(one, 1.0):.6f}")
print(f"  product of vector norms:     {np.linalg.norm(f) * np.linalg.norm(g):.6f}")
for p in (1.0, 1.5, 2.0):
    print(
        f"  p={p}: op norm {operators.op_norm(t):.4f} <= ideal norm"
        f" {operators.schatten_norm(t, p):.4f}"
    )
