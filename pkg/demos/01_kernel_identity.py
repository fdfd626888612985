"""Walk through the unit-norm kernel family acting as an approximate identity
on the sampled circle.

The order-n kernel has triangular coefficients, unit algebra norm at every
order, and drives e_n * f -> f for each fixed f while the net itself never
settles down (no limit exists because the algebra has no unit in the
truncation regime).
"""

from approxinv import wiener
from approxinv.core import check_approximate_identity

grid = wiener.CircleGrid(2048)
model = wiener.l1_circle_model(grid)

print("kernel norms and coefficients")
for n in (1, 8, 64, 256):
    kernel = wiener.fejer_kernel(grid, n)
    coeffs = wiener.fourier(kernel, 70)
    print(
        f"  n={n:4d}  ||K_n||_1 = {wiener.l1_norm(kernel):.12f}"
        f"  K^(16) = {coeffs[16].real:.6f}"
    )

print("\nresiduals of K_n acting on the standard test set")
report = check_approximate_identity(
    model,
    wiener.fejer_family(grid),
    wiener.standard_test_set(grid),
    tol=1e-2,
    schedule=[8, 16, 32, 64, 128],
)
for i, n in enumerate([8, 16, 32, 64, 128]):
    worst = max(t.residuals[i] for t in report.traces)
    print(f"  n={n:4d}  worst residual = {worst:.6f}")
print(f"  verdict at tol 1e-2: {'pass' if report.passed else 'fail'}")

print("\nthe family is not Cauchy (no limit, hence no unit):")
for n in (8, 32, 128):
    gap = wiener.l1_norm(
        wiener.fejer_kernel(grid, n) - wiener.fejer_kernel(grid, 2 * n)
    )
    print(f"  ||K_{n} - K_{2*n}||_1 = {gap:.4f}")

print("\ntransform of the family tends to one at each fixed frequency:")
traces = wiener.aid_pointwise_limit_check(
    wiener.fejer_family(grid), [0, 16], schedule=[16, 32, 64, 128]
)
for k, trace in traces.items():
    path = ", ".join(f"{r:.4f}" for r in trace.residuals)
    print(f"  |K^(k={k}) - 1| along n: {path}")
