"""The origin-vanishing disk polynomials as a counterexample model.

No product of two such elements can approach the generating monomial closer
than one third in the sup norm, and no candidate net can act as an
approximate identity; a seeded randomized search confirms the separation.
Multiplication by the generator is nevertheless an isometry, so the model
also separates approximate invertibility from the zero-divisor mechanism.
"""

import numpy as np

from approxinv import disk

sampling = disk.CircleSampling(1024)
rng = np.random.default_rng(3)

print("sampled sup norms on the circle")
chi = disk.chi1()
cubic = np.array([0.0, 0.5, 0.0, 0.25], complex)
for label, p in (("z", chi), ("z/2 + z^3/4", cubic)):
    print(f"  |{label}|: {disk.sup_norm_disk(p, sampling):.4f}")

print("\ninterior values obey the contraction bound |p(z)| <= |z| sup|p|")
for z in (0.5, 0.25 + 0.25j):
    value = abs(disk.poly_eval(cubic, np.asarray(z)))
    bound = abs(z) * disk.sup_norm_disk(cubic, sampling)
    print(f"  z={z}:  |p(z)| = {value:.4f} <= {bound:.4f}")

print("\nrandomized search for products close to the generator")
result = disk.minimize_product_deviation(sampling, degree=8, starts=2000, seed=11)
print(f"  best sup|f1 f2 - z| found: {result.value:.4f}  (provable floor: 1/3)")

result2 = disk.minimize_annulus_deviation(sampling, degree=8, starts=2000, seed=12)
print(f"  best annulus sup|f - 1| found: {result2.value:.4f}  (provable floor: 1/3)")
print("  the zero element already achieves deviation 1, the true optimum")

print("\nmultiplication by the generator preserves the norm")
for _ in range(3):
    p = disk.random_a0(rng, 8)
    with_chi, plain = disk.chi1_isometry_check(p, sampling)
    print(f"  |p z| = {with_chi:.6f}   |p| = {plain:.6f}")
print("  so the generator is no zero-divisor direction, yet nothing certifies")
