"""Spectral division as an explicit right-inverse net, applied to
deconvolution in the p-normed module.

Dividing the triangular kernel coefficients by the coefficients of f gives
members h_n with f * h_n exactly the order-n kernel, so f is certified
approximately invertible whenever its coefficients clear the division floor
on the band.  Pushing the same net through the module recovers g from the
blurred observation f (*) g, with the noiseless error exactly the kernel
approximation error of g.
"""

import numpy as np

from approxinv import banach_module as bm
from approxinv import wiener
from approxinv.core import check_approx_invertible
from approxinv.errors import DivisionFloorError

grid = wiener.CircleGrid(2048)
blur = wiener.poisson_kernel(grid, 0.5)
floor = 0.5**300  # admit the whole band used below

print("division exactness ||f * h_n - K_n||_1")
for n in (4, 16, 64):
    h = wiener.wiener_division(blur, n, floor)
    resid = wiener.l1_norm(wiener.convolve(blur, h) - wiener.fejer_kernel(grid, n))
    print(f"  n={n:3d}  residual = {resid:.3e}")

print("\ncertification through the division net")
cert = check_approx_invertible(
    wiener.l1_circle_model(grid),
    blur,
    wiener.wiener_division_net(blur, floor),
    wiener.standard_test_set(grid),
    tol=1e-2,
    schedule=[8, 16, 32, 64, 128],
)
print(f"  verdict: {cert.verdict}, final residual {cert.right_trace.final_residual:.5f}")

print("\nvanishing coefficients refuse to divide:")
try:
    wiener.wiener_division(wiener.character(grid, 1), 4)
except DivisionFloorError as err:
    print(f"  {err}")

rng = np.random.default_rng(0)
band = {k: 0.6 ** abs(k) * np.exp(2j * np.pi * rng.random()) for k in range(-24, 25)}
truth = bm.ModuleSignal(wiener.CircleSignal.from_band(grid, band), p=2.0)
observed = bm.module_action(blur, truth)

print("\nnoiseless and noisy recovery error across the net")
print("  order   noiseless    sigma=1e-3")
for n in (8, 16, 32, 64, 128):
    clean = bm.deconvolve(blur, observed, n, truth=truth, floor=floor)
    noisy = bm.deconvolve(
        blur, observed, n, noise=bm.NoiseSpec(1e-3, seed=n), truth=truth, floor=floor
    )
    print(f"  {n:5d}   {clean.error:.3e}    {noisy.error:.3e}")
print(
    "  (noiseless error shrinks with the order; the inverse coefficients\n"
    "   amplify noise at deep bands, so the noisy error turns around -\n"
    "   the division floor exists to keep real runs out of that regime)"
)
