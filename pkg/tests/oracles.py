"""Independent reference computations used to pin expected test values.

Everything here deliberately avoids the production code paths: convolution
is the quadratic direct sum, Fourier coefficients are explicit quadrature
sums, kernel values come from the closed trigonometric form, and singular
values are extracted through the characteristic polynomial.
"""

import numpy as np


def direct_convolve(f_values: np.ndarray, g_values: np.ndarray) -> np.ndarray:
    """O(M^2) circular convolution with unit-mass normalization."""
    f_values = np.asarray(f_values, complex)
    g_values = np.asarray(g_values, complex)
    m = f_values.shape[0]
    idx = np.arange(m)
    out = np.empty(m, complex)
    for i in range(m):
        out[i] = f_values[(i - idx) % m] @ g_values / m
    return out


def direct_coeff(values: np.ndarray, k: int) -> complex:
    """Quadrature Fourier coefficient (1/M) sum values * exp(-ik theta)."""
    values = np.asarray(values, complex)
    m = values.shape[0]
    theta = 2.0 * np.pi * np.arange(m) / m
    return complex(values @ np.exp(-1j * k * theta) / m)


def fejer_values_closed_form(M: int, n: int) -> np.ndarray:
    """Kernel values from (1/n) (sin(n theta/2) / sin(theta/2))^2."""
    theta = 2.0 * np.pi * np.arange(M) / M
    out = np.empty(M)
    for i, t in enumerate(theta):
        s = np.sin(t / 2.0)
        out[i] = n if abs(s) < 1e-15 else (np.sin(n * t / 2.0) / s) ** 2 / n
    return out


def charpoly_singular_values(a: np.ndarray) -> np.ndarray:
    """Singular values as square roots of the eigenvalues of a^H a, found by
    rooting the characteristic polynomial (Newton's identities); n <= 4."""
    a = np.asarray(a, complex)
    gram = a.conj().T @ a
    n = gram.shape[0]
    assert n <= 4, "characteristic-polynomial oracle only for small n"
    power_sums = [
        float(np.trace(np.linalg.matrix_power(gram, k)).real)
        for k in range(1, n + 1)
    ]
    elementary = [1.0]
    for k in range(1, n + 1):
        acc = 0.0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * elementary[k - i] * power_sums[i - 1]
        elementary.append(acc / k)
    coeffs = [(-1) ** k * elementary[k] for k in range(n + 1)]
    roots = np.roots(coeffs)
    values = np.sqrt(np.clip(roots.real, 0.0, None))
    return np.sort(values)[::-1]


def kernel_tail_p2(band: dict[int, complex], n: int) -> float:
    """Exact p=2 error of the order-n kernel action on a trig polynomial:
    sqrt(sum min(1, |k|/n)^2 |g_hat(k)|^2)."""
    return float(
        np.sqrt(
            sum(
                min(1.0, abs(k) / n) ** 2 * abs(c) ** 2
                for k, c in band.items()
            )
        )
    )
