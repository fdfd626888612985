"""The registered verification scenarios behind the CLI.

Each scenario emits rows asserting ``residual <= bound``; rows carrying
``bound = inf`` are informational (recorded measurements with nothing to
violate).  Statement identifiers are stable strings documented in the
README.  Scenarios draw their randomness from a generator seeded per
scenario, so reports are reproducible byte for byte apart from timing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import banach_module as bm
from . import c0, disk, operators, wiener
from .cli import ReportRow, ScenarioConfig
from .core import check_approximate_identity
from .errors import DivisionFloorError

INF = float("inf")


class _Rows:
    """Row collector stamping elapsed milliseconds since scenario start."""

    def __init__(self, scenario: str, model: str):
        self.scenario = scenario
        self.model = model
        self.start = time.perf_counter()
        self.rows: list[ReportRow] = []

    def add(
        self,
        statement: str,
        index: int,
        residual: float,
        bound: float = INF,
        model: str | None = None,
    ) -> None:
        elapsed = int((time.perf_counter() - self.start) * 1000)
        verdict = "pass" if residual <= bound else "fail"
        self.rows.append(
            ReportRow(
                self.scenario,
                model or self.model,
                statement,
                index,
                float(residual),
                float(bound),
                verdict,
                elapsed,
            )
        )


def _fejer(config: ScenarioConfig, seed: int) -> list[ReportRow]:
    grid = wiener.CircleGrid(config.circle_samples)
    rows = _Rows("fejer", f"l1-circle-{grid.M}")
    freqs = np.fft.fftfreq(grid.M, 1.0 / grid.M).astype(int)
    for n in config.schedule:
        kernel = wiener.fejer_kernel(grid, n)
        rows.add(
            "fejer-unit-norm", n, abs(wiener.l1_norm(kernel) - 1.0), config.exact_tol
        )
        tri = np.maximum(0.0, 1.0 - np.abs(freqs) / n)
        rows.add(
            "fejer-coefficients", n, float(np.abs(kernel.coeffs - tri).max()), 1e-10
        )
    report = check_approximate_identity(
        wiener.l1_circle_model(grid),
        wiener.fejer_family(grid),
        wiener.standard_test_set(grid),
        tol=config.identity_tol,
        schedule=config.schedule,
    )
    worst = [max(t.residuals[i] for t in report.traces) for i in range(len(config.schedule))]
    for i, n in enumerate(config.schedule):
        bound = config.identity_tol if n == config.schedule[-1] else INF
        rows.add("fejer-identity", n, worst[i], bound)
    return rows.rows


def _wiener_division(config: ScenarioConfig, seed: int) -> list[ReportRow]:
    grid = wiener.CircleGrid(config.circle_samples)
    rows = _Rows("wiener-division", f"l1-circle-{grid.M}")
    for r in (0.3, 0.5, 0.7):
        f = wiener.poisson_kernel(grid, r)
        for n in config.schedule:
            if n > 128:
                continue
            floor = 0.5 * r ** (n - 1)  # admit the full band deliberately
            h = wiener.wiener_division(f, n, floor)
            resid = wiener.l1_norm(
                wiener.convolve(f, h) - wiener.fejer_kernel(grid, n)
            )
            rows.add(f"division-exactness-r{r}", n, resid, config.exact_tol)
    monomial = wiener.character(grid, 1)
    try:
        wiener.wiener_division(monomial, 4)
        raised = False
        frequency = -1
    except DivisionFloorError as err:
        raised = True
        frequency = err.frequency
    rows.add("division-floor-raised", 4, 0.0 if raised and frequency == 0 else 1.0, 0.0)
    return rows.rows


def _um_net(config: ScenarioConfig, seed: int) -> list[ReportRow]:
    n = config.matrix_size
    rows = _Rows("um-net", f"matrices-{n}-schatten-2.0")
    rng = np.random.default_rng(seed)
    worst_proj = np.zeros(n)
    worst_final = 0.0
    for _ in range(config.matrix_count):
        t = _full_rank_operator(n, rng)
        net = operators.right_inverse_net(t)
        system = operators.svd(t)
        for m in range(1, n + 1):
            proj = operators.output_projection(system, m)
            worst_proj[m - 1] = max(
                worst_proj[m - 1], operators.op_norm(t @ net(m) - proj)
            )
        for _ in range(4):
            c = operators._sample_operator(n, rng)
            worst_final = max(
                worst_final,
                operators.schatten_norm(t @ net(n) @ c - c, 2.0),
            )
    for m in range(1, n + 1):
        rows.add("projection-identity", m, float(worst_proj[m - 1]), config.exact_tol)
    rows.add("net-final-residual", n, worst_final, config.exact_tol)

    deficient = _full_rank_operator(n, rng)
    deficient[:, 0] = 0.0
    certificate = operators.certify_operator(deficient, [np.eye(n, dtype=complex)])
    rows.add(
        "rank-refuted", 0, 0.0 if certificate.verdict == "refuted" else 1.0, 0.0
    )
    return rows.rows


def _pure_state(config: ScenarioConfig, seed: int) -> list[ReportRow]:
    n = config.matrix_size
    rows = _Rows("pure-state", f"matrices-{n}-op")
    rng = np.random.default_rng(seed)
    threshold = 1e-8
    disagreements = 0
    cases = 10 * config.matrix_count
    for i in range(cases):
        t = operators._sample_operator(n, rng)
        if i % 3 == 0:  # deliberately singular third
            t[:, i % n] = 0.0
        by_rank = operators.range_kernel_refuter(t, threshold).dense_range
        by_sigma = bool(operators.singular_values(t)[-1] > threshold)
        by_state = bool(
            operators.min_pure_state_norm(t, 200, seed=seed + i) > threshold
        )
        if not (by_rank == by_sigma == by_state):
            disagreements += 1
    rows.add("criterion-agreement", cases, float(disagreements), 0.0)
    return rows.rows


def _c0_interior(config: ScenarioConfig, seed: int) -> list[ReportRow]:
    space = c0.GridSpace(
        config.grid_half_width, config.grid_points, config.grid_tail_tol
    )
    rows = _Rows("c0-interior", f"c0-grid-{space.points}")
    elements = c0.seeded_elements(space, 50, seed)
    test_set = [f for f in c0.seeded_elements(space, 4, seed + 1, zero_fraction=0.0)]
    mismatches = 0
    certified: list[np.ndarray] = []
    for f in elements:
        cert = c0.certify(space, f, test_set)
        nonvanishing = bool(c0.is_nonvanishing(f, 1e-6))
        if cert.certified != nonvanishing or (
            (cert.verdict == "refuted") != (not nonvanishing)
        ):
            mismatches += 1
        if cert.certified:
            certified.append(f)
    rows.add("criterion-equivalence", len(elements), float(mismatches), 0.0)
    for eps in (1e-1, 1e-2):
        index = int(round(-np.log10(eps)))
        worst_dist = 0.0
        zero_failures = 0
        for f in certified:
            g = c0.perturb_to_noninvertible(space, f, eps)
            worst_dist = max(worst_dist, c0.sup_norm(g - f))
            if np.abs(g).min() != 0.0:
                zero_failures += 1
        rows.add("perturbation-distance", index, worst_dist, eps)
        rows.add("perturbation-zero", index, float(zero_failures), 0.0)
    return rows.rows


def _disk13(config: ScenarioConfig, seed: int) -> list[ReportRow]:
    sampling = disk.CircleSampling(config.disk_angles)
    rows = _Rows("disk13", f"disk-a0-deg{config.disk_degree}")
    margin = disk.ONE_THIRD - 1e-2
    annulus = disk.minimize_annulus_deviation(
        sampling, config.disk_degree, config.disk_starts, seed
    )
    rows.add("annulus-found-minimum", annulus.starts, annulus.value)
    rows.add("annulus-margin", annulus.starts, max(0.0, margin - annulus.value), 0.0)
    product = disk.minimize_product_deviation(
        sampling, config.disk_degree, config.disk_starts, seed + 1
    )
    rows.add("product-found-minimum", product.starts, product.value)
    rows.add("product-margin", product.starts, max(0.0, margin - product.value), 0.0)
    rng = np.random.default_rng(seed + 2)
    worst = 0.0
    for _ in range(50):
        p = disk.random_a0(rng, 16)
        with_chi, plain = disk.chi1_isometry_check(p, sampling)
        worst = max(worst, abs(with_chi - plain))
    rows.add("monomial-isometry", 50, worst, 1e-12)
    return rows.rows


def _deconv(config: ScenarioConfig, seed: int) -> list[ReportRow]:
    grid = wiener.CircleGrid(config.circle_samples)
    rows = _Rows("deconv", f"module-p{config.module_exponent}")
    rng = np.random.default_rng(seed)
    p = config.module_exponent
    truth = bm.ModuleSignal(wiener._sample_bandlimited(grid, rng, 32, 0.5), p)
    blur = wiener.poisson_kernel(grid, 0.5)
    observed = bm.module_action(blur, truth)
    floor = 0.5 * 0.5 ** max(config.schedule)
    errors = []
    for n in config.schedule:
        result = bm.deconvolve(blur, observed, n, truth=truth, floor=floor)
        tail = bm.kernel_tail_error(truth, n)
        errors.append(result.error)
        rows.add("noiseless-error", n, result.error)
        mismatch = abs(result.error - tail) / tail if tail > 0 else 0.0
        rows.add("noiseless-tail-match", n, mismatch, config.exact_tol)
        noisy = bm.deconvolve(
            blur,
            observed,
            n,
            noise=bm.NoiseSpec(config.noise_sigma, seed + n),
            truth=truth,
            floor=floor,
        )
        rows.add("noisy-error", n, noisy.error)
    increase = max(
        (b - a for a, b in zip(errors, errors[1:])), default=0.0
    )
    rows.add("noiseless-monotone", max(config.schedule), max(0.0, increase), 0.0)
    return rows.rows


def _tdz(config: ScenarioConfig, seed: int) -> list[ReportRow]:
    grid = wiener.CircleGrid(config.circle_samples)
    rows = _Rows("tdz", f"l1-circle-{grid.M}")
    f = wiener.poisson_kernel(grid, 0.5)
    values = []
    for big_n in range(1, 65):
        value = wiener.tdz_witness(f, big_n).value
        values.append(value)
        rows.add("witness-value", big_n, value)
    rows.add("witness-exact-at-20", 20, abs(values[19] - 0.5**20), 1e-10)
    increase = max(
        (b - a for a, b in zip(values, values[1:])), default=0.0
    )
    rows.add("witness-monotone", 64, max(0.0, increase), 0.0)
    return rows.rows


def _full_rank_operator(n: int, rng: np.random.Generator) -> np.ndarray:
    """Seeded dense operator kept safely away from rank deficiency."""
    while True:
        t = operators._sample_operator(n, rng)
        lam = operators.singular_values(t)
        if lam[-1] > 1e-2 * lam[0]:
            return t


@dataclass(frozen=True)
class ScenarioSpec:
    run: Callable[[ScenarioConfig, int], list[ReportRow]]
    statements: tuple[str, ...]
    description: str


REGISTRY: dict[str, ScenarioSpec] = {
    "fejer": ScenarioSpec(
        _fejer,
        ("fejer-unit-norm", "fejer-coefficients", "fejer-identity"),
        "unit-norm kernel family acting as an approximate identity",
    ),
    "wiener-division": ScenarioSpec(
        _wiener_division,
        ("division-exactness-r0.3", "division-exactness-r0.5",
         "division-exactness-r0.7", "division-floor-raised"),
        "spectral division reproducing the kernel family exactly",
    ),
    "um-net": ScenarioSpec(
        _um_net,
        ("projection-identity", "net-final-residual", "rank-refuted"),
        "singular-direction right-inverse nets for full-rank operators",
    ),
    "pure-state": ScenarioSpec(
        _pure_state,
        ("criterion-agreement",),
        "three-way agreement of the invertibility criteria for operators",
    ),
    "c0-interior": ScenarioSpec(
        _c0_interior,
        ("criterion-equivalence", "perturbation-distance", "perturbation-zero"),
        "grid-function certification and boundary perturbations",
    ),
    "disk13": ScenarioSpec(
        _disk13,
        ("annulus-found-minimum", "annulus-margin", "product-found-minimum",
         "product-margin", "monomial-isometry"),
        "one-third separation bounds in the origin-vanishing disk algebra",
    ),
    "deconv": ScenarioSpec(
        _deconv,
        ("noiseless-error", "noiseless-tail-match", "noisy-error",
         "noiseless-monotone"),
        "module deconvolution through the division net, with noise sweep",
    ),
    "tdz": ScenarioSpec(
        _tdz,
        ("witness-value", "witness-exact-at-20", "witness-monotone"),
        "character witnesses for the zero-divisor modulus decay",
    ),
}
