"""Functions vanishing at infinity, realized on a truncated symmetric grid.

The ambient space is the interval [-L, L] sampled at G points; "vanishing at
infinity" is encoded by a tail bound at the two extreme grid cells, which a
finite grid can check exactly while keeping the sup norm exact on the
representation.  Compact sets are index windows, approximate identities are
piecewise-linear plateau functions over growing windows (linear ramps keep
the reciprocal identity f * (e/f) = e exact in grid arithmetic), and
certification reduces to the element having no zero on the grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from .core import (
    AlgebraModel,
    ApproxIdentityFamily,
    ApproxInvCertificate,
    InverseNet,
    check_approx_invertible,
)
from .errors import CannotPerturbError, SingularDivisionError

#: Default reciprocal-division threshold, relative to the sup norm.
DIVISION_THRESHOLD_REL = 1e-12


@dataclass(frozen=True)
class GridSpace:
    """Symmetric grid t_i = -L + i*delta, i = 0..G-1, with a tail tolerance
    bounding admissible values at the two extreme cells.

    The tail tolerance must sit above any non-vanishing threshold used for
    certification: on a compact grid an element cannot clear a threshold
    everywhere while staying under a smaller tail bound at the boundary.
    """

    half_width: float
    points: int
    tail_tol: float = 1e-3

    def __post_init__(self):
        if self.points < 3:
            raise ValueError("grid needs at least 3 points")
        if self.half_width <= 0 or self.tail_tol <= 0:
            raise ValueError("half width and tail tolerance must be positive")

    @cached_property
    def t(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.points)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.points - 1)

    @property
    def center(self) -> int:
        return (self.points - 1) // 2


def sup_norm(f: np.ndarray) -> float:
    return float(np.abs(f).max())


def check_tail(space: GridSpace, f: np.ndarray) -> bool:
    """Whether f respects the vanishing-at-infinity surrogate."""
    return bool(abs(f[0]) <= space.tail_tol and abs(f[-1]) <= space.tail_tol)


@dataclass(frozen=True)
class CompactWindow:
    """Closed index interval [a, b] inside the grid."""

    a: int
    b: int

    def __post_init__(self):
        if not 0 <= self.a <= self.b:
            raise ValueError("window indices must satisfy 0 <= a <= b")

    def contains(self, other: "CompactWindow") -> bool:
        return self.a <= other.a and other.b <= self.b


def plateau(space: GridSpace, window: CompactWindow, ramp: int) -> np.ndarray:
    """Piecewise-linear bump: 1 on the window, linear ramp to 0 over ``ramp``
    cells on each side, 0 beyond."""
    if ramp < 1:
        raise ValueError("ramp width must be >= 1")
    if window.b > space.points - 1:
        raise ValueError("window exceeds the grid")
    if window.a - ramp < 0 or window.b + ramp > space.points - 1:
        raise ValueError("window plus ramp exceeds the grid")
    e = np.zeros(space.points)
    e[window.a : window.b + 1] = 1.0
    slope = np.arange(ramp + 1) / ramp
    e[window.a - ramp : window.a + 1] = slope
    e[window.b : window.b + ramp + 1] = slope[::-1]
    return e


@dataclass(frozen=True)
class WindowFamily:
    """Plateau approximate identity over nested growing windows."""

    space: GridSpace
    growth: Callable[[int], CompactWindow]
    ramp: int

    def window(self, n: int) -> CompactWindow:
        return self.growth(n)

    def element(self, n: int) -> np.ndarray:
        if n < 1:
            raise ValueError("net index must be >= 1")
        w = self.growth(n)
        if n > 1 and not w.contains(self.growth(n - 1)):
            raise ValueError(f"window growth is not nested at index {n}")
        return plateau(self.space, w, self.ramp)

    def as_identity_family(self) -> ApproxIdentityFamily:
        return ApproxIdentityFamily(self.element, norm_bound=1.0)


def plateau_family(
    space: GridSpace, growth: Callable[[int], CompactWindow], ramp: int = 1
) -> WindowFamily:
    return WindowFamily(space, growth, ramp)


def centered_family(
    space: GridSpace, step: Optional[int] = None, ramp: int = 2
) -> WindowFamily:
    """Windows growing symmetrically about the center, saturating at the
    largest window that still fits with its ramp."""
    cap = space.center - ramp
    if cap < 0:
        raise ValueError("grid too small for the requested ramp")
    if step is None:
        step = max(1, cap // 8)

    def growth(n: int) -> CompactWindow:
        half = min(n * step, cap)
        return CompactWindow(space.center - half, space.center + half)

    return WindowFamily(space, growth, ramp)


@dataclass(frozen=True)
class NonvanishingReport:
    ok: bool
    offending_index: Optional[int]
    min_abs: float

    def __bool__(self) -> bool:
        return self.ok


def is_nonvanishing(f: np.ndarray, threshold: float) -> NonvanishingReport:
    """min |f| > threshold, reporting the minimizing grid index on failure."""
    mags = np.abs(np.asarray(f))
    i = int(np.argmin(mags))
    ok = bool(mags[i] > threshold)
    return NonvanishingReport(ok, None if ok else i, float(mags[i]))


def reciprocal_inverse_net(
    f: np.ndarray,
    family: WindowFamily,
    threshold: Optional[float] = None,
) -> InverseNet:
    """The explicit inverse net g_n = e_n / f (zero off the plateau support).

    By construction f * g_n reproduces the plateau exactly up to rounding.
    Division is refused wherever |f| does not clear the threshold on the
    support of the requested window.
    """
    f = np.asarray(f, dtype=complex)
    if threshold is None:
        threshold = DIVISION_THRESHOLD_REL * sup_norm(f)

    def member(n: int) -> np.ndarray:
        e = family.element(n)
        support = e != 0.0
        mags = np.abs(f[support])
        if mags.size and mags.min() <= threshold:
            local = int(np.argmin(mags))
            index = int(np.flatnonzero(support)[local])
            raise SingularDivisionError(index, float(mags.min()), threshold)
        g = np.zeros_like(f)
        g[support] = e[support] / f[support]
        return g

    return InverseNet(member, "right")


def perturb_to_noninvertible(space: GridSpace, f: np.ndarray, eps: float) -> np.ndarray:
    """A perturbation g*f within eps of f that vanishes on the grid.

    The cutoff g is 1 wherever |f| >= eps/2 and ramps to 0 before the grid
    boundary, so the product changes f only where |f| < eps/2 and acquires an
    exact zero at the boundary cells.  If the eps/2 level set runs into the
    boundary the threshold widens to eps, which still keeps the perturbation
    within eps; elements honouring the tail invariant never need even that.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    f = np.asarray(f, dtype=complex)
    for level in (eps / 2.0, eps):
        big = np.flatnonzero(np.abs(f) >= level)
        if big.size == 0:
            return np.zeros_like(f)
        a, b = int(big[0]), int(big[-1])
        if a > 0 and b < space.points - 1:
            ramp = min(a, space.points - 1 - b)
            g = plateau(space, CompactWindow(a, b), ramp)
            return g * f
    raise CannotPerturbError("element stays above eps up to the grid boundary")


def zero_refuter(f: np.ndarray) -> Optional[str]:
    """Analytic refuter: an exact zero on the grid excludes certification."""
    mags = np.abs(np.asarray(f))
    if mags.min() == 0.0:
        return f"element vanishes at grid index {int(np.argmin(mags))}"
    return None


def _sample_element(space: GridSpace, rng: np.random.Generator) -> np.ndarray:
    """Smooth decaying element d(t) exp(g(t)) with a positive profile d that
    sinks to a quarter of the tail tolerance at the boundary cells and a
    bounded random exponent, so the element never vanishes on the grid while
    honouring the tail invariant."""
    t = space.t
    tail_level = space.tail_tol / 4.0
    margin = max(1, space.points // 10)
    envelope = plateau(
        space,
        CompactWindow(margin, space.points - 1 - margin),
        max(1, space.points // 12),
    )
    exponent = np.zeros(space.points, dtype=complex)
    for _ in range(3):
        center = rng.uniform(-0.6 * space.half_width, 0.6 * space.half_width)
        width = rng.uniform(space.half_width / 8.0, space.half_width / 2.0)
        amp = rng.normal(scale=0.4) + 1j * rng.normal(scale=0.4)
        exponent += amp * np.exp(-(((t - center) / width) ** 2))
    exponent /= max(1.0, float(np.abs(exponent).max()))  # keep |exp| in [1/e, e]
    profile = tail_level + (1.0 - tail_level) * envelope
    return profile * np.exp(exponent)


def seeded_elements(
    space: GridSpace, count: int, seed: int, zero_fraction: float = 0.5
) -> list[np.ndarray]:
    """Deterministic mixed bag: nonvanishing elements and elements with a
    planted exact zero at an interior grid point."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        f = _sample_element(space, rng)
        if i < count * zero_fraction:
            f[rng.integers(space.points // 4, 3 * space.points // 4)] = 0.0
        out.append(f)
    return out


def c0_model(space: GridSpace) -> AlgebraModel:
    """Pointwise function algebra on the grid under the sup norm."""
    return AlgebraModel(
        name=f"c0-grid-{space.points}",
        add=lambda a, b: a + b,
        scale=lambda c, a: complex(c) * a,
        mul=lambda a, b: a * b,
        norm=sup_norm,
        involution=np.conj,
        unital=False,
        sample=lambda rng: _sample_element(space, rng),
    )


def certify(
    space: GridSpace,
    f: np.ndarray,
    test_set: Sequence[np.ndarray],
    family: Optional[WindowFamily] = None,
    tol: float = 1e-3,
    max_index: int = 16,
    threshold: Optional[float] = None,
) -> ApproxInvCertificate:
    """Certify f through the reciprocal net over a growing window family,
    refuting on exact grid zeros.

    A sub-threshold (but nonzero) minimum aborts the division and yields an
    inconclusive certificate: absence of one usable net proves nothing.
    """
    model = c0_model(space)
    if zero_refuter(f) is not None:
        return check_approx_invertible(
            model, f, None, test_set, tol, max_index, refuter=zero_refuter
        )
    if family is None:
        family = centered_family(space)
    net = reciprocal_inverse_net(f, family, threshold)
    try:
        return check_approx_invertible(model, f, net, test_set, tol, max_index)
    except SingularDivisionError as err:
        return ApproxInvCertificate(
            f, net, None, None, "inconclusive", f"division refused: {err}"
        )
