"""Deterministic numerical primitives.

All routines here are bit-reproducible: refinement schedules are fixed
functions of their inputs, node sets come from cached Gauss-Legendre
rules, and no randomness or thread-dependent reduction order is used.

Integrand convention: callables passed to the quadrature routines must
accept a float ndarray of abscissae and return an ndarray of values
(real or complex) of the same shape.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, NoCrossingError


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls composite Gauss-Legendre integration.

    order
        Nodes per panel. A single panel of order p integrates
        polynomials up to degree 2p-1 exactly; the composite rule
        converges at order 2p in the panel width on smooth integrands.
    rel_tol
        Relative change between successive refinements at which the
        result is accepted.
    max_refinements
        Number of panel doublings attempted before giving up.
    """

    order: int = 20
    rel_tol: float = 1e-12
    max_refinements: int = 12

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("quadrature order must be >= 1")
        if self.rel_tol <= 0.0:
            raise ValueError("rel_tol must be positive")


@dataclass(frozen=True)
class PVSpec:
    """Controls principal-value integration.

    The singular point is excised symmetrically with half width
    ``half_width`` and the excision is shrunk by factor 2 per
    refinement until the value stabilizes to ``rel_tol``.
    """

    half_width: float = 1e-6
    rel_tol: float = 1e-9
    max_refinements: int = 20
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if self.half_width <= 0.0:
            raise ValueError("half_width must be positive")


@lru_cache(maxsize=64)
def _gl_nodes(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _panel_values(f, a: float, b: float, order: int, panels: int):
    x, w = _gl_nodes(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    # nodes for all panels stacked into one evaluation
    pts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    vals = np.asarray(f(pts)).reshape(panels, order)
    return np.sum(vals * w[None, :] * half[:, None])


def integrate(f, a: float, b: float, spec: QuadratureSpec = QuadratureSpec()):
    """Integrate ``f`` over [a, b] with panel-doubling Gauss-Legendre.

    Returns ``(value, last_change)`` where ``last_change`` is the
    relative change produced by the final refinement. Raises
    ConvergenceError when the change never drops below ``spec.rel_tol``.
    """
    if b == a:
        return 0.0, 0.0
    prev = _panel_values(f, a, b, spec.order, 1)
    cur = prev
    for k in range(1, spec.max_refinements + 1):
        cur = _panel_values(f, a, b, spec.order, 2 ** k)
        scale = max(abs(cur), abs(prev), 1e-300)
        change = abs(cur - prev) / scale
        if change < spec.rel_tol:
            return cur, change
        if k < spec.max_refinements:
            prev = cur
    raise ConvergenceError(
        f"quadrature did not reach rel_tol={spec.rel_tol:g} after "
        f"{spec.max_refinements} refinements", last=cur, previous=prev)


def pv_integrate(f, pole: float, a: float, b: float,
                 spec: PVSpec = PVSpec()):
    """Principal value of ``f`` over [a, b] with a simple pole inside.

    The window is split into the largest interval symmetric about the
    pole plus a regular remainder. On the symmetric part the two sides
    are folded together, which cancels the odd singular part exactly;
    the excised core [pole-d, pole+d] is then shrunk until the value
    stabilizes. Requires a < pole < b.

    Accuracy is limited to roughly 1e-9 relative on well-scaled
    problems: evaluating f(pole + u) reconstructs x - pole inside f
    with cancellation, so the folded integrand carries roundoff
    chatter of size eps/u^2 near the pole. The core quadrature is
    therefore allowed to plateau at that noise floor; error control
    lives in the excision-shrinking loop.
    """
    if not (a < pole < b):
        raise ValueError("pole must lie strictly inside the window")
    radius = min(pole - a, b - pole)
    outer = 0.0
    if pole - a > radius:
        outer, _ = integrate(f, a, pole - radius, spec.quad)
    elif b - pole > radius:
        outer, _ = integrate(f, pole + radius, b, spec.quad)

    def folded(u):
        return f(pole + u) + f(pole - u)

    core_quad = QuadratureSpec(
        order=spec.quad.order,
        rel_tol=max(spec.quad.rel_tol, 0.1 * spec.rel_tol),
        max_refinements=spec.quad.max_refinements,
    )

    def core_value(d):
        try:
            val, _ = integrate(folded, d, radius, core_quad)
        except ConvergenceError as exc:
            # plateaued at the near-pole noise floor; accept it and
            # rely on the excision loop for the actual error control
            val = exc.last
        return val

    d = min(spec.half_width, 0.25 * radius)
    prev = None
    value = None
    for _ in range(spec.max_refinements + 1):
        value = outer + core_value(d)
        if prev is not None:
            scale = max(abs(value), abs(prev), 1e-300)
            if abs(value - prev) / scale < spec.rel_tol:
                return value
        prev = value
        d *= 0.5
    raise ConvergenceError(
        f"principal value did not stabilize to rel_tol={spec.rel_tol:g}",
        last=value, previous=prev)


def principal_csqrt(w: complex) -> complex:
    """Principal complex square root: the branch with Re >= 0.

    For negative real arguments the result is +i*sqrt(|w|), i.e. ties
    on the imaginary axis are broken toward non-negative imaginary
    part. Negative zero components are normalized away so equal inputs
    give bit-identical outputs.
    """
    r = cmath.sqrt(complex(w))
    return complex(r.real + 0.0, r.imag + 0.0)


def find_root(g, lo: float, hi: float, rel_tol: float = 1e-12,
              max_iter: int = 200) -> float:
    """Bisection root of ``g`` on [lo, hi].

    The bracket is shrunk until its width is below ``rel_tol`` times
    the midpoint magnitude (or absolute width for roots near zero).
    Raises NoCrossingError when g(lo) and g(hi) have the same sign.
    """
    if not (hi > lo):
        raise ValueError("need hi > lo")
    glo = g(lo)
    ghi = g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if (glo > 0.0) == (ghi > 0.0):
        raise NoCrossingError(
            "no sign change over the scanned bracket",
            scanned_range=(lo, hi), value_range=(glo, ghi))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        width = hi - lo
        if width <= rel_tol * max(abs(mid), 1.0e-30):
            return mid
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (gm > 0.0) == (glo > 0.0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def kahan_sum(values) -> float:
    """Neumaier-compensated sum of an iterable of floats.

    Keeps the running compensation term so that summing 1e7 copies of
    0.1 stays within 1e-6 of the exact 1e6, where a naive left fold
    drifts by orders of magnitude more.
    """
    total = 0.0
    comp = 0.0
    for v in values:
        v = float(v)
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def kahan_csum(values) -> complex:
    """Compensated sum of complex values (real and imaginary parts
    summed independently)."""
    arr = np.asarray(values, dtype=complex)
    return complex(kahan_sum(arr.real), kahan_sum(arr.imag))
