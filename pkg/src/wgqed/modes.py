"""Eigenmodes of a hollow rectangular waveguide with perfectly
conducting walls.

The cross section occupies 0 <= x <= width, 0 <= y <= height and the
guide axis runs along z. Fields follow the engineering time convention
exp(+i*frequency*t), so a wave traveling toward +z carries
exp(-i*axial_wavenumber*z). All frequencies are angular; units are
such that the filling medium enters only through its relative
permittivity and permeability.

Two axial branches exist for every transverse pattern:

* above the cutoff frequency the mode propagates with a real axial
  wavenumber (oscillatory profile);
* below cutoff the same pattern decays away from a source plane with a
  real attenuation constant (profile exp(-attenuation*|z - z0|)).

For the decaying branch the transverse components that are linear in
the axial derivative must change sign across the source plane,
otherwise the field would not stay divergence free on both sides. The
evaluator handles that sign internally; at the kink itself those
components vanish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError

# relative frequency distance below which a mode counts as degenerate
# with its cutoff (axial wavenumber underflows, normalization blows up)
CUTOFF_REL_TOL = 1e-12


class Polarization(Enum):
    """Transverse-magnetic (axial E) or transverse-electric (axial H)."""

    TM = "TM"
    TE = "TE"


class Branch(Enum):
    PROPAGATING = "propagating"
    LOCALIZED = "localized"


class AxialProfile(Enum):
    """Axial dependence requested from the field evaluator.

    ONE_SIDED
        Plain exponential exp(-g*(z - z0)) in the branch constant g.
        On the propagating branch this is the traveling wave; below
        cutoff it is the raw half-space solution, which grows without
        bound on the other side of the source plane.
    FOLDED
        exp(-attenuation*|z - z0|), the two-sided decaying profile
        with a derivative kink on the source plane. Only the decaying
        branch supports it.
    """

    ONE_SIDED = "one-sided"
    FOLDED = "folded"


@dataclass(frozen=True)
class WaveguideSpec:
    """Geometry and filling of the guide.

    width, height
        Transverse extents along x and y. Orient the guide so that
        width >= height; the lowest cutoff then belongs to the TE
        pattern with one half-wave along x.
    permittivity, permeability
        Relative material constants of the homogeneous filling.
    """

    width: float
    height: float
    permittivity: float = 1.0
    permeability: float = 1.0

    def __post_init__(self):
        if not (self.width > 0.0 and self.height > 0.0):
            raise DomainError("cross section extents must be positive")
        if self.height > self.width:
            raise DomainError("orient the guide so that width >= height")
        if not (self.permittivity > 0.0 and self.permeability > 0.0):
            raise DomainError("material constants must be positive")

    @property
    def cross_section_area(self) -> float:
        return self.width * self.height

    @property
    def refractive_index(self) -> float:
        return math.sqrt(self.permittivity * self.permeability)


@dataclass(frozen=True)
class ModeIndex:
    """Half-wave counts (m along x, n along y) plus polarization.

    TM patterns need both counts positive; TE patterns allow one zero
    index but not both.
    """

    polarization: Polarization
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise DomainError("mode indices must be non-negative")
        if self.polarization is Polarization.TM:
            if self.m < 1 or self.n < 1:
                raise DomainError("TM modes need m >= 1 and n >= 1")
        else:
            if self.m == 0 and self.n == 0:
                raise DomainError("TE(0,0) does not exist")

    def sort_key(self):
        return (self.polarization.value, self.m, self.n)


def transverse_wavenumbers(spec: WaveguideSpec, mode: ModeIndex):
    """Partial wavenumbers (m*pi/width, n*pi/height) of the pattern."""
    return (mode.m * math.pi / spec.width, mode.n * math.pi / spec.height)


def transverse_wavenumber(spec: WaveguideSpec, mode: ModeIndex) -> float:
    kx, ky = transverse_wavenumbers(spec, mode)
    return math.hypot(kx, ky)


def cutoff_frequency(spec: WaveguideSpec, mode: ModeIndex) -> float:
    """Angular frequency separating the two axial branches."""
    return transverse_wavenumber(spec, mode) / spec.refractive_index


@dataclass(frozen=True)
class ModeDispersion:
    """Axial behaviour of one mode at one angular frequency."""

    spec: WaveguideSpec
    mode: ModeIndex
    frequency: float
    transverse_wavenumber: float
    cutoff_frequency: float
    medium_wavenumber: float
    branch: Branch
    axial_wavenumber: float | None  # real, propagating branch only
    attenuation: float | None       # real, localized branch only

    @property
    def axial_factor(self) -> complex:
        """Complex axial constant g in the profile exp(-g*z): i*beta on
        the propagating branch, the real attenuation below cutoff."""
        if self.branch is Branch.PROPAGATING:
            return 1j * self.axial_wavenumber
        return complex(self.attenuation)


def dispersion(spec: WaveguideSpec, mode: ModeIndex,
               frequency: float) -> ModeDispersion:
    """Classify a (mode, frequency) pair and solve the axial relation.

    Raises DomainError for non-positive frequencies and for
    frequencies within CUTOFF_REL_TOL (relative) of the cutoff, where
    both branches degenerate.
    """
    if frequency <= 0.0:
        raise DomainError("frequency must be positive")
    h = transverse_wavenumber(spec, mode)
    nu_c = h / spec.refractive_index
    k = frequency * spec.refractive_index
    if abs(frequency - nu_c) <= CUTOFF_REL_TOL * nu_c:
        raise DomainError(
            f"frequency {frequency!r} is degenerate with the cutoff "
            f"{nu_c!r} of {mode.polarization.value}({mode.m},{mode.n})")
    if frequency > nu_c:
        beta = math.sqrt(k * k - h * h)
        return ModeDispersion(spec, mode, frequency, h, nu_c, k,
                              Branch.PROPAGATING, beta, None)
    gamma = math.sqrt(h * h - k * k)
    return ModeDispersion(spec, mode, frequency, h, nu_c, k,
                          Branch.LOCALIZED, None, gamma)


@dataclass(frozen=True)
class ModeField:
    """Complex field sample(s); trailing axis is the (x, y, z) triple."""

    electric: np.ndarray
    magnetic: np.ndarray


def field_at(spec: WaveguideSpec, mode: ModeIndex, frequency: float,
             points, *, amplitude: complex = 1.0, direction: int = 1,
             source_plane: float = 0.0,
             profile: AxialProfile | None = None) -> ModeField:
    """Evaluate the mode's electric and magnetic field.

    points
        Array-like of shape (..., 3) with cartesian coordinates.
    amplitude
        Scalar multiplying the axial component of the defining field
        (E for TM, H for TE).
    direction
        +1 or -1, travel direction along z on the propagating branch.
        Ignored below cutoff, where the profile decays both ways from
        the source plane.
    source_plane
        Axial position z0 of zero phase (propagating) or of the
        profile kink (localized).
    profile
        Axial dependence; defaults to the traveling wave above cutoff
        and the FOLDED two-sided profile below. Requesting FOLDED on
        the propagating branch is refused.
    """
    if direction not in (1, -1):
        raise DomainError("direction must be +1 or -1")
    disp = dispersion(spec, mode, frequency)
    if profile is None:
        profile = (AxialProfile.ONE_SIDED
                   if disp.branch is Branch.PROPAGATING
                   else AxialProfile.FOLDED)
    if (profile is AxialProfile.FOLDED
            and disp.branch is Branch.PROPAGATING):
        raise DomainError(
            "the folded |z| profile only exists below cutoff")
    pts = np.asarray(points, dtype=float)
    if pts.shape[-1] != 3:
        raise DomainError("points must have a trailing axis of length 3")
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    kx, ky = transverse_wavenumbers(spec, mode)
    h2 = disp.transverse_wavenumber ** 2
    dz = z - source_plane
    if disp.branch is Branch.PROPAGATING:
        gamma = 1j * direction * disp.axial_wavenumber
        axial = np.exp(-gamma * dz)
        odd_sign = np.ones_like(z)
    elif profile is AxialProfile.ONE_SIDED:
        gamma = complex(disp.attenuation)
        axial = np.exp(-disp.attenuation * dz)
        odd_sign = np.ones_like(z)
    else:
        gamma = complex(disp.attenuation)
        axial = np.exp(-disp.attenuation * np.abs(dz))
        # odd components flip across the kink and vanish on it
        odd_sign = np.sign(dz)

    sx, cx = np.sin(kx * x), np.cos(kx * x)
    sy, cy = np.sin(ky * y), np.cos(ky * y)
    nu = frequency
    eps, mu = spec.permittivity, spec.permeability
    zero = np.zeros_like(axial)

    if mode.polarization is Polarization.TM:
        ez = amplitude * sx * sy * axial
        ex = -(gamma / h2) * kx * amplitude * cx * sy * axial * odd_sign
        ey = -(gamma / h2) * ky * amplitude * sx * cy * axial * odd_sign
        hx = (1j * nu * eps / h2) * ky * amplitude * sx * cy * axial
        hy = -(1j * nu * eps / h2) * kx * amplitude * cx * sy * axial
        hz = zero
    else:
        hz = amplitude * cx * cy * axial
        ex = (1j * nu * mu / h2) * ky * amplitude * cx * sy * axial
        ey = -(1j * nu * mu / h2) * kx * amplitude * sx * cy * axial
        hx = (gamma / h2) * kx * amplitude * sx * cy * axial * odd_sign
        hy = (gamma / h2) * ky * amplitude * cx * sy * axial * odd_sign
        ez = zero

    electric = np.stack(np.broadcast_arrays(ex, ey, ez), axis=-1)
    magnetic = np.stack(np.broadcast_arrays(hx, hy, hz), axis=-1)
    return ModeField(electric=electric, magnetic=magnetic)


def field_evaluator(spec, mode, frequency, which="electric", **kwargs):
    """Point-wise callable returning one field vector, for use with the
    finite-difference residual checks below."""
    if which not in ("electric", "magnetic"):
        raise ValueError("which must be 'electric' or 'magnetic'")

    def evaluate(point):
        sample = field_at(spec, mode, frequency, point, **kwargs)
        return sample.electric if which == "electric" else sample.magnetic

    return evaluate


def helmholtz_residual(field_fn, wavenumber_sq: float, point,
                       step: float = 1e-3) -> float:
    """Max-abs residual of (laplacian + wavenumber_sq) applied to a
    vector field, by central second differences.

    The stencil spans +-step along each axis; keep the point farther
    than that from the walls and from any profile kink, or the
    residual measures the discontinuity instead of the field equation.
    """
    p = np.asarray(point, dtype=float)
    center = np.asarray(field_fn(p))
    lap = np.zeros_like(center, dtype=complex)
    for ax in range(3):
        offset = np.zeros(3)
        offset[ax] = step
        lap += (np.asarray(field_fn(p + offset)) - 2.0 * center
                + np.asarray(field_fn(p - offset))) / step ** 2
    return float(np.max(np.abs(lap + wavenumber_sq * center)))


def divergence_residual(field_fn, point, step: float = 1e-3) -> float:
    """Abs divergence of a vector field by central first differences.

    Same stencil caveat as helmholtz_residual.
    """
    p = np.asarray(point, dtype=float)
    div = 0.0 + 0.0j
    for ax in range(3):
        offset = np.zeros(3)
        offset[ax] = step
        div += (np.asarray(field_fn(p + offset))[..., ax]
                - np.asarray(field_fn(p - offset))[..., ax]) / (2.0 * step)
    return abs(div)


def _check_stencil_clearance(spec: WaveguideSpec, disp: ModeDispersion,
                             point, step: float, source_plane: float,
                             profile: AxialProfile | None):
    x, y, z = (float(point[0]), float(point[1]), float(point[2]))
    margin = 2.0 * step
    if not (margin <= x <= spec.width - margin
            and margin <= y <= spec.height - margin):
        raise DomainError(
            "stencil straddles a wall; keep the point at least "
            f"{margin!r} away from every boundary")
    folded = (disp.branch is Branch.LOCALIZED
              and profile is not AxialProfile.ONE_SIDED)
    if folded and abs(z - source_plane) < margin:
        raise DomainError(
            "stencil straddles the profile kink; move the point at "
            f"least {margin!r} from the source plane")


def mode_helmholtz_residual(spec: WaveguideSpec, mode: ModeIndex,
                            frequency: float, point,
                            step: float = 1e-3, *,
                            amplitude: complex = 1.0, direction: int = 1,
                            source_plane: float = 0.0,
                            profile: AxialProfile | None = None) -> float:
    """Normalized wave-equation residual of all six field components.

    Returns max |laplacian F + k^2 F| over the electric and magnetic
    components, divided by k^2 times the largest component magnitude
    at the point. Points whose +-2*step stencil touches a wall or the
    profile kink are refused rather than measured.
    """
    disp = dispersion(spec, mode, frequency)
    _check_stencil_clearance(spec, disp, point, step, source_plane,
                             profile)
    kwargs = dict(amplitude=amplitude, direction=direction,
                  source_plane=source_plane, profile=profile)
    k_sq = disp.medium_wavenumber ** 2
    center = field_at(spec, mode, frequency, point, **kwargs)
    scale = max(float(np.max(np.abs(center.electric))),
                float(np.max(np.abs(center.magnetic))))
    worst = 0.0
    for which in ("electric", "magnetic"):
        fn = field_evaluator(spec, mode, frequency, which, **kwargs)
        worst = max(worst, helmholtz_residual(fn, k_sq, point, step))
    return worst / (k_sq * scale)


def mode_divergence_residual(spec: WaveguideSpec, mode: ModeIndex,
                             frequency: float, point,
                             step: float = 1e-3, *,
                             amplitude: complex = 1.0, direction: int = 1,
                             source_plane: float = 0.0,
                             profile: AxialProfile | None = None) -> float:
    """Normalized electric-field divergence at a point.

    |div E| by central differences, divided by k times the largest
    electric component magnitude there. Same stencil clearance rules
    as mode_helmholtz_residual.
    """
    disp = dispersion(spec, mode, frequency)
    _check_stencil_clearance(spec, disp, point, step, source_plane,
                             profile)
    kwargs = dict(amplitude=amplitude, direction=direction,
                  source_plane=source_plane, profile=profile)
    center = field_at(spec, mode, frequency, point, **kwargs)
    scale = float(np.max(np.abs(center.electric)))
    fn = field_evaluator(spec, mode, frequency, "electric", **kwargs)
    return divergence_residual(fn, point, step) / (
        disp.medium_wavenumber * scale)


def modes_below(spec: WaveguideSpec, frequency_limit: float,
                max_index: int = 12):
    """Every mode with cutoff below ``frequency_limit``, as a list of
    (cutoff, mode) pairs sorted by cutoff then polarization then
    indices.

    Index counts are scanned up to ``max_index``; if a mode on that
    boundary still qualifies the enumeration might be incomplete and a
    DomainError asks for a larger bound.
    """
    if frequency_limit <= 0.0:
        raise DomainError("frequency limit must be positive")
    found = []
    for m in range(0, max_index + 1):
        for n in range(0, max_index + 1):
            for pol in (Polarization.TE, Polarization.TM):
                try:
                    mode = ModeIndex(pol, m, n)
                except DomainError:
                    continue
                nu_c = cutoff_frequency(spec, mode)
                if nu_c < frequency_limit:
                    if m == max_index or n == max_index:
                        raise DomainError(
                            f"mode {pol.value}({m},{n}) at the index bound "
                            f"{max_index} still lies below the frequency "
                            "limit; increase max_index")
                    found.append((nu_c, mode))
    found.sort(key=lambda item: (item[0],) + item[1].sort_key())
    return found
