"""Single-photon normalization of guide modes and dipole coupling.

Field operators are expanded as E = sum_modes (E_mode a + conj(E_mode)
a+), and the classical mode energy functional

    U = (1/2) * integral over the quantization volume of
        (permittivity |E|^2 + permeability |H|^2)

is pinned to one quantum, U = HBAR * frequency. Propagating modes live
in an axial box of length ``QuantizationBox.length`` with one state
per direction of travel; modes below cutoff carry the two-sided
decaying profile whose axial norm integrates to 1/attenuation, one
state per transverse pattern.

Closed-form amplitudes here were checked against direct quadrature of
the energy functional for every polarization and branch combination;
the factor-of-two bookkeeping for patterns with a zero index (uniform
along one transverse axis) comes out of that check, not out of per
polarization special cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .modes import (
    Branch,
    ModeIndex,
    Polarization,
    WaveguideSpec,
    dispersion,
    field_at,
)

# natural units throughout
HBAR = 1.0


class DensityModel(Enum):
    """How the axial state sum is converted to a frequency integral.

    PHASE_VELOCITY
        Per-direction weight length*sqrt(eps*mu)/(2*pi): the state
        count is taken with the bulk medium index alone, which ignores
        the flattening of the guided dispersion near cutoff.
    GROUP_VELOCITY
        Per-direction weight length*eps*mu*frequency /
        (2*pi*axial_wavenumber): the exact Jacobian of the guided
        dispersion relation, divergent toward cutoff.
    """

    PHASE_VELOCITY = "paper"
    GROUP_VELOCITY = "dispersion"


@dataclass(frozen=True)
class QuantizationBox:
    """Axial normalization length for propagating modes."""

    length: float = 1.0

    def __post_init__(self):
        if self.length <= 0.0:
            raise DomainError("box length must be positive")


@dataclass(frozen=True)
class Atom:
    """Two-level emitter inside the guide.

    position
        Cartesian (x, y, z); the transverse part must lie inside the
        cross section.
    dipole
        Complex transition dipole vector.
    transition_frequency
        Angular frequency of the bare transition, positive.
    """

    position: tuple
    dipole: tuple
    transition_frequency: float

    def __post_init__(self):
        if len(self.position) != 3 or len(self.dipole) != 3:
            raise DomainError("position and dipole must have 3 components")
        if self.transition_frequency <= 0.0:
            raise DomainError("transition frequency must be positive")

    def position_array(self) -> np.ndarray:
        return np.asarray(self.position, dtype=float)

    def dipole_array(self) -> np.ndarray:
        return np.asarray(self.dipole, dtype=complex)

    def check_inside(self, spec: WaveguideSpec):
        x, y = self.position[0], self.position[1]
        if not (0.0 <= x <= spec.width and 0.0 <= y <= spec.height):
            raise DomainError(
                f"atom transverse position ({x!r}, {y!r}) lies outside "
                "the cross section")


def _index_weight(mode: ModeIndex) -> int:
    # each nonzero index halves the transverse average of its squared
    # trig factor, which doubles the amplitude needed for one quantum
    cm = 1 if mode.m == 0 else 2
    cn = 1 if mode.n == 0 else 2
    return cm * cn


def normalize(spec: WaveguideSpec, mode: ModeIndex, frequency: float,
              box: QuantizationBox) -> float:
    """Amplitude of the defining axial component (E_z for TM, H_z for
    TE) that puts exactly one quantum of energy in the mode.
    """
    disp = dispersion(spec, mode, frequency)
    h2 = disp.transverse_wavenumber ** 2
    area = spec.cross_section_area
    if mode.polarization is Polarization.TM:
        pol_const = spec.permittivity
    else:
        pol_const = spec.permeability
    if disp.branch is Branch.PROPAGATING:
        axial_norm = box.length
        pattern = disp.medium_wavenumber ** 2
    else:
        axial_norm = 1.0 / disp.attenuation
        pattern = h2
    amp_sq = (HBAR * frequency * h2 * _index_weight(mode)
              / (pol_const * area * pattern * axial_norm))
    return math.sqrt(amp_sq)


def coupling_at(spec: WaveguideSpec, mode: ModeIndex, frequency: float,
                atom: Atom, box: QuantizationBox, *, direction: int = 1,
                source_plane: float | None = None) -> complex:
    """Dipole coupling constant of the normalized mode at the atom.

    Defined as -(dipole . E_mode(position)) / HBAR with the plain
    (unconjugated) dipole vector. On the localized branch the profile
    kink defaults to the atom's own axial position.
    """
    atom.check_inside(spec)
    disp = dispersion(spec, mode, frequency)
    if source_plane is None:
        if disp.branch is Branch.LOCALIZED:
            source_plane = float(atom.position[2])
        else:
            source_plane = 0.0
    amp = normalize(spec, mode, frequency, box)
    sample = field_at(spec, mode, frequency, atom.position_array(),
                      amplitude=amp, direction=direction,
                      source_plane=source_plane)
    return complex(-np.dot(atom.dipole_array(), sample.electric) / HBAR)


def continuum_weight(spec: WaveguideSpec, mode: ModeIndex,
                     frequency: float, box: QuantizationBox,
                     model: DensityModel) -> float:
    """States per unit angular frequency for one direction of travel.

    Above cutoff the box spacing 2*pi/length in the axial wavenumber
    is converted to frequency per ``model``. The decaying branch has
    no axial wavenumber to count and is refused; consumers that treat
    those profiles as a frequency continuum supply their own unit
    measure.
    """
    disp = dispersion(spec, mode, frequency)
    if disp.branch is Branch.LOCALIZED:
        raise DomainError(
            "state-density conversion only applies above cutoff; "
            f"{mode.polarization.value}({mode.m},{mode.n}) decays at "
            f"frequency {frequency!r}")
    eps_mu = spec.permittivity * spec.permeability
    if model is DensityModel.PHASE_VELOCITY:
        return box.length * math.sqrt(eps_mu) / (2.0 * math.pi)
    return (box.length * eps_mu * frequency
            / (2.0 * math.pi * disp.axial_wavenumber))


def mode_overlap(spec: WaveguideSpec, mode_a: ModeIndex,
                 mode_b: ModeIndex, frequency: float, *,
                 amplitude_a: complex = 1.0, amplitude_b: complex = 1.0,
                 z: float = 0.25, direction_a: int = 1,
                 direction_b: int = 1, source_plane: float = 0.0,
                 order: int | None = None) -> complex:
    """Cross-section energy inner product of two modes at height z,

        (1/2) * integral over the cross section of
        (permittivity conj(E_a).E_b + permeability conj(H_a).H_b).

    Distinct transverse patterns at a common frequency give zero;
    that, not the same-mode value, is the quantity of interest here.
    """
    if order is None:
        order = 8 + 4 * max(mode_a.m + mode_b.m, mode_a.n + mode_b.n)
    gx, wx = np.polynomial.legendre.leggauss(order)
    gy, wy = np.polynomial.legendre.leggauss(order)
    x = 0.5 * spec.width * (gx + 1.0)
    y = 0.5 * spec.height * (gy + 1.0)
    wx = wx * 0.5 * spec.width
    wy = wy * 0.5 * spec.height
    xx, yy = np.meshgrid(x, y, indexing="ij")
    pts = np.stack([xx, yy, np.full_like(xx, z)], axis=-1)
    f_a = field_at(spec, mode_a, frequency, pts, amplitude=amplitude_a,
                   direction=direction_a, source_plane=source_plane)
    f_b = field_at(spec, mode_b, frequency, pts, amplitude=amplitude_b,
                   direction=direction_b, source_plane=source_plane)
    density = 0.5 * (
        spec.permittivity * np.sum(np.conj(f_a.electric) * f_b.electric,
                                   axis=-1)
        + spec.permeability * np.sum(np.conj(f_a.magnetic) * f_b.magnetic,
                                     axis=-1))
    return complex(np.einsum("i,j,ij->", wx, wy, density))
