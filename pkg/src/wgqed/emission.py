"""Spontaneous emission of the excited atom into the guide continuum.

The excited state couples to every guided channel: above each cutoff a
pair of traveling continua (one per direction), below it a continuum
of profiles that decay away from the atom. Weak-coupling theory gives

    excited amplitude  c_a(t) = exp((i*shift - rate/2) * t)

with the decay rate summed over resonant propagating channels and the
shift a principal-value integral over the off-resonant continuum. The
shifted line center is transition_frequency - shift.

The shift integral grows without bound as the frequency window is
widened (the integrand falls off too slowly), so shifts are only
reported together with the window and channel list they were computed
over.

Internally the frequency integrals run in transformed variables: the
axial wavenumber above cutoff and the attenuation constant below. Both
substitutions make the integrand smooth at the cutoff endpoint, where
the frequency-space state density of the GROUP_VELOCITY model blows
up like an inverse square root.

``amplitudes_ode_oracle`` integrates the exact Schroedinger system of
a discretized continuum and is the module's own cross-check on the
closed forms; nothing in it reuses the weak-coupling formulas.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, DominanceError, PurelyEvanescentError
from .modes import (
    CUTOFF_REL_TOL,
    Branch,
    ModeIndex,
    WaveguideSpec,
    cutoff_frequency,
    modes_below,
)
from .numerics import PVSpec, QuadratureSpec, integrate, kahan_sum, pv_integrate
from .quantize import (
    Atom,
    DensityModel,
    QuantizationBox,
    continuum_weight,
    coupling_at,
)

# window endpoints closer than this (relative) to the transition
# frequency put the integrable pole on the boundary, where no
# principal value exists
_ENDPOINT_GUARD = 1e-9

# decaying profiles are normalized per unit frequency already, so
# their continuum measure is plain d(nu)
_LOCALIZED_UNIT_WEIGHT = 1.0


@dataclass(frozen=True)
class ChannelRate:
    """Golden-rule rate of one resonant propagating channel."""

    mode: ModeIndex
    direction: int
    weight: float
    coupling: complex
    rate: float


@dataclass(frozen=True)
class DecayResult:
    total: float
    channels: tuple
    model: DensityModel
    oscillatory: bool


def decay_rate(spec: WaveguideSpec, atom: Atom, box: QuantizationBox,
               model: DensityModel, *, max_index: int = 12) -> DecayResult:
    """Total spontaneous decay rate at the bare transition frequency.

    Each propagating channel contributes 2*pi * weight * |coupling|^2
    per direction of travel; channels below cutoff carry no outgoing
    flux and do not appear. An atom below every cutoff therefore gets
    an empty channel list, rate zero and the ``oscillatory`` flag:
    its excitation sloshes between atom and decaying profiles instead
    of leaking away.
    """
    atom.check_inside(spec)
    omega = atom.transition_frequency
    channels = []
    for _, mode in modes_below(spec, omega, max_index=max_index):
        for direction in (1, -1):
            g = coupling_at(spec, mode, omega, atom, box,
                            direction=direction)
            w = continuum_weight(spec, mode, omega, box, model)
            channels.append(ChannelRate(
                mode=mode, direction=direction, weight=w, coupling=g,
                rate=2.0 * math.pi * w * abs(g) ** 2))
    total = kahan_sum(c.rate for c in channels)
    return DecayResult(total=float(total), channels=tuple(channels),
                       model=model, oscillatory=not channels)


@dataclass(frozen=True)
class ShiftContribution:
    mode: ModeIndex
    branch: Branch
    window: tuple
    value: float


@dataclass(frozen=True)
class ShiftResult:
    value: float
    window: tuple
    contributions: tuple


def _split_by_cutoff(window, cutoff):
    lo, hi = window
    parts = []
    if lo < cutoff:
        parts.append((Branch.LOCALIZED, lo, min(hi, cutoff)))
    if hi > cutoff:
        parts.append((Branch.PROPAGATING, max(lo, cutoff), hi))
    return parts


def _summed_coupling_sq(spec, mode, atom, box, branch, frequency):
    if branch is Branch.PROPAGATING:
        return sum(abs(coupling_at(spec, mode, frequency, atom, box,
                                   direction=d)) ** 2 for d in (1, -1))
    return abs(coupling_at(spec, mode, frequency, atom, box)) ** 2


def level_shift(spec: WaveguideSpec, atom: Atom, box: QuantizationBox,
                model: DensityModel, *, window, modes=None,
                max_index: int = 12, quad: QuadratureSpec | None = None,
                pv: PVSpec | None = None) -> ShiftResult:
    """Windowed second-order frequency shift of the excited level.

    Computes -PV integral of weight * |coupling|^2 / (omega - nu) over
    nu in ``window``, summed over channels; the shifted line center is
    omega - value. By default the channel list holds every mode whose
    cutoff lies below the window top; patterns with higher cutoffs
    also contribute decaying-branch pieces and can be included by
    passing ``modes`` explicitly. The result is meaningful only
    together with its window: widening the window grows the value
    without bound.
    """
    lo, hi = window
    if not (0.0 < lo < hi):
        raise DomainError("window must satisfy 0 < low < high")
    atom.check_inside(spec)
    omega = atom.transition_frequency
    quad = quad or QuadratureSpec()
    pv = pv or PVSpec(quad=quad)
    if modes is None:
        modes = [mode for _, mode in modes_below(spec, hi,
                                                 max_index=max_index)]
    eps_mu = spec.permittivity * spec.permeability
    contributions = []
    for mode in modes:
        nu_c = cutoff_frequency(spec, mode)
        h = nu_c * spec.refractive_index
        for branch, s_lo, s_hi in _split_by_cutoff((lo, hi), nu_c):
            for edge in (s_lo, s_hi):
                if abs(omega - edge) < _ENDPOINT_GUARD * omega:
                    raise DomainError(
                        "window or cutoff edge collides with the "
                        "transition frequency; shift the window")

            def integrand_nu(nu):
                csq = _summed_coupling_sq(spec, mode, atom, box, branch,
                                          nu)
                if branch is Branch.PROPAGATING:
                    w = continuum_weight(spec, mode, nu, box, model)
                else:
                    w = _LOCALIZED_UNIT_WEIGHT
                return w * csq / (omega - nu)

            if branch is Branch.PROPAGATING:
                # integrate over the axial wavenumber; the Jacobian
                # beta/(eps mu nu) cancels the near-cutoff divergence
                # of the GROUP_VELOCITY state density
                def to_var(nu):
                    return math.sqrt(max(eps_mu * nu * nu - h * h, 0.0))

                def from_var(t):
                    return np.sqrt((t * t + h * h) / eps_mu)

                def jacobian(t, nu):
                    return t / (eps_mu * nu)
            else:
                # attenuation-constant substitution smooths the
                # square-root vanishing of the coupling at cutoff
                def to_var(nu):
                    return math.sqrt(max(h * h - eps_mu * nu * nu, 0.0))

                def from_var(t):
                    return np.sqrt((h * h - t * t) / eps_mu)

                def jacobian(t, nu):
                    return -t / (eps_mu * nu)

            t_a, t_b = to_var(s_lo), to_var(s_hi)

            # segments bounded by the cutoff itself map that edge to
            # t = 0; refined quadrature samples can then round into
            # the degeneracy band, so they are nudged to its edge,
            # staying on the segment's side of the cutoff
            band = 2.0 * CUTOFF_REL_TOL * nu_c

            def integrand_t(t_arr):
                t_arr = np.atleast_1d(np.asarray(t_arr, dtype=float))
                out = np.empty_like(t_arr)
                for i, t in enumerate(t_arr):
                    nu = float(from_var(t))
                    if abs(nu - nu_c) < band:
                        nu = nu_c + band \
                            if branch is Branch.PROPAGATING \
                            else nu_c - band
                    out[i] = integrand_nu(nu) * jacobian(t, nu)
                return out

            if (t_a > t_b):
                t_a, t_b = t_b, t_a

                def integrand_signed(t_arr, _inner=integrand_t):
                    return -_inner(t_arr)
            else:
                integrand_signed = integrand_t

            if s_lo < omega < s_hi:
                pole_t = to_var(omega)
                piece = pv_integrate(integrand_signed, pole_t, t_a, t_b,
                                     pv)
            else:
                piece, _ = integrate(integrand_signed, t_a, t_b, quad)
            contributions.append(ShiftContribution(
                mode=mode, branch=branch, window=(s_lo, s_hi),
                value=-float(piece)))
    value = float(kahan_sum(c.value for c in contributions))
    return ShiftResult(value=value, window=(lo, hi),
                       contributions=tuple(contributions))


@dataclass(frozen=True)
class MarkovParameters:
    """Weak-coupling summary of the emitter: rate, shift, bare line."""

    decay_total: float
    level_shift: float
    transition_frequency: float

    @property
    def shifted_frequency(self) -> float:
        return self.transition_frequency - self.level_shift


def excited_amplitude(times, params: MarkovParameters) -> np.ndarray:
    """Closed-form excited-state amplitude exp((i*shift - rate/2)*t)."""
    t = np.asarray(times, dtype=float)
    return np.exp((1j * params.level_shift - 0.5 * params.decay_total) * t)


@dataclass(frozen=True)
class ContinuumBin:
    """One cell of a discretized continuum channel.

    direction is +1/-1 for traveling cells and 0 for decaying ones.
    """

    mode: ModeIndex
    direction: int
    frequency: float
    width: float
    coupling: complex
    weight: float

    @property
    def discrete_coupling(self) -> complex:
        return cmath.sqrt(self.weight * self.width) * self.coupling


def build_bins(spec: WaveguideSpec, atom: Atom, box: QuantizationBox,
               model: DensityModel, *, window, count: int,
               modes) -> tuple:
    """Uniform frequency discretization of the listed channels.

    Each bin center is classified per mode: above that mode's cutoff
    it yields two traveling cells, below it a single decaying cell.
    Choose windows that keep bin centers clear of the cutoffs
    themselves; a center landing in the degeneracy band raises.
    """
    lo, hi = window
    if not (0.0 < lo < hi):
        raise DomainError("window must satisfy 0 < low < high")
    if count < 1:
        raise DomainError("need at least one bin")
    width = (hi - lo) / count
    bins = []
    for mode in modes:
        nu_c = cutoff_frequency(spec, mode)
        for j in range(count):
            nu = lo + (j + 0.5) * width
            if nu > nu_c:
                directions = (1, -1)
            else:
                directions = (0,)
            for d in directions:
                g = coupling_at(spec, mode, nu, atom, box,
                                direction=d if d != 0 else 1)
                if d == 0:
                    w = _LOCALIZED_UNIT_WEIGHT
                else:
                    w = continuum_weight(spec, mode, nu, box, model)
                bins.append(ContinuumBin(mode=mode, direction=d,
                                         frequency=nu, width=width,
                                         coupling=g, weight=w))
    return tuple(bins)


def photon_bin_amplitudes(time: float, bins, params: MarkovParameters
                          ) -> np.ndarray:
    """Closed-form one-photon amplitudes of discretized cells at one
    instant, from the weak-coupling excited amplitude."""
    if params.decay_total <= 0.0:
        raise DomainError(
            "closed-form photon amplitudes need a positive decay rate")
    nu = np.array([b.frequency for b in bins])
    g_tilde = np.array([b.discrete_coupling for b in bins])
    center = params.shifted_frequency
    half_rate = 0.5 * params.decay_total
    envelope = 1.0 - np.exp((1j * (nu - center) - half_rate) * time)
    return np.conj(g_tilde) * envelope / ((nu - center) + 1j * half_rate)


def amplitudes_ode_oracle(times, bins, transition_frequency: float, *,
                          rtol: float = 1e-10, atol: float = 1e-12):
    """Exact evolution of the excited atom coupled to discrete cells.

    Integrates the interaction-picture Schroedinger equations
        dc_a/dt = -i * sum_j g_j exp(+i (omega - nu_j) t) c_j
        dc_j/dt = -i * conj(g_j) exp(-i (omega - nu_j) t) c_a
    stacked into real variables, starting from the excited atom and
    the vacuum. Returns (c_a over times, cell amplitudes with shape
    (len(bins), len(times))).
    """
    times = np.asarray(times, dtype=float)
    if times[0] != 0.0:
        raise DomainError("time grid must start at zero")
    g = np.array([b.discrete_coupling for b in bins])
    detune = transition_frequency - np.array([b.frequency for b in bins])
    n = len(bins)

    def rhs(t, y):
        c_a = y[0] + 1j * y[1]
        c_b = y[2:2 + n] + 1j * y[2 + n:]
        phase = np.exp(1j * detune * t)
        da = -1j * np.sum(g * phase * c_b)
        db = -1j * np.conj(g * phase) * c_a
        out = np.empty(2 + 2 * n)
        out[0] = da.real
        out[1] = da.imag
        out[2:2 + n] = db.real
        out[2 + n:] = db.imag
        return out

    y0 = np.zeros(2 + 2 * n)
    y0[0] = 1.0
    sol = solve_ivp(rhs, (0.0, float(times[-1])), y0, t_eval=times,
                    method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise DomainError(f"continuum evolution failed: {sol.message}")
    c_a = sol.y[0] + 1j * sol.y[1]
    c_b = sol.y[2:2 + n] + 1j * sol.y[2 + n:]
    return c_a, c_b


@dataclass(frozen=True)
class SpectralChannel:
    """Long-time one-photon amplitude density over a frequency grid."""

    mode: ModeIndex
    direction: int
    branch: Branch
    frequencies: np.ndarray
    density: np.ndarray
    spacing: float


def photon_state(spec: WaveguideSpec, atom: Atom, box: QuantizationBox,
                 model: DensityModel, params: MarkovParameters, *,
                 window, samples: int, modes, kind: str = "all",
                 time: float | None = None) -> tuple:
    """Emitted-photon spectral amplitudes, by default after the decay
    completes.

    For each channel the amplitude density over frequency is
        conj(coupling) * sqrt(weight) / ((nu - center) + i rate / 2),
    sampled on a midpoint grid so cutoff endpoints are never touched.
    A finite ``time`` multiplies in the transient envelope
    1 - exp((i (nu - center) - rate/2) t), which vanishes at t = 0 and
    approaches one as the decay completes. ``kind`` filters the
    channel branches: 'propagating', 'localized' or 'all'.
    """
    if kind not in ("all", "propagating", "localized"):
        raise DomainError("kind must be 'all', 'propagating' or "
                          "'localized'")
    if params.decay_total <= 0.0:
        raise DomainError("photon state needs a positive decay rate")
    if time is not None and time < 0.0:
        raise DomainError("time must be nonnegative")
    lo, hi = window
    if not (0.0 < lo < hi):
        raise DomainError("window must satisfy 0 < low < high")
    center = params.shifted_frequency
    half_rate = 0.5 * params.decay_total
    channels = []
    for mode in modes:
        nu_c = cutoff_frequency(spec, mode)
        for branch, s_lo, s_hi in _split_by_cutoff((lo, hi), nu_c):
            if branch is Branch.PROPAGATING and kind == "localized":
                continue
            if branch is Branch.LOCALIZED and kind == "propagating":
                continue
            n_seg = max(2, int(round(samples * (s_hi - s_lo) / (hi - lo))))
            spacing = (s_hi - s_lo) / n_seg
            freqs = s_lo + (np.arange(n_seg) + 0.5) * spacing
            directions = (1, -1) if branch is Branch.PROPAGATING else (0,)
            for d in directions:
                dens = np.empty(n_seg, dtype=complex)
                for i, nu in enumerate(freqs):
                    g = coupling_at(spec, mode, float(nu), atom, box,
                                    direction=d if d != 0 else 1)
                    if branch is Branch.LOCALIZED:
                        w = _LOCALIZED_UNIT_WEIGHT
                    else:
                        w = continuum_weight(spec, mode, float(nu), box,
                                             model)
                    dens[i] = (np.conj(g) * math.sqrt(w)
                               / ((nu - center) + 1j * half_rate))
                if time is not None:
                    dens *= 1.0 - np.exp(
                        (1j * (freqs - center) - half_rate) * time)
                channels.append(SpectralChannel(
                    mode=mode, direction=d, branch=branch,
                    frequencies=freqs, density=dens, spacing=spacing))
    return tuple(channels)


def photon_norm(channels) -> float:
    """Total one-photon probability of sampled spectral channels, by
    the midpoint rule."""
    return float(kahan_sum(
        float(np.sum(np.abs(ch.density) ** 2)) * ch.spacing
        for ch in channels))


def dominant_channel(spec: WaveguideSpec, frequency: float, *,
                     max_index: int = 12) -> ModeIndex:
    """The single propagating mode at ``frequency``.

    Raises PurelyEvanescentError when nothing propagates there and
    DominanceError (listing the extra channels) when more than one
    mode does.
    """
    listing = modes_below(spec, frequency, max_index=max_index)
    if not listing:
        raise PurelyEvanescentError(
            f"no mode propagates at frequency {frequency!r}")
    if len(listing) > 1:
        competitors = [(m.polarization.value, m.m, m.n, c)
                       for c, m in listing[1:]]
        raise DominanceError(
            f"{len(listing)} modes propagate at frequency {frequency!r}",
            competitors=competitors)
    return listing[0][1]
