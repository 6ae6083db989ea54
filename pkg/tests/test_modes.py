"""Tests for the waveguide mode catalogue and field evaluation."""

import math

import numpy as np
import pytest

from wgqed.errors import DomainError
from wgqed.modes import (
    AxialProfile,
    Branch,
    ModeIndex,
    Polarization,
    WaveguideSpec,
    cutoff_frequency,
    dispersion,
    divergence_residual,
    field_at,
    field_evaluator,
    helmholtz_residual,
    mode_divergence_residual,
    mode_helmholtz_residual,
    modes_below,
    transverse_wavenumber,
)

GUIDE = WaveguideSpec(width=math.pi, height=math.pi / 2.0)
TE10 = ModeIndex(Polarization.TE, 1, 0)
TM11 = ModeIndex(Polarization.TM, 1, 1)


def interior_points(rng, spec, count, z_lo=0.2, z_hi=1.5):
    """Random points clear of the walls and of z in [z_lo, z_hi]."""
    x = rng.uniform(0.1, spec.width - 0.1, count)
    y = rng.uniform(0.1, spec.height - 0.1, count)
    z = rng.uniform(z_lo, z_hi, count)
    return np.stack([x, y, z], axis=-1)


class TestSpecValidation:
    def test_orientation_enforced(self):
        with pytest.raises(DomainError):
            WaveguideSpec(width=1.0, height=2.0)

    def test_positive_extents(self):
        with pytest.raises(DomainError):
            WaveguideSpec(width=0.0, height=-1.0)

    def test_square_guide_allowed(self):
        spec = WaveguideSpec(width=2.0, height=2.0)
        assert spec.cross_section_area == 4.0

    def test_tm_index_floor(self):
        with pytest.raises(DomainError):
            ModeIndex(Polarization.TM, 1, 0)

    def test_te_double_zero(self):
        with pytest.raises(DomainError):
            ModeIndex(Polarization.TE, 0, 0)

    def test_te_single_zero_ok(self):
        assert ModeIndex(Polarization.TE, 0, 3).n == 3


class TestDispersion:
    def test_te10_above_cutoff(self):
        d = dispersion(GUIDE, TE10, 2.0)
        assert d.transverse_wavenumber == pytest.approx(1.0)
        assert d.cutoff_frequency == pytest.approx(1.0)
        assert d.medium_wavenumber == pytest.approx(2.0)
        assert d.branch is Branch.PROPAGATING
        assert d.axial_wavenumber == pytest.approx(math.sqrt(3.0))
        assert d.attenuation is None
        assert d.axial_factor == pytest.approx(1j * math.sqrt(3.0))

    def test_tm11_below_cutoff(self):
        # pattern wavenumber sqrt(1 + 4), medium wavenumber 1
        d = dispersion(GUIDE, TM11, 1.0)
        assert d.transverse_wavenumber == pytest.approx(math.sqrt(5.0))
        assert d.branch is Branch.LOCALIZED
        assert d.axial_wavenumber is None
        assert d.attenuation == pytest.approx(2.0)
        assert d.axial_factor == pytest.approx(2.0 + 0.0j)

    def test_filling_scales_cutoff(self):
        filled = WaveguideSpec(width=math.pi, height=math.pi / 2.0,
                               permittivity=2.0, permeability=3.0)
        assert cutoff_frequency(filled, TE10) == pytest.approx(
            1.0 / math.sqrt(6.0))

    def test_cutoff_degeneracy_rejected(self):
        nu_c = cutoff_frequency(GUIDE, TE10)
        with pytest.raises(DomainError):
            dispersion(GUIDE, TE10, nu_c)
        with pytest.raises(DomainError):
            dispersion(GUIDE, TE10, nu_c * (1.0 + 1e-13))
        # just outside the degeneracy band both branches are fine
        assert dispersion(GUIDE, TE10, nu_c * (1.0 + 1e-9)).branch \
            is Branch.PROPAGATING
        assert dispersion(GUIDE, TE10, nu_c * (1.0 - 1e-9)).branch \
            is Branch.LOCALIZED

    def test_nonpositive_frequency(self):
        with pytest.raises(DomainError):
            dispersion(GUIDE, TE10, 0.0)


class TestWallConditions:
    @pytest.mark.parametrize("mode,freq", [
        (TE10, 2.0), (TE10, 0.5),
        (TM11, 4.0), (TM11, 1.0),
        (ModeIndex(Polarization.TE, 2, 1), 4.0),
        (ModeIndex(Polarization.TM, 2, 2), 2.0),
    ])
    def test_tangential_e_and_normal_h_vanish(self, rng, mode, freq):
        for _ in range(4):
            y = rng.uniform(0.0, GUIDE.height)
            z = rng.uniform(-1.0, 1.0)
            for x_wall in (0.0, GUIDE.width):
                f = field_at(GUIDE, mode, freq, [x_wall, y, z],
                             source_plane=-3.0)
                assert abs(f.electric[1]) < 1e-12  # tangential E_y
                assert abs(f.electric[2]) < 1e-12  # tangential E_z
                assert abs(f.magnetic[0]) < 1e-12  # normal H_x
            x = rng.uniform(0.0, GUIDE.width)
            for y_wall in (0.0, GUIDE.height):
                f = field_at(GUIDE, mode, freq, [x, y_wall, z],
                             source_plane=-3.0)
                assert abs(f.electric[0]) < 1e-12
                assert abs(f.electric[2]) < 1e-12
                assert abs(f.magnetic[1]) < 1e-12


class TestFieldEquations:
    def sample_modes(self, rng, branch):
        picks = []
        while len(picks) < 8:
            pol = Polarization.TM if rng.random() < 0.5 else Polarization.TE
            m = int(rng.integers(0, 4))
            n = int(rng.integers(0, 4))
            try:
                mode = ModeIndex(pol, m, n)
            except DomainError:
                continue
            nu_c = cutoff_frequency(GUIDE, mode)
            if branch is Branch.PROPAGATING:
                freq = nu_c * rng.uniform(1.05, 1.5)
            else:
                freq = nu_c * rng.uniform(0.5, 0.95)
            picks.append((mode, freq))
        return picks

    @pytest.mark.parametrize("branch", [Branch.PROPAGATING, Branch.LOCALIZED])
    @pytest.mark.parametrize("which", ["electric", "magnetic"])
    def test_helmholtz(self, rng, branch, which):
        for mode, freq in self.sample_modes(rng, branch):
            fn = field_evaluator(GUIDE, mode, freq, which)
            ksq = GUIDE.permittivity * GUIDE.permeability * freq ** 2
            for point in interior_points(rng, GUIDE, 3):
                assert helmholtz_residual(fn, ksq, point, step=1e-4) < 1e-5

    @pytest.mark.parametrize("branch", [Branch.PROPAGATING, Branch.LOCALIZED])
    @pytest.mark.parametrize("which", ["electric", "magnetic"])
    def test_divergence_free(self, rng, branch, which):
        for mode, freq in self.sample_modes(rng, branch):
            fn = field_evaluator(GUIDE, mode, freq, which)
            for point in interior_points(rng, GUIDE, 3):
                assert divergence_residual(fn, point, step=1e-4) < 1e-5

    @pytest.mark.parametrize("branch", [Branch.PROPAGATING, Branch.LOCALIZED])
    def test_maxwell_curls(self, rng, branch):
        # curl E = -i nu mu H and curl H = +i nu eps E tie the two
        # field tables together, catching relative sign mistakes that
        # the scalar checks cannot see
        def fd_curl(fn, p, step=1e-4):
            jac = np.zeros((3, 3), dtype=complex)
            for j in range(3):
                e = np.zeros(3)
                e[j] = step
                jac[:, j] = (fn(p + e) - fn(p - e)) / (2.0 * step)
            return np.array([jac[2, 1] - jac[1, 2],
                             jac[0, 2] - jac[2, 0],
                             jac[1, 0] - jac[0, 1]])

        for mode, freq in self.sample_modes(rng, branch)[:4]:
            e_fn = field_evaluator(GUIDE, mode, freq, "electric")
            h_fn = field_evaluator(GUIDE, mode, freq, "magnetic")
            nu_mu = freq * GUIDE.permeability
            nu_eps = freq * GUIDE.permittivity
            for point in interior_points(rng, GUIDE, 2):
                e_val = e_fn(point)
                h_val = h_fn(point)
                assert np.max(np.abs(fd_curl(e_fn, point)
                                     + 1j * nu_mu * h_val)) < 1e-5
                assert np.max(np.abs(fd_curl(h_fn, point)
                                     - 1j * nu_eps * e_val)) < 1e-5


class TestSquareGuideSymmetry:
    @pytest.mark.parametrize("pol,e_sign,h_sign", [
        (Polarization.TM, 1.0, -1.0),
        (Polarization.TE, -1.0, 1.0),
    ])
    @pytest.mark.parametrize("freq", [3.0, 1.5])
    def test_index_swap_mirror(self, rng, pol, e_sign, h_sign, freq):
        # swapping x with y and m with n mirrors the pattern; the
        # electric field maps as a polar vector and the magnetic field
        # as an axial one, up to the overall amplitude convention of
        # each polarization
        guide = WaveguideSpec(width=math.pi, height=math.pi)
        pts = interior_points(rng, guide, 6)
        swapped = pts[:, [1, 0, 2]]
        f_a = field_at(guide, ModeIndex(pol, 1, 2), freq, pts,
                       source_plane=0.1)
        f_b = field_at(guide, ModeIndex(pol, 2, 1), freq, swapped,
                       source_plane=0.1)
        perm = [1, 0, 2]
        np.testing.assert_allclose(
            f_a.electric, e_sign * f_b.electric[:, perm], atol=1e-13)
        np.testing.assert_allclose(
            f_a.magnetic, h_sign * f_b.magnetic[:, perm], atol=1e-13)


class TestAxialProfiles:
    def test_direction_reversal_conjugates(self, rng):
        # for a real amplitude the backward wave is the time-reversed
        # forward wave (conjugate E, negated conjugate H) up to an
        # overall sign fixed by which axial component carries the
        # amplitude: E_z for TM, H_z for TE
        pts = interior_points(rng, GUIDE, 5)
        for mode, freq, sign in ((TE10, 2.0, -1.0), (TM11, 4.0, 1.0)):
            fwd = field_at(GUIDE, mode, freq, pts)
            bwd = field_at(GUIDE, mode, freq, pts, direction=-1)
            np.testing.assert_allclose(
                bwd.electric, sign * np.conj(fwd.electric), atol=1e-13)
            np.testing.assert_allclose(
                bwd.magnetic, -sign * np.conj(fwd.magnetic), atol=1e-13)

    def test_invalid_direction(self):
        with pytest.raises(DomainError):
            field_at(GUIDE, TE10, 2.0, [1.0, 0.5, 0.0], direction=2)

    def test_localized_kink_parity(self):
        z0 = 0.7
        x, y = 1.1, 0.6
        delta = 0.3
        above = field_at(GUIDE, TM11, 1.0, [x, y, z0 + delta],
                         source_plane=z0)
        below = field_at(GUIDE, TM11, 1.0, [x, y, z0 - delta],
                         source_plane=z0)
        # transverse E is odd across the kink, E_z and H are even
        np.testing.assert_allclose(above.electric[:2], -below.electric[:2],
                                   rtol=1e-13)
        assert above.electric[2] == pytest.approx(below.electric[2])
        np.testing.assert_allclose(above.magnetic, below.magnetic,
                                   rtol=1e-13)
        on_kink = field_at(GUIDE, TM11, 1.0, [x, y, z0], source_plane=z0)
        assert abs(on_kink.electric[0]) == 0.0
        assert abs(on_kink.electric[1]) == 0.0

    def test_localized_decay(self):
        z0 = 0.0
        near = field_at(GUIDE, TM11, 1.0, [1.0, 0.5, 1.0], source_plane=z0)
        far = field_at(GUIDE, TM11, 1.0, [1.0, 0.5, 2.0], source_plane=z0)
        # attenuation 2 over a unit step
        ratio = abs(far.electric[2] / near.electric[2])
        assert ratio == pytest.approx(math.exp(-2.0), rel=1e-12)

    def test_te_localized_odd_components(self):
        mode = ModeIndex(Polarization.TE, 1, 1)
        z0 = -0.2
        above = field_at(GUIDE, mode, 1.0, [1.2, 0.8, z0 + 0.4],
                         source_plane=z0)
        below = field_at(GUIDE, mode, 1.0, [1.2, 0.8, z0 - 0.4],
                         source_plane=z0)
        np.testing.assert_allclose(above.magnetic[:2], -below.magnetic[:2],
                                   rtol=1e-13)
        np.testing.assert_allclose(above.electric, below.electric,
                                   rtol=1e-13)


class TestModeListing:
    def test_lowest_band_ordering(self):
        listing = modes_below(GUIDE, 3.0)
        labels = [(m.polarization.value, m.m, m.n) for _, m in listing]
        assert labels == [
            ("TE", 1, 0),
            ("TE", 0, 1),
            ("TE", 2, 0),
            ("TE", 1, 1),
            ("TM", 1, 1),
            ("TE", 2, 1),
            ("TM", 2, 1),
        ]
        cutoffs = [c for c, _ in listing]
        assert cutoffs == sorted(cutoffs)
        assert cutoffs[0] == pytest.approx(1.0)

    def test_degenerate_pair_shares_cutoff(self):
        listing = modes_below(GUIDE, 2.5)
        by_label = {(m.polarization.value, m.m, m.n): c for c, m in listing}
        assert by_label[("TE", 1, 1)] == pytest.approx(
            by_label[("TM", 1, 1)])
        assert by_label[("TE", 1, 1)] == pytest.approx(math.sqrt(5.0))

    def test_truncation_guard(self):
        with pytest.raises(DomainError):
            modes_below(GUIDE, 50.0, max_index=3)

    def test_wavenumber_helper(self):
        assert transverse_wavenumber(GUIDE, TM11) == pytest.approx(
            math.sqrt(5.0))


class TestAxialProfileSelection:
    def test_folded_refused_above_cutoff(self):
        with pytest.raises(DomainError):
            field_at(GUIDE, TE10, 2.0, [1.0, 0.5, 0.3],
                     profile=AxialProfile.FOLDED)

    def test_one_sided_grows_behind_source_plane(self):
        # raw half-space solution: decay ahead, growth behind
        gamma = dispersion(GUIDE, TM11, 1.0).attenuation
        ahead = field_at(GUIDE, TM11, 1.0, [1.2, 0.8, 0.7],
                         profile=AxialProfile.ONE_SIDED)
        behind = field_at(GUIDE, TM11, 1.0, [1.2, 0.8, -0.7],
                          profile=AxialProfile.ONE_SIDED)
        ratio = abs(behind.electric[2]) / abs(ahead.electric[2])
        assert ratio == pytest.approx(math.exp(2.0 * gamma * 0.7),
                                      rel=1e-12)

    def test_one_sided_has_no_kink_sign(self):
        # transverse E keeps its sign on both sides of the plane
        above = field_at(GUIDE, TM11, 1.0, [1.2, 0.8, 0.4],
                         profile=AxialProfile.ONE_SIDED)
        below = field_at(GUIDE, TM11, 1.0, [1.2, 0.8, -0.4],
                         profile=AxialProfile.ONE_SIDED)
        assert np.sign(above.electric[0].real) == np.sign(
            below.electric[0].real)

    def test_one_sided_matches_traveling_wave_above_cutoff(self):
        explicit = field_at(GUIDE, TE10, 2.0, [1.0, 0.5, 0.3],
                            profile=AxialProfile.ONE_SIDED)
        default = field_at(GUIDE, TE10, 2.0, [1.0, 0.5, 0.3])
        np.testing.assert_array_equal(explicit.electric, default.electric)


class TestModeResidualWrappers:
    def test_propagating_residuals_small(self):
        point = [1.1, 0.6, 0.4]
        assert mode_helmholtz_residual(GUIDE, TE10, 2.0, point) < 1e-5
        assert mode_divergence_residual(GUIDE, TE10, 2.0, point) < 1e-5

    def test_localized_residuals_small(self):
        point = [1.1, 0.6, 0.4]
        assert mode_helmholtz_residual(GUIDE, TM11, 1.0, point) < 1e-5
        assert mode_divergence_residual(GUIDE, TM11, 1.0, point) < 1e-5

    def test_second_order_convergence(self):
        point = [1.1, 0.6, 0.4]
        coarse = mode_helmholtz_residual(GUIDE, TM11, 1.0, point, 1e-3)
        fine = mode_helmholtz_residual(GUIDE, TM11, 1.0, point, 5e-4)
        assert 3.5 < coarse / fine < 4.5

    def test_wall_stencil_refused(self):
        with pytest.raises(DomainError):
            mode_helmholtz_residual(GUIDE, TE10, 2.0, [1e-4, 0.6, 0.4])

    def test_kink_stencil_refused(self):
        with pytest.raises(DomainError):
            mode_divergence_residual(GUIDE, TM11, 1.0, [1.1, 0.6, 1e-4])

    def test_one_sided_profile_skips_kink_guard(self):
        val = mode_helmholtz_residual(GUIDE, TM11, 1.0, [1.1, 0.6, 1e-4],
                                      profile=AxialProfile.ONE_SIDED)
        assert val < 1e-5


class TestLowestCutoffScan:
    def test_te10_minimal_over_exhaustive_scan(self):
        # width > height pins the fundamental pattern
        ref = cutoff_frequency(GUIDE, TE10)
        for m in range(0, 11):
            for n in range(0, 11):
                for pol in (Polarization.TE, Polarization.TM):
                    try:
                        mode = ModeIndex(pol, m, n)
                    except DomainError:
                        continue
                    if (pol, m, n) == (Polarization.TE, 1, 0):
                        continue
                    assert cutoff_frequency(GUIDE, mode) > ref
