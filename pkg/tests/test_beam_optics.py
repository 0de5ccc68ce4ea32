"""Mode evaluation, generating-function reconstruction and quadrature."""

import math

import numpy as np
import pytest

from oamgrav import (
    BeamParameters,
    ModeIndex,
    TransverseQuadrature,
    beam_geometry,
    evaluate_lg,
    evaluate_lg_via_generating,
    generating_function_value,
    overlap,
)
from oamgrav.coupling import apply_free_derivative
from oamgrav.errors import (
    InvalidParameterError,
    OrderCapError,
    QuadratureError,
    SingularOmegaError,
)

BEAM = BeamParameters(k=5.0, w0=1.0)


class TestModeIndex:
    def test_orders(self):
        m = ModeIndex(-3, 2)
        assert m.combined_order == 7
        assert m.gouy_order == 8

    def test_rejects_negative_radial(self):
        with pytest.raises(InvalidParameterError):
            ModeIndex(1, -1)

    def test_rejects_non_integer(self):
        with pytest.raises(InvalidParameterError):
            ModeIndex(1.5)


class TestBeamParameters:
    def test_rayleigh_range_exact(self):
        assert BEAM.rayleigh_range == 0.5 * 5.0 * 1.0**2

    @pytest.mark.parametrize("k,w0", [(0.0, 1.0), (-2.0, 1.0), (1.0, 0.0), (math.nan, 1.0)])
    def test_rejects_bad_parameters(self, k, w0):
        with pytest.raises(InvalidParameterError):
            BeamParameters(k=k, w0=w0)


class TestBeamGeometry:
    def test_waist_plane(self):
        g = beam_geometry(BEAM, 0.0)
        assert g.spot_size == BEAM.w0
        assert g.is_flat
        assert g.curvature_radius is None
        assert g.gouy_base == 0.0

    def test_one_rayleigh_range(self):
        zr = BEAM.rayleigh_range
        g = beam_geometry(BEAM, zr)
        assert g.spot_size == pytest.approx(BEAM.w0 * math.sqrt(2.0), rel=1e-15)
        assert g.gouy_base == pytest.approx(math.pi / 4.0, rel=1e-15)
        assert not g.is_flat
        assert g.curvature_radius == pytest.approx(2.0 * zr, rel=1e-15)

    def test_negative_z_parity(self):
        zr = BEAM.rayleigh_range
        plus = beam_geometry(BEAM, zr)
        minus = beam_geometry(BEAM, -zr)
        assert minus.spot_size == plus.spot_size
        assert minus.gouy_base == -plus.gouy_base

    def test_rejects_infinite_z(self):
        with pytest.raises(InvalidParameterError):
            beam_geometry(BEAM, math.inf)


class TestEvaluateLg:
    def test_fundamental_peak_at_origin(self):
        v = complex(evaluate_lg(ModeIndex(0, 0), 0.0, 0.0, 0.0, BEAM))
        assert v == pytest.approx(math.sqrt(2.0 / math.pi) / BEAM.w0, rel=1e-15)
        assert v.imag == 0.0

    @pytest.mark.parametrize("z", [0.0, 0.7])
    def test_vortex_null_at_axis(self, z):
        v = complex(evaluate_lg(ModeIndex(2, 0), 0.0, 0.0, z * BEAM.rayleigh_range, BEAM))
        assert v == 0.0

    @pytest.mark.parametrize("l,p", [(0, 0), (3, 0), (1, 2)])
    def test_unit_power(self, l, p):
        mode = ModeIndex(l, p)
        val = overlap(mode, mode, 0.0, BEAM)
        assert val.real == pytest.approx(1.0, abs=1e-8)
        assert abs(val.imag) < 1e-8

    def test_azimuthal_parity(self):
        # LG_{-l,p}(x, y) must equal LG_{l,p}(x, -y) bitwise: the radial part
        # is shared and atan2 is odd in its first argument.
        rng = np.random.default_rng(3)
        x = rng.uniform(-2.0, 2.0, 50)
        y = rng.uniform(-2.0, 2.0, 50)
        z = 0.3 * BEAM.rayleigh_range
        for l in (1, 2, 5):
            a = evaluate_lg(ModeIndex(-l, 1), x, y, z, BEAM)
            b = evaluate_lg(ModeIndex(l, 1), x, -y, z, BEAM)
            assert np.array_equal(a, b)


class TestGeneratingFunction:
    def test_unit_value_at_origin(self):
        assert complex(generating_function_value(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, BEAM)) == 1.0

    def test_reduces_to_gaussian_at_zero_parameters(self):
        x, y, z = 0.4, -1.1, 0.6 * BEAM.rayleigh_range
        zeta = z / BEAM.rayleigh_range
        omega = 1.0 + 1j * zeta
        expected = np.exp(-(x * x + y * y) / (BEAM.w0**2 * omega)) / omega
        got = complex(generating_function_value(0.0, 0.0, 0.0, x, y, z, BEAM))
        assert got == pytest.approx(expected, rel=1e-15)

    def test_singular_denominator_is_reported(self):
        # c = 1 at the waist zeroes the denominator.
        with pytest.raises(SingularOmegaError):
            generating_function_value(0.0, 0.0, 1.0, 0.1, 0.1, 0.0, BEAM)


class TestGeneratingPath:
    def test_fundamental_equals_scaled_generating_function(self):
        x, y, z = 0.3, 0.7, 0.2 * BEAM.rayleigh_range
        norm = math.sqrt(2.0 / math.pi) / BEAM.w0
        gf = generating_function_value(0.0, 0.0, 0.0, x, y, z, BEAM)
        series = evaluate_lg_via_generating(ModeIndex(0, 0), x, y, z, BEAM)
        assert complex(series) == pytest.approx(norm * complex(gf), rel=1e-15)

    def test_pinned_radial_mode(self):
        z = 0.5 * BEAM.rayleigh_range
        x, y = 0.3 * BEAM.w0, -0.1 * BEAM.w0
        direct = complex(evaluate_lg(ModeIndex(-2, 1), x, y, z, BEAM))
        series = complex(evaluate_lg_via_generating(ModeIndex(-2, 1), x, y, z, BEAM))
        assert abs(series - direct) <= 1e-9 * abs(direct)

    def test_pinned_high_azimuthal_mode(self):
        x, y = BEAM.w0 * math.cos(0.3), BEAM.w0 * math.sin(0.3)
        direct = complex(evaluate_lg(ModeIndex(5, 0), x, y, 0.0, BEAM))
        series = complex(evaluate_lg_via_generating(ModeIndex(5, 0), x, y, 0.0, BEAM))
        assert abs(series - direct) <= 1e-9 * abs(direct)

    def test_order_cap(self):
        with pytest.raises(OrderCapError):
            evaluate_lg_via_generating(ModeIndex(13, 6), 0.5, 0.5, 0.0, BEAM)

    def test_equivalence_at_random_points(self):
        # Both evaluation routes, 100 points per mode, all |l| <= 6, p <= 2.
        rng = np.random.default_rng(20260814)
        for zfrac in (0.0, 0.8):
            z = zfrac * BEAM.rayleigh_range
            w = beam_geometry(BEAM, z).spot_size
            for l in range(-6, 7):
                for p in range(3):
                    pts = rng.uniform(-2.5 * w, 2.5 * w, size=(2, 100))
                    direct = evaluate_lg(ModeIndex(l, p), pts[0], pts[1], z, BEAM)
                    series = evaluate_lg_via_generating(ModeIndex(l, p), pts[0], pts[1], z, BEAM)
                    rel = np.max(np.abs(series - direct) / np.abs(direct))
                    assert rel < 1e-9, f"mode ({l},{p}) at z={zfrac}zR: rel {rel:.3e}"


class TestTransverseQuadrature:
    def test_rejects_unknown_kind(self):
        with pytest.raises(InvalidParameterError):
            TransverseQuadrature(
                kind="simpson",
                half_width=1.0,
                points=np.zeros(4),
                weights=np.zeros(4),
                spot_size=1.0,
            )

    def test_legendre_self_test_passes(self):
        quad = TransverseQuadrature.legendre(1.3)
        assert quad.gaussian_self_test() < 1e-10

    def test_uniform_spacing(self):
        quad = TransverseQuadrature.uniform(1.0, extent=6.0, n=896)
        assert quad.spacing == pytest.approx(12.0 / 896, rel=1e-15)
        assert quad.points.size == 896
        assert np.all(np.diff(quad.points) > 0)

    def test_underresolved_rule_is_rejected(self):
        with pytest.raises(QuadratureError):
            TransverseQuadrature.legendre(1.0, extent=6.0, n=2)
        with pytest.raises(QuadratureError):
            TransverseQuadrature.uniform(1.0, extent=6.0, n=16)

    def test_rejects_tiny_node_counts(self):
        with pytest.raises(InvalidParameterError):
            TransverseQuadrature.legendre(1.0, n=1)
        with pytest.raises(InvalidParameterError):
            TransverseQuadrature.uniform(1.0, n=4)


class TestOverlap:
    def test_azimuthal_orthogonality(self):
        v = overlap(ModeIndex(1, 0), ModeIndex(2, 0), 0.4 * BEAM.rayleigh_range, BEAM)
        assert abs(v) < 1e-8

    def test_radial_orthogonality(self):
        v = overlap(ModeIndex(1, 0), ModeIndex(1, 1), 0.7 * BEAM.rayleigh_range, BEAM)
        assert abs(v) < 1e-8

    def test_narrow_window_is_rejected(self):
        quad = TransverseQuadrature.legendre(1.0, extent=4.0)
        with pytest.raises(QuadratureError):
            overlap(ModeIndex(0, 0), ModeIndex(0, 0), 0.0, BEAM, quad=quad)

    def test_orthonormality_all_modes_three_planes(self):
        # Gram matrix of all 39 modes with |l| <= 6, p <= 2 at three planes.
        modes = [ModeIndex(l, p) for l in range(-6, 7) for p in range(3)]
        for zfrac in (0.0, 0.5, 2.0):
            z = zfrac * BEAM.rayleigh_range
            geom = beam_geometry(BEAM, z)
            quad = TransverseQuadrature.legendre(geom.spot_size)
            xg, yg = quad.grid()
            fields = np.array([evaluate_lg(m, xg, yg, z, BEAM) for m in modes])
            gram = np.einsum(
                "i,j,aij,bij->ab",
                quad.weights,
                quad.weights,
                fields,
                np.conj(fields),
                optimize=True,
            )
            dev = np.max(np.abs(gram - np.eye(len(modes))))
            assert dev < 1e-8, f"z={zfrac}zR: worst Gram deviation {dev:.3e}"


class TestFreePropagationConservation:
    @pytest.mark.parametrize("zfrac", [0.0, 0.5])
    def test_overlap_is_stationary_under_free_propagation(self, zfrac):
        # d/dz of every pairwise overlap must vanish: the plain factor takes
        # the free derivative, the conjugated factor its conjugate.  The
        # symmetric finite-difference stencil makes the discrete sum cancel.
        z = zfrac * BEAM.rayleigh_range
        geom = beam_geometry(BEAM, z)
        quad = TransverseQuadrature.uniform(geom.spot_size, extent=6.0, n=256)
        xg, yg = quad.grid()
        fields = {l: evaluate_lg(ModeIndex(l, 0), xg, yg, z, BEAM) for l in range(-4, 5)}
        derivs = {l: apply_free_derivative(fields[l], quad.spacing, BEAM) for l in fields}
        for lm in range(-4, 5):
            for ln in range(-4, 5):
                rate = quad.integrate(
                    derivs[lm] * np.conj(fields[ln]) + fields[lm] * np.conj(derivs[ln])
                )
                assert abs(rate) < 1e-6, f"pair ({lm},{ln}): {abs(rate):.3e}"
