"""Grid construction, transforms and multiplier operators."""

import numpy as np
import pytest

from halfharmonic.spectral import (
    MatrixField,
    ScalarField,
    Spectrum,
    VectorField,
    analyze,
    apply_multiplier,
    derivative,
    frac_laplacian,
    integral,
    make_grid,
    mean,
    random_field,
    riesz,
    synthesize,
)


def field(grid, values):
    return ScalarField(grid, values)


class TestGrid:
    def test_basic_tables(self):
        g = make_grid(16, 2 * np.pi)
        assert g.h == pytest.approx(np.pi / 8, abs=0)
        assert g.modes[0] == -8 and g.modes[-1] == 7
        np.testing.assert_allclose(g.xi, g.modes.astype(float), atol=0)
        assert g.h * g.N == g.L

    def test_half_integer_frequencies(self):
        g = make_grid(8, 4 * np.pi)
        assert g.xi[g.mode_index(1)] == pytest.approx(0.5, abs=0)

    def test_frequency_antisymmetry(self):
        g = make_grid(64, 3.7)
        for k in range(1, 32):
            assert g.xi[g.mode_index(-k)] == -g.xi[g.mode_index(k)]

    @pytest.mark.parametrize("bad_n", [12, 0, 7, 9, 1000])
    def test_rejects_non_power_of_two(self, bad_n):
        with pytest.raises(ValueError):
            make_grid(bad_n)

    def test_rejects_bad_period(self):
        with pytest.raises(ValueError):
            make_grid(16, 0.0)
        with pytest.raises(ValueError):
            make_grid(16, -1.0)

    def test_grid_immutable_and_hashable(self):
        g = make_grid(16)
        with pytest.raises(AttributeError):
            g.N = 32
        assert hash(g) == hash(make_grid(16))
        assert g == make_grid(16)


class TestFields:
    def test_sample_count_checked(self):
        g = make_grid(16)
        with pytest.raises(ValueError):
            ScalarField(g, np.zeros(8))

    def test_nonfinite_rejected(self):
        g = make_grid(16)
        bad = np.zeros(16)
        bad[3] = np.inf
        with pytest.raises(ValueError):
            ScalarField(g, bad)
        with pytest.raises(ValueError):
            VectorField(g, np.full((2, 16), np.nan))

    def test_arithmetic(self):
        g = make_grid(32)
        f1 = field(g, np.cos(g.x))
        f2 = field(g, np.sin(g.x))
        np.testing.assert_allclose((f1 * f2).values, np.cos(g.x) * np.sin(g.x))
        np.testing.assert_allclose((f1 - 2.0 * f2).values, np.cos(g.x) - 2 * np.sin(g.x))

    def test_grid_mismatch(self):
        f1 = field(make_grid(16), np.zeros(16))
        f2 = field(make_grid(32), np.zeros(32))
        with pytest.raises(ValueError):
            f1 + f2

    def test_matrix_apply_shapes(self):
        g = make_grid(16)
        q = MatrixField(g, np.zeros((3, 2, 16)))
        v = VectorField(g, np.ones((2, 16)))
        assert q.apply(v).m == 3
        with pytest.raises(ValueError):
            q.apply(VectorField(g, np.ones((3, 16))))


class TestTransforms:
    def test_cosine_coefficients(self):
        g = make_grid(64)
        c = analyze(field(g, np.cos(3 * g.x)))
        assert c.coefficient(3) == pytest.approx(0.5, abs=1e-14)
        assert c.coefficient(-3) == pytest.approx(0.5, abs=1e-14)
        others = [k for k in range(-32, 32) if abs(k) != 3]
        assert max(abs(c.coefficient(k)) for k in others) < 1e-14

    def test_constant_spectrum(self):
        g = make_grid(32)
        c = analyze(field(g, np.full(32, 5.0)))
        assert c.coefficient(0) == pytest.approx(5.0, abs=1e-14)
        assert max(abs(c.coefficient(k)) for k in range(-16, 16) if k) < 1e-14

    def test_round_trip(self):
        g = make_grid(256)
        f = random_field(g, 100, seed=3)
        back = synthesize(analyze(f))
        assert np.max(np.abs(back.values - f.values)) < 1e-12 * np.max(np.abs(f.values))

    def test_plancherel(self):
        g = make_grid(128, 5.0)
        f = random_field(g, 40, seed=1, mean_value=0.7)
        h = random_field(g, 40, seed=2, mean_value=-0.3)
        lhs = g.h * np.dot(f.values, h.values)
        rhs = g.L * np.real(np.sum(analyze(f).coeffs * np.conj(analyze(h).coeffs)))
        scale = np.sqrt(g.h * np.sum(f.values**2)) * np.sqrt(g.h * np.sum(h.values**2))
        assert abs(lhs - rhs) <= 1e-10 * scale

    def test_non_hermitian_synthesis_rejected(self):
        g = make_grid(16)
        coeffs = np.zeros(16, complex)
        coeffs[g.mode_index(1)] = 1.0  # no conjugate partner
        with pytest.raises(ValueError, match="[Hh]ermitian"):
            synthesize(Spectrum(g, coeffs))


class TestMultipliers:
    def test_identity_multiplier(self):
        g = make_grid(64)
        f = random_field(g, 20, seed=5)
        out = apply_multiplier(f, lambda k: 1.0)
        np.testing.assert_allclose(out.values, f.values, atol=1e-13)

    def test_derivative_on_eigenmode(self):
        g = make_grid(64)
        # odd symbols must act real on the unpaired mode -N/2
        mu = lambda k: 0.0 if k == -g.N // 2 else 1j * g.xi[g.mode_index(k)]
        out = apply_multiplier(field(g, np.cos(4 * g.x)), mu)
        np.testing.assert_allclose(out.values, -4 * np.sin(4 * g.x), atol=1e-12)

    def test_composition_matches_product(self):
        g = make_grid(128)
        f = random_field(g, 50, seed=8)
        mu1 = np.abs(g.modes).astype(complex)
        mu2 = np.exp(-np.abs(g.modes) / 10.0).astype(complex)
        once = apply_multiplier(apply_multiplier(f, mu1), mu2)
        both = apply_multiplier(f, mu1 * mu2)
        assert np.max(np.abs(once.values - both.values)) < 1e-12 * max(1, np.max(np.abs(both.values)))

    def test_non_hermitian_rejected(self):
        g = make_grid(32)
        f = random_field(g, 10, seed=1)
        with pytest.raises(ValueError, match="complex output"):
            apply_multiplier(f, lambda k: 1j)  # same value at +-k
        bad = np.ones(32, complex)
        bad[0] = 1j  # unpaired mode must act real
        with pytest.raises(ValueError, match="complex output"):
            apply_multiplier(f, bad)

    def test_componentwise_lift(self):
        g = make_grid(32)
        v = VectorField(g, np.stack([np.cos(g.x), np.sin(2 * g.x)]))
        out = frac_laplacian(v, 0.5)
        np.testing.assert_allclose(out.data[0], np.cos(g.x), atol=1e-12)
        np.testing.assert_allclose(out.data[1], 2 * np.sin(2 * g.x), atol=1e-12)


class TestFractionalLaplacian:
    def test_eigenfunction(self):
        g = make_grid(128)
        out = frac_laplacian(field(g, np.cos(3 * g.x)), 0.5)
        np.testing.assert_allclose(out.values, 3 * np.cos(3 * g.x), atol=1e-12)

    def test_annihilates_constants(self):
        g = make_grid(64)
        for s in (-0.5, 0.25, 0.5, 1.0):
            out = frac_laplacian(field(g, np.full(64, 2.5)), s)
            assert np.max(np.abs(out.values)) < 1e-13

    def test_semigroup(self):
        g = make_grid(256)
        f = random_field(g, 100, seed=4)
        twice = frac_laplacian(frac_laplacian(f, 0.25), 0.25)
        once = frac_laplacian(f, 0.5)
        assert np.max(np.abs(twice.values - once.values)) < 1e-12 * np.max(np.abs(once.values))

    def test_inverse_on_mean_free(self):
        g = make_grid(128)
        f = random_field(g, 30, seed=9)
        back = frac_laplacian(frac_laplacian(f, 0.5), -0.5)
        assert np.max(np.abs(back.values - f.values)) < 1e-11

    def test_order_validated(self):
        g = make_grid(16)
        with pytest.raises(ValueError):
            frac_laplacian(field(g, np.zeros(16)), 2.5)


class TestRiesz:
    def test_cosine_to_sine(self):
        g = make_grid(64)
        for k in (1, 5, 11):
            out = riesz(field(g, np.cos(k * g.x)))
            np.testing.assert_allclose(out.values, np.sin(k * g.x), atol=1e-12)

    def test_kills_constants(self):
        g = make_grid(32)
        assert np.max(np.abs(riesz(field(g, np.ones(32))).values)) < 1e-14

    def test_involution_minus_identity(self):
        g = make_grid(256)
        f = random_field(g, 100, seed=6)
        rr = riesz(riesz(f))
        assert np.max(np.abs(rr.values + f.values)) < 1e-12 * np.max(np.abs(f.values))

    def test_intertwines_derivative_and_half_laplacian(self):
        g = make_grid(256, 11.0)
        f = random_field(g, 90, seed=7)
        half = frac_laplacian(f, 0.5)
        assert np.max(np.abs(riesz(derivative(f)).values - half.values)) < 1e-11
        assert np.max(np.abs(derivative(riesz(f)).values - half.values)) < 1e-11


class TestCalculus:
    def test_derivative_of_sine(self):
        g = make_grid(64)
        out = derivative(field(g, np.sin(2 * g.x)))
        np.testing.assert_allclose(out.values, 2 * np.cos(2 * g.x), atol=1e-12)

    def test_integral_of_one_is_period(self):
        g = make_grid(32, 7.25)
        assert integral(field(g, np.ones(32))) == pytest.approx(7.25, rel=1e-15)

    def test_oscillations_integrate_to_zero(self):
        g = make_grid(64)
        assert abs(integral(field(g, np.cos(5 * g.x)))) < 1e-13

    def test_mean(self):
        g = make_grid(64)
        assert mean(field(g, 3.0 + np.cos(g.x))) == pytest.approx(3.0, abs=1e-14)

    def test_self_adjointness(self):
        g = make_grid(256)
        f = random_field(g, 60, seed=10)
        h = random_field(g, 60, seed=11)
        lhs = g.h * np.dot(frac_laplacian(f, 0.25).values, h.values)
        rhs = g.h * np.dot(f.values, frac_laplacian(h, 0.25).values)
        assert abs(lhs - rhs) < 1e-10 * max(abs(lhs), 1.0)


def test_random_field_resolution_independent():
    f1 = random_field(make_grid(256), 30, seed=42)
    f2 = random_field(make_grid(1024), 30, seed=42)
    # same trigonometric polynomial: values agree on the shared coarse points
    np.testing.assert_allclose(f1.values, f2.values[::4], atol=1e-12)


def test_random_field_band_validated():
    with pytest.raises(ValueError):
        random_field(make_grid(16), 8, seed=1)  # band must stay below N/2


def test_matrix_lifts():
    g = make_grid(64)
    q = MatrixField(g, np.stack([np.cos(g.x), np.sin(g.x), np.cos(2 * g.x), np.ones(64)]).reshape(2, 2, 64))
    out = frac_laplacian(q, 0.5)
    np.testing.assert_allclose(out.data[0, 0], np.cos(g.x), atol=1e-12)
    np.testing.assert_allclose(out.data[1, 1], 0.0, atol=1e-13)
    np.testing.assert_allclose(integral(q)[1, 1], g.L, rtol=1e-14)
    assert mean(q).shape == (2, 2)


def test_spectrum_validation():
    g = make_grid(16)
    with pytest.raises(ValueError):
        Spectrum(g, np.zeros(8, complex))
    with pytest.raises(ValueError):
        Spectrum(g, np.full(16, np.nan, complex))
