"""
Unit tests for src.fields module.
"""

import math

import pytest

from src.core_algebra import ONE, UNIT_K, Biquaternion, conj_herm, conj_quat, max_abs_difference
from src.fields import (
    FAMILIES, AnalyticField, Backend, FieldError, constant_B, coulomb, custom_polynomial, family_from_config,
    field_from_components, gaussian_profile, parse_scalar, plane_wave_em, potential_field, pure_gauge, uniform_E,
)

POINT = (1.0, 2.0, 3.0, 4.0)


def _wavy(point):
    t, x, y, z = point
    return Biquaternion(math.sin(t + x), math.cos(y) * 1j, x * z, math.exp(0.1 * t))


@pytest.mark.unit
def test_sympy_field_values_and_partials():
    """Test values and exact partial derivatives of a sympy-backed field."""
    f = field_from_components(["t*x", "y**2", "I*z", "0"])
    assert f.analytic
    assert f(POINT) == Biquaternion(2, 9, 4j, 0)
    assert f.partial(0)(POINT) == Biquaternion(2)
    assert f.partial(1)(POINT) == Biquaternion(1)
    assert f.partial(2)(POINT) == Biquaternion(0, 6)
    assert f.partial(3)(POINT) == Biquaternion(0, 0, 1j)
    # cached
    assert f.partial(1) is f.partial(1)


@pytest.mark.unit
def test_fd_backend_matches_analytic():
    """Test the Richardson stencil against sympy up to third derivatives."""
    comps = ["sin(t + x)*y", "x**3*z", "exp(-y**2)", "cos(z)*t"]
    exact = field_from_components(comps, Backend.ANALYTIC)
    approx = field_from_components(comps, Backend.FD)
    assert not approx.analytic
    x = (0.3, -0.4, 0.5, 0.2)
    for mu in range(4):
        assert max_abs_difference(exact.partial(mu)(x), approx.partial(mu)(x)) < 1e-9
    third = approx.partial(1).partial(1).partial(1)(x)
    assert max_abs_difference(exact.partial(1).partial(1).partial(1)(x), third) < 1e-4


@pytest.mark.unit
def test_function_field_uses_central_differences():
    """Test a plain function differentiated by central differences."""
    f = AnalyticField.from_function(_wavy, label="wavy")
    x = (0.2, 0.4, -0.1, 0.7)
    assert repr(f) == "AnalyticField(wavy, fd)"
    expected_t = Biquaternion(math.cos(0.6), 0, 0, 0.1 * math.exp(0.02))
    assert max_abs_difference(f.partial(0)(x), expected_t) < 1e-7
    expected_x = Biquaternion(math.cos(0.6), 0, 0.7, 0)
    assert max_abs_difference(f.partial(1)(x), expected_x) < 1e-7


@pytest.mark.unit
def test_plane_wave_closed_form_derivatives():
    """Test ∂ₜ → −iE and ∂ₓ → +ipₓ on a plane wave."""
    amplitude = Biquaternion(1, 0.5j, 0, -1)
    wave = AnalyticField.plane_wave(amplitude, 2.0, (0.5, -1.0, 0.25))
    x = (0.1, 0.2, 0.3, 0.4)
    value = wave(x)
    assert wave.partial(0)(x).is_close(value * -2j)
    assert wave.partial(1)(x).is_close(value * 0.5j)
    assert wave.partial(2)(x).is_close(value * -1j)
    assert wave((0.0, 0.0, 0.0, 0.0)) == amplitude
    assert wave.analytic


@pytest.mark.unit
def test_combinators_apply_product_rule():
    """Test sums, constant products, field products and conjugations."""
    f = field_from_components(["t*x", "y", "0", "z**2"])
    g = field_from_components(["x", "0", "t*y", "1"])
    x = (0.5, -1.0, 2.0, 0.25)
    product = f.times(g)
    expected = f.partial(1)(x) * g(x) + f(x) * g.partial(1)(x)
    assert product.partial(1)(x).is_close(expected)
    assert (f + g).partial(2)(x).is_close(f.partial(2)(x) + g.partial(2)(x))
    assert (f - g)(x).is_close(f(x) - g(x))
    assert (-f)(x).is_close(-f(x))
    assert f.right_mul(UNIT_K).partial(3)(x).is_close(f.partial(3)(x) * UNIT_K)
    assert f.left_mul(UNIT_K)(x).is_close(UNIT_K * f(x))
    assert f.conj_quat().partial(0)(x).is_close(conj_quat(f.partial(0)(x)))
    assert f.conj_herm()(x).is_close(conj_herm(f(x)))
    assert product.analytic


@pytest.mark.unit
def test_reflected_field_flips_derivative_signs():
    """Test f(s⊙x) and its partials."""
    f = field_from_components(["t*x", "y", "0", "z**2"])
    reflected = f.reflected((-1, -1, 1, 1))
    x = (0.5, -1.0, 2.0, 0.25)
    assert reflected(x).is_close(f((-0.5, 1.0, 2.0, 0.25)))
    assert reflected.partial(1)(x).is_close(-f.partial(1)((-0.5, 1.0, 2.0, 0.25)))
    with pytest.raises(FieldError, match="Reflection signs"):
        f.reflected((1, 0, 1, 1))


@pytest.mark.unit
def test_field_errors():
    """Test point, step, return value and component validation."""
    f = AnalyticField.constant(ONE)
    with pytest.raises(FieldError, match="four coordinates"):
        f((0.0, 1.0))
    with pytest.raises(FieldError, match="index must be 0..3"):
        f.partial(4)
    with pytest.raises(FieldError, match="step must be positive"):
        AnalyticField.from_function(_wavy, step=0.0)
    with pytest.raises(FieldError, match="expected Biquaternion"):
        AnalyticField.from_function(lambda p: 1.0)(POINT)
    with pytest.raises(FieldError, match="not finite"):
        AnalyticField.from_function(lambda p: Biquaternion(math.inf))(POINT)
    with pytest.raises(FieldError, match="four components"):
        field_from_components(["t", "x"])
    with pytest.raises(FieldError, match="unknown symbols"):
        field_from_components(["w", 0, 0, 0])
    with pytest.raises(FieldError, match="Cannot parse"):
        parse_scalar("x +* y")


@pytest.mark.unit
def test_constant_field_has_zero_derivatives():
    """Test that a constant differentiates to zero."""
    f = AnalyticField.constant(Biquaternion(1, 2, 3, 4))
    assert f(POINT) == Biquaternion(1, 2, 3, 4)
    assert f.partial(2)(POINT) == Biquaternion()


@pytest.mark.unit
def test_potential_families():
    """Test the standard gauge potentials at a point."""
    x = (2.0, 3.0, 0.5, 1.0)
    # A⃗ = ½B⃗×r⃗ with B along z: (−y, x, 0)·B/2
    assert constant_B((0, 0, 2))(x).is_close(Biquaternion(0, -0.5j, 3j, 0))
    assert uniform_E((0.5, 0, 0))(x).is_close(Biquaternion(-1.5))
    assert pure_gauge("t*x")(x).is_close(Biquaternion(3, -2j, 0, 0))
    assert potential_field("x", "y", "z", "t")(x).is_close(Biquaternion(3, 0.5j, 1j, 2j))


@pytest.mark.unit
def test_plane_wave_em_warns_on_longitudinal_polarization(caplog):
    """Test the transversality warning."""
    plane_wave_em((1, 0, 0), (1, 0, 0))
    assert "not transverse" in caplog.text
    caplog.clear()
    plane_wave_em((0, 1, 0), (1, 0, 0))
    assert "not transverse" not in caplog.text


@pytest.mark.unit
def test_coulomb_exclusion_radius():
    """Test q/r and the refusal to evaluate near the charge."""
    field = coulomb(1.0)
    assert field((0.0, 2.0, 0.0, 0.0)).is_close(Biquaternion(0.5))
    assert field.partial(1)((0.0, 2.0, 0.0, 0.0)).is_close(Biquaternion(-0.25))
    with pytest.raises(FieldError, match="Coulomb potential evaluated"):
        field((0.0, 0.0, 0.0, 0.0))
    with pytest.raises(FieldError, match="Coulomb potential evaluated"):
        field.partial(2)((0.0, 1e-4, 0.0, 0.0))


@pytest.mark.unit
def test_custom_polynomial_validation():
    """Test that custom components must be real polynomials."""
    field = custom_polynomial(["x*y", "0", "t", "z**2"])
    assert field((1.0, 2.0, 3.0, 4.0)).is_close(Biquaternion(6, 0, 1j, 16j))
    with pytest.raises(FieldError, match="not a polynomial"):
        custom_polynomial(["sin(x)", "0", "0", "0"])
    with pytest.raises(FieldError, match="real coefficients"):
        custom_polynomial(["I*x", "0", "0", "0"])


@pytest.mark.unit
def test_gaussian_profile_width_check():
    """Test that the packet width must be positive."""
    with pytest.raises(FieldError, match="width must be positive"):
        gaussian_profile(0.0)


@pytest.mark.unit
def test_family_from_config():
    """Test the JSON family descriptions."""
    x = (0.0, 1.0, 2.0, 0.0)
    total = family_from_config({"family": "sum", "terms": [
        {"family": "constant_B", "B": [0, 0, 2]},
        {"family": "uniform_E", "E": [1, 0, 0]},
    ]})
    assert total(x).is_close(constant_B((0, 0, 2))(x) + uniform_E((1, 0, 0))(x))
    assert family_from_config({"family": "coulomb", "charge": 2})((0.0, 0.0, 0.0, 4.0)).is_close(Biquaternion(0.5))
    fd = family_from_config({"family": "custom_polynomial", "components": ["x", "0", "0", "0"]}, Backend.FD)
    assert not fd.analytic

    with pytest.raises(FieldError, match="Unknown field family"):
        family_from_config({"family": "dipole"})
    with pytest.raises(FieldError, match="missing parameter"):
        family_from_config({"family": "constant_B"})
    with pytest.raises(FieldError, match="at least one term"):
        family_from_config({"family": "sum", "terms": []})
    with pytest.raises(FieldError, match="JSON object"):
        family_from_config(["constant_B"])
    with pytest.raises(FieldError, match="3-vector"):
        family_from_config({"family": "uniform_E", "E": [1, 0]})


@pytest.mark.unit
@pytest.mark.parametrize("config", [
    {"family": "plane_wave_em", "polarization": [0, 1, 0], "wave_vector": [1, 0, 0]},
    {"family": "constant_B", "B": [0, 0, 1]},
    {"family": "uniform_E", "E": [0.5, 0, 0]},
    {"family": "coulomb", "charge": 1.0},
    {"family": "pure_gauge", "phase": "t*x"},
    {"family": "custom_polynomial", "components": ["x", "0", "0", "0"]},
    {"family": "sum", "terms": [{"family": "constant_B", "B": [0, 0, 1]}]},
], ids=lambda config: config["family"])
def test_family_from_config_accepts_every_family(config):
    """Test that each documented family name builds a potential."""
    assert config["family"] in FAMILIES
    field = family_from_config(config)
    assert isinstance(field, AnalyticField)
    assert field((0.5, 1.0, 2.0, 0.25)).is_finite()


@pytest.mark.unit
def test_family_names_match_their_builders():
    """Test that config names resolve to the same potentials as the builder functions."""
    x = (0.5, 1.0, 2.0, 0.25)
    wave = family_from_config({"family": "plane_wave_em", "polarization": [0, 1, 0], "wave_vector": [1, 0, 0]})
    assert wave(x).is_close(plane_wave_em((0, 1, 0), (1, 0, 0))(x))
    poly = family_from_config({"family": "custom_polynomial", "components": ["x*y", "0", "t", "z**2"]})
    assert poly(x).is_close(custom_polynomial(["x*y", "0", "t", "z**2"])(x))
    with pytest.raises(FieldError, match="Unknown field family"):
        family_from_config({"family": "custom", "components": ["x", "0", "0", "0"]})
