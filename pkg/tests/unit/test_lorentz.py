"""
Unit tests for src.lorentz module.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings

from src.core_algebra import (
    ONE, UNIT_I, UNIT_J, Biquaternion, FieldStrengthValue, FourVector, Variance, conj_herm, conj_quat,
    minkowski_norm, qnorm, vector_from_real,
)
from src.lorentz import (
    LorentzError, LorentzGenerator, boost_matrix, exp_biquat, exp_series, field_from_tensor, field_tensor,
    generator_sequence, rotate_vector, rotation_matrix, transform_contravariant, transform_covariant,
    transform_field_strength, transform_scalar,
)
from tests.fixtures.strategies import biquaternions, four_vectors, generators


@pytest.mark.unit
def test_generator_biquaternion_is_half_angle():
    """Test Λ = (κ⃗ + iλ⃗)/2."""
    g = LorentzGenerator((0.0, 0.0, 2.0), (1.0, 0.0, 0.0))
    assert g.biquaternion == Biquaternion(0, 0.5j, 0, 1.0)
    assert LorentzGenerator.from_biquaternion(g.biquaternion) == g


@pytest.mark.unit
def test_generator_constructors_and_json():
    """Test rotation/boost constructors and the JSON literal."""
    rot = LorentzGenerator.rotation((0, 0, 2), math.pi)
    assert rot.kappa == pytest.approx((0.0, 0.0, math.pi))
    assert rot.lambda_ == (0.0, 0.0, 0.0)
    boost = LorentzGenerator.boost((3, 4, 0), 0.5)
    assert boost.lambda_ == pytest.approx((0.3, 0.4, 0.0))

    assert LorentzGenerator.from_json({"kappa": [1, 2, 3]}).kappa == (1.0, 2.0, 3.0)
    assert LorentzGenerator.from_json(boost.to_json()) == boost
    with pytest.raises(LorentzError, match="Unknown generator keys"):
        LorentzGenerator.from_json({"kappa": [0, 0, 1], "theta": 1})
    with pytest.raises(LorentzError):
        LorentzGenerator.from_json([0, 0, 1])
    with pytest.raises(LorentzError):
        LorentzGenerator.from_biquaternion(ONE)
    with pytest.raises(LorentzError, match="nonzero"):
        LorentzGenerator.rotation((0, 0, 0), 1.0)


@pytest.mark.unit
@settings(max_examples=50, deadline=None)
@given(biquaternions)
def test_exp_matches_series(g):
    """Test the closed-form exponential against the power series."""
    g = g * 0.5
    assert exp_biquat(g).is_close(exp_series(g, terms=60), 1e-9)


@pytest.mark.unit
def test_exp_small_and_isotropic_arguments():
    """Test the Taylor branch, including θ² = 0 for a nonzero null vector."""
    assert exp_biquat(Biquaternion(0, 1e-9)).is_close(Biquaternion(1, 1e-9))
    null = Biquaternion(0, 1, 1j, 0)
    assert abs(qnorm(null)) == 0
    # u⃗² = 0, so e^u = 1 + u exactly
    assert exp_biquat(null).is_close(ONE + null)
    assert exp_biquat(Biquaternion(0, 0, 0, math.pi)).is_close(-ONE)


@pytest.mark.unit
@pytest.mark.parametrize("angle", [0.999e-6, 1.001e-6])
def test_exp_is_continuous_at_series_threshold(angle):
    """Test both sides of the series switch against cos, sin, cosh and sinh."""
    rotation = exp_biquat(Biquaternion(0, 0, angle, 0))
    assert rotation.is_close(Biquaternion(math.cos(angle), 0, math.sin(angle), 0), 1e-15)
    boost = exp_biquat(Biquaternion(0, angle * 1j, 0, 0))
    assert boost.is_close(Biquaternion(math.cosh(angle), math.sinh(angle) * 1j, 0, 0), 1e-15)


@pytest.mark.unit
def test_tilde_of_exponential_is_inverse():
    """Test conj_quat(e^Λ) = e^{−Λ} for a pure-vector generator."""
    g = LorentzGenerator((0.3, -1.2, 0.4), (0.2, 0.1, -0.6)).biquaternion
    left = exp_biquat(g)
    assert conj_quat(left).is_close(exp_biquat(-g))
    assert (left * conj_quat(left)).is_close(ONE)


@pytest.mark.unit
@settings(max_examples=50, deadline=None)
@given(four_vectors, generators)
def test_contravariant_transform_preserves_norm(v, g):
    """Test that e^Λ v e^{Λ†} is a four-vector with unchanged Minkowski norm."""
    image = transform_contravariant(v, g)
    assert image.variance is Variance.CONTRAVARIANT
    before = minkowski_norm(v).real
    assert minkowski_norm(image).real == pytest.approx(before, abs=1e-7 * max(1.0, abs(before)))


@pytest.mark.unit
def test_boost_agrees_with_matrix():
    """Test a boost against the 4×4 Lorentz matrix."""
    direction, rapidity = (1.0, 2.0, -2.0), 0.7
    v = FourVector.from_components((1.0, 0.3, -0.4, 2.0))
    image = transform_contravariant(v, LorentzGenerator.boost(direction, rapidity))
    expected = boost_matrix(direction, rapidity) @ np.array(v.components())
    assert np.allclose(image.components(), expected, atol=1e-12)


@pytest.mark.unit
def test_rest_vector_picks_up_velocity_along_boost():
    """Test that the rest four-velocity boosted along x gets v¹ = sinh λ."""
    image = transform_contravariant(FourVector.from_components((1, 0, 0, 0)), LorentzGenerator.boost((1, 0, 0), 0.4))
    assert image.components() == pytest.approx((math.cosh(0.4), math.sinh(0.4), 0.0, 0.0))


@pytest.mark.unit
def test_rotation_agrees_with_scipy_matrix():
    """Test a rotation against scipy's rotation-vector matrix."""
    axis, angle = (0.0, 0.6, 0.8), 1.1
    v = FourVector.from_components((0.5, 1.0, -2.0, 0.25))
    image = transform_contravariant(v, LorentzGenerator.rotation(axis, angle))
    expected = rotation_matrix(axis, angle) @ np.array(v.components())
    assert np.allclose(image.components(), expected, atol=1e-12)


@pytest.mark.unit
def test_covariant_transform_is_conjugate_of_contravariant():
    """Test e^{Λ*} v e^{Λ̃} against the star of the contravariant law."""
    g = LorentzGenerator((0.2, 0.4, -0.1), (0.5, -0.3, 0.2))
    v = FourVector.from_components((1.0, 0.2, 0.3, -0.7))
    lowered = v.lowered()
    assert transform_covariant(lowered, g).is_close(transform_contravariant(v, g).lowered(), 1e-12)
    with pytest.raises(LorentzError):
        transform_covariant(v, g)
    with pytest.raises(LorentzError):
        transform_contravariant(lowered, g)


@pytest.mark.unit
def test_rotate_vector():
    """Test a quarter turn about k̂ taking î to ĵ."""
    image = rotate_vector(UNIT_I, (0, 0, 1), math.pi / 2)
    assert image.is_close(UNIT_J)
    u = vector_from_real((1.0, -2.0, 0.5))
    assert rotate_vector(u, (0, 0, 1), 2 * math.pi).is_close(u)
    with pytest.raises(LorentzError, match="unit vector"):
        rotate_vector(u, (0, 0, 2), 1.0)
    with pytest.raises(LorentzError, match="pure vectors"):
        rotate_vector(ONE + u, (0, 0, 1), 1.0)


@pytest.mark.unit
def test_field_strength_rotation_rotates_b_and_e():
    """Test that a rotation acts on B⃗ and E⃗ separately."""
    phi = FieldStrengthValue.from_fields((1.0, 0.0, 0.0), (0.0, 0.0, 2.0))
    image = transform_field_strength(phi, LorentzGenerator.rotation((0, 0, 1), math.pi / 2))
    assert np.allclose(image.magnetic, (0.0, 1.0, 0.0), atol=1e-12)
    assert np.allclose(image.electric, (0.0, 0.0, 2.0), atol=1e-12)


@pytest.mark.unit
def test_field_strength_boost_mixes_b_and_e():
    """Test e^Λ F e^{Λ̃} for a boost along x, component by component."""
    lam = 0.3
    ch, sh = math.cosh(lam), math.sinh(lam)
    b, e = np.array([0.2, 1.0, -0.5]), np.array([0.7, 0.4, 0.9])
    image = transform_field_strength(FieldStrengthValue.from_fields(b, e), LorentzGenerator.boost((1, 0, 0), lam))
    assert np.allclose(image.magnetic, (b[0], b[1] * ch + e[2] * sh, b[2] * ch - e[1] * sh), atol=1e-12)
    assert np.allclose(image.electric, (e[0], e[1] * ch - b[2] * sh, e[2] * ch + b[1] * sh), atol=1e-12)


@pytest.mark.unit
@settings(max_examples=40, deadline=None)
@given(generators)
def test_field_invariants_preserved(g):
    """Test that qnorm(F) = B² − E² + 2iB·E is invariant."""
    phi = FieldStrengthValue.from_fields((0.3, -1.0, 0.5), (0.8, 0.1, -0.4))
    image = transform_field_strength(phi, g)
    assert abs(qnorm(image.base) - qnorm(phi.base)) < 1e-8


@pytest.mark.unit
def test_field_tensor_round_trip():
    """Test F^{μν} packing of B⃗ and E⃗."""
    phi = FieldStrengthValue.from_fields((1.0, 2.0, 3.0), (-1.0, 0.5, 0.25))
    tensor = field_tensor(phi)
    assert np.allclose(tensor, -tensor.T)
    assert tensor[0, 1] == 1.0
    back = field_from_tensor(tensor)
    assert np.allclose(back.magnetic, phi.magnetic)
    assert np.allclose(back.electric, phi.electric)


@pytest.mark.unit
def test_scalars_are_invariant(caplog):
    """Test e^Λ φ e^{Λ̃} = φ without warnings."""
    g = LorentzGenerator((0.1, 0.2, 0.3), (0.4, 0.5, 0.6))
    assert transform_scalar(2 - 1j, g) == pytest.approx(2 - 1j)
    assert "vector part" not in caplog.text


@pytest.mark.unit
def test_generator_sequence_same_generator_composes():
    """Test that applying the same generator twice equals the doubled generator."""
    g = LorentzGenerator((0.2, -0.4, 0.1), (0.3, 0.0, -0.2))
    doubled = LorentzGenerator(tuple(2 * k for k in g.kappa), tuple(2 * l for l in g.lambda_))
    assert generator_sequence([g, g]).is_close(exp_biquat(doubled.biquaternion))
    assert generator_sequence([]).is_close(ONE)


@pytest.mark.unit
def test_generator_sequence_non_commuting():
    """Test that e^{κ}e^{iλ} differs from e^{κ+iλ} for non-parallel generators."""
    rot = LorentzGenerator.rotation((0, 0, 1), 1.0)
    boost = LorentzGenerator.boost((1, 0, 0), 1.0)
    combined = LorentzGenerator(rot.kappa, boost.lambda_)
    assert not generator_sequence([rot, boost]).is_close(exp_biquat(combined.biquaternion), 1e-6)
    v = FourVector.from_components((1.0, 0.0, 0.0, 0.0))
    left = generator_sequence([rot, boost])
    stepwise = transform_contravariant(transform_contravariant(v, boost), rot)
    assert stepwise.base.is_close(left * v.base * conj_herm(left), 1e-12)
