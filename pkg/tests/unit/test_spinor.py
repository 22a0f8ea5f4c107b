"""
Unit tests for src.spinor module.
"""

import math

import pytest
from hypothesis import given, settings

from src.core_algebra import ONE, UNIT_I, UNIT_J, UNIT_K, Biquaternion, conj_herm
from src.lorentz import LorentzGenerator
from src.spinor import (
    CHARGE_CONJUGATION_SQUARE_PHASE, P_L, P_R, ChiralSpinorPair, Chirality, SpinorBasis, SpinorError,
    StandardSpinorPair, apply_C, apply_CPT, apply_P, apply_T, charge_conjugated, cpt_expected,
    decompose_dirac, elevate, extract_components, from_standard, gauge_transform, is_in_ideal,
    lorentz_transform, make_left, make_right, spin_z_eigencheck, to_standard,
)
from tests.fixtures.strategies import complexes, generators, spinor_pairs


@pytest.mark.unit
def test_projectors_are_orthogonal_idempotents():
    """Test P_L² = P_L, P_R² = P_R, P_L P_R = 0, P_L + P_R = 1 and P_L† = P_L."""
    assert (P_L * P_L).is_close(P_L)
    assert (P_R * P_R).is_close(P_R)
    assert (P_L * P_R).is_close(Biquaternion())
    assert (P_L + P_R).is_close(ONE)
    assert conj_herm(P_L).is_close(P_L)


@pytest.mark.unit
def test_make_left_literal_values():
    """Test the explicit basis elements P_L and ĵP_L."""
    assert make_left(1, 0) == Biquaternion(0.5, 0, 0, 0.5j)
    assert make_left(0, 1).is_close(Biquaternion(0, 0.5j, 0.5, 0))
    assert make_right(0, 1).is_close(P_R)
    assert make_right(1, 0).is_close(-(UNIT_J * P_R))


@pytest.mark.unit
@settings(max_examples=50, deadline=None)
@given(complexes, complexes)
def test_components_round_trip(xi, chi):
    """Test extract_components(make_*(ξ, χ)) = (ξ, χ) for both chiralities."""
    for chirality in Chirality:
        maker = make_left if chirality is Chirality.LEFT else make_right
        psi = maker(xi, chi)
        assert is_in_ideal(psi, chirality)
        got_xi, got_chi = extract_components(psi, chirality)
        assert abs(got_xi - xi) < 1e-12
        assert abs(got_chi - chi) < 1e-12


@pytest.mark.unit
def test_extract_rejects_wrong_ideal():
    """Test that a left spinor is not accepted as right-handed."""
    with pytest.raises(SpinorError, match="right-handed ideal"):
        extract_components(make_left(1, 2), Chirality.RIGHT)
    with pytest.raises(SpinorError):
        ChiralSpinorPair(make_right(1, 0), make_right(0, 1))


@pytest.mark.unit
def test_nonstandard_basis():
    """Test spin measured along î with ĵ as the orthogonal unit."""
    basis = SpinorBasis(UNIT_I, UNIT_J)
    psi = make_left(0.3 - 0.2j, 1.1j, basis)
    assert is_in_ideal(psi, Chirality.LEFT, basis)
    xi, chi = extract_components(psi, Chirality.LEFT, basis)
    assert abs(xi - (0.3 - 0.2j)) < 1e-12
    assert abs(chi - 1.1j) < 1e-12
    assert spin_z_eigencheck(make_left(1, 0, basis), basis) == 0.5


@pytest.mark.unit
def test_basis_validation():
    """Test that basis vectors must be orthogonal real units."""
    with pytest.raises(SpinorError, match="orthogonal"):
        SpinorBasis(UNIT_K, UNIT_K)
    with pytest.raises(SpinorError, match="unit vector"):
        SpinorBasis(UNIT_K * 2, UNIT_J)
    with pytest.raises(SpinorError, match="real pure vector"):
        SpinorBasis(UNIT_K * 1j, UNIT_J)


@pytest.mark.unit
def test_spin_eigenvalues():
    """Test ik̂P_L = P_L (spin up) and ik̂ĵP_L = −ĵP_L (spin down)."""
    assert spin_z_eigencheck(make_left(1, 0)) == 0.5
    assert spin_z_eigencheck(make_left(0, 1)) == -0.5
    assert spin_z_eigencheck(make_left(1, 1)) is None
    with pytest.raises(SpinorError, match="zero spinor"):
        spin_z_eigencheck(Biquaternion())


@pytest.mark.unit
def test_elevation_sign_table():
    """Test right multiplication by ĵ between the ideals."""
    xi, chi = 0.4 + 0.1j, -0.7j
    assert (make_right(xi, chi) * UNIT_J).is_close(make_left(xi, chi))
    assert (make_left(xi, chi) * UNIT_J).is_close(-make_right(xi, chi))
    assert elevate(make_right(xi, chi)).is_close(make_left(xi, chi))
    with pytest.raises(SpinorError):
        elevate(make_left(xi, chi))


@pytest.mark.unit
def test_pair_json_and_dirac(sample_pair):
    """Test the spinor literal and the Dirac decomposition."""
    data = sample_pair.to_json()
    assert data["xiL"] == pytest.approx([0.6, 0.2])
    assert ChiralSpinorPair.from_json(data).is_close(sample_pair)
    assert decompose_dirac(sample_pair.dirac()) == pytest.approx(sample_pair.components())
    assert ChiralSpinorPair.from_dirac(sample_pair.dirac()).is_close(sample_pair)
    with pytest.raises(SpinorError, match="Unknown spinor components"):
        ChiralSpinorPair.from_json({"xiL": 1, "zeta": 2})


@pytest.mark.unit
def test_standard_representation_round_trip(sample_pair):
    """Test ζ = (ψ_L + ψ_Rĵ)/√2, η = (ψ_L − ψ_Rĵ)/√2 and back."""
    standard = to_standard(sample_pair)
    assert isinstance(standard, StandardSpinorPair)
    lifted = sample_pair.psi_right * UNIT_J
    assert standard.zeta.is_close((sample_pair.psi_left + lifted) / math.sqrt(2))
    assert from_standard(standard).is_close(sample_pair)
    with pytest.raises(SpinorError):
        StandardSpinorPair(make_right(1, 0), make_left(1, 0))


@pytest.mark.unit
@settings(max_examples=40, deadline=None)
@given(spinor_pairs, generators)
def test_lorentz_transform_preserves_ideals(pair, g):
    """Test that e^Λ and e^{Λ*} keep each spinor in its ideal."""
    image = lorentz_transform(pair, g)
    assert is_in_ideal(image.psi_left, Chirality.LEFT, tol=1e-10)
    assert is_in_ideal(image.psi_right, Chirality.RIGHT, tol=1e-10)


@pytest.mark.unit
def test_full_turn_flips_sign(sample_pair):
    """Test that a 2π rotation multiplies spinors by −1 and 4π restores them."""
    for axis in ((0, 0, 1), (1, 1, 0), (0.3, -0.4, 0.8)):
        turned = lorentz_transform(sample_pair, LorentzGenerator.rotation(axis, 2 * math.pi))
        assert turned.psi_left.is_close(-sample_pair.psi_left)
        assert turned.psi_right.is_close(-sample_pair.psi_right)
        twice = lorentz_transform(sample_pair, LorentzGenerator.rotation(axis, 4 * math.pi))
        assert twice.is_close(sample_pair)


@pytest.mark.unit
def test_boost_acts_oppositely_on_chiralities():
    """Test e^{Λ*} on ψ_R against e^Λ on ψ_L for a pure boost."""
    pair = ChiralSpinorPair.from_components(1, 0, 1, 0)
    g = LorentzGenerator.boost((0, 0, 1), 0.5)
    image = lorentz_transform(pair, g)
    # spin up along the boost axis: ψ_L scales by e^{λ/2}, ψ_R by e^{−λ/2}
    xi_l, chi_l, xi_r, chi_r = image.components()
    assert xi_l == pytest.approx(math.exp(0.25))
    assert xi_r == pytest.approx(math.exp(-0.25))
    assert abs(chi_l) + abs(chi_r) < 1e-12


@pytest.mark.unit
def test_gauge_transform_multiplies_both(sample_pair):
    """Test the global phase e^{iφ}."""
    image = gauge_transform(sample_pair, math.pi / 3)
    phase = complex(math.cos(math.pi / 3), math.sin(math.pi / 3))
    assert image.psi_left.is_close(phase * sample_pair.psi_left)
    assert image.psi_right.is_close(phase * sample_pair.psi_right)


@pytest.mark.unit
def test_discrete_symmetries_on_constant_spinor(sample_pair):
    """Test C, P and T on a constant Dirac spinor."""
    psi = sample_pair.dirac()
    x = (0.3, -0.2, 0.5, 0.1)
    assert apply_C(psi, x).is_close(1j * psi.conj_complex())
    assert apply_P(psi, x).is_close(-(psi * UNIT_I))
    assert apply_T(psi, x).is_close(1j * psi.conj_complex() * UNIT_J)


@pytest.mark.unit
def test_cpt_on_field():
    """Test C∘P∘T ψ(x) = ψ(−x)k̂ for an x-dependent field."""
    base = ChiralSpinorPair.from_components(0.5, 0.2j, -0.3, 1.0).dirac()

    def field(point):
        t, x, y, z = point
        return base * complex(math.cos(t + 2 * x), math.sin(y - z)) + UNIT_K * (x * t)

    for point in ((0.1, 0.2, 0.3, 0.4), (-1.0, 0.5, -0.25, 2.0)):
        assert apply_CPT(field, point).is_close(cpt_expected(field, point))
        assert cpt_expected(field, point).is_close(field(tuple(-c for c in point)) * UNIT_K)


@pytest.mark.unit
def test_charge_conjugation_squares_to_identity(sample_pair):
    """Test C∘C = +1."""
    psi = sample_pair.dirac()
    twice = charge_conjugated(charge_conjugated(psi))((0.0, 0.0, 0.0, 0.0))
    assert twice.is_close(CHARGE_CONJUGATION_SQUARE_PHASE * psi)


@pytest.mark.unit
def test_discrete_symmetries_reject_other_input():
    """Test the field type check."""
    with pytest.raises(SpinorError, match="Dirac spinor field"):
        apply_C("not a spinor")
