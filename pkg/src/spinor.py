"""
Chirality projectors and Weyl spinors inside C⊗H.

Left-handed spinors live in the right ideal {a·P_L}, right-handed ones in
{a·P_R}, with P_L = (1 + ik̂)/2 and P_R = (1 − ik̂)/2:

    ψ_L = ξ_L P_L + χ_L ĵP_L
    ψ_R = −ξ_R ĵP_R + χ_R P_R

Elevation (right multiplication by ĵ) maps between the two ideals with the
sign table

    make_right(ξ, χ)·ĵ = make_left(ξ, χ)
    make_left(ξ, χ)·ĵ = −make_right(ξ, χ)

so the rest-frame condition ψ_L = ψ_R ĵ means equal components.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np

from src.core_algebra import (
    ALGEBRA_TOL, ONE, UNIT_I, UNIT_J, UNIT_K, Biquaternion, QuaternionError,
    SpacetimePoint, conj_complex, euclidean_magnitude, is_pure_vector, parse_complex,
)
from src.lorentz import GeneratorLike, generator_value, exp_biquat

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)

# C∘C = +1 with iψ* as charge conjugation
CHARGE_CONJUGATION_SQUARE_PHASE = 1


class SpinorError(QuaternionError):
    """Exception raised for spinors outside their ideal or malformed spinor input."""


class Chirality(str, Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class SpinorBasis:
    """Measured spin axis â and an orthogonal unit b̂ (default k̂, ĵ)."""

    axis: Biquaternion = UNIT_K
    orthogonal: Biquaternion = UNIT_J

    def __post_init__(self) -> None:
        for name, unit in (("axis", self.axis), ("orthogonal", self.orthogonal)):
            comps = (unit.x, unit.y, unit.z)
            if not is_pure_vector(unit) or any(abs(c.imag) > ALGEBRA_TOL for c in comps):
                raise SpinorError(f"Basis {name} must be a real pure vector")
            length = math.sqrt(sum(c.real ** 2 for c in comps))
            if abs(length - 1.0) > 1e-12:
                raise SpinorError(f"Basis {name} must be a unit vector, got length {length}")
        dot = (self.axis.x * self.orthogonal.x + self.axis.y * self.orthogonal.y
               + self.axis.z * self.orthogonal.z)
        if abs(dot) > 1e-12:
            raise SpinorError(f"Basis vectors must be orthogonal, got dot product {dot.real}")

    @property
    def projector_left(self) -> Biquaternion:
        return (ONE + 1j * self.axis) / 2

    @property
    def projector_right(self) -> Biquaternion:
        return (ONE - 1j * self.axis) / 2

    def projector(self, chirality: Chirality) -> Biquaternion:
        return self.projector_left if Chirality(chirality) is Chirality.LEFT else self.projector_right

    def is_standard(self) -> bool:
        return self.axis == UNIT_K and self.orthogonal == UNIT_J


STANDARD_BASIS = SpinorBasis()
P_L = STANDARD_BASIS.projector_left
P_R = STANDARD_BASIS.projector_right


def _membership_residual(psi: Biquaternion, chirality: Chirality, basis: SpinorBasis) -> float:
    other = Chirality.RIGHT if Chirality(chirality) is Chirality.LEFT else Chirality.LEFT
    return euclidean_magnitude(psi * basis.projector(other))


def is_in_ideal(psi: Biquaternion, chirality: Chirality, basis: SpinorBasis = STANDARD_BASIS,
                tol: float = ALGEBRA_TOL) -> bool:
    """True if ψ·P_R = 0 (left) or ψ·P_L = 0 (right) within tol."""
    return _membership_residual(psi, chirality, basis) <= tol * max(1.0, euclidean_magnitude(psi))


def make_left(xi: complex, chi: complex, basis: SpinorBasis = STANDARD_BASIS) -> Biquaternion:
    """ξ P_L + χ b̂P_L."""
    p = basis.projector_left
    return xi * p + chi * (basis.orthogonal * p)


def make_right(xi: complex, chi: complex, basis: SpinorBasis = STANDARD_BASIS) -> Biquaternion:
    """−ξ b̂P_R + χ P_R."""
    p = basis.projector_right
    return -xi * (basis.orthogonal * p) + chi * p


def make_spinor(xi: complex, chi: complex, chirality: Chirality,
                basis: SpinorBasis = STANDARD_BASIS) -> Biquaternion:
    if Chirality(chirality) is Chirality.LEFT:
        return make_left(xi, chi, basis)
    return make_right(xi, chi, basis)


def extract_components(psi: Biquaternion, chirality: Chirality, basis: SpinorBasis = STANDARD_BASIS,
                       tol: float = ALGEBRA_TOL) -> Tuple[complex, complex]:
    """Recover (ξ, χ) from a spinor in the given ideal.

    The standard basis uses the closed form; other bases solve the basis
    expansion by least squares.

    Args:
        psi: Spinor biquaternion.
        chirality: Which ideal psi belongs to.
        basis: Spin axis and orthogonal unit.
        tol: Membership tolerance, relative to the size of psi.

    Returns:
        Tuple[complex, complex]: (ξ, χ)

    Raises:
        SpinorError: If psi is outside the stated ideal.
    """
    chirality = Chirality(chirality)
    if not is_in_ideal(psi, chirality, basis, tol):
        raise SpinorError(
            f"Value is not in the {chirality.value}-handed ideal "
            f"(residual {_membership_residual(psi, chirality, basis):.3e})"
        )
    if basis.is_standard():
        if chirality is Chirality.LEFT:
            return psi.w - 1j * psi.z, psi.y - 1j * psi.x
        return -psi.y - 1j * psi.x, psi.w + 1j * psi.z
    columns = np.column_stack([
        make_spinor(1, 0, chirality, basis).as_array(),
        make_spinor(0, 1, chirality, basis).as_array(),
    ])
    solution, *_ = np.linalg.lstsq(columns, psi.as_array(), rcond=None)
    return complex(solution[0]), complex(solution[1])


def decompose_dirac(psi_d: Biquaternion) -> Tuple[complex, complex, complex, complex]:
    """Components (ξ_L, χ_L, ξ_R, χ_R) of an unconstrained Dirac biquaternion."""
    return (
        psi_d.w - 1j * psi_d.z,
        psi_d.y - 1j * psi_d.x,
        -psi_d.y - 1j * psi_d.x,
        psi_d.w + 1j * psi_d.z,
    )


@dataclass(frozen=True)
class ChiralSpinorPair:
    """Left- and right-handed Weyl spinors in the standard basis."""

    psi_left: Biquaternion
    psi_right: Biquaternion

    def __post_init__(self) -> None:
        if not is_in_ideal(self.psi_left, Chirality.LEFT):
            raise SpinorError("psi_left must satisfy ψ_L·P_R = 0")
        if not is_in_ideal(self.psi_right, Chirality.RIGHT):
            raise SpinorError("psi_right must satisfy ψ_R·P_L = 0")

    @classmethod
    def from_components(cls, xi_left: complex, chi_left: complex,
                        xi_right: complex, chi_right: complex) -> "ChiralSpinorPair":
        return cls(make_left(xi_left, chi_left), make_right(xi_right, chi_right))

    @classmethod
    def from_dirac(cls, psi_d: Biquaternion) -> "ChiralSpinorPair":
        return cls(psi_d * P_L, psi_d * P_R)

    def components(self) -> Tuple[complex, complex, complex, complex]:
        xi_l, chi_l = extract_components(self.psi_left, Chirality.LEFT)
        xi_r, chi_r = extract_components(self.psi_right, Chirality.RIGHT)
        return xi_l, chi_l, xi_r, chi_r

    def dirac(self) -> Biquaternion:
        return self.psi_left + self.psi_right

    def is_close(self, other: "ChiralSpinorPair", tol: float = ALGEBRA_TOL) -> bool:
        return self.psi_left.is_close(other.psi_left, tol) and self.psi_right.is_close(other.psi_right, tol)

    def to_json(self) -> Dict[str, List[float]]:
        names = ("xiL", "chiL", "xiR", "chiR")
        return {name: [value.real, value.imag] for name, value in zip(names, self.components())}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "ChiralSpinorPair":
        """Parse {"xiL":[re,im],"chiL":[re,im],"xiR":[re,im],"chiR":[re,im]}."""
        names = ("xiL", "chiL", "xiR", "chiR")
        if not isinstance(data, Mapping):
            raise SpinorError("Spinor literal must be an object")
        unknown = set(data) - set(names)
        if unknown:
            raise SpinorError(f"Unknown spinor components: {sorted(unknown)}")
        return cls.from_components(*(parse_complex(data.get(name, 0.0)) for name in names))


@dataclass(frozen=True)
class StandardSpinorPair:
    """ζ = (ψ_L + ψ_Rĵ)/√2 and η = (ψ_L − ψ_Rĵ)/√2, both left-handed."""

    zeta: Biquaternion
    eta: Biquaternion

    def __post_init__(self) -> None:
        for name, value in (("zeta", self.zeta), ("eta", self.eta)):
            if not is_in_ideal(value, Chirality.LEFT):
                raise SpinorError(f"{name} must lie in the left-handed ideal")

    def is_close(self, other: "StandardSpinorPair", tol: float = ALGEBRA_TOL) -> bool:
        return self.zeta.is_close(other.zeta, tol) and self.eta.is_close(other.eta, tol)


def spin_z_eigencheck(psi: Biquaternion, basis: SpinorBasis = STANDARD_BASIS,
                      tol: float = ALGEBRA_TOL) -> Optional[float]:
    """Return +1/2 if iâψ = ψ, −1/2 if iâψ = −ψ, None otherwise.

    Raises:
        SpinorError: For the zero spinor.
    """
    size = euclidean_magnitude(psi)
    if size == 0:
        raise SpinorError("Spin of the zero spinor is undefined")
    image = 1j * basis.axis * psi
    if euclidean_magnitude(image - psi) <= tol * size:
        return 0.5
    if euclidean_magnitude(image + psi) <= tol * size:
        return -0.5
    return None


def elevate(psi_right: Biquaternion, basis: SpinorBasis = STANDARD_BASIS) -> Biquaternion:
    """Move a right-handed spinor into the left-handed ideal by right-multiplying with ĵ."""
    if not is_in_ideal(psi_right, Chirality.RIGHT, basis):
        raise SpinorError("elevate expects a right-handed spinor")
    return psi_right * basis.orthogonal


def to_standard(pair: ChiralSpinorPair) -> StandardSpinorPair:
    lifted = pair.psi_right * UNIT_J
    return StandardSpinorPair((pair.psi_left + lifted) / SQRT2, (pair.psi_left - lifted) / SQRT2)


def from_standard(pair: StandardSpinorPair) -> ChiralSpinorPair:
    psi_left = (pair.zeta + pair.eta) / SQRT2
    psi_right = -((pair.zeta - pair.eta) * UNIT_J) / SQRT2
    return ChiralSpinorPair(psi_left, psi_right)


def lorentz_transform(pair: ChiralSpinorPair, generator: GeneratorLike) -> ChiralSpinorPair:
    """ψ_L → e^Λ ψ_L and ψ_R → e^{Λ*} ψ_R."""
    left = exp_biquat(generator_value(generator))
    return ChiralSpinorPair(left * pair.psi_left, conj_complex(left) * pair.psi_right)


def gauge_transform(pair: ChiralSpinorPair, phi: float) -> ChiralSpinorPair:
    phase = cmath.exp(1j * phi)
    return ChiralSpinorPair(phase * pair.psi_left, phase * pair.psi_right)


# Discrete symmetries act on Dirac spinors ψ_D = ψ_L + ψ_R as functions of spacetime

DiracField = Callable[[SpacetimePoint], Biquaternion]
DiracFieldLike = Union[DiracField, Biquaternion]


def _as_dirac_field(psi_d: DiracFieldLike) -> DiracField:
    if isinstance(psi_d, Biquaternion):
        return lambda point: psi_d
    if callable(psi_d):
        return psi_d
    raise SpinorError(f"Expected a Dirac spinor field, got {type(psi_d).__name__}")


def parity_point(point: SpacetimePoint) -> SpacetimePoint:
    t, x, y, z = point
    return (t, -x, -y, -z)


def time_reversed_point(point: SpacetimePoint) -> SpacetimePoint:
    t, x, y, z = point
    return (-t, x, y, z)


def negated_point(point: SpacetimePoint) -> SpacetimePoint:
    t, x, y, z = point
    return (-t, -x, -y, -z)


def charge_conjugated(psi_d: DiracFieldLike) -> DiracField:
    field = _as_dirac_field(psi_d)
    return lambda point: 1j * conj_complex(field(point))


def parity_transformed(psi_d: DiracFieldLike) -> DiracField:
    field = _as_dirac_field(psi_d)
    return lambda point: -(field(parity_point(point)) * UNIT_I)


def time_reversed(psi_d: DiracFieldLike) -> DiracField:
    field = _as_dirac_field(psi_d)
    return lambda point: 1j * conj_complex(field(time_reversed_point(point))) * UNIT_J


def apply_C(psi_d: DiracFieldLike, point: SpacetimePoint = (0.0, 0.0, 0.0, 0.0)) -> Biquaternion:
    """iψ_D*(x)."""
    return charge_conjugated(psi_d)(point)


def apply_P(psi_d: DiracFieldLike, point: SpacetimePoint) -> Biquaternion:
    """−ψ_D(t, −x⃗)·î."""
    return parity_transformed(psi_d)(point)


def apply_T(psi_d: DiracFieldLike, point: SpacetimePoint) -> Biquaternion:
    """iψ_D*(−t, x⃗)·ĵ."""
    return time_reversed(psi_d)(point)


def apply_CPT(psi_d: DiracFieldLike, point: SpacetimePoint) -> Biquaternion:
    """C∘P∘T composed from the three maps; equals ψ_D(−x)·k̂."""
    return charge_conjugated(parity_transformed(time_reversed(psi_d)))(point)


def cpt_expected(psi_d: DiracFieldLike, point: SpacetimePoint) -> Biquaternion:
    return _as_dirac_field(psi_d)(negated_point(point)) * UNIT_K
