"""
Exterior (Grassmann) algebra with biquaternion coefficients.

Generators anticommute among themselves and commute with î, ĵ, k̂ and with
complex numbers. The Dirac algebra has eight generators: the spinor
components ξ_L, χ_L, ξ_R, χ_R and their complex conjugates, which are
independent variables.

Elements are stored in canonical form: each term is keyed by a strictly
increasing tuple of generator indices.
"""

import logging
import numbers
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from src.calculus import Side
from src.core_algebra import (
    ALGEBRA_TOL, ONE, UNIT_I, UNIT_J, UNIT_K, UNITS, ZERO, Biquaternion, QuaternionError,
    conj_complex, conj_herm, conj_quat, format_biquaternion,
)
from src.spinor import P_L, P_R, decompose_dirac

logger = logging.getLogger(__name__)

GENERATOR_NAMES = ("ξ_L", "χ_L", "ξ_R", "χ_R", "ξ_L*", "χ_L*", "ξ_R*", "χ_R*")

# Opaque value of the long derivative D at a fixed point
DEFAULT_KINETIC_SYMBOL = Biquaternion(0.3 + 0.1j, -0.7 + 0.2j, 0.5 - 0.4j, 0.9 + 0.6j)

# (ξ_L, χ_L, ξ_R, χ_R) = J·(ψ⁰, ψ¹, ψ², ψ³) for ψ_D = ψ⁰ + ψ¹î + ψ²ĵ + ψ³k̂
DIRAC_JACOBIAN = np.array([decompose_dirac(unit) for unit in UNITS], dtype=np.complex128).T

Indices = Tuple[int, ...]


class GrassmannError(QuaternionError):
    """Exception raised for invalid exterior-algebra operations."""


@dataclass(frozen=True)
class GrassmannAlgebra:
    """A fixed set of anticommuting generators, the second half conjugate to the first."""

    names: Tuple[str, ...] = GENERATOR_NAMES

    def __post_init__(self) -> None:
        if len(self.names) % 2:
            raise GrassmannError("Generators come in conjugate pairs; need an even count")

    @property
    def size(self) -> int:
        return len(self.names)

    def partner(self, index: int) -> int:
        half = self.size // 2
        return index + half if index < half else index - half

    def generator(self, index: int, coefficient: Biquaternion = ONE) -> "ExteriorElement":
        if not 0 <= index < self.size:
            raise GrassmannError(f"Generator index {index} outside 0..{self.size - 1}")
        return ExteriorElement(self, {(index,): coefficient})

    def scalar(self, value: Union[Biquaternion, complex, float]) -> "ExteriorElement":
        coefficient = value if isinstance(value, Biquaternion) else Biquaternion(value)
        return ExteriorElement(self, {(): coefficient})

    def zero(self) -> "ExteriorElement":
        return ExteriorElement(self, {})


DIRAC_ALGEBRA = GrassmannAlgebra()


def _sort_sign(indices: Sequence[int]) -> Tuple[int, Indices]:
    """Sign of the permutation sorting indices, and the sorted tuple; 0 on repeats."""
    if len(set(indices)) != len(indices):
        return 0, ()
    inversions = sum(1 for i in range(len(indices)) for j in range(i + 1, len(indices))
                     if indices[i] > indices[j])
    return (-1 if inversions % 2 else 1), tuple(sorted(indices))


@dataclass(frozen=True, eq=False)
class ExteriorElement:
    """Sum of coefficient·g_{i1}g_{i2}... terms with i1 < i2 < ..."""

    algebra: GrassmannAlgebra
    terms: Mapping[Indices, Biquaternion] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: Dict[Indices, Biquaternion] = {}
        for key, coefficient in self.terms.items():
            key = tuple(key)
            if any(not 0 <= i < self.algebra.size for i in key):
                raise GrassmannError(f"Generator index out of range in {key}")
            if any(a >= b for a, b in zip(key, key[1:])):
                raise GrassmannError(f"Term {key} is not in canonical increasing order")
            if not isinstance(coefficient, Biquaternion):
                raise GrassmannError(f"Coefficients must be Biquaternion values, got {type(coefficient).__name__}")
            if coefficient != ZERO:
                clean[key] = coefficient
        object.__setattr__(self, "terms", clean)

    def _check_same(self, other: "ExteriorElement") -> None:
        if other.algebra != self.algebra:
            raise GrassmannError("Cannot combine elements of different Grassmann algebras")

    def _promote(self, other: Any) -> Optional["ExteriorElement"]:
        if isinstance(other, ExteriorElement):
            self._check_same(other)
            return other
        if isinstance(other, (Biquaternion, numbers.Number)):
            return self.algebra.scalar(other)
        return None

    def __add__(self, other: Any) -> "ExteriorElement":
        other = self._promote(other)
        if other is None:
            return NotImplemented
        merged = dict(self.terms)
        for key, coefficient in other.terms.items():
            merged[key] = merged.get(key, ZERO) + coefficient
        return ExteriorElement(self.algebra, merged)

    def __radd__(self, other: Any) -> "ExteriorElement":
        return self.__add__(other)

    def __neg__(self) -> "ExteriorElement":
        return ExteriorElement(self.algebra, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: Any) -> "ExteriorElement":
        other = self._promote(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "ExteriorElement":
        return (-self).__add__(other)

    def __mul__(self, other: Any) -> "ExteriorElement":
        if isinstance(other, ExteriorElement):
            return ext_mul(self, other)
        if isinstance(other, (Biquaternion, numbers.Number)):
            return ExteriorElement(self.algebra, {k: c * other for k, c in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other: Any) -> "ExteriorElement":
        # constants commute with generators, so only the coefficient order matters
        if isinstance(other, (Biquaternion, numbers.Number)):
            return ExteriorElement(self.algebra, {k: other * c for k, c in self.terms.items()})
        return NotImplemented

    @property
    def degree(self) -> int:
        """Highest generator count among the terms; 0 for the zero element."""
        return max((len(k) for k in self.terms), default=0)

    def grade(self, k: int) -> "ExteriorElement":
        return ExteriorElement(self.algebra, {key: c for key, c in self.terms.items() if len(key) == k})

    def grades(self) -> List[int]:
        return sorted({len(k) for k in self.terms})

    def is_homogeneous(self) -> bool:
        return len(self.grades()) <= 1

    def coefficient(self, key: Iterable[int]) -> Biquaternion:
        return self.terms.get(tuple(key), ZERO)

    def max_abs(self) -> float:
        return max((abs(v) for c in self.terms.values() for v in c.components()), default=0.0)

    def is_close(self, other: "ExteriorElement", tol: float = ALGEBRA_TOL) -> bool:
        self._check_same(other)
        return (self - other).max_abs() <= tol

    def cleaned(self, tol: float = ALGEBRA_TOL) -> "ExteriorElement":
        """Drop coefficient components at or below tol."""
        result: Dict[Indices, Biquaternion] = {}
        for key, c in self.terms.items():
            parts = [v if abs(v) > tol else 0j for v in c.components()]
            result[key] = Biquaternion(*parts)
        return ExteriorElement(self.algebra, result)

    def __str__(self) -> str:
        return format_element(self)


def ext_mul(u: ExteriorElement, v: ExteriorElement) -> ExteriorElement:
    """Exterior product; coefficients multiply in order, sign from the merge permutation.

    Raises:
        GrassmannError: If u and v belong to different algebras.
    """
    u._check_same(v)
    result: Dict[Indices, Biquaternion] = {}
    for key_u, c_u in u.terms.items():
        for key_v, c_v in v.terms.items():
            sign, key = _sort_sign(key_u + key_v)
            if sign == 0:
                continue
            result[key] = result.get(key, ZERO) + (c_u * c_v) * sign
    return ExteriorElement(u.algebra, result)


def conj_complex_ferm(u: ExteriorElement) -> ExteriorElement:
    """Complex conjugation: reverse the generator order, map each to its partner, star the coefficient.

    On products of two odd elements this gives (ξχ)* = −ξ*χ*.
    """
    result: Dict[Indices, Biquaternion] = {}
    for key, c in u.terms.items():
        sign, image = _sort_sign([u.algebra.partner(i) for i in reversed(key)])
        result[image] = result.get(image, ZERO) + conj_complex(c) * sign
    return ExteriorElement(u.algebra, result)


def conj_quat_ferm(u: ExteriorElement) -> ExteriorElement:
    """Quaternionic conjugation acts on coefficients only, giving (ξχ)~ = −χ̃ξ̃."""
    return ExteriorElement(u.algebra, {k: conj_quat(c) for k, c in u.terms.items()})


def conj_herm_ferm(u: ExteriorElement) -> ExteriorElement:
    """Hermitean conjugation; (ξχ)† = χ†ξ† without a sign."""
    return conj_quat_ferm(conj_complex_ferm(u))


def scalar_part(u: ExteriorElement) -> ExteriorElement:
    """Keep the quaternionic scalar part of every coefficient."""
    return ExteriorElement(u.algebra, {k: Biquaternion(c.w) for k, c in u.terms.items()})


def left_derivative(u: ExteriorElement, index: int) -> ExteriorElement:
    """Grassmann derivative ∂/∂g acting from the left."""
    result: Dict[Indices, Biquaternion] = {}
    for key, c in u.terms.items():
        if index in key:
            position = key.index(index)
            rest = key[:position] + key[position + 1:]
            result[rest] = c * (-1 if position % 2 else 1)
    return ExteriorElement(u.algebra, result)


def right_derivative(u: ExteriorElement, index: int) -> ExteriorElement:
    """Grassmann derivative ∂/∂g acting from the right."""
    result: Dict[Indices, Biquaternion] = {}
    for key, c in u.terms.items():
        if index in key:
            position = key.index(index)
            rest = key[:position] + key[position + 1:]
            result[rest] = c * (-1 if (len(key) - 1 - position) % 2 else 1)
    return ExteriorElement(u.algebra, result)


@dataclass(frozen=True)
class FermionicSpinorSymbol:
    """ψ_L and ψ_R whose components are single Grassmann generators.

    ψ_L = ξ_L P_L + χ_L ĵP_L and ψ_R = −ξ_R ĵP_R + χ_R P_R.
    """

    psi_left: ExteriorElement
    psi_right: ExteriorElement

    @classmethod
    def standard(cls, algebra: GrassmannAlgebra = DIRAC_ALGEBRA) -> "FermionicSpinorSymbol":
        if algebra.size < 8:
            raise GrassmannError("Dirac spinor symbols need at least eight generators")
        psi_left = algebra.generator(0, P_L) + algebra.generator(1, UNIT_J * P_L)
        psi_right = algebra.generator(2, -(UNIT_J * P_R)) + algebra.generator(3, P_R)
        return cls(psi_left, psi_right)

    @property
    def algebra(self) -> GrassmannAlgebra:
        return self.psi_left.algebra

    @property
    def left_dagger(self) -> ExteriorElement:
        return conj_herm_ferm(self.psi_left)

    @property
    def right_dagger(self) -> ExteriorElement:
        return conj_herm_ferm(self.psi_right)

    @property
    def left_star(self) -> ExteriorElement:
        return conj_complex_ferm(self.psi_left)

    @property
    def right_star(self) -> ExteriorElement:
        return conj_complex_ferm(self.psi_right)

    @property
    def left_tilde(self) -> ExteriorElement:
        return conj_quat_ferm(self.psi_left)

    @property
    def right_tilde(self) -> ExteriorElement:
        return conj_quat_ferm(self.psi_right)


class SpinorVariable(str, Enum):
    PSI_L_DAGGER = "psi_L_dagger"
    PSI_R_DAGGER = "psi_R_dagger"
    PSI_L = "psi_L"
    PSI_R = "psi_R"


# (generator offset, projector, natural side)
_VARIABLES = {
    SpinorVariable.PSI_L_DAGGER: ((0, 1), P_L, Side.LEFT),
    SpinorVariable.PSI_R_DAGGER: ((2, 3), P_R, Side.LEFT),
    SpinorVariable.PSI_L: ((0, 1), P_L, Side.RIGHT),
    SpinorVariable.PSI_R: ((2, 3), P_R, Side.RIGHT),
}


def _left_weight(k: int, projector: Biquaternion) -> Biquaternion:
    # ½ Σ_μ J*_{kμ} e_μ P
    total = ZERO
    for mu, unit in enumerate(UNITS):
        total = total + unit * complex(np.conj(DIRAC_JACOBIAN[k, mu]))
    return total * projector / 2


def _right_weight(k: int, projector: Biquaternion) -> Biquaternion:
    # ½ Σ_μ J_{kμ} P ẽ_μ
    total = ZERO
    for mu, unit in enumerate(UNITS):
        total = total + conj_quat(unit) * complex(DIRAC_JACOBIAN[k, mu])
    return projector * total / 2


def spinor_derivative(expr: ExteriorElement, which: SpinorVariable,
                      side: Optional[Side] = None) -> ExteriorElement:
    """Differentiate with respect to a Weyl spinor.

    ∂_{ψ_L†} = ½∂*P_L and ∂_{ψ_R†} = ½∂*P_R sit to the left of the
    expression; ∂_{ψ_L} = ½P_L∂̃ and ∂_{ψ_R} = ½P_R∂̃ sit to its right. The
    quaternionic partials are assembled from Grassmann component derivatives
    through the linear map from ψ_D to (ξ_L, χ_L, ξ_R, χ_R).

    Args:
        expr: Polynomial in the spinor symbols.
        which: Variable to differentiate by.
        side: Expected side; defaults to the natural one for the variable.

    Returns:
        ExteriorElement: The derivative.

    Raises:
        GrassmannError: If expr is not an ExteriorElement or side does not
            match the variable.
    """
    if not isinstance(expr, ExteriorElement):
        raise GrassmannError(f"Spinor derivatives need a Grassmann polynomial, got {type(expr).__name__}")
    if expr.algebra.size < 8:
        raise GrassmannError("Spinor derivatives need the eight-generator Dirac algebra")
    which = SpinorVariable(which)
    components, projector, natural = _VARIABLES[which]
    if side is not None and Side(side) is not natural:
        raise GrassmannError(f"∂ by {which.value} acts from the {natural.value}, not the {Side(side).value}")
    result = expr.algebra.zero()
    for k in components:
        if natural is Side.LEFT:
            result = result + _left_weight(k, projector) * left_derivative(expr, expr.algebra.partner(k))
        else:
            result = result + right_derivative(expr, k) * _right_weight(k, projector)
    return result


def mass_term(symbols: FermionicSpinorSymbol, alternative: bool = False) -> ExteriorElement:
    """ψ_L†ψ_Rĵ, or iî·ψ_L†ψ_R in the alternative form."""
    core = symbols.left_dagger * symbols.psi_right
    return 1j * UNIT_I * core if alternative else core * UNIT_J


def with_conjugates(x: ExteriorElement) -> ExteriorElement:
    """x + q.c. + c.c."""
    real = x + conj_quat_ferm(x)
    return real + conj_complex_ferm(real)


def mass_component_expansion(algebra: GrassmannAlgebra = DIRAC_ALGEBRA) -> ExteriorElement:
    """ξ_L*ξ_R + χ_L*χ_R + ξ_R*ξ_L + χ_R*χ_L."""
    g = algebra.generator
    return g(4) * g(2) + g(5) * g(3) + g(6) * g(0) + g(7) * g(1)


def dirac_lagrangian(mass: float, kinetic: Biquaternion = DEFAULT_KINETIC_SYMBOL,
                     symbols: Optional[FermionicSpinorSymbol] = None,
                     cyclic_right_mass: bool = False) -> ExteriorElement:
    """Eight-term expanded Dirac Lagrangian with D replaced by the constant K.

    The kinetic terms are ψ_L†(iK)ψ_L + ψ_R†(iK̃)ψ_R + ψ̃_L(iK*)ψ_L* + ψ̃_R(iK†)ψ_R*.
    The mass terms are −m(ψ_L†ψ_Rĵ + ĵψ̃_Rψ_L*) + m(ψ̃_Lψ_R*ĵ + ĵψ_R†ψ_L). With
    cyclic_right_mass the second bracket is rotated to m(ψ_R†ψ_Lĵ + ĵψ̃_Lψ_R*),
    which has the same real part and exposes ψ_R† on the left.
    """
    s = symbols or FermionicSpinorSymbol.standard()
    kinetic_terms = (
        s.left_dagger * (1j * kinetic) * s.psi_left
        + s.right_dagger * (1j * conj_quat(kinetic)) * s.psi_right
        + s.left_tilde * (1j * conj_complex(kinetic)) * s.left_star
        + s.right_tilde * (1j * conj_herm(kinetic)) * s.right_star
    )
    left_mass = s.left_dagger * s.psi_right * UNIT_J + UNIT_J * s.right_tilde * s.left_star
    if cyclic_right_mass:
        right_mass = s.right_dagger * s.psi_left * UNIT_J + UNIT_J * s.left_tilde * s.right_star
    else:
        right_mass = s.left_tilde * s.right_star * UNIT_J + UNIT_J * s.right_dagger * s.psi_left
    return kinetic_terms - mass * left_mass + mass * right_mass


@dataclass(frozen=True)
class DiracVariation:
    """Equations of motion obtained by varying the Dirac Lagrangian."""

    left: ExteriorElement
    right: ExteriorElement
    mass: float
    kinetic: Biquaternion
    symbols: FermionicSpinorSymbol


def vary_dirac_lagrangian(mass: float, kinetic: Biquaternion = DEFAULT_KINETIC_SYMBOL,
                          symbols: Optional[FermionicSpinorSymbol] = None) -> DiracVariation:
    """Apply ∂_{ψ_L†} and ∂_{ψ_R†} to the Lagrangian.

    The right-handed equation uses the cyclically rotated mass bracket.

    Returns:
        DiracVariation: left ≈ iKψ_L − mψ_Rĵ and right ≈ iK̃ψ_R + mψ_Lĵ.
    """
    s = symbols or FermionicSpinorSymbol.standard()
    left = spinor_derivative(dirac_lagrangian(mass, kinetic, s), SpinorVariable.PSI_L_DAGGER)
    right = spinor_derivative(dirac_lagrangian(mass, kinetic, s, cyclic_right_mass=True),
                              SpinorVariable.PSI_R_DAGGER)
    logger.debug("Varied Dirac Lagrangian with m=%s: %d left terms, %d right terms",
                 mass, len(left.terms), len(right.terms))
    return DiracVariation(left, right, mass, kinetic, s)


def expected_dirac_equations(mass: float, kinetic: Biquaternion = DEFAULT_KINETIC_SYMBOL,
                             symbols: Optional[FermionicSpinorSymbol] = None
                             ) -> Tuple[ExteriorElement, ExteriorElement]:
    """Hand-written iKψ_L − mψ_Rĵ and iK̃ψ_R + mψ_Lĵ."""
    s = symbols or FermionicSpinorSymbol.standard()
    left = (1j * kinetic) * s.psi_left - mass * (s.psi_right * UNIT_J)
    right = (1j * conj_quat(kinetic)) * s.psi_right + mass * (s.psi_left * UNIT_J)
    return left, right


def _flatten(elements: Sequence[ExteriorElement]) -> np.ndarray:
    keys = sorted({k for e in elements for k in e.terms}, key=lambda k: (len(k), k))
    columns = []
    for e in elements:
        columns.append(np.concatenate([e.coefficient(k).as_array() for k in keys]) if keys else np.zeros(0))
    return np.column_stack(columns)


def _project(target: ExteriorElement, basis: Sequence[ExteriorElement], tol: float) -> np.ndarray:
    matrix = _flatten([target, *basis])
    solution, *_ = np.linalg.lstsq(matrix[:, 1:], matrix[:, 0], rcond=None)
    leftover = matrix[:, 0] - matrix[:, 1:] @ solution
    if leftover.size and np.max(np.abs(leftover)) > tol:
        raise GrassmannError(f"Equation has terms outside the expected span (max {np.max(np.abs(leftover)):.3g})")
    return solution


def _mass_label(coefficient: complex, mass: float, symbol: str, tol: float) -> str:
    if abs(coefficient) <= tol:
        return ""
    if mass and abs(coefficient + mass) <= tol:
        return f" − m{symbol}"
    if mass and abs(coefficient - mass) <= tol:
        return f" + m{symbol}"
    return f" + ({coefficient:.15g})·{symbol}"


def describe_equations(variation: DiracVariation, tol: float = 1e-9) -> List[str]:
    """Render the varied equations in terms of D, ψ_L, ψ_R and m.

    Raises:
        GrassmannError: If an equation is not a combination of its kinetic
            and mass terms, or the kinetic coefficient is not 1.
    """
    s, k = variation.symbols, variation.kinetic
    specs = (
        ("left", "iDψ_L", variation.left, (1j * k) * s.psi_left, "ψ_Rĵ", s.psi_right * UNIT_J),
        ("right", "iD̃ψ_R", variation.right, (1j * conj_quat(k)) * s.psi_right, "ψ_Lĵ", s.psi_left * UNIT_J),
    )
    lines = []
    for label, kinetic_text, result, kinetic_term, mass_symbol, mass_basis in specs:
        a, b = _project(result, (kinetic_term, mass_basis), tol)
        if abs(a - 1) > tol:
            raise GrassmannError(f"{label} equation has kinetic coefficient {a:.15g}, expected 1")
        lines.append(f"{label}: {kinetic_text}{_mass_label(complex(b), variation.mass, mass_symbol, tol)} = 0")
    return lines


@dataclass(frozen=True)
class CyclicReport:
    lhs: ExteriorElement
    rhs: ExteriorElement
    holds: bool


def _as_element(value: Union[ExteriorElement, Biquaternion], algebra: GrassmannAlgebra) -> ExteriorElement:
    if isinstance(value, ExteriorElement):
        return value
    if isinstance(value, Biquaternion):
        return algebra.scalar(value)
    raise GrassmannError(f"Expected an ExteriorElement or Biquaternion, got {type(value).__name__}")


def cyclic_real_part(a: Union[ExteriorElement, Biquaternion], b: Union[ExteriorElement, Biquaternion],
                     c: Union[ExteriorElement, Biquaternion], tol: float = ALGEBRA_TOL) -> CyclicReport:
    """Compare the scalar parts of abc and bca.

    Moving a grade-p piece of a past a grade-q piece of bc costs (−1)^{pq};
    with ordinary biquaternions this is the plain cyclic identity.
    """
    algebra = next((x.algebra for x in (a, b, c) if isinstance(x, ExteriorElement)), DIRAC_ALGEBRA)
    a, b, c = (_as_element(x, algebra) for x in (a, b, c))
    lhs = scalar_part(a * b * c)
    bc = b * c
    rhs = algebra.zero()
    for p in a.grades():
        for q in bc.grades():
            rhs = rhs + scalar_part(bc.grade(q) * a.grade(p)) * (-1 if (p * q) % 2 else 1)
    return CyclicReport(lhs, rhs, lhs.is_close(rhs, tol))


def dirac_current_symbolic(symbols: Optional[FermionicSpinorSymbol] = None) -> ExteriorElement:
    """j = −2(ψ_Lψ_L† − ψ_R*ψ̃_R) for anticommuting components."""
    s = symbols or FermionicSpinorSymbol.standard()
    return (s.psi_left * s.left_dagger - s.right_star * s.right_tilde) * -2


def current_component_expansion(algebra: GrassmannAlgebra = DIRAC_ALGEBRA) -> ExteriorElement:
    """The current written out in ξ, χ and their conjugates."""
    g = algebra.generator
    xl, cl, xr, cr = g(0), g(1), g(2), g(3)
    xl_s, cl_s, xr_s, cr_s = g(4), g(5), g(6), g(7)
    i_i, i_j, i_k = 1j * UNIT_I, 1j * UNIT_J, 1j * UNIT_K
    return (
        xl_s * xl + cl_s * cl + xr_s * xr + cr_s * cr
        + i_i * ((xl_s * cl + cl_s * xl) - (xr_s * cr + cr_s * xr))
        + i_j * ((cl_s * xl - xl_s * cl) * 1j - (cr_s * xr - xr_s * cr) * 1j)
        + i_k * ((xl_s * xl - cl_s * cl) - (xr_s * xr - cr_s * cr))
    )


def format_element(u: ExteriorElement) -> str:
    """Deterministic text form: terms by (degree, indices), coefficient first."""
    if not u.terms:
        return "0"
    parts = []
    for key in sorted(u.terms, key=lambda k: (len(k), k)):
        gens = " ".join(u.algebra.names[i] for i in key)
        coefficient = f"({format_biquaternion(u.terms[key])})"
        parts.append(f"{coefficient} {gens}" if gens else coefficient)
    return " + ".join(parts)
