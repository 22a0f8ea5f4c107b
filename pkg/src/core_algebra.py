"""
Complexified quaternion (biquaternion) arithmetic.

A biquaternion is w + x î + y ĵ + z k̂ with complex coefficients. The complex
unit i commutes with î, ĵ, k̂. Values are immutable; every operation returns a
new value.
"""

import logging
import math
import numbers
import os
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Mapping, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

# Default absolute tolerance for algebraic identities
ALGEBRA_TOL = float(os.environ.get("QWF_ALGEBRA_TOL", "1e-12"))

SpacetimePoint = Tuple[float, float, float, float]

_COMPONENT_NAMES = ("w", "x", "y", "z")


class QuaternionError(ValueError):
    """Base exception for all errors raised by this package."""


class AlgebraError(QuaternionError):
    """Exception raised for input that violates an algebraic precondition."""


Scalar = Union[complex, float, int]


@dataclass(frozen=True)
class Biquaternion:
    """Element of C⊗H with complex coefficients of 1, î, ĵ, k̂."""

    w: complex = 0j
    x: complex = 0j
    y: complex = 0j
    z: complex = 0j

    def __post_init__(self) -> None:
        for name in _COMPONENT_NAMES:
            object.__setattr__(self, name, complex(getattr(self, name)))

    # Arithmetic

    def __add__(self, other: Any) -> "Biquaternion":
        if isinstance(other, Biquaternion):
            return Biquaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)
        if isinstance(other, numbers.Number):
            return Biquaternion(self.w + other, self.x, self.y, self.z)
        return NotImplemented

    def __radd__(self, other: Any) -> "Biquaternion":
        return self.__add__(other)

    def __sub__(self, other: Any) -> "Biquaternion":
        if isinstance(other, Biquaternion):
            return Biquaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)
        if isinstance(other, numbers.Number):
            return Biquaternion(self.w - other, self.x, self.y, self.z)
        return NotImplemented

    def __rsub__(self, other: Any) -> "Biquaternion":
        if isinstance(other, numbers.Number):
            return Biquaternion(other - self.w, -self.x, -self.y, -self.z)
        return NotImplemented

    def __neg__(self) -> "Biquaternion":
        return Biquaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: Any) -> "Biquaternion":
        if isinstance(other, Biquaternion):
            return mul(self, other)
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: Any) -> "Biquaternion":
        # complex scalars commute with the quaternion units
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other: Any) -> "Biquaternion":
        if isinstance(other, numbers.Number):
            return self.scale(1.0 / other)
        return NotImplemented

    def scale(self, factor: Scalar) -> "Biquaternion":
        return Biquaternion(self.w * factor, self.x * factor, self.y * factor, self.z * factor)

    # Parts and conjugations

    def scalar(self) -> complex:
        return self.w

    def vector(self) -> "Biquaternion":
        return Biquaternion(0j, self.x, self.y, self.z)

    def conj_quat(self) -> "Biquaternion":
        return conj_quat(self)

    def conj_complex(self) -> "Biquaternion":
        return conj_complex(self)

    def conj_herm(self) -> "Biquaternion":
        return conj_herm(self)

    def qnorm(self) -> complex:
        return qnorm(self)

    def euclidean_magnitude(self) -> float:
        return euclidean_magnitude(self)

    # Conversions

    def components(self) -> Tuple[complex, complex, complex, complex]:
        return (self.w, self.x, self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array(self.components(), dtype=np.complex128)

    @classmethod
    def from_array(cls, values: Any) -> "Biquaternion":
        arr = np.asarray(values, dtype=np.complex128).reshape(-1)
        if arr.shape != (4,):
            raise AlgebraError(f"Expected 4 components, got shape {arr.shape}")
        return cls(arr[0], arr[1], arr[2], arr[3])

    def to_json(self) -> Dict[str, List[float]]:
        """Serialize as {"w":[re,im],"x":[re,im],"y":[re,im],"z":[re,im]}."""
        return {name: [value.real, value.imag] for name, value in zip(_COMPONENT_NAMES, self.components())}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Biquaternion":
        """Parse the JSON object form; missing components default to zero.

        Args:
            data: Mapping with any of the keys w, x, y, z. Each value is a
                [re, im] pair or a real number.

        Returns:
            Biquaternion: The parsed value.

        Raises:
            AlgebraError: On unknown keys or malformed component values.
        """
        if not isinstance(data, Mapping):
            raise AlgebraError(f"Biquaternion literal must be an object, got {type(data).__name__}")
        unknown = set(data) - set(_COMPONENT_NAMES)
        if unknown:
            raise AlgebraError(f"Unknown biquaternion components: {sorted(unknown)}")
        return cls(*(parse_complex(data.get(name, 0.0)) for name in _COMPONENT_NAMES))

    # Comparisons

    def is_close(self, other: "Biquaternion", tol: float = ALGEBRA_TOL) -> bool:
        return max_abs_difference(self, other) <= tol

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.as_array())))

    def __repr__(self) -> str:
        return f"Biquaternion({format_biquaternion(self)})"


ONE = Biquaternion(1)
UNIT_I = Biquaternion(0, 1, 0, 0)
UNIT_J = Biquaternion(0, 0, 1, 0)
UNIT_K = Biquaternion(0, 0, 0, 1)
ZERO = Biquaternion()

UNITS: Tuple[Biquaternion, Biquaternion, Biquaternion, Biquaternion] = (ONE, UNIT_I, UNIT_J, UNIT_K)


def parse_complex(value: Any) -> complex:
    """Parse a [re, im] pair or a real number into a complex scalar."""
    if isinstance(value, numbers.Number) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        re, im = value
        if all(isinstance(v, numbers.Real) and not isinstance(v, bool) for v in (re, im)):
            return complex(float(re), float(im))
    raise AlgebraError(f"Malformed complex literal: {value!r}")


def mul(a: Biquaternion, b: Biquaternion) -> Biquaternion:
    """Hamilton product with complex coefficients."""
    a0, a1, a2, a3 = a.w, a.x, a.y, a.z
    b0, b1, b2, b3 = b.w, b.x, b.y, b.z
    return Biquaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def product(*factors: Union[Biquaternion, Scalar]) -> Biquaternion:
    """Ordered product of any number of factors; the empty product is 1."""
    result = ONE
    for factor in factors:
        result = result * factor
    return result


def conj_quat(a: Biquaternion) -> Biquaternion:
    """Quaternionic conjugation (tilde): negates the î, ĵ, k̂ parts."""
    return Biquaternion(a.w, -a.x, -a.y, -a.z)


def conj_complex(a: Biquaternion) -> Biquaternion:
    """Complex conjugation (star) of all four coefficients."""
    return Biquaternion(a.w.conjugate(), a.x.conjugate(), a.y.conjugate(), a.z.conjugate())


def conj_herm(a: Biquaternion) -> Biquaternion:
    """Hermitean conjugation (dagger), star composed with tilde."""
    return Biquaternion(a.w.conjugate(), -a.x.conjugate(), -a.y.conjugate(), -a.z.conjugate())


def qnorm(a: Biquaternion) -> complex:
    """Complex multiplicative quadratic form w² + x² + y² + z².

    Not positive-definite: it vanishes on isotropic elements such as the
    chirality projectors.
    """
    return a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z


def euclidean_magnitude(a: Biquaternion) -> float:
    """Euclidean length over the eight real components, for convergence checks only."""
    return math.sqrt(sum(abs(c) ** 2 for c in a.components()))


def max_abs_difference(a: Biquaternion, b: Biquaternion) -> float:
    return max(abs(p - q) for p, q in zip(a.components(), b.components()))


def is_pure_vector(a: Biquaternion, tol: float = ALGEBRA_TOL) -> bool:
    return abs(a.w) <= tol


class Variance(str, Enum):
    CONTRAVARIANT = "contravariant"
    COVARIANT = "covariant"

    def flipped(self) -> "Variance":
        return Variance.COVARIANT if self is Variance.CONTRAVARIANT else Variance.CONTRAVARIANT


def _relative_tol(a: Biquaternion, tol: float) -> float:
    return tol * max(1.0, euclidean_magnitude(a))


@dataclass(frozen=True)
class FourVector:
    """Hermitean self-conjugate biquaternion v⁰ + i v⃗ with a variance tag."""

    base: Biquaternion
    variance: Variance = Variance.CONTRAVARIANT

    def __post_init__(self) -> None:
        if not isinstance(self.base, Biquaternion):
            raise AlgebraError("FourVector base must be a Biquaternion")
        object.__setattr__(self, "variance", Variance(self.variance))
        if max_abs_difference(conj_herm(self.base), self.base) > _relative_tol(self.base, ALGEBRA_TOL):
            raise AlgebraError(f"Not a four-vector (base† ≠ base): {format_biquaternion(self.base)}")

    @classmethod
    def from_components(cls, components: Tuple[float, float, float, float],
                        variance: Variance = Variance.CONTRAVARIANT) -> "FourVector":
        """Build v0 + i(v1 î + v2 ĵ + v3 k̂) from four real components."""
        v0, v1, v2, v3 = (float(c) for c in components)
        return cls(Biquaternion(v0, 1j * v1, 1j * v2, 1j * v3), variance)

    @classmethod
    def project(cls, value: Biquaternion, variance: Variance = Variance.CONTRAVARIANT) -> "FourVector":
        """Drop rounding noise by keeping only the hermitean components of value."""
        return cls(Biquaternion(value.w.real, 1j * value.x.imag, 1j * value.y.imag, 1j * value.z.imag), variance)

    def components(self) -> Tuple[float, float, float, float]:
        b = self.base
        return (b.w.real, b.x.imag, b.y.imag, b.z.imag)

    def conj_complex(self) -> "FourVector":
        """Complex conjugation, which turns a contravariant vector into a covariant one."""
        return FourVector(conj_complex(self.base), self.variance.flipped())

    def lowered(self) -> "FourVector":
        if self.variance is not Variance.CONTRAVARIANT:
            raise AlgebraError("Only a contravariant vector can be lowered")
        return self.conj_complex()

    def raised(self) -> "FourVector":
        if self.variance is not Variance.COVARIANT:
            raise AlgebraError("Only a covariant vector can be raised")
        return self.conj_complex()

    def is_close(self, other: "FourVector", tol: float = ALGEBRA_TOL) -> bool:
        return self.variance is other.variance and self.base.is_close(other.base, tol)


@dataclass(frozen=True)
class FieldStrengthValue:
    """Scalar-free biquaternion B⃗ + iE⃗."""

    base: Biquaternion

    def __post_init__(self) -> None:
        if abs(self.base.w) > _relative_tol(self.base, ALGEBRA_TOL):
            raise AlgebraError(f"Field strength must have zero scalar part, got {self.base.w}")

    @classmethod
    def from_fields(cls, magnetic: Any, electric: Any) -> "FieldStrengthValue":
        b = np.asarray(magnetic, dtype=float).reshape(3)
        e = np.asarray(electric, dtype=float).reshape(3)
        return cls(Biquaternion(0, b[0] + 1j * e[0], b[1] + 1j * e[1], b[2] + 1j * e[2]))

    @property
    def magnetic(self) -> np.ndarray:
        return np.array([self.base.x.real, self.base.y.real, self.base.z.real])

    @property
    def electric(self) -> np.ndarray:
        return np.array([self.base.x.imag, self.base.y.imag, self.base.z.imag])


def split_vector_parts(a: Biquaternion) -> Tuple[FourVector, Biquaternion]:
    """Split a biquaternion into its true four-vector and pseudo-vector parts.

    The true part is Re w + i·Im(x, y, z); the pseudo part is i·Im w + Re(x, y, z).
    Their sum reproduces a exactly.

    Args:
        a: Any biquaternion.

    Returns:
        Tuple[FourVector, Biquaternion]: (true contravariant vector, pseudo-vector)
    """
    true_part = Biquaternion(a.w.real, 1j * a.x.imag, 1j * a.y.imag, 1j * a.z.imag)
    pseudo_part = Biquaternion(1j * a.w.imag, a.x.real, a.y.real, a.z.real)
    return FourVector(true_part), pseudo_part


def vec_products(u: Biquaternion, v: Biquaternion, tol: float = ALGEBRA_TOL) -> Tuple[complex, Biquaternion]:
    """Euclidean dot and cross product of two 3-vector quaternions.

    The quaternion product satisfies u·v = −dot + cross.

    Raises:
        AlgebraError: If either input has a nonzero scalar part.
    """
    for name, value in (("u", u), ("v", v)):
        if not is_pure_vector(value, tol):
            raise AlgebraError(f"{name} must have zero scalar part, got {value.w}")
    dot = u.x * v.x + u.y * v.y + u.z * v.z
    cross = Biquaternion(
        0j,
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        u.x * v.y - u.y * v.x,
    )
    return dot, cross


def minkowski_norm(v: Union[FourVector, Biquaternion]) -> complex:
    """Scalar part of v·v*, i.e. (v⁰)² − |v⃗|² for real components."""
    base = v.base if isinstance(v, FourVector) else v
    return mul(base, conj_complex(base)).w


def vector_from_real(components: Any) -> Biquaternion:
    """Pure vector quaternion x î + y ĵ + z k̂ from three real numbers."""
    arr = np.asarray(components, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise AlgebraError(f"Expected a 3-vector, got shape {arr.shape}")
    return Biquaternion(0, arr[0], arr[1], arr[2])


def _format_complex(value: complex) -> str:
    if value.imag == 0:
        return f"{value.real:.15g}"
    if value.real == 0:
        return f"{value.imag:.15g}i"
    return f"({value.real:.15g}{value.imag:+.15g}i)"


def format_biquaternion(a: Biquaternion) -> str:
    """Deterministic text form, skipping zero components; zero renders as "0"."""
    labels = ("", "î", "ĵ", "k̂")
    parts = []
    for label, value in zip(labels, a.components()):
        if value == 0:
            continue
        text = _format_complex(value)
        parts.append(f"{text}{label}" if not label else f"{text}·{label}")
    return " + ".join(parts) if parts else "0"
