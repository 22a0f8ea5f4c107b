"""
Quaternionic exponentials and the Lorentz action on four-vectors, field
strengths and scalars. Spinors are handled by src.spinor.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Any, Mapping, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.transform import Rotation

from src.core_algebra import (
    ALGEBRA_TOL, ONE, Biquaternion, FieldStrengthValue, FourVector,
    QuaternionError, Variance, conj_complex, conj_herm, conj_quat, euclidean_magnitude,
    is_pure_vector, qnorm, vector_from_real,
)

logger = logging.getLogger(__name__)

# Below this |θ| the closed form switches to its Taylor expansion
SERIES_THRESHOLD = 1e-6

MINKOWSKI_METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


class LorentzError(QuaternionError):
    """Exception raised for invalid Lorentz generators or transformation inputs."""


Vector3 = Tuple[float, float, float]


def _as_vector3(values: Any, name: str) -> Vector3:
    arr = np.asarray(values, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise LorentzError(f"{name} must be a real 3-vector, got {values!r}")
    return (float(arr[0]), float(arr[1]), float(arr[2]))


@dataclass(frozen=True)
class LorentzGenerator:
    """Generator of a Lorentz transformation.

    kappa is the rotation vector (angle times unit axis, radians) and lambda_
    the rapidity vector. The stored biquaternion is Λ = (κ⃗ + iλ⃗)/2, the
    half-angle form in which e^Λ v e^{Λ†} rotates by |κ⃗| and boosts by |λ⃗|.
    """

    kappa: Vector3 = (0.0, 0.0, 0.0)
    lambda_: Vector3 = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "kappa", _as_vector3(self.kappa, "kappa"))
        object.__setattr__(self, "lambda_", _as_vector3(self.lambda_, "lambda"))

    @property
    def biquaternion(self) -> Biquaternion:
        k, l = self.kappa, self.lambda_
        return Biquaternion(0, (k[0] + 1j * l[0]) / 2, (k[1] + 1j * l[1]) / 2, (k[2] + 1j * l[2]) / 2)

    @classmethod
    def from_biquaternion(cls, value: Biquaternion, tol: float = ALGEBRA_TOL) -> "LorentzGenerator":
        if not is_pure_vector(value, tol):
            raise LorentzError(f"Lorentz generators have zero scalar part, got {value.w}")
        comps = (value.x, value.y, value.z)
        return cls(tuple(2 * c.real for c in comps), tuple(2 * c.imag for c in comps))

    @classmethod
    def rotation(cls, axis: Any, angle: float) -> "LorentzGenerator":
        unit = _unit_axis(axis, normalize=True)
        return cls(tuple(angle * a for a in unit), (0.0, 0.0, 0.0))

    @classmethod
    def boost(cls, direction: Any, rapidity: float) -> "LorentzGenerator":
        unit = _unit_axis(direction, normalize=True)
        return cls((0.0, 0.0, 0.0), tuple(rapidity * a for a in unit))

    def to_json(self) -> dict:
        return {"kappa": list(self.kappa), "lambda": list(self.lambda_)}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "LorentzGenerator":
        if not isinstance(data, Mapping):
            raise LorentzError("Generator literal must be an object with kappa and lambda")
        unknown = set(data) - {"kappa", "lambda"}
        if unknown:
            raise LorentzError(f"Unknown generator keys: {sorted(unknown)}")
        return cls(data.get("kappa", (0.0, 0.0, 0.0)), data.get("lambda", (0.0, 0.0, 0.0)))


GeneratorLike = Union[LorentzGenerator, Biquaternion]


def _unit_axis(axis: Any, normalize: bool = False, tol: float = ALGEBRA_TOL) -> Vector3:
    if isinstance(axis, Biquaternion):
        if not is_pure_vector(axis, tol) or any(abs(c.imag) > tol for c in (axis.x, axis.y, axis.z)):
            raise LorentzError("Rotation axis must be a real pure vector")
        axis = (axis.x.real, axis.y.real, axis.z.real)
    vec = np.asarray(_as_vector3(axis, "axis"))
    length = float(np.linalg.norm(vec))
    if normalize:
        if length == 0:
            raise LorentzError("Axis must be nonzero")
        vec = vec / length
    elif abs(length - 1.0) > 1e-12:
        raise LorentzError(f"Axis must be a unit vector, got length {length}")
    return (float(vec[0]), float(vec[1]), float(vec[2]))


def generator_value(generator: GeneratorLike) -> Biquaternion:
    if isinstance(generator, LorentzGenerator):
        return generator.biquaternion
    if isinstance(generator, Biquaternion):
        if not is_pure_vector(generator):
            raise LorentzError(f"Lorentz generators have zero scalar part, got {generator.w}")
        return generator
    raise LorentzError(f"Unsupported generator type {type(generator).__name__}")


def exp_biquat(g: Biquaternion) -> Biquaternion:
    """Exponential of a general biquaternion.

    With s the scalar part and u⃗ the vector part, u⃗² = −qnorm(u⃗), so
    exp(s + u⃗) = eˢ(cos θ + u⃗ sin θ/θ) with θ² = qnorm(u⃗). Both cos θ and
    sin θ/θ are even in θ, so either square root gives the same result.
    Below SERIES_THRESHOLD both are summed through θ⁶, which is exact to
    double precision there.

    Args:
        g: Any biquaternion.

    Returns:
        Biquaternion: e^g
    """
    u = g.vector()
    theta_sq = qnorm(u)
    if abs(theta_sq) < SERIES_THRESHOLD ** 2:
        t2 = theta_sq
        cos_theta = 1 - t2 / 2 + t2 * t2 / 24 - t2 ** 3 / 720
        sinc_theta = 1 - t2 / 6 + t2 * t2 / 120 - t2 ** 3 / 5040
    else:
        theta = cmath.sqrt(theta_sq)
        cos_theta = cmath.cos(theta)
        sinc_theta = cmath.sin(theta) / theta
    return cmath.exp(g.w) * (u * sinc_theta + cos_theta)


def exp_series(g: Biquaternion, terms: int = 40) -> Biquaternion:
    """Truncated power series Σ gⁿ/n!, the oracle for exp_biquat."""
    total = ONE
    term = ONE
    for n in range(1, terms):
        term = term * g / n
        total = total + term
    return total


def transform_contravariant(v: FourVector, generator: GeneratorLike) -> FourVector:
    """Apply v → e^Λ v e^{Λ†} to a contravariant four-vector."""
    if v.variance is not Variance.CONTRAVARIANT:
        raise LorentzError("transform_contravariant expects a contravariant vector")
    left = exp_biquat(generator_value(generator))
    return FourVector(left * v.base * conj_herm(left), Variance.CONTRAVARIANT)


def transform_covariant(v: FourVector, generator: GeneratorLike) -> FourVector:
    """Apply v → e^{Λ*} v e^{Λ̃} to a covariant four-vector."""
    if v.variance is not Variance.COVARIANT:
        raise LorentzError("transform_covariant expects a covariant vector")
    left = exp_biquat(generator_value(generator))
    return FourVector(conj_complex(left) * v.base * conj_quat(left), Variance.COVARIANT)


def rotate_vector(u: Biquaternion, axis: Any, angle: float) -> Biquaternion:
    """Rotate a 3-vector quaternion by e^{αâ/2} u e^{−αâ/2}.

    Raises:
        LorentzError: If u has a scalar part or the axis is not a unit vector.
    """
    if not is_pure_vector(u):
        raise LorentzError(f"Only pure vectors can be rotated, got scalar part {u.w}")
    unit = vector_from_real(_unit_axis(axis))
    half_turn = exp_biquat(unit * (angle / 2))
    return half_turn * u * conj_quat(half_turn)


def transform_field_strength(field: FieldStrengthValue, generator: GeneratorLike) -> FieldStrengthValue:
    """Apply F → e^Λ F e^{Λ̃}; for pure rotations B⃗ and E⃗ rotate separately."""
    left = exp_biquat(generator_value(generator))
    return FieldStrengthValue(left * field.base * conj_quat(left))


def transform_scalar(phi: complex, generator: GeneratorLike) -> complex:
    left = exp_biquat(generator_value(generator))
    image = left * phi * conj_quat(left)
    if euclidean_magnitude(image.vector()) > ALGEBRA_TOL * max(1.0, abs(phi)):
        logger.warning("Scalar picked up a vector part under transformation: %s", image.vector())
    return image.w


def boost_matrix(direction: Any, rapidity: float) -> np.ndarray:
    """4×4 matrix of an active boost with the given rapidity along direction."""
    n = np.asarray(_unit_axis(direction, normalize=True))
    ch, sh = math.cosh(rapidity), math.sinh(rapidity)
    matrix = np.eye(4)
    matrix[0, 0] = ch
    matrix[0, 1:] = sh * n
    matrix[1:, 0] = sh * n
    matrix[1:, 1:] += (ch - 1.0) * np.outer(n, n)
    return matrix


def rotation_matrix(axis: Any, angle: float) -> np.ndarray:
    """4×4 matrix of an active rotation, built from scipy's rotation vectors."""
    n = np.asarray(_unit_axis(axis, normalize=True))
    matrix = np.eye(4)
    matrix[1:, 1:] = Rotation.from_rotvec(angle * n).as_matrix()
    return matrix


def field_tensor(field: FieldStrengthValue) -> np.ndarray:
    """Contravariant F^{μν} with F^{0i} = −Eⁱ and F^{ij} = −ε^{ijk}Bᵏ."""
    e, b = field.electric, field.magnetic
    return np.array([
        [0.0, -e[0], -e[1], -e[2]],
        [e[0], 0.0, -b[2], b[1]],
        [e[1], b[2], 0.0, -b[0]],
        [e[2], -b[1], b[0], 0.0],
    ])


def field_from_tensor(tensor: np.ndarray) -> FieldStrengthValue:
    electric = -tensor[0, 1:]
    magnetic = np.array([-tensor[2, 3], tensor[1, 3], -tensor[1, 2]])
    return FieldStrengthValue.from_fields(magnetic, electric)


def generator_sequence(values: Sequence[GeneratorLike]) -> Biquaternion:
    """Product e^{Λ₁} e^{Λ₂} ... of exponentials, applied right to left."""
    result = ONE
    for generator in values:
        result = result * exp_biquat(generator_value(generator))
    return result
