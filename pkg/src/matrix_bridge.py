"""
2×2 complex-matrix representation of C⊗H and the Weyl-representation Dirac
operator, used as an independent oracle.

Correspondence (so that iî → σ₁, iĵ → σ₂, ik̂ → σ₃):

    1 → I,   î → −iσ₁,   ĵ → −iσ₂,   k̂ → −iσ₃

A left-handed spinor occupies the first matrix column, (ξ_L, χ_L)ᵀ; a
right-handed spinor occupies the second column, (ξ_R, χ_R)ᵀ. With these
columns both chirality phases are +1.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Protocol, Tuple, Union

import numpy as np
from scipy.linalg import expm

from src.core_algebra import Biquaternion, QuaternionError, SpacetimePoint, conj_complex
from src.lorentz import GeneratorLike, generator_value
from src.spinor import Chirality, extract_components

logger = logging.getLogger(__name__)

IDENTITY2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

ZERO2 = np.zeros((2, 2), dtype=np.complex128)

# Chiral (Weyl) basis: γ⁰ = [[0, I], [I, 0]], γᵏ = [[0, −σᵏ], [σᵏ, 0]]
GAMMA = (
    np.block([[ZERO2, IDENTITY2], [IDENTITY2, ZERO2]]),
    *(np.block([[ZERO2, -sigma], [sigma, ZERO2]]) for sigma in PAULI),
)

CHIRALITY_PHASES: Dict[Chirality, complex] = {Chirality.LEFT: 1.0 + 0j, Chirality.RIGHT: 1.0 + 0j}

_IDEAL_COLUMN = {Chirality.LEFT: 0, Chirality.RIGHT: 1}


class MatrixBridgeError(QuaternionError):
    """Exception raised for malformed matrix input."""


@dataclass(frozen=True, eq=False)
class MatrixRep:
    """A 2×2 complex matrix image of a biquaternion."""

    m: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.m, dtype=np.complex128)
        if arr.shape != (2, 2):
            raise MatrixBridgeError(f"Expected a 2×2 matrix, got shape {arr.shape}")
        object.__setattr__(self, "m", arr)

    def __add__(self, other: "MatrixRep") -> "MatrixRep":
        return MatrixRep(self.m + other.m)

    def __matmul__(self, other: "MatrixRep") -> "MatrixRep":
        return MatrixRep(self.m @ other.m)

    def dagger(self) -> "MatrixRep":
        return MatrixRep(self.m.conj().T)

    def det(self) -> complex:
        return complex(self.m[0, 0] * self.m[1, 1] - self.m[0, 1] * self.m[1, 0])

    def is_close(self, other: "MatrixRep", tol: float) -> bool:
        return bool(np.max(np.abs(self.m - other.m)) <= tol)


def to_matrix(a: Biquaternion) -> MatrixRep:
    w, x, y, z = a.components()
    return MatrixRep(np.array([
        [w - 1j * z, -1j * x - y],
        [-1j * x + y, w + 1j * z],
    ], dtype=np.complex128))


def from_matrix(rep: Union[MatrixRep, np.ndarray]) -> Biquaternion:
    m = rep.m if isinstance(rep, MatrixRep) else MatrixRep(rep).m
    return Biquaternion(
        (m[0, 0] + m[1, 1]) / 2,
        1j * (m[0, 1] + m[1, 0]) / 2,
        (m[1, 0] - m[0, 1]) / 2,
        (m[1, 1] - m[0, 0]) / 2j,
    )


def spinor_to_column(psi: Biquaternion, chirality: Chirality) -> np.ndarray:
    """(ξ, χ)ᵀ of a spinor; raises SpinorError outside the ideal."""
    xi, chi = extract_components(psi, chirality)
    return np.array([xi, chi], dtype=np.complex128)


def matrix_column(value: Biquaternion, chirality: Chirality) -> np.ndarray:
    """The matrix column that carries a spinor of the given chirality."""
    return to_matrix(value).m[:, _IDEAL_COLUMN[Chirality(chirality)]]


class SpinorField(Protocol):
    def __call__(self, point: SpacetimePoint) -> Biquaternion: ...

    def partial(self, mu: int) -> "SpinorField": ...


def dirac_column(psi_left: Biquaternion, psi_right: Biquaternion) -> np.ndarray:
    """Four-component Weyl spinor (ψ_L; ψ_R)."""
    return np.concatenate([matrix_column(psi_left, Chirality.LEFT), matrix_column(psi_right, Chirality.RIGHT)])


def weyl_dirac_residual(pair: Tuple[SpinorField, SpinorField], potential: SpinorField, mass: float,
                        point: SpacetimePoint) -> np.ndarray:
    """Evaluate (iγ^μ D_μ − m)Ψ at a point in the chiral basis.

    Metric (+,−,−,−) and D_μ = ∂_μ − iA_μ with A_μ lowered from the
    hermitean potential A = A⁰ + i(A¹î + A²ĵ + A³k̂). Partials come from
    the fields themselves, so the oracle shares the differentiation backend
    with the quaternionic residuals.

    Args:
        pair: (ψ_L field, ψ_R field).
        potential: Gauge potential field.
        mass: Mass m.
        point: Spacetime point (t, x, y, z).

    Returns:
        np.ndarray: Four complex residual components.
    """
    psi_left, psi_right = pair
    a = potential(point)
    a_lower = np.array([a.w.real, -a.x.imag, -a.y.imag, -a.z.imag])
    psi = dirac_column(psi_left(point), psi_right(point))
    residual = -mass * psi
    for mu in range(4):
        d_psi = dirac_column(psi_left.partial(mu)(point), psi_right.partial(mu)(point))
        residual = residual + 1j * GAMMA[mu] @ (d_psi - 1j * a_lower[mu] * psi)
    return residual


def quaternion_residual_columns(left: Biquaternion, right: Biquaternion) -> np.ndarray:
    """Map the quaternionic residuals onto the oracle's component order.

    The upper block of (iγD − m)Ψ is the equation for ψ_R and the lower block
    the equation for ψ_L.
    """
    upper = CHIRALITY_PHASES[Chirality.RIGHT] * matrix_column(right, Chirality.RIGHT)
    lower = CHIRALITY_PHASES[Chirality.LEFT] * matrix_column(left, Chirality.LEFT)
    return np.concatenate([upper, lower])


def pauli_hamiltonian_matrix(magnetic: Any, mass: float, kinetic: float = 0.0) -> np.ndarray:
    """2×2 Pauli Hamiltonian kinetic·I + σ⃗·B⃗/(2m)."""
    b = np.asarray(magnetic, dtype=float).reshape(3)
    return kinetic * IDENTITY2 + sum(bk * sigma for bk, sigma in zip(b, PAULI)) / (2.0 * mass)


def spinor_lorentz_matrix(generator: GeneratorLike, chirality: Chirality) -> np.ndarray:
    """exp of the matrix image of Λ (left) or Λ* (right)."""
    value = generator_value(generator)
    if Chirality(chirality) is Chirality.RIGHT:
        value = conj_complex(value)
    return expm(to_matrix(value).m)
