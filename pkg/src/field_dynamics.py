"""
Dirac, Pauli and Maxwell equations evaluated on biquaternion fields.

Conventions: ħ = c = 1 with the charge absorbed into A. Gauge potentials are
hermitean four-vectors A = A⁰ + i(A¹î + A²ĵ + A³k̂). The spacetime derivative
is ∂ = ∂ₜ + i(î∂ₓ + ĵ∂_y + k̂∂_z), its conjugate ∂̃ = ∂ₜ − i(î∂ₓ + ĵ∂_y + k̂∂_z),
and the long derivative D = ∂ − iA*.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from src.core_algebra import (
    ONE, UNIT_I, UNIT_J, UNIT_K, UNITS, ZERO, Biquaternion, FieldStrengthValue,
    FourVector, QuaternionError, SpacetimePoint, conj_complex, conj_herm, conj_quat, euclidean_magnitude,
)
from src.fields import X, Y, AnalyticField, Backend, Expr, constant_B, parse_scalar, profile_times, pure_gauge
from src.matrix_bridge import pauli_hamiltonian_matrix, quaternion_residual_columns, weyl_dirac_residual
from src.spinor import (
    SQRT2, ChiralSpinorPair, Chirality, StandardSpinorPair, make_left,
)

logger = logging.getLogger(__name__)

# Units multiplying ∂_μ in ∂ and ∂̃
DERIVATIVE_UNITS = (ONE, 1j * UNIT_I, 1j * UNIT_J, 1j * UNIT_K)
TILDE_DERIVATIVE_UNITS = tuple(conj_quat(u) for u in DERIVATIVE_UNITS)

MAXWELL_LABELS = (
    "gauss", "ampere_x", "ampere_y", "ampere_z",
    "faraday_x", "faraday_y", "faraday_z", "no_monopole",
)

ORIGIN: SpacetimePoint = (0.0, 0.0, 0.0, 0.0)


class DynamicsError(QuaternionError):
    """Exception raised for invalid inputs to the field equations."""


Pair = Tuple[AnalyticField, AnalyticField]


def backend_of(*fields: AnalyticField) -> Backend:
    """analytic when every field differentiates exactly, fd otherwise."""
    return Backend.ANALYTIC if all(f.analytic for f in fields) else Backend.FD


def _potential_at(potential: AnalyticField, x: SpacetimePoint) -> Biquaternion:
    value = potential(x)
    try:
        FourVector(value)
    except QuaternionError as e:
        raise DynamicsError(f"Gauge potential is not a hermitean four-vector at {x}: {e}") from e
    return value


def _apply(f: AnalyticField, x: SpacetimePoint, units: Sequence[Biquaternion], right: bool = False) -> Biquaternion:
    total = ZERO
    for mu, unit in enumerate(units):
        d = f.partial(mu)(x)
        total = total + (d * unit if right else unit * d)
    return total


def spacetime_derivative(f: AnalyticField, x: SpacetimePoint) -> Biquaternion:
    """∂f at x, units on the left."""
    return _apply(f, x, DERIVATIVE_UNITS)


def spacetime_derivative_tilde(f: AnalyticField, x: SpacetimePoint) -> Biquaternion:
    """∂̃f at x, units on the left."""
    return _apply(f, x, TILDE_DERIVATIVE_UNITS)


def long_derivative(psi: AnalyticField, potential: AnalyticField, x: SpacetimePoint,
                    chirality: Chirality) -> Biquaternion:
    """(∂ − iA*)ψ for left-handed spinors, (∂̃ − iA)ψ for right-handed ones.

    Raises:
        DynamicsError: If the potential is not hermitean at x.
    """
    a = _potential_at(potential, x)
    value = psi(x)
    if Chirality(chirality) is Chirality.LEFT:
        return spacetime_derivative(psi, x) - 1j * conj_complex(a) * value
    return spacetime_derivative_tilde(psi, x) - 1j * a * value


def dirac_residuals(pair: Pair, potential: AnalyticField, mass: float,
                    x: SpacetimePoint) -> Tuple[Biquaternion, Biquaternion]:
    """Residuals iDψ_L − mψ_Rĵ and iD̃ψ_R + mψ_Lĵ at x."""
    psi_left, psi_right = pair
    left = 1j * long_derivative(psi_left, potential, x, Chirality.LEFT) - mass * psi_right(x) * UNIT_J
    right = 1j * long_derivative(psi_right, potential, x, Chirality.RIGHT) + mass * psi_left(x) * UNIT_J
    return left, right


def _time_and_vector(a: Biquaternion) -> Tuple[float, Biquaternion]:
    return a.w.real, Biquaternion(0, a.x.imag, a.y.imag, a.z.imag)


def covariant_gradient(psi: AnalyticField, potential: AnalyticField, x: SpacetimePoint) -> Biquaternion:
    """(∇ + iA⃗)ψ at x with ∇ = î∂ₓ + ĵ∂_y + k̂∂_z."""
    _, a_vec = _time_and_vector(_potential_at(potential, x))
    nabla = ZERO
    for k in (1, 2, 3):
        nabla = nabla + UNITS[k] * psi.partial(k)(x)
    return nabla + 1j * a_vec * psi(x)


def dirac_residuals_split(pair: Pair, potential: AnalyticField, mass: float,
                          x: SpacetimePoint) -> Tuple[Biquaternion, Biquaternion]:
    """Same residuals with the long derivatives opened into i∂₀ + A₀ ∓ (∇ + iA⃗)."""
    psi_left, psi_right = pair
    a0, _ = _time_and_vector(_potential_at(potential, x))
    left = (1j * psi_left.partial(0)(x) + a0 * psi_left(x) - covariant_gradient(psi_left, potential, x)
            - mass * psi_right(x) * UNIT_J)
    right = (1j * psi_right.partial(0)(x) + a0 * psi_right(x) + covariant_gradient(psi_right, potential, x)
             + mass * psi_left(x) * UNIT_J)
    return left, right


def oracle_difference(pair: Pair, potential: AnalyticField, mass: float, x: SpacetimePoint) -> float:
    """Largest componentwise gap between the quaternionic and Weyl-matrix residuals."""
    left, right = dirac_residuals(pair, potential, mass, x)
    mapped = quaternion_residual_columns(left, right)
    oracle = weyl_dirac_residual(pair, potential, mass, x)
    return float(np.max(np.abs(mapped - oracle)))


def standard_rep_residuals(zeta_eta: Pair, potential: AnalyticField, mass: float, x: SpacetimePoint,
                           mass_phase: bool = False) -> Tuple[Biquaternion, Biquaternion]:
    """Residuals of the Dirac system in the standard representation ψ± = (ζ, η).

    plus  = i∂₀ψ₊ + A₀ψ₊ − (∇ + iA⃗)ψ₋ − mψ₊
    minus = i∂₀ψ₋ + A₀ψ₋ − (∇ + iA⃗)ψ₊ + mψ₋

    With mass_phase the fields are taken as e^{imt}ψ±, which removes the mass
    from the first equation and doubles it in the second. Without it,
    plus = (left + right·ĵ)/√2 and minus = (left − right·ĵ)/√2.
    """
    plus_field, minus_field = zeta_eta
    a0, _ = _time_and_vector(_potential_at(potential, x))
    psi_p, psi_m = plus_field(x), minus_field(x)
    plus = (1j * plus_field.partial(0)(x) + a0 * psi_p - covariant_gradient(minus_field, potential, x))
    minus = (1j * minus_field.partial(0)(x) + a0 * psi_m - covariant_gradient(plus_field, potential, x))
    if mass_phase:
        return plus, minus + 2 * mass * psi_m
    return plus - mass * psi_p, minus + mass * psi_m


def standard_fields(pair: Pair) -> Pair:
    """(ζ, η) = ((ψ_L + ψ_Rĵ)/√2, (ψ_L − ψ_Rĵ)/√2) as fields."""
    psi_left, psi_right = pair
    lifted = psi_right.right_mul(UNIT_J)
    return (psi_left + lifted).scaled(1 / SQRT2), (psi_left - lifted).scaled(1 / SQRT2)


# Plane waves

@dataclass(frozen=True)
class PlaneWaveSpec:
    """Free plane wave ψ = ψ₀ exp(−i(Et − p⃗·x⃗)) for both chiralities."""

    mass: float
    energy: float
    momentum: Tuple[float, float, float]
    amplitudes: ChiralSpinorPair

    @classmethod
    def solve(cls, mass: float, momentum: Sequence[float], psi_left: Biquaternion,
              energy: Optional[float] = None) -> "PlaneWaveSpec":
        """Fix ψ_R₀ = −(E − ip⃗)ψ_L₀ĵ/m so the left equation holds.

        With energy None the on-shell value √(p² + m²) is used. Off shell the
        right residual is ((m² − E² + p²)/m)ψ_Lĵ.

        Raises:
            DynamicsError: For non-positive mass.
        """
        if not mass > 0:
            raise DynamicsError(f"Plane-wave amplitudes are solved for positive mass, got {mass}")
        p = tuple(float(c) for c in momentum)
        if len(p) != 3:
            raise DynamicsError(f"Momentum must have three components, got {momentum!r}")
        if energy is None:
            energy = math.sqrt(mass * mass + sum(c * c for c in p))
        p_vec = Biquaternion(0, p[0], p[1], p[2])
        psi_right = -((energy - 1j * p_vec) * psi_left * UNIT_J) / mass
        return cls(float(mass), float(energy), p, ChiralSpinorPair(psi_left, psi_right))

    @classmethod
    def rest(cls, mass: float, psi_left: Biquaternion) -> "PlaneWaveSpec":
        """E = m, p = 0; then ψ_L = ψ_Rĵ."""
        return cls.solve(mass, (0.0, 0.0, 0.0), psi_left, energy=mass)

    def is_on_shell(self, tol: float = 1e-10) -> bool:
        p2 = sum(c * c for c in self.momentum)
        return abs(self.energy ** 2 - p2 - self.mass ** 2) <= tol * max(1.0, self.energy ** 2)

    def fields(self) -> Pair:
        return (
            AnalyticField.plane_wave(self.amplitudes.psi_left, self.energy, self.momentum, "ψ_L"),
            AnalyticField.plane_wave(self.amplitudes.psi_right, self.energy, self.momentum, "ψ_R"),
        )

    def residual_norm(self, x: SpacetimePoint = ORIGIN, potential: Optional[AnalyticField] = None) -> float:
        potential = potential or AnalyticField.constant(ZERO, "A=0")
        left, right = dirac_residuals(self.fields(), potential, self.mass, x)
        return max(euclidean_magnitude(left), euclidean_magnitude(right))


def dispersion_scan(mass: float = 1.0, grid: Optional[Sequence[float]] = None, energy_offset: float = 0.0,
                    psi_left: Optional[Biquaternion] = None, x: SpacetimePoint = (0.3, -0.2, 0.5, 0.1)
                    ) -> np.ndarray:
    """Residual norms over a cubic momentum grid at E = √(p² + m²) + energy_offset."""
    values = np.linspace(-2.0, 2.0, 10) if grid is None else np.asarray(grid, dtype=float)
    psi_left = make_left(1, 0) if psi_left is None else psi_left
    norms = np.empty((len(values),) * 3)
    for i, px in enumerate(values):
        for j, py in enumerate(values):
            for k, pz in enumerate(values):
                on_shell = math.sqrt(mass * mass + px * px + py * py + pz * pz)
                spec = PlaneWaveSpec.solve(mass, (px, py, pz), psi_left, energy=on_shell + energy_offset)
                norms[i, j, k] = spec.residual_norm(x)
    return norms


# Pauli reduction

def _scalar_potential_field(potential: AnalyticField) -> AnalyticField:
    return potential.map_linear(lambda a: Biquaternion(a.w.real), "A⁰")


def _component_field(potential: AnalyticField, k: int) -> AnalyticField:
    return potential.map_linear(lambda a, k=k: Biquaternion(a.components()[k].imag), f"A^{k}")


def covariant_gradient_field(psi: AnalyticField, potential: AnalyticField) -> AnalyticField:
    """(∇ + iA⃗)ψ as a field, so that it can be differentiated again."""
    total: Optional[AnalyticField] = None
    for k in (1, 2, 3):
        d_k = psi.partial(k) + _component_field(potential, k).times(psi).scaled(1j)
        term = d_k.left_mul(UNITS[k])
        total = term if total is None else total + term
    return total


def magnetic_field(potential: AnalyticField, x: SpacetimePoint) -> np.ndarray:
    """B⃗ = ∇ × A⃗."""
    d = [np.array([potential.partial(mu)(x).components()[k].imag for k in (1, 2, 3)]) for mu in (1, 2, 3)]
    # d[j][k] = ∂_j A^k
    return np.array([d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]])


def electric_field(potential: AnalyticField, x: SpacetimePoint) -> np.ndarray:
    """E⃗ = −∇A⁰ − ∂ₜA⃗."""
    grad_a0 = np.array([potential.partial(mu)(x).w.real for mu in (1, 2, 3)])
    dt = potential.partial(0)(x)
    return -grad_a0 - np.array([dt.x.imag, dt.y.imag, dt.z.imag])


def _scalar_square(psi: AnalyticField, potential: AnalyticField, x: SpacetimePoint) -> Biquaternion:
    # {∇ + iA⃗}²ψ = Σ_k (∂_k + iA^k)(∂_k + iA^k)ψ
    total = ZERO
    value = psi(x)
    for k in (1, 2, 3):
        a_k = potential(x).components()[k].imag
        da_k = potential.partial(k)(x).components()[k].imag
        total = total + (psi.partial(k).partial(k)(x) + 1j * da_k * value
                         + 2j * a_k * psi.partial(k)(x) - a_k * a_k * value)
    return total


def pauli_apply(psi_plus: AnalyticField, potential: AnalyticField, x: SpacetimePoint, mass: float) -> Biquaternion:
    """Hψ₊ = −{∇ + iA⃗}²ψ₊/(2m) + (iB⃗/2m)ψ₊ − A₀ψ₊.

    Raises:
        DynamicsError: For non-positive mass or a non-hermitean potential.
    """
    if not mass > 0:
        raise DynamicsError(f"Pauli Hamiltonian needs positive mass, got {mass}")
    a0, _ = _time_and_vector(_potential_at(potential, x))
    b = magnetic_field(potential, x)
    b_quat = Biquaternion(0, b[0], b[1], b[2])
    value = psi_plus(x)
    return (-_scalar_square(psi_plus, potential, x) + 1j * b_quat * value) / (2 * mass) - a0 * value


def pauli_field(psi_plus: AnalyticField, potential: AnalyticField, mass: float) -> AnalyticField:
    """Hψ₊ = (∇ + iA⃗)²ψ₊/(2m) − A₀ψ₊ built from the quaternionic square, as a field."""
    square = covariant_gradient_field(covariant_gradient_field(psi_plus, potential), potential)
    return square.scaled(1 / (2 * mass)) - _scalar_potential_field(potential).times(psi_plus)


def square_identity_residual(psi: AnalyticField, potential: AnalyticField, x: SpacetimePoint) -> Biquaternion:
    """(∇ + iA⃗)²ψ − (−{∇ + iA⃗}²ψ + iB⃗ψ), which vanishes identically."""
    square = covariant_gradient_field(covariant_gradient_field(psi, potential), potential)(x)
    b = magnetic_field(potential, x)
    expected = -_scalar_square(psi, potential, x) + 1j * Biquaternion(0, b[0], b[1], b[2]) * psi(x)
    return square - expected


def _points_norm(values: Sequence[Biquaternion]) -> float:
    return math.sqrt(sum(euclidean_magnitude(v) ** 2 for v in values))


def rayleigh_energy(psi: AnalyticField, potential: AnalyticField, mass: float,
                    points: Sequence[SpacetimePoint]) -> Tuple[float, float]:
    """Energy ⟨ψ, Hψ⟩/⟨ψ, ψ⟩ over sample points and the eigen-residual ‖Hψ − Eψ‖/‖ψ‖."""
    psi_values = [psi(x) for x in points]
    h_values = [pauli_apply(psi, potential, x, mass) for x in points]
    num = sum(np.vdot(p.as_array(), h.as_array()) for p, h in zip(psi_values, h_values))
    den = sum(np.vdot(p.as_array(), p.as_array()) for p in psi_values)
    if abs(den) == 0:
        raise DynamicsError("State vanishes at every sample point")
    energy = complex(num / den)
    if abs(energy.imag) > 1e-8 * max(1.0, abs(energy)):
        logger.warning("Pauli energy has an imaginary part %s", energy.imag)
    residual = _points_norm([h - p * energy.real for p, h in zip(psi_values, h_values)]) / _points_norm(psi_values)
    return energy.real, residual


@dataclass(frozen=True)
class PauliSpectrum:
    magnetic: float
    mass: float
    energies: Tuple[float, float]
    oracle: Tuple[float, float]
    eigen_residuals: Tuple[float, float]
    backend: Backend

    @property
    def splitting(self) -> float:
        return self.energies[1] - self.energies[0]

    @property
    def max_deviation(self) -> float:
        return max(abs(a - b) for a, b in zip(self.energies, self.oracle))


def landau_spectrum(magnetic: float, mass: float, points: Sequence[SpacetimePoint],
                    backend: Backend = Backend.ANALYTIC) -> PauliSpectrum:
    """Lowest Landau level in B⃗ = B k̂ for spin down (ĵP_L) and up (P_L).

    In symmetric gauge the profile e^{−|B|r⊥²/4} has kinetic energy |B|/2m; the
    spin term adds ±B/2m. The oracle diagonalizes |B|/2m + σ⃗·B⃗/2m.
    """
    potential = constant_B((0.0, 0.0, magnetic), backend)
    profile = sp.exp(-abs(magnetic) * (X ** 2 + Y ** 2) / 4)
    down = profile_times(profile, make_left(0, 1), backend, label="ψ_down")
    up = profile_times(profile, make_left(1, 0), backend, label="ψ_up")
    e_down, r_down = rayleigh_energy(down, potential, mass, points)
    e_up, r_up = rayleigh_energy(up, potential, mass, points)
    matrix = pauli_hamiltonian_matrix((0.0, 0.0, magnetic), mass, kinetic=abs(magnetic) / (2 * mass))
    oracle = np.linalg.eigvalsh(matrix)
    energies = tuple(sorted((e_down, e_up)))
    logger.debug("Landau energies %s vs oracle %s", energies, oracle)
    return PauliSpectrum(magnetic, mass, energies, (float(oracle[0]), float(oracle[1])), (r_down, r_up),
                         backend_of(potential, up))


@dataclass(frozen=True)
class NonrelReport:
    """Large-mass behaviour of the standard-representation system."""

    masses: Tuple[float, ...]
    lower_ratio: Tuple[float, ...]
    first_residual: Tuple[float, ...]
    second_residual: Tuple[float, ...]
    lower_order: float
    second_order: float
    backend: Backend


def fit_order(masses: Sequence[float], values: Sequence[float]) -> float:
    """Decay order n in value ∝ m^(−n), fitted on a log-log scale."""
    slope, _ = np.polyfit(np.log(np.asarray(masses, dtype=float)), np.log(np.asarray(values, dtype=float)), 1)
    return float(-slope)


def nonrel_limit_order(psi_plus: AnalyticField, potential: AnalyticField, masses: Sequence[float],
                       points: Sequence[SpacetimePoint]) -> NonrelReport:
    """Substitute the large-mass solution into the standard-representation system.

    ψ₊ is evolved by the Pauli equation (i∂₀ψ₊ = Hψ₊) and ψ₋ = (∇ + iA⃗)ψ₊/(2m).
    With the mass phase removed, the first equation then holds up to
    discretisation, while the second leaves (i∂₀ + A₀)ψ₋, which falls off as
    1/m when A₀ varies and as 1/m² for free packets. ‖ψ₋‖/‖ψ₊‖ falls as 1/m.

    Args:
        psi_plus: Static upper-component profile.
        potential: Static gauge potential.
        masses: Strictly increasing masses.
        points: Sample points for the norms.

    Returns:
        NonrelReport: Norms per mass and fitted decay orders.

    Raises:
        DynamicsError: If masses are not strictly increasing and positive.
    """
    masses = tuple(float(m) for m in masses)
    if len(masses) < 2 or any(b <= a for a, b in zip(masses, masses[1:])) or masses[0] <= 0:
        raise DynamicsError(f"Need at least two strictly increasing positive masses, got {masses}")
    gradient = covariant_gradient_field(psi_plus, potential)
    a0 = _scalar_potential_field(potential)
    lower_ratio, first, second = [], [], []
    plus_norm = _points_norm([psi_plus(x) for x in points])
    for m in masses:
        h_plus = pauli_field(psi_plus, potential, m)
        psi_minus = gradient.scaled(1 / (2 * m))
        dt_minus = covariant_gradient_field(h_plus, potential).scaled(1 / (2 * m))
        r1 = [h_plus(x) + a0(x).w * psi_plus(x) - covariant_gradient(psi_minus, potential, x) for x in points]
        r2 = [dt_minus(x) + a0(x).w * psi_minus(x) for x in points]
        lower_ratio.append(_points_norm([psi_minus(x) for x in points]) / plus_norm)
        first.append(_points_norm(r1))
        second.append(_points_norm(r2))
        logger.debug("m=%s ratio=%s r1=%s r2=%s", m, lower_ratio[-1], first[-1], second[-1])
    return NonrelReport(masses, tuple(lower_ratio), tuple(first), tuple(second),
                        fit_order(masses, lower_ratio), fit_order(masses, second), backend_of(psi_plus, potential))


# Current

def current(pair: ChiralSpinorPair) -> FourVector:
    """j = 2(ψ_Lψ_L† + ψ_R*ψ̃_R) for commuting components.

    This is −2(ψ_Lψ_L† − ψ_R*ψ̃_R) with the anticommuting factors of the
    first product put back in ξ*ξ order, so that j⁰ ≥ 0.
    """
    value = 2 * (pair.psi_left * conj_herm(pair.psi_left) + conj_complex(pair.psi_right) * conj_quat(pair.psi_right))
    return FourVector.project(value)


def current_from_components(xi_left: complex, chi_left: complex, xi_right: complex, chi_right: complex) -> FourVector:
    """The current written out in spinor components."""
    xl, cl, xr, cr = (complex(v) for v in (xi_left, chi_left, xi_right, chi_right))
    c = complex.conjugate
    j0 = (c(xl) * xl + c(cl) * cl) + (c(xr) * xr + c(cr) * cr)
    jx = (c(xl) * cl + c(cl) * xl) - (c(xr) * cr + c(cr) * xr)
    jy = 1j * (c(cl) * xl - c(xl) * cl) - 1j * (c(cr) * xr - c(xr) * cr)
    jz = (c(xl) * xl - c(cl) * cl) - (c(xr) * xr - c(cr) * cr)
    return FourVector.project(Biquaternion(j0, 1j * jx, 1j * jy, 1j * jz))


def current_standard(pair: StandardSpinorPair) -> FourVector:
    """(ζζ† + ηη† + c.c.) + (ζη† + ηζ† − c.c.), equal to current(from_standard(ζ, η))."""
    zeta, eta = pair.zeta, pair.eta
    real = zeta * conj_herm(zeta) + eta * conj_herm(eta)
    vector = zeta * conj_herm(eta) + eta * conj_herm(zeta)
    return FourVector.project(real + conj_complex(real) + vector - conj_complex(vector))


def current_field(pair: Pair) -> AnalyticField:
    psi_left, psi_right = pair
    return (psi_left.times(psi_left.conj_herm()) + psi_right.conj_complex().times(psi_right.conj_quat())).scaled(2)


def current_divergence(pair: Pair, x: SpacetimePoint) -> complex:
    """Scalar part of ∂j, i.e. ∂ₜj⁰ + ∇·j⃗."""
    return spacetime_derivative(current_field(pair), x).w


# Field strength and Maxwell

class Gauge(str, Enum):
    GENERAL = "general"
    LORENTZ = "lorentz"


def field_strength_field(potential: AnalyticField) -> AnalyticField:
    """Φ = −(∂A − Ã∂̃)/2 as a field; ∂̃ acts to the left with units on the right."""
    tilde = potential.conj_quat()
    terms: Optional[AnalyticField] = None
    for mu in range(4):
        term = potential.partial(mu).left_mul(DERIVATIVE_UNITS[mu]) - tilde.partial(mu).right_mul(TILDE_DERIVATIVE_UNITS[mu])
        terms = term if terms is None else terms + term
    return terms.scaled(-0.5)


def lorentz_gauge_scalar(potential: AnalyticField, x: SpacetimePoint) -> float:
    """∂ₜA⁰ + ∇·A⃗."""
    return spacetime_derivative(potential, x).w.real


def field_strength(potential: AnalyticField, x: SpacetimePoint, gauge: Gauge = Gauge.GENERAL,
                   tol: float = 1e-10) -> FieldStrengthValue:
    """Φ = B⃗ + iE⃗ at x.

    The general form is −(∂A − Ã∂̃)/2. The Lorentz form −∂A holds when
    ∂ₜA⁰ + ∇·A⃗ = 0; otherwise a warning is logged and the scalar part dropped.

    Raises:
        DynamicsError: For a non-hermitean potential or unknown gauge.
    """
    _potential_at(potential, x)
    try:
        gauge = Gauge(gauge)
    except ValueError as e:
        raise DynamicsError(f"Unknown gauge {gauge!r}; expected 'general' or 'lorentz'") from e
    if gauge is Gauge.GENERAL:
        return FieldStrengthValue(field_strength_field(potential)(x))
    value = -spacetime_derivative(potential, x)
    if abs(value.w) > tol:
        logger.warning("Lorentz gauge condition violated at %s: ∂·A = %s", x, -value.w)
    return FieldStrengthValue(value.vector())


def maxwell_lhs(potential: AnalyticField, x: SpacetimePoint) -> Biquaternion:
    """∂̃Φ at x."""
    return spacetime_derivative_tilde(field_strength_field(potential), x)


def maxwell_residual(potential: AnalyticField, source: Optional[AnalyticField], x: SpacetimePoint) -> Biquaternion:
    """∂̃Φ − j; a missing source means vacuum."""
    lhs = maxwell_lhs(potential, x)
    return lhs if source is None else lhs - source(x)


def expand_to_real(residual: Biquaternion) -> Dict[str, float]:
    """Split a Maxwell residual into its eight real component equations.

    With ∂̃Φ = −∇·E⃗ + i∇·B⃗ + (∂ₜB⃗ + ∇×E⃗) + i(∂ₜE⃗ − ∇×B⃗), the real scalar part
    is Gauss's law, the imaginary scalar part the no-monopole law, the real
    vector part Faraday's law and the imaginary vector part Ampère–Maxwell.
    """
    w, x, y, z = residual.components()
    return {
        "gauss": w.real,
        "ampere_x": x.imag,
        "ampere_y": y.imag,
        "ampere_z": z.imag,
        "faraday_x": x.real,
        "faraday_y": y.real,
        "faraday_z": z.real,
        "no_monopole": w.imag,
    }


def _second_partials(potential: AnalyticField, x: SpacetimePoint) -> np.ndarray:
    # h[μ, ν, c] = ∂_μ∂_ν of component c (A⁰, A¹, A², A³)
    h = np.empty((4, 4, 4))
    for mu in range(4):
        for nu in range(4):
            v = potential.partial(mu).partial(nu)(x)
            h[mu, nu] = (v.w.real, v.x.imag, v.y.imag, v.z.imag)
    return h


def classical_sources(potential: AnalyticField, x: SpacetimePoint) -> Tuple[float, np.ndarray]:
    """ρ = ∇·E⃗ and J⃗ = ∇×B⃗ − ∂ₜE⃗ from second partials of the components."""
    h = _second_partials(potential, x)
    rho = -sum(h[i, i, 0] + h[i, 0, i] for i in (1, 2, 3))
    current_density = np.empty(3)
    for i in (1, 2, 3):
        curl_b = sum(h[i, j, j] for j in (1, 2, 3)) - sum(h[j, j, i] for j in (1, 2, 3))
        dt_e = -h[0, i, 0] - h[0, 0, i]
        current_density[i - 1] = curl_b - dt_e
    return float(rho), current_density


def source_from_classical(rho: float, current_density: Sequence[float]) -> Biquaternion:
    """The j with ∂̃Φ = j for classical charge ρ and current J⃗: j = −ρ − iJ⃗."""
    jx, jy, jz = (float(c) for c in current_density)
    return Biquaternion(-rho, -1j * jx, -1j * jy, -1j * jz)


@dataclass(frozen=True)
class MaxwellCheck:
    components: Dict[str, float]
    backend: Backend
    points: List[SpacetimePoint] = field(default_factory=list)

    @property
    def max_abs(self) -> float:
        return max(abs(v) for v in self.components.values())


def maxwell_check(potential: AnalyticField, points: Sequence[SpacetimePoint],
                  source: Optional[AnalyticField] = None) -> MaxwellCheck:
    """Largest |residual| per component equation over the sample points."""
    worst = {label: 0.0 for label in MAXWELL_LABELS}
    for x in points:
        for label, value in expand_to_real(maxwell_residual(potential, source, x)).items():
            worst[label] = max(worst[label], abs(value))
    return MaxwellCheck(worst, backend_of(potential), list(points))


def gauge_covariance_residual(psi: AnalyticField, potential: AnalyticField, phase: Expr, x: SpacetimePoint,
                              chirality: Chirality = Chirality.LEFT,
                              backend: Backend = Backend.ANALYTIC) -> float:
    """|D′(e^{iφ}ψ) − e^{iφ}Dψ| for a real phase φ(t, x⃗), where A′ = A + (∂φ)*."""
    phase_factor = profile_times(sp.exp(sp.I * parse_scalar(phase)), ONE, backend, label="e^{iφ}")
    shifted = potential + pure_gauge(phase, backend)
    lhs = long_derivative(phase_factor.times(psi), shifted, x, chirality)
    rhs = phase_factor(x) * long_derivative(psi, potential, x, chirality)
    return euclidean_magnitude(lhs - rhs)
