"""
Biquaternion-valued fields on spacetime with access to partial derivatives.

Leaves carry their own derivatives: sympy expressions differentiate
symbolically, plane waves in closed form, and plain functions by central
differences. Combinators (sums, constant products, field products, linear
maps) apply the product rule structurally, so finite-difference error only
enters at the leaves.
"""

import cmath
import logging
import math
import os
from enum import Enum
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp

from src.calculus import FD_STEP
from src.core_algebra import (
    ZERO, Biquaternion, QuaternionError, SpacetimePoint, conj_complex, conj_herm, conj_quat,
)

logger = logging.getLogger(__name__)

# Step used with the Richardson stencil when higher derivatives come from finite differences
NESTED_FD_STEP = float(os.environ.get("QWF_NESTED_FD_STEP", "1e-3"))

# Coulomb potentials refuse to evaluate closer than this to the charge
COULOMB_EXCLUSION_RADIUS = 1e-3

T, X, Y, Z = sp.symbols("t x y z", real=True)
COORDINATES = (T, X, Y, Z)

Expr = Union[sp.Expr, str, int, float, complex]


class FieldError(QuaternionError):
    """Exception raised for invalid field definitions or non-finite field values."""


class Backend(str, Enum):
    ANALYTIC = "analytic"
    FD = "fd"


def _as_point(point: Sequence[float]) -> SpacetimePoint:
    values = tuple(float(c) for c in point)
    if len(values) != 4:
        raise FieldError(f"Spacetime points have four coordinates, got {point!r}")
    return values  # type: ignore[return-value]


class AnalyticField:
    """A spacetime field with cached partial derivatives.

    Args:
        func: Maps a point (t, x, y, z) to a Biquaternion.
        derivative: Builds the field ∂_μ f for μ = 0..3; None selects
            central differences.
        step: Finite-difference step when derivative is None.
        richardson: Use the fourth-order five-point stencil.
        label: Name used in log and error messages.
    """

    def __init__(self, func: Callable[[SpacetimePoint], Biquaternion],
                 derivative: Optional[Callable[[int], "AnalyticField"]] = None, *,
                 step: float = FD_STEP, richardson: bool = False, analytic: Optional[bool] = None,
                 label: str = "field"):
        if not step > 0:
            raise FieldError(f"Finite-difference step must be positive, got {step}")
        self._func = func
        self._derivative = derivative
        self.step = step
        self.richardson = richardson
        self.analytic = (derivative is not None) if analytic is None else analytic
        self.label = label
        self._partials: Dict[int, AnalyticField] = {}
        self.expressions: Optional[Tuple[sp.Expr, ...]] = None

    def __call__(self, point: Sequence[float]) -> Biquaternion:
        p = _as_point(point)
        value = self._func(p)
        if not isinstance(value, Biquaternion):
            raise FieldError(f"{self.label} returned {type(value).__name__}, expected Biquaternion")
        if not value.is_finite():
            raise FieldError(f"{self.label} is not finite at {p}")
        return value

    def __repr__(self) -> str:
        kind = "analytic" if self.analytic else "fd"
        return f"AnalyticField({self.label}, {kind})"

    def partial(self, mu: int) -> "AnalyticField":
        if mu not in (0, 1, 2, 3):
            raise FieldError(f"Partial derivative index must be 0..3, got {mu}")
        if mu not in self._partials:
            if self._derivative is not None:
                self._partials[mu] = self._derivative(mu)
            else:
                self._partials[mu] = self._finite_difference(mu)
        return self._partials[mu]

    def gradient(self, point: Sequence[float]) -> Tuple[Biquaternion, ...]:
        return tuple(self.partial(mu)(point) for mu in range(4))

    def _finite_difference(self, mu: int) -> "AnalyticField":
        h = self.step

        def shifted(p: SpacetimePoint, amount: float) -> Biquaternion:
            q = list(p)
            q[mu] += amount
            return self(q)

        if self.richardson:
            def func(p: SpacetimePoint) -> Biquaternion:
                return (shifted(p, -2 * h) - shifted(p, 2 * h) + (shifted(p, h) - shifted(p, -h)) * 8) / (12 * h)
        else:
            def func(p: SpacetimePoint) -> Biquaternion:
                return (shifted(p, h) - shifted(p, -h)) / (2 * h)

        return AnalyticField(func, step=h, richardson=self.richardson, label=f"∂{mu}({self.label})")

    # Leaves

    @classmethod
    def constant(cls, value: Biquaternion, label: str = "constant") -> "AnalyticField":
        return cls(lambda p: value, lambda mu: cls.constant(ZERO, "0"), label=label)

    @classmethod
    def from_function(cls, func: Callable[[SpacetimePoint], Biquaternion], step: float = FD_STEP,
                      richardson: bool = False, label: str = "field") -> "AnalyticField":
        return cls(func, None, step=step, richardson=richardson, label=label)

    @classmethod
    def from_sympy(cls, components: Sequence[Expr], label: str = "field") -> "AnalyticField":
        """Field whose four coefficients are sympy expressions in t, x, y, z."""
        exprs = _sympify_components(components)
        compiled = [sp.lambdify(COORDINATES, e, modules="numpy") for e in exprs]

        def func(p: SpacetimePoint) -> Biquaternion:
            return Biquaternion(*(complex(f(*p)) for f in compiled))

        def derivative(mu: int) -> "AnalyticField":
            return cls.from_sympy([sp.diff(e, COORDINATES[mu]) for e in exprs], label=f"∂{mu}({label})")

        field = cls(func, derivative, label=label)
        field.expressions = exprs
        return field

    @classmethod
    def plane_wave(cls, amplitude: Biquaternion, energy: float, momentum: Sequence[float],
                   label: str = "plane wave") -> "AnalyticField":
        """amplitude·exp(−i(Et − p⃗·x⃗)), differentiated in closed form."""
        p = tuple(float(c) for c in momentum)
        wave_numbers = (-1j * energy, 1j * p[0], 1j * p[1], 1j * p[2])

        def func(point: SpacetimePoint) -> Biquaternion:
            t, x, y, z = point
            return amplitude * cmath.exp(-1j * (energy * t - p[0] * x - p[1] * y - p[2] * z))

        return cls(func, lambda mu: cls.plane_wave(amplitude * wave_numbers[mu], energy, p, label), label=label)

    # Combinators

    def __add__(self, other: "AnalyticField") -> "AnalyticField":
        return AnalyticField(lambda p: self(p) + other(p), lambda mu: self.partial(mu) + other.partial(mu),
                             analytic=self.analytic and other.analytic, label=f"({self.label} + {other.label})")

    def __sub__(self, other: "AnalyticField") -> "AnalyticField":
        return AnalyticField(lambda p: self(p) - other(p), lambda mu: self.partial(mu) - other.partial(mu),
                             analytic=self.analytic and other.analytic, label=f"({self.label} - {other.label})")

    def __neg__(self) -> "AnalyticField":
        return self.scaled(-1)

    def scaled(self, factor: complex) -> "AnalyticField":
        return AnalyticField(lambda p: self(p) * factor, lambda mu: self.partial(mu).scaled(factor),
                             analytic=self.analytic, label=f"{factor}·{self.label}")

    def right_mul(self, constant: Biquaternion) -> "AnalyticField":
        return AnalyticField(lambda p: self(p) * constant, lambda mu: self.partial(mu).right_mul(constant),
                             analytic=self.analytic, label=f"{self.label}·c")

    def left_mul(self, constant: Biquaternion) -> "AnalyticField":
        return AnalyticField(lambda p: constant * self(p), lambda mu: self.partial(mu).left_mul(constant),
                             analytic=self.analytic, label=f"c·{self.label}")

    def times(self, other: "AnalyticField") -> "AnalyticField":
        """Pointwise product self·other, differentiated by the product rule."""
        return AnalyticField(
            lambda p: self(p) * other(p),
            lambda mu: self.partial(mu).times(other) + self.times(other.partial(mu)),
            analytic=self.analytic and other.analytic,
            label=f"({self.label})({other.label})",
        )

    def map_linear(self, fn: Callable[[Biquaternion], Biquaternion], name: str) -> "AnalyticField":
        """Apply a real-linear map that commutes with differentiation (conjugations, projections)."""
        return AnalyticField(lambda p: fn(self(p)), lambda mu: self.partial(mu).map_linear(fn, name),
                             analytic=self.analytic, label=f"{name}({self.label})")

    def conj_quat(self) -> "AnalyticField":
        return self.map_linear(conj_quat, "tilde")

    def conj_complex(self) -> "AnalyticField":
        return self.map_linear(conj_complex, "star")

    def conj_herm(self) -> "AnalyticField":
        return self.map_linear(conj_herm, "dagger")

    def reflected(self, signs: Sequence[int]) -> "AnalyticField":
        """f(s⊙x) for coordinate signs s; ∂_μ picks up s_μ."""
        s = tuple(int(v) for v in signs)
        if len(s) != 4 or any(v not in (-1, 1) for v in s):
            raise FieldError(f"Reflection signs must be four values of ±1, got {signs!r}")

        def func(p: SpacetimePoint) -> Biquaternion:
            return self(tuple(si * pi for si, pi in zip(s, p)))

        return AnalyticField(func, lambda mu: self.partial(mu).reflected(s).scaled(s[mu]),
                             analytic=self.analytic, label=f"{self.label}∘{s}")

    def guarded(self, check: Callable[[SpacetimePoint], None]) -> "AnalyticField":
        """Run check(point) before every evaluation, also on all derivatives."""
        def func(p: SpacetimePoint) -> Biquaternion:
            check(p)
            return self(p)

        return AnalyticField(func, lambda mu: self.partial(mu).guarded(check),
                             analytic=self.analytic, label=self.label)


def _sympify_components(components: Sequence[Expr]) -> Tuple[sp.Expr, ...]:
    if len(components) != 4:
        raise FieldError(f"A biquaternion field needs four components, got {len(components)}")
    names = {str(s): s for s in COORDINATES}
    exprs = []
    for c in components:
        try:
            expr = sp.sympify(c, locals=names) if isinstance(c, str) else sp.sympify(c)
        except (sp.SympifyError, SyntaxError, TypeError) as e:
            raise FieldError(f"Cannot parse field component {c!r}: {e}") from e
        stray = expr.free_symbols - set(COORDINATES)
        if stray:
            raise FieldError(f"Field component {c!r} uses unknown symbols {sorted(map(str, stray))}")
        exprs.append(expr)
    return tuple(exprs)


def parse_scalar(expr: Expr) -> sp.Expr:
    """Parse one real or complex expression in t, x, y, z."""
    return _sympify_components((expr, 0, 0, 0))[0]


def field_from_components(components: Sequence[Expr], backend: Backend = Backend.ANALYTIC,
                          label: str = "field") -> AnalyticField:
    """Build a field from four coefficient expressions on the selected backend.

    The fd backend compiles only the values and differentiates with the
    Richardson stencil at NESTED_FD_STEP, which keeps third derivatives usable.
    """
    if Backend(backend) is Backend.ANALYTIC:
        return AnalyticField.from_sympy(components, label=label)
    exprs = _sympify_components(components)
    compiled = [sp.lambdify(COORDINATES, e, modules="numpy") for e in exprs]
    return AnalyticField.from_function(
        lambda p: Biquaternion(*(complex(f(*p)) for f in compiled)),
        step=NESTED_FD_STEP, richardson=True, label=label,
    )


def potential_field(a0: Expr, a1: Expr, a2: Expr, a3: Expr, backend: Backend = Backend.ANALYTIC,
                    label: str = "A") -> AnalyticField:
    """Hermitean four-vector field A⁰ + i(A¹î + A²ĵ + A³k̂) from real expressions."""
    exprs = _sympify_components((a0, a1, a2, a3))
    return field_from_components((exprs[0], sp.I * exprs[1], sp.I * exprs[2], sp.I * exprs[3]), backend, label)


def _vector(values: Any, name: str) -> Tuple[float, float, float]:
    arr = np.asarray(values, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise FieldError(f"{name} must be a real 3-vector, got {values!r}")
    return (float(arr[0]), float(arr[1]), float(arr[2]))


def plane_wave_em(polarization: Any, wave_vector: Any, backend: Backend = Backend.ANALYTIC) -> AnalyticField:
    """Vacuum wave A⃗ = ε⃗ cos(ωt − k⃗·x⃗) with ω = |k⃗| in radiation gauge."""
    eps, k = _vector(polarization, "polarization"), _vector(wave_vector, "wave_vector")
    omega = math.sqrt(sum(c * c for c in k))
    if abs(sum(e * c for e, c in zip(eps, k))) > 1e-12 * max(1.0, omega):
        logger.warning("Polarization %s is not transverse to k=%s", eps, k)
    phase = sp.cos(omega * T - k[0] * X - k[1] * Y - k[2] * Z)
    return potential_field(0, eps[0] * phase, eps[1] * phase, eps[2] * phase, backend, label="A_wave")


def constant_B(magnetic: Any, backend: Backend = Backend.ANALYTIC) -> AnalyticField:
    """Symmetric gauge A⃗ = ½ B⃗ × r⃗ for a uniform magnetic field."""
    b = _vector(magnetic, "B")
    ax = (b[1] * Z - b[2] * Y) / 2
    ay = (b[2] * X - b[0] * Z) / 2
    az = (b[0] * Y - b[1] * X) / 2
    return potential_field(0, ax, ay, az, backend, label="A_B")


def uniform_E(electric: Any, backend: Backend = Backend.ANALYTIC) -> AnalyticField:
    """A⁰ = −E⃗·r⃗, giving E⃗ = −∇A⁰."""
    e = _vector(electric, "E")
    return potential_field(-(e[0] * X + e[1] * Y + e[2] * Z), 0, 0, 0, backend, label="A_E")


def coulomb(charge: float, backend: Backend = Backend.ANALYTIC,
            exclusion_radius: float = COULOMB_EXCLUSION_RADIUS) -> AnalyticField:
    """A⁰ = q/r; evaluation inside the exclusion radius raises FieldError."""
    r = sp.sqrt(X ** 2 + Y ** 2 + Z ** 2)

    def check(p: SpacetimePoint) -> None:
        radius = math.sqrt(p[1] ** 2 + p[2] ** 2 + p[3] ** 2)
        if radius < exclusion_radius:
            raise FieldError(f"Coulomb potential evaluated at r={radius:.3g} < {exclusion_radius}")

    return potential_field(charge / r, 0, 0, 0, backend, label="A_coulomb").guarded(check)


def pure_gauge(phase: Expr, backend: Backend = Backend.ANALYTIC) -> AnalyticField:
    """Potential of the gauge transformation ψ → e^{iφ}ψ: A⁰ = ∂ₜφ, A⃗ = −∇φ."""
    phi = parse_scalar(phase)
    return potential_field(sp.diff(phi, T), -sp.diff(phi, X), -sp.diff(phi, Y), -sp.diff(phi, Z),
                           backend, label="A_gauge")


def custom_polynomial(components: Sequence[str], backend: Backend = Backend.ANALYTIC) -> AnalyticField:
    """Potential whose A⁰..A³ are real polynomials in t, x, y, z given as strings.

    Raises:
        FieldError: If a component is not a polynomial in the coordinates.
    """
    exprs = _sympify_components(components)
    for text, expr in zip(components, exprs):
        try:
            poly = sp.Poly(expr, *COORDINATES)
        except sp.PolynomialError as e:
            raise FieldError(f"Component {text!r} is not a polynomial in t, x, y, z") from e
        if any(not c.is_real for c in poly.coeffs()):
            raise FieldError(f"Component {text!r} must have real coefficients")
    return potential_field(*exprs, backend=backend, label="A_poly")


def gaussian_profile(width: float, center: Any = (0.0, 0.0, 0.0), momentum: Any = (0.0, 0.0, 0.0)) -> sp.Expr:
    """exp(−|r⃗−c⃗|²/(2w²) + i p⃗·r⃗) as a sympy expression."""
    if not width > 0:
        raise FieldError(f"Packet width must be positive, got {width}")
    c, p = _vector(center, "center"), _vector(momentum, "momentum")
    r2 = (X - c[0]) ** 2 + (Y - c[1]) ** 2 + (Z - c[2]) ** 2
    return sp.exp(-r2 / (2 * width ** 2) + sp.I * (p[0] * X + p[1] * Y + p[2] * Z))


def profile_times(profile: Expr, amplitude: Biquaternion, backend: Backend = Backend.ANALYTIC,
                  label: str = "ψ") -> AnalyticField:
    """Scalar profile g(t, x⃗) times a constant biquaternion amplitude."""
    g = parse_scalar(profile)
    comps = [g * sp.sympify(c) if c != 0 else sp.Integer(0) for c in amplitude.components()]
    return field_from_components(comps, backend, label)


def gaussian_packet(amplitude: Biquaternion, width: float, center: Any = (0.0, 0.0, 0.0),
                    momentum: Any = (0.0, 0.0, 0.0), backend: Backend = Backend.ANALYTIC) -> AnalyticField:
    """Static spinor profile amplitude·exp(−|r⃗−c⃗|²/(2w²) + i p⃗·r⃗)."""
    return profile_times(gaussian_profile(width, center, momentum), amplitude, backend, label="ψ_packet")


FAMILIES = ("plane_wave_em", "constant_B", "uniform_E", "coulomb", "pure_gauge", "custom_polynomial", "sum")


def family_from_config(config: Mapping[str, Any], backend: Backend = Backend.ANALYTIC) -> AnalyticField:
    """Build a gauge potential from a JSON family description.

    Examples:
        {"family": "plane_wave_em", "polarization": [0, 1, 0], "wave_vector": [1, 0, 0]}
        {"family": "constant_B", "B": [0, 0, 1]}
        {"family": "uniform_E", "E": [0.5, 0, 0]}
        {"family": "coulomb", "charge": 1.0}
        {"family": "pure_gauge", "phase": "t*x"}
        {"family": "custom_polynomial", "components": ["x*y", "0", "t", "z**2"]}
        {"family": "sum", "terms": [{...}, {...}]}

    Raises:
        FieldError: For an unknown family or missing parameters.
    """
    if not isinstance(config, Mapping):
        raise FieldError("Field family must be a JSON object")
    family = config.get("family")
    try:
        if family == "plane_wave_em":
            return plane_wave_em(config["polarization"], config["wave_vector"], backend)
        if family == "constant_B":
            return constant_B(config["B"], backend)
        if family == "uniform_E":
            return uniform_E(config["E"], backend)
        if family == "coulomb":
            return coulomb(float(config["charge"]), backend)
        if family == "pure_gauge":
            return pure_gauge(config["phase"], backend)
        if family == "custom_polynomial":
            return custom_polynomial(config["components"], backend)
        if family == "sum":
            terms = [family_from_config(term, backend) for term in config["terms"]]
            if not terms:
                raise FieldError("A sum of field families needs at least one term")
            total = terms[0]
            for term in terms[1:]:
                total = total + term
            return total
    except KeyError as e:
        raise FieldError(f"Field family {family!r} is missing parameter {e}") from e
    raise FieldError(f"Unknown field family {family!r}; expected one of {', '.join(FAMILIES)}")
