"""
Quaternionic differentiation.

Four first-order operators act on biquaternion-valued functions of a
biquaternion variable q = q⁰ + q¹î + q²ĵ + q³k̂:

    ∂  = Σ e_μ ∂_μ        ∂̃ = Σ ẽ_μ ∂_μ
    ∂* = Σ e_μ ∂̄_μ        ∂† = Σ ẽ_μ ∂̄_μ

with e = (1, î, ĵ, k̂). For an unconstrained (complexified) variable ∂_μ and
∂̄_μ are the holomorphic and anti-holomorphic Wirtinger partials. For a
vector-constrained variable q = t + i(xî + yĵ + zk̂) the coordinates are real
and the units become (1, iî, iĵ, ik̂), which makes ∂* coincide with ∂̃ and ∂†
with ∂.

The operators act from the left by default; acting from the right puts the
units after the partial derivative.
"""

import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from src.core_algebra import (
    ALGEBRA_TOL, ONE, UNITS, ZERO, Biquaternion, FourVector, QuaternionError,
    conj_complex, conj_herm, conj_quat, format_biquaternion, product,
)

logger = logging.getLogger(__name__)

# Central-difference step for first derivatives
FD_STEP = float(os.environ.get("QWF_FD_STEP", "1e-4"))

# Largest |Im f(q0)| accepted as "real-valued" by the extremum rule
REALITY_TOL = 1e-10


class CalculusError(QuaternionError):
    """Exception raised for invalid differentiation input or non-finite values."""


class MonomialError(CalculusError):
    """Exception raised for malformed quaternion monomials."""


class DerivativeKind(str, Enum):
    D = "d"
    D_TILDE = "d_tilde"
    D_STAR = "d_star"
    D_DAGGER = "d_dagger"


class Constraint(str, Enum):
    UNCONSTRAINED = "unconstrained"
    VECTOR = "vector"


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class SlotKind(str, Enum):
    Q = "q"
    Q_TILDE = "q_tilde"

    def swapped(self) -> "SlotKind":
        return SlotKind.Q_TILDE if self is SlotKind.Q else SlotKind.Q


class _SlotRule(str, Enum):
    # how Σ w_μ P ∂_μ(slot) resolves: −2·P̃ ("tilde"), 4·P₀ ("scalar"), or 0
    TILDE = "tilde"
    SCALAR = "scalar"
    ZERO = "zero"


_UNCONSTRAINED_RULES = {
    (DerivativeKind.D, SlotKind.Q): _SlotRule.TILDE,
    (DerivativeKind.D, SlotKind.Q_TILDE): _SlotRule.SCALAR,
    (DerivativeKind.D_TILDE, SlotKind.Q): _SlotRule.SCALAR,
    (DerivativeKind.D_TILDE, SlotKind.Q_TILDE): _SlotRule.TILDE,
    (DerivativeKind.D_STAR, SlotKind.Q): _SlotRule.ZERO,
    (DerivativeKind.D_STAR, SlotKind.Q_TILDE): _SlotRule.ZERO,
    (DerivativeKind.D_DAGGER, SlotKind.Q): _SlotRule.ZERO,
    (DerivativeKind.D_DAGGER, SlotKind.Q_TILDE): _SlotRule.ZERO,
}

# Vector-constrained rows are interchanged; ∂* acts as ∂̃ and ∂† as ∂
_VECTOR_RULES = {
    (DerivativeKind.D, SlotKind.Q): _SlotRule.SCALAR,
    (DerivativeKind.D, SlotKind.Q_TILDE): _SlotRule.TILDE,
    (DerivativeKind.D_TILDE, SlotKind.Q): _SlotRule.TILDE,
    (DerivativeKind.D_TILDE, SlotKind.Q_TILDE): _SlotRule.SCALAR,
    (DerivativeKind.D_STAR, SlotKind.Q): _SlotRule.TILDE,
    (DerivativeKind.D_STAR, SlotKind.Q_TILDE): _SlotRule.SCALAR,
    (DerivativeKind.D_DAGGER, SlotKind.Q): _SlotRule.SCALAR,
    (DerivativeKind.D_DAGGER, SlotKind.Q_TILDE): _SlotRule.TILDE,
}


def _rule(kind: DerivativeKind, slot: SlotKind, constraint: Constraint) -> _SlotRule:
    table = _VECTOR_RULES if Constraint(constraint) is Constraint.VECTOR else _UNCONSTRAINED_RULES
    return table[(DerivativeKind(kind), SlotKind(slot))]


def _resolve(rule: _SlotRule, a: Biquaternion) -> Biquaternion:
    if rule is _SlotRule.TILDE:
        return -2 * conj_quat(a)
    if rule is _SlotRule.SCALAR:
        return Biquaternion(4 * a.w)
    return ZERO


def identity_table(kind: DerivativeKind, slot: SlotKind, a: Optional[Biquaternion] = None) -> Biquaternion:
    """Closed form of ∂(aq) or ∂(aq̃) for an unconstrained variable.

    Args:
        kind: Which of ∂, ∂̃, ∂*, ∂†.
        slot: Whether the variable enters as q or q̃.
        a: Constant left factor; None stands for 1.

    Returns:
        Biquaternion: −2ã, 4a₀ or 0.
    """
    return _resolve(_rule(kind, slot, Constraint.UNCONSTRAINED), ONE if a is None else a)


def vector_identity_table(kind: DerivativeKind, slot: SlotKind, a: Optional[Biquaternion] = None) -> Biquaternion:
    """Closed form of ∂(aq) or ∂(aq̃) for a vector-constrained variable."""
    return _resolve(_rule(kind, slot, Constraint.VECTOR), ONE if a is None else a)


Factor = Union[Biquaternion, SlotKind]


@dataclass(frozen=True)
class QuaternionMonomial:
    """coefficient · c₀ s₁ c₁ s₂ ... sₙ cₙ with constants cᵢ and slots sᵢ ∈ {q, q̃}.

    Canonical form keeps exactly one constant between consecutive slots and
    at both ends.
    """

    constants: Tuple[Biquaternion, ...]
    slots: Tuple[SlotKind, ...] = ()
    coefficient: complex = 1.0

    def __post_init__(self) -> None:
        constants = tuple(self.constants)
        slots = tuple(SlotKind(s) for s in self.slots)
        if len(constants) != len(slots) + 1:
            raise MonomialError(
                f"A monomial with {len(slots)} slots needs {len(slots) + 1} constants, got {len(constants)}"
            )
        if not all(isinstance(c, Biquaternion) for c in constants):
            raise MonomialError("Monomial constants must be Biquaternion values")
        object.__setattr__(self, "constants", constants)
        object.__setattr__(self, "slots", slots)
        object.__setattr__(self, "coefficient", complex(self.coefficient))

    @classmethod
    def from_factors(cls, factors: Iterable[Factor], coefficient: complex = 1.0) -> "QuaternionMonomial":
        """Build from an ordered factor list, merging adjacent constants."""
        constants: List[Biquaternion] = [ONE]
        slots: List[SlotKind] = []
        for factor in factors:
            if isinstance(factor, Biquaternion):
                constants[-1] = constants[-1] * factor
            elif isinstance(factor, (SlotKind, str)):
                try:
                    slots.append(SlotKind(factor))
                except ValueError as e:
                    raise MonomialError(f"Unknown slot kind {factor!r}") from e
                constants.append(ONE)
            else:
                raise MonomialError(f"Unsupported monomial factor {factor!r}")
        return cls(tuple(constants), tuple(slots), coefficient)

    @classmethod
    def constant(cls, value: Biquaternion) -> "QuaternionMonomial":
        return cls((value,))

    @property
    def degree(self) -> int:
        return len(self.slots)

    def evaluate(self, q: Union[Biquaternion, FourVector]) -> Biquaternion:
        value = q.base if isinstance(q, FourVector) else q
        q_tilde = conj_quat(value)
        factors: List[Biquaternion] = [self.constants[0]]
        for slot, constant in zip(self.slots, self.constants[1:]):
            factors.append(value if slot is SlotKind.Q else q_tilde)
            factors.append(constant)
        return product(*factors) * self.coefficient

    def __call__(self, q: Union[Biquaternion, FourVector]) -> Biquaternion:
        return self.evaluate(q)

    def conj_reverse(self) -> "QuaternionMonomial":
        """Quaternionic conjugate: reversed factors, tilded constants, q ↔ q̃."""
        return QuaternionMonomial(
            tuple(conj_quat(c) for c in reversed(self.constants)),
            tuple(s.swapped() for s in reversed(self.slots)),
            self.coefficient,
        )

    def __mul__(self, other: Union["QuaternionMonomial", complex, float, int]) -> "QuaternionMonomial":
        if isinstance(other, QuaternionMonomial):
            joint = self.constants[-1] * other.constants[0]
            return QuaternionMonomial(
                self.constants[:-1] + (joint,) + other.constants[1:],
                self.slots + other.slots,
                self.coefficient * other.coefficient,
            )
        return QuaternionMonomial(self.constants, self.slots, self.coefficient * complex(other))

    def __rmul__(self, other: Union[complex, float, int]) -> "QuaternionMonomial":
        return QuaternionMonomial(self.constants, self.slots, self.coefficient * complex(other))

    def prefix(self, slot_index: int) -> "QuaternionMonomial":
        """Factors to the left of the given slot."""
        return QuaternionMonomial(self.constants[:slot_index + 1], self.slots[:slot_index])

    def suffix(self, slot_index: int) -> "QuaternionMonomial":
        """Factors to the right of the given slot."""
        return QuaternionMonomial(self.constants[slot_index + 1:], self.slots[slot_index + 1:])

    def __str__(self) -> str:
        parts = []
        for i, constant in enumerate(self.constants):
            if constant != ONE or self.degree == 0:
                parts.append(f"({format_biquaternion(constant)})")
            if i < self.degree:
                parts.append("q" if self.slots[i] is SlotKind.Q else "q̃")
        text = "".join(parts) or "1"
        return text if self.coefficient == 1 else f"({self.coefficient:.15g})·{text}"


@dataclass(frozen=True)
class MonomialSum:
    """Formal sum of monomials; evaluation and differentiation are linear."""

    terms: Tuple[QuaternionMonomial, ...] = field(default_factory=tuple)

    def __add__(self, other: Union["MonomialSum", QuaternionMonomial]) -> "MonomialSum":
        extra = (other,) if isinstance(other, QuaternionMonomial) else other.terms
        return MonomialSum(self.terms + extra)

    def evaluate(self, q: Union[Biquaternion, FourVector]) -> Biquaternion:
        total = ZERO
        for term in self.terms:
            total = total + term.evaluate(q)
        return total

    def __call__(self, q: Union[Biquaternion, FourVector]) -> Biquaternion:
        return self.evaluate(q)

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        return " + ".join(str(t) for t in self.terms) if self.terms else "0"


def _slot_terms(rule: _SlotRule, prefix: QuaternionMonomial, suffix: QuaternionMonomial,
                side: Side) -> List[QuaternionMonomial]:
    # left action resolves against the prefix, right action against the suffix
    if rule is _SlotRule.ZERO:
        return []
    if side is Side.LEFT:
        if rule is _SlotRule.TILDE:
            return [-2 * (prefix.conj_reverse() * suffix)]
        return [2 * (prefix * suffix), 2 * (prefix.conj_reverse() * suffix)]
    if rule is _SlotRule.TILDE:
        return [-2 * (prefix * suffix.conj_reverse())]
    return [2 * (prefix * suffix), 2 * (prefix * suffix.conj_reverse())]


def differentiate_monomial(mono: QuaternionMonomial, kind: DerivativeKind,
                           constraint: Constraint = Constraint.UNCONSTRAINED,
                           side: Side = Side.LEFT) -> MonomialSum:
    """Leibniz expansion of a derivative acting on a monomial.

    Each slot is differentiated in turn. For a left-acting derivative the
    units wrap around everything to the left of the slot, so the slot resolves
    to −2·P̃·S or 4·P₀·S = 2·P·S + 2·P̃·S where P is the prefix and S the
    suffix; a right-acting derivative mirrors this on the suffix.

    Args:
        mono: The monomial.
        kind: Which operator to apply.
        constraint: Unconstrained or vector-constrained variable.
        side: Side the operator acts from.

    Returns:
        MonomialSum: The derivative; empty for constants.

    Raises:
        MonomialError: If mono is not a QuaternionMonomial.
    """
    if not isinstance(mono, QuaternionMonomial):
        raise MonomialError(f"Expected a QuaternionMonomial, got {type(mono).__name__}")
    side = Side(side)
    terms: List[QuaternionMonomial] = []
    for index, slot in enumerate(mono.slots):
        rule = _rule(kind, slot, constraint)
        for term in _slot_terms(rule, mono.prefix(index), mono.suffix(index), side):
            terms.append(mono.coefficient * term)
    return MonomialSum(tuple(terms))


def differentiate_sum(expr: MonomialSum, kind: DerivativeKind,
                      constraint: Constraint = Constraint.UNCONSTRAINED,
                      side: Side = Side.LEFT) -> MonomialSum:
    result = MonomialSum()
    for term in expr.terms:
        result = result + differentiate_monomial(term, kind, constraint, side)
    return result


def _checked(value: Biquaternion, where: str) -> Biquaternion:
    if not isinstance(value, Biquaternion):
        raise CalculusError(f"Function must return a Biquaternion, got {type(value).__name__} at {where}")
    if not value.is_finite():
        raise CalculusError(f"Non-finite function value at {where}: {value}")
    return value


def _central_difference(f: Callable[[Biquaternion], Biquaternion], q0: Biquaternion,
                        direction: Biquaternion, h: float, richardson: bool = False) -> Biquaternion:
    def step(scale: int) -> Biquaternion:
        plus = _checked(f(q0 + direction * (scale * h)), f"{q0} + {scale}h·{direction}")
        minus = _checked(f(q0 - direction * (scale * h)), f"{q0} - {scale}h·{direction}")
        return plus - minus

    if richardson:
        # (4·D(h) − D(2h))/3 on the central differences
        return (step(1) * 8 - step(2)) / (12 * h)
    return step(1) / (2 * h)


def _weights(kind: DerivativeKind, constraint: Constraint) -> Tuple[Tuple[Biquaternion, ...], bool]:
    """Units multiplying the partials, and whether the partials are anti-holomorphic."""
    kind = DerivativeKind(kind)
    if Constraint(constraint) is Constraint.VECTOR:
        units = (ONE,) + tuple(1j * e for e in UNITS[1:])
        return {
            DerivativeKind.D: units,
            DerivativeKind.D_TILDE: tuple(conj_quat(u) for u in units),
            DerivativeKind.D_STAR: tuple(conj_complex(u) for u in units),
            DerivativeKind.D_DAGGER: tuple(conj_herm(u) for u in units),
        }[kind], False
    tilded = tuple(conj_quat(e) for e in UNITS)
    return {
        DerivativeKind.D: (UNITS, False),
        DerivativeKind.D_TILDE: (tilded, False),
        DerivativeKind.D_STAR: (UNITS, True),
        DerivativeKind.D_DAGGER: (tilded, True),
    }[kind]


def _combine(weights: Sequence[Biquaternion], partials: Sequence[Biquaternion], side: Side) -> Biquaternion:
    total = ZERO
    for weight, partial in zip(weights, partials):
        total = total + (weight * partial if side is Side.LEFT else partial * weight)
    return total


def fd_derivative(f: Callable[[Biquaternion], Biquaternion], q0: Union[Biquaternion, FourVector],
                  kind: DerivativeKind, h: float = FD_STEP,
                  constraint: Constraint = Constraint.UNCONSTRAINED,
                  side: Side = Side.LEFT, richardson: bool = False) -> Biquaternion:
    """Central-difference evaluation of ∂, ∂̃, ∂* or ∂† at q0.

    Unconstrained variables get Wirtinger partials ½(D_re ∓ iD_im) from
    perturbations of the real and imaginary part of each component. A
    vector-constrained q0 is perturbed along its four real coordinates and
    f receives hermitean biquaternions.

    Args:
        f: Function of a biquaternion.
        q0: Evaluation point.
        kind: Operator to apply.
        h: Step size.
        constraint: Unconstrained or vector-constrained variable.
        side: Side the units multiply from.
        richardson: Extrapolate the h and 2h differences to an O(h⁴) stencil.

    Returns:
        Biquaternion: Derivative with O(h²) error, O(h⁴) with richardson.

    Raises:
        CalculusError: On a non-positive step, a non-hermitean q0 in the
            vector context, or non-finite function values.
    """
    if not h > 0:
        raise CalculusError(f"Step size must be positive, got {h}")
    side = Side(side)
    weights, anti = _weights(kind, constraint)
    if Constraint(constraint) is Constraint.VECTOR:
        try:
            point = q0 if isinstance(q0, FourVector) else FourVector(q0)
        except QuaternionError as e:
            raise CalculusError(f"Vector-constrained derivative needs a four-vector point: {e}") from e
        directions = (ONE,) + tuple(1j * e for e in UNITS[1:])
        partials = [_central_difference(f, point.base, d, h, richardson) for d in directions]
    else:
        base = q0.base if isinstance(q0, FourVector) else q0
        partials = []
        for unit in UNITS:
            d_re = _central_difference(f, base, unit, h, richardson)
            d_im = _central_difference(f, base, 1j * unit, h, richardson)
            partials.append((d_re + 1j * d_im) / 2 if anti else (d_re - 1j * d_im) / 2)
    result = _combine(weights, partials, side)
    logger.debug("fd %s at %s -> %s", DerivativeKind(kind).value, q0, result)
    return result


def _real_value(value: Union[Biquaternion, complex, float], q: Biquaternion) -> float:
    if isinstance(value, Biquaternion):
        if value.vector().euclidean_magnitude() > REALITY_TOL:
            raise CalculusError(f"Function is not real-valued at {q}: {value}")
        value = value.w
    value = complex(value)
    if abs(value.imag) > REALITY_TOL:
        raise CalculusError(f"Function is not real-valued at {q}: imaginary part {value.imag}")
    return value.real


def extremum_residual(f: Callable[[Biquaternion], Union[Biquaternion, complex, float]],
                      q0: Biquaternion, h: float = FD_STEP) -> Biquaternion:
    """Return ∂f(q0) for a real-valued f of an ordinary quaternion.

    A vanishing result certifies a stationary point. For f(q) = ‖q − c‖² the
    residual is 2(q0 − c).

    Raises:
        CalculusError: If q0 has complex coefficients or f(q0) is not real.
    """
    if any(abs(c.imag) > ALGEBRA_TOL for c in q0.components()):
        raise CalculusError(f"Extremum rule needs a real quaternion, got {q0}")
    _real_value(f(q0), q0)

    def g(q: Biquaternion) -> Biquaternion:
        return Biquaternion(_real_value(f(q), q))

    partials = [_central_difference(g, q0, unit, h) for unit in UNITS]
    return _combine(UNITS, partials, Side.LEFT)
