#!/usr/bin/env python3

import sys
import os
import argparse
import difflib
import json
import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core_algebra import (
    UNIT_J, Biquaternion, FieldStrengthValue, FourVector, QuaternionError, euclidean_magnitude,
    max_abs_difference, minkowski_norm, parse_complex, qnorm, vector_from_real,
)
from src.fields import AnalyticField, Backend, family_from_config
from src.field_dynamics import (
    MAXWELL_LABELS, PlaneWaveSpec, classical_sources, current, dirac_residuals, dirac_residuals_split,
    field_strength, landau_spectrum, lorentz_gauge_scalar, maxwell_check, oracle_difference,
    source_from_classical,
)
from src.grassmann import describe_equations, vary_dirac_lagrangian
from src.lorentz import LorentzGenerator, rotate_vector, transform_contravariant, transform_field_strength
from src.spinor import (
    ChiralSpinorPair, apply_C, apply_CPT, apply_P, apply_T, charge_conjugated, cpt_expected, lorentz_transform,
    make_left,
)
from src.verification import PLANE_POINTS, SAMPLE_POINTS, CheckResult, read_golden, run_checks

logger = logging.getLogger(__name__)

LOG_LEVEL = os.environ.get("QWF_LOG_LEVEL", "WARNING")

REPORT_DIGITS = 15

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Exception raised for malformed command-line input."""


def _plain(value: Any) -> Any:
    """Convert report values to JSON types with floats at 15 significant digits."""
    if isinstance(value, CheckResult):
        return _plain(value.to_dict())
    if isinstance(value, Biquaternion):
        return _plain(value.to_json())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [_plain(value.real), _plain(value.imag)]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return float(f"{value:.{REPORT_DIGITS}g}") if math.isfinite(value) else str(value)
    return value


@dataclass
class CommandReport:
    """Everything one command computed, and whether its checks passed."""

    command: str
    inputs: Dict[str, Any]
    backend: Backend = Backend.ANALYTIC
    outputs: Dict[str, Any] = field(default_factory=dict)
    checks: List[CheckResult] = field(default_factory=list)
    wall_time: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_json(self, timing: bool = False) -> str:
        payload = {
            "command": self.command,
            "inputs": self.inputs,
            "backend": self.backend,
            "outputs": self.outputs,
            "checks": self.checks,
            "passed": self.passed,
        }
        if timing and self.wall_time is not None:
            payload["wall_time"] = self.wall_time
        return json.dumps(_plain(payload), sort_keys=True, indent=2, ensure_ascii=False)


def load_json(text: str) -> Any:
    """Parse an inline JSON literal or, with a leading '@', the file it names."""
    if text.startswith("@"):
        path = Path(text[1:])
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise UsageError(f"Cannot read {path}: {e}") from e
    return json.loads(text)


def _point(values: Any) -> tuple:
    arr = np.asarray(values, dtype=float).reshape(-1)
    if arr.shape != (4,):
        raise UsageError(f"Spacetime points have four coordinates, got {values!r}")
    return tuple(float(v) for v in arr)


def _points(args: argparse.Namespace, default: Sequence[tuple]) -> List[tuple]:
    if getattr(args, "points", None):
        values = load_json(args.points)
        if not isinstance(values, list) or not values:
            raise UsageError("--points must be a non-empty JSON list of [t, x, y, z]")
        return [_point(p) for p in values]
    return list(default)


def _tolerance(args: argparse.Namespace, default: float) -> float:
    return default if args.tol is None else args.tol


def _common_inputs(args: argparse.Namespace) -> Dict[str, Any]:
    return {"tol": args.tol, "seed": args.seed, "backend": args.backend}


def _spinor_pair(data: Any) -> ChiralSpinorPair:
    return ChiralSpinorPair.from_json(data)


# Lorentz transformations

def _transform(command: str, target: Dict[str, Any], generator: LorentzGenerator,
               args: argparse.Namespace) -> CommandReport:
    tol = _tolerance(args, 1e-10)
    report = CommandReport(command, {"target": target, "generator": generator.to_json(), **_common_inputs(args)})
    if not isinstance(target, dict) or len(target) != 1:
        raise UsageError("Target must be an object with one of fourvector, vector, spinor, field")
    (kind, value), = target.items()

    if kind == "fourvector":
        v = FourVector.from_components(tuple(value))
        image = transform_contravariant(v, generator)
        before, after = minkowski_norm(v), minkowski_norm(image)
        report.outputs = {"fourvector": image.components(), "minkowski_norm": after.real}
        report.checks.append(CheckResult("minkowski_norm_preserved", abs(after - before),
                                         tol * max(1.0, abs(before))))
    elif kind == "vector":
        if command != "rotate":
            raise UsageError("Plain 3-vectors can only be rotated; boost a fourvector instead")
        angle = float(np.linalg.norm(generator.kappa))
        u = vector_from_real(value)
        axis = tuple(k / angle for k in generator.kappa) if angle > 0 else (0.0, 0.0, 1.0)
        image = rotate_vector(u, axis, angle)
        report.outputs = {"vector": [image.x.real, image.y.real, image.z.real]}
        report.checks.append(CheckResult("length_preserved",
                                         abs(euclidean_magnitude(image) - euclidean_magnitude(u)), tol))
    elif kind == "spinor":
        pair = _spinor_pair(value)
        image = lorentz_transform(pair, generator)
        expected = transform_contravariant(current(pair), generator)
        gap = max_abs_difference(current(image).base, expected.base)
        report.outputs = {"spinor": image.to_json(), "current": current(image).components()}
        report.checks.append(CheckResult("current_covariance", gap,
                                         tol * max(1.0, euclidean_magnitude(expected.base))))
        if command == "rotate":
            axis = generator.kappa if any(generator.kappa) else (0.0, 0.0, 1.0)
            turned = lorentz_transform(pair, LorentzGenerator.rotation(axis, 2 * math.pi))
            flip = max(max_abs_difference(turned.psi_left, -pair.psi_left),
                       max_abs_difference(turned.psi_right, -pair.psi_right))
            report.outputs["sign_after_full_turn"] = -1 if flip <= tol else 1
            report.checks.append(CheckResult("spinor_sign_flip", flip, tol))
    elif kind == "field":
        phi = FieldStrengthValue.from_fields(value.get("B", (0, 0, 0)), value.get("E", (0, 0, 0)))
        image = transform_field_strength(phi, generator)
        before, after = qnorm(phi.base), qnorm(image.base)
        report.outputs = {"B": image.magnetic, "E": image.electric, "invariant": after}
        report.checks.append(CheckResult("field_invariant_preserved", abs(after - before),
                                         tol * max(1.0, abs(before))))
    else:
        raise UsageError(f"Unknown target kind {kind!r}; expected fourvector, vector, spinor or field")
    return report


def cmd_boost(args: argparse.Namespace) -> CommandReport:
    """Apply a general Lorentz transformation to a four-vector, spinor pair or field strength."""
    return _transform("boost", load_json(args.target), LorentzGenerator.from_json(load_json(args.generator)), args)


def cmd_rotate(args: argparse.Namespace) -> CommandReport:
    """Rotate; the generator must not carry a rapidity."""
    generator = LorentzGenerator.from_json(load_json(args.generator))
    if any(generator.lambda_):
        raise UsageError("rotate takes a pure rotation generator; use boost for nonzero lambda")
    return _transform("rotate", load_json(args.target), generator, args)


# Dirac

def _plane_wave_from_spec(spec: Dict[str, Any]) -> PlaneWaveSpec:
    mass = float(spec["mass"])
    if "amplitudes" in spec:
        amplitudes = _spinor_pair(spec["amplitudes"])
        momentum = tuple(float(c) for c in spec.get("momentum", (0.0, 0.0, 0.0)))
        energy = spec.get("energy")
        if energy is None:
            energy = math.sqrt(mass * mass + sum(c * c for c in momentum))
        return PlaneWaveSpec(mass, float(energy), momentum, amplitudes)
    psi = spec.get("psiL", {"xi": [1.0, 0.0], "chi": [0.0, 0.0]})
    psi_left = make_left(parse_complex(psi.get("xi", 0.0)), parse_complex(psi.get("chi", 0.0)))
    if spec.get("rest", False):
        return PlaneWaveSpec.rest(mass, psi_left)
    return PlaneWaveSpec.solve(mass, spec["momentum"], psi_left, energy=spec.get("energy"))


def cmd_dirac(args: argparse.Namespace) -> CommandReport:
    """Evaluate the quaternionic Dirac residuals of a plane wave and compare with the Weyl-matrix form."""
    spec = load_json(args.spec)
    if not isinstance(spec, dict):
        raise UsageError("Dirac spec must be a JSON object")
    backend = Backend(args.backend)
    wave = _plane_wave_from_spec(spec)
    potential = (family_from_config(spec["potential"], backend) if "potential" in spec
                 else AnalyticField.constant(Biquaternion(), "A=0"))
    points = _points(args, SAMPLE_POINTS)
    tol = _tolerance(args, 1e-10)
    fields_ = wave.fields()

    residual, split_gap, oracle_gap = 0.0, 0.0, 0.0
    worst_left, worst_right = Biquaternion(), Biquaternion()
    for x in points:
        left, right = dirac_residuals(fields_, potential, wave.mass, x)
        split_left, split_right = dirac_residuals_split(fields_, potential, wave.mass, x)
        size = max(euclidean_magnitude(left), euclidean_magnitude(right))
        if size >= residual:
            residual, worst_left, worst_right = size, left, right
        split_gap = max(split_gap, max_abs_difference(left, split_left), max_abs_difference(right, split_right))
        oracle_gap = max(oracle_gap, oracle_difference(fields_, potential, wave.mass, x))

    report = CommandReport("dirac", {"spec": spec, "points": points, **_common_inputs(args)}, backend)
    report.outputs = {
        "energy": wave.energy,
        "momentum": wave.momentum,
        "mass": wave.mass,
        "on_shell": wave.is_on_shell(),
        "amplitudes": wave.amplitudes.to_json(),
        "left_residual": worst_left,
        "right_residual": worst_right,
        "residual_norm": residual,
        "oracle_difference": oracle_gap,
    }
    report.checks = [
        CheckResult("quaternionic_residual", residual, tol, backend.value),
        CheckResult("weyl_oracle_agreement", oracle_gap, tol, backend.value),
        CheckResult("split_form_agreement", split_gap, tol, backend.value),
    ]
    if spec.get("rest", False):
        gap = max_abs_difference(wave.amplitudes.psi_left, wave.amplitudes.psi_right * UNIT_J)
        report.outputs["note"] = "rest frame: ψ_L = ψ_Rĵ"
        report.checks.append(CheckResult("rest_frame_relation", gap, tol, backend.value))
    return report


# Pauli

GAUSSIAN_UNITS = {
    "hamiltonian": "H = (1/2m)(p − eA⃗/c)² − (eħ/2mc) σ⃗·B⃗ + eA⁰",
    "splitting": "ΔE = eħB/(mc)",
    "note": "numbers are reported with ħ = e = c = 1",
}


def cmd_pauli(args: argparse.Namespace) -> CommandReport:
    """Lowest Landau level of both spin states against the 2×2 Pauli Hamiltonian."""
    backend = Backend(args.backend)
    if not args.mass > 0:
        raise UsageError(f"--mass must be positive, got {args.mass}")
    extent = args.extent
    coords = np.linspace(-extent, extent, args.grid) if args.grid > 1 else np.array([0.3 * extent])
    points = [(0.0, float(x), float(y), 0.0) for x in coords for y in coords] if args.grid > 1 else list(PLANE_POINTS)
    spectrum = landau_spectrum(args.B, args.mass, points, backend)
    tol = _tolerance(args, 1e-10 if backend is Backend.ANALYTIC else 1e-6)

    report = CommandReport("pauli", {"B": args.B, "mass": args.mass, "grid": args.grid, "extent": extent,
                                     **_common_inputs(args)}, backend)
    report.outputs = {
        "energies": {"spin_down": spectrum.energies[0], "spin_up": spectrum.energies[1]},
        "oracle_eigenvalues": spectrum.oracle,
        "splitting": spectrum.splitting,
        "kinetic_level": abs(args.B) / (2 * args.mass),
    }
    if args.gaussian_units:
        report.outputs["gaussian_units"] = GAUSSIAN_UNITS
    report.checks = [
        CheckResult("spectrum_matches_oracle", spectrum.max_deviation, tol, backend.value),
        CheckResult("landau_eigen_residual", max(spectrum.eigen_residuals), tol, backend.value),
    ]
    return report


# Maxwell

def cmd_maxwell(args: argparse.Namespace) -> CommandReport:
    """Eight real Maxwell residuals of a potential family, in vacuum or against its classical source."""
    config = load_json(args.family)
    backend = Backend(args.backend)
    potential = family_from_config(config, backend)
    points = _points(args, SAMPLE_POINTS)
    source = None
    if args.with_source:
        def classical(x: Sequence[float]) -> Biquaternion:
            rho, current_density = classical_sources(potential, x)
            return source_from_classical(rho, current_density)

        source = AnalyticField.from_function(classical, label="j_classical")
    check = maxwell_check(potential, points, source)
    tol = _tolerance(args, 1e-12 if backend is Backend.ANALYTIC else 1e-8)
    phi = field_strength(potential, points[0])

    report = CommandReport("maxwell", {"family": config, "points": points, "with_source": args.with_source,
                                       **_common_inputs(args)}, backend)
    report.outputs = {
        "residuals": {label: check.components[label] for label in MAXWELL_LABELS},
        "B": phi.magnetic,
        "E": phi.electric,
        "lorentz_gauge_scalar": lorentz_gauge_scalar(potential, points[0]),
    }
    report.checks = [
        CheckResult(f"maxwell_{label}", check.components[label], tol, backend.value) for label in MAXWELL_LABELS
    ]
    return report


# Discrete symmetries

def cmd_cpt(args: argparse.Namespace) -> CommandReport:
    """Apply C, P, T and their composition to a Dirac spinor, optionally as a plane wave."""
    data = load_json(args.spinor)
    if not isinstance(data, dict):
        raise UsageError("Spinor input must be a JSON object")
    if "spinor" in data:
        psi_0 = _spinor_pair(data["spinor"]).dirac()
        wave = AnalyticField.plane_wave(psi_0, float(data.get("energy", 0.0)), data.get("momentum", (0.0, 0.0, 0.0)))
        psi_d: Callable = wave
    else:
        psi_d = _spinor_pair(data).dirac()
    x = _point(load_json(args.point)) if args.point else (0.3, -0.2, 0.5, 0.1)
    tol = _tolerance(args, 1e-14)

    composed, expected = apply_CPT(psi_d, x), cpt_expected(psi_d, x)
    value = psi_d(x) if callable(psi_d) else psi_d
    double_c = charge_conjugated(charge_conjugated(psi_d))(x)

    report = CommandReport("cpt", {"spinor": data, "point": x, **_common_inputs(args)})
    report.outputs = {
        "C": apply_C(psi_d, x),
        "P": apply_P(psi_d, x),
        "T": apply_T(psi_d, x),
        "CPT": composed,
        "expected": expected,
        "verdict": "C∘P∘T ψ(x) = ψ(−x)·k̂",
    }
    report.checks = [
        CheckResult("cpt_composition", max_abs_difference(composed, expected), tol),
        CheckResult("charge_conjugation_square", max_abs_difference(double_c, value), tol),
    ]
    return report


# Variational derivation

def cmd_vary(args: argparse.Namespace) -> CommandReport:
    """Re-derive the chiral Dirac equations from the Lagrangian and diff them against the golden file."""
    lines = describe_equations(vary_dirac_lagrangian(args.mass))
    golden = ([line for line in Path(args.golden).read_text(encoding="utf-8").splitlines() if line.strip()]
              if args.golden else read_golden())
    diff = list(difflib.unified_diff(golden, lines, "golden", "derived", lineterm=""))
    mismatches = sum(1 for a, b in zip(lines, golden) if a != b) + abs(len(lines) - len(golden))

    report = CommandReport("vary", {"mass": args.mass, "golden": args.golden, **_common_inputs(args)})
    report.outputs = {"equations": lines, "golden": golden, "diff": diff}
    report.checks = [CheckResult("matches_golden", float(mismatches), 0.0)]
    return report


def cmd_selftest(args: argparse.Namespace) -> CommandReport:
    """Run the named acceptance checks at their own tolerances; --tol does not apply here."""
    results = run_checks(args.seed, Backend(args.backend), args.only or None)
    report = CommandReport("selftest", {"only": args.only, **_common_inputs(args)}, Backend(args.backend))
    report.outputs = {"passed": sum(r.passed for r in results), "total": len(results)}
    report.checks = results
    return report


def print_usage_summary() -> None:
    """Print a concise summary of available commands."""
    print("""
qwf - biquaternion relativistic quantum mechanics checks

Available commands:
  boost     - Lorentz-transform a four-vector, spinor pair or field strength
  rotate    - Rotate a vector or spinor pair (reports the sign after 2π)
  dirac     - Dirac residuals of a plane wave, with the Weyl-matrix oracle
  pauli     - Landau-level spin splitting against the 2×2 Pauli Hamiltonian
  maxwell   - Eight real Maxwell residuals of a potential family
  cpt       - C, P, T and their composition on a Dirac spinor
  vary      - Derive the Dirac equations from the Lagrangian
  selftest  - Run every acceptance check

Examples:
  qwf rotate '{"vector": [1, 0, 0]}' '{"kappa": [0, 0, 1.5707963267948966]}'
  qwf dirac '{"mass": 1, "momentum": [0.3, 0, 0.4]}'
  qwf maxwell '{"family": "plane_wave_em", "polarization": [0, 1, 0], "wave_vector": [1, 0, 0]}' --backend fd
  qwf selftest --seed 7

JSON arguments may be given inline or as @path/to/file.json.
Use 'qwf <command> --help' for detailed help on a specific command.
""")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Verification toolkit for biquaternion relativistic quantum mechanics',
        epilog='Run with a specific command or use --help for more information'
    )
    subparsers = parser.add_subparsers(dest='command', help='Command to run')

    # Common arguments
    common_parser = argparse.ArgumentParser(add_help=False)
    common_parser.add_argument('--backend', choices=[b.value for b in Backend], default=Backend.ANALYTIC.value,
                               help='Derivative backend for field checks (default: analytic)')
    common_parser.add_argument('--tol', type=float, default=None,
                               help='Override the tolerance of every check in this command')
    common_parser.add_argument('--seed', type=int, default=0,
                               help='Seed for randomized checks (default: 0)')
    common_parser.add_argument('--gaussian-units', action='store_true',
                               help='Also show Gaussian-unit forms (display only)')
    common_parser.add_argument('--timing', action='store_true',
                               help='Include wall time in the report')

    for name, func, help_text in (('boost', cmd_boost, 'Apply a Lorentz transformation'),
                                  ('rotate', cmd_rotate, 'Apply a rotation')):
        sub = subparsers.add_parser(name, parents=[common_parser], help=help_text)
        sub.add_argument('target', help='JSON object: {"fourvector"|"vector"|"spinor"|"field": ...}')
        sub.add_argument('generator', help='JSON generator {"kappa": [x, y, z], "lambda": [x, y, z]}')
        sub.set_defaults(func=func)

    dirac_parser = subparsers.add_parser('dirac', parents=[common_parser], help='Check a Dirac plane wave')
    dirac_parser.add_argument('spec', help='JSON plane-wave spec with mass, momentum, energy, psiL or amplitudes')
    dirac_parser.add_argument('--points', help='JSON list of [t, x, y, z] evaluation points')
    dirac_parser.set_defaults(func=cmd_dirac)

    pauli_parser = subparsers.add_parser('pauli', parents=[common_parser], help='Landau-level Pauli spectrum')
    pauli_parser.add_argument('--B', type=float, default=1.0, help='Magnetic field along k̂ (default: 1.0)')
    pauli_parser.add_argument('--mass', type=float, default=1.0, help='Mass (default: 1.0)')
    pauli_parser.add_argument('--grid', type=int, default=3, help='Sample points per axis in the xy-plane (default: 3)')
    pauli_parser.add_argument('--extent', type=float, default=0.8, help='Half-width of the sample grid (default: 0.8)')
    pauli_parser.set_defaults(func=cmd_pauli)

    maxwell_parser = subparsers.add_parser('maxwell', parents=[common_parser], help='Maxwell residual table')
    maxwell_parser.add_argument('family', help='JSON field family, e.g. {"family": "constant_B", "B": [0, 0, 1]}')
    maxwell_parser.add_argument('--points', help='JSON list of [t, x, y, z] evaluation points')
    maxwell_parser.add_argument('--with-source', action='store_true',
                                help='Compare against the classical charge and current instead of vacuum')
    maxwell_parser.set_defaults(func=cmd_maxwell)

    cpt_parser = subparsers.add_parser('cpt', parents=[common_parser], help='Discrete symmetries')
    cpt_parser.add_argument('spinor', help='JSON spinor literal, or {"spinor": ..., "energy": E, "momentum": [...]}')
    cpt_parser.add_argument('--point', help='JSON point [t, x, y, z]')
    cpt_parser.set_defaults(func=cmd_cpt)

    vary_parser = subparsers.add_parser('vary', parents=[common_parser], help='Derive the Dirac equations')
    vary_parser.add_argument('--mass', type=float, default=1.0, help='Mass (default: 1.0)')
    vary_parser.add_argument('--golden', help='Golden file to compare against (default: packaged)')
    vary_parser.set_defaults(func=cmd_vary)

    selftest_parser = subparsers.add_parser('selftest', parents=[common_parser], help='Run all acceptance checks')
    selftest_parser.add_argument('--only', nargs='*', default=[], help='Run only the named checks')
    selftest_parser.set_defaults(func=cmd_selftest)

    return parser


def main() -> int:
    """Main entry point for the program.

    Returns:
        int: Exit code (0 when every check passed, 1 on a failed check, 2 on bad input)
    """
    logging.basicConfig(level=getattr(logging, LOG_LEVEL.upper(), logging.WARNING),
                        format='%(asctime)s - %(levelname)s - %(message)s')
    parser = build_parser()
    args = parser.parse_args()

    if not args.command:
        print_usage_summary()
        return EXIT_OK

    start = time.perf_counter()
    try:
        report = args.func(args)
    except (UsageError, QuaternionError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        print("\nOperation cancelled by user.", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.exception("Unexpected failure in %s", args.command)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    report.wall_time = time.perf_counter() - start

    print(report.to_json(timing=args.timing))
    return EXIT_OK if report.passed else EXIT_FAILED


if __name__ == '__main__':
    sys.exit(main())
