"""Command-line front end.

Units at the command line follow the usual lab conventions (mW, um, MHz,
GHz/THz, us) and are converted to SI on parsing. Data goes to stdout,
diagnostics to stderr. Exit codes: 0 success, 1 usage error, 2 I/O or
data error.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import budget_single as b1
from . import budget_two as b2
from . import recoil, scattering
from .species import IonSpecies, SpeciesFormatError, default_registry, load_registry_file

REGISTRY_ENV = "IONSCATTER_SPECIES_FILE"
NA = "N.A."

TWO_PI = 2.0 * math.pi
MW, UM, US = 1e-3, 1e-6, 1e-6
MHZ, KHZ, GHZ, THZ = TWO_PI * 1e6, TWO_PI * 1e3, TWO_PI * 1e9, TWO_PI * 1e12


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# -- output -------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return NA
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(value)
    return format(float(value), ".6g")


def emit(records: list[dict], fmt: str, out=None) -> None:
    """Write records as CSV or as an aligned text table."""
    out = out or sys.stdout
    if not records:
        return
    keys = list(records[0])
    rows = [[_fmt(r[k]) for k in keys] for r in records]
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(keys)
        writer.writerows(rows)
        return
    widths = [max(len(k), *(len(row[i]) for row in rows)) for i, k in enumerate(keys)]
    out.write("  ".join(k.rjust(w) for k, w in zip(keys, widths)) + "\n")
    for row in rows:
        out.write("  ".join(v.rjust(w) for v, w in zip(row, widths)) + "\n")


# -- helpers ------------------------------------------------------------------


def _registry(path: Optional[str]) -> dict[str, IonSpecies]:
    path = path or os.environ.get(REGISTRY_ENV)
    try:
        return load_registry_file(path) if path else default_registry()
    except OSError as exc:
        raise DataError(f"cannot read species file: {exc}") from exc
    except SpeciesFormatError as exc:
        raise DataError(f"invalid species file: {exc}") from exc


def _select(registry: dict[str, IonSpecies], name: Optional[str]) -> list[IonSpecies]:
    if name is None or name == "all":
        return list(registry.values())
    if name not in registry:
        raise DataError(f"unknown species {name!r}; known: {', '.join(registry)}")
    return [registry[name]]


def _positive(args, *names):
    for name in names:
        value = getattr(args, name)
        if value is not None and not value > 0:
            raise UsageError(f"--{name.replace('_', '-')} must be positive, got {value}")


def _d_or_na(species: IonSpecies, fn):
    return fn() if species.has_d_levels else None


# -- commands -----------------------------------------------------------------


def cmd_species(args) -> list[dict]:
    records = []
    for s in _select(_registry(args.registry), args.species):
        records.append(
            {
                "ion": s.name,
                "I": str(s.nuclear_spin),
                "gamma/2pi (MHz)": s.gamma / MHZ,
                "omega0/2pi (GHz)": s.omega0 / GHZ,
                "omega_f/2pi (THz)": s.omega_f / THZ,
                "lambda_1/2 (nm)": s.lambda_half * 1e9,
                "lambda_3/2 (nm)": s.lambda_3half * 1e9,
                "1/f": None if s.branching_f is None else 1.0 / s.branching_f,
            }
        )
    return records


def cmd_single(args) -> list[dict]:
    _positive(args, "power_mw", "waist_um", "rabi_mhz", "error", "reference_error")
    rabi = args.rabi_mhz * MHZ
    waist = args.waist_um * UM
    target = args.error if args.error is not None else args.reference_error
    if not 0 < target < 1:
        raise UsageError("the target error must lie in (0, 1)")

    records = []
    for s in _select(_registry(args.registry), args.species):
        if args.power_mw is not None:
            spec = b1.SingleQubitGateSpec(rabi, scattering.BeamConfig(args.power_mw * MW, waist))
            eps_s = b1.epsilon_s_single(s, spec)
        else:
            eps_s = target
        p0 = b1.power_for_error_single(s, rabi, waist, target)
        roots = b1.detunings_for_raman_error(s, target)
        if not args.all_branches:
            roots = [r for r in roots if r.branch == b1.RED_OUTSIDE]
        for root in roots:
            at = root.detuning if args.detuning_ghz is None else args.detuning_ghz * GHZ
            records.append(
                {
                    "ion": s.name,
                    "eps_S": eps_s,
                    "P0 (mW)": p0 / MW,
                    "branch": root.branch,
                    "Delta0/2pi (GHz)": root.detuning / GHZ,
                    "eps_D/eps_S": _d_or_na(s, lambda: b1.epsilon_ratio_d_over_s(s, at)),
                    "eps_Dinf": _d_or_na(s, lambda: b1.epsilon_d_asymptotic_single(s)),
                }
            )
    return records


def cmd_two(args) -> list[dict]:
    _positive(args, "power_mw", "waist_um", "gate_time_us", "trap_mhz", "error", "reference_error", "eta")
    if args.circles < 1:
        raise UsageError("--circles must be at least 1")
    if args.eta is not None and not args.eta < 1:
        raise UsageError("--eta must lie in (0, 1)")
    target = args.error if args.error is not None else args.reference_error
    if not 0 < target < 1:
        raise UsageError("the target error must lie in (0, 1)")
    selected = _select(_registry(args.registry), args.species)
    if args.eta is not None and len(selected) > 1:
        raise UsageError("--eta applies to a single species; choose one with --species")

    K = args.circles
    spec = b2.TwoQubitGateSpec(
        gate_time=args.gate_time_us * US,
        trap_freq=args.trap_mhz * MHZ,
        waist=args.waist_um * UM,
        circles=K,
        power=None if args.power_mw is None else args.power_mw * MW,
    )
    records = []
    for s in selected:
        eta = args.eta if args.eta is not None else b2.lamb_dicke(s, spec.trap_freq).eta
        eps_s = b2.epsilon_s_gate(s, spec, eta) if spec.power is not None else target
        p0 = b2.power_for_error_gate(s, spec, target, eta)
        roots = b2.detunings_for_raman_error_gate(s, eta, K, target)
        d0 = b1.red_outside_detuning(roots)
        records.append(
            {
                "ion": s.name,
                "eta": eta,
                "eps_S": eps_s,
                "P0 (mW)": p0 / MW,
                "Delta0/2pi (THz)": d0 / THZ,
                "eps_D/eps_S": _d_or_na(s, lambda: b1.epsilon_ratio_d_over_s(s, d0)),
                "eps_Dinf": _d_or_na(s, lambda: b2.epsilon_d_asymptotic_gate(s, eta, K)),
                "eps_R/eps_S": b2.epsilon_r_over_s(s, d0, eta, K),
                "eps_Rinf": b2.epsilon_r_asymptotic(s, spec.trap_freq, K, eta),
                "eps_delta": b2.epsilon_delta(s, d0, eta, K),
            }
        )
    return records


SWEEP_PROBABILITIES = {
    "total": scattering.prob_total_pi,
    "raman": scattering.prob_raman_pi,
    "rayleigh": scattering.prob_rayleigh_pi,
}


def cmd_sweep(args) -> list[dict]:
    if args.points < 1:
        raise UsageError("--points must be at least 1")
    registry = _registry(args.registry)
    name = args.species or next(iter(registry))
    (s,) = _select(registry, name)

    if args.quantity in SWEEP_PROBABILITIES:
        if args.detuning_range is None:
            raise UsageError(f"--quantity {args.quantity} needs --detuning-range")
        lo, hi = args.detuning_range
        if not lo < hi:
            raise UsageError("empty detuning range")
        x = np.linspace(lo, hi, args.points)
        tol = scattering.POLE_TOLERANCE
        keep = (np.abs(x) >= tol) & (np.abs(x - 1.0) >= tol)
        if not keep.all():
            print(f"note: dropped {int((~keep).sum())} point(s) at a resonance", file=sys.stderr)
        fn = SWEEP_PROBABILITIES[args.quantity]
        values = fn(s, x[keep] * s.omega_f) * s.omega_f / s.gamma
        return [{"Delta/omega_f": xi, f"P_{args.quantity} (gamma/omega_f)": v} for xi, v in zip(x[keep], values)]

    if args.error_range is None:
        raise UsageError(f"--quantity {args.quantity} needs --error-range")
    lo, hi = args.error_range
    if not 0 < lo < hi < 1:
        raise UsageError("error range must satisfy 0 < lo < hi < 1")
    errors = np.geomspace(lo, hi, args.points)
    if args.quantity == "power-single":
        _positive(args, "waist_um", "rabi_mhz")
        if args.waist_um is None or args.rabi_mhz is None:
            raise UsageError("power-single needs --waist-um and --rabi-mhz")
        power = [b1.power_for_error_single(s, args.rabi_mhz * MHZ, args.waist_um * UM, e) for e in errors]
    else:
        _positive(args, "waist_um", "gate_time_us", "trap_mhz", "eta")
        if None in (args.waist_um, args.gate_time_us, args.trap_mhz):
            raise UsageError("power-two needs --waist-um, --gate-time-us and --trap-mhz")
        spec = b2.TwoQubitGateSpec(args.gate_time_us * US, args.trap_mhz * MHZ, args.waist_um * UM, args.circles)
        power = [b2.power_for_error_gate(s, spec, e, args.eta) for e in errors]
    return [{"error": e, "power (mW)": p / MW} for e, p in zip(errors, power)]


def cmd_mc(args) -> list[dict]:
    if args.samples < 1000:
        raise UsageError("--samples must be at least 1000")
    _positive(args, "trap_mhz", "delta_khz", "eta", "chunks", "workers", "directions")
    if args.circles < 1:
        raise UsageError("--circles must be at least 1")
    trap = args.trap_mhz * MHZ
    if args.eta is not None:
        eta, ion = args.eta, "-"
    else:
        (s,) = _select(_registry(args.registry), args.species)
        eta, ion = b2.lamb_dicke(s, trap).eta, s.name
    try:
        config = recoil.TrajectoryConfig(
            circles=args.circles, delta=args.delta_khz * KHZ, trap_freq=trap, eta=eta, gate_phase=args.phi_l
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    res = recoil.mc_rayleigh_error(config, args.samples, args.seed, n_chunks=args.chunks, workers=args.workers)
    predicted = b2.recoil_factor(eta, args.circles)
    f_mix, f_deph = recoil.dephasing_equivalence(config, args.directions)
    return [
        {
            "ion": ion,
            "eta": eta,
            "K": args.circles,
            "samples": res.n_samples,
            "error_per_scatter": res.error_per_scatter,
            "stderr": res.stderr,
            "<|beta|^2>": res.beta_sq_mean,
            "5eta^2/12": 5.0 * eta**2 / 12.0,
            "closed_form": predicted,
            "mc/closed_form": res.error_per_scatter / predicted,
            "F_mixture": f_mix,
            "F_dephasing": f_deph,
        }
    ]


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ionscatter", description="Photon-scattering error budgets for trapped-ion gates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help, fmt="table"):
        p = sub.add_parser(name, help=help)
        p.add_argument("--registry", help=f"species CSV file (default: ${REGISTRY_ENV} or the bundled table)")
        p.add_argument("--format", choices=("table", "csv"), default=fmt)
        return p

    p = command("species", "list atomic constants")
    p.add_argument("--species", help="species name (default: all)")
    p.set_defaults(func=cmd_species)

    p = command("single", "single-qubit pi-pulse budget")
    p.add_argument("--species", default="all")
    free = p.add_mutually_exclusive_group(required=True)
    free.add_argument("--power-mw", type=float, help="power per Raman beam; eps_S is computed")
    free.add_argument("--error", type=float, help="target eps_S; power is computed")
    p.add_argument("--waist-um", type=float, required=True)
    p.add_argument("--rabi-mhz", type=float, required=True, help="|Omega_R|/2pi")
    p.add_argument("--reference-error", type=float, default=1e-4,
                   help="eps_S at which P0 and Delta0 are reported when --power-mw is given")
    p.add_argument("--detuning-ghz", type=float, help="evaluate eps_D/eps_S here instead of at Delta0")
    p.add_argument("--all-branches", action="store_true", help="report all detuning solutions")
    p.set_defaults(func=cmd_single)

    p = command("two", "two-qubit phase-gate budget")
    p.add_argument("--species", default="all")
    free = p.add_mutually_exclusive_group(required=True)
    free.add_argument("--power-mw", type=float, help="power in each of the four beams")
    free.add_argument("--error", type=float, help="target eps_S")
    p.add_argument("--waist-um", type=float, required=True)
    p.add_argument("--gate-time-us", type=float, required=True)
    p.add_argument("--trap-mhz", type=float, required=True, help="omega_trap/2pi")
    p.add_argument("--circles", type=int, default=1)
    p.add_argument("--eta", type=float, help="override the computed Lamb-Dicke parameter")
    p.add_argument("--reference-error", type=float, default=1e-4)
    p.set_defaults(func=cmd_two)

    p = command("sweep", "curve data as CSV", fmt="csv")
    p.add_argument("--species")
    p.add_argument("--quantity", choices=("total", "raman", "rayleigh", "power-single", "power-two"), required=True)
    p.add_argument("--detuning-range", type=float, nargs=2, metavar=("LO", "HI"), help="in units of omega_f")
    p.add_argument("--error-range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--waist-um", type=float)
    p.add_argument("--rabi-mhz", type=float)
    p.add_argument("--gate-time-us", type=float)
    p.add_argument("--trap-mhz", type=float)
    p.add_argument("--circles", type=int, default=1)
    p.add_argument("--eta", type=float)
    p.set_defaults(func=cmd_sweep)

    p = command("mc", "Monte Carlo Rayleigh-recoil error")
    who = p.add_mutually_exclusive_group(required=True)
    who.add_argument("--species")
    who.add_argument("--eta", type=float)
    p.add_argument("--trap-mhz", type=float, default=5.0)
    p.add_argument("--delta-khz", type=float, default=50.0)
    p.add_argument("--circles", type=int, default=1)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--phi-l", type=float, default=0.0, help="gate phase Phi_L (rad)")
    p.add_argument("--chunks", type=int, default=16)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--directions", type=int, default=1000, help="quadrature directions for the dephasing-equivalence check")
    p.set_defaults(func=cmd_mc)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        records = args.func(args)
    except UsageError as exc:
        print(f"ionscatter: error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"ionscatter: {exc}", file=sys.stderr)
        return 2
    emit(records, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
