"""Command-line frontend.

Subcommands: reduce, check, coeff, edges, generate, plethysm, hull, verify,
equiv, witness.  Output is line-structured JSON records with a stable
schema version; reals use 17 significant digits, rationals print as p/q.
Exit codes: 0 success/satisfied, 1 violation/failure found, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

SCHEMA = "qmarginal/1"


class UsageError(Exception):
    pass


def emit(record: dict, stream=None):
    out = dict(record)
    out["schema"] = SCHEMA
    print(json.dumps(out, default=_json_default), file=stream or sys.stdout)


def _json_default(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"cannot serialize {type(value)}")


def _fmt_real(x: float) -> float:
    return float(f"{float(x):.17g}")


def _parse_number(text: str):
    text = text.strip()
    if "/" in text:
        return Fraction(text)
    if "." in text or "e" in text or "E" in text:
        return float(text)
    return int(text)


def _parse_vector(text: str):
    return tuple(_parse_number(t) for t in text.split(",") if t.strip())


def _parse_perm(text: str):
    return tuple(int(t) for t in text.split(",") if t.strip())


def _sorted_spectrum(values, trace=None, warn_slot=None):
    from .spectra import spectrum

    vals = list(values)
    resorted = sorted(vals, key=float, reverse=True) != [float(v) for v in vals]
    if resorted and warn_slot is not None:
        emit({"record": "warning", "slot": warn_slot,
              "message": "input spectrum auto-sorted nonincreasing"})
    return spectrum(vals, trace)


class Parser(argparse.ArgumentParser):
    def error(self, message):
        emit({"record": "error", "kind": "usage", "message": message},
             stream=sys.stderr)
        raise SystemExit(2)


def build_parser() -> Parser:
    p = Parser(prog="qmarginal", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("reduce", help="state file -> marginal spectra")
    sp.add_argument("--state", required=True, help="JSON state file, or - for stdin")
    sp.add_argument("--keep", default=None,
                    help="comma-separated factor indices for one marginal")

    sp = sub.add_parser("check", help="spectra + family -> report")
    sp.add_argument("--family", required=True)
    sp.add_argument("--spectrum", default=None,
                    help="one-body spectrum for fermionic families")
    sp.add_argument("--trace", default=None, help="declared trace of --spectrum")
    sp.add_argument("--site", action="append", default=[],
                    help="site marginal spectrum (repeatable)")
    sp.add_argument("--joint", default=None, help="joint/state spectrum")
    sp.add_argument("--bundle", default=None,
                    help="read reduce-format records from file, or - for stdin")
    sp.add_argument("--tolerance", type=float, default=1e-10)

    sp = sub.add_parser("chsh", help="check correlation data")
    sp.add_argument("--correlations", required=True,
                    help="c11,c12,c21,c22 in [-1,1]")

    sp = sub.add_parser("coeff", help="structure coefficient for (u, v, w)")
    sp.add_argument("--u", default=None)
    sp.add_argument("--v", required=True)
    sp.add_argument("--w", required=True)
    sp.add_argument("--a", required=True, help="test spectrum, rationals allowed")
    sp.add_argument("--b", default=None, help="second test spectrum (two-sided)")
    sp.add_argument("--fermi-n", type=int, default=None,
                    help="subset size for the fermionic coefficient")

    sp = sub.add_parser("edges", help="extremal edges of a system")
    sp.add_argument("--system", required=True)
    sp.add_argument("--dim-cap", type=int, default=7)

    sp = sub.add_parser("generate", help="inequalities from an extremal edge")
    sp.add_argument("--system", required=True)
    sp.add_argument("--edge", required=True, help="per-site values or coordinates")
    sp.add_argument("--raw", action="store_true",
                    help="skip the in-group redundancy filter")

    sp = sub.add_parser("plethysm", help="decompose S^m(wedge^n C^r)")
    sp.add_argument("-r", type=int, required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-m", type=int, required=True)

    sp = sub.add_parser("hull", help="inner approximation of occurring spectra")
    sp.add_argument("-r", type=int, required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-M", type=int, required=True)

    sp = sub.add_parser("verify", help="Monte-Carlo campaign")
    sp.add_argument("--family", required=True)
    sp.add_argument("--system", required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--nu", default=None, help="fixed state spectrum")
    sp.add_argument("--tolerance", type=float, default=1e-10)
    sp.add_argument("--jobs", type=int,
                    default=int(os.environ.get("QMARGINAL_JOBS", "1")))

    sp = sub.add_parser("equiv", help="cross-family equivalence campaign")
    sp.add_argument("--family-a", required=True)
    sp.add_argument("--family-b", required=True)
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)

    sp = sub.add_parser("witness", help="search for a state with target marginals")
    sp.add_argument("--system", required=True)
    sp.add_argument("--targets", required=True,
                    help="semicolon-separated site spectra, e.g. '0.7,0.3;0.6,0.4'")
    sp.add_argument("--restarts", type=int, default=20)
    sp.add_argument("--iters", type=int, default=200)
    sp.add_argument("--seed", type=int, required=True)

    sp = sub.add_parser("isospec", help="isospectrality campaign")
    sp.add_argument("--formats", required=True, help="e.g. '2x2;2x3;3x3'")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)

    sp = sub.add_parser("families", help="list families applicable to a system")
    sp.add_argument("--system", required=True)
    return p


# ---------------------------------------------------------------------------
# State files

def load_state(path: str) -> dict:
    data = sys.stdin.read() if path == "-" else open(path).read()
    state = json.loads(data)
    if state.get("format_version") != 1:
        raise UsageError("unsupported state file format_version")
    return state


def _complex_array(entries):
    return np.array([complex(re, im) for re, im in entries])


def state_to_objects(state: dict):
    from .fermion import FermionState, fermion_basis
    from .systems import parse_system
    from .tensor import DensityMatrix, PureState

    system = parse_system(state["system"])
    kind = state.get("kind", "pure")
    if system.kind == "fermion":
        basis = fermion_basis(system.r, system.n)
        if kind == "pure":
            amps = _complex_array(state["amplitudes"])
            return system, FermionState(basis, amps)
        mat = np.array(
            [[complex(re, im) for re, im in row] for row in state["matrix"]]
        )
        return system, mat
    dims = system.dims
    if kind == "pure":
        amps = _complex_array(state["amplitudes"])
        return system, PureState(amps, dims)
    mat = np.array([[complex(re, im) for re, im in row] for row in state["matrix"]])
    return system, DensityMatrix(mat, dims, trace=1.0)


def cmd_reduce(args) -> int:
    from .fermion import FermionState, one_rdm, one_rdm_mixed
    from .tensor import DensityMatrix, PureState, partial_trace, pure_marginal, spectrum_of

    system, obj = state_to_objects(load_state(args.state))
    records = []
    if isinstance(obj, FermionState):
        lam = spectrum_of(one_rdm(obj))
        records.append(("one_body", lam))
        basis = obj.basis
        joint = [1.0] + [0.0] * (basis.dim - 1)
        records.append(("joint", _sorted_spectrum(joint, 1.0)))
    elif system.kind == "fermion":
        from .fermion import fermion_basis

        basis = fermion_basis(system.r, system.n)
        lam = spectrum_of(one_rdm_mixed(obj, basis))
        records.append(("one_body", lam))
        records.append(("joint", spectrum_of(obj)))
    elif isinstance(obj, PureState):
        if args.keep:
            keep = [int(k) for k in args.keep.split(",")]
            records.append((f"keep{keep}", spectrum_of(pure_marginal(obj, keep))))
        else:
            for i in range(len(obj.dims)):
                records.append((f"site{i}", spectrum_of(pure_marginal(obj, [i]))))
            size = math.prod(obj.dims)
            records.append(
                ("joint", _sorted_spectrum([1.0] + [0.0] * (size - 1), 1.0))
            )
    else:
        if args.keep:
            keep = [int(k) for k in args.keep.split(",")]
            records.append((f"keep{keep}", spectrum_of(partial_trace(obj, keep))))
        else:
            for i in range(len(obj.dims)):
                records.append((f"site{i}", spectrum_of(partial_trace(obj, [i]))))
            records.append(("joint", spectrum_of(obj)))
    for slot, spec in records:
        emit({
            "record": "spectrum",
            "slot": slot,
            "values": [_fmt_real(v) for v in spec.as_floats()],
            "trace": _fmt_real(spec.trace_tag),
        })
    return 0


# ---------------------------------------------------------------------------
# Checks

def _bundle_from_args(args):
    from .catalog import SpectraBundle

    sites = []
    joint = None
    one_body = None
    if args.bundle:
        text = sys.stdin.read() if args.bundle == "-" else open(args.bundle).read()
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if rec.get("record") != "spectrum":
                continue
            spec = _sorted_spectrum(rec["values"], rec.get("trace"), rec["slot"])
            if rec["slot"].startswith("site"):
                sites.append(spec)
            elif rec["slot"] == "joint":
                joint = spec
            elif rec["slot"] == "one_body":
                one_body = spec
    if args.spectrum:
        vals = _parse_vector(args.spectrum)
        trace = _parse_number(args.trace) if args.trace else None
        one_body = _sorted_spectrum(vals, trace, "one_body")
    for text in args.site:
        sites.append(_sorted_spectrum(_parse_vector(text), None, "site"))
    if args.joint:
        joint = _sorted_spectrum(_parse_vector(args.joint), None, "joint")
    return SpectraBundle(sites=tuple(sites), joint=joint, one_body=one_body)


def _emit_check_report(report) -> int:
    emit({
        "record": "check_report",
        "family": report.family_id,
        "satisfied": report.satisfied,
        "worst_slack": _fmt_real(report.worst_slack),
        "violated": list(report.violated),
        "n_inequalities": report.n_inequalities,
        "tolerance": report.tolerance,
        "notes": list(report.notes),
    })
    return 0 if report.satisfied else 1


def cmd_check(args) -> int:
    from .catalog import check_family

    bundle = _bundle_from_args(args)
    report = check_family(args.family, bundle, args.tolerance)
    return _emit_check_report(report)


def cmd_chsh(args) -> int:
    from .catalog import check_chsh

    corr = _parse_vector(args.correlations)
    return _emit_check_report(check_chsh([float(c) for c in corr]))


def cmd_coeff(args) -> int:
    from .schubert import coeff_fermi, coeff_two, fermi_sum_order, sum_order

    a = _parse_vector(args.a)
    v = _parse_perm(args.v)
    w = _parse_perm(args.w)
    if args.b is not None:
        if args.u is None:
            raise UsageError("two-sided coefficient needs --u")
        u = _parse_perm(args.u)
        order = sum_order(a, _parse_vector(args.b))
        value = coeff_two(u, v, w, order)
    else:
        if args.fermi_n is None:
            raise UsageError("fermionic coefficient needs --fermi-n")
        order = fermi_sum_order(a, args.fermi_n)
        value = coeff_fermi(v, w, order)
    emit({"record": "coefficient", "value": value})
    return 0


def cmd_edges(args) -> int:
    from .chambers import cubicle_arrangement, enumerate_chambers, extremal_edges

    arrangement = cubicle_arrangement(args.system)
    chambers = enumerate_chambers(arrangement, dim_cap=args.dim_cap)
    edges = extremal_edges(chambers)
    for ray in edges:
        spectra = arrangement.chart.to_test_spectra(ray)
        emit({
            "record": "edge",
            "coordinates": list(ray),
            "test_spectra": [[str(Fraction(x)) for x in s] for s in spectra],
        })
    emit({
        "record": "edge_summary",
        "system": args.system,
        "hyperplanes": len(arrangement.hyperplanes),
        "chambers": len(chambers),
        "count": len(edges),
    })
    return 0


def _record_to_json(rec):
    return {
        "terms": {slot: [str(Fraction(c)) for c in coeffs] for slot, coeffs in rec.terms},
        "relation": rec.relation,
        "bound": str(Fraction(rec.bound)),
        "label": rec.label,
    }


def cmd_generate(args) -> int:
    from .schubert import generate_inequality, generate_qubit_array, identity_perm
    from .systems import parse_system

    system = parse_system(args.system)
    edge = _parse_vector(args.edge)
    if system.kind == "qubits":
        if len(edge) != len(system.dims):
            raise UsageError(
                f"edge needs {len(system.dims)} per-site values, got {len(edge)}"
            )
        group = generate_qubit_array(edge, irredundant=not args.raw)
        records = group.records
    elif system.kind == "tensor" and len(system.dims) == 2:
        # edge given in arrangement coordinates; emits the basic inequality
        from .chambers import cubicle_arrangement

        m, n = system.dims
        arr = cubicle_arrangement(args.system)
        if len(edge) != arr.dim:
            raise UsageError(f"edge needs {arr.dim} coordinates, got {len(edge)}")
        a, b = arr.chart.to_test_spectra(edge)
        records = (
            generate_inequality(a, b, identity_perm(m), identity_perm(n),
                                identity_perm(m * n)),
        )
    else:
        raise UsageError("generate supports qubit arrays and two-sided tensor formats")
    for rec in records:
        emit({"record": "inequality", **_record_to_json(rec)})
    emit({"record": "generate_summary", "system": args.system,
          "edge": [str(Fraction(x)) for x in edge], "count": len(records)})
    return 0


def cmd_plethysm(args) -> int:
    from .plethysm import decompose, weyl_dimension

    dec = decompose(args.r, args.n, args.m)
    for weight, mult in dec.multiplicities:
        emit({
            "record": "component",
            "diagram": list(weight),
            "multiplicity": mult,
            "dimension": weyl_dimension(weight, args.r),
        })
    emit({
        "record": "plethysm_summary",
        "r": args.r, "n": args.n, "m": args.m,
        "components": len(dec.multiplicities),
        "total_dimension": dec.total_dimension,
    })
    return 0


def cmd_hull(args) -> int:
    from .plethysm import inner_approximation

    inner = inner_approximation(args.r, args.n, args.M)
    for (normal, rhs), matches in zip(inner.hull.facets, inner.facet_matches):
        emit({
            "record": "facet",
            "normal": [str(Fraction(c)) for c in normal],
            "bound": str(Fraction(rhs)),
            "catalog_matches": list(matches),
        })
    for normal, rhs in inner.hull.equalities:
        emit({
            "record": "hull_equality",
            "normal": [str(Fraction(c)) for c in normal],
            "value": str(Fraction(rhs)),
        })
    emit({
        "record": "hull_summary",
        "r": args.r, "n": args.n, "M": args.M,
        "points": len(inner.points),
        "dim": inner.hull.dim,
        "facets": len(inner.hull.facets),
        "facets_matching_catalog": sum(1 for m in inner.facet_matches if m),
    })
    return 0


def cmd_verify(args) -> int:
    from .harness import mc_verify

    nu = None
    if args.nu:
        nu = _sorted_spectrum([float(x) for x in _parse_vector(args.nu)], 1.0, "nu")
    report = mc_verify(
        args.family, args.system, args.trials, args.seed,
        tolerance=args.tolerance, nu=nu, jobs=args.jobs,
    )
    emit({
        "record": "campaign",
        "family": report.family_id,
        "system": report.system,
        "trials": report.trials,
        "seed": report.seed,
        "min_slack": _fmt_real(report.min_slack),
        "violations": report.violations,
        "wall_time": _fmt_real(report.wall_time),
        "tolerance": report.tolerance,
    })
    return 0 if report.violations == 0 else 1


def cmd_equiv(args) -> int:
    from .catalog import check_equivalence

    report = check_equivalence(args.family_a, args.family_b, args.samples, args.seed)
    emit({
        "record": "equivalence",
        "family_a": report.family_a,
        "family_b": report.family_b,
        "samples": report.samples,
        "disagreements": report.disagreements,
        "first_disagreement": report.first_disagreement,
    })
    return 0 if report.disagreements == 0 else 1


def cmd_witness(args) -> int:
    from .harness import witness_search

    targets = [
        [float(x) for x in _parse_vector(part)]
        for part in args.targets.split(";")
        if part.strip()
    ]
    report = witness_search(
        targets, args.system, restarts=args.restarts, iters=args.iters,
        seed=args.seed,
    )
    record = {
        "record": "witness",
        "success": report.success,
        "residual": _fmt_real(report.residual),
        "targets": [list(t) for t in report.targets],
        "restarts": report.restarts,
    }
    if report.success and report.amplitudes is not None:
        record["state"] = {
            "format_version": 1,
            "kind": "pure",
            "system": args.system.split(":pure")[0].split(":mixed")[0],
            "amplitudes": [[_fmt_real(re), _fmt_real(im)]
                           for re, im in report.amplitudes],
        }
    emit(record)
    return 0 if report.success else 1


def cmd_isospec(args) -> int:
    from .harness import isospectrality_campaign

    formats = [f for f in args.formats.split(";") if f.strip()]
    report = isospectrality_campaign(formats, args.trials, args.seed)
    emit({
        "record": "isospectrality",
        "formats": list(report.formats),
        "trials": report.trials,
        "seed": report.seed,
        "max_discrepancy": _fmt_real(report.max_discrepancy),
        "wall_time": _fmt_real(report.wall_time),
    })
    return 0 if report.max_discrepancy < 1e-10 else 1


def cmd_families(args) -> int:
    from .catalog import applicable_families

    families = applicable_families(args.system)
    emit({"record": "families", "system": args.system, "families": list(families)})
    return 0


COMMANDS = {
    "reduce": cmd_reduce,
    "check": cmd_check,
    "chsh": cmd_chsh,
    "coeff": cmd_coeff,
    "edges": cmd_edges,
    "generate": cmd_generate,
    "plethysm": cmd_plethysm,
    "hull": cmd_hull,
    "verify": cmd_verify,
    "equiv": cmd_equiv,
    "witness": cmd_witness,
    "isospec": cmd_isospec,
    "families": cmd_families,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except UsageError as exc:
        emit({"record": "error", "kind": "usage", "message": str(exc)},
             stream=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        emit({"record": "error", "kind": type(exc).__name__, "message": str(exc)},
             stream=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
