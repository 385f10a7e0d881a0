"""Command line front end.

Subcommands::

    parse             echo the canonical form of a network file
    siphons           minimal siphons (list, count, histogram, brute force)
    facets            facets of the cone of conserved quantities
    vertices          vertex supports of the invariant polytope of --c0
    relevance         per-siphon relevance verdicts (global / --c0 / --omega)
    face-dim          dimension of the face x_Z = 0 for --c0 and --siphon
    analyze           full report (text or JSON)
    ode               mass-action right-hand side for rates from --kappa
    invariance-check  exact face-invariance check for --siphon
    export-cas        Macaulay2 script for external cross-validation

Exit codes: 0 success, 1 usage, 2 parse error, 3 budget exceeded,
4 internal invariant violation.

Environment: ``SIPHON_BUDGET_MS`` default time budget for enumerations,
``SIPHON_THREADS`` worker count for per-siphon analysis.

Exact values only: rationals are written like ``3`` or ``1/10``; decimal
points are rejected.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from crnsiphon import __version__
from crnsiphon.casexport import FLAVORS, export_cas_script
from crnsiphon.dynamics import MassActionSystem, build_rhs, check_face_invariance
from crnsiphon.geometry import InvariantPolytope, NotPointedError, build_cone, face_dimension
from crnsiphon.linalg import conservation_basis
from crnsiphon.network import ParseError, ReactionNetwork, canonical_text, connectivity, parse_network
from crnsiphon.relevance import (
    AnalysisReport,
    RouteDisagreementError,
    analyze,
    is_c0_relevant,
    is_relevant,
    omega_relevant,
)
from crnsiphon.siphons import (
    Budget,
    BudgetExceededError,
    brute_force_minimal_siphons,
    complex_support_hypergraph,
    minimal_siphons,
    transversal_counts,
)

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(message)


def _parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if "." in text:
        raise UsageError(f"decimal values are not accepted, write a fraction: {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational {text!r}: {exc}") from None


def _parse_c0(net: ReactionNetwork, args) -> tuple[Fraction, ...] | None:
    if getattr(args, "assign", None):
        values: dict[str, Fraction] = {}
        for chunk in args.assign:
            for piece in chunk.split(","):
                if "=" not in piece:
                    raise UsageError(f"--assign expects name=value, got {piece!r}")
                name, raw = piece.split("=", 1)
                name = name.strip()
                if name not in net.species.index:
                    raise UsageError(f"unknown species {name!r} in --assign")
                if name in values:
                    raise UsageError(f"species {name!r} assigned twice")
                values[name] = _parse_fraction(raw)
        missing = [n for n in net.species.names if n not in values]
        if missing:
            raise UsageError(f"--assign is missing species: {', '.join(missing)}")
        return tuple(values[n] for n in net.species.names)
    if getattr(args, "c0", None):
        parts = [p for p in args.c0.split(",") if p.strip()]
        if len(parts) != net.num_species:
            raise UsageError(
                f"--c0 needs {net.num_species} values in species order "
                f"({', '.join(net.species.names)}), got {len(parts)}"
            )
        return tuple(_parse_fraction(p) for p in parts)
    return None


def _read_samples(path: str, net: ReactionNetwork) -> list[tuple[Fraction, ...]]:
    samples = []
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p for p in line.split(",") if p.strip()]
            if len(parts) != net.num_species:
                raise UsageError(
                    f"{path}:{line_no}: expected {net.num_species} values, got {len(parts)}"
                )
            samples.append(tuple(_parse_fraction(p) for p in parts))
    if not samples:
        raise UsageError(f"{path}: no sample initial conditions found")
    return samples


def _read_kappa(path: str, net: ReactionNetwork) -> tuple[Fraction, ...]:
    rates: dict[int, Fraction] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise UsageError(f"{path}:{line_no}: expected 'reaction_index rate'")
            try:
                idx = int(parts[0])
            except ValueError:
                raise UsageError(f"{path}:{line_no}: bad reaction index {parts[0]!r}") from None
            if not 0 <= idx < len(net.reactions):
                raise UsageError(f"{path}:{line_no}: reaction index {idx} out of range")
            if idx in rates:
                raise UsageError(f"{path}:{line_no}: reaction {idx} assigned twice")
            rates[idx] = _parse_fraction(parts[1])
    missing = [i for i in range(len(net.reactions)) if i not in rates]
    if missing:
        raise UsageError(f"{path}: missing rates for reactions {missing}")
    return tuple(rates[i] for i in range(len(net.reactions)))


def _read_permutations(path: str, net: ReactionNetwork) -> list[dict[int, int]]:
    perms = []
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            names = line.replace(",", " ").split()
            if sorted(names) != sorted(net.species.names):
                raise UsageError(
                    f"{path}:{line_no}: a permutation must list every species exactly once"
                )
            idx = net.species.index
            perms.append({i: idx[names[i]] for i in range(net.num_species)})
    if not perms:
        raise UsageError(f"{path}: no permutations found")
    return perms


def _parse_siphon(net: ReactionNetwork, text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    members = []
    for name in text.split(","):
        name = name.strip()
        if name not in net.species.index:
            raise UsageError(f"unknown species {name!r}")
        members.append(net.species.index[name])
    return tuple(sorted(set(members)))


def _budget_from(args) -> Budget | None:
    max_ms = getattr(args, "budget_ms", None)
    if max_ms is None:
        env = os.environ.get("SIPHON_BUDGET_MS")
        if env:
            try:
                max_ms = int(env)
            except ValueError:
                raise UsageError(f"SIPHON_BUDGET_MS must be an integer, got {env!r}") from None
    max_results = getattr(args, "max_results", None)
    if max_ms is None and max_results is None:
        return None
    return Budget(max_results=max_results, max_ms=max_ms)


def _load_network(path: str) -> ReactionNetwork:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


def _frac_str(x: Fraction) -> str:
    return str(x)


def _report_to_dict(report: AnalysisReport) -> dict:
    net = report.network
    conn = report.connectivity_info
    cone_dict = {
        "dim": report.cone.dim,
        "pointed": report.cone.pointed,
        "facets": None
        if report.cone.facets is None
        else [
            {
                "members": [net.species.names[i] for i in f.members],
                "complement": [
                    net.species.names[i] for i in f.complement(net.num_species)
                ],
                "normal": [_frac_str(x) for x in f.normal],
            }
            for f in report.cone.facets
        ],
    }
    siphons = []
    for a in report.siphons:
        entry: dict = {
            "members": list(a.verdict.siphon.names(net)),
            "relevant": a.verdict.relevant,
            "route": a.verdict.route,
            "cross_checked": a.verdict.cross_checked,
            "witnesses": {},
        }
        if a.verdict.conservation_law is not None:
            entry["witnesses"]["conservation_law"] = [
                _frac_str(x) for x in a.verdict.conservation_law
            ]
        if a.verdict.certificate is not None:
            entry["witnesses"]["infeasibility_certificate"] = [
                _frac_str(x) for x in a.verdict.certificate
            ]
        if a.facet_verdict is not None and a.facet_verdict.facet is not None:
            entry["witnesses"]["facet_complement"] = [
                net.species.names[i]
                for i in a.facet_verdict.facet.complement(net.num_species)
            ]
        if a.c0_verdict is not None:
            entry["c0_relevant"] = a.c0_verdict.relevant
            if a.c0_verdict.face_point is not None:
                entry["witnesses"]["face_point"] = [
                    _frac_str(x) for x in a.c0_verdict.face_point
                ]
            entry["face_dim"] = a.face_dim
        if a.omega_hits is not None:
            entry["omega_relevant"] = bool(a.omega_hits)
            entry["omega_witness_samples"] = list(a.omega_hits)
        siphons.append(entry)
    result = {
        "schema_version": 1,
        "network": {
            "species": list(net.species.names),
            "complexes": [
                {"exponents": list(c.exponents), "text": c.text(net.species)}
                for c in net.complexes
            ],
            "reactions": [
                {"source": r.source, "target": r.target, "rate_label": r.rate_label}
                for r in net.reactions
            ],
        },
        "connectivity": {
            "strong_components": [list(c) for c in conn.strong_components],
            "linkage_classes": [list(c) for c in conn.linkage_classes],
            "is_strongly_connected": conn.is_strongly_connected,
            "components_strongly_connected": conn.components_strongly_connected,
        },
        "conservation_basis": [
            [_frac_str(x) for x in row] for row in report.conservation.matrix.entries
        ],
        "cone": cone_dict,
        "minimal_siphons": siphons,
        "exhaustive": report.exhaustive,
        "verdicts": {
            "all_non_relevant": report.all_non_relevant,
            "boundary_steady_state_certificate": report.boundary_certificate,
        },
        "notes": list(report.notes),
        "provenance": {
            "tool": "crnsiphon",
            "version": __version__,
        },
        "timing": report.timing_ms,
    }
    if report.c0 is not None:
        result["c0"] = [_frac_str(x) for x in report.c0]
    if report.omega_samples is not None:
        result["omega_samples"] = [
            [_frac_str(x) for x in sm] for sm in report.omega_samples
        ]
    if report.orbits is not None:
        result["orbits"] = [list(o) for o in report.orbits]
    return result


def _report_to_text(report: AnalysisReport) -> str:
    net = report.network
    conn = report.connectivity_info
    lines = [
        f"species ({net.num_species}): {' '.join(net.species.names)}",
        f"complexes: {net.num_complexes}, reactions: {len(net.reactions)}",
        f"strongly connected: {conn.is_strongly_connected} "
        f"(components strongly connected: {conn.components_strongly_connected})",
        f"conservation laws: {report.conservation.dim}",
        f"cone: dim {report.cone.dim}, pointed {report.cone.pointed}",
    ]
    if report.cone.facets:
        for f in report.cone.facets:
            comp = " ".join(net.species.names[i] for i in f.complement(net.num_species))
            lines.append(f"  facet complement: {comp}")
    label = "minimal siphons" if report.exhaustive else "minimal siphons (partial)"
    lines.append(f"{label}: {len(report.siphons)}")
    for a in report.siphons:
        name = " ".join(a.verdict.siphon.names(net))
        flag = "relevant" if a.verdict.relevant else "not relevant"
        extra = ""
        if a.verdict.conservation_law is not None:
            law = " ".join(_frac_str(x) for x in a.verdict.conservation_law)
            extra = f" [conservation law: {law}]"
        if a.c0_verdict is not None:
            extra += f" [c0-relevant: {a.c0_verdict.relevant}"
            if a.face_dim is not None:
                extra += f", face dim {a.face_dim}"
            extra += "]"
        if a.omega_hits is not None:
            extra += f" [sample hits: {list(a.omega_hits)}]"
        lines.append(f"  {{{name}}}: {flag}{extra}")
    lines.append(f"all non-relevant: {report.all_non_relevant}")
    if report.boundary_certificate:
        lines.append(f"certificate: {report.boundary_certificate}")
    if report.orbits is not None:
        sizes = sorted(len(o) for o in report.orbits)
        lines.append(f"orbits under declared symmetry: {len(report.orbits)} (sizes {sizes})")
    for note in report.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def _render_polynomial(terms, names) -> str:
    if not terms:
        return "0"
    pieces = []
    for coeff, expo in terms:
        factors = []
        for i, e in enumerate(expo):
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append(f"{names[i]}^{e}")
        mono = "*".join(factors) if factors else "1"
        if coeff < 0:
            sign, mag = " - ", -coeff
        else:
            sign, mag = " + ", coeff
        body = mono if mag == 1 and factors else f"{_frac_str(mag)}*{mono}"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    text = ("-" if first_sign == " - " else "") + first_body
    for sign, body in pieces[1:]:
        text += sign + body
    return text


def build_arg_parser() -> _Parser:
    parser = _Parser(prog="crnsiphon", description="exact siphon analysis of reaction networks")
    parser.add_argument("--version", action="version", version=f"crnsiphon {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", help="network file (.crn)")
        return p

    add("parse", "echo the canonical network")

    p = add("siphons", "minimal siphons")
    p.add_argument("--count-only", action="store_true", help="print the total only")
    p.add_argument("--histogram", action="store_true", help="print total plus per-size counts")
    p.add_argument("--brute-force", action="store_true", help="use the subset-enumeration oracle")
    p.add_argument("--method", choices=("auto", "search", "transversal"), default="auto")
    p.add_argument("--budget-ms", type=int, default=None)
    p.add_argument("--max-results", type=int, default=None)

    add("facets", "facets of the cone of conserved quantities")

    p = add("vertices", "vertex supports of the invariant polytope")
    p.add_argument("--c0", help="comma-separated rationals in species order")
    p.add_argument("--assign", action="append", help="name=value (repeatable)")

    p = add("relevance", "per-siphon relevance verdicts")
    p.add_argument("--c0", help="initial condition (comma-separated rationals)")
    p.add_argument("--assign", action="append")
    p.add_argument("--omega", help="file of sample initial conditions, one per line")
    p.add_argument("--budget-ms", type=int, default=None)

    p = add("face-dim", "dimension of a face of the invariant polytope")
    p.add_argument("--c0", help="initial condition")
    p.add_argument("--assign", action="append")
    p.add_argument("--siphon", help="comma-separated species names (may be empty)")

    p = add("analyze", "full analysis report")
    p.add_argument("--c0", help="initial condition")
    p.add_argument("--assign", action="append")
    p.add_argument("--omega", help="file of sample initial conditions")
    p.add_argument("--symmetry", help="file of species permutations, one per line")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--budget-ms", type=int, default=None)
    p.add_argument("--timing", action="store_true", help="include wall-clock timings")

    p = add("ode", "mass-action right-hand side")
    p.add_argument("--kappa", required=True, help="file of 'reaction_index rate' lines")

    p = add("invariance-check", "exact face-invariance check for a siphon")
    p.add_argument("--siphon", required=True, help="comma-separated species names")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)

    p = add("export-cas", "Macaulay2 script for cross-validation")
    p.add_argument("--flavor", choices=FLAVORS, default="directed-binomial")
    p.add_argument("--no-boundary", action="store_true", help="skip the saturation block")
    return parser


def _cmd_siphons(net: ReactionNetwork, args, out) -> int:
    budget = _budget_from(args)
    if args.count_only or args.histogram:
        conn = connectivity(net)
        if conn.is_strongly_connected and not args.brute_force and args.method != "search":
            used = set()
            for c in net.complexes:
                used |= c.support
            unused = net.num_species - len(used)
            if any(c.is_zero for c in net.complexes):
                tally_total, by_size = 0, {}
            else:
                tally = transversal_counts(complex_support_hypergraph(net), budget)
                tally_total, by_size = tally.total, dict(tally.by_size)
            if unused:
                tally_total += unused
                by_size[1] = by_size.get(1, 0) + unused
                by_size = dict(sorted(by_size.items()))
        else:
            found = (
                brute_force_minimal_siphons(net)
                if args.brute_force
                else minimal_siphons(net, budget, method=args.method)
            )
            by_size = {}
            for z in found:
                by_size[len(z.members)] = by_size.get(len(z.members), 0) + 1
            tally_total = len(found)
        print(f"total {tally_total}", file=out)
        if args.histogram:
            for size in sorted(by_size):
                print(f"{size} {by_size[size]}", file=out)
        return EXIT_OK
    found = (
        brute_force_minimal_siphons(net)
        if args.brute_force
        else minimal_siphons(net, budget, method=args.method)
    )
    for z in found:
        print(" ".join(z.names(net)), file=out)
    return EXIT_OK


def _cmd_relevance(net: ReactionNetwork, args, out) -> int:
    budget = _budget_from(args)
    c0 = _parse_c0(net, args)
    samples = _read_samples(args.omega, net) if args.omega else None
    for z in minimal_siphons(net, budget):
        verdict = is_relevant(net, z)
        line = f"{{{' '.join(z.names(net))}}}: " + (
            "relevant" if verdict.relevant else "not relevant"
        )
        if verdict.conservation_law is not None:
            law = " ".join(_frac_str(x) for x in verdict.conservation_law)
            line += f" [conservation law: {law}]"
        if c0 is not None:
            line += f" [c0-relevant: {is_c0_relevant(net, c0, z).relevant}]"
        if samples is not None:
            hit, idx = omega_relevant(net, samples, z)
            line += f" [sample-relevant: {hit}" + (f" via sample {idx}]" if hit else "]")
        print(line, file=out)
    return EXIT_OK


def run(argv: Sequence[str], out=None, err=None) -> int:
    """Parse arguments, execute one subcommand, and return the exit code."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
        net = _load_network(args.input)

        if args.command == "parse":
            out.write(canonical_text(net))
            return EXIT_OK

        if args.command == "siphons":
            return _cmd_siphons(net, args, out)

        if args.command == "facets":
            cone = build_cone(conservation_basis(net))
            if not cone.pointed:
                raise NotPointedError("cone is not pointed; it has no facet description here")
            for f in cone.facets or ():
                members = " ".join(net.species.names[i] for i in f.members)
                comp = " ".join(net.species.names[i] for i in f.complement(net.num_species))
                normal = " ".join(_frac_str(x) for x in f.normal)
                print(f"facet: {members} ; complement: {comp} ; normal: {normal}", file=out)
            return EXIT_OK

        if args.command == "vertices":
            c0 = _parse_c0(net, args)
            if c0 is None:
                raise UsageError("vertices requires --c0 or --assign")
            polytope = InvariantPolytope.from_network(net, c0)
            for support in polytope.vertex_supports:
                print(" ".join(net.species.names[i] for i in support), file=out)
            return EXIT_OK

        if args.command == "relevance":
            return _cmd_relevance(net, args, out)

        if args.command == "face-dim":
            c0 = _parse_c0(net, args)
            if c0 is None:
                raise UsageError("face-dim requires --c0 or --assign")
            members = _parse_siphon(net, args.siphon)
            polytope = InvariantPolytope.from_network(net, c0)
            dim = face_dimension(polytope, members)
            print("empty" if dim is None else str(dim), file=out)
            return EXIT_OK

        if args.command == "analyze":
            c0 = _parse_c0(net, args)
            samples = _read_samples(args.omega, net) if args.omega else None
            symmetry = _read_permutations(args.symmetry, net) if args.symmetry else None
            report = analyze(
                net,
                c0=c0,
                omega_samples=samples,
                budget=_budget_from(args),
                symmetry=symmetry,
                collect_timing=args.timing,
            )
            if args.format == "json":
                json.dump(_report_to_dict(report), out, indent=2)
                out.write("\n")
            else:
                out.write(_report_to_text(report))
            return EXIT_OK

        if args.command == "ode":
            kappa = _read_kappa(args.kappa, net)
            field = build_rhs(MassActionSystem(net, kappa))
            for i, name in enumerate(net.species.names):
                poly = _render_polynomial(field.components[i], net.species.names)
                print(f"d{name}/dt = {poly}", file=out)
            return EXIT_OK

        if args.command == "invariance-check":
            members = _parse_siphon(net, args.siphon)
            try:
                failure = check_face_invariance(net, members, trials=args.trials, seed=args.seed)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            if failure is None:
                print(f"pass ({args.trials} trials)", file=out)
                return EXIT_OK
            print(f"FAIL: {failure}", file=err)
            return EXIT_INTERNAL

        if args.command == "export-cas":
            out.write(
                export_cas_script(net, flavor=args.flavor, include_boundary=not args.no_boundary)
            )
            return EXIT_OK

        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except (ValueError, NotPointedError) as exc:
        if isinstance(exc, ParseError):
            print(f"parse error: {exc}", file=err)
            return EXIT_PARSE
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=err)
        return EXIT_BUDGET
    except RouteDisagreementError as exc:
        print(f"internal invariant violation: {exc}", file=err)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
