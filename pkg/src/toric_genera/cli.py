"""Command-line entry point.

Exit codes: 0 success or rigid, 1 a failed identity or a non-rigidity
certificate, 2 invalid input, 3 no generic line found, 4 internal error.
"""

import argparse
import json
import sys
import time

from . import analysis as A
from .errors import (
    ContractError,
    GenericityError,
    InternalInconsistency,
    OrderError,
    SpecError,
    StructureError,
    ToricGeneraError,
    ValidationError,
)
from .genera import cpn_values, exponent_from_spec, fgl_from_exponent, parse_genus_spec
from .localization import localized_genus_on_line, rigidity_check, sample_generic_lines
from .quasitoric import (
    QuasitoricPair,
    fixed_point_data,
    l23_fixture,
    localisation_term_dump,
    render_rigidity_equation,
    su_weight_sum_check,
    validate_pair,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GENERICITY, EXIT_INTERNAL = 0, 1, 2, 3, 4
CLI_BUILTINS = {"l23": l23_fixture}


def load_manifold(name):
    if name in CLI_BUILTINS:
        return CLI_BUILTINS[name]()
    try:
        with open(name, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read manifold {name!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{name}: invalid JSON ({exc.msg}, line {exc.lineno})") from None
    return QuasitoricPair.from_json(doc)


def _emit(args, payload, text):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _table(rows):
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def _vec(v):
    return "(" + ",".join(str(c) for c in v) + ")"


# --------------------------------------------------------------------------
# subcommands


def cmd_fixed_points(args):
    pair = load_manifold(args.manifold)
    report = validate_pair(pair)
    if not report.ok:
        raise ValidationError(f"invalid quasitoric pair: {report.describe()}", report.failures)
    data = fixed_point_data(pair)
    su = su_weight_sum_check(data)
    payload = {
        "manifold": pair.name,
        "fixed_points": [
            {
                "vertex": d.vertex + 1,
                "facets": [j + 1 for j in d.facets],
                "det_lambda": d.det_lambda,
                "sign": d.sign,
                "weights": [list(w) for w in d.weights],
            }
            for d in data
        ],
        "weight_sum": list(su.common_sum) if su.ok else None,
    }
    rows = [("vertex", "facets", "det", "sign", "weights")]
    for d in data:
        rows.append(
            (
                str(d.vertex + 1),
                "{" + ",".join(str(j + 1) for j in d.facets) + "}",
                str(d.det_lambda),
                "+" if d.sign > 0 else "-",
                " ".join(_vec(w) for w in d.weights),
            )
        )
    text = _table(rows)
    text += "\nweight sum: " + (_vec(su.common_sum) + " at every vertex" if su.ok else "differs between vertices")
    _emit(args, payload, text)
    return EXIT_OK


def cmd_term_dump(args):
    data = fixed_point_data(load_manifold(args.manifold))
    terms = localisation_term_dump(data)
    payload = {
        "terms": [
            {"vertex": t.vertex + 1, "sign": "+" if t.sign > 0 else "-", "forms": list(t.forms)}
            for t in terms
        ],
        "canonical": [t.canonical() for t in terms],
        "equation": render_rigidity_equation(terms),
    }
    lines = [f"{t.vertex + 1:>2}  {t.canonical()}" for t in terms]
    lines.append(render_rigidity_equation(terms))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _sampled(args, data):
    k = len(data[0].weights[0])
    return sample_generic_lines(data, k, args.lines, args.seed, args.bound)


def cmd_rigidity(args):
    data = fixed_point_data(load_manifold(args.manifold))
    spec = parse_genus_spec(args.genus)
    n = len(data[0].weights)
    f = exponent_from_spec(spec, args.order + n + 1)
    verdict = rigidity_check(data, f, args.order, args.lines, args.seed, args.bound, _sampled(args, data))
    payload = {"genus": str(spec), "seed": args.seed, "bound": args.bound, **verdict.to_dict()}
    _emit(args, payload, f"genus: {spec}\n" + verdict.render_text())
    return EXIT_OK if verdict.rigid else EXIT_FAIL


def cmd_equivariant_genus(args):
    data = fixed_point_data(load_manifold(args.manifold))
    spec = parse_genus_spec(args.genus)
    n = len(data[0].weights)
    f = exponent_from_spec(spec, args.order + n + 1)
    out = []
    for line in _sampled(args, data):
        L = localized_genus_on_line(data, f, line, args.order)
        out.append((line.direction, L))
    payload = {
        "genus": str(spec),
        "order": args.order,
        "lines": [
            {"direction": list(s), "coefficients": {str(k): str(c) for k, c in L.terms()}}
            for s, L in out
        ],
    }
    text = "\n".join(f"{_vec(s)}: {L}" for s, L in out)
    _emit(args, payload, f"genus: {spec}\n{text}")
    return EXIT_OK


def _identity_text(ident):
    d = ident.to_dict()
    lines = [
        f"identity: {d['name']}",
        f"denominator: {d['denominator']}",
        f"checked through total degree {d['order']} (relative order {d['relative_order']})",
    ]
    if d["holds"]:
        lines.append("residual: 0")
    else:
        lines.append(f"residual: nonzero, lowest degree {d['lowest_nonzero_degree']}")
        lines.append(f"  {d['residual']}")
    return "\n".join(lines)


def cmd_derive(args):
    subject = args.subject
    if subject in ("restricted", "symmetrized"):
        fn = A.restricted_residual if subject == "restricted" else A.symmetrized_residual
        ident = fn(parse_genus_spec(args.genus), args.c or "0", args.order)
        _emit(args, ident.to_dict(), _identity_text(ident))
        return EXIT_OK if ident.holds() else EXIT_FAIL
    if subject == "ode":
        rep = A.z3_ode_residual(parse_genus_spec(args.genus), args.c or "c", args.order)
        text = "\n".join(
            [
                f"a = 3*g3 = {rep.a}",
                "ODE residual: " + ("0" if rep.holds() else str(rep.residual)),
                "residual at c = 0: " + ("0" if rep.c_free_part.is_zero() else str(rep.c_free_part)),
                f"c multiplies 2*g^5 (odd): {str(rep.c_coefficient_odd).lower()}",
                f"remaining terms even: {str(rep.c_free_part_even).lower()}",
                "c forced to 0: " + str(rep.c_forced_zero).lower(),
            ]
        )
        _emit(args, rep.to_dict(), text)
        return EXIT_OK if rep.c_forced_zero else EXIT_FAIL
    if subject == "ansatz":
        rep = A.ansatz_reduction(args.k)
        lines = [f"a1 = {rep.a1}"]
        for k, v in rep.solutions.items():
            if k > 1:
                lines.append(f"a{k} = {'free' if v is None else v}")
        lines.append(rep.surviving)
        _emit(args, rep.to_dict(), "\n".join(lines))
        return EXIT_OK
    rep = A.solve_g_from_rigidity(args.k)
    lines = [f"c = {rep.c}"]
    lines += [f"g{k} = {v}" for k, v in rep.forced.items()]
    lines.append("parameter map: " + ", ".join(f"{k} = {v}" for k, v in rep.parameter_map.items()))
    lines.append(f"identity consistent through degree {3 + 2 * args.k}: {str(rep.free_orders_consistent).lower()}")
    lines.append(f"matches elliptic sine: {str(rep.matches_elliptic_sine).lower()}")
    _emit(args, rep.to_dict(), "\n".join(lines))
    return EXIT_OK if rep.matches_elliptic_sine and rep.free_orders_consistent else EXIT_FAIL


def cmd_genus_info(args):
    spec = parse_genus_spec(args.genus)
    K = args.k
    f = exponent_from_spec(spec, K + 1)
    values = cpn_values(f, K)
    fgl = fgl_from_exponent(f, K + 1)
    checks = {
        "unit": fgl.check_unit(),
        "symmetry": fgl.check_symmetry(),
        "associativity": fgl.check_associativity(),
    }
    payload = {
        "genus": str(spec),
        "exponent": str(f),
        "cpn": [str(v) for v in values],
        "fgl": str(fgl),
        "fgl_axioms": checks,
    }
    text = "\n".join(
        [
            f"genus: {spec}",
            f"exponent: {f}",
            "phi(CP^1..CP^%d): (%s)" % (K, ", ".join(str(v) for v in values)),
            f"FGL: {fgl}",
            "axioms: " + ", ".join(f"{k} {'ok' if v else 'FAILS'}" for k, v in checks.items()),
        ]
    )
    _emit(args, payload, text)
    return EXIT_OK if all(checks.values()) else EXIT_INTERNAL


# --------------------------------------------------------------------------
# parser


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--order", type=_nonneg, default=10, help="series order N (default 10)")
    lines = _Parser(add_help=False)
    lines.add_argument("--lines", type=_positive, default=20, help="generic lines L (default 20)")
    lines.add_argument("--seed", type=int, default=0)
    lines.add_argument("--bound", type=_positive, default=64)

    p = _Parser(prog="toric-genera", description="Equivariant genera of quasitoric manifolds.")
    p.add_argument("--time", action="store_true", help="report wall time on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("fixed-points", parents=[common], help="signs and weights at the fixed points")
    s.add_argument("manifold", help="builtin 'l23' or a manifold JSON file")
    s.set_defaults(func=cmd_fixed_points)

    s = sub.add_parser("term-dump", parents=[common], help="the localisation equation, term by term")
    s.add_argument("manifold", nargs="?", default="l23")
    s.set_defaults(func=cmd_term_dump)

    for name, func, hlp in (
        ("rigidity", cmd_rigidity, "test rigidity on seeded generic lines"),
        ("equivariant-genus", cmd_equivariant_genus, "Laurent expansion on each line"),
    ):
        s = sub.add_parser(name, parents=[common, lines], help=hlp)
        s.add_argument("manifold")
        s.add_argument("--genus", required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("derive", parents=[common], help="steps of the forcing argument")
    s.add_argument("subject", choices=("restricted", "symmetrized", "ode", "ansatz", "solve"))
    s.add_argument("--genus", default="sn")
    s.add_argument("--c", default=None, help="the constant c (default 0; symbol c for ode)")
    s.add_argument("-k", "--k", type=_positive, default=5)
    s.set_defaults(func=cmd_derive)

    s = sub.add_parser("genus-info", parents=[common], help="exponent, CP^k values and formal group law")
    s.add_argument("--genus", required=True)
    s.add_argument("-k", "--k", type=_positive, default=4)
    s.set_defaults(func=cmd_genus_info)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "derive" and args.subject in ("ansatz", "solve") and args.k < 3:
        print("error: -k must be >= 3", file=sys.stderr)
        return EXIT_INPUT
    start = time.perf_counter()
    try:
        code = args.func(args)
    except GenericityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SpecError, ContractError, OrderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InternalInconsistency, StructureError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ToricGeneraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.time:
        print(f"time: {time.perf_counter() - start:.3f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
