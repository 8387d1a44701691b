"""Deterministic command-line front end: JSON in, JSON/ASCII/SVG out.

Exit codes: 0 = success or agreement, 1 = a check failed (a JSON report is
still printed), 2 = invalid input.  Document-valued flags accept either a
file path or inline JSON.  Randomized subcommands require an explicit
--seed so runs are reproducible byte for byte.
"""

import argparse
import random
import sys
from pathlib import Path

from . import jsonio
from .aq import aq_one, derivations, genus_lift_report
from .cosimplicial import (check_pi00_lemma, eilenberg_zilber_check,
                           random_bicosimplicial_vs, random_double_complex,
                           random_finite_bicosimplicial_set, totalization_ss,
                           from_double_complex)
from .errors import InputError
from .linalg import PrimeField
from .render import chart_json, render_chart
from .specseq import (bockstein_pages, compare_bockstein_uass,
                      integral_homology, uass_em_chart)
from .steenrod import validate_prime
from .unstable import (TrivialCoefficients, ext_spectral_sequence,
                       verify_resolution_exactness)


def _add_format(sub, default="json"):
    sub.add_argument("--format", choices=["ascii", "svg", "json"], default=default)
    sub.add_argument("--page", default="infinity",
                     help="page index or 'infinity' for ascii/svg output")
    sub.add_argument("-o", "--output", default=None, help="write to a file instead of stdout")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="sseqtools",
        description="Steenrod-algebra charts, Bockstein spectral sequences, "
                    "cosimplicial calculators and rational obstruction reports")
    sub = ap.add_subparsers(dest="command", required=True)

    ext = sub.add_parser("ext", help="Ext chart of the periodic resolution")
    ext.add_argument("--prime", type=int, required=True)
    ext.add_argument("--n", type=int, required=True)
    ext.add_argument("--smax", type=int, required=True)
    ext.add_argument("--tmax", type=int, required=True)
    ext.add_argument("--coeff", default=None,
                     help="trivial coefficients as {degree: dim}; default F_p in degree 0")
    _add_format(ext)

    rc = sub.add_parser("resolve-check", help="machine-check resolution exactness")
    rc.add_argument("--prime", type=int, required=True)
    rc.add_argument("--n", type=int, required=True)
    rc.add_argument("--bound", type=int, required=True)

    bk = sub.add_parser("bockstein", help="Bockstein spectral sequence pages")
    bk.add_argument("--prime", type=int, required=True)
    src = bk.add_mutually_exclusive_group(required=True)
    src.add_argument("--groups", help="graded abelian group document")
    src.add_argument("--chain", help="integral chain complex document")
    bk.add_argument("--pages", type=int, required=True)
    _add_format(bk)

    ua = sub.add_parser("uass-em", help="Eilenberg-MacLane chart with forced differentials")
    ua.add_argument("--prime", type=int, required=True)
    ua.add_argument("--homotopy", required=True)
    ua.add_argument("--smax", type=int, required=True)
    ua.add_argument("--pages", type=int, required=True)
    _add_format(ua)

    cp = sub.add_parser("compare", help="Bockstein vs EM-chart agreement")
    cp.add_argument("--prime", type=int, required=True)
    cp.add_argument("--groups", required=True)
    cp.add_argument("--pages", type=int, required=True)

    cs = sub.add_parser("cosimp", help="cosimplicial checks")
    cs.add_argument("mode", choices=["ez", "pi00", "totss"])
    cs.add_argument("--input", default=None,
                    help="double complex (ez, totss) or bicosimplicial set (pi00)")
    cs.add_argument("--trials", type=int, default=None)
    cs.add_argument("--seed", type=int, default=None)

    aqp = sub.add_parser("aq", help="derivations and AQ^1 of a presentation")
    aqp.add_argument("--presentation", required=True)
    aqp.add_argument("--coeff", required=True)
    aqp.add_argument("--bound", type=int, required=True)

    gn = sub.add_parser("genus", help="lifting report for a rational genus")
    gn.add_argument("--source", required=True)
    gn.add_argument("--target", required=True)
    gn.add_argument("--assign", required=True)
    gn.add_argument("--bound", type=int, required=True)

    fg = sub.add_parser("figures", help="regenerate the chart figures as SVG")
    fg.add_argument("--outdir", default="figures")
    return ap


def _emit(args, text):
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_chart(args, ss):
    if args.format == "json":
        _emit(args, jsonio.dump(chart_json(ss)))
    else:
        _emit(args, render_chart(ss, args.page, args.format))


def cmd_ext(args):
    validate_prime(args.prime)
    if args.n < 1:
        raise InputError("--n must be >= 1")
    table = jsonio.coefficients_table(jsonio.load_document(args.coeff)) \
        if args.coeff else {0: 1}
    coeffs = TrivialCoefficients(args.prime, table)
    ss = ext_spectral_sequence(args.prime, args.n, coeffs, args.smax, args.tmax)
    _emit_chart(args, ss)
    return 0


def cmd_resolve_check(args):
    report = verify_resolution_exactness(args.prime, args.n, args.bound)
    sys.stdout.write(jsonio.dump(report.to_json()))
    return 0 if report.exact else 1


def cmd_bockstein(args):
    if args.chain:
        complex_ = jsonio.chain_complex(jsonio.load_document(args.chain))
        group = integral_homology(complex_)
    else:
        group = jsonio.graded_group(jsonio.load_document(args.groups))
    ss = bockstein_pages(args.prime, group, args.pages)
    _emit_chart(args, ss)
    return 0


def cmd_uass_em(args):
    homotopy = jsonio.homotopy_list(jsonio.load_document(args.homotopy))
    ss = uass_em_chart(args.prime, homotopy, args.smax, args.pages)
    _emit_chart(args, ss)
    return 0


def cmd_compare(args):
    group = jsonio.graded_group(jsonio.load_document(args.groups))
    report = compare_bockstein_uass(args.prime, group, args.pages)
    sys.stdout.write(jsonio.dump(report.to_json()))
    return 0 if report.agree else 1


def _cosimp_instances(args):
    if (args.trials is None) == (args.input is None):
        raise InputError("cosimp needs exactly one of --input or --trials")
    if args.trials is not None:
        if args.seed is None:
            raise InputError("randomized runs require an explicit --seed")
        if args.trials < 1:
            raise InputError("--trials must be >= 1")
    return args.trials


def cmd_cosimp(args):
    trials = _cosimp_instances(args)
    rng = random.Random(args.seed) if trials else None
    results = []
    fields = [PrimeField(2), PrimeField(3)]
    if args.mode == "pi00":
        if trials:
            instances = (random_finite_bicosimplicial_set(rng) for _ in range(trials))
        else:
            instances = [jsonio.bicosimplicial_set(jsonio.load_document(args.input))]
        for b in instances:
            ok, witness = check_pi00_lemma(b)
            results.append({"ok": ok, "witness": witness})
    elif args.mode == "ez":
        if trials:
            instances = (random_bicosimplicial_vs(fields[i % 2], rng, levels=2)
                         for i in range(trials))
            for b in instances:
                results.append({"ok": eilenberg_zilber_check(b, 1)})
        else:
            dc = jsonio.double_complex(jsonio.load_document(args.input))
            b = from_double_complex(dc)
            results.append({"ok": eilenberg_zilber_check(b, b.N - 1)})
    else:  # totss
        if trials:
            instances = (random_double_complex(fields[i % 2], rng)
                         for i in range(trials))
        else:
            instances = [jsonio.double_complex(jsonio.load_document(args.input))]
        for dc in instances:
            ss = totalization_ss(dc)  # internal asserts check E_inf totals
            results.append({"ok": True,
                            "infinity": {f"{h},{v}": d for (h, v), d in
                                         sorted(ss.infinity.dims.items())}})
    passed = all(r["ok"] for r in results)
    sys.stdout.write(jsonio.dump({
        "check": args.mode, "instances": len(results),
        "passed": passed, "results": results}))
    return 0 if passed else 1


def cmd_aq(args):
    pres = jsonio.presentation(jsonio.load_document(args.presentation))
    module = jsonio.coefficient_module(jsonio.load_document(args.coeff))
    ders = derivations(pres, module, args.bound)
    aq1 = aq_one(pres, module, args.bound)
    guard = pres.max_relation_degree()
    sys.stdout.write(jsonio.dump({
        "derivations": {str(d): v for d, v in sorted(ders.items())},
        "aq1": {str(d): v for d, v in sorted(aq1.items())},
        "trustworthy_degrees": {"low": -args.bound, "high": args.bound - guard},
    }))
    return 0


def cmd_genus(args):
    source = jsonio.presentation(jsonio.load_document(args.source))
    target = jsonio.presentation(jsonio.load_document(args.target))
    assign = jsonio.assignment_map(target, jsonio.load_document(args.assign))
    report = genus_lift_report(source, target, assign, args.bound)
    sys.stdout.write(jsonio.dump(report.to_json()))
    return 0


FIGURES = "kzn.svg", "kzn-cotensor.svg", "kzmodpk.svg", "kzmodpk-einf.svg"


def cmd_figures(args):
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    p = 2
    left = ext_spectral_sequence(p, 2, TrivialCoefficients(p, {0: 1}), 6, 9)
    right = ext_spectral_sequence(p, 2, TrivialCoefficients(p, {0: 1, 2: 1}), 6, 9)
    torsion = uass_em_chart(p, [(2, "Z/4")], s_max=5, r_max=2)
    charts = [
        (FIGURES[0], render_chart(left, "infinity", "svg")),
        (FIGURES[1], render_chart(right, "infinity", "svg")),
        (FIGURES[2], render_chart(torsion, 2, "svg")),
        (FIGURES[3], render_chart(torsion, "infinity", "svg")),
    ]
    for name, svg in charts:
        (outdir / name).write_text(svg, encoding="utf-8")
        sys.stdout.write(f"{outdir / name}\n")
    return 0


COMMANDS = {
    "ext": cmd_ext,
    "resolve-check": cmd_resolve_check,
    "bockstein": cmd_bockstein,
    "uass-em": cmd_uass_em,
    "compare": cmd_compare,
    "cosimp": cmd_cosimp,
    "aq": cmd_aq,
    "genus": cmd_genus,
    "figures": cmd_figures,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
