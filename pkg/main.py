# === main.py (command-line entry point of the pe(2) O_odd workbench) ===
import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import report_logger
import run_notifier
import settings
from errors import VerificationError, WindowError, WorkbenchError
from hom_algebra import (
    EXPECTED_TARGET_COUNTS,
    candidate_weights,
    check_gauge_residual,
    check_named_targets,
    multiplicity_table,
    named_target_weight,
    named_targets,
    perturbation_check,
    target_class,
    target_vectors,
    verify_downstairs,
    verify_relations,
)
from pe2_core import Weight, parse_weight, require_odd
from quiver_algebra import (
    Presentation,
    QuiverAlgebra,
    presentation_from_json,
    presentation_to_json,
)
from rep_modules import dump_module, format_vector, projective
from resolution import (
    coefficient_ratio_report,
    default_algebra,
    ext_grid_markdown,
    ext_table,
    koszul_check,
    resolution_to_json,
    resolve,
    strand_equals_resolution,
)

EXIT_OK = 0
EXIT_DISAGREE = 2
EXIT_WINDOW = 3


# ===== ARGUMENTS =====

def parse_window(text):
    try:
        a_min, a_max, b_min, b_max = (int(x) for x in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"window must be 'amin,amax,bmin,bmax', got {text!r}") from e
    if a_min > a_max or b_min > b_max:
        raise argparse.ArgumentTypeError(f"window {text!r} is empty")
    if a_min % 2 == 0 or a_max % 2 == 0:
        raise argparse.ArgumentTypeError(f"window a bounds must be odd, got {text!r}")
    return (a_min, a_max, b_min, b_max)


def build_parser():
    parser = argparse.ArgumentParser(prog="pe2", description="Exact-arithmetic workbench for the odd block of pe(2)")
    parser.add_argument("--window", type=parse_window, default=None, help="amin,amax,bmin,bmax")
    parser.add_argument("--b0", type=int, default=0, help="delta-offset of the weights studied")
    parser.add_argument("--n", type=int, default=3, help="maximal homological degree")
    parser.add_argument("--format", choices=report_logger.FORMATS, default=settings.DEFAULT_FORMAT)
    parser.add_argument("--out", default=None, help="write the report here instead of stdout")
    parser.add_argument("--jobs", type=int, default=settings.DEFAULT_JOBS)
    parser.add_argument("--notify", action="store_true", help="send a run summary message")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("targets", help="target vectors of P(lambda)")
    p.add_argument("--lambda", dest="lam", required=True)

    p = sub.add_parser("multiplicities", help="[P(lambda):L(mu)] by three methods")
    p.add_argument("--amax", type=int, default=21)

    p = sub.add_parser("relations", help="quadratic relations on the Lie side")
    p.add_argument("--amax", type=int, default=9)

    p = sub.add_parser("downstairs", help="composition identities of the ungauged arrows")
    p.add_argument("--amax", type=int, default=9)

    p = sub.add_parser("ext", help="Ext table of L(mu) against the closed form")
    p.add_argument("--mu", required=True)
    p.add_argument("--coefficients", action="store_true", help="add the coefficient ratio test")
    p.add_argument("--save-resolution", default=None, help="also write the resolution as JSON")
    p.add_argument("--presentation", default=None)

    p = sub.add_parser("koszul", help="Koszulity of every resolution in a range of mu")
    p.add_argument("--amax", type=int, default=9)
    p.add_argument("--presentation", default=None)
    p.add_argument("--drop-relation", default=None)

    p = sub.add_parser("export-quiver", help="presentation of A on the window as JSON")
    p.add_argument("--presentation", default=None, help="read a document back and re-export it")

    p = sub.add_parser("dump-module", help="basis and action matrices of P(lambda)")
    p.add_argument("--lambda", dest="lam", required=True)
    return parser


def _odd_range(low, high):
    start = low if low % 2 else low + 1
    return list(range(start, high + 1, 2))


def _pool_map(func, items, jobs):
    """Ordered map; a process pool when jobs > 1."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


def _load_algebra(args, mus):
    if getattr(args, "presentation", None):
        with open(args.presentation) as f:
            algebra = QuiverAlgebra(presentation_from_json(json.load(f)))
    elif args.window:
        algebra = QuiverAlgebra(Presentation(args.window))
    else:
        algebra = default_algebra(mus, args.n)
    drop = getattr(args, "drop_relation", None)
    if drop:
        algebra = algebra.with_dropped_relation(drop)
    return algebra


# ===== COMMANDS =====
# Each returns (rows, ok, extra header fields, appendix text).

def cmd_targets(args):
    lam = require_odd(parse_weight(args.lam))
    rows = []
    total = 0
    for mu in candidate_weights(lam):
        for t in target_vectors(lam, mu):
            total += 1
            rows.append({"kind": "solved", "mu": str(mu), "name": t.label,
                         "vector": format_vector(t.target_vector), "ok": True})
    bad = set(check_named_targets(lam))
    for name, vec in named_targets(lam).items():
        rows.append({"kind": "named", "mu": str(named_target_weight(lam, name)), "name": name,
                     "vector": format_vector(vec), "ok": name not in bad})
    expected = EXPECTED_TARGET_COUNTS[target_class(lam.a)]
    ok = total == expected == len(named_targets(lam)) and not bad
    settings.log("OK" if ok else "WARN", f"P({lam}): {total} target vectors, expected {expected}")
    return rows, ok, {"lambda": str(lam), "count": total}, ""


def _multiplicity_rows(lam):
    return multiplicity_table([lam])


def cmd_multiplicities(args):
    if args.window:
        a_values = _odd_range(args.window[0], args.window[1])
    else:
        a_values = _odd_range(-args.amax, args.amax)
    lambdas = [Weight(a, args.b0) for a in a_values]
    rows = [row for chunk in _pool_map(_multiplicity_rows, lambdas, args.jobs) for row in chunk]
    ok = all(row["agree"] for row in rows)
    return rows, ok, {}, ""


def cmd_relations(args):
    centers = _odd_range(-1, args.amax)
    rows = verify_relations(centers, args.b0)
    for center in centers:
        perturbed = perturbation_check(center, args.b0)
        detected = any(r["status"] == "FAIL" for r in perturbed)
        rows.append({"center": center, "source": "", "relation": "perturbed f' gauge detected",
                     "status": "ok" if detected else "FAIL", "residual": ""})
    residual = check_gauge_residual(range(3, max(args.amax, 3) + 1, 2))
    rows.append({"center": "", "source": "", "relation": "gauge difference equation",
                 "status": "ok" if not residual else "FAIL", "residual": str(residual)})
    ok = all(r["status"] == "ok" for r in rows)
    return rows, ok, {}, ""


def cmd_downstairs(args):
    rows = []
    for center in _odd_range(-1, args.amax):
        rows.extend(verify_downstairs(center, args.b0))
    ok = all(r["status"] == "ok" for r in rows)
    return rows, ok, {}, ""


def cmd_ext(args):
    mu = require_odd(parse_weight(args.mu))
    algebra = _load_algebra(args, [mu])
    steps = resolve(algebra, mu, args.n)
    rows = ext_table(algebra, mu, args.n, steps)
    ok = all(r["status"] == "ok" for r in rows)
    if args.save_resolution:
        with open(args.save_resolution, mode="w") as f:
            json.dump(resolution_to_json(steps, mu), f, sort_keys=True, indent=2)
        settings.log("INFO", f"resolution written to {args.save_resolution}")
    if args.coefficients and mu.a <= -1:
        for row in coefficient_ratio_report(steps, mu):
            rows.append({"mu": row["mu"], "lambda": row["target"], "n": row["n"], "computed": row["computed"],
                         "formula": row["predicted"], "status": row["status"]})
            if row["status"] in ("mismatch", "unexpected"):
                ok = False
    appendix = ext_grid_markdown(rows, mu) if args.format == "md" else ""
    return rows, ok, {"mu": str(mu)}, appendix


def _koszul_rows(job):
    algebra, mu, n_max = job
    steps = resolve(algebra, mu, n_max)
    koszul, failure = koszul_check(steps, algebra.top_degree)
    return {
        "mu": str(mu),
        "koszul": koszul,
        "first_failure": json.dumps(failure) if failure else "",
        "strand_equals_resolution": strand_equals_resolution(steps),
        "summands": " ".join(str(len(s.projectives)) for s in steps),
    }


def cmd_koszul(args):
    mus = [Weight(a, args.b0) for a in _odd_range(-args.amax, args.amax)]
    algebra = _load_algebra(args, mus)
    rows = _pool_map(_koszul_rows, [(algebra, mu, args.n) for mu in mus], args.jobs)
    ok = all(r["koszul"] for r in rows)
    for r in rows:
        if r["koszul"] != r["strand_equals_resolution"]:
            raise VerificationError(f"Koszul check and linear strand disagree at {r['mu']}")
    return rows, ok, {"dropped": args.drop_relation or ""}, ""


def cmd_export_quiver(args):
    if args.presentation:
        with open(args.presentation) as f:
            pres = presentation_from_json(json.load(f))
    else:
        pres = Presentation(args.window or (-9, 9, args.b0, args.b0 + 4))
    return presentation_to_json(pres)


def cmd_dump_module(args):
    lam = require_odd(parse_weight(args.lam))
    weights = [mu for mu in candidate_weights(lam)]
    return dump_module(projective(lam), weights)


TABLE_COMMANDS = {
    "targets": cmd_targets,
    "multiplicities": cmd_multiplicities,
    "relations": cmd_relations,
    "downstairs": cmd_downstairs,
    "ext": cmd_ext,
    "koszul": cmd_koszul,
}
DOCUMENT_COMMANDS = {
    "export-quiver": cmd_export_quiver,
    "dump-module": cmd_dump_module,
}


# ===== ENTRY POINT =====

def _config(args):
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(vars(args).items())}


def run(args):
    """Execute one command; returns (exit code, row count)."""
    header = report_logger.provenance(args.command, args.window, args.b0, args.n)
    if args.command in DOCUMENT_COMMANDS:
        doc = DOCUMENT_COMMANDS[args.command](args)
        doc = {"header": header, **doc}
        report_logger.write_report(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
        return EXIT_OK, 1
    rows, ok, extra, appendix = TABLE_COMMANDS[args.command](args)
    header.update(extra)
    text = report_logger.render(rows, header, args.format, appendix=appendix)
    report_logger.write_report(text, args.out)
    if ok:
        settings.log("OK", f"{args.command}: {len(rows)} rows, all checks passed")
        return EXIT_OK, len(rows)
    settings.log("WARN", f"{args.command}: disagreement or failed check in the report")
    return EXIT_DISAGREE, len(rows)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    rows = 0
    try:
        code, rows = run(args)
        status = "ok" if code == EXIT_OK else "disagreement"
    except WindowError as e:
        settings.log("ERROR", str(e))
        code, status = EXIT_WINDOW, "window"
    except WorkbenchError as e:
        settings.log("ERROR", str(e))
        code, status = EXIT_DISAGREE, "rejected"
    report_logger.log_run(args.command, _config(args), status, code, rows)
    if args.notify:
        try:
            run_notifier.send_run_summary(args.command, status, code, rows)
        except Exception as e:
            settings.log("WARN", f"failed to send run summary: {e}")
    return code


if __name__ == "__main__":
    sys.exit(main())
