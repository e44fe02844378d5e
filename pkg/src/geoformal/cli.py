"""Command-line front end.

Commands:
  homog    invariant cohomology and formality probes for a homogeneous space
  certify  emit and verify an infeasibility certificate for a ring
  realize  numerical feasibility search for a realization problem
  suite    run every built-in reproduction against its expected verdict

Exit status 0 means verdicts were computed (NOT_FORMAL and NO_CERTIFICATE
are verdicts); nonzero is reserved for operational errors.  Structured
reports are deterministic given (config, seed); timings are opt-in.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction

import yaml

from . import reports
from .certify import certify_table, certify_totaro, verify_certificate
from .errors import (CertificateUnavailableError, ConfigError, GeoformalError,
                     PatternInapplicableError)
from .invariant import (HomogeneousSpace, aloff_wallach, aw_contraction_check,
                        flag_su3, formality_by_top_degree, su4_su2)
from .lie import LieAlgebra, Subalgebra, named_algebra, reductive_split, \
    torus_element
from .realize import SearchConfig, builtin_problem, RealizationProblem, search
from .ring import (RingPresentation, build_table, builtin_presentation,
                   pattern_match)

DEFAULT_SEED = int(os.environ.get("GEOFORMAL_SEED", "0"))


def _emit(report, args, t0):
    report["timing_ms"] = int((time.time() - t0) * 1000)
    if args.format == "json":
        text = reports.to_json(report, timings=args.timings)
    else:
        text = reports.render_human(report, timings=args.timings)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_degrees(spec):
    lo, _, hi = spec.partition("..")
    return int(lo), int(hi)


# -- homog ---------------------------------------------------------------------


def _space_from_file(path):
    with open(path) as fh:
        cfg = yaml.safe_load(fh)
    alg = cfg.get("algebra")
    if isinstance(alg, str):
        g = named_algebra(alg)
    elif isinstance(alg, dict):
        dim = alg["dim"]
        structure = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for i, j, coeffs in alg["brackets"]:
            vec = [Fraction(str(c)) for c in coeffs]
            structure[i][j] = vec
            structure[j][i] = [-c for c in vec]
        g = LieAlgebra(structure, alg.get("labels"), name=alg.get("name", "custom"))
    else:
        raise ConfigError("space file needs an `algebra` entry")
    sub = cfg.get("subalgebra")
    if isinstance(sub, dict) and "torus" in sub:
        t = sub["torus"]
        vec = torus_element(int(t["k"]), int(t["l"]), override=bool(t.get("override")))
        h = Subalgebra(g, [vec])
    elif isinstance(sub, dict) and "vectors" in sub:
        vectors = [[Fraction(str(c)) for c in v] for v in sub["vectors"]]
        h = Subalgebra(g, vectors)
    else:
        raise ConfigError("space file needs `subalgebra.vectors` or `subalgebra.torus`")
    split = reductive_split(g, h)
    metric = cfg.get("metric_diag")
    if metric is not None:
        metric = [Fraction(str(x)) for x in metric]
    return HomogeneousSpace(split, metric_diag=metric,
                            label=cfg.get("label", "custom-space"),
                            isotropy_connected=cfg.get("isotropy_connected", True))


def cmd_homog(args):
    t0 = time.time()
    inputs = {"target": args.target, "k": args.k, "l": args.l,
              "override": args.override, "degrees": args.degrees,
              "file": args.file}
    report = reports.new_report("homog", inputs, seed=args.seed)
    if args.file:
        space = _space_from_file(args.file)
    elif args.target == "su4/su2":
        space = su4_su2()
    elif args.target == "su3/t2":
        space = flag_su3()
    elif args.target == "aw":
        if args.k is None or args.l is None:
            raise ConfigError("aw needs k and l, e.g. `homog aw 1 1`")
        space = aloff_wallach(args.k, args.l, override=args.override)
    else:
        raise ConfigError(f"unknown space {args.target!r}; known: su4/su2, "
                          "su3/t2, aw (or --file)")
    report["inputs"]["space"] = space.label

    if args.degrees:
        lo, hi = _parse_degrees(args.degrees)
        lo = max(lo, 0)
        hi = min(hi, space.dim_m)
        dims = {k: len(space.invariant_basis(k)) for k in range(lo, hi + 1)}
        report["tables"]["invariant_dimensions"] = {str(k): v for k, v in dims.items()}
        report["notes"].append(
            f"partial run over degrees {lo}..{hi}: Betti numbers and the "
            "formality probe need the full complex and were skipped")
        report["verdicts"]["formality"] = "SKIPPED_PARTIAL_RUN"
        _emit(report, args, t0)
        return 0

    b = space.betti()
    report["tables"]["betti"] = b
    report["tables"]["harmonic_dimensions"] = [len(h) for h in space.harmonic_basis()]
    probe = space.formality_probe()
    report["verdicts"]["formality_probe"] = probe.verdict
    report["tables"]["probe"] = reports.formality_to_dict(probe)
    report["verdicts"]["formality_by_top_degree"] = formality_by_top_degree(b)
    if args.target == "aw":
        aw = aw_contraction_check(args.k, args.l, override=args.override)
        report["tables"]["contraction_check"] = reports.aw_report_to_dict(aw)
        report["verdicts"]["contraction_check"] = aw.verdict
    _emit(report, args, t0)
    return 0


# -- certify -------------------------------------------------------------------


def _ring_from_args(args):
    if args.file:
        with open(args.file) as fh:
            cfg = yaml.safe_load(fh)
        pres = RingPresentation(
            [(n, int(d)) for n, d in cfg["generators"]],
            list(cfg["relations"]), int(cfg["top"]),
            volume_monomial=cfg.get("volume"),
            name=cfg.get("name", os.path.basename(args.file)))
        return build_table(pres)
    name = args.target
    params = {}
    if name == "sphere-bundle":
        if args.c is None:
            raise ConfigError("sphere-bundle needs --c")
        params["c"] = Fraction(args.c)
    elif name == "totaro":
        if args.a is None or args.b is None:
            raise ConfigError("totaro needs --a and --b")
        params["a"] = Fraction(args.a)
        params["b"] = Fraction(args.b)
    elif name == "wedge":
        params["p"] = int(args.p)
        params["q"] = int(args.q)
    return build_table(builtin_presentation(name, **params))


def cmd_certify(args):
    t0 = time.time()
    inputs = {"target": args.target, "c": args.c, "a": args.a, "b": args.b,
              "file": args.file, "trials": args.trials}
    report = reports.new_report("certify", inputs, seed=args.seed)
    table = _ring_from_args(args)
    report["inputs"]["ring"] = table.presentation.name
    report["tables"]["ring_betti"] = table.betti()
    tag = pattern_match(table)
    report["verdicts"]["pattern"] = str(tag)
    try:
        if tag.kind == "TOTARO":
            cert = certify_totaro(tag.params["a"], tag.params["b"])
        else:
            cert = certify_table(table)
    except PatternInapplicableError as exc:
        report["verdicts"]["certificate"] = "PATTERN_INAPPLICABLE"
        report["notes"].append(str(exc))
        report["notes"].append("run `geoformal realize` to search for a witness")
        _emit(report, args, t0)
        return 0
    except CertificateUnavailableError as exc:
        report["verdicts"]["certificate"] = "NO_CERTIFICATE"
        report["notes"].append(str(exc))
        if exc.witness:
            report["tables"]["known_witness"] = dict(exc.witness)
            report["notes"].append(
                "the attached assignment satisfies every relation exactly "
                "(rational arithmetic); the ring is pointwise realizable")
        _emit(report, args, t0)
        return 0
    verification = verify_certificate(cert, trials=args.trials, seed=args.seed)
    report["verdicts"]["certificate"] = cert.verdict
    report["verdicts"]["verification"] = verification.status
    report["tables"]["certificate"] = reports.certificate_to_dict(cert)
    report["tables"]["verification"] = reports.verification_to_dict(verification)
    report["trace"] = [f"{s.sid} [{s.mode}] {s.statement}" for s in cert.steps]
    _emit(report, args, t0)
    return 0


# -- realize -------------------------------------------------------------------


def _problem_from_args(args):
    if args.file:
        with open(args.file) as fh:
            cfg = yaml.safe_load(fh)
        return RealizationProblem(
            int(cfg["n"]),
            [(n, int(g)) for n, g in cfg["variables"]],
            list(cfg["relations"]), cfg["volume"],
            require_injective_degree2=cfg.get("require_injective_degree2", True),
            label=cfg.get("label", os.path.basename(args.file)))
    name = args.target
    params = {}
    if name == "sphere-bundle":
        params["c"] = Fraction(args.c if args.c is not None else 0)
    elif name == "totaro":
        params["a"] = Fraction(args.a if args.a is not None else 0)
        params["b"] = Fraction(args.b if args.b is not None else 0)
    elif name == "wedge":
        params["p"] = int(args.p)
        params["q"] = int(args.q)
    return builtin_problem(name, **params)


def cmd_realize(args):
    t0 = time.time()
    inputs = {"target": args.target, "c": args.c, "a": args.a, "b": args.b,
              "p": args.p, "q": args.q, "file": args.file,
              "restarts": args.restarts}
    report = reports.new_report("realize", inputs, seed=args.seed)
    problem = _problem_from_args(args)
    report["inputs"]["problem"] = problem.label
    cfg = SearchConfig(restarts=args.restarts, seed=args.seed,
                       max_iterations=args.max_iterations)
    outcome = search(problem, cfg)
    report["verdicts"]["search"] = outcome.status
    report["tables"]["outcome"] = reports.outcome_to_dict(outcome)
    if outcome.feasible:
        report["notes"].append("a witness was found; the ring is pointwise "
                               "realizable at this tolerance")
    else:
        report["notes"].append("NO_SOLUTION_FOUND is a report, not a proof "
                               "of infeasibility")
    _emit(report, args, t0)
    return 0


# -- suite ---------------------------------------------------------------------


def _expected_rows():
    """The living acceptance table: every built-in reproduction with its
    expected verdict and the construction it comes from."""
    rows = []
    rows.append({"row": "homog su4/su2", "kind": "homog", "target": "su4/su2",
                 "expect": {"betti_support": [0, 5, 7, 12],
                            "formality_probe": "FORMAL_FOR_THIS_METRIC",
                            "formality_by_top_degree": "APPLIES_PROD"},
                 "source": "sphere-product transitive action of SU(4)"})
    rows.append({"row": "homog su3/t2", "kind": "homog", "target": "su3/t2",
                 "expect": {"betti": [1, 0, 2, 0, 2, 0, 1],
                            "formality_probe": "NOT_FORMAL"},
                 "source": "full flag manifold, normal metric"})
    for (k, l) in ((1, 1), (1, 2), (2, 1)):
        rows.append({"row": f"homog aw {k} {l}", "kind": "homog",
                     "target": "aw", "k": k, "l": l,
                     "expect": {"betti": [1, 0, 1, 0, 0, 1, 0, 1],
                                "formality_probe": "NOT_FORMAL"},
                     "source": "Aloff-Wallach space, normal metric"})
    rows.append({"row": "homog aw 1 -1 (override)", "kind": "homog",
                 "target": "aw", "k": 1, "l": -1, "override": True,
                 "expect": {"formality_probe": "NOT_FORMAL"},
                 "source": "degenerate circle inside an SU(2) block"})
    for c in (-2, -1, 1, 2):
        rows.append({"row": f"certify sphere-bundle c={c}", "kind": "certify",
                     "target": "sphere-bundle", "c": Fraction(c),
                     "expect": {"certificate": "INFEASIBLE",
                                "verification": "ACCEPTED"},
                     "source": "projectivized bundle over the projective plane"})
    rows.append({"row": "certify eschenburg-ex1", "kind": "certify",
                 "target": "eschenburg-ex1",
                 "expect": {"certificate": "INFEASIBLE",
                            "verification": "ACCEPTED",
                            "pattern": "RANK_KERNEL"},
                 "source": "Eschenburg biquotient, first example"})
    rows.append({"row": "certify eschenburg-ex2", "kind": "certify",
                 "target": "eschenburg-ex2",
                 "expect": {"certificate": "INFEASIBLE",
                            "verification": "ACCEPTED",
                            "pattern": "LEFSCHETZ"},
                 "source": "Eschenburg biquotient, second example"})
    for a in range(-2, 3):
        for b in range(-2, 3):
            if (a, b) == (0, 0):
                continue
            rows.append({"row": f"certify totaro a={a} b={b}",
                         "kind": "certify-totaro",
                         "a": Fraction(a), "b": Fraction(b),
                         "expect": {"certificate": "INFEASIBLE",
                                    "verification": "ACCEPTED"},
                         "source": "three-sphere-product biquotient family"})
    rows.append({"row": "certify totaro a=0 b=0", "kind": "certify-totaro",
                 "a": Fraction(0), "b": Fraction(0),
                 "expect": {"certificate": "NO_CERTIFICATE"},
                 "source": "decoupled member of the family; exactly realizable "
                           "(its would-be pivot y1*y2^2 reduces to 0)"})
    rows.append({"row": "realize sphere-bundle c=0", "kind": "realize",
                 "target": "sphere-bundle", "c": Fraction(0),
                 "expect": {"search": "FEASIBLE_FOUND"},
                 "source": "trivial bundle: realizable and formal"})
    rows.append({"row": "realize wedge(2,4)", "kind": "realize",
                 "target": "wedge", "p": 2, "q": 4,
                 "expect": {"search": "FEASIBLE_FOUND"},
                 "source": "product of even spheres (volume pairing only)"})
    for c in (1, 2):
        rows.append({"row": f"realize sphere-bundle c={c}", "kind": "realize",
                     "target": "sphere-bundle", "c": Fraction(c),
                     "expect": {"search": "NO_SOLUTION_FOUND"},
                     "source": "consistency with the rank/kernel certificate"})
    rows.append({"row": "realize totaro(0,0)", "kind": "realize",
                 "target": "totaro", "a": Fraction(0), "b": Fraction(0),
                 "expect": {"search": "FEASIBLE_FOUND"},
                 "source": "witness cross-check for the uncertifiable member"})
    return rows


def run_suite(only=None, trials=60, restarts=16, seed=DEFAULT_SEED):
    """Run the expected-verdict table; returns (rows, all_ok, certified, feasible)."""
    results = []
    certified_infeasible = set()
    feasible_found = set()
    for row in _expected_rows():
        kind = row["kind"]
        negative = kind.startswith("certify") or \
            row["expect"].get("formality_probe") == "NOT_FORMAL" or \
            row["expect"].get("search") == "NO_SOLUTION_FOUND"
        if only == "negative" and not negative:
            continue
        if only == "positive" and negative:
            continue
        got = {}
        try:
            if kind == "homog":
                got = _run_homog_row(row)
            elif kind == "certify":
                got = _run_certify_row(row, trials, seed)
                if got.get("certificate") == "INFEASIBLE":
                    certified_infeasible.add(row["row"].replace("certify ", ""))
            elif kind == "certify-totaro":
                got = _run_totaro_row(row, trials, seed)
                if got.get("certificate") == "INFEASIBLE":
                    certified_infeasible.add(f"totaro({row['a']},{row['b']})")
            elif kind == "realize":
                got = _run_realize_row(row, restarts, seed)
                if got.get("search") == "FEASIBLE_FOUND":
                    feasible_found.add(row["row"].replace("realize ", ""))
        except GeoformalError as exc:
            got = {"error": f"{type(exc).__name__}: {exc}"}
        ok = all(got.get(k) == v for k, v in row["expect"].items())
        results.append({"row": row["row"], "source": row["source"],
                        "expected": row["expect"], "got": got,
                        "pass": ok})
    all_ok = all(r["pass"] for r in results)
    return results, all_ok, certified_infeasible, feasible_found


def _run_homog_row(row):
    if row["target"] == "su4/su2":
        space = su4_su2()
    elif row["target"] == "su3/t2":
        space = flag_su3()
    else:
        space = aloff_wallach(row["k"], row["l"],
                              override=row.get("override", False))
    b = space.betti()
    got = {"betti": b,
           "betti_support": [k for k, x in enumerate(b) if x],
           "formality_probe": space.formality_probe().verdict}
    try:
        got["formality_by_top_degree"] = formality_by_top_degree(b)
    except GeoformalError:
        got["formality_by_top_degree"] = "MALFORMED"
    return {k: got[k] for k in row["expect"]} | {"betti": b}


def _run_certify_row(row, trials, seed):
    if row["target"] == "sphere-bundle":
        table = build_table(builtin_presentation("sphere-bundle", c=row["c"]))
    else:
        table = build_table(builtin_presentation(row["target"]))
    got = {}
    tag = pattern_match(table)
    got["pattern"] = tag.kind
    try:
        cert = certify_table(table)
        got["certificate"] = cert.verdict
        got["verification"] = verify_certificate(cert, trials=trials,
                                                 seed=seed).status
    except CertificateUnavailableError:
        got["certificate"] = "NO_CERTIFICATE"
    except PatternInapplicableError:
        got["certificate"] = "PATTERN_INAPPLICABLE"
    return got


def _run_totaro_row(row, trials, seed):
    got = {}
    try:
        cert = certify_totaro(row["a"], row["b"])
        got["certificate"] = cert.verdict
        got["verification"] = verify_certificate(cert, trials=trials,
                                                 seed=seed).status
    except CertificateUnavailableError:
        got["certificate"] = "NO_CERTIFICATE"
    return got


def _run_realize_row(row, restarts, seed):
    params = {}
    for key in ("c", "a", "b", "p", "q"):
        if key in row:
            params[key] = row[key]
    problem = builtin_problem(row["target"], **params)
    outcome = search(problem, SearchConfig(restarts=restarts, seed=seed))
    return {"search": outcome.status}


def cmd_suite(args):
    t0 = time.time()
    inputs = {"only": args.only, "trials": args.trials,
              "restarts": args.restarts}
    report = reports.new_report("suite", inputs, seed=args.seed)
    results, all_ok, certified, feasible = run_suite(
        only=args.only, trials=args.trials, restarts=args.restarts,
        seed=args.seed)
    report["verdicts"]["suite"] = "ALL_EXPECTED" if all_ok else "MISMATCHES"
    clash = certified & feasible
    report["verdicts"]["soundness_separation"] = (
        "OK" if not clash else f"VIOLATED: {sorted(clash)}")
    report["tables"]["rows"] = [
        {"row": r["row"], "pass": r["pass"], "expected": r["expected"],
         "got": r["got"], "source": r["source"]} for r in results]
    report["tables"]["summary"] = {
        "total": len(results),
        "passed": sum(1 for r in results if r["pass"]),
        "failed": sum(1 for r in results if not r["pass"]),
    }
    _emit(report, args, t0)
    return 0


# -- argument parsing ------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json"),
                        default=argparse.SUPPRESS)
    common.add_argument("--output", default=argparse.SUPPRESS,
                        help="write the report to a file")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed (default: GEOFORMAL_SEED or 0)")
    common.add_argument("--timings", action="store_true",
                        default=argparse.SUPPRESS,
                        help="include wall-clock timing in the report")
    parser = argparse.ArgumentParser(
        prog="geoformal",
        description="invariant cohomology, formality probes and pointwise "
                    "realization certificates for homogeneous spaces",
        parents=[common])
    sub = parser.add_subparsers(dest="cmd", required=True)

    ph = sub.add_parser("homog", parents=[common],
                        help="invariant cohomology of a space")
    ph.add_argument("target", nargs="?", help="su4/su2 | su3/t2 | aw")
    ph.add_argument("k", nargs="?", type=int)
    ph.add_argument("l", nargs="?", type=int)
    ph.add_argument("--override", action="store_true",
                    help="allow degenerate/non-coprime circle parameters")
    ph.add_argument("--degrees", help="restrict to a degree range, e.g. 0..3")
    ph.add_argument("--file", help="space descriptor (YAML)")
    ph.set_defaults(fn=cmd_homog)

    pc = sub.add_parser("certify", parents=[common], help="emit + verify an infeasibility certificate")
    pc.add_argument("target", nargs="?",
                    help="sphere-bundle | totaro | eschenburg-ex1 | eschenburg-ex2")
    pc.add_argument("--c")
    pc.add_argument("--a")
    pc.add_argument("--b")
    pc.add_argument("--p", type=int)
    pc.add_argument("--q", type=int)
    pc.add_argument("--file", help="ring presentation (YAML)")
    pc.add_argument("--trials", type=int, default=200,
                    help="sampled-step trials for verification")
    pc.set_defaults(fn=cmd_certify)

    pr = sub.add_parser("realize", parents=[common], help="numerical realization search")
    pr.add_argument("target", nargs="?",
                    help="sphere-bundle | totaro | wedge | eschenburg-ex1 | eschenburg-ex2")
    pr.add_argument("--c")
    pr.add_argument("--a")
    pr.add_argument("--b")
    pr.add_argument("--p", type=int, default=2)
    pr.add_argument("--q", type=int, default=4)
    pr.add_argument("--file", help="problem descriptor (YAML)")
    pr.add_argument("--restarts", type=int, default=64)
    pr.add_argument("--max-iterations", type=int, default=250)
    pr.set_defaults(fn=cmd_realize)

    ps = sub.add_parser("suite", parents=[common], help="run all built-in reproductions")
    ps.add_argument("--only", choices=("positive", "negative"))
    ps.add_argument("--trials", type=int, default=60)
    ps.add_argument("--restarts", type=int, default=16)
    ps.set_defaults(fn=cmd_suite)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    # global flags carry SUPPRESS defaults (they may appear before or after
    # the subcommand); fill the fallbacks here
    for name, fallback in (("format", "human"), ("output", None),
                           ("seed", DEFAULT_SEED), ("timings", False)):
        if not hasattr(args, name):
            setattr(args, name, fallback)
    try:
        return args.fn(args)
    except (GeoformalError, OSError, yaml.YAMLError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
