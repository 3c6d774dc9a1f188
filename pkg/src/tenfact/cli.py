"""Command-line interface: ``tenfact <command> ...``.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 input or
validation error, 3 resource limit.  ``--json`` prints one report object
``{"command", "status", "findings", ...}`` with sorted keys; timings appear
only with ``--timing`` so repeated runs are byte-identical.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from contextlib import contextmanager
from pathlib import Path

from . import __version__, kernels
from .builders import deligne_product, opposite, rep_zp_char_p, taft_like, vec_of_group
from .cohomology import classify_pointed, h4_integral, omega_from_z
from .core import category_to_json, dual_D_map, format_json, load_category, validate
from .errors import AmbiguousDual, InconsistentDual, InputError, TenfactError, Unsupported, ValidationFailed
from .factor import (
    check_exact_factorization,
    fpdim_ratio_check,
    intersect,
    load_embedding,
    product_support,
    search_exact_factorizations,
)
from .fpdim import eigen_equation_check, fp_character, predicates
from .groups import (
    cyclic,
    dihedral,
    direct_product,
    enumerate_exact_factorizations,
    group_to_json,
    load_group,
    subgroup_of,
    subgroups,
    symmetric,
)

OK, FAIL, PARTIAL = "OK", "FAIL", "PARTIAL"
EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


class Run:
    """Collects the report, phase timings and human-readable lines of one command."""

    def __init__(self, args):
        self.args = args
        self.report = {"command": args.command_name, "status": OK, "findings": []}
        self.lines: list[str] = []
        self.timing: dict[str, float] = {}

    def say(self, line: str = ""):
        self.lines.append(line)

    def progress(self, msg: str):
        if not getattr(self.args, "quiet", False):
            print(f"[tenfact] {msg}", file=sys.stderr, flush=True)

    def find(self, type_: str, **data):
        self.report["findings"].append({"type": type_, **data})

    @contextmanager
    def phase(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timing[name] = round((time.perf_counter() - t0) * 1000, 3)


def _load_valid_category(path):
    data = load_category(path)
    rep = validate(data)
    if not rep.ok:
        raise ValidationFailed(f"{path}: category data violates {sorted(rep.kinds())}", violations=rep.to_json()["violations"])
    return data


# -- commands -----------------------------------------------------------------------


def cmd_check(run: Run):
    data = load_category(run.args.category)
    with run.phase("validate"):
        rep = validate(data)
    run.report["valid"] = rep.ok
    run.report["simples"] = data.n
    for v in rep.violations:
        run.find("violation", **v.to_json())
        run.say(f"VIOLATION {v.kind}: {v.count} failing instance(s); witnesses {[list(w) for w in v.witnesses[:5]]}")
        run.say(f"  {v.message}")
    if rep.ok:
        try:
            dd = dual_D_map(data)
            run.report["dualD"] = list(dd)
        except AmbiguousDual:
            run.report["dualD"] = None
            run.find("note", message="Y^D is not determined by the Cartan data (no dualD field)")
        except InconsistentDual as exc:
            run.report["dualD"] = None
            run.find("violation", kind="dualD", count=1, witnesses=[], message=str(exc))
            run.report["valid"] = False
    run.say(f"{run.args.category}: {'OK' if run.report['valid'] else 'INVALID'} ({data.n} simples)")
    if not run.report["valid"]:
        run.report["status"] = FAIL
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_fpdim(run: Run):
    data = _load_valid_category(run.args.category)
    with run.phase("fp_character"):
        prof = fp_character(data, tol=run.args.tol)
    preds = predicates(data, prof)
    eig = eigen_equation_check(data, prof)
    run.report.update(prof.to_json())
    run.report["simples"] = list(data.simples)
    run.report["predicates"] = preds
    run.report["eigen_equation"] = eig.to_json()
    width = max(len(s) for s in data.simples)
    for s, d in zip(data.simples, prof.dims):
        run.say(f"FPdim({s:<{width}}) = {int(d) if prof.exact else repr(float(d))}")
    run.say(f"FPdim(category) = {int(prof.cat_dim) if prof.exact else repr(prof.cat_dim)}")
    run.say("predicates: " + ", ".join(f"{k}={v}" for k, v in preds.items()))
    run.say(f"eigen equation max deviation: {eig.max_deviation:.3g}")
    if not eig.ok:
        run.report["status"] = PARTIAL
        run.find("note", message="eigen equation deviation above tolerance")
    return EXIT_OK


def _embeddings(run: Run, b):
    if not run.args.a or not run.args.c:
        raise InputError("give both --a and --c embedding files (or --auto)")
    return load_embedding(run.args.a, target=b), load_embedding(run.args.c, target=b)


def cmd_factorize(run: Run):
    b = _load_valid_category(run.args.category)
    if run.args.auto:
        with run.phase("search"):
            res = search_exact_factorizations(b, "auto")
        run.report["auto"] = True
        pairs = []
        for v, rep in zip(res.verdicts, res.representative):
            js = v.to_json()
            js["trivial"] = v.trivial
            js["representative"] = rep
            js.pop("bijection")
            pairs.append(js)
            tag = "trivial" if v.trivial else ("representative" if rep else "")
            run.say(f"A = {{{', '.join(js['a'])}}}  C = {{{', '.join(js['c'])}}}  {tag}".rstrip())
        run.report["factorizations"] = pairs
        run.report["nontrivial_up_to_conjugacy_and_swap"] = len(res.nontrivial_up_to_conjugacy_and_swap())
        run.say(f"{len(pairs)} ordered factorization(s); {run.report['nontrivial_up_to_conjugacy_and_swap']} nontrivial up to conjugacy and swap")
        return EXIT_OK
    a, c = _embeddings(run, b)
    with run.phase("check"):
        v = check_exact_factorization(a, c)
    run.report["verdict"] = v.to_json()
    for k, w in v.failures:
        run.find("failure", criterion=k, witness=list(w))
    run.say(f"{v.label}: {'yes' if v.ok else 'no'}")
    names = {
        "simple-product": "(i) X (x) Y simple",
        "bijection": "(ii) O(A) x O(C) -> O(B) bijective",
        "projective-product": "(iii) P_A(X) P_C(Y) = P_B(X (x) Y)",
        "intersection": "(iv) A n C = Vec",
    }
    for key, label in names.items():
        wit = [w for k, w in v.failures if k == key]
        run.say(f"  {label}: {'pass' if not wit else 'FAIL, witnesses ' + str([list(x) for x in wit[:5]])}")
    run.say(f"  FPdim(A) FPdim(C) = {v.fpdim_a * v.fpdim_c:g}, FPdim(B) = {v.fpdim_b:g}: {'equal' if v.fpdim_equal else 'differ'}")
    if not v.ok:
        run.report["status"] = FAIL
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_closure(run: Run):
    b = _load_valid_category(run.args.category)
    a, c = _embeddings(run, b)
    sup = product_support(a, c)
    inter = sorted(intersect(a, c))
    run.report["support"] = [b.simples[i] for i in sup]
    run.report["intersection"] = [b.simples[i] for i in inter]
    run.say(f"AC support ({len(sup)} simples): {', '.join(run.report['support'])}")
    run.say(f"A n C ({len(inter)} simples): {', '.join(run.report['intersection'])}")
    try:
        r = fpdim_ratio_check(a, c)
    except Unsupported as exc:
        run.report["ratio"] = None
        run.report["status"] = PARTIAL
        run.find("unsupported", message=str(exc))
        run.say(f"FPdim ratio check: UNSUPPORTED ({exc})")
        return EXIT_OK
    run.report["ratio"] = r.to_json()
    j = r.to_json()
    run.say(f"FPdim(A) FPdim(C) = {j['lhs']}, FPdim(AC) FPdim(D) = {j['fpdim_AC']} * {j['fpdim_D']} = {j['rhs']}: {'equal' if r.equal else 'differ'}")
    run.say(f"FPdim(B) = {j['fpdim_B']} >= FPdim(A) FPdim(C) / FPdim(D): {r.inequality}")
    if not (r.equal and r.inequality):
        run.report["status"] = FAIL
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_group_subgroups(run: Run):
    g = load_group(run.args.group)
    with run.phase("subgroups"):
        subs, classes = subgroups(g, by_conjugacy=True)
    cls_of = {i: k for k, cl in enumerate(classes) for i in cl}
    run.report["order"] = g.order
    run.report["subgroups"] = [
        {"elements": [g.labels[e] for e in s.elements], "order": s.order, "class": cls_of[i]} for i, s in enumerate(subs)
    ]
    run.report["conjugacy_classes"] = len(classes)
    for i, s in enumerate(subs):
        run.say(f"[{cls_of[i]:>3}] order {s.order:>3}: {{{', '.join(g.labels[e] for e in s.elements)}}}")
    run.say(f"{len(subs)} subgroups in {len(classes)} conjugacy classes")
    return EXIT_OK


def cmd_group_exfac(run: Run):
    g = load_group(run.args.group)
    with run.phase("exfac"):
        pairs = enumerate_exact_factorizations(g)
    run.report["order"] = g.order
    run.report["pairs"] = [p.to_json(g) for p in pairs]
    nontriv = [p for p in pairs if not p.trivial]
    run.report["nontrivial"] = len(nontriv)
    run.report["nontrivial_up_to_conjugacy_and_swap"] = sum(1 for p in nontriv if p.representative)
    for p in pairs:
        tag = "trivial" if p.trivial else ("representative" if p.representative else "")
        run.say(
            f"G1 = {{{', '.join(g.labels[e] for e in p.h1.elements)}}}  G2 = {{{', '.join(g.labels[e] for e in p.h2.elements)}}}  {tag}".rstrip()
        )
    run.say(f"{len(pairs)} ordered pairs, {len(nontriv)} nontrivial, {run.report['nontrivial_up_to_conjugacy_and_swap']} up to conjugacy and swap")
    return EXIT_OK


def cmd_coh_h3(run: Run):
    g = load_group(run.args.group)
    with run.phase("h4"):
        h = h4_integral(g, limit=run.args.limit, seed=run.args.seed, progress=run.progress)
    run.report["order"] = g.order
    run.report["invariant_factors"] = list(h.invariant_factors)
    run.report["group_order"] = h.order
    run.report["certified"] = h.certified
    run.report["coefficients"] = "Q/Z (computed as H^4(G, Z))"
    if run.args.generators:
        gens = []
        for d, z in zip(h.invariant_factors, h.generators):
            om = omega_from_z(g, z)
            gens.append({"order": d, "cocycle": z.to_json(), "omega": om.to_json()})
        run.report["generators"] = gens
    desc = " + ".join(f"Z/{d}" for d in h.invariant_factors) or "0"
    run.say(f"H^3(G, Q/Z) = H^4(G, Z) = {desc}  (order {h.order})")
    return EXIT_OK


def _split_elements(text: str) -> list[str]:
    text = text.strip()
    if text.startswith("["):
        try:
            return [str(x) for x in json.loads(text)]
        except json.JSONDecodeError as exc:
            raise InputError(f"cannot parse element list {text!r}: {exc.msg}") from exc
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
            continue
        depth += ch in "([{"
        depth -= ch in ")]}"
        cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def _parse_subgroup(g, text):
    idx = []
    for item in _split_elements(text):
        if item in g.labels:
            idx.append(g.labels.index(item))
        elif item.lstrip("-").isdigit() and 0 <= int(item) < g.order:
            idx.append(int(item))
        else:
            raise InputError(f"unknown group element {item!r}")
    return subgroup_of(g, idx)


def cmd_classify(run: Run):
    g = load_group(run.args.group)
    g1 = _parse_subgroup(g, run.args.g1)
    g2 = _parse_subgroup(g, run.args.g2)
    with run.phase("classify"):
        res = classify_pointed(g, g1, g2, limit=run.args.limit, progress=run.progress)
    run.report.update(res.to_json())
    omegas = []
    for z in res.cocycles:
        om = omega_from_z(g, z)
        omegas.append(om.to_json())
    run.report["omegas"] = omegas
    desc = " + ".join(f"Z/{d}" for d in res.invariant_factors) or "0"
    run.say(f"classes in H^3(G, Q/Z) trivial on G1 and G2: {desc} (order {res.order})")
    if res.h4 is not None:
        run.say(f"H^3(G, Q/Z) = {' + '.join(f'Z/{d}' for d in res.h4.invariant_factors) or '0'}")
    for d, coeffs, om in zip(res.invariant_factors, res.coefficients, omegas):
        nz = [(i, v) for i, v in enumerate(om["values"]) if v != "0"][:8]
        run.say(f"  generator of order {d}, coefficients {list(coeffs)}; omega values (cell, value): {nz}")
    return EXIT_OK


def _emit(run: Run, obj, what: str):
    text = format_json(obj) + "\n"
    if run.args.output:
        Path(run.args.output).write_text(text)
        run.say(f"wrote {what} to {run.args.output}")
        run.report["output"] = run.args.output
    else:
        run.lines.append(text.rstrip("\n"))
    run.report["result"] = obj


def cmd_build(run: Run):
    a = run.args
    kind = a.kind
    if kind == "vec":
        data = vec_of_group(load_group(a.args[0]))
    elif kind == "rep-zp":
        data = rep_zp_char_p(_int_arg(a.args, "p"))
    elif kind == "taft":
        data = taft_like(_int_arg(a.args, "n"))
    elif kind == "deligne":
        if len(a.args) != 2:
            raise InputError("build deligne needs two category files")
        b, ea, ec = deligne_product(_load_valid_category(a.args[0]), _load_valid_category(a.args[1]))
        data = b
        if a.embeddings:
            if not a.output:
                raise InputError("--embeddings needs -o so the embeddings can name their target")
            for tag, e, src in (("a", ea, a.args[0]), ("c", ec, a.args[1])):
                path = Path(f"{a.embeddings}.{tag}.emb.json")
                base = path.resolve().parent
                emb = {
                    "source": os.path.relpath(Path(src).resolve(), base),
                    "target": os.path.relpath(Path(a.output).resolve(), base),
                    "map": list(e.map),
                }
                path.write_text(json.dumps(emb) + "\n")
    elif kind == "op":
        data = opposite(_load_valid_category(a.args[0]))
    elif kind == "group":
        if not a.args:
            raise InputError("build group needs a family: cyclic|dihedral|symmetric|product")
        fam, rest = a.args[0], a.args[1:]
        if fam == "cyclic":
            grp = cyclic(_int_arg(rest, "n"))
        elif fam == "dihedral":
            grp = dihedral(_int_arg(rest, "n"))
        elif fam == "symmetric":
            grp = symmetric(_int_arg(rest, "n"))
        elif fam == "product":
            if len(rest) != 2:
                raise InputError("build group product needs two group files")
            grp = direct_product(load_group(rest[0]), load_group(rest[1]))
        else:
            raise InputError(f"unknown group family {fam!r}")
        _emit(run, group_to_json(grp), f"group of order {grp.order}")
        return EXIT_OK
    else:
        raise InputError(f"unknown build kind {kind!r}")
    _emit(run, category_to_json(data), f"category with {data.n} simples")
    return EXIT_OK


def _int_arg(args, name):
    if len(args) != 1:
        raise InputError(f"expected one integer argument {name}")
    try:
        return int(args[0])
    except ValueError:
        raise InputError(f"{name} must be an integer, got {args[0]!r}") from None


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a machine-readable report")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized internals (default 0)")
    common.add_argument("--threads", type=int, default=None, help="cap on worker threads")
    common.add_argument("--timing", action="store_true", help="include per-phase timings (ms)")
    common.add_argument("--quiet", action="store_true", help="no progress messages on stderr")

    p = argparse.ArgumentParser(prog="tenfact", description="Grothendieck-level computations with finite tensor categories.")
    p.add_argument("--version", action="version", version=f"tenfact {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="validate category data")
    s.add_argument("category")
    s.set_defaults(func=cmd_check, command_name="check")

    s = sub.add_parser("fpdim", parents=[common], help="Frobenius-Perron dimensions and predicates")
    s.add_argument("category")
    s.add_argument("--tol", type=float, default=1e-12)
    s.set_defaults(func=cmd_fpdim, command_name="fpdim")

    for name, func, helptext in (
        ("factorize", cmd_factorize, "decide or search exact factorizations"),
        ("closure", cmd_closure, "support of AC, intersection and FPdim ratio check"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("category")
        s.add_argument("--a", help="embedding file of A")
        s.add_argument("--c", help="embedding file of C")
        if name == "factorize":
            s.add_argument("--auto", action="store_true", help="search all pairs of subcategories (fusion data)")
        s.set_defaults(func=func, command_name=name)

    s = sub.add_parser("group", help="finite group commands")
    gsub = s.add_subparsers(dest="group_command", required=True)
    t = gsub.add_parser("subgroups", parents=[common], help="all subgroups with conjugacy classes")
    t.add_argument("group")
    t.set_defaults(func=cmd_group_subgroups, command_name="group subgroups")
    t = gsub.add_parser("exfac", parents=[common], help="exact factorizations G = G1 G2")
    t.add_argument("group")
    t.set_defaults(func=cmd_group_exfac, command_name="group exfac")

    s = sub.add_parser("coh", help="group cohomology")
    csub = s.add_subparsers(dest="coh_command", required=True)
    t = csub.add_parser("h3", parents=[common], help="H^3(G, Q/Z) via H^4(G, Z)")
    t.add_argument("group")
    t.add_argument("--limit", type=int, default=8, help="largest group order attempted (default 8)")
    t.add_argument("--generators", action="store_true", help="also report generator cocycles")
    t.set_defaults(func=cmd_coh_h3, command_name="coh h3")

    s = sub.add_parser("classify", parents=[common], help="classes of H^3(G, Q/Z) trivial on G1 and G2")
    s.add_argument("group")
    s.add_argument("--g1", required=True, help="elements of G1 (labels or indices, comma-separated or JSON list)")
    s.add_argument("--g2", required=True, help="elements of G2")
    s.add_argument("--limit", type=int, default=8)
    s.set_defaults(func=cmd_classify, command_name="classify")

    s = sub.add_parser("build", parents=[common], help="write standard category or group data")
    s.add_argument("kind", choices=["vec", "rep-zp", "taft", "deligne", "op", "group"])
    s.add_argument("args", nargs="*")
    s.add_argument("-o", "--output", help="output file (default: standard output)")
    s.add_argument("--embeddings", metavar="PREFIX", help="deligne: also write PREFIX.a.emb.json and PREFIX.c.emb.json")
    s.set_defaults(func=cmd_build, command_name="build")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    kernels.set_threads(args.threads)
    r = Run(args)
    r.report["argv"] = list(sys.argv[1:] if argv is None else argv)
    try:
        code = args.func(r)
    except TenfactError as exc:
        code = exc.exit_code
        r.report["status"] = FAIL
        details = {k: v for k, v in exc.details.items() if _jsonable(v)}
        r.report["error"] = {"code": exc.code, "message": str(exc), "details": details}
        r.lines = []
        print(f"tenfact: error: {exc}", file=sys.stderr)
    if args.timing:
        r.report["timing"] = r.timing
    if args.json:
        print(json.dumps(r.report, indent=2, sort_keys=True))
    else:
        for line in r.lines:
            print(line)
        if args.timing:
            for k, v in r.timing.items():
                print(f"time {k}: {v} ms")
    return code


def _jsonable(v) -> bool:
    try:
        json.dumps(v)
        return True
    except TypeError:
        return False


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
