"""Command-line interface.

Exit codes: 0 for a positive verdict, 2 when an obstruction is found, 3 when
a provider lacks a needed value, 1 for input and internal errors.
"""

from __future__ import annotations

import argparse
import datetime
import sys
from typing import List, Optional

from . import fixtures
from . import io
from . import selftest
from . import trees as T
from .bar import bar_basis
from .coalgebra import check_morphism, validate_structure
from .cylinder import cylinder_algebra, homotopy
from .linalg import ComplexConsistencyError, InputError
from .solver import check_f0, gamma_cohomology, realize

EXIT = {"REALIZED": 0, "HOMOTOPIC": 0, "VALID": 0, "OBSTRUCTED": 2, "INSUFFICIENT_PROVIDER": 3, "INVALID": 1}
COMMANDS = ("validate", "realize", "homotopy", "gamma", "bar-basis", "selftest")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="obstruct", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--manifest", help="path to a JSON manifest")
    src.add_argument("--fixture", help="name of a bundled manifest: " + ", ".join(fixtures.names()))
    ap.add_argument("--grade-cutoff", type=int)
    ap.add_argument("--arity-cutoff", type=int)
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--cache-dir", help="directory for cached bar bases")
    return ap


def _cells(C, target, cells) -> List[dict]:
    out = []
    for (key, b), v in cells.items():
        d = io.encode_key(C, key)
        d["target"] = target.names[b]
        d["value"] = target.field.encode(v)
        out.append(d)
    out.sort(key=io.canonical_json)
    return out


def _stages(stages) -> List[dict]:
    return [{"grade": s.grade, "unknowns": s.unknowns, "equations": s.equations,
             "kernel_dim": s.rank_kernel, "cocycle_checked": s.cocycle_checked,
             "full_tree_term": s.full_tree_term} for s in stages]


def _block_dims(prob, grade: int, degree: int) -> dict:
    for blk in gamma_cohomology(prob.A, prob.B, prob.alpha, prob.beta, prob.f0, grade + 1,
                                prob.arity_cutoff, degrees=(degree,)):
        if blk.grade == grade:
            return {"kernel": blk.dim_kernel, "image": blk.dim_image, "quotient": blk.dim_quotient}
    return {}


def cmd_validate(prob, rep) -> str:
    G, R = prob.grade_cutoff, prob.arity_cutoff
    ra = validate_structure(prob.A, prob.alpha, G, R)
    rb = validate_structure(prob.B, prob.beta, G, R)
    rep["alpha_residuals"] = io.encode_values(prob.A, prob.A.algebra, dict(ra))
    rep["beta_residuals"] = io.encode_values(prob.B, prob.B.algebra, dict(rb))
    ok = not ra and not rb
    maps = {}
    if prob.f0:
        try:
            check_f0(prob.A, prob.B, prob.alpha, prob.beta, prob.f0, R)
            maps["f0"] = True
        except InputError:
            maps["f0"] = False
    for name, f in (("homotopy.f0", prob.lower), ("homotopy.f1", prob.upper)):
        if f is not None:
            maps[name] = not check_morphism(prob.A, prob.B, prob.alpha, prob.beta, f, G, R)
    rep["maps"] = maps
    return "VALID" if ok and all(maps.values()) else "INVALID"


def cmd_realize(prob, rep) -> str:
    res = realize(prob.A, prob.B, prob.alpha, prob.beta, prob.f0, prob.grade_cutoff, prob.arity_cutoff)
    rep["stages"] = _stages(res.stages)
    higher = {k: v for k, v in res.f.values.items() if k[0] != 1}
    rep["components"] = io.encode_values(prob.A, prob.B.algebra, higher)
    if res.obstruction is not None:
        ob = res.obstruction
        rep["obstruction"] = {
            "grade": ob.grade,
            "cocycle": io.encode_values(prob.A, prob.B.algebra, ob.cocycle),
            "witness": _cells(prob.A, prob.B.algebra, ob.witness),
            "verified": ob.verify(res.matrix, res.rhs),
            "h1_block": _block_dims(prob, ob.grade, 1),
        }
    return res.verdict


def cmd_homotopy(prob, rep) -> str:
    if prob.lower is None:
        raise InputError("$.homotopy: the manifest has no homotopy section")
    res = homotopy(prob.A, prob.B, prob.alpha, prob.beta, prob.lower, prob.upper,
                   prob.grade_cutoff, prob.arity_cutoff, prob.sigma, prob.diag)
    rep["stages"] = _stages(res.stages)
    rep["components"] = io.encode_values(prob.A, prob.B.algebra, res.f01)
    if res.missing:
        rep["missing_capability"] = res.missing
    if res.obstruction is not None:
        ob = res.obstruction
        cyl = cylinder_algebra(prob.B.algebra)
        rep["obstruction"] = {
            "grade": ob.grade,
            "cocycle": io.encode_values(prob.A, cyl, ob.cocycle),
            "witness": _cells(prob.A, cyl, ob.witness),
            "verified": ob.verify(res.matrix, res.rhs),
            "h0_block": _block_dims(prob, ob.grade, 0),
        }
    return res.verdict


def cmd_gamma(prob, rep) -> str:
    blocks = gamma_cohomology(prob.A, prob.B, prob.alpha, prob.beta, prob.f0,
                              prob.grade_cutoff, prob.arity_cutoff)
    rep["blocks"] = [{"grade": b.grade, "degree": b.degree, "kernel": b.dim_kernel, "image": b.dim_image,
                      "quotient": b.dim_quotient,
                      "representatives": [_cells(prob.A, prob.B.algebra, r) for r in b.representatives]}
                     for b in blocks]
    return "VALID"


def cmd_bar_basis(prob, rep, cache) -> str:
    cells = []
    P = prob.operad
    for n in range(1, prob.arity_cutoff + 1):
        for g in range(prob.grade_cutoff + 1):
            ts = cache.trees(n, g) if cache else bar_basis(prob.calc, n, g)
            cells.append({"arity": n, "grade": g, "count": len(ts),
                          "trees": [T.encode(t, P) for t in ts]})
    rep["cells"] = cells
    return "VALID"


def cmd_selftest(rep) -> str:
    checks = selftest.run()
    rep["checks"] = [{"name": n, "passed": ok} for n, ok in checks]
    return "VALID" if all(ok for _, ok in checks) else "INVALID"


def run(argv: Optional[List[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = _parser().parse_args(argv)
    flags = {"grade_cutoff": args.grade_cutoff, "arity_cutoff": args.arity_cutoff}
    try:
        if args.command == "selftest":
            rep = io.new_report("selftest", None, io.content_hash({"flags": flags}))
            verdict = cmd_selftest(rep)
        else:
            if args.fixture:
                try:
                    doc = fixtures.load(args.fixture)
                except KeyError:
                    raise InputError(f"unknown fixture {args.fixture!r}") from None
            elif args.manifest:
                doc = io.read_json(args.manifest)
            else:
                raise InputError("one of --manifest or --fixture is required")
            prob = io.build_problem(doc, args.grade_cutoff, args.arity_cutoff)
            cache = None
            if args.cache_dir:
                cache = io.BasisCache(args.cache_dir, prob.calc, prob.arity_cutoff)
                cache.attach(prob.A, prob.B)
            rep = io.new_report(args.command, prob, io.content_hash({"manifest": doc, "flags": flags}))
            if args.command == "bar-basis":
                verdict = cmd_bar_basis(prob, rep, cache)
            else:
                verdict = {"validate": cmd_validate, "realize": cmd_realize, "homotopy": cmd_homotopy,
                           "gamma": cmd_gamma}[args.command](prob, rep)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ComplexConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    rep["verdict"] = verdict
    rep["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    text = io.dump_report(rep)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT[verdict]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
