"""``homnambu`` command-line interface.

Exit codes: 0 when every check passes (or a file was written), 1 when a check
or a construction precondition fails, 2 on usage or file errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import List, Optional

from . import arity, examples, formats, homalg, nambu, symbolic
from .exactlin import FieldSpec
from .homalg import EXHAUSTIVE, SAMPLED, CheckReport, HomAlgebra

EXHAUSTIVE_BUDGET = 10 ** 7

STATEMENTS = {
    "assoc": "total Hom-associativity: every Hom-associator as^i vanishes",
    "mult": "multiplicativity: equal twists and α∘μ = μ∘α^{⊗n}",
    "nambu": "n-ary Hom-Nambu identity: the Hom-Jacobian J^n vanishes",
    "morphism": "morphism: f∘μ_A = μ_B∘f^{⊗n} and f∘α_i^A = α_i^B∘f",
    "weak-morphism": "weak morphism: f∘μ_A = μ_B∘f^{⊗n}",
    "twist": "twisting by a weak self-morphism β gives (A, β∘μ, β∘α_i), again totally Hom-associative",
    "expand": "a multiplicative totally Hom-associative n-ary algebra gives one of arity 2^k(n-1)+1 with twist α^{2^k}",
    "reduce": "plugging witnesses a_k..a_1 into the last k slots gives an (n-k)-ary totally Hom-associative algebra",
    "commutator": "the n-commutator of a totally Hom-associative algebra with equal twists is n-ary Hom-Nambu",
    "words": "n-commutator words W_n = {zX_n, -X_n z : z in W_{n-1}}",
    "prove": "the Hom-Jacobian of the n-commutator cancels term by term under total Hom-associativity",
    "example": "bundled example algebra",
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Optional[str], text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load_alg(path: str) -> HomAlgebra:
    return formats.parse_algebra(_read(path))


def _labels(A: HomAlgebra):
    return lambda k: A.labels[k] if isinstance(k, int) and 0 <= k < len(A.labels) else k


def _guard(args, dim: int, nargs: int) -> None:
    if args.mode == EXHAUSTIVE and dim ** nargs > EXHAUSTIVE_BUDGET and not args.force:
        raise UsageError(f"exhaustive scan of {dim}^{nargs} = {dim ** nargs} tuples exceeds "
                         f"{EXHAUSTIVE_BUDGET}; use --mode sampled or --force")


def _scan_kw(args) -> dict:
    return {"mode": args.mode, "trials": args.trials, "seed": args.seed}


class Run:
    """Collects check reports and renders the final run report."""

    def __init__(self, args, argv, statement: str):
        self.args = args
        self.argv = argv
        self.statement = statement
        self.reports: List[dict] = []
        self.extra: dict = {}
        self.failed = False
        self.t0 = time.perf_counter()

    def add(self, rep: CheckReport, A: Optional[HomAlgebra] = None) -> bool:
        self.reports.append(rep.to_dict(_labels(A) if A is not None else None))
        if not rep.passed:
            self.failed = True
        return rep.passed

    def finish(self, out=None) -> int:
        out = out or sys.stdout
        payload = {
            "command": ["homnambu"] + list(self.argv),
            "statement": self.statement,
            "reports": self.reports,
        }
        payload.update(self.extra)
        payload["seed"] = getattr(self.args, "seed", None)
        payload["wall_time"] = round(time.perf_counter() - self.t0, 6)
        if getattr(self.args, "json", False):
            out.write(json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
        else:
            out.write(render(payload))
        return 1 if self.failed else 0


def render(payload: dict) -> str:
    lines = [f"statement: {payload['statement']}"]
    for r in payload["reports"]:
        line = f"{r['identity']}: {r['verdict'].upper()} ({r['mode']}, {r['tuples_checked']} tuples"
        if r["mode"] == SAMPLED:
            line += f", seed {r['seed']}"
        lines.append(line + ")")
        cx = r.get("counterexample")
        if cx:
            idx = f" index {cx['index']}" if cx["index"] is not None else ""
            lines.append(f"  counterexample [{cx['identity']}{idx}] at ({', '.join(map(str, cx['args']))})")
            lines.append(f"    lhs = {_fmt_vec(cx['lhs'])}")
            lines.append(f"    rhs = {_fmt_vec(cx['rhs'])}")
        for note in r.get("notes", []):
            lines.append(f"  note: {note}")
    for key in ("construction", "output", "arity", "dim"):
        if key in payload:
            lines.append(f"{key}: {payload[key]}")
    lines.append(f"wall time: {payload['wall_time']:.3f} s")
    return "\n".join(lines) + "\n"


def _fmt_vec(d: dict) -> str:
    if not d:
        return "0"
    return " + ".join(f"{c}*{k}" for k, c in d.items())


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def cmd_check(args, argv) -> int:
    kind = args.kind
    if kind == "morphism":
        if len(args.files) != 2 or not args.map:
            raise UsageError("check morphism needs --map f.mat SOURCE.alg TARGET.alg")
        A, B = _load_alg(args.files[0]), _load_alg(args.files[1])
        f = formats.parse_matrix(_read(args.map), A.field)
        run = Run(args, argv, STATEMENTS["weak-morphism" if args.weak else "morphism"])
        _guard(args, A.dim, A.arity)
        check = homalg.check_weak_morphism if args.weak else homalg.check_morphism
        run.add(check(f, A, B, **_scan_kw(args)), B)
        return run.finish()

    if len(args.files) != 1:
        raise UsageError(f"check {kind} takes one algebra file")
    A = _load_alg(args.files[0])
    run = Run(args, argv, STATEMENTS[kind])
    n = A.arity
    if kind == "assoc":
        _guard(args, A.dim, 2 * n - 1)
        run.add(homalg.check_total_hom_associativity(A, **_scan_kw(args)), A)
    elif kind == "mult":
        _guard(args, A.dim, n)
        run.add(homalg.check_multiplicative(A, **_scan_kw(args)), A)
    else:
        _guard(args, A.dim, 2 * n - 1)
        if not A.equal_twists:
            run.add(homalg.check_multiplicative(A, mode=args.mode, trials=args.trials, seed=args.seed), A)
        else:
            run.add(nambu.check_hom_nambu(A, **_scan_kw(args)), A)
    return run.finish()


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def _finish_transform(run: Run, B: HomAlgebra, construction: str, out_path: str) -> int:
    run.extra.update(construction=construction, arity=B.arity, dim=B.dim, output=out_path)
    _write(out_path, formats.dump_algebra(B))
    return run.finish(sys.stderr if out_path in (None, "-") else None)


def cmd_twist(args, argv) -> int:
    A = _load_alg(args.input)
    beta = formats.parse_matrix(_read(args.morphism), A.field)
    run = Run(args, argv, STATEMENTS["twist"])
    if not args.unchecked:
        _guard(args, A.dim, A.arity)
        if not run.add(homalg.check_weak_morphism(beta, A, A, **_scan_kw(args)), A):
            return run.finish()
    B = homalg.yau_twist(A, beta, check=False)
    return _finish_transform(run, B, "yau_twist", args.output)


def cmd_expand(args, argv) -> int:
    A = _load_alg(args.input)
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    run = Run(args, argv, STATEMENTS["expand"])
    if args.k == 0:
        return _finish_transform(run, A, "identity", args.output)
    if not args.unchecked:
        _guard(args, A.dim, A.arity)
        if not run.add(homalg.check_multiplicative(A, **_scan_kw(args)), A):
            return run.finish()
    elif not A.equal_twists:
        raise UsageError("expansion needs equal twisting maps")
    B = arity.expand_arity_k(A, args.k, check=False)
    return _finish_transform(run, B, f"expand_arity k={args.k}", args.output)


def cmd_reduce(args, argv) -> int:
    A = _load_alg(args.input)
    ws = [formats.parse_vector(_read(p), A.field, A.dim) for p in args.witness]
    run = Run(args, argv, STATEMENTS["reduce"])
    if A.arity < 3 or len(ws) > A.arity - 2:
        raise UsageError(f"cannot plug {len(ws)} witnesses into a {A.arity}-ary product")
    if not args.unchecked:
        if not run.add(arity.check_staged_conditions(A, ws), A):
            return run.finish()
    B = arity.reduce_arity_seq(A, ws, check=False)
    return _finish_transform(run, B, f"reduce_arity k={len(ws)}", args.output)


def cmd_commutator(args, argv) -> int:
    A = _load_alg(args.input)
    run = Run(args, argv, STATEMENTS["commutator"])
    if not A.equal_twists:
        run.add(homalg.check_multiplicative(A), A)
        run.reports[-1]["notes"] = ["the n-commutator construction needs equal twisting maps"]
        run.failed = True
        return run.finish()
    if not args.unchecked:
        _guard(args, A.dim, 2 * A.arity - 1)
        if not run.add(homalg.check_total_hom_associativity(A, **_scan_kw(args)), A):
            return run.finish()
    B = nambu.commutator_algebra(A, check=False)
    return _finish_transform(run, B, "n_commutator", args.output)


# ---------------------------------------------------------------------------
# words / prove
# ---------------------------------------------------------------------------

def cmd_words(args, argv) -> int:
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    words = nambu.commutator_words(args.n)
    if args.json:
        print(json.dumps({"n": args.n, "count": len(words), "words": [str(w) for w in words]}))
    else:
        for w in words:
            print(w)
    return 0


def cmd_prove(args, argv) -> int:
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    t0 = time.perf_counter()
    rep = symbolic.proof_report(args.n, census=args.census)
    payload = {"command": ["homnambu"] + list(argv), "statement": STATEMENTS["prove"]}
    payload.update(rep)
    payload["wall_time"] = round(time.perf_counter() - t0, 6)
    ok = rep["verdict"] == "Proved" and (not args.census or (rep["census"] or {}).get("pairs") is not None)
    if args.json:
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        print(f"statement: {payload['statement']}")
        print(f"n = {args.n}: {rep['verdict']}, {rep['terms']} terms "
              f"(expected {rep['expected_terms']}), {rep['distinct_normal_forms']} normal forms")
        for r in rep["residual"]:
            print(f"  residual {r['coefficient']:+d} · {' '.join(r['sequence'])}")
        if args.census:
            c = rep["census"]
            if c is None or "error" in c:
                print(f"census: failed {c.get('error', '') if c else ''}")
            else:
                print(f"census: {c['pairs']} cancelling pairs")
                for fam, count in c["families"].items():
                    print(f"  {fam}: {count}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# example
# ---------------------------------------------------------------------------

def _ints(s: str) -> List[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {s!r}") from None


def _field(p: Optional[int]) -> FieldSpec:
    return FieldSpec.Q() if p is None else FieldSpec.Fp(p)


def cmd_example(args, argv) -> int:
    run = Run(args, argv, STATEMENTS["example"])
    if args.family == "braid":
        F = _field(args.p)
        spec = examples.BraidSpec(tuple(_ints(args.dims)), field=F)
        if args.gamma_seed is None:
            A = examples.braid_algebra(spec)
            name = "braid"
        else:
            spec = spec.with_gammas(examples.seeded_gammas(spec.dims, F, args.gamma_seed))
            A = examples.braid_hom_algebra(spec, check=not args.unchecked)
            name = "braid_hom"
            if args.forget_twists:
                A = homalg.forget_twists(A)
                name = "braid_hom_as_plain"
    elif args.family == "polytrunc":
        m = tuple(_ints(args.m)) if args.m else ()
        spec = examples.PolySpec(args.r, args.n, args.D, m, field=_field(args.p))
        A = examples.trunc_poly_algebra(spec, twisted=not args.untwisted, finite=True)
        name = "polytrunc"
    else:
        if args.p is None:
            raise UsageError("eigenspace needs --p")
        A = examples.eigenspace_algebra(args.p, args.n, args.D, int(args.m or 1), twisted=not args.untwisted)
        name = "eigenspace"
    return _finish_transform(run, A, name, args.output)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _scan_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=[EXHAUSTIVE, SAMPLED], default=EXHAUSTIVE)
    p.add_argument("--trials", type=int, default=10_000, help="sampled tuples (default 10^4)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force", action="store_true", help=f"allow exhaustive scans beyond {EXHAUSTIVE_BUDGET} tuples")
    p.add_argument("--json", action="store_true", help="machine-readable report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homnambu", description="Exact checks and constructions for n-ary Hom-algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify an identity on an algebra file")
    p.add_argument("kind", choices=["assoc", "mult", "nambu", "morphism"])
    p.add_argument("files", nargs="+")
    p.add_argument("--map", help="matrix file of the map (check morphism)")
    p.add_argument("--weak", action="store_true", help="only check compatibility with the products")
    _scan_options(p)
    p.set_defaults(func=cmd_check)

    def transform(name, func, help):
        q = sub.add_parser(name, help=help)
        q.add_argument("input")
        q.add_argument("output", nargs="?", default="-")
        q.add_argument("--unchecked", action="store_true", help="skip precondition checks")
        _scan_options(q)
        q.set_defaults(func=func)
        return q

    transform("twist", cmd_twist, "Yau twist by a weak self-morphism").add_argument("--morphism", required=True)
    transform("expand", cmd_expand, "raise the arity to 2^k(n-1)+1").add_argument("--k", type=int, default=1)
    transform("reduce", cmd_reduce, "lower the arity by plugging witnesses").add_argument(
        "--witness", action="append", required=True, help="vector file; repeat for a_1, a_2, ..")
    transform("commutator", cmd_commutator, "the n-commutator bracket algebra")

    p = sub.add_parser("words", help="list n-commutator words")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_words)

    for name in ("prove", "prove-commutator"):
        p = sub.add_parser(name, help="symbolic Hom-Nambu proof for the n-commutator")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--census", action="store_true", help="also build the cancelling-pair matching")
        p.add_argument("--json", action="store_true")
        p.set_defaults(func=cmd_prove)

    p = sub.add_parser("example", help="write a bundled example algebra")
    p.add_argument("family", choices=["braid", "polytrunc", "eigenspace"])
    p.add_argument("output", nargs="?", default="-")
    p.add_argument("--dims", default="1,1", help="braid: comma-separated d_1..d_n")
    p.add_argument("--gamma-seed", type=int, help="braid: twist by seeded invertible gammas")
    p.add_argument("--forget-twists", action="store_true", help="braid: keep α∘μ but use identity twists")
    p.add_argument("--r", type=int, default=1, help="polytrunc: number of variables")
    p.add_argument("--n", type=int, default=2, help="polytrunc/eigenspace: arity minus one")
    p.add_argument("--D", type=int, default=13, help="degree cap")
    p.add_argument("--m", help="twist exponent(s), comma-separated, each = 1 mod n")
    p.add_argument("--p", type=int, help="prime for F_p (required for eigenspace)")
    p.add_argument("--untwisted", action="store_true", help="product μ with identity twists")
    p.add_argument("--unchecked", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_example)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, argv)
    except homalg.CheckFailed as exc:
        print(f"homnambu: {exc}", file=sys.stderr)
        if getattr(args, "json", False):
            print(json.dumps(exc.report.to_dict(), ensure_ascii=False, indent=2))
        return 1
    except (UsageError, ValueError) as exc:
        print(f"homnambu: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
