"""Command-line front end.

Every command takes a signature file first; a missing path whose basename
names a bundled fixture (``lambda.hrs``, ``ccs.hrs``) falls back to it.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from .errors import Perm2Error
from .kernel import show_type
from .proofterm import judge
from .rewrite import STRATEGIES, LEFTMOST_OUTERMOST, format_path, normalize_by_rules, flatten_proof
from .signature import is_hrs, validate_signature
from .syntax import (
    parse_context,
    parse_proof,
    parse_signature,
    parse_term,
    show_proof,
    show_signature,
    show_term,
)

FIXTURES = ("lambda.hrs", "ccs.hrs")


def fixture_text(name: str) -> str:
    return resources.files("perm2").joinpath("fixtures", name).read_text()


def load_signature(path: str):
    if os.path.exists(path):
        with open(path) as fh:
            return parse_signature(fh.read())
    base = os.path.basename(path)
    if base in FIXTURES:
        return parse_signature(fixture_text(base))
    raise FileNotFoundError(path)


class Out:
    """Collects plain lines or a JSON object and tracks errors."""

    def __init__(self, as_json: bool, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout
        self.data = {}
        self.errors = 0
        mode = os.environ.get("PERM2_COLOR", "auto")
        tty = hasattr(self.stream, "isatty") and self.stream.isatty()
        self.color = mode == "always" or (mode == "auto" and tty)

    def paint(self, text, good: bool):
        if not self.color:
            return text
        return f"\033[{32 if good else 31}m{text}\033[0m"

    def line(self, text=""):
        if not self.as_json:
            print(text, file=self.stream)

    def put(self, key, value):
        self.data[key] = value

    def error(self, msg):
        self.errors += 1
        self.data.setdefault("errors", []).append(msg)
        if not self.as_json:
            print(self.paint("error: ", False) + msg, file=self.stream)

    def finish(self) -> int:
        if self.as_json:
            self.data["ok"] = self.errors == 0
            print(json.dumps(self.data, indent=2, sort_keys=True), file=self.stream)
        return 0 if self.errors == 0 else 1


# ---------------------------------------------------------------- commands

def cmd_check(args, out: Out):
    sig = load_signature(args.file)
    rep = validate_signature(sig)
    hrs, issues = is_hrs(sig) if rep.ok else (False, [])
    out.put("valid", rep.ok)
    out.put("hrs", hrs)
    out.put("issues", [str(i) for i in rep.issues + issues])
    for i in rep.issues:
        out.error(str(i))
    if rep.ok and hrs:
        out.line(out.paint("valid HRS", True))
    elif rep.ok:
        out.line("valid signature, not an HRS:")
        for i in issues:
            out.line(f"  {i}")


def cmd_show(args, out: Out):
    sig = load_signature(args.file)
    text = show_signature(sig)
    out.put("signature", text)
    out.line(text.rstrip("\n"))


def cmd_normalize(args, out: Out):
    sig = load_signature(args.file)
    ctx = parse_context(args.ctx)
    from .kernel import beta_eta_normalize, infer_type
    m = parse_term(args.term, ctx, sig)
    ty = infer_type(ctx.types, m, sig.ops)
    nf = beta_eta_normalize(ctx, m, ty, sig)
    out.put("term", show_term(nf, ctx, sig))
    out.put("type", show_type(ty))
    out.line(f"{show_term(nf, ctx, sig)} : {show_type(ty)}")


def cmd_typecheck_proof(args, out: Out):
    sig = load_signature(args.file)
    ctx = parse_context(args.ctx)
    j = judge(ctx, parse_proof(args.proof, ctx, sig), sig)
    out.put("source", show_term(j.source, ctx, sig))
    out.put("target", show_term(j.target, ctx, sig))
    out.put("type", show_type(j.type))
    out.line(f"{show_term(j.source, ctx, sig)} => {show_term(j.target, ctx, sig)} : {show_type(j.type)}")


def cmd_equiv(args, out: Out):
    from .permeq import perm_equiv, oracle_equiv
    sig = load_signature(args.file)
    ctx = parse_context(args.ctx)
    p = judge(ctx, parse_proof(args.proof1, ctx, sig), sig)
    q = judge(ctx, parse_proof(args.proof2, ctx, sig), sig)
    cert = perm_equiv(p, q, sig)
    out.put("verdict", cert.verdict)
    out.line("true" if cert.verdict else "false")
    if cert.reason:
        out.put("reason", cert.reason)
        out.line(f"reason: {cert.reason}")
    for side, cf in (("left", cert.left), ("right", cert.right)):
        if cf is None:
            continue
        steps = [f"{s.rule} @ {format_path(s.position)}" for s in cf.steps]
        out.put(f"{side}_steps", steps)
        out.line(f"{side} canonical: " + (", ".join(steps) if steps else "identity"))
    if args.oracle_budget:
        res = oracle_equiv(p, q, args.oracle_budget, sig)
        out.put("oracle", {"verdict": res.verdict, "explored": res.explored,
                           "trace": [name for name, _, _ in res.trace]})
        out.line(f"oracle: {res.verdict} ({res.explored} explored)")
        for name, path, red in res.trace:
            out.line(f"  {name} @ {format_path(path)} : {show_proof(red, ctx, sig)}")
        if (res.verdict == "yes") != cert.verdict and res.verdict != "budget-exhausted":
            out.error("oracle disagrees with the canonical forms")


def cmd_rewrite(args, out: Out):
    sig = load_signature(args.file)
    ctx = parse_context(args.ctx)
    m = parse_term(args.term, ctx, sig)
    tr, done = normalize_by_rules(sig, ctx, m, args.strategy, args.fuel)
    _trace(out, tr, ctx, sig)
    out.put("terminated", done)
    out.line(f"{len(tr)} steps, " + ("normal form reached" if done else "fuel exhausted"))


def cmd_flatten(args, out: Out):
    sig = load_signature(args.file)
    ctx = parse_context(args.ctx)
    j = judge(ctx, parse_proof(args.proof, ctx, sig), sig)
    tr = flatten_proof(j, sig)
    _trace(out, tr, ctx, sig)


def _trace(out, tr, ctx, sig):
    rows = []
    for s in tr.steps:
        rows.append({"rule": s.rule, "path": list(s.position),
                     "before": show_term(s.before, ctx, sig), "after": show_term(s.after, ctx, sig)})
        out.line(f"{s.rule} @ {format_path(s.position)} : {rows[-1]['before']} => {rows[-1]['after']}")
    out.put("start", show_term(tr.start, ctx, sig))
    out.put("steps", rows)


def cmd_laws(args, out: Out):
    from .laws import run_all
    sig = load_signature(args.file)
    reports = run_all(sig, args.samples, args.seed)
    out.put("suites", {r.name: {"checked": r.checked, "failed": len(r.failures)} for r in reports})
    for r in reports:
        out.line(out.paint(r.line(), r.ok))
        if not r.ok:
            out.error(f"{r.name}: {len(r.failures)} failures, first: {r.failures[0]}")


COMMANDS = {
    "check": cmd_check,
    "show": cmd_show,
    "normalize": cmd_normalize,
    "typecheck-proof": cmd_typecheck_proof,
    "equiv": cmd_equiv,
    "rewrite": cmd_rewrite,
    "flatten": cmd_flatten,
    "laws": cmd_laws,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="perm2", description="Higher-order rewriting with proof terms.")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help, *pos):
        p = sub.add_parser(name, help=help)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        p.add_argument("file", help="signature file")
        for a in pos:
            p.add_argument(a)
        return p

    add("check", "validate a signature and test the HRS conditions")
    add("show", "parse and print a signature")
    add("normalize", "beta-eta normal form of a term", "ctx", "term")
    add("typecheck-proof", "source, target and type of a reduction", "ctx", "proof")
    p = add("equiv", "decide permutation equivalence", "ctx", "proof1", "proof2")
    p.add_argument("--oracle-budget", type=int, default=0, help="also run the brute-force search")
    p = add("rewrite", "rewrite a term with the rules", "ctx", "term")
    p.add_argument("--strategy", choices=STRATEGIES, default=LEFTMOST_OUTERMOST)
    p.add_argument("--fuel", type=int, default=100)
    add("flatten", "read a reduction as a rewrite sequence", "ctx", "proof")
    p = add("laws", "run the law suites on generated instances")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    return ap


def main(argv=None, stream=None) -> int:
    args = build_parser().parse_args(argv)
    out = Out(args.json, stream)
    try:
        COMMANDS[args.command](args, out)
    except (Perm2Error, FileNotFoundError, ValueError) as e:
        out.error(f"{type(e).__name__}: {e}")
    return out.finish()


if __name__ == "__main__":
    sys.exit(main())
