"""Command-line front end.

Exit codes: 0 success, 1 a design was rejected, 2 usage/parse error or
missing file, 3 order outside the spectrum, 4 an ingredient could not be
provided or a search ran out of budget.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import __version__
from .action import GroupAction, parse_action
from .catalogue import (
    CatalogueEntry,
    builtin_catalogue,
    derived_catalogue,
    parse_catalogue,
    save_derived,
    serialize,
)
from .errors import (
    BudgetExhausted,
    CatalogueSyntaxError,
    IngredientMissing,
    InfeasibleArity,
    NotInSpectrum,
    ThetaDesignError,
)
from .theta import HostGraph, enumerate_thetas, make_theta, parse_host_label, spectrum_membership
from .verify import verify_decomposition

EXIT_OK, EXIT_REJECT, EXIT_USAGE, EXIT_SPECTRUM, EXIT_MISSING = 0, 1, 2, 3, 4
SCHEMA = 1


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps({"schema": SCHEMA, **payload}, sort_keys=True))
    elif text:
        print(text)


def _theta(args):
    try:
        return make_theta(args.a, args.b, args.c)
    except ValueError as exc:
        raise _Usage(str(exc)) from None


class _Usage(Exception):
    pass


# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    results = []
    for p in args.paths:
        path = Path(p)
        try:
            text = path.read_text()
        except OSError as exc:
            print(f"error: cannot read {p}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_USAGE
        try:
            entries = parse_catalogue(text, str(path))
        except CatalogueSyntaxError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        for e in entries:
            results.append((str(path), e, verify_decomposition(e.decomposition)))
    ok = sum(1 for _, _, c in results if c.accepted)
    lines = []
    for path, e, cert in results:
        verdict = "accepted" if cert.accepted else "REJECTED"
        lines.append(f"{e.theta} {e.host.label()}: {verdict}, {cert.block_count} blocks")
        if not cert.accepted:
            lines.extend("  " + str(v) for v in cert.violations[:args.max_violations])
    lines.append(f"{ok}/{len(results)} accepted")
    _emit(args, {"command": "verify", "accepted": ok, "total": len(results),
                 "certificates": [dict(c.to_dict(), file=p) for p, _, c in results]}, "\n".join(lines))
    return EXIT_OK if ok == len(results) else EXIT_REJECT


def cmd_construct(args) -> int:
    from .construct import execute, plan

    theta = _theta(args)
    try:
        pl = plan(theta, args.n)
    except NotInSpectrum as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPECTRUM
    if args.explain and args.format != "json":
        print(pl.explain())
    try:
        d = execute(pl, jobs=args.jobs)
    except (IngredientMissing, BudgetExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    cert = verify_decomposition(d)
    summary = f"{theta} K({args.n}): {cert.block_count} blocks, {'verified' if cert.accepted else 'REJECTED'}"
    entry = CatalogueEntry(d, f"construct {theta.a} {theta.b} {theta.c} --n {args.n}")
    if args.output == "-":
        sys.stdout.write(serialize([entry]))
    elif args.output:
        Path(args.output).write_text(serialize([entry]))
    payload = {"command": "construct", "theta": [theta.a, theta.b, theta.c], "n": args.n,
               "blocks": cert.block_count, "verified": cert.accepted}
    if args.explain:
        payload["plan"] = pl.to_dict()
    if args.format == "json" and args.output == "-":
        payload["decomposition"] = [list(b) for b in d.base_blocks]
    if args.output != "-" or args.format == "json":
        _emit(args, payload, summary)
    return EXIT_OK if cert.accepted else EXIT_REJECT


def cmd_spectrum(args) -> int:
    from .construct import plan, refusal_reason, spectrum_table

    theta = _theta(args)
    table = spectrum_table(theta, args.max, build=not args.plan_only)
    rows, lines = [], []
    for n, ok in table:
        member = spectrum_membership(theta, n)
        if member:
            how = plan(theta, n).root.kind
            note = how if ok else f"{how} FAILED"
        else:
            note = refusal_reason(theta, n)
        rows.append({"n": n, "in_spectrum": member, "constructed": ok, "note": note})
        if member or args.all:
            lines.append(f"{n:5d}  {'yes' if ok else 'no '}  {note}")
    admissible = sum(1 for r in rows if r["in_spectrum"])
    built = sum(1 for r in rows if r["constructed"])
    verb = "planned" if args.plan_only else "constructed"
    lines.append(f"{admissible} admissible orders <= {args.max}, {built} {verb}")
    _emit(args, {"command": "spectrum", "theta": [theta.a, theta.b, theta.c], "max": args.max,
                 "admissible": admissible, "rows": rows}, "\n".join(lines))
    return EXIT_OK if built == admissible else EXIT_MISSING


def cmd_enumerate(args) -> int:
    try:
        thetas = enumerate_thetas(args.e)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    nb = sum(1 for t in thetas if t.bipartite)
    lines = [f"{t}{'  bipartite' if t.bipartite else ''}" for t in thetas]
    lines.append(f"{len(thetas)} graphs, {nb} bipartite")
    _emit(args, {"command": "enumerate", "e": args.e, "count": len(thetas), "bipartite": nb,
                 "thetas": [{"abc": [t.a, t.b, t.c], "bipartite": t.bipartite} for t in thetas]},
          "\n".join(lines))
    return EXIT_OK


_MOD_RE = re.compile(r"^\s*\+\s*(\d+)\s+mod\s+(\d+)\s*$")


def _parse_host(text: str) -> HostGraph:
    t = text.strip()
    m = re.fullmatch(r"K(\d+)", t)
    if m:
        return HostGraph.complete(int(m.group(1)))
    try:
        sizes = parse_host_label(t)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    return HostGraph.complete(sizes[0]) if len(sizes) == 1 else HostGraph.multipartite(sizes)


def _parse_act(text: str, fix: str, n: int) -> GroupAction:
    m = _MOD_RE.match(text or "")
    try:
        if m:
            step, mod = int(m.group(1)), int(m.group(2))
            if mod > n:
                raise ValueError(f"modulus {mod} exceeds host order {n}")
            extra = f"{mod}..{n - 1}" if mod < n else ""
            return parse_action(f"(0..{mod - 1} +{step})", " ".join(x for x in (fix, extra) if x))
        return parse_action(text or "", fix or "")
    except ValueError as exc:
        raise _Usage(f"bad action: {exc}") from None


def cmd_search(args) -> int:
    from .search import SearchProblem, search

    theta = _theta(args)
    host = _parse_host(args.host)
    action = _parse_act(args.act, args.fix, host.n) if (args.act or args.fix) else GroupAction.cyclic(host.n)
    if action.point_count != host.n:
        raise _Usage(f"action covers {action.point_count} points, host {host.label()} has {host.n}")
    try:
        p = SearchProblem(theta, host, action, args.developed, args.fixed, restarts=args.restarts,
                          steps=args.steps, seed=args.seed, jobs=args.jobs)
    except InfeasibleArity as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        d = search(p)
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit(args, {"command": "search", "found": False, "best_cost": exc.best_cost}, "")
        return EXIT_MISSING
    cert = verify_decomposition(d)
    note = f"search seed={p.base_seed()} budget={p.restarts}x{p.steps}"
    entry = CatalogueEntry(d, note)
    path = None if args.no_save else save_derived(entry)
    lines = [serialize([entry]).rstrip("\n"),
             f"{theta} {host.label()}: {cert.block_count} blocks, {'verified' if cert.accepted else 'REJECTED'}"]
    if path:
        lines.append(f"saved to {path}")
    _emit(args, {"command": "search", "found": True, "verified": cert.accepted,
                 "base_blocks": [list(b) for b in d.base_blocks], "seed": p.base_seed(),
                 "saved": str(path) if path else None}, "\n".join(lines))
    return EXIT_OK if cert.accepted else EXIT_REJECT


def _selected(args) -> list[CatalogueEntry]:
    entries = list(builtin_catalogue())
    if not args.builtin_only:
        entries += list(derived_catalogue())
    if args.theta:
        want = make_theta(*args.theta)
        entries = [e for e in entries if e.theta == want]
    if args.host:
        key = _parse_host(args.host).key()
        entries = [e for e in entries if e.host.key() == key]
    return entries


def cmd_catalogue(args) -> int:
    entries = _selected(args)
    if args.action == "list":
        lines = [f"{e.theta} {e.host.label()}: {e.decomposition.expanded_count} blocks  [{e.source}]"
                 for e in entries]
        lines.append(f"{len(entries)} entries")
        _emit(args, {"command": "catalogue list", "entries": [
            {"theta": [e.theta.a, e.theta.b, e.theta.c], "host": e.host.label(),
             "blocks": e.decomposition.expanded_count, "source": e.source} for e in entries]},
              "\n".join(lines))
        return EXIT_OK
    text = serialize(entries)
    if args.output and args.output != "-":
        Path(args.output).write_text(text)
        print(f"{len(entries)} entries written to {args.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="thetadesign", description="Theta graph designs: verify, construct, search.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    def theta_args(p):
        p.add_argument("a", type=int)
        p.add_argument("b", type=int)
        p.add_argument("c", type=int)

    p = sub.add_parser("verify", parents=[common], help="verify catalogue files")
    p.add_argument("paths", nargs="+")
    p.add_argument("--max-violations", type=int, default=5)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", parents=[common], help="build a design of order n")
    theta_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--explain", action="store_true", help="print the construction plan")
    p.add_argument("--output", help="write the design in catalogue format ('-' for stdout)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("spectrum", parents=[common], help="tabulate constructible orders")
    theta_args(p)
    p.add_argument("--max", type=int, default=100)
    p.add_argument("--plan-only", action="store_true", help="plan but do not build")
    p.add_argument("--all", action="store_true", help="also list refused orders")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("enumerate", parents=[common], help="list theta graphs with e edges")
    p.add_argument("e", type=int)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("search", parents=[common], help="search for base blocks under an action")
    theta_args(p)
    p.add_argument("--host", required=True, help="K21, K(21) or K(5,10)")
    p.add_argument("--act", default="", help="'+1 mod 21' or '(0..20 +1)'")
    p.add_argument("--fix", default="", help="fixed points, e.g. '20' or '15..19'")
    p.add_argument("--developed", type=int, default=1)
    p.add_argument("--fixed", type=int, default=0, help="number of undeveloped blocks")
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--steps", type=int, default=200_000)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-save", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("catalogue", parents=[common], help="list or export catalogue entries")
    p.add_argument("action", choices=("list", "export"))
    p.add_argument("--theta", type=int, nargs=3, metavar=("A", "B", "C"))
    p.add_argument("--host")
    p.add_argument("--builtin-only", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_catalogue)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotInSpectrum as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPECTRUM
    except (IngredientMissing, BudgetExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except ThetaDesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECT


if __name__ == "__main__":
    sys.exit(main())
