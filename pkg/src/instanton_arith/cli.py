"""Command-line front end: ``instanton-arith <verb> ...``.

Exit codes: 0 when every verdict holds, 1 when one fails, 2 on bad usage or
invalid input.  ``--format json`` emits sorted, exact JSON.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Optional

from . import __version__
from .errors import ArithDataError
from .exactnum import format_rational, is_prime, parse_rational

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _triple(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in text.replace("(", "").replace(")", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated integers, got {text!r}")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated integers, got {text!r}")
    return parts


def _sigma(text: str):
    from .seifert import parse_sigma

    return parse_sigma(text)


def _prime_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        try:
            lo_i, hi_i = int(lo), int(hi)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad range {text!r}")
        primes = [q for q in range(lo_i, hi_i + 1) if is_prime(q)]
        if not primes:
            raise argparse.ArgumentTypeError(f"no primes in {text!r}")
        return primes
    try:
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime {text!r}")


def _envelope(command: list[str], results, ok: bool = True) -> dict:
    return {"tool": "instanton-arith", "version": __version__, "command": command, "ok": ok, "results": results}


# ---------------------------------------------------------------------------
# verbs; each returns (ok, results, text)


def cmd_seifert(args):
    from .seifert import normalize, quotient

    sigma = normalize(args.sigma.a)
    out = {"sphere": sigma.to_json(), "label": sigma.label(), "euler": format_rational(sigma.euler)}
    lines = [f"{sigma.label()}  b = {list(sigma.b)}  e = {format_rational(sigma.euler)}"]
    if args.p:
        Q = quotient(sigma, args.p)
        lvl = normalize(sigma.a, args.p)
        out["quotient"] = Q.to_json()
        out["level"] = lvl.to_json()
        lines.append(f"{Q.label()}  pairs = {[list(x) for x in Q.pairs]}  e = {format_rational(Q.euler)}")
        lines.append(f"{lvl.label()}  b = {list(lvl.b)}")
    return True, out, "\n".join(lines)


def cmd_flat_enumerate(args):
    from .flatconn import enumerate_irreducible

    conns = enumerate_irreducible(args.sigma)
    rows = [c.to_json() for c in conns]
    lines = [f"{'name':8} {'triple':10} {'cs':>10} {'-cs':>10} {'mu':>4} {'rho':>8}"]
    for c in conns:
        lines.append(f"{c.name:8} {','.join(map(str, c.ells)):10} {format_rational(c.cs):>10} "
                     f"{format_rational(c.minus_cs):>10} {'' if c.mu is None else c.mu:>4} "
                     f"{'' if c.rho is None else format_rational(c.rho):>8}")
    return True, rows, "\n".join(lines)


def cmd_flat_cs(args):
    from .flatconn import choose_representative, cs_irreducible, cs_reducible
    from .seifert import quotient

    sigma = args.sigma
    if args.reducible is not None:
        if not args.p:
            raise UsageError("--reducible needs --p")
        Q = quotient(sigma, args.p)
        cs = cs_reducible(Q, args.reducible)
        out = {"space": Q.label(), "kind": "reducible", "k": args.reducible, "cs": format_rational(cs),
               "minus_cs": format_rational((-cs) % 1)}
        return True, out, f"{Q.label()} beta{args.reducible}: cs = {format_rational(cs)}"
    if args.triple is None:
        raise UsageError("flat cs needs --triple or --reducible")
    space = quotient(sigma, args.p) if args.p else sigma
    cs = cs_irreducible(space, args.triple)
    rep, agreed = choose_representative(space, args.triple, strict=False)
    out = {"space": space.label(), "kind": "irreducible", "triple": list(args.triple),
           "representative": list(rep), "route_agreement": agreed,
           "cs": format_rational(cs), "minus_cs": format_rational((-cs) % 1)}
    text = (f"{space.label()} {tuple(args.triple)}: cs = {format_rational(cs)}, "
            f"-cs = {format_rational((-cs) % 1)} (representative {tuple(rep)})")
    return agreed, out, text


def cmd_moduli_splittings(args):
    from .flatconn import enumerate_irreducible, trivial
    from .moduli import enumerate_splittings

    conns = [trivial()] + enumerate_irreducible(args.sigma)
    chains = enumerate_splittings(conns, parse_rational(args.charge), args.dim, fold_flat_end=not args.no_fold)
    lines = []
    for ch in chains:
        lines.append(f"{ch.label}  {ch.describe():40} dims {ch.dims}  energies "
                     f"({', '.join(format_rational(e) for e in ch.energies)})")
    return True, [ch.to_json() for ch in chains], "\n".join(lines)


def cmd_moduli_obstruction(args):
    from .moduli import invariant_connection_obstruction

    v = invariant_connection_obstruction(parse_rational(args.ell), args.sigma, args.p)
    return True, v.to_json(), f"obstructed: {v.obstructed} ({v.reason})"


def cmd_rho_reducible(args):
    from .rho import rho_reducible_report, rho_table
    from .seifert import quotient

    Q = quotient(args.sigma, args.p)
    if args.l is None:
        reps = rho_table(Q, args.mode, args.seifert_b, args.jobs)
    else:
        reps = [rho_reducible_report(Q, args.l, args.mode, args.seifert_b)]
    ok = all(r.agree is not False for r in reps)
    lines = []
    for r in reps:
        bits = [f"l={r.l}"]
        if r.exact is not None:
            bits.append(f"exact {format_rational(r.exact)}")
        if r.reconstructed is not None:
            bits.append(f"numeric ~{r.numeric} -> {format_rational(r.reconstructed)}")
        if r.agree is not None:
            bits.append("agree" if r.agree else "DISAGREE")
        lines.append("  ".join(bits))
    results = [r.to_json() for r in reps]
    return ok, results if args.l is None else results[0], "\n".join(lines)


def _load_ext(args):
    from .gsig.data import ExtensionData, example_p7, load_points

    if args.points == "example":
        ext = example_p7()
        if args.p != 7:
            raise ArithDataError("the built-in example lives at p = 7", code="modulus-mismatch", data=args.p)
        return ext
    try:
        with open(args.points, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ArithDataError(f"cannot read points file: {exc}", code="bad-points-file", data=args.points)
    return ExtensionData(args.p, tuple(load_points(text)))


def cmd_gsig_check(args):
    from .gsig.terms import gsig_identity_check

    v = gsig_identity_check(_load_ext(args), conjugates=args.conjugates)
    return v.holds, v.to_json(), f"G-signature identity at p={args.p}: {'holds' if v.holds else 'fails'}"


def cmd_gsig_congruences(args):
    from .gsig.congruences import congruence_residues

    ext = _load_ext(args)
    rep = congruence_residues(ext, twisted=args.twisted)
    lines = [f"r{i + 1} = {r.value} (expected {e.value}, {format_rational(x)})  {'ok' if v else 'FAIL'}"
             for i, (r, e, x, v) in enumerate(zip(rep.residues, rep.expected_residues, rep.expected, rep.verdicts))]
    if rep.twisted is not None:
        t = rep.twisted
        lines.append(f"twisted {t.lhs_residue.value} vs {t.rhs_residue.value}  {'ok' if t.holds else 'FAIL'}")
    return rep.all_hold, rep.to_json(), "\n".join(lines)


def cmd_gsig_prove_b(args):
    from .gsig.theorem_b import prove_theorem_b

    traces = [prove_theorem_b(q) for q in args.p]
    ok = all(t.complete for t in traces)
    lines = []
    for t in traces:
        last = t.step("subtract")
        lines.append(f"p={t.p}: {format_rational(last.value)} == 0 (mod {t.p}) is false -> "
                     f"{'contradiction' if t.contradiction else 'no contradiction'}")
    results = [t.to_json() for t in traces]
    return ok, results if len(results) > 1 else results[0], "\n".join(lines)


def cmd_gsig_search(args):
    from .gsig.search import search_extensions, search_space_size

    hits = search_extensions(args.p, args.num_points, args.filters, jobs=args.jobs)
    out = {"p": args.p, "filters": sorted(args.filters.split(",")) if args.filters else [],
           "space": search_space_size(args.p, args.num_points, args.filters),
           "count": len(hits), "multisets": [[[d.a, d.b] for d in h] for h in hits]}
    lines = [f"{len(hits)} multisets of {out['space']} pass"]
    lines += [" ".join(f"({d.a},{d.b})" for d in h) for h in hits]
    return True, out, "\n".join(lines)


def cmd_replay(args):
    if not args.paper_tables:
        raise UsageError("replay needs --paper-tables")
    from .flatconn import enumerate_irreducible, trivial
    from .gsig.congruences import congruence_residues, expected_constants
    from .gsig.data import ExtensionData, e8_plumbing, example_p7
    from .gsig.terms import gsig_identity_check
    from .gsig.theorem_b import prove_theorem_b
    from .moduli import enumerate_splittings
    from .seifert import normalize

    steps = []

    def step(name: str, anchor: str, ok: bool, data):
        steps.append({"step": name, "anchor": anchor, "ok": bool(ok), "data": data})

    sigma = normalize((2, 3, 5))
    conns = enumerate_irreducible(sigma)
    step("flat-connections", "irreducible flat connections on sigma(2,3,5)",
         len(conns) == 2 and {c.minus_cs for c in conns} == {Fraction(49, 120), Fraction(1, 120)},
         [c.to_json() for c in conns])
    chains = enumerate_splittings([trivial()] + conns)
    want = [((0, 5), ("71/120", "49/120")), ((0, 4, 1), ("71/120", "2/5", "1/120")),
            ((4, 1), ("119/120", "1/120")), ((0, 5), ("0/1", "1/1"))]
    got = [(ch.dims, tuple(format_rational(e) for e in ch.energies)) for ch in chains]
    step("splittings", "charge-1 dimension-5 energy splittings", got == want, [ch.to_json() for ch in chains])
    ex = example_p7()
    ident = gsig_identity_check(ex)
    cong = congruence_residues(ex)
    step("example", "nine-point rotation data at p = 7",
         ident.holds and cong.all_hold and [r.value for r in cong.residues] == [4, 4, 4],
         {"identity": ident.holds, "congruences": cong.to_json()})
    consts = expected_constants(ExtensionData(7), e8_plumbing(7))
    step("constants", "congruence constants from the E8 plumbing",
         consts == (Fraction(1, 30), Fraction(-269, 15), Fraction(1712, 15)),
         [format_rational(c) for c in consts])
    traces = [prove_theorem_b(q) for q in range(7, 200) if is_prime(q)]
    step("theorem-b", "no isolated fixed points, p = 7..199", all(t.complete for t in traces),
         {"primes": [t.p for t in traces], "complete": all(t.complete for t in traces)})
    ok = all(s["ok"] for s in steps)
    lines = [f"[{'ok' if s['ok'] else 'FAIL'}] {s['step']}: {s['anchor']}" for s in steps]
    return ok, steps, "\n".join(lines)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # Subcommands repeat the global flags without defaults so a value given
    # before the verb is not overwritten.
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)

    parser = _Parser(prog="instanton-arith", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--version", action="version", version=__version__)
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def sub(group, name: str, fn: Callable, **kw):
        sp = group.add_parser(name, parents=[common], **kw)
        sp.set_defaults(fn=fn)
        return sp

    sp = sub(verbs, "seifert", cmd_seifert, help="Seifert invariants of a Brieskorn sphere")
    sp.add_argument("sigma", type=_sigma)
    sp.add_argument("--p", type=int)

    flat = verbs.add_parser("flat", help="flat SU(2) connections").add_subparsers(dest="sub", required=True,
                                                                                  parser_class=_Parser)
    sp = sub(flat, "enumerate", cmd_flat_enumerate)
    sp.add_argument("sigma", type=_sigma)
    sp = sub(flat, "cs", cmd_flat_cs)
    sp.add_argument("sigma", type=_sigma)
    sp.add_argument("--triple", type=_triple)
    sp.add_argument("--p", type=int)
    sp.add_argument("--reducible", type=int, metavar="K")

    mod = verbs.add_parser("moduli", help="instanton moduli bookkeeping").add_subparsers(
        dest="sub", required=True, parser_class=_Parser)
    sp = sub(mod, "splittings", cmd_moduli_splittings)
    sp.add_argument("--sigma", type=_sigma, default="2,3,5")
    sp.add_argument("--charge", default="1")
    sp.add_argument("--dim", type=int, default=5)
    sp.add_argument("--no-fold", action="store_true", help="list every flat-end chain separately")
    sp = sub(mod, "obstruction", cmd_moduli_obstruction)
    sp.add_argument("--sigma", type=_sigma, default="2,3,5")
    sp.add_argument("--ell", required=True)
    sp.add_argument("--p", type=int, required=True)

    rho = verbs.add_parser("rho", help="rho invariants").add_subparsers(dest="sub", required=True,
                                                                        parser_class=_Parser)
    sp = sub(rho, "reducible", cmd_rho_reducible)
    sp.add_argument("--sigma", type=_sigma, default="2,3,5")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--l", type=int, help="holonomy; omit for every l in [0, p)")
    sp.add_argument("--mode", choices=("exact", "numeric", "both"), default="exact")
    sp.add_argument("--seifert-b", choices=("sphere", "quotient"), default="sphere")

    gs = verbs.add_parser("gsig", help="G-signature arithmetic").add_subparsers(dest="sub", required=True,
                                                                                parser_class=_Parser)
    sp = sub(gs, "check", cmd_gsig_check)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--points", required=True, help="JSON file, or 'example'")
    sp.add_argument("--conjugates", action="store_true")
    sp = sub(gs, "congruences", cmd_gsig_congruences)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--points", required=True, help="JSON file, or 'example'")
    sp.add_argument("--reference", choices=("e8",), default="e8")
    sp.add_argument("--twisted", action="store_true")
    sp = sub(gs, "prove-b", cmd_gsig_prove_b)
    sp.add_argument("--p", type=_prime_range, required=True, help="prime or range such as 7..199")
    sp = sub(gs, "search", cmd_gsig_search)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--filters", default="")
    sp.add_argument("--num-points", type=int, default=9)

    sp = sub(verbs, "replay", cmd_replay, help="rerun the full verification chain")
    sp.add_argument("--paper-tables", action="store_true")
    return parser


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=str)


def run(argv: Optional[list[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = "json" if "--format=json" in argv or any(
        a == "--format" and i + 1 < len(argv) and argv[i + 1] == "json" for i, a in enumerate(argv)) else "text"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        ok, results, text = args.fn(args)
    except (UsageError, argparse.ArgumentTypeError) as exc:
        _report_error(err, fmt, {"code": "usage", "message": str(exc)})
        return EXIT_USAGE
    except ArithDataError as exc:
        _report_error(err, fmt, exc.to_dict())
        return EXIT_USAGE
    if fmt == "json":
        out.write(_dump(_envelope(argv, results, ok)) + "\n")
    else:
        out.write(text + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def _report_error(err, fmt: str, payload: dict) -> None:
    if fmt == "json":
        err.write(_dump({"error": payload}) + "\n")
    else:
        err.write(f"error [{payload['code']}]: {payload['message']}\n")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
