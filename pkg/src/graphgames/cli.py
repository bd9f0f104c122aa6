"""Command-line front end: ``graphgames {validate,limit,pure,mixed,simulate,gen}``.

Exit codes: 0 success, 1 negative verdict or validation failure, 2 usage or
parse error, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import equilibria as eq
from . import families
from .apriori import apriori_limit, sample_apriori
from .core import CYCLE, BudgetExceeded, GameError, profile_key, validate
from .io import (
    ParseError,
    format_rational,
    load_game,
    load_payoff,
    load_profile,
    parse_rational,
    save_game,
    save_payoff,
)
from .markov import STEP_CAP, markov_limit, sample_markov

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _name(a) -> str:
    return "c" if a is CYCLE else str(a)


def _emit(rows: List[Sequence], header: Sequence[str], as_csv: bool, out):
    if as_csv:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return
    cells = [list(map(str, header))] + [[str(x) for x in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    for r in cells:
        print("  ".join(x.ljust(wd) for x, wd in zip(r, widths)).rstrip(), file=out)


def _dist_rows(g, d):
    return [(_name(a), format_rational(d[a]), f"{float(d[a]):.6f}") for a in g.outcomes]


class _Invalid(GameError):
    pass


def _load(args):
    g, u = load_game(args.path)
    problems = validate(g)
    if problems:
        raise _Invalid("; ".join(problems))
    if getattr(args, "payoff", None):
        u = load_payoff(args.payoff)
    return g, u


def _need_payoff(u):
    if u is None:
        raise GameError("no payoffs: add a 'payoffs' key to the game file or pass --payoff")
    return u


def _profile(args, g):
    if getattr(args, "profile", None):
        return load_profile(args.profile)
    if getattr(args, "p", None):
        return eq.profile_from_point(g, [parse_rational(x) for x in args.p.split(",")])
    raise GameError("a profile is required: --profile FILE or --p p1,p2,...")


# ---------------------------------------------------------------- commands


def cmd_validate(args, out) -> int:
    g, _ = load_game(args.path)
    problems = validate(g)
    if not problems:
        print(f"{args.path}: ok", file=out)
        return EXIT_OK
    for p in problems:
        print(f"{args.path}: {p}", file=out)
    return EXIT_NEGATIVE


def cmd_limit(args, out) -> int:
    g, _ = _load(args)
    y = _profile(args, g)
    lim = markov_limit if args.realization == "markov" else apriori_limit
    starts = list(g.nonterminals) if args.all_starts else [args.start or g.initial or g.nonterminals[0]]
    if args.csv:
        rows = [(v, *r) for v in starts for r in _dist_rows(g, lim(g, y, v))]
        _emit(rows, ("start", "outcome", "exact", "decimal"), True, out)
        return EXIT_OK
    for k, v in enumerate(starts):
        if k:
            print(file=out)
        print(f"start {v} ({args.realization})", file=out)
        _emit(_dist_rows(g, lim(g, y, v)), ("outcome", "exact", "decimal"), False, out)
    return EXIT_OK


def _fmt_profile(s) -> str:
    return " ".join(f"{v}->{w}" for v, w in profile_key(s))


def cmd_pure(args, out) -> int:
    g, u = _load(args)
    u = _need_payoff(u)
    if args.mode == "ne":
        v0 = args.start or g.initial
        if v0 is None:
            raise GameError("--mode ne needs --start on a non-initialized game")
        found = eq.pure_equilibria(g, u, v0)
        label, graph = f"NE from {v0}", (lambda: eq.improvement_graph(g, u, "fixed", v0))
    else:
        found = eq.pure_equilibria(g, u)
        label, graph = "UNE", (lambda: eq.improvement_graph(g, u, "uniform"))
    if found:
        print(f"{len(found)} pure {label} found", file=out)
        for s in found:
            print(f"  {_fmt_profile(s)}", file=out)
        return EXIT_OK
    cycles = eq.improvement_cycles(graph(), args.max_length)
    if cycles:
        print(f"no {label}; improvement cycle of length {max(len(c) for c in cycles)}", file=out)
    else:
        print(f"no {label}", file=out)
    if args.cycles:
        for c in cycles:
            print("  " + " => ".join(f"[{' '.join(f'{v}->{w}' for v, w in k)}]" for k in c), file=out)
    return EXIT_NEGATIVE


def _cert_cells(cert):
    if cert is None:
        return ("", "", "", "", "")
    dev = " ".join(f"{v}->{w}" for v, w in sorted(cert.deviation.items()))
    return (cert.player, cert.start, dev, format_rational(cert.old), format_rational(cert.new))


def cmd_mixed(args, out) -> int:
    g, u = _load(args)
    u = _need_payoff(u)
    if args.closed_form:
        if not _same_structure(g, families.build_g3()):
            raise GameError("--closed-form needs the 3-player cycle game structure")
        mu = families.mu_values(u)
        prod = mu[0] * mu[1] * mu[2]
        print("mu = (" + ", ".join(format_rational(m) for m in mu) + ")", file=out)
        print(f"mu1*mu2*mu3 = {format_rational(prod)}", file=out)
        y = eq.g3_closed_form_ne(u)
        if y is None:
            print("p = none", file=out)
            return EXIT_NEGATIVE
        p = [y[v][w] for v, w in eq.play_once_arcs(g)]
        print("p = (" + ", ".join(format_rational(x) for x in p) + ")", file=out)
        verdict = eq.is_mixed_une(g, u, y, args.realization)
        print(f"UNE ({args.realization}): {'yes' if verdict is True else 'no'}", file=out)
        return EXIT_OK if verdict is True else EXIT_NEGATIVE
    if args.sweep:
        step = parse_rational(args.sweep)
        rows = eq.grid_sweep_no_une(g, u, args.realization, step)
        n = len(eq.play_once_arcs(g))
        header = [f"p{i}" for i in range(1, n + 1)] + ["player", "start", "deviation", "old", "new"]
        table = [[format_rational(x) for x in pt] + list(_cert_cells(c)) for pt, c in rows]
        _emit(table, header, True, out)
        return EXIT_OK if all(c is not None for _, c in rows) else EXIT_NEGATIVE
    y = _profile(args, g)
    if args.start:
        verdict = eq.is_mixed_ne(g, u, y, args.start, args.realization)
        label = f"NE from {args.start}"
    else:
        verdict = eq.is_mixed_une(g, u, y, args.realization)
        label = "UNE"
    print(f"{label} ({args.realization}): {'yes' if verdict is True else 'no'}", file=out)
    if verdict is not True:
        _emit([_cert_cells(verdict)], ("player", "start", "deviation", "old", "new"), args.csv, out)
        return EXIT_NEGATIVE
    return EXIT_OK


def _same_structure(g, h) -> bool:
    return (
        {(p.id, p.kind, p.player) for p in g.positions} == {(p.id, p.kind, p.player) for p in h.positions}
        and set(g.moves) == set(h.moves)
    )


def cmd_simulate(args, out) -> int:
    from scipy.stats import chi2

    g, _ = _load(args)
    y = _profile(args, g)
    v0 = args.start or g.initial or g.nonterminals[0]
    if args.realization == "markov":
        samples = sample_markov(g, y, v0, args.n, args.seed, args.max_steps)
        exact = markov_limit(g, y, v0)
    else:
        samples = sample_apriori(g, y, v0, args.n, args.seed)
        exact = apriori_limit(g, y, v0)
    counts = {a: 0 for a in g.outcomes}
    capped = 0
    for s in samples:
        if s is STEP_CAP:
            capped += 1
        else:
            counts[s] += 1
    rows, dev, stat, cells = [], 0.0, 0.0, 0
    for a in g.outcomes:
        emp = counts[a] / args.n
        ref = float(exact[a])
        dev = max(dev, abs(emp - ref))
        if ref > 0:
            stat += (counts[a] - args.n * ref) ** 2 / (args.n * ref)
            cells += 1
        rows.append((_name(a), counts[a], f"{emp:.6f}", format_rational(exact[a]), f"{ref:.6f}"))
    _emit(rows, ("outcome", "count", "empirical", "exact", "exact_decimal"), args.csv, out)
    if not args.csv:
        print(f"samples {args.n}  seed {args.seed}  step-cap {capped}", file=out)
        print(f"max |empirical - exact| = {dev:.6f}", file=out)
        pval = chi2.sf(stat, cells - 1) if cells > 1 else 1.0
        print(f"chi-square = {stat:.4f}  (df {max(cells - 1, 0)}, p = {pval:.4f})", file=out)
    return EXIT_OK


def cmd_gen(args, out) -> int:
    if args.family != "gn":
        raise GameError(f"unknown family {args.family!r}")
    if args.n < 2:
        raise GameError("--n must be at least 2")
    g = families.build_gn(args.n)
    if args.payoff == "sample":
        if args.n == 2:
            u = families.sample_u2(random.Random(args.seed))
        else:
            u = families.sample_un(args.n, args.seed)
    else:
        u = load_payoff(args.payoff)
    prefix = Path(args.out or f"g{args.n}")
    game_path = prefix.with_name(prefix.name + ".game")
    payoff_path = prefix.with_name(prefix.name + ".payoff.json")
    save_game(game_path, g, u)
    save_payoff(payoff_path, u)
    print(f"wrote {game_path} and {payoff_path}", file=out)
    if args.verify:
        certs = families.verify_prop8(args.n, u)
        rows = [(c.profile, c.case, *_cert_cells(c.certificate)) for c in certs]
        _emit(rows, ("profile", "case", "player", "start", "deviation", "old", "new"), args.csv, out)
        print(f"{len(certs)}/{2 ** args.n} profiles improved; UNE-free confirmed", file=out)
    return EXIT_OK


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="graphgames", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def realization(p):
        p.add_argument("--realization", choices=eq.REALIZATIONS, default="markov")

    def profile(p):
        p.add_argument("--profile", help="profile file: {position: {target: 'p/q'}}")
        p.add_argument("--p", help="first-arc probabilities for binary play-once games, e.g. 1/2,1/2")

    p = sub.add_parser("validate", help="check a game file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("limit", help="exact limiting outcome distribution")
    p.add_argument("path")
    realization(p)
    profile(p)
    p.add_argument("--start")
    p.add_argument("--all-starts", action="store_true")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("pure", help="pure NE / UNE and improvement cycles")
    p.add_argument("path")
    p.add_argument("--payoff")
    p.add_argument("--mode", choices=("ne", "une"), default="une")
    p.add_argument("--start")
    p.add_argument("--cycles", action="store_true", help="list the improvement cycles found")
    p.add_argument("--max-length", type=int, default=None)
    p.set_defaults(func=cmd_pure)

    p = sub.add_parser("mixed", help="mixed equilibria: check, closed form, grid sweep")
    p.add_argument("path")
    p.add_argument("--payoff")
    realization(p)
    profile(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--check", action="store_true", help="check the profile given by --profile/--p")
    mode.add_argument("--closed-form", action="store_true")
    mode.add_argument("--sweep", metavar="STEP")
    p.add_argument("--start")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_mixed)

    p = sub.add_parser("simulate", help="Monte Carlo plays against the exact distribution")
    p.add_argument("path")
    realization(p)
    profile(p)
    p.add_argument("--start")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=10_000)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gen", help="generate a cycle game with a sampled payoff")
    p.add_argument("--family", default="gn")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--payoff", default="sample", help="'sample' or a payoff file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output prefix (default gN)")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except _Invalid as e:
        print(f"invalid game: {e}", file=sys.stderr)
        return EXIT_NEGATIVE
    except (ParseError, GameError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
