"""Command-line front end.

Solutions stream to stdout one per line, flushed as soon as they exist.  A
leading ``#`` line names the bit positions.  ``--stats`` prints the delay
profile as JSON on stderr and ``--plot`` writes it as a figure.

Exit codes: 0 success, 1 cross-check mismatch, 2 input error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from typing import Any, Callable

from . import brute, formats, generators
from .engine import DelayProfile, EReduction, Profiler, SolutionStream, delay_profile
from .kr import InvalidInstance, abduction_enum, cardmin_to_mbd, diagnosis_enum
from .logic import UnsupportedInstance, allsat, cardmin_enum, circumscription_enum, pi_to_sigma_blocking, qbf_enum
from .model import FALSE_REL, TRUE_REL, GammaFormula, ModelError, bits_to_str
from .oracles.sat import OracleError, SatOracle
from .relations import classify_language, classify_relation
from .schaefer import SearchCapExceeded, constants_elimination, enum_sat_gamma, imp_gadget_search
from .structures import (
    coloring_enum,
    domset_enum,
    pi1sat_to_repair,
    repair_enum,
    threecol_to_fourcol,
    trans_to_dom,
    transversal_enum,
)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


@dataclass
class Problem:
    parse: Callable[[str], Any]
    run: Callable[[Any, argparse.Namespace], SolutionStream]
    brute: Callable[[Any], list]
    legend: Callable[[Any], str]
    width: Callable[[Any], int]
    random: Callable[[random.Random], Any]
    fmt: Callable[[Any, Any], str] = lambda inst, sol: bits_to_str(sol)
    lex: bool = True
    # oracle-call budget per gap, in terms of the solution width
    gap_budget: Callable[[int], int] | None = lambda w: 2 * w + 1


def _vars_legend(n: int) -> str:
    return "# " + " ".join(f"x{i}" for i in range(1, n + 1))


def _oracle(args) -> SatOracle:
    return SatOracle(args.budget)


def _rand_cnf(rng: random.Random):
    return generators.random_cnf(rng, rng.randint(1, 8), rng.randint(1, 12))


def _rand_qbf(rng: random.Random):
    return generators.random_qbf(
        rng, rng.randint(1, 3), rng.randint(0, 2), rng.randint(0, 3), rng.randint(1, 6), rng.choice(["cnf", "dnf"])
    )


def _rand_gamma(rng: random.Random):
    return generators.random_gamma(rng, rng.randint(1, 7), rng.randint(0, 6))


def _rand_graph(rng: random.Random):
    return generators.random_graph(rng, rng.randint(1, 6))


def _rand_hypergraph(rng: random.Random):
    return generators.random_hypergraph(rng, rng.randint(1, 7), rng.randint(1, 5))


def _rand_nonzero_cnf(rng: random.Random):
    while True:
        f = _rand_cnf(rng)
        if not f.satisfied_by((0,) * f.num_vars):
            return f


def _rand_diagnosis(rng: random.Random):
    while (inst := generators.random_diagnosis(rng, rng.randint(1, 4), rng.randint(1, 5))) is None:
        pass
    return inst


def _rand_abduction(rng: random.Random):
    return generators.random_abduction(rng, rng.randint(2, 7), rng.randint(0, 4), rng.randint(0, 6))


def _rand_constants(rng: random.Random):
    f = _rand_gamma(rng)
    lang = dict(f.language, T=TRUE_REL, F=FALSE_REL)
    extra = [(rng.choice("TF"), (rng.randint(1, f.num_vars),)) for _ in range(rng.randint(0, 2))]
    return GammaFormula(lang, f.constraints + extra, f.num_vars)


def _repair_fmt(inst, sol) -> str:
    db, _ = inst
    kept = [formats.atom_str(a) for a, b in zip(db.atoms, sol) if b]
    return f"{bits_to_str(sol)}  {' '.join(kept)}"


def _colour_fmt(inst, sol) -> str:
    return "".join(str(c) for c in sol)


def _qbf_run(inst, args):
    return qbf_enum(inst, args.mode or "oracle", args.budget)


PROBLEMS: dict[str, Problem] = {
    "sat-all": Problem(
        formats.parse_dimacs,
        lambda f, a: allsat(f, a.mode or "blocking", _oracle(a)),
        brute.sat_all,
        lambda f: _vars_legend(f.num_vars),
        lambda f: f.num_vars,
        _rand_cnf,
        lex=False,
        gap_budget=None,
    ),
    "qbf-enum": Problem(
        formats.parse_ecnf,
        _qbf_run,
        brute.qbf,
        lambda q: "# free: " + " ".join(f"x{v}" for v in q.free_vars),
        lambda q: len(q.free_vars),
        _rand_qbf,
    ),
    "pi-sigma": Problem(
        formats.parse_ecnf,
        lambda q, a: pi_to_sigma_blocking(q, a.budget),
        brute.qbf,
        lambda q: "# free: " + " ".join(f"x{v}" for v in q.free_vars),
        lambda q: len(q.free_vars),
        _rand_qbf,
        lex=False,
        gap_budget=lambda w: 1,
    ),
    "circ": Problem(
        formats.parse_dimacs,
        lambda f, a: circumscription_enum(f, a.order or "discovery", _oracle(a)),
        brute.circumscription,
        lambda f: _vars_legend(f.num_vars),
        lambda f: f.num_vars,
        _rand_cnf,
        lex=False,
        gap_budget=None,
    ),
    "cardmin": Problem(
        formats.parse_dimacs,
        lambda f, a: cardmin_enum(f, _oracle(a)),
        brute.cardmin,
        lambda f: _vars_legend(f.num_vars),
        lambda f: f.num_vars,
        _rand_cnf,
    ),
    "schaefer-enum": Problem(
        formats.parse_gamma,
        lambda f, a: enum_sat_gamma(f, _oracle(a)),
        brute.gamma,
        lambda f: _vars_legend(f.num_vars),
        lambda f: f.num_vars,
        _rand_gamma,
    ),
    "diagnose": Problem(
        formats.parse_diagnosis,
        lambda d, a: diagnosis_enum(d, _oracle(a)),
        brute.diagnosis,
        lambda d: "# components: " + " ".join(f"b{i}" for i in range(1, len(d.components) + 1)) + " (1 = retained)",
        lambda d: len(d.components),
        _rand_diagnosis,
    ),
    "abduce": Problem(
        formats.parse_abduction,
        lambda d, a: abduction_enum(d, _oracle(a)),
        brute.abduction,
        lambda d: "# hypotheses: " + " ".join(str(h) for h in d.hypotheses) + " (1 = included)",
        lambda d: len(d.hypotheses),
        _rand_abduction,
    ),
    "repair": Problem(
        formats.parse_database,
        lambda de, a: repair_enum(de[0], de[1], _oracle(a)),
        lambda de: brute.repairs(*de),
        lambda de: "# atoms: " + " ".join(formats.atom_str(x) for x in de[0].atoms) + " (1 = kept)",
        lambda de: len(de[0].atoms),
        lambda rng: generators.random_database(rng, rng.randint(1, 9)),
        fmt=_repair_fmt,
    ),
    "transversal": Problem(
        formats.parse_hypergraph,
        lambda h, a: transversal_enum(h, _oracle(a)),
        brute.transversals,
        lambda h: f"# vertices 1..{h.num_vertices} (1 = chosen)",
        lambda h: h.num_vertices,
        _rand_hypergraph,
    ),
    "domset": Problem(
        formats.parse_graph,
        lambda g, a: domset_enum(g, _oracle(a)),
        brute.dominating_sets,
        lambda g: f"# vertices 1..{g.num_vertices} (1 = chosen)",
        lambda g: g.num_vertices,
        _rand_graph,
    ),
    "color3": Problem(
        formats.parse_graph,
        lambda g, a: coloring_enum(g, 3, _oracle(a)),
        brute.colourings,
        lambda g: f"# colour (0-2) of vertices 1..{g.num_vertices}",
        lambda g: 3 * g.num_vertices,
        _rand_graph,
        fmt=_colour_fmt,
    ),
}


@dataclass
class Reduction:
    source: str
    make: Callable[[argparse.Namespace], Any]
    emit: Callable[[Any], str]
    random: Callable[[random.Random], Any]


REDUCTIONS: dict[str, Reduction] = {
    "trans-dom": Reduction(
        "transversal", lambda a: trans_to_dom(_oracle(a)), formats.write_graph,
        lambda rng: generators.random_hypergraph(rng, rng.randint(1, 5), rng.randint(1, 4)),
    ),
    "3col-4col": Reduction(
        "color3", lambda a: threecol_to_fourcol(_oracle(a)), formats.write_graph,
        lambda rng: generators.random_graph(rng, rng.randint(1, 5)),
    ),
    "cardmin-mbd": Reduction(
        "cardmin", lambda a: PerInstance(lambda x: cardmin_to_mbd(x, _oracle(a))), formats.write_diagnosis, _rand_nonzero_cnf,
    ),
    "pi1sat-repair": Reduction(
        "qbf-enum", lambda a: pi1sat_to_repair(_oracle(a)), lambda de: formats.write_database(*de),
        lambda rng: generators.random_pi1_3dnf(rng, rng.randint(1, 3), rng.randint(0, 2), rng.randint(1, 3)),
    ),
    "const-elim": Reduction(
        "schaefer-enum", lambda a: _const_elim(a), formats.write_gamma, _rand_constants,
    ),
}


@dataclass
class PerInstance:
    """A reduction whose construction needs the instance (validation, gadget search)."""

    build: Callable[[Any], EReduction]

    def sigma(self, x):
        return self.build(x).sigma(x)

    def run(self, x, inner=None):
        return self.build(x).run(x, inner)


def _const_elim(args) -> PerInstance:
    def build(x):
        gadget = None
        if args.gadget:
            plain = {n: r for n, r in x.language.items() if r not in (TRUE_REL, FALSE_REL)}
            gadget = imp_gadget_search(plain)
            if gadget is None:
                print("# no Imp gadget found; using Imp directly", file=sys.stderr)
        return constants_elimination(x, gadget)

    return PerInstance(build)


# -- output --------------------------------------------------------------------


def _stream_out(stream: SolutionStream, fmt, args, out) -> tuple[int, DelayProfile]:
    prof = Profiler(stream)
    count = 0
    while args.limit is None or count < args.limit:
        sol = prof.next()
        if sol is None:
            break
        out.write(fmt(sol) + "\n")
        out.flush()
        count += 1
    profile = prof.close()
    if args.stats:
        print(profile.to_json(), file=sys.stderr)
    if args.plot:
        from .report import plot_delay_profile

        plot_delay_profile(profile, args.plot, title=f"{args.command} {args.input}")
    return count, profile


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_problem(args, out) -> int:
    p = PROBLEMS[args.command]
    inst = p.parse(_read(args.input))
    out.write(p.legend(inst) + "\n")
    _stream_out(p.run(inst, args), lambda s: p.fmt(inst, s), args, out)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    f = formats.parse_gamma(_read(args.input))
    out.write("# closure flags per relation, then for the whole language\n")
    for name in sorted(f.language):
        out.write(json.dumps({"relation": name, **classify_relation(f.language[name]).to_dict()}) + "\n")
    cls = classify_language(f.language)
    out.write(json.dumps({"relation": "*", **cls.to_dict(), "decider": cls.chosen()}) + "\n")
    if args.gadget:
        g = imp_gadget_search(f.language, max_aux=args.max_aux)
        out.write("# Imp gadget: none found\n" if g is None else "# Imp gadget over x=1, y=2\n" + formats.write_gamma(g))
    return EXIT_OK


def cmd_reduce(args, out) -> int:
    r = REDUCTIONS[args.reduction]
    src = PROBLEMS[r.source]
    inst = src.parse(_read(args.input))
    red = r.make(args)
    if args.emit_sigma:
        out.write(r.emit(red.sigma(inst)))
        return EXIT_OK
    out.write(src.legend(inst) + "\n")
    _stream_out(red.run(inst), lambda s: src.fmt(inst, s), args, out)
    return EXIT_OK


def cmd_brute(args, out) -> int:
    p = PROBLEMS[args.problem]
    inst = p.parse(_read(args.input))
    out.write(p.legend(inst) + "\n")
    for sol in p.brute(inst):
        out.write(p.fmt(inst, sol) + "\n")
    return EXIT_OK


# -- cross-check -----------------------------------------------------------------


@dataclass
class CrossReport:
    equal: bool
    duplicates: int
    order_ok: bool
    budget_ok: bool
    engine_count: int
    brute_count: int

    @property
    def ok(self) -> bool:
        return self.equal and self.duplicates == 0 and self.order_ok and self.budget_ok

    def line(self) -> str:
        verdict = "EQUAL" if self.ok else "MISMATCH"
        return (
            f"{verdict} engine={self.engine_count} brute={self.brute_count} duplicates={self.duplicates} "
            f"order={'ok' if self.order_ok else 'bad'} budget={'ok' if self.budget_ok else 'bad'}"
        )


def crosscheck(name: str, inst: Any, args: argparse.Namespace | None = None, engine=None) -> CrossReport:
    """Compare an engine run with the brute-force reference on one instance.

    ``name`` is a problem subcommand or a reduction name; ``engine`` overrides
    the stream factory (used to test the harness itself).
    """
    args = args or argparse.Namespace(mode=None, order=None, budget=None, gadget=False)
    if name in REDUCTIONS:
        r = REDUCTIONS[name]
        p = PROBLEMS[r.source]
        make = engine or (lambda x: r.make(args).run(x))
        check_budget = False
    else:
        p = PROBLEMS[name]
        make = engine or (lambda x: p.run(x, args))
        check_budget = p.gap_budget is not None
    sols, profile = delay_profile(make(inst))
    ref = p.brute(inst)
    dups = len(sols) - len(set(sols))
    order_ok = not p.lex or name in REDUCTIONS or sols == sorted(sols)
    budget_ok = True
    if check_budget:
        limit = p.gap_budget(p.width(inst))
        gaps = profile.per_output_ext_calls if name != "pi-sigma" else profile.per_output_oracle_calls
        budget_ok = max(gaps, default=0) <= limit
    return CrossReport(set(sols) == set(ref), dups, order_ok, budget_ok, len(sols), len(ref))


def cmd_crosscheck(args, out) -> int:
    name = args.target
    if name in REDUCTIONS:
        parse, rand = PROBLEMS[REDUCTIONS[name].source].parse, REDUCTIONS[name].random
    else:
        parse, rand = PROBLEMS[name].parse, PROBLEMS[name].random
    if args.random:
        rng = random.Random(args.seed)
        instances = [rand(rng) for _ in range(args.random)]
    elif args.input:
        instances = [parse(_read(args.input))]
    else:
        raise InputError("crosscheck needs an input file or --random COUNT")
    bad = 0
    for i, inst in enumerate(instances):
        rep = crosscheck(name, inst, args)
        if not rep.ok:
            bad += 1
        if len(instances) == 1 or not rep.ok:
            out.write(f"{name} #{i}: {rep.line()}\n")
    out.write(f"{name}: {len(instances) - bad}/{len(instances)} EQUAL\n")
    return EXIT_OK if bad == 0 else EXIT_MISMATCH


class InputError(ValueError):
    pass


# -- argument parsing ------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--limit", type=int, help="stop after this many solutions")
    p.add_argument("--stats", action="store_true", help="print the delay profile as JSON on stderr")
    p.add_argument("--plot", metavar="PNG", help="write a delay-profile figure")
    p.add_argument("--budget", type=int, help="conflict budget per oracle call")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="enumkit", description="Enumeration with NP and Sigma2 oracles.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in PROBLEMS:
        p = sub.add_parser(name)
        p.add_argument("input", help="instance file, or - for stdin")
        p.add_argument("--mode", help="sat-all: blocking|lex; qbf-enum: oracle|exhaustive")
        p.add_argument("--order", choices=["discovery", "lex"], help="circ output order")
        _common(p)
    p = sub.add_parser("schaefer-classify")
    p.add_argument("input")
    p.add_argument("--gadget", action="store_true", help="also search for an Imp gadget")
    p.add_argument("--max-aux", type=int, default=2)
    p = sub.add_parser("reduce")
    p.add_argument("reduction", choices=list(REDUCTIONS))
    p.add_argument("input")
    p.add_argument("--emit-sigma", action="store_true", help="print the target instance and stop")
    p.add_argument("--gadget", action="store_true", help="const-elim: substitute a searched Imp gadget")
    _common(p)
    p = sub.add_parser("crosscheck")
    p.add_argument("target", choices=list(PROBLEMS) + list(REDUCTIONS))
    p.add_argument("input", nargs="?")
    p.add_argument("--random", type=int, metavar="COUNT", help="check COUNT seeded random instances instead")
    p.add_argument("--mode")
    p.add_argument("--order", choices=["discovery", "lex"])
    p.add_argument("--gadget", action="store_true")
    _common(p)
    p = sub.add_parser("brute")
    p.add_argument("problem", choices=list(PROBLEMS))
    p.add_argument("input")
    return parser


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "limit", None) is not None and args.limit < 1:
        parser.error("--limit must be at least 1")
    try:
        if args.command in PROBLEMS:
            return cmd_problem(args, out)
        handler = {
            "schaefer-classify": cmd_classify,
            "reduce": cmd_reduce,
            "crosscheck": cmd_crosscheck,
            "brute": cmd_brute,
        }[args.command]
        return handler(args, out)
    except (OracleError, SearchCapExceeded) as e:
        print(f"enumkit: resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (formats.ParseError, ModelError, InvalidInstance, UnsupportedInstance, InputError, OSError) as e:
        print(f"enumkit: input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"enumkit: input error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
