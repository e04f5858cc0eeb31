"""Readers and writers for the text formats accepted by the CLI."""

from __future__ import annotations

import re
from typing import Iterator

from .model import (
    MAX_ARITY,
    AbductionInstance,
    BoolRelation,
    CnfFormula,
    DatabaseInstance,
    DiagnosisInstance,
    Egd,
    GammaFormula,
    Graph,
    Hypergraph,
    ModelError,
    QbfInstance,
    bits_to_str,
    is_variable,
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _text(data: str | bytes) -> str:
    return data.decode() if isinstance(data, bytes) else data


def _lines(data: str | bytes, comments: tuple[str, ...] = ("c",)) -> Iterator[tuple[int, list[str]]]:
    for no, raw in enumerate(_text(data).splitlines(), 1):
        toks = raw.split()
        if not toks or toks[0] in comments or toks[0].startswith("%"):
            continue
        yield no, toks


def _ints(toks: list[str], no: int) -> list[int]:
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(toks)!r}", no) from None


# -- DIMACS ------------------------------------------------------------------


def parse_dimacs(data: str | bytes) -> CnfFormula:
    header = None
    clauses: list[list[int]] = []
    current: list[int] = []
    last = 0
    for no, toks in _lines(data):
        last = no
        if toks[0] == "p":
            if header is not None:
                raise ParseError("duplicate header", no)
            if len(toks) != 4 or toks[1] != "cnf":
                raise ParseError("expected 'p cnf V C'", no)
            nv, nc = _ints(toks[2:], no)
            header = (nv, nc)
            continue
        if header is None:
            raise ParseError("clause before 'p cnf' header", no)
        for lit in _ints(toks, no):
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                if abs(lit) > header[0]:
                    raise ParseError(f"variable {abs(lit)} exceeds header ({header[0]} vars)", no)
                current.append(lit)
    if header is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        raise ParseError("last clause is not zero-terminated", last)
    if len(clauses) != header[1]:
        raise ParseError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], [tuple(c) for c in clauses])


def _clause_line(c) -> str:
    return " ".join(str(l) for l in c) + (" 0" if c else "0")


def write_dimacs(f: CnfFormula) -> str:
    out = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    out += [_clause_line(c) for c in f.clauses]
    return "\n".join(out) + "\n"


# -- ECNF (QBF with a free block) --------------------------------------------


def parse_ecnf(data: str | bytes) -> QbfInstance:
    header = None
    kind = "cnf"
    free: list[int] | None = None
    blocks: list[tuple[str, list[int]]] = []
    rows: list[list[int]] = []
    current: list[int] = []
    for no, toks in _lines(data):
        head = toks[0]
        if head == "p":
            if len(toks) != 4 or toks[1] != "ecnf":
                raise ParseError("expected 'p ecnf V C'", no)
            header = tuple(_ints(toks[2:], no))
            continue
        if header is None:
            raise ParseError("content before 'p ecnf' header", no)
        if head == "m":
            if rows or current or toks[1:] not in (["dnf"], ["cnf"]):
                raise ParseError("matrix flag must be 'm dnf' or 'm cnf' before the matrix", no)
            kind = toks[1]
            continue
        if head in ("f", "a", "e"):
            if rows or current:
                raise ParseError("quantifier line after matrix rows", no)
            vs = _ints(toks[1:], no)
            if not vs or vs[-1] != 0:
                raise ParseError("quantifier line must end with 0", no)
            vs = vs[:-1]
            if head == "f":
                if free is not None or blocks:
                    raise ParseError("free block must come first and only once", no)
                free = vs
            else:
                blocks.append((head, vs))
            continue
        for lit in _ints(toks, no):
            if lit == 0:
                rows.append(current)
                current = []
            else:
                current.append(lit)
    if header is None:
        raise ParseError("missing 'p ecnf' header")
    if current:
        raise ParseError("last matrix row is not zero-terminated")
    if len(rows) != header[1]:
        raise ParseError(f"header declares {header[1]} matrix rows, found {len(rows)}")
    try:
        return QbfInstance(header[0], free or [], blocks, [tuple(r) for r in rows], kind)
    except ModelError as e:
        raise ParseError(str(e)) from None


def write_ecnf(inst: QbfInstance) -> str:
    out = [f"p ecnf {inst.num_vars} {len(inst.matrix)}"]
    if inst.kind == "dnf":
        out.append("m dnf")
    out.append(" ".join(["f"] + [str(v) for v in inst.free_vars] + ["0"]))
    for q, vs in inst.blocks:
        out.append(" ".join([q] + [str(v) for v in vs] + ["0"]))
    out += [_clause_line(r) for r in inst.matrix]
    return "\n".join(out) + "\n"


# -- Gamma formulas ----------------------------------------------------------

_REL = re.compile(r"^rel\s+(\w+)\s+(\d+)\s*\{([01,\s]*)\}\s*$")
_CONSTRAINT = re.compile(r"^(\w+)\s*\(([\d,\s]*)\)\s*$")


def parse_gamma(data: str | bytes) -> GammaFormula:
    language: dict[str, BoolRelation] = {}
    constraints: list[tuple[str, tuple[int, ...]]] = []
    num_vars = None
    for no, raw in enumerate(_text(data).splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(("#", "%")) or line.split()[0] == "c":
            continue
        if line.startswith("rel"):
            m = _REL.match(line)
            if not m:
                raise ParseError("malformed relation definition", no)
            name, arity = m.group(1), int(m.group(2))
            if name in language:
                raise ParseError(f"relation {name} defined twice", no)
            if arity > MAX_ARITY:
                raise ParseError(f"arity {arity} exceeds the maximum of {MAX_ARITY}", no)
            rows = [t.strip() for t in m.group(3).split(",") if t.strip()]
            if not rows:
                raise ParseError(f"relation {name} is empty", no)
            if any(len(r) != arity for r in rows):
                raise ParseError(f"tuple length differs from arity {arity}", no)
            language[name] = BoolRelation(arity, frozenset(tuple(int(b) for b in r) for r in rows))
        elif line.startswith("vars"):
            toks = line.split()
            if len(toks) != 2:
                raise ParseError("expected 'vars N'", no)
            num_vars = _ints(toks[1:], no)[0]
        else:
            m = _CONSTRAINT.match(line)
            if not m:
                raise ParseError("malformed constraint", no)
            name = m.group(1)
            if name not in language:
                raise ParseError(f"undefined relation {name}", no)
            args = tuple(int(a) for a in m.group(2).replace(",", " ").split())
            if len(args) != language[name].arity:
                raise ParseError(
                    f"arity mismatch: {name} expects {language[name].arity} arguments, got {len(args)}", no
                )
            constraints.append((name, args))
    if num_vars is None:
        num_vars = max((v for _, vs in constraints for v in vs), default=0)
    try:
        return GammaFormula(language, constraints, num_vars)
    except ModelError as e:
        raise ParseError(str(e)) from None


def write_gamma(f: GammaFormula) -> str:
    out = []
    for name, rel in f.language.items():
        rows = ",".join(sorted(bits_to_str(t) for t in rel.tuples))
        out.append(f"rel {name} {rel.arity} {{{rows}}}")
    out.append(f"vars {f.num_vars}")
    out += [f"{name}({','.join(str(v) for v in vs)})" for name, vs in f.constraints]
    return "\n".join(out) + "\n"


# -- graphs and hypergraphs --------------------------------------------------


def parse_hypergraph(data: str | bytes) -> Hypergraph:
    declared = None
    edges = []
    for no, toks in _lines(data, comments=("c", "#")):
        if toks[0] == "v":
            declared = _ints(toks[1:2], no)[0]
            continue
        vs = _ints(toks, no)
        if any(v < 1 for v in vs):
            raise ParseError("vertices are positive integers", no)
        edges.append(frozenset(vs))
    n = max([declared or 0] + [max(e) for e in edges if e])
    try:
        return Hypergraph(n, edges)
    except ModelError as e:
        raise ParseError(str(e)) from None


def write_hypergraph(h: Hypergraph) -> str:
    out = [f"v {h.num_vertices}"] + [" ".join(str(v) for v in sorted(e)) for e in h.edges]
    return "\n".join(out) + "\n"


def parse_graph(data: str | bytes) -> Graph:
    n = None
    edges = []
    for no, toks in _lines(data, comments=("c", "#")):
        if toks[0] == "v":
            n = _ints(toks[1:2], no)[0]
            continue
        if n is None:
            raise ParseError("edge before 'v N' line", no)
        if len(toks) != 2:
            raise ParseError("expected 'i j'", no)
        edges.append(frozenset(_ints(toks, no)))
    if n is None:
        raise ParseError("missing 'v N' line")
    try:
        return Graph(n, set(edges))
    except ModelError as e:
        raise ParseError(str(e)) from None


def write_graph(g: Graph) -> str:
    out = [f"v {g.num_vertices}"] + [" ".join(str(v) for v in sorted(e)) for e in sorted(g.edges, key=sorted)]
    return "\n".join(out) + "\n"


# -- databases ---------------------------------------------------------------

_ATOM = re.compile(r"([a-z_][A-Za-z0-9_]*)\s*\(([^()]*)\)")
_ATOM_FULL = re.compile(r"^\s*([a-z_][A-Za-z0-9_]*)\s*\(([^()]*)\)\s*$")
_EQUATION = re.compile(r"^\s*([A-Z]\w*)\s*=\s*([A-Z]\w*)\s*$")


def _args(s: str) -> tuple[str, ...]:
    return tuple(a.strip() for a in s.split(",")) if s.strip() else ()


def _statements(text: str) -> Iterator[tuple[int, str]]:
    buf, start, depth = [], None, 0
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0]
        if line.strip().startswith("#"):
            continue
        if line.strip().startswith("dom") and not buf:
            yield no, line.strip()
            continue
        for ch in line:
            if start is None and not ch.isspace():
                start = no
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch == "." and depth == 0:
                yield start, "".join(buf).strip()
                buf, start = [], None
            else:
                buf.append(ch)
        buf.append(" ")
    if "".join(buf).strip():
        raise ParseError("statement not terminated by '.'", start)


def parse_database(data: str | bytes) -> tuple[DatabaseInstance, list[Egd]]:
    domain: list[str] | None = None
    atoms = []
    egds = []
    for no, stmt in _statements(_text(data)):
        if stmt.startswith("dom"):
            domain = stmt.split()[1:]
            continue
        if stmt.startswith("egd:"):
            body_s, arrow, eq = stmt[4:].partition("->")
            if not arrow:
                raise ParseError("EGD without '->'", no)
            m = _EQUATION.match(eq)
            if not m:
                raise ParseError(f"malformed equation {eq.strip()!r}", no)
            body = [(p, _args(a)) for p, a in _ATOM.findall(body_s)]
            if not body or _ATOM.sub("", body_s).replace(",", "").strip():
                raise ParseError("malformed EGD body", no)
            try:
                egds.append(Egd(body, m.group(1), m.group(2)))
            except ModelError as e:
                raise ParseError(str(e), no) from None
            continue
        m = _ATOM_FULL.match(stmt)
        if not m:
            raise ParseError(f"malformed atom {stmt!r}", no)
        args = _args(m.group(2))
        if any(is_variable(a) for a in args):
            raise ParseError(f"ground atom {stmt!r} contains a variable", no)
        atoms.append((m.group(1), args))
    if domain is None:
        seen: dict[str, None] = {}
        for _, args in atoms:
            for c in args:
                seen.setdefault(c, None)
        domain = list(seen)
    for e in egds:
        for _, args in e.body:
            for t in args:
                if not is_variable(t) and t not in domain:
                    raise ParseError(f"constant {t!r} not in declared domain")
    try:
        return DatabaseInstance(domain, atoms), egds
    except ModelError as e:
        raise ParseError(str(e)) from None


def atom_str(atom) -> str:
    return f"{atom[0]}({','.join(atom[1])})"


def write_database(db: DatabaseInstance, egds: list[Egd]) -> str:
    out = ["dom " + " ".join(db.domain)]
    out += [atom_str(a) + "." for a in db.atoms]
    for e in egds:
        out.append(f"egd: {', '.join(atom_str(a) for a in e.body)} -> {e.lhs_var} = {e.rhs_var}.")
    return "\n".join(out) + "\n"


# -- abduction and diagnosis -------------------------------------------------


def parse_abduction(data: str | bytes) -> AbductionInstance:
    """``p abd V C``, ``h l1 l2 ... 0``, ``q v``, then C DIMACS clauses."""
    header = None
    hyps: list[int] | None = None
    q = None
    clauses, current = [], []
    for no, toks in _lines(data):
        if toks[0] == "p":
            if len(toks) != 4 or toks[1] != "abd":
                raise ParseError("expected 'p abd V C'", no)
            header = _ints(toks[2:], no)
        elif header is None:
            raise ParseError("content before 'p abd' header", no)
        elif toks[0] == "h":
            vs = _ints(toks[1:], no)
            if not vs or vs[-1] != 0:
                raise ParseError("hypothesis line must end with 0", no)
            hyps = vs[:-1]
        elif toks[0] == "q":
            q = _ints(toks[1:2], no)[0]
        else:
            for lit in _ints(toks, no):
                if lit == 0:
                    clauses.append(tuple(current))
                    current = []
                else:
                    if abs(lit) > header[0]:
                        raise ParseError(f"variable {abs(lit)} exceeds header", no)
                    current.append(lit)
    if header is None or q is None:
        raise ParseError("abduction instance needs a 'p abd' header and a 'q' line")
    if current or len(clauses) != header[1]:
        raise ParseError(f"header declares {header[1]} clauses, found {len(clauses)}")
    try:
        return AbductionInstance(CnfFormula(header[0], clauses), hyps or [], q)
    except ModelError as e:
        raise ParseError(str(e)) from None


def write_abduction(inst: AbductionInstance) -> str:
    out = [f"p abd {inst.gamma.num_vars} {len(inst.gamma.clauses)}"]
    out.append(" ".join(["h"] + [str(h) for h in inst.hypotheses] + ["0"]))
    out.append(f"q {inst.q}")
    out += [_clause_line(c) for c in inst.gamma.clauses]
    return "\n".join(out) + "\n"


def parse_diagnosis(data: str | bytes) -> DiagnosisInstance:
    """``p mbd V``; each ``b`` line opens a component, ``m`` opens the observation."""
    n = None
    sections: list[tuple[str, list[tuple[int, ...]]]] = []
    current: list[int] = []
    for no, toks in _lines(data):
        if toks[0] == "p":
            if len(toks) != 3 or toks[1] != "mbd":
                raise ParseError("expected 'p mbd V'", no)
            n = _ints(toks[2:], no)[0]
        elif n is None:
            raise ParseError("content before 'p mbd' header", no)
        elif toks[0] in ("b", "m") and len(toks) == 1:
            if current:
                raise ParseError("unterminated clause before section marker", no)
            sections.append((toks[0], []))
        else:
            if not sections:
                raise ParseError("clause outside a 'b' or 'm' section", no)
            for lit in _ints(toks, no):
                if lit == 0:
                    sections[-1][1].append(tuple(current))
                    current = []
                else:
                    if abs(lit) > n:
                        raise ParseError(f"variable {abs(lit)} exceeds header", no)
                    current.append(lit)
    if n is None:
        raise ParseError("missing 'p mbd' header")
    if current:
        raise ParseError("last clause is not zero-terminated")
    mus = [cl for tag, cl in sections if tag == "m"]
    if len(mus) != 1:
        raise ParseError("exactly one 'm' section is required")
    comps = [CnfFormula(n, cl) for tag, cl in sections if tag == "b"]
    return DiagnosisInstance(comps, CnfFormula(n, mus[0]))


def write_diagnosis(inst: DiagnosisInstance) -> str:
    out = [f"p mbd {inst.num_vars}"]
    for comp in inst.components:
        out.append("b")
        out += [_clause_line(c) for c in comp.clauses]
    out.append("m")
    out += [_clause_line(c) for c in inst.mu.clauses]
    return "\n".join(out) + "\n"
