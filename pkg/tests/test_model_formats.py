import pytest
from hypothesis import given, strategies as st

from enumkit import formats
from enumkit.formats import ParseError
from enumkit.model import (
    BoolRelation,
    CnfFormula,
    DiagnosisInstance,
    Graph,
    Hypergraph,
    ModelError,
    QbfInstance,
    bits_to_str,
    lex_compare,
    normalize_clause,
    str_to_bits,
)

from conftest import cnf


def test_parse_dimacs_examples():
    f = formats.parse_dimacs("p cnf 2 1\n1 2 0")
    assert f.num_vars == 2 and f.clauses == [(1, 2)]
    f = formats.parse_dimacs("p cnf 1 2\n1 0\n-1 0")
    assert f.clauses == [(1,), (-1,)]
    with pytest.raises(ParseError):
        formats.parse_dimacs("p cnf 2 1\n1 3 0")


def test_parse_dimacs_header_mismatch():
    with pytest.raises(ParseError):
        formats.parse_dimacs("p cnf 2 2\n1 2 0")


def test_parse_gamma_examples():
    f = formats.parse_gamma("rel OR2 2 {01,10,11}\nvars 2\nOR2(1,2)")
    assert len(f.constraints) == 1 and f.language["OR2"].arity == 2
    g = formats.parse_gamma("rel ONE 3 {100,010,001}\nvars 3\nONE(1,2,3)")
    assert g.language["ONE"].arity == 3
    with pytest.raises(ParseError):
        formats.parse_gamma("rel OR2 2 {01,10,11}\nvars 3\nOR2(1,2,3)")
    with pytest.raises(ParseError):
        formats.parse_gamma("vars 2\nNOPE(1,2)")


def test_parse_database_examples():
    db, egds = formats.parse_database("r(0). r(1). egd: r(X), r(Y) -> X = Y.")
    assert len(db.atoms) == 2 and len(egds) == 1
    db, _ = formats.parse_database("r(0). r(0).")
    assert len(db.atoms) == 1
    with pytest.raises(ParseError):
        formats.parse_database("r(0). egd: r(X) -> X = Z.")


def test_lex_compare_examples():
    assert lex_compare((0, 1, 0), (0, 1, 1)) < 0
    assert lex_compare((1, 0, 0), (0, 1, 1)) > 0
    assert lex_compare((1, 0, 1), (1, 0, 1)) == 0
    with pytest.raises(ValueError):
        lex_compare((0,), (0, 1))


bitvecs = st.integers(1, 8).flatmap(lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=3, max_size=3))


@given(bitvecs)
def test_lex_compare_is_integer_order(vs):
    a, b, c = (tuple(v) for v in vs)
    as_int = lambda t: int("".join(map(str, t)), 2)
    sign = lambda x, y: (lex_compare(x, y) > 0) - (lex_compare(x, y) < 0)
    assert sign(a, b) == (as_int(a) > as_int(b)) - (as_int(a) < as_int(b))
    assert sign(a, b) == -sign(b, a)
    if lex_compare(a, b) <= 0 and lex_compare(b, c) <= 0:
        assert lex_compare(a, c) <= 0


@given(st.lists(st.integers(-5, 5).filter(bool), max_size=8))
def test_normalization_idempotent(lits):
    c = normalize_clause(lits)
    if c is not None:
        assert normalize_clause(c) == c


def test_bits_roundtrip():
    assert bits_to_str(str_to_bits("0110")) == "0110"


clauses = st.lists(st.lists(st.integers(-6, 6).filter(bool), min_size=1, max_size=4), max_size=10)


@given(clauses)
def test_dimacs_roundtrip(cls):
    f = CnfFormula(6, cls)
    g = formats.parse_dimacs(formats.write_dimacs(f))
    assert g == f
    assert formats.parse_dimacs(formats.write_dimacs(g)) == g


def test_ecnf_roundtrip():
    inst = QbfInstance(4, [1, 2], [("e", [3]), ("a", [4])], [(1, 3, 3), (-2, 4)], "dnf")
    back = formats.parse_ecnf(formats.write_ecnf(inst))
    assert back == inst


def test_gamma_roundtrip():
    f = formats.parse_gamma("rel IMP 2 {00,01,11}\nrel ONE 3 {100,010,001}\nvars 3\nIMP(1,2)\nONE(1,2,3)")
    assert formats.parse_gamma(formats.write_gamma(f)) == f


def test_graph_and_hypergraph_roundtrip():
    g = Graph(4, {frozenset((1, 2)), frozenset((3, 4))})
    assert formats.parse_graph(formats.write_graph(g)) == g
    h = Hypergraph(3, [frozenset((1, 2)), frozenset((2, 3))])
    assert formats.parse_hypergraph(formats.write_hypergraph(h)) == h


def test_database_roundtrip():
    text = "p(0,1). p(0,2). egd: p(X,Y), p(X,Z) -> Y = Z."
    db, egds = formats.parse_database(text)
    db2, egds2 = formats.parse_database(formats.write_database(db, egds))
    assert db2 == db and egds2 == egds


def test_abduction_and_diagnosis_roundtrip():
    a = formats.parse_abduction("p abd 3 1\nh 1 2 0\nq 3\n-1 3 0\n")
    assert a.hypotheses == [1, 2] and a.q == 3
    assert formats.parse_abduction(formats.write_abduction(a)) == a
    d = DiagnosisInstance([cnf(2, (1,)), cnf(2, (-1, 2))], cnf(2, (-2,)))
    assert formats.parse_diagnosis(formats.write_diagnosis(d)) == d


def test_model_errors():
    with pytest.raises(ModelError):
        CnfFormula(1, [(2,)])
    with pytest.raises(ModelError):
        QbfInstance(2, [1], [("e", [1, 2])], [])
    with pytest.raises((ModelError, ValueError)):
        BoolRelation(2, frozenset())


def test_tautologies_dropped():
    assert CnfFormula(2, [(1, -1), (2, 2)]).clauses == [(2,)]
