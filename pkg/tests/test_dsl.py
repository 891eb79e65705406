import math
import random

import pytest

from stablerank.lattice import INF, ExtNat, RankKind
from stablerank import dsl


# ------------------------------------------------------- random generators

_TRI = (True, False, None)


def _ident(rng):
    return rng.choice(("A", "B", "Xspace", "phi", "ext1", "T_2", "Q9", "zz"))


def _value(rng):
    if rng.random() < 0.2:
        return INF
    return ExtNat(rng.randint(1, 12))


def _flags(rng):
    names = rng.sample(dsl.FLAG_NAMES, rng.randint(1, 3))
    return tuple((n, rng.choice(_TRI)) for n in names)


def _random_space(rng):
    kind = rng.choice(("sphere", "torus", "cube", "point", "product", "custom"))
    decl = dsl.SpaceDecl(name=_ident(rng), kind=kind)
    if kind in ("sphere", "torus", "cube"):
        decl.dim = rng.randint(0, 12)
    elif kind == "product":
        decl.factors = tuple(_ident(rng) for _ in range(rng.randint(1, 3)))
        if rng.random() < 0.5:
            decl.dim_override = rng.randint(0, 9)
    elif kind == "custom":
        decl.dim = rng.randint(0, 12)
        if rng.random() < 0.6:
            decl.metric = rng.choice(_TRI[:2])
        if rng.random() < 0.4:
            decl.contractible = rng.choice(_TRI[:2])
        if rng.random() < 0.4:
            decl.top_cohomology_nonzero = rng.choice(_TRI[:2])
        if rng.random() < 0.4:
            decl.codim1_cohomology_nonzero = rng.choice(_TRI[:2])
    return decl


def _random_algebra(rng):
    kind = rng.choice(("cof", "matrix", "sum", "stabilize", "limit",
                       "tensor_ext", "abstract", "catalog"))
    decl = dsl.AlgebraDecl(name=_ident(rng), kind=kind)
    if kind == "cof":
        decl.space = _ident(rng)
    elif kind == "matrix":
        decl.size = rng.randint(1, 9)
        decl.base = _ident(rng)
    elif kind == "sum":
        decl.parts = (_ident(rng), _ident(rng))
    elif kind == "stabilize":
        decl.base = _ident(rng)
    elif kind == "limit":
        decl.parts = tuple(_ident(rng) for _ in range(rng.randint(1, 4)))
        if rng.random() < 0.5:
            kinds = rng.sample(list(RankKind), rng.randint(1, 2))
            decl.liminf = tuple((k, _value(rng)) for k in kinds)
    elif kind == "tensor_ext":
        decl.parts = tuple(_ident(rng) for _ in range(rng.randint(1, 3)))
        if rng.random() < 0.5:
            decl.z_space = _ident(rng)
    elif kind == "catalog":
        name = rng.choice(sorted(dsl.CATALOG_NAMES))
        decl.catalog_name = name
        if dsl.CATALOG_NAMES[name]:
            decl.catalog_arg = rng.randint(2, 8)
    if rng.random() < 0.4:
        decl.flags = _flags(rng)
    return decl


def _random_statement(rng):
    roll = rng.random()
    if roll < 0.30:
        return _random_space(rng)
    if roll < 0.60:
        return _random_algebra(rng)
    if roll < 0.72:
        attrs = rng.sample(dsl.MORPHISM_ATTRS, rng.randint(1, 3))
        return dsl.MorphismDecl(_ident(rng), _ident(rng), _ident(rng),
                                tuple(attrs))
    if roll < 0.82:
        return dsl.ExtensionDecl(_ident(rng), _ident(rng), _ident(rng),
                                 _ident(rng), rng.random() < 0.5)
    if roll < 0.90:
        return dsl.AssumeDecl(rng.choice(list(RankKind)), _ident(rng),
                              rng.choice(("==", "<=", ">=")), _value(rng))
    if roll < 0.96:
        return dsl.AssertDecl(rng.choice(list(RankKind)), _ident(rng),
                              rng.choice(("==", "<=", ">=")), _value(rng))
    return dsl.QueryDecl(_ident(rng))


# -------------------------------------------------------------- round trips

def test_round_trip_500_random_statement_lists():
    rng = random.Random(20260823)
    for _ in range(500):
        statements = [_random_statement(rng) for _ in range(rng.randint(1, 6))]
        text = dsl.format_statements(statements)
        reparsed = dsl.parse(text)
        assert reparsed == statements
        # formatting is idempotent on the canonical form
        assert dsl.format_statements(reparsed) == text


def test_round_trip_handcrafted():
    text = (
        "space X = sphere(5)\n"
        "space P = product(X, X) { dim = 10 }\n"
        "algebra A = C(X) { is_cstar = true, k1_trivial = unknown }\n"
        "algebra M = matrix(3, A)\n"
        "algebra L = limit(A, M) liminf tsr = inf liminf csr = 4\n"
        "algebra E = tensor_ext(e1, e2) times C(X)\n"
        "extension e1: A -> M -> A [approx_identity]\n"
        "morphism f: A -> M [onto, split]\n"
        "assume csr(A) <= 4\n"
        "assert gsr(A) >= 1\n"
        "query A\n"
    )
    statements = dsl.parse(text)
    assert dsl.format_statements(statements) == text


def test_comments_and_whitespace_ignored():
    text = "  # leading comment\nalgebra   A=abstract   # trailing\n\n\nquery A"
    statements = dsl.parse(text)
    assert len(statements) == 2
    assert statements[0].name == "A"
    assert isinstance(statements[1], dsl.QueryDecl)


def test_inf_literal():
    (stmt,) = dsl.parse("assume tsr(A) == inf\n")
    assert stmt.value == INF
    assert "inf" in dsl.format_statement(stmt)


def test_empty_input():
    assert dsl.parse("") == []
    assert dsl.format_statements([]) == ""


# ------------------------------------------------------------ error reports

def _expect_error(text):
    with pytest.raises(dsl.ParseError) as info:
        dsl.parse(text)
    return info.value


def test_error_spans_point_into_input():
    bad_inputs = [
        "space X = blob(3)\n",
        "algebra A = matrix(0, B)\n",
        "algebra A = abstract { is_blue = true }\n",
        "morphism f: A -> B [quiet]\n",
        "assume zzz(A) == 2\n",
        "assume tsr(A) != 2\n",
        "query\n",
        "algebra A = cuntz\n",
        "space X = custom { metric = true }\n",
    ]
    for text in bad_inputs:
        err = _expect_error(text)
        assert 0 <= err.span.begin <= err.span.end <= len(text), text
        assert err.span.line >= 1 and err.span.column >= 1, text


def test_error_expected_sets():
    err = _expect_error("assume tsr(A) = 2\n")
    assert set(err.expected) == {"==", "<=", ">="}
    err = _expect_error("bogus A = abstract\n")
    assert "algebra" in err.expected and "space" in err.expected
    err = _expect_error("space X = blob(3)\n")
    assert "sphere" in err.expected and "custom" in err.expected


def test_matrix_size_zero_rejected():
    err = _expect_error("algebra A = matrix(0, B)\n")
    assert "matrix size" in err.message


def test_unexpected_character():
    err = _expect_error("algebra A = abstract\n$\n")
    assert "$" in err.message
    assert err.span.line == 2


def test_duplicate_flag_rejected():
    err = _expect_error(
        "algebra A = abstract { is_cstar = true, is_cstar = false }\n")
    assert "duplicate" in err.message


def test_catalog_arity_enforced():
    _expect_error("algebra A = cuntz\n")          # missing required arg
    _expect_error("algebra A = toeplitz(2)\n")    # spurious arg
    _expect_error("algebra A = cuntz(1)\n")       # below minimum
    dsl.parse("algebra A = l1_lattice(1)\n")      # minimum 1 here
