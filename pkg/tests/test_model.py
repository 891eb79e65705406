import pytest

from stablerank import dsl, model as m
from stablerank.lattice import RankKind


def build(text):
    return m.build_model(dsl.parse(text))


# --------------------------------------------------------------- spaces

def test_builtin_space_attributes():
    mod = build(
        "space S = sphere(3)\n"
        "space T = torus(2)\n"
        "space C = cube(4)\n"
        "space P = point\n")
    s = mod.spaces["S"]
    assert (s.dim, s.metric, s.contractible) == (3, True, False)
    assert s.top_cohomology_nonzero is True
    assert s.codim1_cohomology_nonzero is False
    t = mod.spaces["T"]
    assert (t.dim, t.contractible) == (2, False)
    assert t.codim1_cohomology_nonzero is True
    c = mod.spaces["C"]
    assert (c.dim, c.contractible) == (4, True)
    assert c.top_cohomology_nonzero is False
    p = mod.spaces["P"]
    assert (p.dim, p.contractible) == (0, True)


def test_circle_vs_higher_sphere_codim1():
    assert build("space X = sphere(1)\n").spaces["X"].codim1_cohomology_nonzero \
        is True
    assert build("space X = sphere(2)\n").spaces["X"].codim1_cohomology_nonzero \
        is False


def test_product_dim_exact_for_builtin_factors():
    mod = build(
        "space A = sphere(5)\n"
        "space B = sphere(7)\n"
        "space P = product(A, B)\n")
    p = mod.spaces["P"]
    assert p.dim == 12 and not p.dim_assumed
    assert p.dim_lower == 12
    assert p.metric is True and p.contractible is False


def test_product_dim_assumed_with_custom_factor():
    mod = build(
        "space A = custom { dim = 4 }\n"
        "space B = torus(3)\n"
        "space P = product(A, B)\n")
    p = mod.spaces["P"]
    assert p.dim == 7 and p.dim_assumed
    assert p.dim_lower == 3  # only the torus factor's dimension is certain
    assert p.dim_provably_ne_one()


def test_product_dim_override_is_exact():
    mod = build(
        "space A = custom { dim = 4 }\n"
        "space P = product(A, A) { dim = 8 }\n")
    p = mod.spaces["P"]
    assert p.dim == 8 and not p.dim_assumed


def test_dim_provably_ne_one():
    assert build("space X = sphere(1)\n").spaces["X"].dim_provably_ne_one() \
        is False
    assert build("space X = sphere(2)\n").spaces["X"].dim_provably_ne_one() \
        is True
    assert build("space X = point\n").spaces["X"].dim_provably_ne_one() is True


# ---------------------------------------------------------------- algebras

def test_cof_space_flags_inherited():
    mod = build("space X = torus(2)\nalgebra A = C(X)\n")
    flags = mod.algebras["A"].flags
    assert flags.is_cstar is True
    assert flags.is_commutative is True
    assert flags.is_stably_finite is True
    assert flags.is_finite is True  # closure of is_stably_finite


def test_matrix_and_sum_inherit_cstar():
    mod = build(
        "space X = cube(1)\n"
        "algebra A = C(X)\n"
        "algebra M = matrix(2, A)\n"
        "algebra S = sum(A, M)\n"
        "algebra K = stabilize(A)\n")
    assert mod.algebras["M"].flags.is_cstar is True
    assert mod.algebras["S"].flags.is_cstar is True
    assert mod.algebras["K"].flags.is_cstar is True


def test_flag_closure_purely_infinite():
    mod = build("algebra A = abstract { is_purely_infinite_simple = true }\n")
    flags = mod.algebras["A"].flags
    assert flags.is_cstar is True
    assert flags.is_infinite_simple is True
    assert flags.is_finite is False
    assert flags.is_stably_finite is False


def test_flag_conflict_raised():
    with pytest.raises(m.FlagConflict):
        build("algebra A = abstract "
              "{ is_purely_infinite_simple = true, is_finite = true }\n")


def test_tensor_ext_materialization():
    text = (
        "space X = sphere(5)\n"
        "space Z = sphere(1)\n"
        "algebra K = compacts\n"
        "algebra CX = C(X)\n"
        "algebra E = abstract { is_cstar = true }\n"
        "extension e: K -> E -> CX\n"
        "algebra A = tensor_ext(e) times C(Z)\n")
    mod = build(text)
    node = mod.algebras["A"]
    assert isinstance(node.kind, m.TensorExt)
    assert node.kind.product_space == "A__X"
    assert node.kind.cx_algebra == "A__CX"
    assert mod.algebras["A__CX"].generated
    assert mod.spaces["A__X"].dim == 6 and not mod.spaces["A__X"].dim_assumed
    # extension quotient map synthesized as an onto morphism
    assert any(mo.id == "e__onto" and mo.src == "E" and mo.dst == "CX"
               and mo.has("onto") for mo in mod.morphisms)


def test_tensor_ext_single_extension_reuses_quotient():
    text = (
        "space X = torus(3)\n"
        "algebra K = compacts\n"
        "algebra CX = C(X)\n"
        "algebra E = abstract { is_cstar = true }\n"
        "extension e: K -> E -> CX\n"
        "algebra A = tensor_ext(e)\n")
    mod = build(text)
    node = mod.algebras["A"]
    assert node.kind.product_space == "X"
    assert node.kind.cx_algebra == "CX"
    assert "A__CX" not in mod.algebras


def test_cstar_ideal_forces_approx_identity():
    text = (
        "space X = sphere(1)\n"
        "algebra K = compacts\n"
        "algebra CX = C(X)\n"
        "algebra E = abstract\n"
        "extension e: K -> E -> CX\n")
    mod = build(text)
    assert mod.extensions["e"].approx_identity is True


def test_split_implies_onto():
    mod = build(
        "algebra A = abstract\nalgebra B = abstract\n"
        "morphism f: A -> B [split]\n")
    (morphism,) = mod.morphisms
    assert morphism.has("onto")


# ------------------------------------------------------------------ errors

def test_duplicate_identifiers():
    with pytest.raises(m.DuplicateIdentifier):
        build("algebra A = abstract\nalgebra A = abstract\n")
    with pytest.raises(m.DuplicateIdentifier):
        build("space X = point\nspace X = point\n")


def test_unknown_identifiers():
    with pytest.raises(m.UnknownIdentifier):
        build("algebra A = C(X)\n")
    with pytest.raises(m.UnknownIdentifier):
        build("algebra A = matrix(2, B)\n")
    with pytest.raises(m.UnknownIdentifier):
        build("query A\n")
    with pytest.raises(m.UnknownIdentifier):
        build("assume tsr(A) <= 2\n")


def test_cyclic_algebra_graph():
    with pytest.raises(m.CyclicAlgebraGraph):
        build("algebra A = matrix(2, B)\nalgebra B = stabilize(A)\n")


def test_build_is_deterministic():
    text = (
        "space X = torus(4)\n"
        "algebra A = C(X)\n"
        "algebra T = toeplitz\n"
        "algebra M = matrix(3, A)\n"
        "query A\nquery M\n")
    one = build(text)
    two = build(text)
    assert one.algebra_order == two.algebra_order
    assert set(one.spaces) == set(two.spaces)
    assert one.assumptions == two.assumptions
    assert one.morphisms == two.morphisms


def test_flag_closure_idempotent():
    mod = build("algebra A = abstract { is_purely_infinite_simple = true }\n")
    before = mod.algebras["A"].flags.as_dict()
    m.close_flags(mod.algebras["A"].flags, "A")
    assert mod.algebras["A"].flags.as_dict() == before


# ------------------------------------------------------------- diagnostics

def _messages(mod, level=None):
    out = m.validate(mod)
    if level:
        out = [d for d in out if d.level == level]
    return [str(d) for d in out]


def test_validate_dim_one_warning():
    text = (
        "space X = sphere(1)\n"
        "algebra K = compacts\n"
        "algebra CX = C(X)\n"
        "algebra E = abstract { is_cstar = true }\n"
        "extension e: K -> E -> CX\n"
        "algebra A = tensor_ext(e)\n")
    warnings = _messages(build(text), "warning")
    assert any("dimension may equal 1" in w for w in warnings)


def test_validate_bsr_liminf_warning():
    text = (
        "algebra A = abstract\n"
        "algebra L = limit(A) liminf bsr = 2\n")
    warnings = _messages(build(text), "warning")
    assert any("bsr liminf" in w for w in warnings)


def test_validate_custom_metric_warning():
    text = ("space X = custom { dim = 3, top_cohomology_nonzero = false }\n"
            "algebra A = C(X)\n")
    warnings = _messages(build(text), "warning")
    assert any("metric" in w for w in warnings)


def test_validate_assumed_product_dim_info():
    text = (
        "space A = custom { dim = 4 }\n"
        "space B = torus(3)\n"
        "space P = product(A, B)\n"
        "algebra CP = C(P)\n")
    infos = _messages(build(text), "info")
    assert any("assumed" in msg for msg in infos)


def test_validate_gelfand_target_warning():
    text = ("algebra A = abstract\nalgebra B = abstract\n"
            "morphism f: A -> B [gelfand]\n")
    warnings = _messages(build(text), "warning")
    assert any("gelfand" in w for w in warnings)


def test_validate_clean_model_has_no_warnings():
    text = "space X = torus(3)\nalgebra A = C(X)\nquery A\n"
    assert _messages(build(text), "warning") == []
