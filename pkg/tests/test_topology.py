import pytest

from stablerank.lattice import ExtNat, RankInterval, en
from stablerank.model import SpaceDescriptor, build_model
from stablerank.dsl import parse
from stablerank import topology


def space_of(text, name):
    return build_model(parse(text)).spaces[name]


def test_unstable_pi_examples():
    g = topology.unstable_pi_U(8, 4)
    assert g.kind == "cyclic_finite" and g.order == 24  # 4!
    g = topology.unstable_pi_U(9, 4)
    assert g.kind == "cyclic_finite" and g.order == 2
    g = topology.unstable_pi_U(6, 4)
    assert g.stable and g.certainly_trivial
    g = topology.unstable_pi_U(7, 4)  # stable, odd degree
    assert g.stable and g.kind == "free_cyclic"
    g = topology.unstable_pi_U(11, 4)
    assert g.kind == "finite_summand" and g.order == 4  # gcd(4, 8)
    g = topology.unstable_pi_U(9, 3)  # odd n, degree 2n + 3... unknown slot
    assert g.kind in ("unknown", "trivial")


def test_stabilization_examples():
    assert topology.stabilization_injective(8, 4) is False
    assert topology.stabilization_injective(8, 5) is True
    assert topology.stabilization_injective(11, 4) is False
    assert topology.stabilization_injective(9, 4) is False  # Z_2 -> Z
    assert topology.stabilization_injective(9, 5) is True   # stable iso


def test_stabilization_low_degrees_always_injective():
    for k in range(0, 4):
        for n in range(0, 12):
            assert topology.stabilization_injective(k, n) is True


def test_stabilization_monotone_in_stable_range():
    for k in range(4, 30):
        threshold = k // 2 + 1
        for n in range(threshold, threshold + 10):
            assert topology.stabilization_injective(k, n) is True


def test_gsr_sphere_examples():
    assert topology.gsr_sphere_via_table(5) == 4
    assert topology.gsr_sphere_via_table(8) == 4
    assert topology.gsr_sphere_via_table(4) == 1
    assert topology.gsr_sphere_via_table(1) == 1


def test_gsr_sphere_table_matches_closed_form_up_to_200():
    for d in range(0, 201):
        assert topology.gsr_sphere_via_table(d) == \
            topology.gsr_sphere_closed_form(d), f"d={d}"


def test_csr_sphere():
    assert topology.csr_sphere(1) == 2
    assert topology.csr_sphere(2) == 1
    assert topology.csr_sphere(7) == 5


def test_dim_rank():
    cube3 = space_of("space X = cube(3)\n", "X")
    assert topology.dim_rank(cube3) == en(2)
    point = space_of("space P = point\n", "P")
    assert topology.dim_rank(point) == en(1)
    torus5 = space_of("space T = torus(5)\n", "T")
    assert topology.dim_rank(torus5) == en(3)


def test_dim_rank_unknown_dimension():
    desc = SpaceDescriptor(id="X", kind="custom", dim=None)
    with pytest.raises(topology.UnknownDimension):
        topology.dim_rank(desc)
    with pytest.raises(topology.UnknownDimension):
        topology.csr_bound(desc)
    with pytest.raises(topology.UnknownDimension):
        topology.gsr_commutative(desc)


def test_csr_bound_examples():
    s2 = space_of("space X = sphere(2)\n", "X")
    assert topology.csr_bound(s2) == RankInterval.exact(en(1))
    t4 = space_of("space X = torus(4)\n", "X")
    assert topology.csr_bound(t4) == RankInterval.exact(en(3))
    custom6 = space_of("space X = custom { dim = 6 }\n", "X")
    assert topology.csr_bound(custom6) == RankInterval(en(1), en(4))


def test_csr_bound_vanishing_top_cohomology_sharpens():
    # odd-dimensional metric space with provably zero top cohomology
    text = ("space X = custom { dim = 5, metric = true, "
            "top_cohomology_nonzero = false }\n")
    assert topology.csr_bound(space_of(text, "X")) == RankInterval(en(1), en(3))


def test_gsr_commutative_examples():
    s8 = space_of("space X = sphere(8)\n", "X")
    assert topology.gsr_commutative(s8) == RankInterval.exact(en(4))
    cube9 = space_of("space X = cube(9)\n", "X")
    assert topology.gsr_commutative(cube9) == RankInterval.exact(en(1))
    t5 = space_of("space X = torus(5)\n", "X")
    assert topology.gsr_commutative(t5) == RankInterval(en(1), en(4))


def test_builtin_spaces_satisfy_ord_consistency():
    texts = [
        ("space X = sphere(%d)\n", range(0, 15)),
        ("space X = torus(%d)\n", range(0, 15)),
        ("space X = cube(%d)\n", range(0, 15)),
    ]
    for template, dims in texts:
        for d in dims:
            space = space_of(template % d, "X")
            gsr = topology.gsr_commutative(space)
            csr = topology.csr_bound(space)
            tsr = topology.dim_rank(space)
            assert gsr.hi <= csr.hi
            assert csr.hi <= tsr.succ()
