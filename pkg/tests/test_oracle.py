import cmath
import math

import pytest

from stablerank import dsl, model as m, oracle, rules
from stablerank.lattice import INF, RankKind, en
from stablerank.rules import Bound, LeVar, Provenance


_P = Provenance("ASSUME", "test")

X = ("A", RankKind.TSR)
Y = ("A", RankKind.CSR)


# ------------------------------------------------------------ enumeration

def test_enumerate_simple_chain():
    constraints = [
        LeVar(X, Y, _P),
        Bound(var=Y, hi=en(2), prov=_P),
    ]
    solutions = oracle.enumerate_solutions(constraints, 3)
    pairs = sorted((s[X].to_json(), s[Y].to_json()) for s in solutions)
    assert pairs == [(1, 1), (1, 2), (2, 2)]


def test_enumerate_finite_k0_order_flag_forces_all_infinite():
    mod = m.build_model(dsl.parse(
        "algebra A = abstract { unit_finite_order_k0 = true }\n"))
    constraints = rules.instantiate_rules(mod)
    variables = [("A", kind) for kind in RankKind]
    flags = {("A", flag): value
             for flag, value in mod.algebras["A"].flags.as_dict().items()}
    solutions = oracle.enumerate_solutions(constraints, 3,
                                           variables=variables, flags=flags)
    assert len(solutions) == 1
    assert all(v == INF for v in solutions[0].values())


def test_enumerate_budget_exhaustion():
    constraints = [Bound(var=X, lo=en(1), prov=_P),
                   Bound(var=Y, lo=en(1), prov=_P)]
    with pytest.raises(oracle.TooLarge):
        oracle.enumerate_solutions(constraints, 6, budget=10)


def test_toeplitz_solution_set_is_the_computed_point():
    mod = m.build_model(dsl.parse("algebra T = toeplitz\n"))
    report = oracle.soundness_check(mod, cap=4)
    assert report.passed
    projections = {
        tuple(sol[("T", kind)].to_json() for kind in RankKind)
        for sol in report.solutions
    }
    assert projections == {(2, 2, 2, 2)}


def test_soundness_fixed_models():
    for text in ("algebra T2 = toeplitz_n(2)\n",
                 "algebra O2 = cuntz(2)\n",
                 "algebra Oinf = cuntz_inf\n"):
        mod = m.build_model(dsl.parse(text))
        report = oracle.soundness_check(mod, cap=4)
        assert report.passed, (text, report.describe())


def test_soundness_contradiction_requires_empty_solution_set():
    mod = m.build_model(dsl.parse(
        "algebra A = abstract\nassume tsr(A) <= 1\nassume tsr(A) >= 3\n"))
    report = oracle.soundness_check(mod, cap=4)
    assert report.contradiction is not None
    assert report.passed and report.solution_count == 0


def test_soundness_rejects_large_models():
    mod = m.build_model(dsl.parse(
        "".join(f"algebra A{i} = abstract\n" for i in range(5))))
    with pytest.raises(oracle.TooLarge):
        oracle.soundness_check(mod, cap=2)


def test_random_models_are_buildable_and_sound():
    for seed in range(40):
        mod = oracle.random_model(seed)
        report = oracle.soundness_check(mod, cap=4)
        assert report.passed, (seed, report.describe())


# --------------------------------------------------------------- winding

def _circle(k, n=1024, scale=1.0, rotate=0.0):
    return [scale * cmath.exp(1j * (2 * math.pi * k * t / n + rotate))
            for t in range(n)]


def test_winding_degrees_minus3_to_3():
    for k in range(-3, 4):
        assert oracle.winding_number(_circle(k)) == k


def test_winding_additivity_on_products():
    for a in range(-2, 3):
        for b in range(-2, 3):
            samples = [x * y for x, y in zip(_circle(a), _circle(b))]
            assert oracle.winding_number(samples) == a + b


def test_winding_invariance_under_rotation_and_scale():
    base = oracle.winding_number(_circle(2))
    assert oracle.winding_number(_circle(2, scale=7.5, rotate=1.3)) == base


def test_winding_rejects_coarse_sampling():
    with pytest.raises(oracle.SampleTooCoarse):
        # four turns over eight samples: every increment is a half turn
        oracle.winding_number(_circle(4, n=8))


def test_winding_rejects_zero_crossing():
    samples = _circle(1, n=16)
    samples[3] = 0.0
    with pytest.raises(oracle.ZeroCrossing):
        oracle.winding_number(samples)


def test_winding_requires_eight_samples():
    with pytest.raises(ValueError):
        oracle.winding_number(_circle(0, n=4))


# ---------------------------------------------------------- sphere check

def test_sphere_crosscheck_small():
    report = oracle.sphere_crosscheck(20)
    assert report.passed
    assert len(report.rows) == 20
    by_d = {d: (csr, gsr) for d, csr, gsr in report.rows}
    assert by_d[2] == (1, 1)
    assert by_d[5] == (4, 4)
    assert by_d[8] == (5, 4)
