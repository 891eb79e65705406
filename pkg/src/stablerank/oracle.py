"""Independent verification: exhaustive mini-solver, sphere cross-check,
and the numerical winding-number witness.

The enumerator implements the ground-truth semantics that the propagation
engine approximates: a total rank assignment satisfies a conditional by
material implication, with flags derived by the same forward closure the
engine performs.  Containment of the solution set in the propagated
intervals is therefore a genuine soundness statement about the rules and
the engine together.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .lattice import ExtNat, INF, RankInterval, RankKind, matrix_map_value
from .model import Model, build_model
from .rules import (
    Bound,
    Conditional,
    Constraint,
    EqVar,
    FlagIs,
    HiLe,
    LeMax,
    LeShift,
    LeVar,
    LoGe,
    MatrixEq,
    MatrixLe,
    SetFlag,
    SimpleConstraint,
    Var,
    instantiate_rules,
)
from . import engine as _engine
from . import topology

Assignment = Dict[Var, ExtNat]
FlagMap = Dict[Tuple[str, str], Optional[bool]]


class TooLarge(Exception):
    pass


class SampleTooCoarse(Exception):
    pass


class ZeroCrossing(Exception):
    pass


DEFAULT_BUDGET = 5_000_000


# --------------------------------------------------------- satisfaction

def _constraint_vars(c: Constraint) -> Tuple[Var, ...]:
    if isinstance(c, Bound):
        return (c.var,)
    if isinstance(c, (LeVar, LeShift, EqVar)):
        return (c.x, c.y)
    if isinstance(c, LeMax):
        return (c.x,) + tuple(t.var for t in c.terms)
    if isinstance(c, (MatrixEq, MatrixLe)):
        return (c.outer, c.inner)
    if isinstance(c, Conditional):
        out: List[Var] = []
        for g in c.guards:
            if isinstance(g, (HiLe, LoGe)):
                out.append(g.var)
        for e in c.effects:
            if not isinstance(e, SetFlag):
                out.extend(_constraint_vars(e))
        return tuple(out)
    raise TypeError(f"unknown constraint {c!r}")


def _simple_holds(c: SimpleConstraint, assign: Assignment) -> bool:
    if isinstance(c, Bound):
        v = assign[c.var]
        if c.lo is not None and v < c.lo:
            return False
        if c.hi is not None and v > c.hi:
            return False
        return True
    if isinstance(c, LeVar):
        return assign[c.x] <= assign[c.y]
    if isinstance(c, LeShift):
        return assign[c.x] <= assign[c.y].shifted(c.shift)
    if isinstance(c, LeMax):
        return assign[c.x] <= max(assign[t.var].shifted(t.shift)
                                  for t in c.terms)
    if isinstance(c, EqVar):
        return assign[c.x] == assign[c.y]
    if isinstance(c, MatrixEq):
        return assign[c.outer] == matrix_map_value(assign[c.inner], c.n)
    if isinstance(c, MatrixLe):
        return assign[c.outer] <= matrix_map_value(assign[c.inner], c.n)
    raise TypeError(f"unknown constraint {c!r}")


def _guards_hold(guards, assign: Assignment, flags: FlagMap) -> bool:
    for g in guards:
        if isinstance(g, HiLe):
            if assign[g.var] > g.value:
                return False
        elif isinstance(g, LoGe):
            if assign[g.var] < g.value:
                return False
        else:
            if flags.get((g.algebra, g.flag)) is not g.value:
                return False
    return True


def check_assignment(constraints: Sequence[Constraint], assign: Assignment,
                     declared_flags: FlagMap) -> bool:
    """Ground-truth satisfaction of the whole system by one assignment.

    Flags are closed forward exactly as the engine would: a fired
    conditional's SetFlag effects become known facts (a clash with a
    declared flag refutes the assignment), possibly enabling further
    conditionals.
    """
    flags: FlagMap = dict(declared_flags)
    simple = [c for c in constraints if not isinstance(c, Conditional)]
    for c in simple:
        if not _simple_holds(c, assign):
            return False
    pending = [c for c in constraints if isinstance(c, Conditional)]
    changed = True
    while changed:
        changed = False
        still: List[Conditional] = []
        for cond in pending:
            if _guards_hold(cond.guards, assign, flags):
                for effect in cond.effects:
                    if isinstance(effect, SetFlag):
                        key = (effect.algebra, effect.flag)
                        current = flags.get(key)
                        if current is None:
                            flags[key] = effect.value
                            changed = True
                        elif current is not effect.value:
                            return False
                    elif not _simple_holds(effect, assign):
                        return False
            else:
                still.append(cond)
        pending = still
    return True


# ----------------------------------------------------------- enumeration

def enumerate_solutions(constraints: Sequence[Constraint], cap: int, *,
                        variables: Optional[Sequence[Var]] = None,
                        flags: Optional[FlagMap] = None,
                        budget: int = DEFAULT_BUDGET) -> List[Assignment]:
    """All total assignments over {1..cap, inf} satisfying the system.

    Raises TooLarge when the DFS visits more than `budget` nodes.
    """
    if variables is None:
        seen: List[Var] = []
        for c in constraints:
            for v in _constraint_vars(c):
                if v not in seen:
                    seen.append(v)
        variables = seen
    variables = list(variables)
    declared_flags: FlagMap = dict(flags or {})
    domain = [ExtNat(v) for v in range(1, cap + 1)] + [INF]

    index = {v: i for i, v in enumerate(variables)}
    # simple constraints become prunable as soon as their last variable
    # (in assignment order) is placed
    prunable: List[List[SimpleConstraint]] = [[] for _ in variables]
    for c in constraints:
        if isinstance(c, Conditional):
            continue
        positions = [index[v] for v in _constraint_vars(c) if v in index]
        if positions:
            prunable[max(positions)].append(c)

    solutions: List[Assignment] = []
    assign: Assignment = {}
    nodes = 0

    def dfs(i: int) -> None:
        nonlocal nodes
        if i == len(variables):
            if check_assignment(constraints, assign, declared_flags):
                solutions.append(dict(assign))
            return
        var = variables[i]
        for value in domain:
            nodes += 1
            if nodes > budget:
                raise TooLarge(
                    f"enumeration exceeded the {budget}-node budget")
            assign[var] = value
            if all(_simple_holds(c, assign) for c in prunable[i]):
                dfs(i + 1)
        del assign[var]

    dfs(0)
    return solutions


@dataclass
class SoundnessReport:
    passed: bool
    solution_count: int
    violations: List[Tuple[Assignment, Var]] = field(default_factory=list)
    solutions: List[Assignment] = field(default_factory=list)
    contradiction: Optional[str] = None

    def describe(self) -> str:
        if self.contradiction is not None:
            return (f"soundness: {'PASS' if self.passed else 'FAIL'} "
                    f"(engine contradiction, {self.solution_count} solutions)")
        return (f"soundness: {'PASS' if self.passed else 'FAIL'} "
                f"({self.solution_count} solutions, "
                f"{len(self.violations)} violations)")


def soundness_check(model: Model, cap: int, *,
                    budget: int = DEFAULT_BUDGET) -> SoundnessReport:
    """Every enumerated solution must lie inside the propagated intervals.

    When propagation ends in a contradiction the system must have no
    solutions at all.
    """
    if len(model.algebra_order) > 4:
        raise TooLarge("soundness_check is limited to models with at most "
                       "4 algebras")
    constraints = instantiate_rules(model)
    variables = [(name, kind) for name in model.algebra_order
                 for kind in RankKind]
    declared_flags = {
        (name, flag): value
        for name in model.algebra_order
        for flag, value in model.algebras[name].flags.as_dict().items()
    }
    try:
        state = _engine.propagate(constraints, model, cap=cap)
    except _engine.Contradiction as conflict:
        solutions = enumerate_solutions(constraints, cap,
                                        variables=variables,
                                        flags=declared_flags, budget=budget)
        return SoundnessReport(passed=not solutions,
                               solution_count=len(solutions),
                               violations=[], solutions=solutions,
                               contradiction=str(conflict))
    solutions = enumerate_solutions(constraints, cap, variables=variables,
                                    flags=declared_flags, budget=budget)
    violations: List[Tuple[Assignment, Var]] = []
    for sol in solutions:
        for var, value in sol.items():
            if not state.intervals[var].contains(value):
                violations.append((sol, var))
                break
    return SoundnessReport(passed=not violations,
                           solution_count=len(solutions),
                           violations=violations, solutions=solutions)


# ------------------------------------------------------- winding witness

def winding_number(samples: Sequence[complex], *, snap_tol: float = 1e-6,
                   zero_tol: float = 1e-9) -> int:
    """Winding number of a sampled loop in the nonzero complex numbers.

    The loop closes from the last sample back to the first.  Raises
    ZeroCrossing when a sample is (numerically) zero and SampleTooCoarse
    when a phase increment reaches pi or the accumulated phase does not
    snap to an integer multiple of 2*pi.
    """
    if len(samples) < 8:
        raise ValueError("need at least 8 samples")
    for z in samples:
        if abs(z) < zero_tol:
            raise ZeroCrossing(f"sample {z!r} is numerically zero")
    total = 0.0
    n = len(samples)
    for i in range(n):
        dtheta = cmath.phase(samples[(i + 1) % n] / samples[i])
        if abs(dtheta) >= math.pi - 1e-12:
            raise SampleTooCoarse(
                f"phase increment {dtheta:.6f} at sample {i} is too large")
        total += dtheta
    turns = total / (2.0 * math.pi)
    nearest = round(turns)
    if abs(turns - nearest) > snap_tol:
        raise SampleTooCoarse(
            f"accumulated phase {turns:.9f} does not snap to an integer")
    return int(nearest)


# -------------------------------------------------------- sphere check

@dataclass
class SphereReport:
    passed: bool
    rows: List[Tuple[int, int, int]]  # (d, csr, gsr)
    first_mismatch: Optional[int] = None

    def describe(self) -> str:
        status = "PASS" if self.passed else f"FAIL at d={self.first_mismatch}"
        return f"sphere cross-check over {len(self.rows)} dimensions: {status}"


def sphere_crosscheck(max_d: int) -> SphereReport:
    """Table-derived gsr C(S^d) vs the closed form, plus the ord sanity
    check csr >= gsr, for every d up to max_d."""
    rows: List[Tuple[int, int, int]] = []
    first_mismatch: Optional[int] = None
    for d in range(1, max_d + 1):
        table = topology.gsr_sphere_via_table(d)
        closed = topology.gsr_sphere_closed_form(d)
        csr = topology.csr_sphere(d)
        rows.append((d, csr, table))
        if first_mismatch is None and (table != closed or csr < table):
            first_mismatch = d
    return SphereReport(passed=first_mismatch is None, rows=rows,
                        first_mismatch=first_mismatch)


# -------------------------------------------------------- random models

_RANDOM_FLAG_CHOICES = (
    ("is_cstar", True),
    ("is_commutative", True),
    ("is_finite", False),
    ("is_finite", True),
    ("is_stably_finite", False),
    ("k1_trivial", False),
    ("k1_trivial", True),
    ("unit_finite_order_k0", True),
)

_RANDOM_ATTRS = (
    ("onto",),
    ("onto", "split"),
    ("dense",),
    ("dense", "spectral"),
    ("gelfand",),
    ("homotopy_equiv",),
)


def random_model(seed: int) -> Model:
    """A small random model (1-2 algebras) for property testing."""
    rng = random.Random(seed)
    lines: List[str] = []
    names = ["A", "B"][: rng.randint(1, 2)]
    space_kinds = ("sphere", "torus", "cube")
    for i, name in enumerate(names):
        shape = rng.random()
        if shape < 0.5:
            flags = rng.sample(_RANDOM_FLAG_CHOICES, rng.randint(0, 2))
            body = "abstract"
            if flags:
                # drop pairs that declare the same flag twice
                chosen: Dict[str, bool] = {}
                for fname, fvalue in flags:
                    chosen.setdefault(fname, fvalue)
                inner = ", ".join(f"{k} = {'true' if v else 'false'}"
                                  for k, v in chosen.items())
                body = f"abstract {{ {inner} }}"
            lines.append(f"algebra {name} = {body}")
        elif shape < 0.8:
            kind = rng.choice(space_kinds)
            dim = rng.randint(0, 6)
            lines.append(f"space X{i} = {kind}({dim})")
            lines.append(f"algebra {name} = C(X{i})")
        elif i > 0:
            n = rng.randint(2, 3)
            lines.append(f"algebra {name} = matrix({n}, {names[0]})")
        else:
            lines.append("algebra A = abstract { is_cstar = true }")
    if len(names) == 2 and rng.random() < 0.6:
        attrs = rng.choice(_RANDOM_ATTRS)
        src, dst = rng.sample(names, 2)
        lines.append(f"morphism f: {src} -> {dst} [{', '.join(attrs)}]")
    if rng.random() < 0.5:
        rank = rng.choice(["bsr", "tsr", "csr", "gsr"])
        rel = rng.choice(["==", "<=", ">="])
        value = rng.choice(["1", "2", "3", "inf"])
        lines.append(f"assume {rank}({rng.choice(names)}) {rel} {value}")
    from .dsl import parse

    return build_model(parse("\n".join(lines) + "\n"))
