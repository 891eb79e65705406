"""Fixpoint constraint propagation over rank intervals and tri-state flags.

The propagator repeatedly applies monotone narrowing operators (one per
constraint) until nothing changes.  All operators only shrink intervals and
only move flags from unknown to known, so the fixpoint is unique and
independent of processing order.  Every applied change is recorded as a
trace step carrying the provenance of the constraint that caused it and the
variables consulted, which powers `explain` and contradiction minimization.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .lattice import (
    ExtNat,
    INF,
    MAX_FINITE_DEFAULT,
    RankInterval,
    RankKind,
    apply_matrix_map,
    clamp,
    invert_matrix_map,
    matrix_map_value,
)
from .model import Model
from .rules import (
    Bound,
    Conditional,
    Constraint,
    EqVar,
    FlagIs,
    Guard,
    HiLe,
    LeMax,
    LeShift,
    LeVar,
    LoGe,
    MatrixEq,
    MatrixLe,
    Provenance,
    SetFlag,
    SimpleConstraint,
    Var,
    var_name,
)

#: A trace/premise target: a rank variable or a (algebra, flag) pair.
FlagKey = Tuple[str, str]
Target = Union[Var, FlagKey]


def target_name(target: Target) -> str:
    first, second = target
    if isinstance(second, RankKind):
        return f"{second.value}({first})"
    return f"{second}({first})"


@dataclass(frozen=True)
class TraceStep:
    index: int
    target: Target
    kind: str  # "interval" | "flag"
    old: Union[RankInterval, Optional[bool]]
    new: Union[RankInterval, bool]
    prov: Provenance
    premises: Tuple[Target, ...] = ()

    def describe(self) -> str:
        if self.kind == "interval":
            change = f"{self.old} -> {self.new}"
        else:
            change = f"unknown -> {self.new}"
        return (f"[{self.prov.rule_id}] {target_name(self.target)}: {change}"
                f"  ({self.prov.citation})")

    def to_json(self) -> dict:
        if self.kind == "interval":
            old = {"lo": self.old.lo.to_json(), "hi": self.old.hi.to_json()}
            new = {"lo": self.new.lo.to_json(), "hi": self.new.hi.to_json()}
        else:
            old, new = self.old, self.new
        return {
            "index": self.index,
            "variable": target_name(self.target),
            "kind": self.kind,
            "old": old,
            "new": new,
            "ruleId": self.prov.rule_id,
            "citation": self.prov.citation,
            "premises": [target_name(p) for p in self.premises],
        }


@dataclass
class RankState:
    intervals: Dict[Var, RankInterval]
    flags: Dict[FlagKey, Optional[bool]]
    trace: List[TraceStep] = field(default_factory=list)

    def interval(self, algebra: str, kind: RankKind) -> RankInterval:
        return self.intervals[(algebra, kind)]


class Contradiction(Exception):
    """Irreconcilable facts about one variable or flag.

    `slice_steps` is a minimal trace slice: replaying exactly these steps
    from the initial state and then applying `constraint` reproduces the
    conflict (see `replay_reproduces_conflict`).
    """

    def __init__(self, target: Target, fact_held: str, fact_new: str,
                 slice_steps: List[TraceStep], constraint: Constraint):
        self.target = target
        self.fact_held = fact_held
        self.fact_new = fact_new
        self.slice_steps = slice_steps
        self.constraint = constraint
        super().__init__(
            f"contradiction on {target_name(target)}: {fact_held} "
            f"vs {fact_new} ({constraint.prov.citation})")


class NoDerivation(Exception):
    pass


# internal: a single narrowing proposal
@dataclass(frozen=True)
class _Update:
    var: Var
    interval: RankInterval
    premises: Tuple[Target, ...]


class _Conflict(Exception):
    def __init__(self, target: Target, fact_held: str, fact_new: str,
                 constraint: Constraint, premises: Tuple[Target, ...]):
        super().__init__(fact_new)
        self.target = target
        self.fact_held = fact_held
        self.fact_new = fact_new
        self.constraint = constraint
        self.premises = premises


def _minus(v: ExtNat, s: int) -> ExtNat:
    if v.is_inf:
        return INF
    return ExtNat(max(1, v.finite - s))


def _updates_for(c: SimpleConstraint, iv: Dict[Var, RankInterval]
                 ) -> List[_Update]:
    """Narrowing proposals for one non-conditional constraint."""
    out: List[_Update] = []
    if isinstance(c, Bound):
        lo = c.lo or ExtNat(1)
        hi = c.hi or INF
        out.append(_Update(c.var, RankInterval(min(lo, hi), hi)
                           if lo <= hi else RankInterval(lo, lo), ()))
        # an inconsistent Bound (lo > hi) cannot be built by the rules
    elif isinstance(c, LeVar):
        out.append(_Update(c.x, RankInterval.at_most(iv[c.y].hi), (c.y,)))
        out.append(_Update(c.y, RankInterval.at_least(iv[c.x].lo), (c.x,)))
    elif isinstance(c, LeShift):
        out.append(_Update(c.x, RankInterval.at_most(iv[c.y].hi.shifted(c.shift)),
                           (c.y,)))
        out.append(_Update(c.y, RankInterval.at_least(_minus(iv[c.x].lo, c.shift)),
                           (c.x,)))
    elif isinstance(c, LeMax):
        term_his = [iv[t.var].hi.shifted(t.shift) for t in c.terms]
        out.append(_Update(c.x, RankInterval.at_most(max(term_his)),
                           tuple(t.var for t in c.terms)))
        lo_x = iv[c.x].lo
        for i, t in enumerate(c.terms):
            if all(lo_x > term_his[j] for j in range(len(c.terms)) if j != i):
                premises = (c.x,) + tuple(
                    u.var for j, u in enumerate(c.terms) if j != i)
                out.append(_Update(t.var,
                                   RankInterval.at_least(_minus(lo_x, t.shift)),
                                   premises))
    elif isinstance(c, EqVar):
        out.append(_Update(c.x, iv[c.y], (c.y,)))
        out.append(_Update(c.y, iv[c.x], (c.x,)))
    elif isinstance(c, MatrixEq):
        out.append(_Update(c.outer, apply_matrix_map(iv[c.inner], c.n),
                           (c.inner,)))
        out.append(_Update(c.inner, invert_matrix_map(iv[c.outer], c.n),
                           (c.outer,)))
    elif isinstance(c, MatrixLe):
        out.append(_Update(
            c.outer,
            RankInterval.at_most(matrix_map_value(iv[c.inner].hi, c.n)),
            (c.inner,)))
        out.append(_Update(
            c.inner,
            RankInterval.at_least(
                invert_matrix_map(RankInterval.at_least(iv[c.outer].lo),
                                  c.n).lo),
            (c.outer,)))
    else:  # pragma: no cover - exhaustive
        raise TypeError(f"unknown constraint {c!r}")
    return out


def _guard_target(g: Guard) -> Target:
    if isinstance(g, FlagIs):
        return (g.algebra, g.flag)
    return g.var


def _guards_hold(guards: Sequence[Guard], iv: Dict[Var, RankInterval],
                 flags: Dict[FlagKey, Optional[bool]]) -> bool:
    for g in guards:
        if isinstance(g, HiLe):
            if not iv[g.var].hi <= g.value:
                return False
        elif isinstance(g, LoGe):
            if not iv[g.var].lo >= g.value:
                return False
        else:
            if flags.get((g.algebra, g.flag)) is not g.value:
                return False
    return True


def initial_state(model: Model) -> RankState:
    intervals = {
        (name, kind): RankInterval.top()
        for name in model.algebra_order for kind in RankKind
    }
    flags = {
        (name, flag): value
        for name in model.algebra_order
        for flag, value in model.algebras[name].flags.as_dict().items()
    }
    return RankState(intervals=intervals, flags=flags)


def propagate(constraints: Sequence[Constraint], model: Model, *,
              cap: int = MAX_FINITE_DEFAULT,
              initial: Optional[RankState] = None) -> RankState:
    """Run to the least fixpoint; raise Contradiction on conflict."""
    if initial is None:
        state = initial_state(model)
    else:
        state = RankState(intervals=dict(initial.intervals),
                          flags=dict(initial.flags))
    try:
        _run(constraints, state, cap)
    except _Conflict as conflict:
        raise _minimized_contradiction(constraints, model, cap, state, conflict)
    return state


def _run(constraints: Sequence[Constraint], state: RankState, cap: int,
         record: bool = True) -> None:
    """Fixpoint loop mutating `state`; raises _Conflict."""
    iv, flags = state.intervals, state.flags
    # active entries: (simple constraint, extra premises from a fired guard)
    active: List[Tuple[SimpleConstraint, Tuple[Target, ...]]] = []
    pending: List[Conditional] = []
    for c in constraints:
        if isinstance(c, Conditional):
            pending.append(c)
        else:
            active.append((c, ()))

    def apply_update(u: _Update, c: SimpleConstraint,
                     extra: Tuple[Target, ...]) -> bool:
        current = iv[u.var]
        met = current.meet(u.interval)
        if met is None:
            raise _Conflict(u.var, f"established {current}",
                            f"required {u.interval}", c, u.premises + extra)
        met = clamp(met, cap)
        if met == current:
            return False
        iv[u.var] = met
        if record:
            state.trace.append(TraceStep(
                index=len(state.trace), target=u.var, kind="interval",
                old=current, new=met, prov=c.prov,
                premises=u.premises + extra))
        return True

    def apply_setflag(effect: SetFlag, cond: Conditional,
                      premises: Tuple[Target, ...]) -> bool:
        key = (effect.algebra, effect.flag)
        current = flags.get(key)
        if current is effect.value:
            return False
        if current is not None:
            raise _Conflict(key, f"established {current}",
                            f"required {effect.value}", cond, premises)
        flags[key] = effect.value
        if record:
            state.trace.append(TraceStep(
                index=len(state.trace), target=key, kind="flag",
                old=current, new=effect.value, prov=cond.prov,
                premises=premises))
        return True

    changed = True
    while changed:
        changed = False
        for c, extra in active:
            for u in _updates_for(c, iv):
                if apply_update(u, c, extra):
                    changed = True
        still_pending: List[Conditional] = []
        for cond in pending:
            if _guards_hold(cond.guards, iv, flags):
                guard_premises = tuple(_guard_target(g) for g in cond.guards)
                for effect in cond.effects:
                    if isinstance(effect, SetFlag):
                        if apply_setflag(effect, cond, guard_premises):
                            changed = True
                    else:
                        active.append((effect, guard_premises))
                changed = True  # newly activated constraints need a sweep
            else:
                still_pending.append(cond)
        pending = still_pending


# ------------------------------------------------ contradiction handling

def replay_reproduces_conflict(model: Model, steps: Sequence[TraceStep],
                               constraint: Constraint, cap: int) -> bool:
    """Apply exactly `steps` from the initial state, then `constraint`;
    True when the conflict reappears."""
    state = initial_state(model)
    iv, flags = state.intervals, state.flags
    for step in steps:
        if step.kind == "interval":
            met = iv[step.target].meet(step.new)
            if met is None:
                return True  # the slice alone already conflicts
            iv[step.target] = met
        else:
            current = flags.get(step.target)
            if current is not None and current is not step.new:
                return True
            flags[step.target] = step.new
    try:
        _run([constraint], state, cap, record=False)
    except _Conflict:
        return True
    return False


def _minimized_contradiction(constraints: Sequence[Constraint], model: Model,
                             cap: int, state: RankState,
                             conflict: _Conflict) -> Contradiction:
    # backward closure from the conflict's premises and target
    needed = set(conflict.premises) | {conflict.target}
    keep: List[TraceStep] = []
    for step in reversed(state.trace):
        if step.target in needed:
            keep.append(step)
            needed.update(step.premises)
    keep.reverse()
    # the conflicting constraint, re-packaged so replay can evaluate it;
    # for a fired conditional the guards are re-checked during replay
    culprit = conflict.constraint
    # greedy shrink: drop steps whose removal preserves the conflict
    i = 0
    while i < len(keep):
        trial = keep[:i] + keep[i + 1:]
        if replay_reproduces_conflict(model, trial, culprit, cap):
            keep = trial
        else:
            i += 1
    return Contradiction(conflict.target, conflict.fact_held,
                         conflict.fact_new, keep, culprit)


# -------------------------------------------------------------- explain

@dataclass
class Leaf:
    description: str


@dataclass
class DerivationTree:
    step: TraceStep
    children: List[Union["DerivationTree", Leaf]]

    def render(self, indent: int = 0) -> str:
        lines = [" " * indent + self.step.describe()]
        for child in self.children:
            if isinstance(child, Leaf):
                lines.append(" " * (indent + 2) + child.description)
            else:
                lines.append(child.render(indent + 2))
        return "\n".join(lines)


def explain(state: RankState, model: Model, algebra: str, rank: RankKind,
            side: str) -> DerivationTree:
    """Backward-chained justification of the current lo or hi bound."""
    if side not in ("lo", "hi"):
        raise ValueError("side must be 'lo' or 'hi'")
    var: Var = (algebra, rank)
    current = state.intervals[var]
    root_idx = _last_step_for_side(state.trace, var, side, len(state.trace))
    if root_idx is None:
        raise NoDerivation(
            f"{side} bound of {var_name(var)} is the trivial default "
            f"({current.lo if side == 'lo' else current.hi})")
    return _build_tree(state, model, state.trace[root_idx])


def _last_step_for_side(trace: Sequence[TraceStep], var: Var, side: str,
                        before: int) -> Optional[int]:
    for idx in range(before - 1, -1, -1):
        step = trace[idx]
        if step.target != var or step.kind != "interval":
            continue
        if side == "lo" and step.new.lo > step.old.lo:
            return idx
        if side == "hi" and step.new.hi < step.old.hi:
            return idx
    return None


def _last_step_for_target(trace: Sequence[TraceStep], target: Target,
                          before: int) -> Optional[int]:
    for idx in range(before - 1, -1, -1):
        if trace[idx].target == target:
            return idx
    return None


def _build_tree(state: RankState, model: Model, step: TraceStep,
                depth: int = 0) -> DerivationTree:
    children: List[Union[DerivationTree, Leaf]] = []
    for premise in step.premises:
        idx = _last_step_for_target(state.trace, premise, step.index)
        if idx is not None and depth < 40:
            children.append(_build_tree(state, model, state.trace[idx],
                                        depth + 1))
        else:
            children.append(_premise_leaf(state, model, premise))
    if not step.premises:
        children.append(Leaf(f"axiom: {step.prov.citation}"))
    return DerivationTree(step, children)


def _premise_leaf(state: RankState, model: Model, premise: Target) -> Leaf:
    first, second = premise
    if isinstance(second, RankKind):
        return Leaf(f"{target_name(premise)} at its trivial bounds")
    value = state.flags.get(premise)
    note = model.flag_notes.get(premise)
    text = f"declared flag {second}({first}) = {value}"
    if note:
        text += f"  ({note})"
    return Leaf(text)


# ------------------------------------------------------ assertion checks

@dataclass(frozen=True)
class AssertionReport:
    algebra: str
    rank: RankKind
    relation: str
    value: ExtNat
    status: str  # PASS | FAIL | UNDECIDED
    interval: RankInterval

    def describe(self) -> str:
        return (f"assert {self.rank.value}({self.algebra}) {self.relation} "
                f"{self.value}: {self.status} (computed {self.interval})")


def check_assertions(model: Model, state: RankState) -> List[AssertionReport]:
    out: List[AssertionReport] = []
    for a in model.assertions:
        interval = state.intervals[(a.algebra, a.rank)]
        if a.relation == "==":
            if interval.is_exact and interval.lo == a.value:
                status = "PASS"
            elif not interval.contains(a.value):
                status = "FAIL"
            else:
                status = "UNDECIDED"
        elif a.relation == "<=":
            if interval.hi <= a.value:
                status = "PASS"
            elif interval.lo > a.value:
                status = "FAIL"
            else:
                status = "UNDECIDED"
        else:
            if interval.lo >= a.value:
                status = "PASS"
            elif interval.hi < a.value:
                status = "FAIL"
            else:
                status = "UNDECIDED"
        out.append(AssertionReport(a.algebra, a.rank, a.relation, a.value,
                                   status, interval))
    return out
