"""The rule catalog: schemas translating model structure into constraints.

Every emitted constraint carries a provenance with a stable rule id and a
citation naming the result it encodes.  Two known open problems deliberately
have no rule (see the `OPEN-*` catalog entries): bsr across dense morphisms,
and tsr across the Gelfand transform.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .lattice import ExtNat, INF, RankInterval, RankKind
from .model import (
    AlgebraNode,
    CofSpace,
    DirectSum,
    ExtensionFact,
    InductiveLimit,
    MatrixOver,
    Model,
    MorphismFact,
    Stabilize,
    TensorExt,
)
from . import topology

#: A rank variable: (algebra id, rank kind).
Var = Tuple[str, RankKind]


def rank_var(algebra: str, kind: RankKind) -> Var:
    return (algebra, kind)


def var_name(v: Var) -> str:
    return f"{v[1].value}({v[0]})"


@dataclass(frozen=True)
class Provenance:
    rule_id: str
    citation: str
    note: str = ""


# ------------------------------------------------------------- constraints

@dataclass(frozen=True, kw_only=True)
class Bound:
    """lo <= var and/or var <= hi."""

    var: Var
    lo: Optional[ExtNat] = None
    hi: Optional[ExtNat] = None
    prov: Provenance


@dataclass(frozen=True)
class LeVar:
    """x <= y."""

    x: Var
    y: Var
    prov: Provenance


@dataclass(frozen=True)
class LeShift:
    """x <= y + shift, shift >= 0."""

    x: Var
    y: Var
    shift: int
    prov: Provenance


@dataclass(frozen=True)
class MaxTerm:
    var: Var
    shift: int = 0


@dataclass(frozen=True)
class LeMax:
    """x <= max over terms of (var + shift)."""

    x: Var
    terms: Tuple[MaxTerm, ...]
    prov: Provenance


@dataclass(frozen=True)
class EqVar:
    """x = y."""

    x: Var
    y: Var
    prov: Provenance


@dataclass(frozen=True)
class MatrixEq:
    """outer = f_n(inner) where f_n(r) = ceil((r-1)/n) + 1."""

    outer: Var
    inner: Var
    n: int
    prov: Provenance


@dataclass(frozen=True)
class MatrixLe:
    """outer <= f_n(inner)."""

    outer: Var
    inner: Var
    n: int
    prov: Provenance


# guards (monotone predicates) and flag effects
@dataclass(frozen=True)
class HiLe:
    var: Var
    value: ExtNat


@dataclass(frozen=True)
class LoGe:
    var: Var
    value: ExtNat


@dataclass(frozen=True)
class FlagIs:
    algebra: str
    flag: str
    value: bool


Guard = Union[HiLe, LoGe, FlagIs]


@dataclass(frozen=True)
class SetFlag:
    algebra: str
    flag: str
    value: bool


SimpleConstraint = Union[Bound, LeVar, LeShift, LeMax, EqVar, MatrixEq, MatrixLe]
Effect = Union[SimpleConstraint, SetFlag]


@dataclass(frozen=True)
class Conditional:
    guards: Tuple[Guard, ...]
    effects: Tuple[Effect, ...]
    prov: Provenance


Constraint = Union[SimpleConstraint, Conditional]


# ---------------------------------------------------------------- catalog

@dataclass(frozen=True)
class RuleDescriptor:
    rule_id: str
    statement: str
    citation: str
    applicability: str


CITATIONS = {
    "R1": "ord chain: gsr <= csr <= bsr + 1 and bsr <= tsr (Rieffel; "
          "Corach, Larotonda)",
    "R2": "bsr = tsr for C*-algebras (Herman, Vaserstein)",
    "R3": "stable ranks of a direct sum equal the maximum over the summands",
    "R4": "unitization leaves all four stable ranks unchanged (they are "
          "defined through the unitization)",
    "R5": "tsr M_n(A) = ceil((tsr A - 1)/n) + 1 and likewise for bsr "
          "(Vaserstein; Rieffel); csr and gsr of M_n(A) admit the same "
          "expression as an upper bound (Rieffel; Nistor)",
    "R6": "rank-one implications: tsr = 1 forces bsr = 1; bsr = 1 forces "
          "gsr = 1; gsr = 1 forces stable finiteness (Rieffel; Vaserstein; "
          "Corach, Larotonda)",
    "R7": "csr A = 1 forces K_1(A) = 0; a nontrivial K_1 forces csr >= 2; "
          "tsr = 1 with trivial K_1 forces csr = 1 (Rieffel; Elhage Hassan)",
    "R8": "a unit of finite order in K_0 forces all four stable ranks to "
          "be infinite (failure of invariant basis number)",
    "R9": "infinite simple C*-algebras have bsr = tsr infinite and csr, "
          "gsr >= 2 (Rieffel)",
    "R10": "purely infinite simple C*-algebras: csr and gsr are 2 when [1] "
           "has infinite order in K_0 and infinite otherwise (Xue)",
    "R11": "csr and gsr are invariants of homotopy equivalence of Banach "
           "algebras (Nistor)",
    "R12": "csr C(X) = gsr C(X) = 1 for contractible X",
    "R13": "tsr C(X) = bsr C(X) = floor(dim X / 2) + 1 (Vaserstein; "
           "Herman, Vaserstein)",
    "R14": "csr C(X) <= ceil(dim X / 2) + 1 (Nistor), exact under the "
           "cohomological criterion (Elhage Hassan; Nistor); sphere values "
           "from unitary-group homotopy (Elhage Hassan)",
    "R15": "gsr C(X) = 1 when dim X <= 4 (Elhage Hassan); for commutative "
           "algebras GL_1 and GL_2 act transitively whenever they can, so "
           "gsr is never 2 or 3",
    "R16": "a finite but not stably finite algebra has gsr >= 3",
    "R17": "the Gelfand transform preserves csr and gsr (Novodvorskii; "
           "Taylor); bsr A <= bsr C(X_A) (Corach, Larotonda)",
    "R18": "epimorphisms: tsr B <= tsr A and bsr B <= bsr A (Rieffel; "
           "Vaserstein); csr B <= max(csr A, bsr A) and gsr B <= "
           "max(gsr A, bsr A) (Elhage Hassan)",
    "R19": "split epimorphisms: csr B <= csr A and gsr B <= gsr A "
           "(Elhage Hassan)",
    "R20": "dense morphisms: tsr B <= tsr A (Rieffel); csr B <= "
           "max(csr A, tsr A) and gsr B <= max(gsr A, tsr A) (Badea)",
    "R21": "dense spectral morphisms: bsr A <= bsr B (Corach, Larotonda); "
           "csr A = csr B and gsr A = gsr B (Swan; Badea)",
    "R22": "tsr, csr, gsr of an inductive limit are at most the liminf "
           "over the system (Rieffel; Nistor); open for bsr",
    "R23": "stable ranks do not grow under tensoring with the compacts; "
           "stabilized algebras have every stable rank at most 2 (Rieffel)",
    "R24": "bsr J <= bsr A for a two-sided ideal J (Vaserstein); "
           "tsr J <= tsr A given an approximate identity (Rieffel)",
    "R25": "extensions 0 -> J -> A -> B -> 0: tsr A <= max(tsr J, tsr B, "
           "csr B) and bsr A <= max(bsr J, bsr B + 1) (Rieffel; Vaserstein); "
           "csr A <= max(csr J, csr B) and gsr A <= max(gsr J, csr B) given "
           "an approximate identity (Nagy; Sheu; Elhage Hassan)",
    "R26": "Toeplitz-type tensor products: tsr C(X) <= tsr A <= "
           "max(tsr C(X), csr C(X)); csr A <= csr C(X) <= max(tsr A, csr A); "
           "gsr C(X) <= max(tsr A, gsr A); tsr A = tsr C(X) when "
           "dim X != 1 (Nistor)",
    "R27": "literature value attached to a built-in algebra",
    "R28": "a morphism with dense image into C(X) gives bsr C(X) <= bsr A "
           "(Vaserstein)",
    "R29": "flag closure: stably finite implies finite; purely infinite "
           "simple implies infinite simple C*; infinite simple implies "
           "not finite",
    "ASSUME": "user assumption",
    "ASSERT": "user assertion under test",
}

_DESCRIPTORS: Tuple[RuleDescriptor, ...] = (
    RuleDescriptor("R1", "gsr <= csr, csr <= bsr + 1, bsr <= tsr",
                   CITATIONS["R1"], "every algebra"),
    RuleDescriptor("R2", "is_cstar => bsr = tsr", CITATIONS["R2"],
                   "algebras flagged is_cstar"),
    RuleDescriptor("R3", "rank(A + B) = max(rank A, rank B)", CITATIONS["R3"],
                   "direct sums"),
    RuleDescriptor("R4", "unitization is the identity on rank variables",
                   CITATIONS["R4"], "implicit everywhere; emits nothing"),
    RuleDescriptor("R5", "matrix algebras: equalities for bsr/tsr, upper "
                   "bounds for csr/gsr", CITATIONS["R5"], "matrix(n, A) nodes"),
    RuleDescriptor("R6", "value-1 implications among tsr, bsr, gsr and "
                   "stable finiteness, with contrapositives", CITATIONS["R6"],
                   "every algebra"),
    RuleDescriptor("R7", "csr = 1 vs triviality of K_1, with contrapositive",
                   CITATIONS["R7"], "every algebra"),
    RuleDescriptor("R8", "unit of finite K_0 order => all ranks infinite",
                   CITATIONS["R8"], "algebras flagged unit_finite_order_k0"),
    RuleDescriptor("R9", "infinite simple C* => bsr = tsr = inf, csr/gsr >= 2",
                   CITATIONS["R9"], "algebras flagged is_infinite_simple + is_cstar"),
    RuleDescriptor("R10", "purely infinite simple: csr = gsr = 2 or inf by "
                   "the K_0 order of the unit", CITATIONS["R10"],
                   "algebras flagged is_purely_infinite_simple"),
    RuleDescriptor("R11", "homotopy equivalence preserves csr and gsr",
                   CITATIONS["R11"], "morphisms with attr homotopy_equiv"),
    RuleDescriptor("R12", "contractible X => csr C(X) = gsr C(X) = 1",
                   CITATIONS["R12"], "C(X) nodes over contractible spaces"),
    RuleDescriptor("R13", "tsr C(X) = bsr C(X) = floor(d/2) + 1",
                   CITATIONS["R13"], "C(X) nodes"),
    RuleDescriptor("R14", "csr/gsr C(X) from dimension, cohomology and the "
                   "sphere tables", CITATIONS["R14"], "C(X) nodes"),
    RuleDescriptor("R15", "commutative exclusion: gsr is never 2 or 3",
                   CITATIONS["R15"], "algebras flagged is_commutative"),
    RuleDescriptor("R16", "finite and not stably finite => gsr >= 3",
                   CITATIONS["R16"], "every algebra"),
    RuleDescriptor("R17", "Gelfand transform: csr/gsr equalities, bsr upper "
                   "bound", CITATIONS["R17"], "morphisms with attr gelfand"),
    RuleDescriptor("R18", "epimorphisms push all four ranks down (csr/gsr "
                   "up to bsr of the source)", CITATIONS["R18"],
                   "morphisms with attr onto"),
    RuleDescriptor("R19", "split epimorphisms push csr/gsr down directly",
                   CITATIONS["R19"], "morphisms with attr split"),
    RuleDescriptor("R20", "dense morphisms push tsr down (csr/gsr up to tsr "
                   "of the source)", CITATIONS["R20"], "morphisms with attr dense"),
    RuleDescriptor("R21", "dense spectral morphisms: bsr up, csr/gsr equal",
                   CITATIONS["R21"], "morphisms with attrs dense + spectral"),
    RuleDescriptor("R22", "inductive limits: tsr/csr/gsr at most the liminf "
                   "hints; deliberately no bsr rule (open problem)",
                   CITATIONS["R22"], "limit nodes with liminf hints"),
    RuleDescriptor("R23", "stabilization: ranks at most the base's, and at "
                   "most 2", CITATIONS["R23"], "stabilize nodes"),
    RuleDescriptor("R24", "ideals inherit bsr (and tsr with an approximate "
                   "identity) bounds from the ambient algebra",
                   CITATIONS["R24"], "extensions"),
    RuleDescriptor("R25", "extension bounds for the middle algebra",
                   CITATIONS["R25"], "extensions"),
    RuleDescriptor("R26", "tensor products of Toeplitz-type extensions vs "
                   "C(X): inequality chains plus the dim != 1 equality",
                   CITATIONS["R26"], "tensor_ext nodes"),
    RuleDescriptor("R27", "catalog assumptions become bounds with their own "
                   "citations", CITATIONS["R27"], "catalog algebras"),
    RuleDescriptor("R28", "dense image in C(X) bounds bsr C(X) from above "
                   "by bsr of the source", CITATIONS["R28"],
                   "dense morphisms into C(X) nodes"),
    RuleDescriptor("R29", "tri-state flag closure", CITATIONS["R29"],
                   "every algebra"),
    RuleDescriptor("OPEN-dense-bsr", "whether bsr B <= bsr A across a dense "
                   "morphism A -> B is unknown", "open problem; no rule",
                   "never (documented gap)"),
    RuleDescriptor("OPEN-gelfand-tsr", "whether tsr A <= tsr C(X_A) across "
                   "the Gelfand transform is unknown", "open problem; no rule",
                   "never (documented gap)"),
)


def rule_catalog() -> Tuple[RuleDescriptor, ...]:
    """The complete fixed rule catalog."""
    return _DESCRIPTORS


# ----------------------------------------------------------- instantiation

def _prov(rule_id: str, note: str = "") -> Provenance:
    return Provenance(rule_id, CITATIONS[rule_id], note)


def _bound_from_interval(var: Var, interval: RankInterval,
                         prov: Provenance) -> Bound:
    lo = interval.lo if interval.lo > ExtNat(1) else None
    hi = interval.hi if not interval.hi.is_inf else None
    return Bound(var=var, lo=lo, hi=hi, prov=prov)


def instantiate_rules(model: Model) -> List[Constraint]:
    """Match every rule schema against the model, in deterministic order
    (rule id, then declaration order of the matched structure)."""
    out: List[Constraint] = []
    emit = out.append

    def node(name: str) -> AlgebraNode:
        return model.algebras[name]

    algebras = [model.algebras[name] for name in model.algebra_order]
    extensions = list(model.extensions.values())

    # R1: the ord chain
    for a in algebras:
        p = _prov("R1", a.id)
        emit(LeVar(rank_var(a.id, RankKind.GSR), rank_var(a.id, RankKind.CSR), p))
        emit(LeShift(rank_var(a.id, RankKind.CSR), rank_var(a.id, RankKind.BSR), 1, p))
        emit(LeVar(rank_var(a.id, RankKind.BSR), rank_var(a.id, RankKind.TSR), p))

    # R2: bsr = tsr for C*-algebras
    for a in algebras:
        p = _prov("R2", a.id)
        eq = EqVar(rank_var(a.id, RankKind.BSR), rank_var(a.id, RankKind.TSR), p)
        if a.flags.is_cstar is True:
            emit(eq)
        elif a.flags.is_cstar is None:
            emit(Conditional((FlagIs(a.id, "is_cstar", True),), (eq,), p))

    # R3: direct sums
    for a in algebras:
        if not isinstance(a.kind, DirectSum):
            continue
        p = _prov("R3", a.id)
        for kind in RankKind:
            s = rank_var(a.id, kind)
            left = rank_var(a.kind.left, kind)
            right = rank_var(a.kind.right, kind)
            emit(LeVar(left, s, p))
            emit(LeVar(right, s, p))
            emit(LeMax(s, (MaxTerm(left), MaxTerm(right)), p))

    # R4 emits nothing: unitization is the identity on rank variables.

    # R5: matrix algebras
    for a in algebras:
        if not isinstance(a.kind, MatrixOver):
            continue
        p = _prov("R5", a.id)
        n, base = a.kind.n, a.kind.base
        emit(MatrixEq(rank_var(a.id, RankKind.BSR), rank_var(base, RankKind.BSR), n, p))
        emit(MatrixEq(rank_var(a.id, RankKind.TSR), rank_var(base, RankKind.TSR), n, p))
        emit(MatrixLe(rank_var(a.id, RankKind.CSR), rank_var(base, RankKind.CSR), n, p))
        emit(MatrixLe(rank_var(a.id, RankKind.GSR), rank_var(base, RankKind.GSR), n, p))

    # R6: value-1 implications with contrapositives
    one, two = ExtNat(1), ExtNat(2)
    for a in algebras:
        p = _prov("R6", a.id)
        bsr = rank_var(a.id, RankKind.BSR)
        tsr = rank_var(a.id, RankKind.TSR)
        gsr = rank_var(a.id, RankKind.GSR)
        emit(Conditional((HiLe(tsr, one),), (Bound(var=bsr, hi=one, prov=p),), p))
        emit(Conditional((HiLe(bsr, one),), (Bound(var=gsr, hi=one, prov=p),), p))
        emit(Conditional((HiLe(gsr, one),),
                         (SetFlag(a.id, "is_stably_finite", True),), p))
        emit(Conditional((FlagIs(a.id, "is_stably_finite", False),),
                         (Bound(var=gsr, lo=two, prov=p),), p))
        emit(Conditional((LoGe(bsr, two),), (Bound(var=tsr, lo=two, prov=p),), p))
        emit(Conditional((LoGe(gsr, two),), (Bound(var=bsr, lo=two, prov=p),), p))

    # R7: csr vs K_1
    for a in algebras:
        p = _prov("R7", a.id)
        csr = rank_var(a.id, RankKind.CSR)
        tsr = rank_var(a.id, RankKind.TSR)
        emit(Conditional((HiLe(csr, one),), (SetFlag(a.id, "k1_trivial", True),), p))
        emit(Conditional((FlagIs(a.id, "k1_trivial", False),),
                         (Bound(var=csr, lo=two, prov=p),), p))
        emit(Conditional((HiLe(tsr, one), FlagIs(a.id, "k1_trivial", True)),
                         (Bound(var=csr, hi=one, prov=p),), p))

    # R8: unit of finite order in K_0
    for a in algebras:
        p = _prov("R8", a.id)
        effects = tuple(
            Bound(var=rank_var(a.id, kind), lo=INF, prov=p) for kind in RankKind)
        emit(Conditional((FlagIs(a.id, "unit_finite_order_k0", True),), effects, p))

    # R9: infinite simple C*-algebras
    for a in algebras:
        p = _prov("R9", a.id)
        emit(Conditional(
            (FlagIs(a.id, "is_infinite_simple", True), FlagIs(a.id, "is_cstar", True)),
            (Bound(var=rank_var(a.id, RankKind.BSR), lo=INF, prov=p),
             Bound(var=rank_var(a.id, RankKind.TSR), lo=INF, prov=p),
             Bound(var=rank_var(a.id, RankKind.CSR), lo=two, prov=p),
             Bound(var=rank_var(a.id, RankKind.GSR), lo=two, prov=p)), p))

    # R10: purely infinite simple
    for a in algebras:
        p = _prov("R10", a.id)
        pis = FlagIs(a.id, "is_purely_infinite_simple", True)
        csr = rank_var(a.id, RankKind.CSR)
        gsr = rank_var(a.id, RankKind.GSR)
        emit(Conditional(
            (pis, FlagIs(a.id, "unit_finite_order_k0", False)),
            (Bound(var=csr, lo=two, hi=two, prov=p),
             Bound(var=gsr, lo=two, hi=two, prov=p)), p))
        emit(Conditional(
            (pis, FlagIs(a.id, "unit_finite_order_k0", True)),
            (Bound(var=csr, lo=INF, prov=p),
             Bound(var=gsr, lo=INF, prov=p)), p))

    # R11: homotopy equivalences
    for m in model.morphisms:
        if not m.has("homotopy_equiv"):
            continue
        p = _prov("R11", m.id)
        emit(EqVar(rank_var(m.src, RankKind.CSR), rank_var(m.dst, RankKind.CSR), p))
        emit(EqVar(rank_var(m.src, RankKind.GSR), rank_var(m.dst, RankKind.GSR), p))

    # R12/R13/R14: function algebras over a space
    for a in algebras:
        if not isinstance(a.kind, CofSpace):
            continue
        space = model.spaces[a.kind.space]
        if space.contractible is True:
            p = _prov("R12", a.id)
            emit(Bound(var=rank_var(a.id, RankKind.CSR), hi=one, prov=p))
            emit(Bound(var=rank_var(a.id, RankKind.GSR), hi=one, prov=p))
        if space.dim is not None:
            p13 = _prov("R13", a.id)
            dim_iv = topology.dim_rank_interval(space)
            emit(_bound_from_interval(rank_var(a.id, RankKind.TSR), dim_iv, p13))
            emit(_bound_from_interval(rank_var(a.id, RankKind.BSR), dim_iv, p13))
            p14 = _prov("R14", a.id)
            emit(_bound_from_interval(rank_var(a.id, RankKind.CSR),
                                      topology.csr_bound(space), p14))
            emit(_bound_from_interval(rank_var(a.id, RankKind.GSR),
                                      topology.gsr_commutative(space), p14))

    # R15: the commutative gsr exclusion (gsr is never 2 or 3)
    three, four = ExtNat(3), ExtNat(4)
    for a in algebras:
        if a.flags.is_commutative is not True:
            continue
        p = _prov("R15", a.id)
        gsr = rank_var(a.id, RankKind.GSR)
        emit(Conditional((HiLe(gsr, three),), (Bound(var=gsr, hi=one, prov=p),), p))
        emit(Conditional((LoGe(gsr, two),), (Bound(var=gsr, lo=four, prov=p),), p))

    # R16: finite but not stably finite
    for a in algebras:
        p = _prov("R16", a.id)
        emit(Conditional(
            (FlagIs(a.id, "is_finite", True),
             FlagIs(a.id, "is_stably_finite", False)),
            (Bound(var=rank_var(a.id, RankKind.GSR), lo=three, prov=p),), p))

    # R17: Gelfand transforms
    for m in model.morphisms:
        if not m.has("gelfand"):
            continue
        p = _prov("R17", m.id)
        emit(EqVar(rank_var(m.src, RankKind.CSR), rank_var(m.dst, RankKind.CSR), p))
        emit(EqVar(rank_var(m.src, RankKind.GSR), rank_var(m.dst, RankKind.GSR), p))
        emit(LeVar(rank_var(m.src, RankKind.BSR), rank_var(m.dst, RankKind.BSR), p))

    # R18/R19: epimorphisms
    for m in model.morphisms:
        if not m.has("onto"):
            continue
        p = _prov("R18", m.id)
        src, dst = m.src, m.dst
        emit(LeVar(rank_var(dst, RankKind.TSR), rank_var(src, RankKind.TSR), p))
        emit(LeVar(rank_var(dst, RankKind.BSR), rank_var(src, RankKind.BSR), p))
        emit(LeMax(rank_var(dst, RankKind.CSR),
                   (MaxTerm(rank_var(src, RankKind.CSR)),
                    MaxTerm(rank_var(src, RankKind.BSR))), p))
        emit(LeMax(rank_var(dst, RankKind.GSR),
                   (MaxTerm(rank_var(src, RankKind.GSR)),
                    MaxTerm(rank_var(src, RankKind.BSR))), p))
        if m.has("split"):
            p19 = _prov("R19", m.id)
            emit(LeVar(rank_var(dst, RankKind.CSR), rank_var(src, RankKind.CSR), p19))
            emit(LeVar(rank_var(dst, RankKind.GSR), rank_var(src, RankKind.GSR), p19))

    # R20/R21/R28: dense (and spectral) morphisms
    for m in model.morphisms:
        if not m.has("dense"):
            continue
        p = _prov("R20", m.id)
        src, dst = m.src, m.dst
        emit(LeVar(rank_var(dst, RankKind.TSR), rank_var(src, RankKind.TSR), p))
        emit(LeMax(rank_var(dst, RankKind.CSR),
                   (MaxTerm(rank_var(src, RankKind.CSR)),
                    MaxTerm(rank_var(src, RankKind.TSR))), p))
        emit(LeMax(rank_var(dst, RankKind.GSR),
                   (MaxTerm(rank_var(src, RankKind.GSR)),
                    MaxTerm(rank_var(src, RankKind.TSR))), p))
        if m.has("spectral"):
            p21 = _prov("R21", m.id)
            emit(LeVar(rank_var(src, RankKind.BSR), rank_var(dst, RankKind.BSR), p21))
            emit(EqVar(rank_var(src, RankKind.CSR), rank_var(dst, RankKind.CSR), p21))
            emit(EqVar(rank_var(src, RankKind.GSR), rank_var(dst, RankKind.GSR), p21))
        if isinstance(node(dst).kind, CofSpace):
            p28 = _prov("R28", m.id)
            emit(LeVar(rank_var(dst, RankKind.BSR), rank_var(src, RankKind.BSR), p28))

    # R22: inductive limits (liminf hints; deliberately nothing for bsr)
    for a in algebras:
        if not isinstance(a.kind, InductiveLimit):
            continue
        p = _prov("R22", a.id)
        for kind, value in a.kind.liminf:
            if kind is RankKind.BSR:
                continue
            emit(Bound(var=rank_var(a.id, kind), hi=value, prov=p))

    # R23: stabilization
    for a in algebras:
        if not isinstance(a.kind, Stabilize):
            continue
        p = _prov("R23", a.id)
        for kind in RankKind:
            emit(LeVar(rank_var(a.id, kind), rank_var(a.kind.base, kind), p))
            emit(Bound(var=rank_var(a.id, kind), hi=two, prov=p))

    # R24/R25: extensions
    for ext in extensions:
        p24 = _prov("R24", ext.id)
        emit(LeVar(rank_var(ext.j, RankKind.BSR), rank_var(ext.a, RankKind.BSR), p24))
        if ext.approx_identity:
            emit(LeVar(rank_var(ext.j, RankKind.TSR),
                       rank_var(ext.a, RankKind.TSR), p24))
        p25 = _prov("R25", ext.id)
        emit(LeMax(rank_var(ext.a, RankKind.TSR),
                   (MaxTerm(rank_var(ext.j, RankKind.TSR)),
                    MaxTerm(rank_var(ext.b, RankKind.TSR)),
                    MaxTerm(rank_var(ext.b, RankKind.CSR))), p25))
        emit(LeMax(rank_var(ext.a, RankKind.BSR),
                   (MaxTerm(rank_var(ext.j, RankKind.BSR)),
                    MaxTerm(rank_var(ext.b, RankKind.BSR), 1)), p25))
        if ext.approx_identity:
            emit(LeMax(rank_var(ext.a, RankKind.CSR),
                       (MaxTerm(rank_var(ext.j, RankKind.CSR)),
                        MaxTerm(rank_var(ext.b, RankKind.CSR))), p25))
            emit(LeMax(rank_var(ext.a, RankKind.GSR),
                       (MaxTerm(rank_var(ext.j, RankKind.GSR)),
                        MaxTerm(rank_var(ext.b, RankKind.CSR))), p25))

    # R26: tensor products of Toeplitz-type extensions
    for a in algebras:
        if not isinstance(a.kind, TensorExt):
            continue
        p = _prov("R26", a.id)
        cx = a.kind.cx_algebra
        tsr_a = rank_var(a.id, RankKind.TSR)
        csr_a = rank_var(a.id, RankKind.CSR)
        gsr_a = rank_var(a.id, RankKind.GSR)
        tsr_cx = rank_var(cx, RankKind.TSR)
        csr_cx = rank_var(cx, RankKind.CSR)
        gsr_cx = rank_var(cx, RankKind.GSR)
        emit(LeVar(tsr_cx, tsr_a, p))
        emit(LeMax(tsr_a, (MaxTerm(tsr_cx), MaxTerm(csr_cx)), p))
        emit(LeVar(csr_a, csr_cx, p))
        emit(LeMax(csr_cx, (MaxTerm(tsr_a), MaxTerm(csr_a)), p))
        emit(LeMax(gsr_cx, (MaxTerm(tsr_a), MaxTerm(gsr_a)), p))
        if model.spaces[a.kind.product_space].dim_provably_ne_one():
            emit(EqVar(tsr_a, tsr_cx, p))

    # R27: catalog assumptions, plus the 5-torus gsr fact
    for assumption in model.assumptions:
        rule_id = "R27" if assumption.origin == "catalog" else "ASSUME"
        citation = assumption.citation or CITATIONS[rule_id]
        p = Provenance(rule_id, citation, assumption.algebra)
        var = rank_var(assumption.algebra, assumption.rank)
        if assumption.relation == "==":
            emit(Bound(var=var, lo=assumption.value, hi=assumption.value, prov=p))
        elif assumption.relation == "<=":
            emit(Bound(var=var, hi=assumption.value, prov=p))
        else:
            emit(Bound(var=var, lo=assumption.value, prov=p))
    for a in algebras:
        if isinstance(a.kind, CofSpace):
            space = model.spaces[a.kind.space]
            if space.kind == "torus" and space.dim == 5:
                p = Provenance("R27", "gsr C(T^5) > 1 (Packer, Rieffel)", a.id)
                emit(Bound(var=rank_var(a.id, RankKind.GSR), lo=two, prov=p))

    # R29: flag closure as runtime conditionals
    for a in algebras:
        p = _prov("R29", a.id)
        emit(Conditional((FlagIs(a.id, "is_stably_finite", True),),
                         (SetFlag(a.id, "is_finite", True),), p))
        emit(Conditional((FlagIs(a.id, "is_finite", False),),
                         (SetFlag(a.id, "is_stably_finite", False),), p))
        emit(Conditional((FlagIs(a.id, "is_purely_infinite_simple", True),),
                         (SetFlag(a.id, "is_infinite_simple", True),
                          SetFlag(a.id, "is_cstar", True)), p))
        emit(Conditional((FlagIs(a.id, "is_infinite_simple", True),),
                         (SetFlag(a.id, "is_finite", False),), p))

    return out


def assertion_constraint(algebra: str, rank: RankKind, relation: str,
                         value: ExtNat) -> Bound:
    """The asserted relation as a constraint, for contradiction replay."""
    p = Provenance("ASSERT", CITATIONS["ASSERT"], algebra)
    var = rank_var(algebra, rank)
    if relation == "==":
        return Bound(var=var, lo=value, hi=value, prov=p)
    if relation == "<=":
        return Bound(var=var, hi=value, prov=p)
    return Bound(var=var, lo=value, prov=p)
