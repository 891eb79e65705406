"""Built-in algebra catalog.

Each entry expands a catalog declaration into ordinary declarations (spaces,
algebras, extensions, morphisms) plus cited rank assumptions.  Catalog entries
carry literature values as axioms; everything else about them is derived by
the engine.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .lattice import ExtNat, RankKind
from .dsl import (
    AlgebraDecl,
    ExtensionDecl,
    MorphismDecl,
    SpaceDecl,
    Statement,
)


@dataclass(frozen=True)
class CatalogAssumption:
    """A literature rank value attached to a catalog algebra."""

    rank: RankKind
    algebra: str
    relation: str  # == | <= | >=
    value: ExtNat
    citation: str


#: (algebra id, flag name) -> citation for flags set by catalog entries.
FlagNotes = Dict[Tuple[str, str], str]


class CatalogError(ValueError):
    pass


def _eq(rank: RankKind, algebra: str, value: int, citation: str) -> CatalogAssumption:
    return CatalogAssumption(rank, algebra, "==", ExtNat(value), citation)


def _expand_compacts(name: str, arg: Optional[int], kind: str):
    if kind == "compacts":
        citation = ("the compact operators form an AF algebra; "
                    "all four stable ranks equal 1")
    else:
        citation = ("AF algebras have all four stable ranks equal to 1 "
                    "(finite-dimensional blocks, closed under inductive limits)")
    stmts = [AlgebraDecl(name=name, kind="abstract", flags=(("is_cstar", True),))]
    assumptions = [_eq(rank, name, 1, citation) for rank in RankKind]
    notes = {(name, "is_cstar"): "norm-closed algebra of operators"}
    return stmts, assumptions, notes


def _expand_irrational_rotation(name: str, arg: Optional[int], kind: str):
    stmts = [AlgebraDecl(name=name, kind="abstract",
                         flags=(("is_cstar", True), ("k1_trivial", False)))]
    assumptions = [
        _eq(RankKind.BSR, name, 1, "bsr A_theta = 1 (Putnam)"),
        _eq(RankKind.TSR, name, 1, "tsr A_theta = 1 (Putnam)"),
    ]
    notes = {(name, "k1_trivial"): "K_1(A_theta) is non-trivial"}
    return stmts, assumptions, notes


def _expand_cstar_red_hyperbolic(name: str, arg: Optional[int], kind: str):
    citation = ("reduced C*-algebras of torsion-free non-elementary hyperbolic "
                "groups have Bass and topological stable rank 1 "
                "(Dykema, de la Harpe)")
    stmts = [AlgebraDecl(name=name, kind="abstract", flags=(("is_cstar", True),))]
    assumptions = [
        _eq(RankKind.BSR, name, 1, citation),
        _eq(RankKind.TSR, name, 1, citation),
    ]
    return stmts, assumptions, {}


def _expand_cuntz(name: str, arg: Optional[int], kind: str):
    finite = kind == "cuntz"
    flags = [("is_cstar", True), ("is_purely_infinite_simple", True),
             ("unit_finite_order_k0", finite)]
    stmts = [AlgebraDecl(name=name, kind="abstract", flags=tuple(flags))]
    if finite:
        n = arg or 2
        note = (f"[1] has finite order in K_0(O_{n}) = Z/{n - 1}" if n > 2
                else "K_0(O_2) is trivial, so [1] has finite order")
    else:
        note = "[1] generates K_0(O_inf) = Z, hence has infinite order"
    notes = {
        (name, "is_purely_infinite_simple"): "Cuntz algebras are purely infinite simple",
        (name, "unit_finite_order_k0"): note,
    }
    return stmts, assumptions_none(), notes


def assumptions_none() -> List[CatalogAssumption]:
    return []


def _expand_toeplitz(name: str, arg: Optional[int], kind: str):
    stmts = [
        SpaceDecl(name=f"{name}__S", kind="sphere", dim=1),
        AlgebraDecl(name=f"{name}__K", kind="catalog", catalog_name="compacts"),
        AlgebraDecl(name=f"{name}__Q", kind="cof", space=f"{name}__S"),
        AlgebraDecl(name=name, kind="abstract",
                    flags=(("is_cstar", True), ("is_finite", False))),
        ExtensionDecl(name=f"{name}__E", ideal=f"{name}__K", middle=name,
                      quotient=f"{name}__Q"),
    ]
    notes = {(name, "is_finite"):
             "the Toeplitz algebra contains a non-unitary isometry, hence is infinite"}
    return stmts, assumptions_none(), notes


def _expand_toeplitz_n(name: str, arg: Optional[int], kind: str):
    n = arg if arg is not None else 2
    flags = [("is_cstar", True)]
    notes: FlagNotes = {}
    if n == 2:
        flags += [("is_finite", True), ("is_stably_finite", False)]
        notes[(name, "is_finite")] = "T_2 is finite but not stably finite"
        notes[(name, "is_stably_finite")] = "T_2 is finite but not stably finite"
    stmts = [
        SpaceDecl(name=f"{name}__S", kind="sphere", dim=2 * n - 1),
        AlgebraDecl(name=f"{name}__K", kind="catalog", catalog_name="compacts"),
        AlgebraDecl(name=f"{name}__Q", kind="cof", space=f"{name}__S"),
        # the algebra is the middle of its own defining extension
        AlgebraDecl(name=name, kind="tensor_ext", parts=(f"{name}__E",),
                    flags=tuple(flags)),
        ExtensionDecl(name=f"{name}__E", ideal=f"{name}__K", middle=name,
                      quotient=f"{name}__Q"),
    ]
    return stmts, assumptions_none(), notes


def _expand_disk_algebra(name: str, arg: Optional[int], kind: str):
    stmts = [
        SpaceDecl(name=f"{name}__S", kind="cube", dim=2),
        AlgebraDecl(name=f"{name}__CX", kind="cof", space=f"{name}__S"),
        AlgebraDecl(name=name, kind="abstract", flags=(("is_commutative", True),)),
        MorphismDecl(name=f"{name}__gelfand", src=name, dst=f"{name}__CX",
                     attrs=("gelfand",)),
    ]
    assumptions = [
        _eq(RankKind.BSR, name, 1,
            "bsr A(D) = 1 (Corach-Suarez; Jones, Marshall, Wolff)"),
        _eq(RankKind.TSR, name, 2,
            "tsr A(D) = 2: the invertibles are not dense in the disk algebra"),
    ]
    return stmts, assumptions, {}


def _expand_hardy_inf(name: str, arg: Optional[int], kind: str):
    stmts = [AlgebraDecl(name=name, kind="abstract",
                         flags=(("is_commutative", True), ("k1_trivial", False)))]
    assumptions = [
        _eq(RankKind.BSR, name, 1, "bsr of the Hardy algebra is 1 (Treil)"),
        _eq(RankKind.TSR, name, 2, "tsr of the Hardy algebra is 2 (Suarez)"),
    ]
    notes = {(name, "k1_trivial"):
             "the invertible group of the Hardy algebra is not connected (Suarez)"}
    return stmts, assumptions, notes


def _expand_l1_lattice(name: str, arg: Optional[int], kind: str):
    d = arg if arg is not None else 1
    stmts = [
        SpaceDecl(name=f"{name}__S", kind="torus", dim=d),
        AlgebraDecl(name=f"{name}__CX", kind="cof", space=f"{name}__S"),
        AlgebraDecl(name=name, kind="abstract", flags=(("is_commutative", True),)),
        # Gelfand transform = dense spectral inclusion into C(T^d)
        MorphismDecl(name=f"{name}__gelfand", src=name, dst=f"{name}__CX",
                     attrs=("gelfand", "dense", "spectral")),
    ]
    assumptions = [
        _eq(RankKind.TSR, name, d // 2 + 1,
            f"tsr of l1(Z^{d}) equals floor({d}/2)+1 (Pannenberg; Mikkola, Sasane)"),
    ]
    return stmts, assumptions, {}


def _expand_torus5_pr_fact(name: str, arg: Optional[int], kind: str):
    # gsr >= 2 for C(T^5) is supplied automatically for every function algebra
    # over a 5-torus (see rules); this entry just names such an algebra.
    stmts = [
        SpaceDecl(name=f"{name}__S", kind="torus", dim=5),
        AlgebraDecl(name=name, kind="cof", space=f"{name}__S"),
    ]
    return stmts, assumptions_none(), {}


_EXPANDERS = {
    "compacts": _expand_compacts,
    "af": _expand_compacts,
    "irrational_rotation": _expand_irrational_rotation,
    "cstar_red_hyperbolic": _expand_cstar_red_hyperbolic,
    "cuntz": _expand_cuntz,
    "cuntz_inf": _expand_cuntz,
    "toeplitz": _expand_toeplitz,
    "toeplitz_n": _expand_toeplitz_n,
    "disk_algebra": _expand_disk_algebra,
    "hardy_inf": _expand_hardy_inf,
    "l1_lattice": _expand_l1_lattice,
    "torus5_pr_fact": _expand_torus5_pr_fact,
}

#: Packer-Rieffel: gsr C(T^5) > 1.  Applied to every C(X) node over a 5-torus.
TORUS5_GSR_CITATION = "gsr C(T^5) > 1 (Packer, Rieffel)"


def expand_one(decl: AlgebraDecl):
    """Expand a single catalog declaration.

    Returns (statements, assumptions, flag_notes).  The replacement statement
    for the declared name keeps any user-supplied flags, appended after the
    catalog flags.
    """
    if decl.kind != "catalog" or decl.catalog_name not in _EXPANDERS:
        raise CatalogError(f"not a catalog declaration: {decl!r}")
    expander = _EXPANDERS[decl.catalog_name]
    stmts, assumptions, notes = expander(decl.name, decl.catalog_arg,
                                         decl.catalog_name)
    for stmt in stmts:
        if isinstance(stmt, AlgebraDecl) and stmt.name == decl.name:
            stmt.flags = stmt.flags + decl.flags
            stmt.span = decl.span
    return stmts, assumptions, notes


def expand_statements(statements):
    """Replace every catalog declaration, recursively, preserving order.

    Returns (statements, assumptions, flag_notes, generated): `generated`
    holds the names of helper algebras introduced by the expansion (the
    declared algebra itself is not a helper).
    """
    out: List[Statement] = []
    assumptions: List[CatalogAssumption] = []
    notes: FlagNotes = {}
    generated: set = set()
    work = list(statements)
    while work:
        stmt = work.pop(0)
        if isinstance(stmt, AlgebraDecl) and stmt.kind == "catalog":
            sub_stmts, sub_assumptions, sub_notes = expand_one(stmt)
            for sub in sub_stmts:
                if isinstance(sub, AlgebraDecl) and sub.name != stmt.name:
                    generated.add(sub.name)
            work = sub_stmts + work
            assumptions.extend(sub_assumptions)
            notes.update(sub_notes)
        else:
            out.append(stmt)
    return out, assumptions, notes, generated


#: Entries shown by the reference-table command, with a representative
#: argument for the parametrized ones.
DISPLAY_ENTRIES: Tuple[Tuple[str, Optional[int]], ...] = (
    ("compacts", None),
    ("af", None),
    ("irrational_rotation", None),
    ("cstar_red_hyperbolic", None),
    ("cuntz", 2),
    ("cuntz_inf", None),
    ("toeplitz", None),
    ("toeplitz_n", 2),
    ("disk_algebra", None),
    ("hardy_inf", None),
    ("l1_lattice", 2),
    ("torus5_pr_fact", None),
)
