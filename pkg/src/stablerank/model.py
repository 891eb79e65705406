"""Validated in-memory representation of declared spaces, algebras and facts.

`build_model` turns a parsed statement list into an immutable `Model`: catalog
entries are expanded, built-in space attributes and implied flags are filled
in, extensions imply quotient morphisms, and the algebra graph is checked for
cycles.  `validate` reports hypothesis gaps that the rules will respect.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from . import catalog as _catalog
from .lattice import ExtNat, RankKind
from .dsl import (
    AlgebraDecl,
    AssertDecl,
    AssumeDecl,
    ExtensionDecl,
    FLAG_NAMES,
    MorphismDecl,
    QueryDecl,
    SpaceDecl,
    Statement,
)

TriState = Optional[bool]


class ModelError(ValueError):
    pass


class UnknownIdentifier(ModelError):
    pass


class DuplicateIdentifier(ModelError):
    pass


class CyclicAlgebraGraph(ModelError):
    pass


class FlagConflict(ModelError):
    pass


# ------------------------------------------------------------------- spaces

@dataclass(frozen=True)
class SpaceDescriptor:
    id: str
    kind: str  # sphere | torus | cube | point | product | custom
    dim: Optional[int]
    dim_assumed: bool = False
    dim_lower: int = 0  # provable lower bound on the covering dimension
    metric: TriState = None
    contractible: TriState = None
    top_cohomology_nonzero: TriState = None
    codim1_cohomology_nonzero: TriState = None
    factors: Tuple[str, ...] = ()

    def dim_provably_ne_one(self) -> bool:
        """True when the covering dimension is certainly not 1."""
        if self.dim is not None and not self.dim_assumed:
            return self.dim != 1
        if self.dim == 0:
            # an assumed sum of zeros: every factor is zero-dimensional
            return True
        return self.dim_lower >= 2


def _sphere_descriptor(name: str, d: int) -> SpaceDescriptor:
    return SpaceDescriptor(
        id=name, kind="sphere", dim=d, dim_lower=d, metric=True,
        contractible=False if d >= 1 else None,
        top_cohomology_nonzero=True,
        codim1_cohomology_nonzero=(True if d == 1 else False if d >= 2 else None),
    )


def _torus_descriptor(name: str, d: int) -> SpaceDescriptor:
    return SpaceDescriptor(
        id=name, kind="torus", dim=d, dim_lower=d, metric=True,
        contractible=(True if d == 0 else False),
        top_cohomology_nonzero=True,
        codim1_cohomology_nonzero=(True if d >= 1 else None),
    )


def _cube_descriptor(name: str, d: int) -> SpaceDescriptor:
    return SpaceDescriptor(
        id=name, kind="cube", dim=d, dim_lower=d, metric=True,
        contractible=True,
        top_cohomology_nonzero=(True if d == 0 else False),
        codim1_cohomology_nonzero=(True if d == 1 else False if d >= 2 else None),
    )


def _point_descriptor(name: str) -> SpaceDescriptor:
    return SpaceDescriptor(
        id=name, kind="point", dim=0, dim_lower=0, metric=True, contractible=True,
        top_cohomology_nonzero=True,
    )


def _tri_all(values: Sequence[TriState]) -> TriState:
    # conjunction over factors: all true -> true, any false -> false
    if any(v is False for v in values):
        return False
    if all(v is True for v in values):
        return True
    return None


def _product_descriptor(name: str, factors: Sequence[SpaceDescriptor],
                        dim_override: Optional[int]) -> SpaceDescriptor:
    dims = [f.dim for f in factors]
    if any(d is None for d in dims):
        raise ModelError(f"product space {name!r} has a factor of unknown dimension")
    # Dimension is additive for products of manifolds and finite CW
    # complexes; it is only subadditive in general, so a custom factor
    # (or an already-assumed product) downgrades the sum to "assumed".
    additive = all(f.kind in ("sphere", "torus", "cube", "point")
                   or (f.kind == "product" and not f.dim_assumed)
                   for f in factors)
    if dim_override is not None:
        dim, assumed = dim_override, False
    elif additive:
        dim, assumed = sum(dims), False
    else:
        dim, assumed = sum(dims), True
    if assumed:
        # dim(X x Y) >= dim X for nonempty compact factors
        lower = max((f.dim_lower for f in factors), default=0)
    else:
        lower = dim
    return SpaceDescriptor(
        id=name, kind="product", dim=dim, dim_assumed=assumed,
        dim_lower=min(lower, dim),
        metric=_tri_all([f.metric for f in factors]),
        contractible=_tri_all([f.contractible for f in factors]),
        factors=tuple(f.id for f in factors),
    )


# -------------------------------------------------------------------- flags

@dataclass
class FlagSet:
    is_cstar: TriState = None
    is_commutative: TriState = None
    is_finite: TriState = None
    is_stably_finite: TriState = None
    is_purely_infinite_simple: TriState = None
    is_infinite_simple: TriState = None
    k1_trivial: TriState = None
    unit_finite_order_k0: TriState = None

    def get(self, name: str) -> TriState:
        return getattr(self, name)

    def set(self, name: str, value: bool, subject: str = "") -> None:
        current = getattr(self, name)
        if current is None:
            setattr(self, name, value)
        elif current != value:
            where = f" on {subject}" if subject else ""
            raise FlagConflict(f"flag {name}{where}: {current} conflicts with {value}")

    def as_dict(self) -> Dict[str, TriState]:
        return {name: getattr(self, name) for name in FLAG_NAMES}

    def copy(self) -> "FlagSet":
        return FlagSet(**self.as_dict())


#: flag implications: (premise flag, premise value) -> ((flag, value), ...)
FLAG_IMPLICATIONS: Tuple[Tuple[Tuple[str, bool], Tuple[Tuple[str, bool], ...]], ...] = (
    (("is_stably_finite", True), (("is_finite", True),)),
    (("is_finite", False), (("is_stably_finite", False),)),
    (("is_purely_infinite_simple", True),
     (("is_infinite_simple", True), ("is_cstar", True))),
    (("is_infinite_simple", True), (("is_finite", False),)),
)


def close_flags(flags: FlagSet, subject: str = "") -> None:
    """Apply the flag implications to a fixpoint; raises FlagConflict."""
    changed = True
    while changed:
        changed = False
        for (premise, value), consequences in FLAG_IMPLICATIONS:
            if flags.get(premise) is value:
                for cname, cvalue in consequences:
                    if flags.get(cname) is None:
                        flags.set(cname, cvalue, subject)
                        changed = True
                    elif flags.get(cname) != cvalue:
                        raise FlagConflict(
                            f"flag {cname} on {subject or 'algebra'}: "
                            f"{premise}={value} forces {cvalue}, "
                            f"declared {flags.get(cname)}")


# ------------------------------------------------------------ algebra nodes

@dataclass(frozen=True)
class CofSpace:
    space: str


@dataclass(frozen=True)
class MatrixOver:
    n: int
    base: str


@dataclass(frozen=True)
class DirectSum:
    left: str
    right: str


@dataclass(frozen=True)
class Stabilize:
    base: str


@dataclass(frozen=True)
class InductiveLimit:
    parts: Tuple[str, ...]
    liminf: Tuple[Tuple[RankKind, ExtNat], ...] = ()


@dataclass(frozen=True)
class TensorExt:
    extensions: Tuple[str, ...]
    z_space: Optional[str]
    product_space: str  # resolved: the space of the symbol algebra
    cx_algebra: str  # resolved: the C(X x Z) node


@dataclass(frozen=True)
class Abstract:
    pass


NodeKind = Union[CofSpace, MatrixOver, DirectSum, Stabilize, InductiveLimit,
                 TensorExt, Abstract]


@dataclass
class AlgebraNode:
    id: str
    kind: NodeKind
    flags: FlagSet = field(default_factory=FlagSet)
    catalog_origin: Optional[str] = None
    generated: bool = False  # created by catalog or tensor expansion


@dataclass(frozen=True)
class MorphismFact:
    id: str
    src: str
    dst: str
    attrs: Tuple[str, ...]

    def has(self, attr: str) -> bool:
        return attr in self.attrs


@dataclass(frozen=True)
class ExtensionFact:
    id: str
    j: str
    a: str
    b: str
    approx_identity: bool


@dataclass(frozen=True)
class Assumption:
    rank: RankKind
    algebra: str
    relation: str  # == | <= | >=
    value: ExtNat
    origin: str  # user | catalog
    citation: str = ""


@dataclass(frozen=True)
class Assertion:
    rank: RankKind
    algebra: str
    relation: str
    value: ExtNat


@dataclass(frozen=True)
class Diagnostic:
    level: str  # warning | info
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.level}: {self.subject}: {self.message}"


@dataclass
class Model:
    spaces: Dict[str, SpaceDescriptor]
    algebras: Dict[str, AlgebraNode]
    algebra_order: Tuple[str, ...]
    morphisms: Tuple[MorphismFact, ...]
    extensions: Dict[str, ExtensionFact]
    assumptions: Tuple[Assumption, ...]
    assertions: Tuple[Assertion, ...]
    queries: Tuple[str, ...]
    flag_notes: Dict[Tuple[str, str], str] = field(default_factory=dict)


# -------------------------------------------------------------- model build

def _resolve_spaces(space_decls: List[SpaceDecl]) -> Dict[str, SpaceDescriptor]:
    decls: Dict[str, SpaceDecl] = {}
    for decl in space_decls:
        if decl.name in decls:
            raise DuplicateIdentifier(f"space {decl.name!r} declared twice")
        decls[decl.name] = decl

    spaces: Dict[str, SpaceDescriptor] = {}
    resolving: Set[str] = set()

    def resolve(name: str) -> SpaceDescriptor:
        if name in spaces:
            return spaces[name]
        if name not in decls:
            raise UnknownIdentifier(f"unknown space {name!r}")
        if name in resolving:
            raise CyclicAlgebraGraph(f"space {name!r} is a factor of itself")
        resolving.add(name)
        decl = decls[name]
        if decl.kind == "sphere":
            desc = _sphere_descriptor(name, decl.dim)
        elif decl.kind == "torus":
            desc = _torus_descriptor(name, decl.dim)
        elif decl.kind == "cube":
            desc = _cube_descriptor(name, decl.dim)
        elif decl.kind == "point":
            desc = _point_descriptor(name)
        elif decl.kind == "product":
            factors = [resolve(f) for f in decl.factors]
            desc = _product_descriptor(name, factors, decl.dim_override)
        else:  # custom
            desc = SpaceDescriptor(
                id=name, kind="custom", dim=decl.dim, dim_lower=0,
                metric=decl.metric, contractible=decl.contractible,
                top_cohomology_nonzero=decl.top_cohomology_nonzero,
                codim1_cohomology_nonzero=decl.codim1_cohomology_nonzero,
            )
        resolving.discard(name)
        spaces[name] = desc
        return desc

    for name in decls:
        resolve(name)
    return spaces


def _fresh_product_space(name: str, factor_ids: Sequence[str],
                         spaces: Dict[str, SpaceDescriptor]) -> SpaceDescriptor:
    if name in spaces:
        raise DuplicateIdentifier(f"generated space id {name!r} is already taken")
    factors = []
    for fid in factor_ids:
        if fid not in spaces:
            raise UnknownIdentifier(f"unknown space {fid!r}")
        factors.append(spaces[fid])
    desc = _product_descriptor(name, factors, None)
    spaces[name] = desc
    return desc


def _node_refs(node: AlgebraNode) -> Tuple[str, ...]:
    kind = node.kind
    if isinstance(kind, MatrixOver):
        return (kind.base,)
    if isinstance(kind, Stabilize):
        return (kind.base,)
    if isinstance(kind, DirectSum):
        return (kind.left, kind.right)
    if isinstance(kind, InductiveLimit):
        return kind.parts
    return ()


def _tensor_refs(node: AlgebraNode, extensions: Dict[str, ExtensionFact]
                 ) -> Tuple[str, ...]:
    kind = node.kind
    refs: List[str] = []
    for ext_id in kind.extensions:
        ext = extensions[ext_id]
        refs.append(ext.j)
        refs.append(ext.b)
        # a tensor node may be the middle of its own defining extension
        if ext.a != node.id:
            refs.append(ext.a)
    if kind.cx_algebra != node.id:
        refs.append(kind.cx_algebra)
    return tuple(refs)


def _check_acyclic(algebras: Dict[str, AlgebraNode],
                   extensions: Dict[str, ExtensionFact]) -> None:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {name: WHITE for name in algebras}

    def visit(name: str) -> None:
        color[name] = GRAY
        node = algebras[name]
        if isinstance(node.kind, TensorExt):
            refs = _tensor_refs(node, extensions)
        else:
            refs = _node_refs(node)
        for ref in refs:
            if ref not in algebras:
                raise UnknownIdentifier(
                    f"algebra {name!r} refers to unknown algebra {ref!r}")
            if color[ref] == GRAY:
                raise CyclicAlgebraGraph(
                    f"algebra {ref!r} depends on itself (via {name!r})")
            if color[ref] == WHITE:
                visit(ref)
        color[name] = BLACK

    for name in algebras:
        if color[name] == WHITE:
            visit(name)


def _inherit_flags(algebras: Dict[str, AlgebraNode],
                   extensions: Dict[str, ExtensionFact]) -> None:
    """Fill in structurally implied flags, in dependency order."""
    done: Set[str] = set()

    def visit(name: str) -> None:
        if name in done:
            return
        done.add(name)
        node = algebras[name]
        kind = node.kind
        if isinstance(kind, CofSpace):
            node.flags.set("is_cstar", True, name)
            node.flags.set("is_commutative", True, name)
            node.flags.set("is_stably_finite", True, name)
        elif isinstance(kind, (MatrixOver, Stabilize)):
            visit(kind.base)
            if algebras[kind.base].flags.is_cstar is True:
                node.flags.set("is_cstar", True, name)
        elif isinstance(kind, DirectSum):
            visit(kind.left)
            visit(kind.right)
            if (algebras[kind.left].flags.is_cstar is True
                    and algebras[kind.right].flags.is_cstar is True):
                node.flags.set("is_cstar", True, name)
        elif isinstance(kind, TensorExt):
            middles = [extensions[e].a for e in kind.extensions]
            for mid in middles:
                if mid != name:
                    visit(mid)
            if all(algebras[m].flags.is_cstar is True for m in middles
                   if m != name):
                # C(Z) and C*-middles make the tensor a C*-algebra; a node
                # that is the middle of its own extension declares is_cstar
                if any(m != name for m in middles) or node.flags.is_cstar is True:
                    node.flags.set("is_cstar", True, name)
        close_flags(node.flags, name)

    for name in algebras:
        visit(name)


def build_model(statements: Sequence[Statement]) -> Model:
    """Build and validate a Model from parsed statements."""
    statements, catalog_assumptions, flag_notes, catalog_generated = \
        _catalog.expand_statements(statements)

    space_decls = [s for s in statements if isinstance(s, SpaceDecl)]
    spaces = _resolve_spaces(space_decls)

    algebras: Dict[str, AlgebraNode] = {}
    order: List[str] = []
    tensor_decls: List[AlgebraDecl] = []

    def add_node(node: AlgebraNode) -> None:
        if node.id in algebras:
            raise DuplicateIdentifier(f"algebra {node.id!r} declared twice")
        algebras[node.id] = node
        order.append(node.id)

    for stmt in statements:
        if not isinstance(stmt, AlgebraDecl):
            continue
        decl = stmt
        flags = FlagSet()
        for fname, fvalue in decl.flags:
            if fvalue is not None:
                flags.set(fname, fvalue, decl.name)
        if decl.kind == "cof":
            if decl.space not in spaces:
                raise UnknownIdentifier(
                    f"algebra {decl.name!r} uses unknown space {decl.space!r}")
            kind: NodeKind = CofSpace(decl.space)
        elif decl.kind == "matrix":
            kind = MatrixOver(decl.size, decl.base)
        elif decl.kind == "sum":
            kind = DirectSum(decl.parts[0], decl.parts[1])
        elif decl.kind == "stabilize":
            kind = Stabilize(decl.base)
        elif decl.kind == "limit":
            kind = InductiveLimit(decl.parts, decl.liminf)
        elif decl.kind == "tensor_ext":
            tensor_decls.append(decl)
            kind = Abstract()  # placeholder until extensions are collected
        else:
            kind = Abstract()
        add_node(AlgebraNode(id=decl.name, kind=kind, flags=flags,
                             generated=decl.name in catalog_generated))

    extensions: Dict[str, ExtensionFact] = {}
    for stmt in statements:
        if not isinstance(stmt, ExtensionDecl):
            continue
        if stmt.name in extensions:
            raise DuplicateIdentifier(f"extension {stmt.name!r} declared twice")
        for ref in (stmt.ideal, stmt.middle, stmt.quotient):
            if ref not in algebras:
                raise UnknownIdentifier(
                    f"extension {stmt.name!r} refers to unknown algebra {ref!r}")
        approx = stmt.approx_identity
        if algebras[stmt.ideal].flags.is_cstar is True:
            approx = True  # closed C*-ideals always have one
        extensions[stmt.name] = ExtensionFact(
            stmt.name, stmt.ideal, stmt.middle, stmt.quotient, approx)

    # materialize tensor products of extensions: symbol space and C(X x Z)
    for decl in tensor_decls:
        node = algebras[decl.name]
        for ext_id in decl.parts:
            if ext_id not in extensions:
                raise UnknownIdentifier(
                    f"algebra {decl.name!r} uses unknown extension {ext_id!r}")
        quotients = [extensions[e].b for e in decl.parts]
        factor_spaces: List[str] = []
        for quotient in quotients:
            qkind = algebras[quotient].kind
            if not isinstance(qkind, CofSpace):
                raise ModelError(
                    f"tensor_ext {decl.name!r}: extension quotient {quotient!r} "
                    "must be a function algebra C(X)")
            factor_spaces.append(qkind.space)
        if decl.z_space is not None:
            if decl.z_space not in spaces:
                raise UnknownIdentifier(
                    f"algebra {decl.name!r} uses unknown space {decl.z_space!r}")
            factor_spaces.append(decl.z_space)
        if len(factor_spaces) == 1:
            product_space = factor_spaces[0]
            cx_algebra = quotients[0]
        else:
            product_space = f"{decl.name}__X"
            _fresh_product_space(product_space, factor_spaces, spaces)
            cx_algebra = f"{decl.name}__CX"
            add_node(AlgebraNode(id=cx_algebra, kind=CofSpace(product_space),
                                 generated=True))
        node.kind = TensorExt(decl.parts, decl.z_space, product_space, cx_algebra)

    morphisms: List[MorphismFact] = []
    seen_morphisms: Set[str] = set()
    for stmt in statements:
        if not isinstance(stmt, MorphismDecl):
            continue
        if stmt.name in seen_morphisms:
            raise DuplicateIdentifier(f"morphism {stmt.name!r} declared twice")
        seen_morphisms.add(stmt.name)
        for ref in (stmt.src, stmt.dst):
            if ref not in algebras:
                raise UnknownIdentifier(
                    f"morphism {stmt.name!r} refers to unknown algebra {ref!r}")
        attrs = stmt.attrs
        if "split" in attrs and "onto" not in attrs:
            attrs = attrs + ("onto",)
        morphisms.append(MorphismFact(stmt.name, stmt.src, stmt.dst, attrs))
    # every extension quotient map is an epimorphism
    for ext in extensions.values():
        morphisms.append(MorphismFact(f"{ext.id}__onto", ext.a, ext.b, ("onto",)))

    assumptions: List[Assumption] = []
    for item in catalog_assumptions:
        if item.algebra not in algebras:
            raise UnknownIdentifier(f"unknown algebra {item.algebra!r}")
        assumptions.append(Assumption(item.rank, item.algebra, item.relation,
                                      item.value, "catalog", item.citation))
    assertions: List[Assertion] = []
    queries: List[str] = []
    for stmt in statements:
        if isinstance(stmt, AssumeDecl):
            if stmt.algebra not in algebras:
                raise UnknownIdentifier(f"unknown algebra {stmt.algebra!r}")
            assumptions.append(Assumption(stmt.rank, stmt.algebra, stmt.relation,
                                          stmt.value, "user"))
        elif isinstance(stmt, AssertDecl):
            if stmt.algebra not in algebras:
                raise UnknownIdentifier(f"unknown algebra {stmt.algebra!r}")
            assertions.append(Assertion(stmt.rank, stmt.algebra, stmt.relation,
                                        stmt.value))
        elif isinstance(stmt, QueryDecl):
            if stmt.algebra not in algebras:
                raise UnknownIdentifier(f"unknown algebra {stmt.algebra!r}")
            queries.append(stmt.algebra)

    _check_acyclic(algebras, extensions)
    _inherit_flags(algebras, extensions)

    return Model(
        spaces=spaces,
        algebras=algebras,
        algebra_order=tuple(order),
        morphisms=tuple(morphisms),
        extensions=extensions,
        assumptions=tuple(assumptions),
        assertions=tuple(assertions),
        queries=tuple(queries),
        flag_notes=dict(flag_notes),
    )


# --------------------------------------------------------------- validation

def validate(model: Model) -> List[Diagnostic]:
    """Diagnostics for hypothesis gaps; never errors."""
    out: List[Diagnostic] = []
    for name in model.algebra_order:
        node = model.algebras[name]
        kind = node.kind
        if isinstance(kind, TensorExt):
            space = model.spaces[kind.product_space]
            if not space.dim_provably_ne_one():
                out.append(Diagnostic(
                    "warning", name,
                    "symbol space dimension may equal 1; the tensor stable "
                    "rank equality is disabled"))
            for ext_id in kind.extensions:
                ideal = model.algebras[model.extensions[ext_id].j]
                if ideal.catalog_origin not in ("compacts", "af") and \
                        not _looks_like_compacts(ideal, model):
                    out.append(Diagnostic(
                        "info", name,
                        f"extension {ext_id} is assumed to have the compact "
                        "operators as its ideal"))
        if isinstance(kind, InductiveLimit):
            for rank, _value in kind.liminf:
                if rank is RankKind.BSR:
                    out.append(Diagnostic(
                        "warning", name,
                        "bsr liminf hint is ignored (open problem: bsr of an "
                        "inductive limit)"))
        if isinstance(kind, CofSpace):
            space = model.spaces[kind.space]
            if space.dim_assumed:
                out.append(Diagnostic(
                    "info", name,
                    f"dimension of product space {space.id} is assumed to be "
                    f"the sum of factor dimensions ({space.dim})"))
    for space in model.spaces.values():
        if space.kind == "custom" and space.metric is not True:
            if space.top_cohomology_nonzero is not None or \
                    space.codim1_cohomology_nonzero is not None:
                out.append(Diagnostic(
                    "warning", space.id,
                    "cohomological criterion for the connected stable rank "
                    "requires a compact metric space; disabled"))
    for morphism in model.morphisms:
        if morphism.has("gelfand"):
            dst = model.algebras[morphism.dst]
            if not isinstance(dst.kind, CofSpace):
                out.append(Diagnostic(
                    "warning", morphism.id,
                    "gelfand morphism target is not a function algebra C(X)"))
    return out


def _looks_like_compacts(node: AlgebraNode, model: Model) -> bool:
    # an abstract C*-node all of whose catalog rank values are pinned to 1
    pinned = {
        assumption.rank
        for assumption in model.assumptions
        if assumption.algebra == node.id and assumption.relation == "=="
        and not assumption.value.is_inf and assumption.value.finite == 1
    }
    return len(pinned) == 4
