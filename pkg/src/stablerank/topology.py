"""Topological input data for the rank rules.

Two independent ingredients live here:

* dimension formulas for function algebras C(X) over compact spaces, plus the
  cohomological exactness criterion for the connected stable rank, and

* a small table of unstable homotopy groups of the unitary groups U(n), from
  which the general stable rank of C(S^d) is *derived* by searching for the
  least size at which stabilization becomes injective.  The closed form
  (`gsr_sphere_closed_form`) is computed by a separate arithmetic route so the
  two can be cross-checked against each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .lattice import ExtNat, RankInterval
from .model import SpaceDescriptor


class UnknownDimension(ValueError):
    pass


# --------------------------------------------------- homotopy of U(n)

@dataclass(frozen=True)
class GroupFact:
    """What is known about pi_k(U(n)).

    kind is one of:
      trivial         -- the group is 0
      free_cyclic     -- the group is Z
      cyclic_finite   -- the group is Z/order
      finite_summand  -- the group contains a Z/order direct summand
      unknown         -- nothing usable is tabulated
    """

    kind: str
    order: Optional[int] = None
    stable: bool = False

    @property
    def certainly_nontrivial(self) -> bool:
        if self.kind == "free_cyclic":
            return True
        if self.kind in ("cyclic_finite", "finite_summand"):
            return (self.order or 1) > 1
        return False

    @property
    def certainly_trivial(self) -> bool:
        if self.kind == "trivial":
            return True
        if self.kind == "cyclic_finite":
            return self.order == 1
        return False

    @property
    def has_torsion(self) -> bool:
        return (self.kind in ("cyclic_finite", "finite_summand")
                and (self.order or 1) > 1)


def unstable_pi_U(k: int, n: int) -> GroupFact:
    """Tabulated description of pi_k(U(n)) for k >= 0, n >= 0."""
    if k < 0 or n < 0:
        raise ValueError("homotopy degree and unitary size must be >= 0")
    if n == 0:
        return GroupFact("trivial")
    if 2 * n > k:
        # Bott periodicity: stable range n > k/2
        if k % 2 == 1:
            return GroupFact("free_cyclic", stable=True)
        return GroupFact("trivial", stable=True)
    if k == 2 * n:
        # first unstable group: pi_{2n} U(n) = Z/n!
        return GroupFact("cyclic_finite", order=math.factorial(n))
    if k == 2 * n + 1:
        # pi_{2n+1} U(n): Z/2 for even n >= 2, trivial for odd n
        if n == 1:
            return GroupFact("trivial")  # pi_3 of the circle
        if n % 2 == 0:
            return GroupFact("cyclic_finite", order=2)
        return GroupFact("trivial")
    if k == 2 * n + 3 and n % 2 == 0 and n >= 2:
        # pi_{2m+1} U(m-1) for odd m = n + 1 contains Z/gcd(n, 8)
        return GroupFact("finite_summand", order=math.gcd(n, 8))
    return GroupFact("unknown")


def stabilization_injective(k: int, n: int) -> Optional[bool]:
    """Is pi_k U(n) -> pi_k U(n+1) injective?  None when undecidable here."""
    if k < 0:
        return True
    if n == 0:
        return True  # trivial source
    if k <= 3:
        return True  # low-degree maps are all injective
    src = unstable_pi_U(k, n)
    dst = unstable_pi_U(k, n + 1)
    if src.certainly_trivial:
        return True
    if src.stable and dst.stable:
        return True  # an isomorphism in the stable range
    if src.has_torsion and (dst.kind == "free_cyclic" or dst.certainly_trivial):
        # torsion cannot inject into Z (or into 0)
        return False
    return None


def gsr_sphere_via_table(d: int) -> int:
    """gsr C(S^d), derived from the homotopy table.

    The general stable rank is the least n such that for every m >= n the
    stabilization pi_{d-1} U(m-1) -> pi_{d-1} U(m) is injective.
    """
    if d < 0:
        raise ValueError("sphere dimension must be >= 0")
    k = d - 1
    if k < 0:
        return 1
    top = k // 2 + 2  # maps with m - 1 past the stable threshold are injective
    worst = 0
    for m in range(1, top + 1):
        if stabilization_injective(k, m - 1) is not True:
            worst = m
    return worst + 1 if worst else 1


def gsr_sphere_closed_form(d: int) -> int:
    """gsr C(S^d) by the closed formula; independent of the homotopy table."""
    if d < 0:
        raise ValueError("sphere dimension must be >= 0")
    if d <= 4:
        return 1
    if d % 4 == 0:
        return d // 2
    return (d + 1) // 2 + 1


def csr_sphere(d: int) -> int:
    """csr C(S^d) = ceil(d/2) + 1, except the 2-sphere where it drops to 1."""
    if d < 0:
        raise ValueError("sphere dimension must be >= 0")
    if d == 2:
        return 1
    return (d + 1) // 2 + 1


def _require_dim(space: SpaceDescriptor) -> int:
    if space.dim is None:
        raise UnknownDimension(f"space {space.id} has unknown dimension")
    return space.dim


# ----------------------------------------------- descriptor-level bounds

def dim_rank(space: SpaceDescriptor) -> ExtNat:
    """tsr C(X) = bsr C(X) = floor(d/2) + 1 for compact X of dimension d."""
    return ExtNat(_require_dim(space) // 2 + 1)


def dim_rank_interval(space: SpaceDescriptor) -> RankInterval:
    """Interval for tsr C(X) (= bsr C(X)) from the dimension data.

    When the dimension is only assumed (a product whose exact dimension is
    not pinned down), it is still an upper bound for the covering dimension,
    so the formula yields an upper bound; the provable lower dimension bound
    gives the matching lower bound.
    """
    hi = dim_rank(space)
    if not space.dim_assumed:
        return RankInterval.exact(hi)
    lo = ExtNat(min(space.dim_lower, space.dim) // 2 + 1)
    return RankInterval(lo, hi)


def csr_bound(space: SpaceDescriptor) -> RankInterval:
    """Interval for csr C(X).

    Always the upper bound ceil(d/2) + 1; exact for spheres and contractible
    spaces, and — for compact metric X of exact known dimension — exact when
    the cohomological criterion fires (top cohomology nonzero for odd d,
    codimension-one cohomology nonzero for even d).  When d is odd, metric
    holds and the top cohomology provably vanishes, the bound sharpens to
    ceil(d/2)."""
    d = _require_dim(space)
    if space.contractible is True:
        return RankInterval.exact(ExtNat(1))
    if space.kind == "sphere":
        return RankInterval.exact(ExtNat(csr_sphere(d)))
    hi = ExtNat((d + 1) // 2 + 1)
    if space.metric is True and not space.dim_assumed:
        if d % 2 == 1:
            if space.top_cohomology_nonzero is True:
                return RankInterval.exact(hi)
            if space.top_cohomology_nonzero is False:
                return RankInterval.at_most(ExtNat((d + 1) // 2))
        elif d >= 2 and space.codim1_cohomology_nonzero is True:
            return RankInterval.exact(hi)
    return RankInterval.at_most(hi)


def gsr_commutative(space: SpaceDescriptor) -> RankInterval:
    """Interval for gsr C(X).

    Contractible spaces and spaces of (upper-bounded) dimension at most 4
    give 1; spheres get the exact table-derived value; otherwise the honest
    interval up to the csr upper bound."""
    d = _require_dim(space)
    if space.contractible is True:
        return RankInterval.exact(ExtNat(1))
    if space.kind == "sphere":
        return RankInterval.exact(ExtNat(gsr_sphere_via_table(d)))
    if d <= 4:
        return RankInterval.exact(ExtNat(1))
    return RankInterval.at_most(csr_bound(space).hi)
