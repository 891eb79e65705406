"""Extended-natural rank values and closed intervals over {1, 2, ..., inf}.

Every stable-rank variable lives in the chain 1 < 2 < ... < inf.  Unknown
values are represented by closed intervals; [1, inf] carries no information.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import Optional, Union

#: Default cap on the number of distinct finite values the engine tracks.
#: Finite bounds above the cap are loosened (lo -> cap, hi -> inf) so that
#: every propagation run terminates.
MAX_FINITE_DEFAULT = 64


@total_ordering
class ExtNat:
    """A positive integer or infinity, totally ordered, with a total +1."""

    __slots__ = ("_v",)

    def __init__(self, value: Union[int, float]):
        if value == math.inf:
            self._v: Union[int, float] = math.inf
        elif isinstance(value, int) and not isinstance(value, bool) and value >= 1:
            self._v = value
        else:
            raise ValueError(f"ExtNat must be an integer >= 1 or inf, got {value!r}")

    @property
    def is_inf(self) -> bool:
        return self._v == math.inf

    @property
    def finite(self) -> int:
        """The underlying integer; raises on infinity."""
        if self.is_inf:
            raise ValueError("infinite rank value has no finite representation")
        return int(self._v)

    def succ(self) -> "ExtNat":
        """x + 1, with inf + 1 = inf."""
        return INF if self.is_inf else ExtNat(self.finite + 1)

    def pred_clamped(self) -> "ExtNat":
        """max(x - 1, 1), with inf - 1 = inf."""
        if self.is_inf:
            return INF
        return ExtNat(max(1, self.finite - 1))

    def shifted(self, k: int) -> "ExtNat":
        """x + k for k >= 0, with inf + k = inf."""
        if self.is_inf:
            return INF
        return ExtNat(self.finite + k)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExtNat) and self._v == other._v

    def __lt__(self, other: "ExtNat") -> bool:
        return self._v < other._v

    def __hash__(self) -> int:
        return hash(self._v)

    def __repr__(self) -> str:
        return f"ExtNat({'inf' if self.is_inf else self.finite})"

    def __str__(self) -> str:
        return "inf" if self.is_inf else str(self.finite)

    def to_json(self) -> Union[int, str]:
        """Infinity serializes as the string "inf"."""
        return "inf" if self.is_inf else self.finite

    @staticmethod
    def from_json(value: Union[int, str]) -> "ExtNat":
        if value == "inf":
            return INF
        if isinstance(value, int):
            return ExtNat(value)
        raise ValueError(f"cannot decode rank value {value!r}")


INF = ExtNat(math.inf)
ONE = ExtNat(1)


def en(value: Union[int, float]) -> ExtNat:
    """Shorthand constructor."""
    return ExtNat(value)


class RankKind(str, Enum):
    """The four stable ranks; (algebra id, kind) names one rank variable."""

    BSR = "bsr"
    TSR = "tsr"
    CSR = "csr"
    GSR = "gsr"

    def __str__(self) -> str:  # pragma: no cover - trivial
        return self.value


RANK_KINDS = (RankKind.BSR, RankKind.TSR, RankKind.CSR, RankKind.GSR)


@dataclass(frozen=True)
class RankInterval:
    """Closed interval [lo, hi] with 1 <= lo <= hi <= inf."""

    lo: ExtNat
    hi: ExtNat

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @staticmethod
    def top() -> "RankInterval":
        return RankInterval(ONE, INF)

    @staticmethod
    def exact(value: ExtNat) -> "RankInterval":
        return RankInterval(value, value)

    @staticmethod
    def at_least(value: ExtNat) -> "RankInterval":
        return RankInterval(value, INF)

    @staticmethod
    def at_most(value: ExtNat) -> "RankInterval":
        return RankInterval(ONE, value)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def is_top(self) -> bool:
        return self.lo == ONE and self.hi == INF

    def contains(self, value: ExtNat) -> bool:
        return self.lo <= value <= self.hi

    def meet(self, other: "RankInterval") -> Optional["RankInterval"]:
        """Interval intersection; None signals that the facts contradict."""
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return RankInterval(lo, hi)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def meet(a: RankInterval, b: RankInterval) -> Optional[RankInterval]:
    """Module-level alias for :meth:`RankInterval.meet`."""
    return a.meet(b)


def matrix_map_value(r: ExtNat, n: int) -> ExtNat:
    """f_n(r) = ceil((r - 1) / n) + 1; f_n(1) = 1, f_n(inf) = inf."""
    if n < 1:
        raise ValueError("matrix size must be >= 1")
    if r.is_inf:
        return INF
    return ExtNat(-(-(r.finite - 1) // n) + 1)


def apply_matrix_map(a: RankInterval, n: int) -> RankInterval:
    """Image of an interval under the monotone matrix-size transform f_n."""
    return RankInterval(matrix_map_value(a.lo, n), matrix_map_value(a.hi, n))


def _preimage_lo(v: ExtNat, n: int) -> ExtNat:
    # least r with f_n(r) = v
    if v.is_inf or v == ONE:
        return v
    return ExtNat(n * (v.finite - 2) + 2)


def _preimage_hi(v: ExtNat, n: int) -> ExtNat:
    # greatest r with f_n(r) = v
    if v.is_inf or v == ONE:
        return v
    return ExtNat(n * (v.finite - 1) + 1)


def invert_matrix_map(m: RankInterval, n: int) -> RankInterval:
    """Smallest interval containing the f_n-preimage of m.

    f_n is surjective onto the value chain, so the preimage is never empty:
    the preimage of a finite v >= 2 is [n(v-2)+2, n(v-1)+1], and 1 and inf
    are fixed points.
    """
    if n < 1:
        raise ValueError("matrix size must be >= 1")
    return RankInterval(_preimage_lo(m.lo, n), _preimage_hi(m.hi, n))


def clamp(a: RankInterval, cap: int) -> RankInterval:
    """Loosen finite endpoints above the cap so the value domain stays finite.

    A finite lower bound above the cap drops to the cap; a finite upper bound
    above the cap loosens to inf.  Both moves only widen the interval, so
    clamping preserves soundness.
    """
    lo, hi = a.lo, a.hi
    if not lo.is_inf and lo.finite > cap:
        lo = ExtNat(cap)
    if not hi.is_inf and hi.finite > cap:
        hi = INF
    return RankInterval(lo, hi)
