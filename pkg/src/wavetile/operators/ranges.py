"""Exact-rational membership calculator for vector-valued BHT exponents.

Membership of an outer triple (p, q, s) in the admissible region attached to
an inner tuple (r1, r2, r) is decided two independent ways:

* a closed-form case table over the seven configurations of
  (1/r1, 1/r2, 1/r') relative to 1/2 and 0, and
* exact feasibility of the defining linear system: existence of
  theta in [0,1)^3 with theta1+theta2+theta3 = 1 and
  1/r1 < (1+theta1)/2, 1/r2 < (1+theta2)/2, 1/r' < (1+theta3)/2 together
  with the same bounds for (1/p, 1/q, 1/s').

The two routes must agree; a mismatch raises
:class:`~wavetile.errors.RangeConsistencyError` (bug trap).  The table used
by default carries a consistency repair in cases (ii)/(iii): the dual-side
constraint 1/s' < 3/2 - 1/r1 (resp. 1/r2), present in cases (v)/(vi), is
required there as well, since the linear system forces it.  The unrepaired
inequalities remain available through ``literal_case_member`` and
``literal_disagreement_levels`` for flagging queries where the two readings
differ.

Depth-n queries intersect the per-level regions and additionally check the
cascade condition: each level's inner tuple must belong to the region of the
next level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import RangeConsistencyError
from ..norms import INF, Exponent, recip

__all__ = [
    "RangeQuery",
    "RangeMembership",
    "bht_range_membership",
    "scalar_range_member",
    "literal_case_member",
    "literal_disagreement_levels",
    "parse_range_query",
    "format_range_query",
]

HALF = Fraction(1, 2)
ONE = Fraction(1)
THREE_HALVES = Fraction(3, 2)


def _as_tuple(x) -> tuple:
    if isinstance(x, (tuple, list)):
        return tuple(x)
    return (x,)


@dataclass(frozen=True)
class RangeQuery:
    """Inner exponent vectors and an outer Hoelder triple, all exact."""

    r1: tuple[Exponent, ...]
    r2: tuple[Exponent, ...]
    r: tuple[Exponent, ...]
    p: Exponent
    q: Exponent
    s: Exponent

    def __post_init__(self):
        object.__setattr__(self, "r1", _as_tuple(self.r1))
        object.__setattr__(self, "r2", _as_tuple(self.r2))
        object.__setattr__(self, "r", _as_tuple(self.r, ))
        if not (len(self.r1) == len(self.r2) == len(self.r) >= 1):
            raise ValueError("r1, r2, r must have equal positive depth")
        for a, b, c in zip(self.r1, self.r2, self.r):
            ra, rb, rc = recip(a), recip(b), recip(c)
            if ra + rb != rc:
                raise ValueError(f"level scaling violated: 1/{a}+1/{b} != 1/{c}")
            if not (0 <= ra < 1 and 0 <= rb < 1):
                raise ValueError("inner exponents must satisfy 1 < r_i <= inf")
            if not (0 < rc < THREE_HALVES):
                raise ValueError("inner target must satisfy 2/3 < r < inf")
        op, oq, os = recip(self.p), recip(self.q), recip(self.s)
        if op + oq != os:
            raise ValueError(f"outer scaling violated: 1/{self.p}+1/{self.q} != 1/{self.s}")
        if not (0 <= op <= 1 and 0 <= oq <= 1):
            raise ValueError("outer p, q must satisfy 1 <= p, q <= inf")

    @property
    def depth(self) -> int:
        return len(self.r)

    def outer_reciprocals(self) -> tuple[Fraction, Fraction, Fraction]:
        """(1/p, 1/q, 1/s')."""
        return recip(self.p), recip(self.q), 1 - recip(self.s)

    def level_reciprocals(self, j: int) -> tuple[Fraction, Fraction, Fraction]:
        """(1/r1, 1/r2, 1/r') at level j."""
        return recip(self.r1[j]), recip(self.r2[j]), 1 - recip(self.r[j])


# ---------------------------------------------------------------------------
# Route (b): exact theta feasibility
# ---------------------------------------------------------------------------

def _theta_feasible(rho, outer):
    """Feasibility of the simplex system; returns (bool, theta or None).

    Exact integer arithmetic over the common denominator: theta_j must
    exceed 2 max(rho_j, outer_j) - 1, stay in [0, 1), and sum to 1, which is
    possible iff the sum of the clipped lower bounds is below 1.
    """
    from math import lcm

    d = 1
    for v in (*rho, *outer):
        d = lcm(d, v.denominator)
    lows = []
    for a, b in zip(rho, outer):
        m = max(a.numerator * (d // a.denominator), b.numerator * (d // b.denominator))
        lows.append(max(0, 2 * m - d))
    if sum(lows) >= d:
        return False, None
    slack = Fraction(d - sum(lows), 3 * d)
    theta = tuple(Fraction(l, d) + slack for l in lows)
    return True, theta


# ---------------------------------------------------------------------------
# Route (a): case table
# ---------------------------------------------------------------------------

def _classify(rho1: Fraction, rho2: Fraction, rho3d: Fraction) -> str:
    big1, big2 = rho1 > HALF, rho2 > HALF
    if big1 and big2:
        return "vii"
    if big1:
        return "ii" if rho3d >= 0 else "v"
    if big2:
        return "iii" if rho3d >= 0 else "vi"
    return "iv" if rho3d > HALF else "i"


def _in_range_bht(o1: Fraction, o2: Fraction, o3d: Fraction) -> bool:
    return o1 < 1 and o2 < 1 and -HALF < o3d < 1


def _case_member(rho, outer, repaired: bool = True) -> tuple[bool, str]:
    rho1, rho2, rho3d = rho
    o1, o2, o3d = outer
    label = _classify(rho1, rho2, rho3d)
    if not _in_range_bht(o1, o2, o3d):
        return False, label
    if label == "i":
        ok = True
    elif label in ("ii", "v"):
        ok = o2 < THREE_HALVES - rho1
        if label == "v" or repaired:
            ok = ok and o3d < THREE_HALVES - rho1
    elif label in ("iii", "vi"):
        ok = o1 < THREE_HALVES - rho2
        if label == "vi" or repaired:
            ok = ok and o3d < THREE_HALVES - rho2
    elif label == "iv":
        rr = rho1 + rho2  # 1/r
        ok = o1 < HALF + rr and o2 < HALF + rr and o3d > -rr
    else:  # vii
        rr = rho1 + rho2
        ok = (
            o1 < THREE_HALVES - rho2
            and o2 < THREE_HALVES - rho1
            and o3d < 2 - rr
        )
    return ok, label


def literal_case_member(rho, outer) -> tuple[bool, str]:
    """The case table exactly as printed (no (ii)/(iii) repair)."""
    return _case_member(rho, outer, repaired=False)


# ---------------------------------------------------------------------------
# Public interface
# ---------------------------------------------------------------------------

@dataclass
class RangeMembership:
    member: bool
    theta: list[tuple[Fraction, Fraction, Fraction] | None]
    case_labels: list[str]
    chain_ok: bool
    depth: int


def scalar_range_member(rho, outer) -> tuple[bool, str, tuple | None]:
    """Single-level membership with the internal consistency trap."""
    feasible, theta = _theta_feasible(rho, outer)
    table_ok, label = _case_member(rho, outer, repaired=True)
    if feasible != table_ok:
        raise RangeConsistencyError(
            f"case table ({table_ok}) and theta feasibility ({feasible}) "
            f"disagree at rho={rho}, outer={outer}, case ({label})"
        )
    return feasible, label, theta


def bht_range_membership(query: RangeQuery) -> RangeMembership:
    """Membership of the outer triple in the depth-n admissible region.

    The region is the intersection over levels; a depth-n query must also
    satisfy the cascade condition linking consecutive levels, reported via
    ``chain_ok`` and required for membership.
    """
    outer = query.outer_reciprocals()
    labels: list[str] = []
    thetas: list[tuple | None] = []
    member = True
    for j in range(query.depth):
        rho = query.level_reciprocals(j)
        ok, label, theta = scalar_range_member(rho, outer)
        labels.append(label)
        thetas.append(theta)
        member = member and ok
    chain_ok = True
    for j in range(query.depth - 1):
        rho_next = query.level_reciprocals(j + 1)
        as_outer = query.level_reciprocals(j)
        ok, _, _ = scalar_range_member(rho_next, as_outer)
        chain_ok = chain_ok and ok
    member = member and chain_ok
    return RangeMembership(member, thetas if member else [None] * query.depth,
                           labels, chain_ok, query.depth)


def literal_disagreement_levels(query: RangeQuery) -> list[int]:
    """Levels where the printed table and theta feasibility disagree."""
    outer = query.outer_reciprocals()
    out = []
    for j in range(query.depth):
        rho = query.level_reciprocals(j)
        feasible, _ = _theta_feasible(rho, outer)
        lit, _ = literal_case_member(rho, outer)
        if feasible != lit:
            out.append(j)
    return out


# ---------------------------------------------------------------------------
# Text syntax: "p=4 q=2 s=4/3 r1=4/3 r2=4 r=1" (commas for depth-n vectors)
# ---------------------------------------------------------------------------

def _parse_exponent(tok: str) -> Exponent:
    tok = tok.strip()
    if tok in ("inf", "infty", "oo"):
        return INF
    return Fraction(tok)


def parse_range_query(text: str) -> RangeQuery:
    fields: dict[str, str] = {}
    for part in text.split():
        if "=" not in part:
            raise ValueError(f"malformed token {part!r}; expected key=value")
        key, val = part.split("=", 1)
        fields[key.strip()] = val
    missing = {"p", "q", "s", "r1", "r2", "r"} - set(fields)
    if missing:
        raise ValueError(f"missing fields: {sorted(missing)}")

    def vec(key: str):
        return tuple(_parse_exponent(t) for t in fields[key].split(","))

    return RangeQuery(
        r1=vec("r1"),
        r2=vec("r2"),
        r=vec("r"),
        p=_parse_exponent(fields["p"]),
        q=_parse_exponent(fields["q"]),
        s=_parse_exponent(fields["s"]),
    )


def _format_exponent(e: Exponent) -> str:
    if e == INF:
        return "inf"
    return str(Fraction(e))


def format_range_query(query: RangeQuery) -> str:
    def vec(v):
        return ",".join(_format_exponent(e) for e in v)

    return (
        f"p={_format_exponent(query.p)} q={_format_exponent(query.q)} "
        f"s={_format_exponent(query.s)} r1={vec(query.r1)} "
        f"r2={vec(query.r2)} r={vec(query.r)}"
    )
