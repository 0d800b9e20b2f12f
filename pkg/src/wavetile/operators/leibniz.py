"""Two-parameter fractional Leibniz rule: both sides, for ratio reporting.

The left side is the mixed norm of D1^alpha D2^beta (f g), computed
spectrally.  The right side is the sum of four products

    ||D1^a D2^b f||_{p_x, p_y} * ||D1^a' D2^b' g||_{q_x, q_y}

splitting the derivatives as (both, none), (none, both), (x on f / y on g),
and (y on f / x on g).  Every term carries its own Hoelder pair; the target
exponents must satisfy s1 > 1/(1+alpha) and s2 > max(1/(1+alpha),
1/(1+beta)), else the assignment is rejected naming the violated constraint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import ExponentConstraintError
from ..grid import GridFunction, fractional_derivative
from ..norms import Exponent, MixedNormSpec, mixed_norm, recip

__all__ = ["LeibnizExponents", "leibniz_sides"]


@dataclass(frozen=True)
class LeibnizExponents:
    """Target pair (s1, s2) and one (px, py, qx, qy) tuple per product term."""

    s1: Exponent
    s2: Exponent
    pairs: tuple[tuple[Exponent, Exponent, Exponent, Exponent], ...]

    def __post_init__(self):
        if len(self.pairs) != 4:
            raise ValueError("need exactly four Hoelder pairs")
        for px, py, qx, qy in self.pairs:
            if recip(px) + recip(qx) != recip(self.s1):
                raise ValueError(f"x-scaling violated: 1/{px}+1/{qx} != 1/{self.s1}")
            if recip(py) + recip(qy) != recip(self.s2):
                raise ValueError(f"y-scaling violated: 1/{py}+1/{qy} != 1/{self.s2}")
            for e in (px, py, qx, qy):
                if recip(e) >= 1:
                    raise ValueError("factor exponents must exceed 1")

    @classmethod
    def symmetric(cls, s1: Exponent = 2, s2: Exponent = 2) -> "LeibnizExponents":
        """The symmetric split: every factor norm at double the target."""
        px = 1 / (recip(s1) / 2) if recip(s1) > 0 else s1
        py = 1 / (recip(s2) / 2) if recip(s2) > 0 else s2
        pair = (px, py, px, py)
        return cls(s1, s2, (pair, pair, pair, pair))


def _check_constraints(alpha: float, beta: float, exps: LeibnizExponents):
    s1, s2 = Fraction(exps.s1), Fraction(exps.s2)
    lo1 = Fraction(1) / (1 + Fraction(alpha).limit_denominator(10 ** 6))
    lo2 = max(lo1, Fraction(1) / (1 + Fraction(beta).limit_denominator(10 ** 6)))
    if not s1 > lo1:
        raise ExponentConstraintError(
            f"s1={s1} violates s1 > 1/(1+alpha) = {lo1}",
            constraint="s1 > 1/(1+alpha)",
        )
    if not s2 > lo2:
        raise ExponentConstraintError(
            f"s2={s2} violates s2 > max(1/(1+alpha), 1/(1+beta)) = {lo2}",
            constraint="s2 > max(1/(1+alpha), 1/(1+beta))",
        )


def leibniz_sides(
    alpha: float,
    beta: float,
    exps: LeibnizExponents,
    f: GridFunction,
    g: GridFunction,
) -> tuple[float, tuple[float, float, float, float]]:
    """Evaluate lhs and the four rhs products of the two-parameter rule."""
    if f.grid.dimension != 2:
        raise ValueError("the two-parameter rule needs 2d inputs")
    _check_constraints(alpha, beta, exps)

    def d(h, a, b):
        out = h
        if a > 0:
            out = fractional_derivative(out, a, axis=1)
        if b > 0:
            out = fractional_derivative(out, b, axis=2)
        return out

    product = GridFunction(f.grid, f.samples * g.samples)
    lhs = mixed_norm(d(product, alpha, beta), MixedNormSpec((exps.s1, exps.s2)))

    splits = (
        ((alpha, beta), (0.0, 0.0)),
        ((0.0, 0.0), (alpha, beta)),
        ((alpha, 0.0), (0.0, beta)),
        ((0.0, beta), (alpha, 0.0)),
    )
    terms = []
    for ((af, bf), (ag, bg)), (px, py, qx, qy) in zip(splits, exps.pairs):
        nf = mixed_norm(d(f, af, bf), MixedNormSpec((px, py)))
        ng = mixed_norm(d(g, ag, bg), MixedNormSpec((qx, qy)))
        terms.append(nf * ng)
    return lhs, tuple(terms)
