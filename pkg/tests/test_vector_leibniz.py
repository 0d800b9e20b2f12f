from fractions import Fraction

import numpy as np
import pytest

from wavetile.dyadic import grid_dyadic_family
from wavetile.errors import ExponentConstraintError, ShapeError
from wavetile.grid import GridFunction, SampleGrid
from wavetile.norms import INF, MixedNormSpec
from wavetile.operators import (
    LeibnizExponents,
    ParaproductSpec,
    discretized_paraproduct,
    leibniz_sides,
    vector_valued_apply,
)


def band_limited(grid, seed, band, vshape=()):
    rng = np.random.default_rng(seed)
    n = grid.sample_count
    shape = grid.spatial_shape + tuple(vshape)
    spec = np.zeros(shape, dtype=complex)
    mask = np.abs(grid.frequencies()) <= band
    if grid.dimension == 1:
        idx = np.flatnonzero(mask)
        spec[idx] = rng.normal(size=(len(idx),) + tuple(vshape)) + 1j * rng.normal(
            size=(len(idx),) + tuple(vshape)
        )
    else:
        m2 = np.argwhere(mask[:, None] & mask[None, :])
        spec[m2[:, 0], m2[:, 1]] = rng.normal(
            size=(len(m2),) + tuple(vshape)
        ) + 1j * rng.normal(size=(len(m2),) + tuple(vshape))
    out = np.fft.ifftn(spec, axes=tuple(range(grid.dimension)))
    return GridFunction(grid, out * n ** (grid.dimension / 2))


GRID = SampleGrid(256, 1.0)
FAMILY = grid_dyadic_family(GRID, range(2, 6))
SPEC = ParaproductSpec.constant(GRID, FAMILY)


def op(f, g):
    return discretized_paraproduct(SPEC, f, g)


class TestVectorValuedApply:
    def test_single_component_reduces_to_scalar(self):
        f = band_limited(GRID, 0, 40, (1,))
        g = band_limited(GRID, 1, 40, (1,))
        out, (n_out, n_f, n_g) = vector_valued_apply(
            op, f, g,
            MixedNormSpec((4, Fraction(3, 2))),
            MixedNormSpec((4, Fraction(3, 2))),
            MixedNormSpec((2, Fraction(3, 4))),
        )
        scalar = op(
            GridFunction(GRID, f.samples[:, 0]), GridFunction(GRID, g.samples[:, 0])
        )
        assert np.array_equal(out.samples[:, 0], scalar.samples)
        from wavetile.norms import lp_norm

        assert n_f == pytest.approx(lp_norm(GridFunction(GRID, f.samples[:, 0]), 4))

    def test_shape_mismatch(self):
        f = band_limited(GRID, 2, 40, (2,))
        g = band_limited(GRID, 3, 40, (3,))
        with pytest.raises(ShapeError):
            vector_valued_apply(op, f, g, MixedNormSpec((4, 2)),
                                MixedNormSpec((4, 2)), MixedNormSpec((2, 1)))

    def test_depth2_norms_match_brute_force(self):
        f = band_limited(GRID, 4, 40, (2, 3))
        g = band_limited(GRID, 5, 40, (2, 3))
        out, (n_out, n_f, n_g) = vector_valued_apply(
            op, f, g,
            MixedNormSpec((4, INF, 2)),
            MixedNormSpec((4, 2, INF)),
            MixedNormSpec((2, 2, 2)),
        )
        # brute-force iterated sums for the f-norm (inf over axis 1 last... axis2 first)
        t = np.abs(f.samples)
        inner = np.sqrt(np.sum(t ** 2, axis=2))  # L2 over the last axis
        mid = inner.max(axis=1)  # sup over the middle axis
        want = (np.sum(mid ** 4) * GRID.spacing) ** 0.25
        assert n_f == pytest.approx(want, rel=1e-12)
        # componentwise application
        scalar = op(
            GridFunction(GRID, f.samples[:, 1, 2]),
            GridFunction(GRID, g.samples[:, 1, 2]),
        )
        assert np.abs(out.samples[:, 1, 2] - scalar.samples).max() < 1e-14


class TestLeibnizSides:
    def test_constant_second_factor_first_term_dominates(self):
        g2 = SampleGrid(128, 1.0, dimension=2)
        f = band_limited(g2, 6, 8)
        ones = GridFunction(g2, np.ones((128, 128), dtype=complex))
        exps = LeibnizExponents(2, 2, (
            (2, 2, INF, INF),
            (INF, INF, 2, 2),
            (2, 2, INF, INF),
            (2, 2, INF, INF),
        ))
        lhs, terms = leibniz_sides(1.0, 1.0, exps, f, ones)
        assert lhs / terms[0] <= 1 + 1e-6

    def test_ratio_bounded_on_random_pairs(self):
        g2 = SampleGrid(128, 1.0, dimension=2)
        exps = LeibnizExponents.symmetric(2, 2)
        for seed in range(5):
            f = band_limited(g2, 10 + seed, 8)
            g = band_limited(g2, 20 + seed, 8)
            lhs, terms = leibniz_sides(1.0, 1.0, exps, f, g)
            assert lhs <= sum(terms)

    def test_constraint_violation_named(self):
        g2 = SampleGrid(128, 1.0, dimension=2)
        f = band_limited(g2, 30, 8)
        exps = LeibnizExponents.symmetric(2, Fraction(2, 3))
        with pytest.raises(ExponentConstraintError) as err:
            leibniz_sides(1.0, 0.25, exps, f, f)
        assert "s2" in err.value.constraint

    def test_s1_constraint(self):
        g2 = SampleGrid(128, 1.0, dimension=2)
        f = band_limited(g2, 31, 8)
        exps = LeibnizExponents.symmetric(Fraction(3, 4), 2)
        with pytest.raises(ExponentConstraintError) as err:
            leibniz_sides(0.25, 1.0, exps, f, f)
        assert err.value.constraint == "s1 > 1/(1+alpha)"

    def test_hoelder_validation(self):
        with pytest.raises(ValueError):
            LeibnizExponents(2, 2, ((4, 4, 4, 4),) * 3)
        with pytest.raises(ValueError):
            LeibnizExponents(2, 2, ((3, 4, 4, 4),) * 4)
