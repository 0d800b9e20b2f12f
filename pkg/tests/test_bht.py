import numpy as np
import pytest

from wavetile.dyadic import build_rank_one_tiles, tile_packet
from wavetile.errors import AliasingError
from wavetile.grid import GridFunction, SampleGrid, low_pass_profile
from wavetile.norms import lp_norm
from wavetile.operators import BHTModelSpec, bht_kernel, bht_model


def modulated_bump(grid, freq, width=0.12):
    x = grid.points()
    w = low_pass_profile((x - 0.5) / width)
    return GridFunction(grid, w * np.exp(2j * np.pi * freq * x)), w


class TestKernelOracle:
    def test_multiplier_modulus_and_phase(self):
        n = 2048
        g = SampleGrid(n, 1.0)
        a, b = 5, 25
        fa, w = modulated_bump(g, a)
        gb, _ = modulated_bump(g, b)
        res = bht_kernel(fa, gb)
        c = n // 2
        idx = slice(c - n // 128, c + n // 128)
        x = g.points()[idx]
        predicted = 1j * np.pi * np.sign(b - a) * np.exp(2j * np.pi * (a + b) * x) * w[idx] ** 2
        rel = np.max(np.abs(res.output.samples[idx] - predicted)) / np.pi
        assert rel <= 0.03

    def test_sign_flips_when_arguments_swap(self):
        n = 2048
        g = SampleGrid(n, 1.0)
        fa, _ = modulated_bump(g, 5)
        gb, _ = modulated_bump(g, 25)
        c = n // 2
        idx = slice(c - n // 128, c + n // 128)
        fwd = bht_kernel(fa, gb).output.samples[idx]
        rev = bht_kernel(gb, fa).output.samples[idx]
        assert np.max(np.abs(fwd + rev)) <= 0.06 * np.pi

    def test_equal_frequencies_vanish(self):
        n = 2048
        g = SampleGrid(n, 1.0)
        fa, _ = modulated_bump(g, 9)
        res = bht_kernel(fa, fa)
        c = n // 2
        idx = slice(c - n // 128, c + n // 128)
        assert np.max(np.abs(res.output.samples[idx])) <= 0.05

    def test_even_inputs_vanish_at_center(self):
        n = 2048
        g = SampleGrid(n, 1.0)
        _, w = modulated_bump(g, 0)
        even = GridFunction(g, w.astype(complex))
        res = bht_kernel(even, even)
        scale = lp_norm(even, np.inf) ** 2
        assert abs(res.output.samples[n // 2]) <= 1e-8 * scale

    def test_support_near_pad_rejected(self):
        n = 2048
        g = SampleGrid(n, 1.0)
        x = g.points()
        wide = GridFunction(g, low_pass_profile((x - 0.5) / 0.3).astype(complex))
        with pytest.raises(AliasingError):
            bht_kernel(wide, wide)

    def test_dilation_covariance(self):
        n = 4096
        g = SampleGrid(n, 1.0)
        c = n // 2
        x = g.points()
        fa, _ = modulated_bump(g, 3)
        gb, _ = modulated_bump(g, 15)
        res = bht_kernel(fa, gb)

        def dilate(fn):
            i = np.arange(n)
            src = ((2 * (i - c) + c) % n).astype(int)
            vals = fn.samples[src] * (np.abs(x - 0.5) <= 0.125)
            return GridFunction(g, vals)

        rd = bht_kernel(dilate(fa), dilate(gb))
        i = np.arange(n)
        src = ((2 * (i - c) + c) % n).astype(int)
        mask = np.abs(x - 0.5) <= 0.2
        ref = res.output.samples[src] * mask
        got = rd.output.samples * mask
        rel = np.max(np.abs(got - ref)) / np.max(np.abs(res.output.samples))
        assert rel <= 0.01

    def test_spectral_reference_close_to_quadrature(self):
        g = SampleGrid(2048, 1.0)
        fa, _ = modulated_bump(g, 5)
        gb, _ = modulated_bump(g, 25)
        res = bht_kernel(fa, gb)
        assert 0.0 <= res.discrepancy <= 0.1


class TestModelOperator:
    def test_empty_collection(self):
        g = SampleGrid(512, 1.0)
        spec = BHTModelSpec(g, [])
        f = GridFunction(g, np.ones(512, dtype=complex))
        assert bht_model(spec, f, f).norm2() == 0.0

    def test_single_tile_rank_one(self):
        g = SampleGrid(512, 1.0)
        rng = np.random.default_rng(0)
        f = GridFunction(g, rng.normal(size=512) + 1j * rng.normal(size=512))
        h = GridFunction(g, rng.normal(size=512) + 1j * rng.normal(size=512))
        tiles = build_rank_one_tiles(g, range(3, 4), range(2, 3))
        tile = tiles[3]
        out = bht_model(BHTModelSpec(g, [tile]), f, h)
        p1, p2, p3 = (tile_packet(g, tile, s) for s in (1, 2, 3))
        want = tile.spatial.length ** -0.5 * f.inner(p1) * h.inner(p2) * p3.samples
        assert np.abs(out.samples - want).max() <= 1e-12

    def test_local_l2_sample_bound(self):
        g = SampleGrid(1024, 1.0)
        tiles = build_rank_one_tiles(g, range(2, 5), range(0, 4))
        spec = BHTModelSpec(g, tiles)
        rng = np.random.default_rng(1)
        worst = 0.0
        for seed in range(20):
            m = g.frequencies()
            sf = np.zeros(1024, dtype=complex)
            mask = np.abs(m) <= 12
            r = np.random.default_rng(seed)
            sf[mask] = r.normal(size=mask.sum()) + 1j * r.normal(size=mask.sum())
            f = GridFunction(g, np.fft.ifft(sf) * 32)
            sg = np.zeros(1024, dtype=complex)
            sg[mask] = r.normal(size=mask.sum()) + 1j * r.normal(size=mask.sum())
            h = GridFunction(g, np.fft.ifft(sg) * 32)
            denom = lp_norm(f, 2) * lp_norm(h, 2)
            worst = max(worst, lp_norm(bht_model(spec, f, h), 1) / denom)
        assert worst <= 2.0

    def test_bilinearity(self):
        g = SampleGrid(512, 1.0)
        tiles = build_rank_one_tiles(g, range(3, 5), range(0, 2))
        spec = BHTModelSpec(g, tiles)
        rng = np.random.default_rng(2)
        f = GridFunction(g, rng.normal(size=512).astype(complex))
        h = GridFunction(g, rng.normal(size=512).astype(complex))
        assert np.array_equal(
            bht_model(spec, 2.0 * f, h).samples, 2.0 * bht_model(spec, f, h).samples
        )


def test_kernel_rejects_2d():
    g2 = SampleGrid(32, 1.0, dimension=2)
    f = GridFunction(g2, np.zeros((32, 32), dtype=complex))
    with pytest.raises(ValueError):
        bht_kernel(f, f)
