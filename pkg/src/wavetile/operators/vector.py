"""Componentwise application of bilinear operators over vector axes."""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError
from ..grid import GridFunction
from ..norms import MixedNormSpec, mixed_norm

__all__ = ["vector_valued_apply"]


def vector_valued_apply(
    op,
    fs: GridFunction,
    gs: GridFunction,
    spec1: MixedNormSpec,
    spec2: MixedNormSpec,
    spec_out: MixedNormSpec,
):
    """Apply a scalar bilinear operator over matching vector axes.

    ``op`` maps two scalar grid functions to one.  The specs are full mixed
    norms over all axes (spatial outermost, vector innermost) and are
    evaluated on the inputs and the output; returns
    ``(output, (norm_out, norm_f, norm_g))``.
    """
    if fs.vector_shape != gs.vector_shape:
        raise ShapeError(
            f"vector axes differ: {fs.vector_shape} vs {gs.vector_shape}"
        )
    grid = fs.grid
    vshape = fs.vector_shape
    if not vshape:
        out = op(fs, gs)
        return out, (
            mixed_norm(out, spec_out),
            mixed_norm(fs, spec1),
            mixed_norm(gs, spec2),
        )
    dim = grid.dimension
    out_samples = None
    for idx in np.ndindex(*vshape):
        sel = (slice(None),) * dim + idx
        comp = op(
            GridFunction(grid, fs.samples[sel]),
            GridFunction(grid, gs.samples[sel]),
        )
        if out_samples is None:
            out_samples = np.zeros(
                grid.spatial_shape + vshape, dtype=complex
            )
        out_samples[sel] = comp.samples
    out = GridFunction(grid, out_samples)
    return out, (
        mixed_norm(out, spec_out),
        mixed_norm(fs, spec1),
        mixed_norm(gs, spec2),
    )
