"""Composite Gauss-Legendre panel helpers used by the stable-density evaluators."""
from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=8)
def _leggauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def panel_nodes(edges: np.ndarray, order: int = 16):
    """Nodes and weights of composite Gauss-Legendre quadrature on the given panel edges."""
    xs, ws = _leggauss(order)
    edges = np.asarray(edges, dtype=float)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * xs[None, :]).ravel()
    weights = (half[:, None] * ws[None, :]).ravel()
    return nodes, weights


def graded_edges(upper: float, plain_step: float, refine_below: float = 1.0,
                 levels: int = 26) -> np.ndarray:
    """Panel edges on [0, upper]: uniform at plain_step (oscillation control),
    geometrically refined towards 0 (absorbs the weak u**alpha endpoint
    singularity, whose second derivative is unbounded at 0)."""
    u_break = min(refine_below, 0.125 * upper)
    geo = np.concatenate([[0.0], u_break * 0.5 ** np.arange(levels, -1, -1.0)])
    n_uni = max(8, int(np.ceil(upper / plain_step)))
    uni = np.linspace(0.0, upper, n_uni + 1)
    return np.union1d(geo, uni)
