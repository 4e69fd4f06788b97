"""Laplacian spectra and diffusion-regime classification for two-layer networks.

The combinatorial Laplacian L = D - A is built per layer over the full shared
node registry (binary adjacency; isolated nodes give all-zero rows). For a
two-layer network the supra-Laplacian couples the layer blocks through the
inter-layer rate dx:

    [[p1*L1 + dx*I,      -dx*I    ],
     [    -dx*I,     p2*L2 + dx*I ]]

Its second-smallest eigenvalue lambda2 is the inverse characteristic diffusion
time of the coupled system; comparing it with the per-layer lambda2 values
classifies the regime. The dx -> infinity ceiling is lambda2 of the averaged
superposition (p1*L1 + p2*L2) / 2.
"""

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .network import MultiplexNetwork

# slack keeping regime labels stable under floating-point noise
REGIME_EPS = 1e-9


class Regime(enum.Enum):
    SUB_MULTIPLEX = "SUB_MULTIPLEX"
    MULTIPLEX = "MULTIPLEX"
    SUPERDIFFUSION = "SUPERDIFFUSION"


@dataclass(frozen=True)
class SpectralReport:
    """lambda2 values for both layers, the coupled system, and its ceiling."""

    dx: float
    lambda2_per_layer: Mapping[str, float]
    lambda2_supra: float
    lambda2_superposition: float
    regime: Regime


def laplacian(net: MultiplexNetwork, layer_name: str) -> np.ndarray:
    """Combinatorial Laplacian of one layer on the full node registry."""
    layer = net.layer(layer_name)
    n = net.n_nodes
    lap = np.zeros((n, n), dtype=np.float64)
    for i, j, _ in layer.edges():
        lap[i, j] = -1.0
        lap[j, i] = -1.0
        lap[i, i] += 1.0
        lap[j, j] += 1.0
    return lap


def supra_laplacian(
    net: MultiplexNetwork, dx: float, p1: float = 1.0, p2: float = 1.0
) -> np.ndarray:
    """Coupled 2N x 2N Laplacian of a two-layer network."""
    if len(net.layers) != 2:
        raise ValueError(f"supra-Laplacian is defined for exactly 2 layers, got {len(net.layers)}")
    if not dx > 0.0:
        raise ValueError(f"dx must be > 0, got {dx}")
    n = net.n_nodes
    l1 = laplacian(net, net.layers[0].name)
    l2 = laplacian(net, net.layers[1].name)
    eye = np.eye(n)
    return np.block([
        [p1 * l1 + dx * eye, -dx * eye],
        [-dx * eye, p2 * l2 + dx * eye],
    ])


def lambda2(matrix: np.ndarray) -> float:
    """Second-smallest eigenvalue of a symmetric matrix (ascending order).

    On disconnected graphs the zero eigenvalue has multiplicity > 1 and
    lambda2 is 0. Asymmetric input (relative to the matrix scale) is rejected.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 2:
        raise ValueError("lambda2 needs at least a 2x2 matrix")
    scale = max(1.0, float(np.abs(m).max()))
    if float(np.abs(m - m.T).max()) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    values = np.linalg.eigvalsh(m)
    return float(values[1])


def classify_regime(
    net: MultiplexNetwork, dx: float, p1: float = 1.0, p2: float = 1.0
) -> SpectralReport:
    """Compare coupled lambda2 with the layer values and label the regime.

    SUPERDIFFUSION: faster than the fastest layer; MULTIPLEX: faster than the
    slowest layer only; SUB_MULTIPLEX otherwise.
    """
    if len(net.layers) != 2:
        raise ValueError("regime classification is defined for exactly 2 layers")
    name1, name2 = net.layer_names
    mat1 = laplacian(net, name1)
    mat2 = laplacian(net, name2)
    lam1 = lambda2(mat1)
    lam2 = lambda2(mat2)
    lam_supra = lambda2(supra_laplacian(net, dx, p1, p2))
    lam_super = lambda2((p1 * mat1 + p2 * mat2) / 2.0)
    lo, hi = min(lam1, lam2), max(lam1, lam2)
    if lam_supra > hi + REGIME_EPS:
        regime = Regime.SUPERDIFFUSION
    elif lam_supra > lo + REGIME_EPS:
        regime = Regime.MULTIPLEX
    else:
        regime = Regime.SUB_MULTIPLEX
    return SpectralReport(
        dx=dx,
        lambda2_per_layer={name1: lam1, name2: lam2},
        lambda2_supra=lam_supra,
        lambda2_superposition=lam_super,
        regime=regime,
    )


def dx_sweep(
    net: MultiplexNetwork, dx_grid: Sequence[float], p1: float = 1.0, p2: float = 1.0
) -> list[SpectralReport]:
    """One report per dx; the grid must be positive and strictly ascending."""
    grid = list(dx_grid)
    if not grid:
        raise ValueError("dx grid must be non-empty")
    if any(not dx > 0.0 for dx in grid):
        raise ValueError("dx grid values must be > 0")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("dx grid must be strictly ascending")
    return [classify_regime(net, dx, p1, p2) for dx in grid]
