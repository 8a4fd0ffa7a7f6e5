"""Classical standard-map ensembles.

Rescaled variables (theta, p = T n), one phase-space cell:

    p'     = p + K sin(theta)
    theta' = theta + p'

theta wraps into [0, 2 pi), p into [-pi, pi). The exact inverse is
theta = theta' - p', p = p' - K sin(theta).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import QPhaseError

TWO_PI = 2.0 * np.pi

# initial band matching the quantum band state geometry, in wrapped momentum
DEFAULT_BAND_P = (-np.pi, -0.75 * np.pi)
DEFAULT_ENSEMBLE_SIZE = 100_000


@dataclass
class ClassicalEnsemble:
    theta: np.ndarray
    p: np.ndarray
    K: float

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=np.float64)
        self.p = np.asarray(self.p, dtype=np.float64)
        if self.theta.size == 0 or self.theta.shape != self.p.shape:
            raise QPhaseError("invalid-dimension", "ensemble needs matching nonempty theta/p arrays")
        if not (np.all(np.isfinite(self.theta)) and np.all(np.isfinite(self.p))):
            raise QPhaseError("invalid-data", "ensemble coordinates must be finite")


def wrap_theta(theta):
    return np.asarray(theta) % TWO_PI


def wrap_p(p):
    return (np.asarray(p) + np.pi) % TWO_PI - np.pi


def initial_band(K: float, count: int = DEFAULT_ENSEMBLE_SIZE, seed: int = 0,
                 p_range=DEFAULT_BAND_P) -> ClassicalEnsemble:
    """Uniform random band: theta in [0, 2 pi), p in p_range."""
    if count < 1:
        raise QPhaseError("invalid-parameter", f"ensemble size must be >= 1, got {count}")
    rng = np.random.Generator(np.random.Philox(seed))
    theta = rng.uniform(0.0, TWO_PI, size=count)
    p = rng.uniform(p_range[0], p_range[1], size=count)
    return ClassicalEnsemble(theta, p, float(K))


def step_ensemble(ens: ClassicalEnsemble) -> ClassicalEnsemble:
    """One map iteration, coordinates wrapped."""
    theta, p = kernels.stdmap_advance(ens.theta, ens.p, ens.K, 1, wrap_p=True)
    return ClassicalEnsemble(theta, p, ens.K)


def evolve_ensemble(ens: ClassicalEnsemble, t: int) -> ClassicalEnsemble:
    """t composed map iterations."""
    if t < 0:
        raise QPhaseError("invalid-parameter", f"iteration count must be >= 0, got {t}")
    if t == 0:
        return ClassicalEnsemble(ens.theta.copy(), ens.p.copy(), ens.K)
    theta, p = kernels.stdmap_advance(ens.theta, ens.p, ens.K, t, wrap_p=True)
    return ClassicalEnsemble(theta, p, ens.K)


def unwrapped_momentum_spread(ens: ClassicalEnsemble, t: int) -> float:
    """Standard deviation of p after t steps with NO momentum wrapping.

    Diffusion probe: wrapped p saturates at the cell width, unwrapped p keeps
    growing in the chaotic regime.
    """
    _, p = kernels.stdmap_advance(ens.theta, ens.p, ens.K, t, wrap_p=False)
    return float(np.std(p))


def histogram_density(ens: ClassicalEnsemble, n_theta: int, n_p: int) -> np.ndarray:
    """Normalized occupation histogram, shape (n_theta, n_p), total mass 1."""
    if n_theta < 1 or n_p < 1:
        raise QPhaseError("invalid-parameter", "histogram needs at least one bin per axis")
    grid, _, _ = np.histogram2d(
        wrap_theta(ens.theta), wrap_p(ens.p),
        bins=(n_theta, n_p),
        range=((0.0, TWO_PI), (-np.pi, np.pi)),
    )
    return grid / grid.sum()
