"""Deterministic sampling in even-dimensional balls.

Monte Carlo draws use numpy Generators seeded per call; quasi-random sweeps
use unscrambled Sobol points through a fixed radial/spherical transform, so
identical parameters always reproduce identical point sets.
"""
from __future__ import annotations

import numpy as np
from scipy.stats import qmc


def uniform_ball(m: int, size: int, seed, radius: float = 1.0,
                 chunk: int = 1 << 17):
    """Uniform samples in the 2m-ball, yielded in chunks of at most `chunk`.

    Chunks come from substreams spawned off the seed, so the stream is
    reproducible regardless of how consumers batch the chunks.
    """
    d = 2 * m
    seq = np.random.SeedSequence(seed)
    remaining = size
    for child in seq.spawn((size + chunk - 1) // chunk):
        n = min(chunk, remaining)
        rng = np.random.default_rng(child)
        g = rng.standard_normal((n, d))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        r = radius * rng.random(n) ** (1.0 / d)
        yield g * r[:, None]
        remaining -= n


def uniform_ball_array(m: int, size: int, seed, radius: float = 1.0) -> np.ndarray:
    return np.concatenate(list(uniform_ball(m, size, seed, radius)), axis=0)


def _sobol(d: int, size: int, seed: int) -> np.ndarray:
    """Unscrambled Sobol points with a seeded toroidal shift.

    The shift keeps the stream deterministic per seed while avoiding the
    degenerate leading points (all-zero, all-half) of the raw sequence.
    """
    eng = qmc.Sobol(d=d, scramble=False)
    u = eng.random(1 << (max(size - 1, 1)).bit_length())[:size]
    shift = np.random.default_rng(np.random.SeedSequence((seed, 0xB0B))).random(d)
    return np.mod(u + shift, 1.0)


def sobol_ball(m: int, size: int, radius: float = 1.0, seed: int = 0) -> np.ndarray:
    """Low-discrepancy points in the 2m-ball (Sobol through the radial map)."""
    d = 2 * m
    u = _sobol(d + 1, size, seed)
    g = _gauss_from_uniform(u[:, :d])
    g /= np.maximum(np.linalg.norm(g, axis=1, keepdims=True), 1e-300)
    r = radius * np.maximum(u[:, d], 1e-12) ** (1.0 / d)
    return g * r[:, None]


def sobol_sphere(m: int, size: int, seed: int = 0) -> np.ndarray:
    """Low-discrepancy directions on the unit (2m-1)-sphere."""
    d = 2 * m
    g = _gauss_from_uniform(_sobol(d, size, seed))
    return g / np.maximum(np.linalg.norm(g, axis=1, keepdims=True), 1e-300)


def _gauss_from_uniform(u: np.ndarray) -> np.ndarray:
    # inverse-CDF keeps the Sobol stratification; clip away the endpoints
    from scipy.special import ndtri
    return ndtri(np.clip(u, 1e-12, 1 - 1e-12))


def stratified_ball_grid(m: int, size: int, shell_radii=(), shell_frac: float = 0.3,
                         seed: int = 0, radius: float = 1.0) -> np.ndarray:
    """Low-discrepancy sweep of the ball, densified on the given shells.

    A `shell_frac` share of the budget is split across thin shells around each
    radius in `shell_radii`, where bounds downstream are tight.
    """
    shell_radii = [r for r in shell_radii if 0 < r < radius]
    n_shell = int(size * shell_frac) if shell_radii else 0
    pts = [sobol_ball(m, size - n_shell, radius=radius, seed=seed)]
    if shell_radii:
        per = max(1, n_shell // len(shell_radii))
        for i, r0 in enumerate(shell_radii):
            dirs = sobol_sphere(m, per, seed=seed + 17 * (i + 1))
            jitter = np.linspace(-1e-3, 1e-3, per) * radius
            rr = np.clip(r0 + jitter, 1e-9, radius * (1 - 1e-12))
            pts.append(dirs * rr[:, None])
    return np.concatenate(pts, axis=0)
