"""Radial Hamiltonians h(r^2) on the ball: closed-form flow and action, plus
independent numerical routes (line-integral action, Monte Carlo averages)
used to cross-check every closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .core import InputError, as_complex, as_real, lambda_eval, norm_sq
from .sampling import uniform_ball


@dataclass(frozen=True)
class ScaledProfile:
    """value_scale * base((s - shift)/arg_scale); keeps derivatives exact."""

    base: object
    value_scale: float = 1.0
    arg_scale: float = 1.0

    def eval(self, s):
        return self.value_scale * np.asarray(self.base.eval(np.asarray(s) / self.arg_scale))

    def deriv(self, s):
        return (self.value_scale / self.arg_scale) * np.asarray(
            self.base.deriv(np.asarray(s) / self.arg_scale))

    def junctions(self):
        return [j * self.arg_scale for j in getattr(self.base, "junctions", lambda: [])()]


@dataclass(frozen=True)
class RadialHamiltonian:
    """H(z) = scale * profile(r^2) on the ball of radius sqrt(ambient_sq)."""

    m: int
    profile: object          # eval / deriv / junctions on the r^2 axis
    scale: float = 1.0
    ambient_sq: float = 1.0

    def h(self, s):
        return self.scale * np.asarray(self.profile.eval(s))

    def hp(self, s):
        return self.scale * np.asarray(self.profile.deriv(s))

    def __call__(self, z):
        return self.h(norm_sq(z))

    def junctions_sq(self):
        return getattr(self.profile, "junctions", lambda: [])()


def _check_inside(H: RadialHamiltonian, z) -> np.ndarray:
    r2 = norm_sq(z)
    if np.any(r2 >= H.ambient_sq):
        raise InputError("point outside the open ball the Hamiltonian lives on")
    return r2


def radial_flow(H: RadialHamiltonian, t: float, z: np.ndarray) -> np.ndarray:
    """Time-t map: every complex coordinate turns by -2 h'(r^2) t.

    Radius-preserving by construction, so norms are conserved exactly.
    """
    r2 = _check_inside(H, z)
    phase = np.exp(-2j * np.asarray(H.hp(r2)) * t)
    return as_real(as_complex(z) * phase[..., None])


def radial_velocity(H: RadialHamiltonian, z: np.ndarray) -> np.ndarray:
    """Hamiltonian vector field -2 h'(r^2) (i z) in real coordinates."""
    r2 = norm_sq(z)
    return as_real(-2j * np.asarray(H.hp(r2))[..., None] * as_complex(z))


def radial_action(H: RadialHamiltonian, z: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Action of the time-t map: t (h(r^2) - r^2 h'(r^2))."""
    r2 = _check_inside(H, z)
    out = t * (np.asarray(H.h(r2)) - r2 * np.asarray(H.hp(r2)))
    return out if out.ndim else float(out)


@dataclass
class Isotopy:
    """Evaluable path of maps with its generating Hamiltonian.

    map(t, z): time-t map; t may be an array for a single point z, giving the
    whole trajectory at once.  ham(t, z) evaluates the generator at the given
    times/positions.  velocity(t, pos), when present, is the exact trajectory
    speed d/ds map(s, z)|_{s=t} at pos = map(t, z) (used for oscillatory paths
    where finite differences lose accuracy).
    """

    map: Callable
    ham: Callable
    velocity: Optional[Callable] = None
    suggested_rate: float = 0.0   # radians/unit time, drives step refinement


def isotopy_of(H: RadialHamiltonian) -> Isotopy:
    return Isotopy(
        map=lambda t, z: radial_flow(H, t, z),
        ham=lambda t, z: np.asarray(H(z)),
        velocity=lambda t, z: radial_velocity(H, z),
        suggested_rate=0.0,
    )


def action_oracle(iso: Isotopy, t: float, z: np.ndarray, steps: int = 10_000,
                  tangent: str = "fd", fd_step: float = 1e-6,
                  chunk: int = 1 << 21) -> float:
    """Line-integral action: quadrature of lambda along the trajectory plus
    the Hamiltonian along the way.  Independent of the algebraic closed form.

    Composite Simpson over [0, t]; `steps` is raised automatically when the
    isotopy advertises a fast rotation rate.  tangent="fd" differentiates the
    trajectory centrally; "exact" uses the isotopy's velocity closure.
    """
    if steps < 100:
        raise InputError("need at least 100 quadrature steps")
    if t == 0.0:
        return 0.0
    z = np.asarray(z, dtype=float)
    n = int(steps)
    if iso.suggested_rate:
        n = max(n, int(10.0 * abs(iso.suggested_rate * t)))
    if n % 2:
        n += 1

    def integrand(s_nodes):
        pos = iso.map(s_nodes, z)
        if tangent == "exact" and iso.velocity is not None:
            vel = iso.velocity(s_nodes, pos)
        else:
            vel = (iso.map(s_nodes + fd_step, z) - iso.map(s_nodes - fd_step, z)) \
                / (2.0 * fd_step)
        vals = lambda_eval(pos, vel) + np.asarray(iso.ham(s_nodes, pos))
        if not np.all(np.isfinite(vals)):
            raise FloatingPointError("non-finite integrand along the trajectory")
        return vals

    h = t / n
    total = 0.0
    # chunked composite Simpson: pairs of intervals [s_{2k}, s_{2k+2}]
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        idx = np.arange(start, stop + 1)
        vals = integrand(idx * h)
        w = np.ones(idx.size)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        total += float(np.dot(w, vals)) * h / 3.0
    return total


def calabi_radial(H: RadialHamiltonian, tol: float = 1e-10) -> float:
    """Closed-form route: 2m(m+1) pi^m Int_0^1 r^(2m-1) h(r^2) dr.

    Adaptive Gauss-Kronrod quadrature with the profile's junctions passed as
    breakpoints; raises if the requested absolute tolerance is not certified.
    """
    m = H.m
    R = math.sqrt(H.ambient_sq)

    def f(r):
        return r ** (2 * m - 1) * float(H.h(r * r))

    pts = sorted({math.sqrt(j) for j in H.junctions_sq() if 0 < j < H.ambient_sq})
    val, err = quad(f, 0.0, R, points=pts or None, epsabs=tol * 1e-2, epsrel=1e-12,
                    limit=200)
    if err > tol:
        raise FloatingPointError(f"quadrature error {err:.3g} above tolerance {tol:.3g}")
    return 2.0 * m * (m + 1) * math.pi ** m * val


def calabi_oracle(H: Callable, m: int, samples: int, seed,
                  radius: float = 1.0) -> tuple[float, float]:
    """Monte Carlo route: (m+1) Int_B H omega^m = (m+1) pi^m mean_B(H) on the
    unit ball (the wedge power contributes m! against V(B) = pi^m / m!).

    Returns (estimate, standard error); deterministic for a fixed seed.
    """
    if samples < 10_000:
        raise InputError("need at least 10^4 samples")
    total = 0.0
    total_sq = 0.0
    count = 0
    for pts in uniform_ball(m, samples, seed, radius=radius):
        vals = np.asarray(H(pts), dtype=float)
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals * vals))
        count += vals.size
    mean = total / count
    var = max(total_sq / count - mean * mean, 0.0)
    factor = (m + 1) * math.pi ** m * radius ** (2 * m)
    return factor * mean, factor * math.sqrt(var / count)
