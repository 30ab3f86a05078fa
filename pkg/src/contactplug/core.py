"""Coordinates on the 2m-ball, the standard primitive and symplectic pairing,
and the angular-sector geometry used by the packing and sphere modules.

Points are real arrays of length 2m laid out (x_1, y_1, ..., x_m, y_m); the
complex view has z_i = x_i + i*y_i.  All functions accept batches with the
coordinate axis last.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


class InputError(ValueError):
    """Bad argument (dimension mismatch, out-of-range parameter)."""


def as_complex(z: np.ndarray) -> np.ndarray:
    """(..., 2m) real -> (..., m) complex."""
    z = np.asarray(z, dtype=float)
    if z.shape[-1] % 2:
        raise InputError(f"odd coordinate count {z.shape[-1]}")
    return z[..., 0::2] + 1j * z[..., 1::2]


def as_real(w: np.ndarray) -> np.ndarray:
    """(..., m) complex -> (..., 2m) real, interleaved."""
    w = np.asarray(w, dtype=complex)
    out = np.empty(w.shape[:-1] + (2 * w.shape[-1],), dtype=float)
    out[..., 0::2] = w.real
    out[..., 1::2] = w.imag
    return out


def norm_sq(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    return np.sum(z * z, axis=-1)


def rotate(z: np.ndarray, angle) -> np.ndarray:
    """Multiply every complex coordinate by e^{i*angle} (Hopf rotation)."""
    w = as_complex(z)
    phase = np.exp(1j * np.asarray(angle))
    return as_real(w * phase[..., None] if np.ndim(angle) else w * phase)


def lambda_eval(z: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Standard primitive (1/2) sum(x_i dy_i - y_i dx_i) at z applied to v."""
    z = np.asarray(z, dtype=float)
    v = np.asarray(v, dtype=float)
    if z.shape[-1] != v.shape[-1] or z.shape[-1] % 2:
        raise InputError(f"dimension mismatch: z has {z.shape[-1]}, v has {v.shape[-1]}")
    x, y = z[..., 0::2], z[..., 1::2]
    vx, vy = v[..., 0::2], v[..., 1::2]
    return 0.5 * np.sum(x * vy - y * vx, axis=-1)


def omega_pair(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Standard symplectic pairing sum(dx_i ^ dy_i) on (u, v)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape[-1] != v.shape[-1] or u.shape[-1] % 2:
        raise InputError(f"dimension mismatch: u has {u.shape[-1]}, v has {v.shape[-1]}")
    ux, uy = u[..., 0::2], u[..., 1::2]
    vx, vy = v[..., 0::2], v[..., 1::2]
    return np.sum(ux * vy - uy * vx, axis=-1)


@dataclass(frozen=True)
class SectorGeometry:
    """m complex coordinates split into n angular sectors of the last one.

    Sector k (1-based) is arg(z_m) in ((k-1)*2pi/n, k*2pi/n), open: points with
    z_m = 0 or arg exactly on a wall belong to no sector.
    """

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise InputError(f"need m >= 1 and n >= 1, got m={self.m}, n={self.n}")

    @property
    def width(self) -> float:
        return TWO_PI / self.n

    def last_coord(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if z.shape[-1] != 2 * self.m:
            raise InputError(f"expected {2 * self.m} coordinates, got {z.shape[-1]}")
        return z[..., -2] + 1j * z[..., -1]


def sector_index(geom: SectorGeometry, z: np.ndarray) -> np.ndarray:
    """Vectorized sector lookup; -1 where undefined (z_m = 0 or on a wall)."""
    zm = geom.last_coord(z)
    theta = np.mod(np.angle(zm), TWO_PI)
    frac = theta / geom.width
    k = np.floor(frac).astype(int)
    on_wall = (frac == np.floor(frac)) | (np.abs(zm) == 0.0)
    out = np.where(on_wall, -1, k + 1)
    return out


def sector_membership(geom: SectorGeometry, z: np.ndarray):
    """Sector index in 1..n for a single point strictly inside the unit ball,
    or None on the deleted axis / a wall."""
    z = np.asarray(z, dtype=float)
    if norm_sq(z) >= 1.0:
        raise InputError("point not strictly inside the unit ball")
    k = int(sector_index(geom, z))
    return None if k < 0 else k


def _wall_distance(zm: np.ndarray, gap: np.ndarray) -> np.ndarray:
    """Planar distance from z_m to a wall ray at angular separation gap.

    Exact for gap <= pi/2; beyond that the nearest wall point is the origin,
    so |z_m| is exact as well.  Clamping keeps the formula conservative.
    """
    return np.abs(zm) * np.sin(np.minimum(gap, 0.5 * np.pi))


def ball_margins(geom: SectorGeometry, centers: np.ndarray, radii: np.ndarray,
                 outer_radius: float = 1.0):
    """Vectorized (margin, sector) for closed balls around interior centers.

    margin > 0 certifies each closed ball lies in its center's open sector and
    strictly inside the ball of ``outer_radius``.  Centers on a wall get
    sector -1 and margin -inf.
    """
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    radii = np.asarray(radii, dtype=float)
    zm = geom.last_coord(centers)
    theta = np.mod(np.angle(zm), TWO_PI)
    frac = theta / geom.width
    k = np.floor(frac).astype(int)
    lo = frac - k              # angular gap to the lower wall, in sector widths
    gap_lo = lo * geom.width
    gap_hi = geom.width - gap_lo
    d_out = outer_radius - np.sqrt(norm_sq(centers)) - radii
    d_lo = _wall_distance(zm, gap_lo) - radii
    d_hi = _wall_distance(zm, gap_hi) - radii
    margin = np.minimum(d_out, np.minimum(d_lo, d_hi))
    bad = (gap_lo == 0.0) | (np.abs(zm) == 0.0)
    margin = np.where(bad, -np.inf, margin)
    sector = np.where(bad, -1, k + 1)
    return margin, sector


def ball_in_sector_margin(geom: SectorGeometry, center: np.ndarray, radius: float,
                          outer_radius: float = 1.0) -> float:
    """Conservative containment margin for one closed ball (see ball_margins).

    Raises if the center sits on a sector wall (no sector to test against).
    """
    if radius <= 0:
        raise InputError("radius must be positive")
    margin, sector = ball_margins(geom, center, np.asarray([radius]), outer_radius)
    if sector[0] < 0:
        raise InputError("center lies on a sector wall or the deleted axis")
    return float(margin[0])
