"""Assembly and certification of the mapping-torus plug over the 2m-ball.

The time-one return map is a global sector rotation composed with negative
bumps on packed balls.  Bumps are stored for one sector only; the 1/n turn is
an exact isometry closing the family, so membership queries reduce a point to
sector 1 instead of materializing n copies.  Everything the certificates need
(actions, volumes, return times) is closed form; grids and Monte Carlo appear
only as independent evidence, never as the definition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .certificates import Certificate, Check
from .core import (InputError, SectorGeometry, as_complex, as_real, norm_sq,
                   rotate, sector_index)
from .cutoffs import CutoffChi, build_chi
from .packing import BallFamily, pack_sector
from .radial import (Isotopy, RadialHamiltonian, ScaledProfile, calabi_radial,
                     radial_velocity)
from .sampling import stratified_ball_grid, uniform_ball


@dataclass(frozen=True)
class PlugParams:
    """Knobs for one plug build; c defaults to L - (L+pi)/n."""

    m: int
    L: float
    n: int
    delta: float
    epsilon_chi: float
    rho_target: float
    eps_volume: float
    seed: int
    c: float | None = None
    max_balls: int = 40_000
    levels: int = 8
    level_factor: float = 0.5
    topoff: bool = True

    def strength(self) -> float:
        return self.L - (self.L + math.pi) / self.n if self.c is None else self.c

    def validate(self):
        if self.m < 1:
            raise InputError("m must be >= 1")
        if self.n < 2:
            raise InputError("n must be >= 2")
        if self.L <= 0 or self.eps_volume <= 0:
            raise InputError("L and eps_volume must be positive")
        for name, v in (("delta", self.delta), ("epsilon_chi", self.epsilon_chi)):
            if not 0 < v < 0.5:
                raise InputError(f"{name} must lie in (0, 1/2)")
        if self.strength() <= 0:
            raise InputError(
                f"bump strength c = {self.strength():.6g} must be positive; "
                "increase n")

    def to_dict(self) -> dict:
        return {"m": self.m, "L": self.L, "n": self.n, "delta": self.delta,
                "epsilon_chi": self.epsilon_chi, "rho_target": self.rho_target,
                "eps_volume": self.eps_volume, "seed": self.seed,
                "c": self.strength(), "max_balls": self.max_balls,
                "levels": self.levels, "level_factor": self.level_factor,
                "topoff": self.topoff}


@dataclass
class PlugDescriptor:
    """Evaluable return map phi^t = (sector rotation)^t o (bumps)^t on r*B."""

    params: PlugParams
    hplus: RadialHamiltonian
    chi_eps: CutoffChi
    sector_centers: np.ndarray
    sector_radii: np.ndarray
    strength: float
    ambient: float = 1.0
    family: BallFamily | None = None
    _levels: list = field(default_factory=list, repr=False)
    _geom: SectorGeometry = field(default=None, repr=False)

    def __post_init__(self):
        m = self.params.m
        self.sector_centers = np.asarray(self.sector_centers, dtype=float) \
            .reshape(-1, 2 * m)
        self.sector_radii = np.asarray(self.sector_radii, dtype=float).reshape(-1)
        self._geom = SectorGeometry(m, self.params.n)
        self._levels = []
        for r in sorted(set(self.sector_radii.tolist()), reverse=True):
            idx = np.nonzero(self.sector_radii == r)[0]
            self._levels.append((float(r), idx, cKDTree(self.sector_centers[idx])))

    # -- geometry ----------------------------------------------------------
    @property
    def m(self) -> int:
        return self.params.m

    @property
    def total_balls(self) -> int:
        return int(self.sector_radii.size) * self.params.n

    @property
    def bulk_sq(self) -> float:
        """Squared radius of the rigid-rotation core B(0, sqrt(1-2delta))."""
        return (1.0 - 2.0 * self.params.delta) * self.ambient ** 2

    @property
    def support_sq(self) -> float:
        """phi is the identity outside this squared radius."""
        return (1.0 - 0.5 * self.params.delta) * self.ambient ** 2

    def _resolve(self, pts: np.ndarray):
        """(hit mask, center, radius) of the containing ball per point.

        A point in sector k can only sit in a sector-k ball (balls have
        strictly positive wall margins), so rotate it back to sector 1, query
        there, and rotate the matched center forward.
        """
        pts = np.atleast_2d(pts)
        N = pts.shape[0]
        hit = np.zeros(N, dtype=bool)
        centers = np.zeros_like(pts)
        radii = np.ones(N)
        if self.sector_radii.size == 0:
            return hit, centers, radii
        k = sector_index(self._geom, pts)
        cand = k >= 1
        if not np.any(cand):
            return hit, centers, radii
        angle = (k[cand] - 1) * self._geom.width
        reduced = rotate(pts[cand], -angle)
        sub_hit = np.zeros(reduced.shape[0], dtype=bool)
        sub_c = np.zeros_like(reduced)
        sub_r = np.ones(reduced.shape[0])
        for r, idx, tree in self._levels:
            d, j = tree.query(reduced, k=1, distance_upper_bound=r)
            sel = (d < r) & ~sub_hit
            if np.any(sel):
                sub_hit[sel] = True
                sub_c[sel] = self.sector_centers[idx[j[sel]]]
                sub_r[sel] = r
        if np.any(sub_hit):
            rot_back = rotate(sub_c[sub_hit], angle[sub_hit])
            rows = np.nonzero(cand)[0][sub_hit]
            hit[rows] = True
            centers[rows] = rot_back
            radii[rows] = sub_r[sub_hit]
        return hit, centers, radii

    def max_center_norm_radius_product(self) -> float:
        if self.sector_radii.size == 0:
            return 0.0
        return float(np.max(self.sector_radii
                            * np.linalg.norm(self.sector_centers, axis=1)))

    # -- bump half ---------------------------------------------------------
    def map_minus(self, t, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if np.ndim(t) and z.ndim == 1:
            hit, c, r = self._resolve(z[None, :])
            if not hit[0]:
                return np.broadcast_to(z, (np.size(t), z.size)).copy()
            c, r = c[0], float(r[0])
            u = z - c
            rho = norm_sq(u) / r ** 2
            rate = 2.0 * self.strength * float(self.chi_eps.deriv(rho)) / r ** 2
            phase = np.exp(1j * rate * np.asarray(t, dtype=float))
            return c + as_real(phase[:, None] * as_complex(u)[None, :])
        single = z.ndim == 1
        pts = np.atleast_2d(z)
        hit, c, r = self._resolve(pts)
        out = pts.copy()
        if np.any(hit):
            u = pts[hit] - c[hit]
            rr = r[hit]
            rho = norm_sq(u) / rr ** 2
            rate = 2.0 * self.strength * np.asarray(self.chi_eps.deriv(rho)) / rr ** 2
            phase = np.exp(1j * rate * float(t))
            out[hit] = c[hit] + as_real(phase[:, None] * as_complex(u))
        return out[0] if single else out

    def sigma_minus(self, t, z: np.ndarray):
        z = np.asarray(z, dtype=float)
        if np.ndim(t) and z.ndim == 1:
            sweep = self.sigma_sweep(z[None, :], np.asarray(t, dtype=float),
                                     minus_only=True)
            return sweep[:, 0]
        single = z.ndim == 1
        pts = np.atleast_2d(z)
        hit, c, r = self._resolve(pts)
        out = np.zeros(pts.shape[0])
        if np.any(hit):
            out[hit] = self._sigma_minus_resolved(float(t), pts[hit], c[hit], r[hit])
        return float(out[0]) if single else out

    def _sigma_minus_resolved(self, t, pts, c, r):
        u = pts - c
        rho = norm_sq(u) / r ** 2
        chi_v = np.asarray(self.chi_eps.eval(rho))
        chi_d = np.asarray(self.chi_eps.deriv(rho))
        sig_tilde = -self.strength * t * (chi_v - rho * chi_d)
        rate = 2.0 * self.strength * chi_d / r ** 2
        phase = np.exp(1j * rate * t)
        uc, cc = as_complex(u), as_complex(c)
        moved = phase[:, None] * uc
        eta0 = 0.5 * np.sum(uc.imag * cc.real - uc.real * cc.imag, axis=-1)
        eta1 = 0.5 * np.sum(moved.imag * cc.real - moved.real * cc.imag, axis=-1)
        return sig_tilde + eta1 - eta0

    # -- rotation half ------------------------------------------------------
    def map_plus(self, t, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        r2 = norm_sq(z)
        angle = -2.0 * np.asarray(self.hplus.hp(r2)) * np.asarray(t, dtype=float)
        if np.ndim(t) and z.ndim == 1:
            return as_real(np.exp(1j * angle)[:, None] * as_complex(z)[None, :])
        return rotate(z, angle)

    def sigma_plus(self, t, z: np.ndarray):
        r2 = norm_sq(z)
        h = np.asarray(self.hplus.h(r2))
        hp = np.asarray(self.hplus.hp(r2))
        return np.asarray(t, dtype=float) * (h - r2 * hp)

    # -- composition ---------------------------------------------------------
    def map(self, t, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if np.ndim(t) and z.ndim == 1:
            ts = np.asarray(t, dtype=float)
            inner = self.map_minus(ts, z)      # (T, 2m)
            r2 = norm_sq(inner)
            angle = -2.0 * np.asarray(self.hplus.hp(r2)) * ts
            return as_real(np.exp(1j * angle)[:, None] * as_complex(inner))
        return self.map_plus(t, self.map_minus(t, z))

    def inverse(self, t, z: np.ndarray) -> np.ndarray:
        return self.map_minus(-t, self.map_plus(-t, z))

    def sigma(self, t, z: np.ndarray):
        """Action of the composed time-t map: sigma_+ o phi_- + sigma_-."""
        z = np.asarray(z, dtype=float)
        if np.ndim(t) and z.ndim == 1:
            sweep = self.sigma_sweep(z[None, :], np.asarray(t, dtype=float))
            return sweep[:, 0]
        inner = self.map_minus(t, z)
        return self.sigma_plus(t, inner) + self.sigma_minus(t, z)

    def tau(self, z: np.ndarray):
        return self.params.L + self.sigma(1.0, z)

    def sigma_sweep(self, pts: np.ndarray, ts: np.ndarray,
                    minus_only: bool = False) -> np.ndarray:
        """sigma_{phi^t}(z) on a (t, z) product grid, shape (T, N).

        Ball membership is resolved once per point; the t dependence is the
        closed-form rotation about each center.
        """
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        ts = np.asarray(ts, dtype=float)
        hit, c, r = self._resolve(pts)
        out = np.empty((ts.size, pts.shape[0]))

        free = pts[~hit]
        if minus_only:
            out[:, ~hit] = 0.0
        else:
            r2 = norm_sq(free)
            dens = np.asarray(self.hplus.h(r2)) - r2 * np.asarray(self.hplus.hp(r2))
            out[:, ~hit] = ts[:, None] * dens[None, :]

        if np.any(hit):
            ch, rh = c[hit], r[hit]
            u = pts[hit] - ch
            rho = norm_sq(u) / rh ** 2
            chi_v = np.asarray(self.chi_eps.eval(rho))
            chi_d = np.asarray(self.chi_eps.deriv(rho))
            rate = 2.0 * self.strength * chi_d / rh ** 2
            phase = np.exp(1j * np.outer(ts, rate))            # (T, Nh)
            uc = as_complex(u)
            cc = as_complex(ch)
            moved = phase[:, :, None] * uc[None, :, :]          # rotated offsets
            eta0 = 0.5 * np.sum(uc.imag * cc.real - uc.real * cc.imag, axis=-1)
            eta1 = 0.5 * np.sum(moved.imag * cc.real[None] - moved.real * cc.imag[None],
                                axis=-1)
            sig_minus = -self.strength * ts[:, None] * (chi_v - rho * chi_d)[None, :] \
                + eta1 - eta0[None, :]
            if minus_only:
                out[:, hit] = sig_minus
            else:
                inner = moved + cc[None, :, :]
                r2_t = np.sum(inner.real ** 2 + inner.imag ** 2, axis=-1)
                dens_t = np.asarray(self.hplus.h(r2_t)) \
                    - r2_t * np.asarray(self.hplus.hp(r2_t))
                out[:, hit] = ts[:, None] * dens_t + sig_minus
        return out

    # -- generator of the composed isotopy -----------------------------------
    def hamiltonian(self, t, pos: np.ndarray):
        """Generator at time t evaluated at pos: H_+ + H_- o (phi_+^t)^{-1}."""
        pos = np.atleast_2d(np.asarray(pos, dtype=float))
        r2 = norm_sq(pos)
        h = np.asarray(self.hplus.h(r2))
        angle = 2.0 * np.asarray(self.hplus.hp(r2)) * np.asarray(t, dtype=float)
        pre = as_real(np.exp(1j * np.atleast_1d(angle))[:, None] * as_complex(pos))
        hit, c, r = self._resolve(pre)
        kv = np.zeros(pos.shape[0])
        if np.any(hit):
            rho = norm_sq(pre[hit] - c[hit]) / r[hit] ** 2
            kv[hit] = -self.strength * np.asarray(self.chi_eps.eval(rho))
        return h + kv

    def velocity(self, t, pos: np.ndarray) -> np.ndarray:
        """Exact trajectory speed at pos = map(t, z).

        On the rigid-rotation core the plus map is linear, so the bump field
        pushes forward by the same rotation; outside the core there are no
        bumps and only the radial term remains.
        """
        pos = np.asarray(pos, dtype=float)
        single = pos.ndim == 1
        pos = np.atleast_2d(pos)
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        v = radial_velocity(self.hplus, pos)
        r2 = norm_sq(pos)
        core = r2 < self.bulk_sq
        if np.any(core):
            theta = (2.0 * math.pi / self.params.n) * ts
            theta = np.broadcast_to(theta, r2.shape)[core]
            pre = as_real(np.exp(-1j * theta)[:, None] * as_complex(pos[core]))
            hit, c, r = self._resolve(pre)
            if np.any(hit):
                u = pre[hit] - c[hit]
                rho = norm_sq(u) / r[hit] ** 2
                rate = 2.0 * self.strength * np.asarray(self.chi_eps.deriv(rho)) \
                    / r[hit] ** 2
                fwd = np.exp(1j * theta[hit])[:, None] * (1j * rate[:, None] * as_complex(u))
                sub = np.zeros((int(np.sum(core)), pos.shape[1]))
                sub[hit] = as_real(fwd)
                v[core] += sub
        return v[0] if single else v

    def isotopy_at(self, z: np.ndarray) -> Isotopy:
        """Isotopy view for one base point, with a rotation-rate hint that
        makes the line-integral oracle refine its quadrature inside bumps."""
        z = np.asarray(z, dtype=float)
        rate = 2.0 * math.pi / self.params.n
        hit, c, r = self._resolve(z[None, :])
        if hit[0]:
            rho = norm_sq(z - c[0]) / float(r[0]) ** 2
            rate += abs(float(2.0 * self.strength * self.chi_eps.deriv(rho))) \
                / float(r[0]) ** 2
        return Isotopy(map=self.map, ham=self.hamiltonian,
                       velocity=self.velocity, suggested_rate=rate)

    # -- invariants ---------------------------------------------------------
    def calabi_plus(self) -> float:
        return calabi_radial(self.hplus)

    def calabi_minus(self) -> float:
        if self.sector_radii.size == 0:
            return 0.0
        prof = ScaledProfile(self.chi_eps, value_scale=-self.strength)
        unit = RadialHamiltonian(m=self.m, profile=prof)
        per_unit = calabi_radial(unit)
        return float(per_unit * self.params.n
                     * np.sum(self.sector_radii ** (2 * self.m)))

    def calabi(self) -> float:
        return self.calabi_plus() + self.calabi_minus()

    def ledger_volume(self) -> float:
        return self.params.L * math.pi ** self.m * self.ambient ** (2 * self.m) \
            + self.calabi()


def build_plug(params: PlugParams) -> PlugDescriptor:
    """Pack one sector and assemble the evaluable return map."""
    params.validate()
    chi_delta = build_chi(params.delta)
    chi_eps = build_chi(params.epsilon_chi)
    hplus = RadialHamiltonian(m=params.m, profile=chi_delta,
                              scale=math.pi / params.n)
    if params.rho_target > 0:
        family = pack_sector(params.m, params.n, params.rho_target, params.delta,
                             max_balls=params.max_balls, seed=params.seed,
                             levels=params.levels, topoff=params.topoff,
                             level_factor=params.level_factor)
    else:
        family = BallFamily(params.m, params.n, params.delta,
                            np.zeros((0, 2 * params.m)), np.zeros(0),
                            params.seed, 0.0, sectors=1)
    return PlugDescriptor(params=params, hplus=hplus, chi_eps=chi_eps,
                          sector_centers=family.centers,
                          sector_radii=family.radii,
                          strength=params.strength(), family=family)


def plug_grid(plug: PlugDescriptor, size: int, seed: int = 0) -> np.ndarray:
    """Verification sweep: low-discrepancy ball points densified on the radii
    where the bounds are tight, plus cores of a seeded subset of bumps spread
    over all sectors."""
    p = plug.params
    shells = [math.sqrt(plug.bulk_sq), math.sqrt(plug.support_sq)]
    n_bump = min(500, plug.sector_radii.size)
    base = stratified_ball_grid(p.m, size - 2 * n_bump, shell_radii=shells,
                                seed=seed, radius=plug.ambient)
    if n_bump == 0:
        return base
    rng = np.random.default_rng(np.random.SeedSequence((seed, 77)))
    pick = rng.choice(plug.sector_radii.size, size=n_bump, replace=False)
    turns = rng.integers(0, p.n, size=n_bump)
    centers = rotate(plug.sector_centers[pick],
                     turns * (2.0 * math.pi / p.n))
    dirs = rng.standard_normal((n_bump, 2 * p.m))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    inner = centers + dirs * (plug.sector_radii[pick] * math.sqrt(
        max(1.0 - 2.0 * p.epsilon_chi, 0.25)) * 0.7)[:, None]
    return np.concatenate([base, centers, inner])


def verify_b1_to_b4(plug: PlugDescriptor, t_grid: int = 100, z_grid: int = 10_000,
                    seed: int = 0) -> Certificate:
    """Grid plus analytic certification of the four return-map properties."""
    if t_grid < 100 or z_grid < 10_000:
        raise InputError("grids must be at least 10^2 x 10^4")
    p = plug.params
    c = plug.strength
    cert = Certificate(name="plug.b1_b4", params=p.to_dict(), seed=seed)
    pts = plug_grid(plug, z_grid, seed=seed)
    ts = np.linspace(0.0, 1.0, t_grid)

    sweep = plug.sigma_sweep(pts, ts)
    sig_min = float(np.min(sweep))
    sig_max = float(np.max(sweep))
    tau_min_t = sig_min + p.L
    floor = -p.L + p.L / p.n

    corr_max = plug.max_center_norm_radius_product()
    analytic_lo = -c - math.pi / p.n * plug.ambient ** 2
    cert.add(Check(
        name="b1.analytic_chain",
        passed=bool(analytic_lo >= floor - 1e-12
                    and corr_max <= math.pi / p.n * plug.ambient ** 2 + 1e-15),
        claimed="sigma >= -c - pi/n >= -L + L/n from the component bounds",
        measured=analytic_lo,
        tol=1e-12,
        evidence={"floor": floor, "eta_correction_max": corr_max,
                  "eta_correction_bound": math.pi / p.n * plug.ambient ** 2},
    ))
    cert.add(Check(
        name="b1.grid_min",
        passed=bool(sig_min >= floor - 1e-9),
        claimed="min sigma_{phi^t} over the (t,z) grid >= -L + L/n - 1e-9",
        measured=sig_min,
        tol=1e-9,
        evidence={"t_grid": t_grid, "z_grid": int(pts.shape[0]), "seed": seed,
                  "floor": floor, "balls": plug.total_balls},
    ))
    cert.add(Check(
        name="b1.grid_max",
        passed=bool(sig_max <= 2.0 * math.pi / p.n * plug.ambient ** 2 + 1e-9),
        claimed="max sigma_{phi^t} <= 2 pi / n",
        measured=sig_max,
        tol=1e-9,
        mandatory=False,
    ))
    cert.add(Check(
        name="tau.positive",
        passed=bool(tau_min_t > 0.0 and p.L + analytic_lo > 0.0),
        claimed="tau_t = sigma_{phi^t} + L > 0 for all t (grid and analytic)",
        measured=tau_min_t,
        evidence={"analytic_min": p.L + analytic_lo},
    ))

    cal = plug.calabi()
    budget = cal + p.L * math.pi ** p.m * plug.ambient ** (2 * p.m)
    cert.add(Check(
        name="b2.volume_budget",
        passed=bool(budget <= p.eps_volume),
        claimed=f"CAL(phi) + L pi^m <= eps = {p.eps_volume}",
        measured=budget,
        evidence={"calabi_plus": plug.calabi_plus(),
                  "calabi_minus": plug.calabi_minus()},
    ))

    # b3: structural fixed set = origin and the region past the support
    origin = np.zeros(2 * p.m)
    sig0 = float(plug.sigma(1.0, origin))
    expect0 = (math.pi / p.n) * (1.0 - p.delta) * plug.ambient ** 2
    outer_r = np.sqrt(np.linspace(plug.support_sq + 1e-9 * plug.ambient ** 2,
                                  plug.ambient ** 2 * (1 - 1e-9), 64))
    ang = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    dirs = np.zeros((64, 2 * p.m))
    dirs[:, 0], dirs[:, 1] = np.cos(ang), np.sin(ang)
    outer_pts = dirs * outer_r[:, None]
    sig_outer = np.asarray(plug.sigma(1.0, outer_pts))
    disp_outer = float(np.max(np.linalg.norm(plug.map(1.0, outer_pts) - outer_pts,
                                             axis=1)))
    cert.add(Check(
        name="b3.fixed_point_actions",
        passed=bool(abs(sig0 - expect0) <= 1e-12 and sig0 >= 0.0
                    and float(np.max(np.abs(sig_outer))) == 0.0
                    and disp_outer == 0.0),
        claimed="sigma(0) = (pi/n)(1-delta) >= 0; boundary zone fixed with zero action",
        measured=sig0,
        evidence={"expected_origin": expect0,
                  "outer_sigma_max": float(np.max(np.abs(sig_outer))),
                  "outer_displacement": disp_outer},
    ))
    core = norm_sq(pts) <= plug.bulk_sq
    probe = pts[core & (norm_sq(pts) > (0.05 * plug.ambient) ** 2)]
    disp = np.linalg.norm(plug.map(1.0, probe) - probe, axis=1)
    disp_floor = float(np.min(disp)) if disp.size else math.inf
    cert.add(Check(
        name="b3.displacement_floor",
        passed=bool(probe.shape[0] > 0 and disp_floor > 0.0),
        claimed="no fixed points on the rotation core away from the origin",
        measured=disp_floor,
        evidence={"points": int(probe.shape[0]),
                  "rigid_rotation_floor": 2.0 * math.sin(math.pi / p.n)
                  * 0.05 * plug.ambient},
    ))

    # b4: the sector index advances by exactly one on the core
    geom = SectorGeometry(p.m, p.n)
    before = sector_index(geom, probe)
    after = sector_index(geom, plug.map(1.0, probe))
    defined = before >= 1
    expected = np.where(before[defined] == p.n, 1, before[defined] + 1)
    advance_ok = bool(np.all(after[defined] == expected)) if np.any(defined) else True
    angle_cap_ok = bool(np.all(np.asarray(plug.hplus.profile.deriv(
        np.linspace(0, 1, 1001))) >= -1.0 - 1e-15))
    cert.add(Check(
        name="b4.sector_advance",
        passed=bool(advance_ok and angle_cap_ok),
        claimed="phi advances the sector index by exactly 1 (mod n) on the core, "
                "and the rotation angle is capped by 2 pi / n, so periods are >= n",
        measured=int(np.sum(defined)),
        evidence={"advancing_points": int(np.sum(defined)),
                  "angle_cap_verified": angle_cap_ok},
    ))
    cert.params["min_tau_grid"] = tau_min_t
    return cert


def torus_volume(plug: PlugDescriptor) -> float:
    """Contact volume ledger L pi^m r^(2m) + CAL(phi)."""
    return plug.ledger_volume()


def torus_volume_certificate(plug: PlugDescriptor, mc_samples: int = 1_000_000,
                             seed: int = 0):
    """Ledger value plus the Fubini cross-check Int tau omega^m by Monte Carlo."""
    closed = plug.ledger_volume()
    total, total_sq, count = 0.0, 0.0, 0
    for pts in uniform_ball(plug.m, mc_samples, seed, radius=plug.ambient):
        vals = plug.params.L + np.asarray(plug.sigma(1.0, pts))
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals * vals))
        count += vals.size
    mean = total / count
    var = max(total_sq / count - mean * mean, 0.0)
    factor = math.pi ** plug.m * plug.ambient ** (2 * plug.m)
    mc = factor * mean
    se = factor * math.sqrt(var / count)
    check = Check(
        name="volume.two_routes",
        passed=bool(abs(closed - mc) <= 3.0 * se + 1e-12),
        claimed="ledger L pi^m + CAL agrees with Monte Carlo Int tau omega^m within 3 SE",
        measured=closed,
        tol=3.0 * se,
        evidence={"mc": mc, "se": se, "samples": mc_samples, "seed": seed},
    )
    return closed, mc, se, check


def min_period_bound(plug: PlugDescriptor, b_cert: Certificate) -> tuple[float, dict]:
    """Certified floor on closed-orbit periods, from the verified b-properties.

    Fixed-point branch: tau at the structural fixed set.  Orbit branch: any
    other periodic point needs at least n returns, each costing at least
    L - c - pi/n analytically (grid minimum reported as evidence).
    """
    needed = {"b1.analytic_chain", "b1.grid_min", "b3.fixed_point_actions",
              "b3.displacement_floor", "b4.sector_advance"}
    have = {c.name for c in b_cert.checks if c.passed}
    missing = needed - have
    if missing:
        raise InputError(f"prerequisite checks not passed: {sorted(missing)}")
    p = plug.params
    tau0 = p.L + float(plug.sigma(1.0, np.zeros(2 * p.m)))
    fixed_branch = min(tau0, p.L)  # boundary-zone fixed points have tau = L
    analytic_tau_min = p.L - plug.strength - math.pi / p.n * plug.ambient ** 2
    orbit_branch = p.n * analytic_tau_min
    grid_branch = p.n * float(b_cert.params.get("min_tau_grid", math.nan))
    bound = min(fixed_branch, orbit_branch)
    return bound, {"fixed_branch": fixed_branch, "orbit_branch_analytic": orbit_branch,
                   "orbit_branch_grid": grid_branch, "tau_origin": tau0}


def rescale_plug(plug: PlugDescriptor, r: float, check_points: int = 100,
                 seed: int = 5):
    """The same plug on the ball of radius r with the dilation-conjugated map.

    Returns (descriptor, checks): the action law sigma_r(r z) = r^2 sigma(z)
    is verified pointwise and the volume-wedge law CAL_r = r^(2m+2) CAL by
    quadrature.
    """
    if r <= 0:
        raise InputError("scale factor must be positive")
    base = plug.params
    prof = ScaledProfile(plug.hplus.profile, value_scale=r * r, arg_scale=r * r)
    hplus_r = RadialHamiltonian(m=base.m, profile=prof, scale=plug.hplus.scale,
                                ambient_sq=plug.hplus.ambient_sq * r * r)
    scaled = PlugDescriptor(
        params=base, hplus=hplus_r, chi_eps=plug.chi_eps,
        sector_centers=plug.sector_centers * r, sector_radii=plug.sector_radii * r,
        strength=plug.strength * r * r, ambient=plug.ambient * r, family=None)

    m = base.m
    pts = np.concatenate(list(uniform_ball(m, max(check_points, 100), seed,
                                           radius=0.999 * plug.ambient)))[:check_points]
    lhs = np.asarray(scaled.sigma(1.0, pts * r))
    rhs = r * r * np.asarray(plug.sigma(1.0, pts))
    err = float(np.max(np.abs(lhs - rhs)))
    checks = [Check(
        name="rescale.action_law",
        passed=bool(err <= 1e-12),
        claimed="sigma_{phi_r}(r z) = r^2 sigma_phi(z)",
        measured=err,
        tol=1e-12,
        evidence={"points": check_points, "r": r, "seed": seed},
    )]
    cal_r = scaled.calabi()
    cal = plug.calabi()
    rel = abs(cal_r - r ** (2 * m + 2) * cal) / max(abs(cal_r), 1e-300)
    checks.append(Check(
        name="rescale.calabi_law",
        passed=bool(rel <= 1e-9),
        claimed="CAL(phi_r) = r^(2m+2) CAL(phi), by quadrature",
        measured=rel,
        tol=1e-9,
        evidence={"cal": cal, "cal_r": cal_r, "r": r},
    ))
    vol_r = scaled.ledger_volume()
    ledger = base.L * math.pi ** m * (plug.ambient * r) ** (2 * m) + cal_r
    checks.append(Check(
        name="rescale.volume_ledger",
        passed=bool(abs(vol_r - ledger) <= 1e-12 * max(1.0, abs(ledger))),
        claimed="vol = L pi^m r^(2m) + CAL(phi_r) on the rescaled torus",
        measured=vol_r,
        evidence={"ledger": ledger},
    ))
    return scaled, checks


# ---------------------------------------------------------------------------
# primitive shift: beta' = beta + d(chi u) on the collar
# ---------------------------------------------------------------------------

def _pfaffian(A: np.ndarray) -> float:
    n = A.shape[0]
    if n == 0:
        return 1.0
    if n % 2:
        return 0.0
    if n == 2:
        return float(A[0, 1])
    total = 0.0
    rest = list(range(1, n))
    for pos, j in enumerate(rest):
        sub = [k for k in rest if k != j]
        minor = A[np.ix_(sub, sub)]
        total += (-1.0) ** pos * float(A[0, j]) * _pfaffian(minor)
    return total


def _top_form_density(a: np.ndarray, W: np.ndarray, m: int) -> float:
    """(alpha ^ Omega^m)(e_0, ..., e_2m) for 1-form a and 2-form matrix W."""
    n = a.size
    total = 0.0
    for i in range(n):
        keep = [k for k in range(n) if k != i]
        total += (-1.0) ** i * float(a[i]) * math.factorial(m) \
            * _pfaffian(W[np.ix_(keep, keep)])
    return total


def primitive_shift_check(plug: PlugDescriptor, u, grad_u, chi_cut,
                          sample_count: int = 200, seed: int = 11,
                          fd_step: float = 1e-5):
    """Verify that shifting the primitive by d(chi u) preserves the contact
    volume density on the collar and restores lambda' + ds where chi = 1.

    u, grad_u: the potential and its exact gradient on the ball; chi_cut: a
    radial step (0 inside lo, 1 outside hi) with eval/deriv on the radius.
    """
    m = plug.m
    amb = plug.ambient
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    d = 2 * m
    dirs = rng.standard_normal((sample_count, d))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = rng.uniform(0.05 * amb, 0.999 * amb, sample_count)
    pts = dirs * radii[:, None]

    def beta_prime(zs):
        """Components of beta' = ds + lambda + d(chi u) over (s, z)."""
        zs = np.atleast_2d(zs)
        rr = np.sqrt(norm_sq(zs))
        chi_v = np.asarray(chi_cut.eval(rr))
        chi_d = np.asarray(chi_cut.deriv(rr))
        uu = np.asarray(u(zs))
        gu = np.asarray(grad_u(zs))
        lam = np.empty_like(zs)
        lam[:, 0::2] = -0.5 * zs[:, 1::2]
        lam[:, 1::2] = 0.5 * zs[:, 0::2]
        dz = lam + chi_d[:, None] * (zs / np.maximum(rr, 1e-300)[:, None]) * uu[:, None] \
            + chi_v[:, None] * gu
        out = np.empty((zs.shape[0], d + 1))
        out[:, 0] = 1.0
        out[:, 1:] = dz
        return out

    worst_density = 0.0
    worst_reeb = 0.0
    for z in pts:
        a = beta_prime(z)[0]
        W = np.zeros((d + 1, d + 1))
        for i in range(d):
            e = np.zeros(d)
            e[i] = fd_step
            fp = beta_prime(z + e)[0]
            fm = beta_prime(z - e)[0]
            W[i + 1, :] = (fp - fm) / (2 * fd_step)
        W = W - W.T  # antisymmetrize: dbeta'_{ij} = d_i a_j - d_j a_i
        dens = _top_form_density(a, W, m)
        worst_density = max(worst_density, abs(dens - math.factorial(m)))
        worst_reeb = max(worst_reeb, float(np.max(np.abs(W[0, :]))))

    checks = [Check(
        name="primitive_shift.volume_density",
        passed=bool(worst_density <= 1e-6),
        claimed="beta' ^ (d beta')^m equals beta ^ (d beta)^m pointwise",
        measured=worst_density,
        tol=1e-6,
        evidence={"samples": sample_count, "fd_step": fd_step, "seed": seed},
    ), Check(
        name="primitive_shift.reeb_invariant",
        passed=bool(worst_reeb <= 1e-6),
        claimed="d/ds stays the Reeb field: contraction of d beta' vanishes",
        measured=worst_reeb,
        tol=1e-6,
    )]

    hi = pts[np.sqrt(norm_sq(pts)) >= chi_cut.hi]
    if hi.shape[0]:
        comp = beta_prime(hi)
        lamp = np.empty_like(hi)
        lamp[:, 0::2] = -0.5 * hi[:, 1::2]
        lamp[:, 1::2] = 0.5 * hi[:, 0::2]
        target = lamp + np.asarray(grad_u(hi))
        err = float(np.max(np.abs(comp[:, 1:] - target)))
        err = max(err, float(np.max(np.abs(comp[:, 0] - 1.0))))
        checks.append(Check(
            name="primitive_shift.boundary_form",
            passed=bool(err <= 1e-12),
            claimed="beta' = lambda' + ds exactly where chi = 1",
            measured=err,
            tol=1e-12,
            evidence={"points": int(hi.shape[0])},
        ))
    return checks
