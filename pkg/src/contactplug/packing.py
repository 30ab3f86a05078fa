"""Greedy multi-scale packing of disjoint closed balls into one angular
sector of the truncated ball, replicated to all sectors by the 1/n turn.

Strategy: lattice sweeps (hex rows in the plane, interleaved double grids in
higher dimension) at the largest admissible radius, then successively halved
radii filling the gaps, with an optional seeded random top-off.  No claim of
optimality; the achieved density is measured, certified and reported.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .certificates import Check
from .core import InputError, SectorGeometry, ball_margins, norm_sq, rotate, sector_index

_SEP = 1e-9          # relative separation slack between accepted balls
_LATTICE_PAD = 1e-3  # relative slack baked into lattice spacing


def _ball_volume(m: int, r) -> np.ndarray:
    return np.pi ** m * np.asarray(r) ** (2 * m) / math.factorial(m)


@dataclass
class BallFamily:
    """Disjoint closed balls in sector(s) of the ball of radius sqrt(1-2delta)."""

    m: int
    n: int
    delta: float
    centers: np.ndarray
    radii: np.ndarray
    seed: int
    rho_target: float
    sectors: int = 1          # 1 = single-sector family, n = full orbit
    _levels: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.centers = np.asarray(self.centers, dtype=float).reshape(-1, 2 * self.m)
        self.radii = np.asarray(self.radii, dtype=float).reshape(-1)
        self._rebuild_levels()

    def _rebuild_levels(self):
        self._levels = []
        if self.size == 0:
            return
        for r in sorted(set(self.radii.tolist()), reverse=True):
            idx = np.nonzero(self.radii == r)[0]
            tree = cKDTree(self.centers[idx])
            self._levels.append((float(r), idx, tree))

    @property
    def size(self) -> int:
        return int(self.radii.size)

    @property
    def outer_radius(self) -> float:
        return math.sqrt(1.0 - 2.0 * self.delta)

    def total_volume(self) -> float:
        return float(np.sum(_ball_volume(self.m, self.radii)))

    def reference_volume(self) -> float:
        """Per-sector reference: V(truncated ball) / n."""
        vol = _ball_volume(self.m, self.outer_radius)
        return float(vol) / self.n

    @property
    def achieved_density(self) -> float:
        if self.size == 0:
            return 0.0
        return self.total_volume() / (self.reference_volume() * self.sectors)

    @property
    def target_met(self) -> bool:
        return self.achieved_density >= self.rho_target - 1e-12

    def locate(self, points: np.ndarray) -> np.ndarray:
        """Index of the ball strictly containing each point, -1 if none.

        One nearest-neighbour query per radius level suffices: same-radius
        balls are disjoint, so at most one center lies within that radius.
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.full(points.shape[0], -1, dtype=np.int64)
        for r, idx, tree in self._levels:
            d, j = tree.query(points, k=1, distance_upper_bound=r)
            hit = d < r
            out[hit & (out < 0)] = idx[j[hit & (out < 0)]]
        return out

    def to_dict(self) -> dict:
        return {
            "m": self.m, "n": self.n, "delta": self.delta, "seed": self.seed,
            "rho_target": self.rho_target, "sectors": self.sectors,
            "achieved_density": self.achieved_density,
            "target_met": self.target_met,
            "count": self.size,
            "radii": self.radii.tolist(),
            "centers": self.centers.tolist(),
        }

    def write_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True)
            fh.write("\n")

    @staticmethod
    def from_dict(d: dict) -> "BallFamily":
        return BallFamily(m=d["m"], n=d["n"], delta=d["delta"],
                          centers=np.asarray(d["centers"], dtype=float),
                          radii=np.asarray(d["radii"], dtype=float),
                          seed=d["seed"], rho_target=d["rho_target"],
                          sectors=d.get("sectors", 1))

    @staticmethod
    def read_json(path) -> "BallFamily":
        with open(path) as fh:
            return BallFamily.from_dict(json.load(fh))


def max_feasible_radius(m: int, n: int, delta: float) -> float:
    """Largest radius any ball in the sector can have: cap pi/n and the
    inscribed-ball bound from the two walls and the outer sphere."""
    width = 2.0 * math.pi / n
    sin_half = math.sin(min(0.5 * width, 0.5 * math.pi))
    r_out = math.sqrt(1.0 - 2.0 * delta)
    r_geom = r_out * sin_half / (1.0 + sin_half)
    return min(math.pi / n, r_geom)


def _wedge_bbox(n: int, r_out: float):
    """Axis-aligned box containing sector 1 of the plane disc (angle in
    (0, 2pi/n)); falls back to the full square for wide sectors."""
    width = 2.0 * math.pi / n
    if width <= 0.5 * math.pi:
        return (0.0, r_out), (0.0, r_out * math.sin(width))
    return (-r_out, r_out), (-r_out, r_out)


def _axis_grid(lo, hi, a, off):
    start = math.floor((lo - off) / a)
    stop = math.ceil((hi - off) / a)
    return off + a * np.arange(start, stop + 1)


def _lattice_chunks(m, n, radius, r_out, offsets, max_rows=1_000_000):
    """Yield candidate-center chunks for one radius level.

    m == 1: hexagonal rows.  m >= 2: two interleaved cubic grids (the second
    shifted by half the spacing in every axis), which in four dimensions has
    the density of the best lattice packing.  All spacings guarantee pairwise
    distance >= 2 radius (1 + pad) inside the level.
    """
    a = 2.0 * radius * (1.0 + _LATTICE_PAD)
    (xlo, xhi), (ylo, yhi) = _wedge_bbox(n, r_out)
    if m == 1:
        row_h = a * math.sqrt(3.0) / 2.0
        ys = _axis_grid(ylo, yhi, row_h, offsets[1] % row_h)
        rows = []
        count = 0
        for j, y in enumerate(ys):
            xoff = (offsets[0] + (j % 2) * a / 2.0) % a
            xs = _axis_grid(xlo, xhi, a, xoff)
            pts = np.column_stack([xs, np.full(xs.size, y)])
            rows.append(pts)
            count += pts.shape[0]
            if count >= max_rows:
                yield np.concatenate(rows)
                rows, count = [], 0
        if rows:
            yield np.concatenate(rows)
        return

    d_rest = 2 * (m - 1)
    for copy in range(2):
        shift = copy * a / 2.0
        xm = _axis_grid(xlo, xhi, a, (offsets[-2] + shift) % a)
        ym = _axis_grid(ylo, yhi, a, (offsets[-1] + shift) % a)
        # admissible wedge pairs first: walls only constrain the last pair
        XX, YY = np.meshgrid(xm, ym, indexing="ij")
        zm = np.column_stack([XX.ravel(), YY.ravel()])
        keep = norm_sq(zm) < (r_out - radius) ** 2
        zm = zm[keep]
        rest_axes = [_axis_grid(-r_out, r_out, a, (offsets[k] + shift) % a)
                     for k in range(d_rest)]
        rest = np.stack(np.meshgrid(*rest_axes, indexing="ij"), axis=-1).reshape(-1, d_rest)
        rest = rest[norm_sq(rest) < (r_out - radius) ** 2]
        if zm.size == 0 or rest.size == 0:
            continue
        group = max(1, max_rows // max(rest.shape[0], 1))
        for start in range(0, zm.shape[0], group):
            zchunk = zm[start:start + group]
            block = np.empty((zchunk.shape[0] * rest.shape[0], 2 * m))
            block[:, :d_rest] = np.repeat(rest[None, :, :], zchunk.shape[0], axis=0) \
                .reshape(-1, d_rest)
            block[:, d_rest:] = np.repeat(zchunk, rest.shape[0], axis=0)
            yield block


class _Accepted:
    """Accepted balls grouped by radius level, with collision queries."""

    def __init__(self, m):
        self.m = m
        self.centers = []
        self.radii = []
        self.trees = []   # (radius, tree over that level's centers)

    def collides(self, pts, r_new):
        bad = np.zeros(pts.shape[0], dtype=bool)
        for r_prev, tree in self.trees:
            lim = (r_new + r_prev) * (1.0 + _SEP)
            d, _ = tree.query(pts, k=1, distance_upper_bound=lim)
            bad |= d < lim
        return bad

    def add_level(self, pts_list, r_new):
        if not pts_list:
            return
        pts = np.concatenate(pts_list)
        self.centers.append(pts)
        self.radii.append(np.full(pts.shape[0], r_new))
        self.trees.append((r_new, cKDTree(pts)))

    @property
    def count(self):
        return sum(p.shape[0] for p in self.centers)

    def volume(self):
        return sum(float(np.sum(_ball_volume(self.m, r))) for r in self.radii)


def pack_sector(m: int, n: int, rho_target: float, delta: float,
                max_balls: int = 40_000, seed: int = 0, levels: int = 8,
                topoff: bool = True, level_factor: float = 0.5,
                sweeps: int = 2) -> BallFamily:
    """Fill sector 1 to the target fraction of the truncated sector volume.

    Radii shrink by level_factor per level (use ~0.7 in higher dimension,
    where halving throws away too much volume per ball); each level gets up
    to `sweeps` lattice passes at different deterministic offsets.  Best
    effort: falling short is a soft failure reported via target_met, never an
    exception.  Deterministic for fixed arguments.
    """
    if not 0.0 <= rho_target < 1.0:
        raise InputError("rho_target must lie in [0, 1)")
    if not 0.0 < delta < 0.5:
        raise InputError("delta must lie in (0, 1/2)")
    if not 0.25 <= level_factor <= 0.9:
        raise InputError("level_factor must lie in [0.25, 0.9]")
    geom = SectorGeometry(m, n)
    r_out = math.sqrt(1.0 - 2.0 * delta)
    v_ref = _ball_volume(m, r_out) / n
    r0 = 0.995 * max_feasible_radius(m, n, delta)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    acc = _Accepted(m)
    target_vol = rho_target * v_ref

    def margin_ok(pts, r):
        margin, sector = ball_margins(geom, pts, np.full(pts.shape[0], r), r_out)
        return (margin > 1e-7 * r) & (sector == 1)

    done = rho_target == 0.0
    for k in range(levels):
        if done or acc.count >= max_balls:
            break
        # keep radii representable so replicate/serialize round-trips exactly
        r_k = float(r0 * level_factor ** k)
        level_pts = []
        n_sweeps = max(1, sweeps) if k <= 3 else 1  # extra offsets pay off early
        for sweep in range(n_sweeps):
            if done:
                break
            offsets = r_k * rng.random(2 * m)  # deterministic per (level, sweep)
            for block in _lattice_chunks(m, n, r_k, r_out, offsets):
                block = block[margin_ok(block, r_k)]
                if block.shape[0] == 0:
                    continue
                block = block[~acc.collides(block, r_k)]
                if sweep > 0 and level_pts:
                    tree = cKDTree(np.concatenate(level_pts))
                    lim = 2 * r_k * (1.0 + _SEP)
                    d, _ = tree.query(block, k=1, distance_upper_bound=lim)
                    block = block[d >= lim]
                room = max_balls - acc.count - sum(b.shape[0] for b in level_pts)
                if block.shape[0] > room:
                    block = block[:room]
                if block.shape[0] == 0:
                    continue
                level_pts.append(block)
                if acc.volume() + sum(
                        float(np.sum(_ball_volume(m, np.full(b.shape[0], r_k))))
                        for b in level_pts) >= target_vol:
                    done = True
                    break
        acc.add_level(level_pts, r_k)

    if topoff and not done and acc.count < max_balls:
        # seeded sequential random insertion at the two finest radii
        for r_t in (float(r0 * level_factor ** (levels - 1)),
                    float(r0 * level_factor ** levels)):
            if done:
                break
            (xlo, xhi), (ylo, yhi) = _wedge_bbox(n, r_out)
            for _ in range(40):
                batch = np.empty((4000, 2 * m))
                batch[:, : 2 * (m - 1)] = rng.uniform(-r_out, r_out, (4000, 2 * (m - 1)))
                batch[:, -2] = rng.uniform(xlo, xhi, 4000)
                batch[:, -1] = rng.uniform(ylo, yhi, 4000)
                batch = batch[margin_ok(batch, r_t)]
                batch = batch[~acc.collides(batch, r_t)]
                kept = []
                lim = 2 * r_t * (1.0 + _SEP)
                for p in batch:   # self-separation, insertion order fixed
                    if all(np.dot(p - q, p - q) >= lim * lim for q in kept):
                        kept.append(p)
                if kept:
                    acc.add_level([np.asarray(kept)], r_t)
                if acc.volume() >= target_vol or acc.count >= max_balls:
                    done = True
                    break

    if acc.count == 0:
        centers = np.zeros((0, 2 * m))
        radii = np.zeros(0)
    else:
        centers = np.concatenate(acc.centers)
        radii = np.concatenate(acc.radii)
    return BallFamily(m=m, n=n, delta=delta, centers=centers, radii=radii,
                      seed=seed, rho_target=rho_target, sectors=1)


def replicate_orbit(family: BallFamily, n: int | None = None) -> BallFamily:
    """Close the family under the 1/n Hopf turn: n copies, one per sector."""
    n = family.n if n is None else n
    if n != family.n:
        raise InputError("sector count must match the family geometry")
    if family.sectors != 1:
        raise InputError("family is already replicated")
    if family.size == 0:
        out = BallFamily(family.m, n, family.delta, family.centers, family.radii,
                         family.seed, family.rho_target, sectors=n)
        return out
    blocks = [rotate(family.centers, 2.0 * math.pi * k / n) for k in range(n)]
    centers = np.concatenate(blocks)
    radii = np.tile(family.radii, n)
    return BallFamily(family.m, n, family.delta, centers, radii,
                      family.seed, family.rho_target, sectors=n)


def verify_packing(family: BallFamily, mc_samples: int = 200_000, seed: int = 1234):
    """Re-check every invariant exhaustively; failures are reported, not raised."""
    checks = []
    geom = SectorGeometry(family.m, family.n)
    r_out = family.outer_radius

    # pairwise disjointness, all level pairs, neighbour counting in C
    overlaps = 0
    worst_pair = None
    levels = family._levels
    for i, (ri, idx_i, tree_i) in enumerate(levels):
        for rj, idx_j, tree_j in levels[i:]:
            lim = (ri + rj) * (1.0 + 1e-12)
            cnt = tree_i.count_neighbors(tree_j, lim)
            expected = idx_i.size if ri == rj else 0
            if cnt > expected:
                overlaps += int(cnt - expected)
                pairs = tree_i.query_ball_tree(tree_j, lim)
                for a, lst in enumerate(pairs):
                    for b in lst:
                        if idx_i[a] != idx_j[b]:
                            worst_pair = (int(idx_i[a]), int(idx_j[b]))
                            break
                    if worst_pair:
                        break
    checks.append(Check(
        name="packing.disjoint",
        passed=overlaps == 0,
        claimed="pairwise distance > r_i + r_j for all ball pairs",
        measured=overlaps,
        evidence={"offending_pair": worst_pair, "count": family.size},
    ))

    if family.size:
        margins, sectors = ball_margins(geom, family.centers, family.radii, r_out)
        min_margin = float(np.min(margins))
        checks.append(Check(
            name="packing.sector_margins",
            passed=bool(min_margin > 0.0 and np.all(sectors >= 1)),
            claimed="every closed ball strictly inside its sector and the truncated ball",
            measured=min_margin,
            evidence={"outer_radius": r_out},
        ))
        cap = math.pi / family.n
        worst_r = float(np.max(family.radii))
        checks.append(Check(
            name="packing.radius_cap",
            passed=bool(worst_r <= cap),
            claimed="every radius <= pi/n",
            measured=worst_r,
            tol=0.0,
            evidence={"cap": cap},
        ))
    else:
        checks.append(Check(name="packing.sector_margins", passed=True,
                            claimed="empty family", measured=0.0))
        checks.append(Check(name="packing.radius_cap", passed=True,
                            claimed="empty family", measured=0.0))

    if family.sectors > 1 and family.size:
        rotated = rotate(family.centers, 2.0 * math.pi / family.n)
        tree = cKDTree(family.centers)
        d, j = tree.query(rotated, k=1)
        same_radius = family.radii[j] == family.radii
        orbit_err = float(np.max(d))
        checks.append(Check(
            name="packing.orbit_closed",
            passed=bool(orbit_err <= 1e-12 and np.all(same_radius)),
            claimed="the 1/n turn permutes the family",
            measured=orbit_err,
            tol=1e-12,
        ))

    density = family.achieved_density
    checks.append(Check(
        name="packing.density",
        passed=family.target_met,
        claimed=f"achieved density >= target {family.rho_target}",
        measured=density,
        mandatory=False,   # soft failure by contract
        evidence={"target": family.rho_target, "volume": family.total_volume()},
    ))

    if mc_samples and family.size:
        covered, se = _mc_covered_fraction(family, mc_samples, seed)
        ref_density = density
        ok = abs(covered - ref_density) <= 3.0 * se + 1e-12
        checks.append(Check(
            name="packing.mc_density",
            passed=bool(ok),
            claimed="Monte Carlo covered fraction within 3 SE of ledger density",
            measured=covered,
            tol=3.0 * se,
            evidence={"se": se, "samples": mc_samples, "seed": seed,
                      "ledger": ref_density},
        ))
    return checks


def _mc_covered_fraction(family: BallFamily, samples: int, seed):
    """Rejection-sample sector 1 of the truncated ball; fraction inside balls."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    geom = SectorGeometry(family.m, family.n)
    r_out = family.outer_radius
    sector_one = family.sectors == 1
    hits = 0
    tot = 0
    d = 2 * family.m
    while tot < samples:
        g = rng.standard_normal((samples, d))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        pts = g * (r_out * rng.random(samples) ** (1.0 / d))[:, None]
        if sector_one:
            pts = pts[sector_index(geom, pts) == 1]
        if pts.shape[0] == 0:
            continue
        take = min(samples - tot, pts.shape[0])
        pts = pts[:take]
        hits += int(np.sum(family.locate(pts) >= 0))
        tot += take
    p = hits / tot
    se = math.sqrt(max(p * (1 - p), 1e-12) / tot)
    return p, se
