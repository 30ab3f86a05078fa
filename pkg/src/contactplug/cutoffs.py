"""Scalar profiles: the truncation cutoff chi_delta, the collar profile v,
and the plateau profile u-hat, each with exact derivative closures.

chi_delta is stored as closed-form pieces (linear ramp, parabolic landing,
zero tail) so the four defining inequalities can be checked with zero
tolerance on the ramp.  The landing reaches 0 at 1 - delta/2, keeping the
support strictly inside [0, 1); a radial Hamiltonian built from it therefore
vanishes on a neighbourhood of the unit sphere.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .certificates import Check
from .core import InputError


class ProfileJoinError(RuntimeError):
    """The requested closed-form pieces admit no monotone C^1 join."""


@dataclass(frozen=True)
class CutoffChi:
    """Cutoff with chi(s) = 1 - delta - s on [0, 1-2delta], slope in [-1, 0].

    Pieces: linear ramp on [0, j0], parabola (e - s)^2 / (4k) on [j0, e],
    zero after, with j0 = 1 - 2delta + w, k = delta - w, e = 1 - w.
    """

    delta: float
    w: float

    @property
    def ramp_end(self) -> float:
        return 1.0 - 2.0 * self.delta

    @property
    def join(self) -> float:
        return 1.0 - 2.0 * self.delta + self.w

    @property
    def support_end(self) -> float:
        return 1.0 - self.w

    @property
    def kappa(self) -> float:
        return self.delta - self.w

    def eval(self, s):
        s = np.asarray(s, dtype=float)
        lin = 1.0 - self.delta - s
        p = self.support_end - s
        par = p * p / (4.0 * self.kappa)
        out = np.where(s <= self.join, lin, np.where(s < self.support_end, par, 0.0))
        return out if out.ndim else float(out)

    def deriv(self, s):
        s = np.asarray(s, dtype=float)
        p = self.support_end - s
        par = -p / (2.0 * self.kappa)
        out = np.where(s <= self.join, -1.0, np.where(s < self.support_end, par, 0.0))
        return out if out.ndim else float(out)

    def junctions(self):
        return [self.ramp_end, self.join, self.support_end]

    def to_dict(self) -> dict:
        return {"kind": "chi", "delta": self.delta, "w": self.w}

    @staticmethod
    def from_dict(d: dict) -> "CutoffChi":
        return CutoffChi(delta=d["delta"], w=d["w"])


def build_chi(delta: float) -> CutoffChi:
    """Cutoff for delta in (0, 1/2); landing width fixed at delta/2."""
    if not 0.0 < delta < 0.5:
        raise InputError(f"delta must lie in (0, 1/2), got {delta}")
    return CutoffChi(delta=float(delta), w=0.5 * float(delta))


def verify_chi(chi, grid_size: int = 10_000, blend_slack: float = 1e-12):
    """Check the four defining inequalities of chi on a dense grid of [0, 1].

    The ramp region is held to zero tolerance; blends get `blend_slack`.
    Accepts any object exposing delta, eval, deriv (negative controls
    included), so corrupted profiles are detected rather than assumed away.
    """
    if grid_size < 1000:
        raise InputError("grid_size must be at least 10^3")
    delta = chi.delta
    s = np.linspace(0.0, 1.0, grid_size)
    extra = [j for j in getattr(chi, "junctions", lambda: [])() if 0.0 <= j <= 1.0]
    s = np.union1d(s, np.asarray(extra))
    val = np.asarray(chi.eval(s), dtype=float)
    der = np.asarray(chi.deriv(s), dtype=float)
    ramp = s <= 1.0 - 2.0 * delta

    checks = []
    v1 = np.max(np.abs(val[ramp] - (1.0 - delta - s[ramp])))
    checks.append(Check(
        name="chi.linear_piece",
        passed=bool(v1 == 0.0),
        claimed="chi(s) = 1 - delta - s on [0, 1-2delta], exactly",
        measured=float(v1),
        tol=0.0,
        evidence={"grid": int(s.size), "delta": delta},
    ))

    lower = np.maximum(1.0 - delta - s, 0.0)
    upper = np.maximum((1.0 - delta) * (1.0 - s), 0.0)
    worst_lo = float(np.max(lower - val))
    worst_hi = float(np.max(val - upper))
    envelope = max(worst_lo, worst_hi)
    checks.append(Check(
        name="chi.envelope",
        passed=bool(envelope <= blend_slack),
        claimed="max(1-delta-s, 0) <= chi <= max((1-delta)(1-s), 0)",
        measured=envelope,
        tol=blend_slack,
        evidence={"lower_violation": worst_lo, "upper_violation": worst_hi},
    ))

    slope_ramp = float(np.max(np.abs(der[ramp] + 1.0)))
    slope_low = float(np.max(-1.0 - der))
    slope_high = float(np.max(der - 0.0))
    checks.append(Check(
        name="chi.slope",
        passed=bool(slope_ramp == 0.0 and slope_low <= blend_slack and slope_high <= blend_slack),
        claimed="chi' = -1 on the ramp and chi' in [-1, 0] everywhere",
        measured=max(slope_ramp, slope_low, slope_high),
        tol=blend_slack,
        evidence={"ramp_deviation": slope_ramp, "below_-1": slope_low, "above_0": slope_high},
    ))

    comb = val - s * der
    comb_lo = float(np.max(-comb))
    comb_hi = float(np.max(comb - (1.0 - delta)))
    checks.append(Check(
        name="chi.radial_combination",
        passed=bool(comb_lo <= blend_slack and comb_hi <= blend_slack),
        claimed="0 <= chi(s) - s chi'(s) <= 1 - delta",
        measured=max(comb_lo, comb_hi),
        tol=blend_slack,
        evidence={"below_0": comb_lo, "above_1-delta": comb_hi},
    ))

    support_tail = float(np.max(np.abs(val[s >= 1.0 - 1e-15])) if np.any(s >= 1.0) else 0.0)
    checks.append(Check(
        name="chi.support",
        passed=bool(support_tail == 0.0),
        claimed="chi = 0 for s >= 1",
        measured=support_tail,
        tol=0.0,
    ))

    checks.append(_fd_consistency("chi", chi, 0.0, 1.0, extra, grid=2000))
    return checks


def _fd_consistency(label, profile, lo, hi, junctions, grid=2000, step=1e-6, tol=1e-6):
    """Derivative closure vs central differences, away from junction points."""
    s = np.linspace(lo + 2 * step, hi - 2 * step, grid)
    for j in junctions:
        s = s[np.abs(s - j) > 4 * step]
    fd = (np.asarray(profile.eval(s + step)) - np.asarray(profile.eval(s - step))) / (2 * step)
    err = float(np.max(np.abs(fd - np.asarray(profile.deriv(s))))) if s.size else 0.0
    return Check(
        name=f"{label}.derivative_fd",
        passed=bool(err <= tol),
        claimed="stored derivative matches central differences where C^2",
        measured=err,
        tol=tol,
        evidence={"step": step, "points": int(s.size)},
    )


def _hermite(r, a, b, va, vb, ma, mb):
    """Cubic Hermite value on [a, b] with endpoint values/slopes."""
    h = b - a
    t = (np.asarray(r, dtype=float) - a) / h
    h00 = (1 + 2 * t) * (1 - t) ** 2
    h10 = t * (1 - t) ** 2
    h01 = t * t * (3 - 2 * t)
    h11 = t * t * (t - 1)
    return h00 * va + h10 * h * ma + h01 * vb + h11 * h * mb


def _hermite_deriv(r, a, b, va, vb, ma, mb):
    h = b - a
    t = (np.asarray(r, dtype=float) - a) / h
    d00 = 6 * t * (t - 1) / h
    d10 = (1 - t) * (1 - 3 * t)
    d01 = -6 * t * (t - 1) / h
    d11 = t * (3 * t - 2)
    return d00 * va + d10 * ma + d01 * vb + d11 * mb


@dataclass(frozen=True)
class ProfileV:
    """Positive decreasing profile: C(1-r^2) for r <= rho, 1/r near rho_prime."""

    rho: float
    rho_prime: float
    C: float
    join: float  # cubic bridge on [rho, join], 1/r on [join, rho_prime]

    def eval(self, r):
        r = np.asarray(r, dtype=float)
        left = self.C * (1.0 - r * r)
        with np.errstate(divide="ignore"):
            right = np.where(r > 0, 1.0 / np.where(r > 0, r, 1.0), np.inf)
        mid = _hermite(r, self.rho, self.join, self.C * (1 - self.rho ** 2),
                       1.0 / self.join, -2.0 * self.C * self.rho, -1.0 / self.join ** 2)
        out = np.where(r <= self.rho, left, np.where(r < self.join, mid, right))
        return out if out.ndim else float(out)

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        left = -2.0 * self.C * r
        with np.errstate(divide="ignore"):
            right = np.where(r > 0, -1.0 / np.where(r > 0, r * r, 1.0), -np.inf)
        mid = _hermite_deriv(r, self.rho, self.join, self.C * (1 - self.rho ** 2),
                             1.0 / self.join, -2.0 * self.C * self.rho, -1.0 / self.join ** 2)
        out = np.where(r <= self.rho, left, np.where(r < self.join, mid, right))
        return out if out.ndim else float(out)

    def junctions(self):
        return [self.rho, self.join]

    def to_dict(self) -> dict:
        return {"kind": "v", "rho": self.rho, "rho_prime": self.rho_prime,
                "C": self.C, "join": self.join}

    @staticmethod
    def from_dict(d: dict) -> "ProfileV":
        return ProfileV(d["rho"], d["rho_prime"], d["C"], d["join"])

    def verify(self, grid: int = 4000):
        r = np.linspace(1e-9, self.rho_prime, grid)
        dv = np.asarray(self.deriv(r))
        worst = float(np.max(dv))
        checks = [Check(
            name="v.decreasing",
            passed=bool(worst < 0.0),
            claimed="v' < 0 on (0, rho_prime]",
            measured=worst,
            tol=0.0,
            evidence={"grid": grid},
        )]
        rl = np.linspace(0, self.rho, 200)
        exact_l = float(np.max(np.abs(self.eval(rl) - self.C * (1 - rl * rl))))
        rr = np.linspace(self.join, self.rho_prime, 200)
        exact_r = float(np.max(np.abs(self.eval(rr) - 1.0 / rr)))
        checks.append(Check(
            name="v.closed_forms",
            passed=bool(exact_l == 0.0 and exact_r == 0.0),
            claimed="v = C(1-r^2) on [0, rho]; v = 1/r on [join, rho_prime]",
            measured=max(exact_l, exact_r),
            tol=0.0,
        ))
        checks.append(_fd_consistency("v", self, 1e-4, self.rho_prime, self.junctions()))
        return checks


def build_v(rho: float, rho_prime: float, C: float) -> ProfileV:
    """Join C(1-r^2) to 1/r monotonically; requires C(1-rho^2) > 1/rho_prime."""
    if not 0 < rho < rho_prime:
        raise InputError(f"need 0 < rho < rho_prime, got {rho}, {rho_prime}")
    if C * (1 - rho ** 2) <= 1.0 / rho_prime:
        raise ProfileJoinError(
            f"monotone join impossible: C(1-rho^2) = {C * (1 - rho ** 2):.6g} "
            f"<= 1/rho_prime = {1.0 / rho_prime:.6g}")
    for frac in (0.75, 0.5, 0.9, 0.25, 0.6):
        join = rho + frac * (rho_prime - rho)
        if C * (1 - rho ** 2) <= 1.0 / join:
            continue  # cubic would have to increase
        prof = ProfileV(rho, rho_prime, C, join)
        if all(c.passed for c in prof.verify()):
            return prof
    raise ProfileJoinError("no monotone C^1 bridge found for the given constants")


@dataclass(frozen=True)
class ProfileUhat:
    """Radial plateau profile: u(r) = r on [0, rho], constant b past the join."""

    rho: float
    rho_prime: float
    b: float
    join: float

    def eval(self, r):
        r = np.asarray(r, dtype=float)
        mid = _hermite(r, self.rho, self.join, self.rho, self.b, 1.0, 0.0)
        out = np.where(r <= self.rho, r, np.where(r < self.join, mid, self.b))
        return out if out.ndim else float(out)

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        mid = _hermite_deriv(r, self.rho, self.join, self.rho, self.b, 1.0, 0.0)
        out = np.where(r <= self.rho, 1.0, np.where(r < self.join, mid, 0.0))
        return out if out.ndim else float(out)

    def junctions(self):
        return [self.rho, self.join]

    def to_dict(self) -> dict:
        return {"kind": "uhat", "rho": self.rho, "rho_prime": self.rho_prime,
                "b": self.b, "join": self.join}

    @staticmethod
    def from_dict(d: dict) -> "ProfileUhat":
        return ProfileUhat(d["rho"], d["rho_prime"], d["b"], d["join"])

    def verify(self, grid: int = 4000):
        r = np.linspace(0.0, self.rho_prime * 1.2, grid)
        du = np.asarray(self.deriv(r))
        worst = float(np.min(du))
        checks = [Check(
            name="uhat.nondecreasing",
            passed=bool(worst >= 0.0),
            claimed="u_r >= 0 everywhere",
            measured=worst,
            tol=0.0,
            evidence={"grid": grid},
        )]
        rl = np.linspace(0, self.rho, 200)
        exact_l = float(np.max(np.abs(self.eval(rl) - rl)))
        rr = np.linspace(self.rho_prime, 2 * self.rho_prime, 50)
        exact_r = float(np.max(np.abs(self.eval(rr) - self.b)))
        checks.append(Check(
            name="uhat.closed_forms",
            passed=bool(exact_l == 0.0 and exact_r == 0.0),
            claimed="u = r on [0, rho]; u = b for r >= rho_prime",
            measured=max(exact_l, exact_r),
            tol=0.0,
        ))
        checks.append(_fd_consistency("uhat", self, 1e-4, self.rho_prime, self.junctions()))
        return checks


@dataclass(frozen=True)
class SmoothStep:
    """C^2 radial switch: 0 on [0, lo], 1 on [hi, inf), quintic in between."""

    lo: float
    hi: float

    def eval(self, r):
        t = np.clip((np.asarray(r, dtype=float) - self.lo) / (self.hi - self.lo), 0.0, 1.0)
        out = t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
        return out if out.ndim else float(out)

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        t = (r - self.lo) / (self.hi - self.lo)
        inside = (t > 0.0) & (t < 1.0)
        tt = np.clip(t, 0.0, 1.0)
        out = np.where(inside, 30.0 * tt * tt * (1.0 - tt) ** 2 / (self.hi - self.lo), 0.0)
        return out if out.ndim else float(out)


def build_uhat(rho: float, rho_prime: float, b: float) -> ProfileUhat:
    """Monotone bridge from the identity to the plateau value b > rho."""
    if not 0 < rho < rho_prime:
        raise InputError(f"need 0 < rho < rho_prime, got {rho}, {rho_prime}")
    if b <= rho:
        raise ProfileJoinError(f"plateau b = {b} must exceed rho = {rho}")
    for frac in (1.0, 0.8, 0.6, 0.4, 0.3):
        join = rho + frac * (rho_prime - rho)
        prof = ProfileUhat(rho, rho_prime, b, join)
        if all(c.passed for c in prof.verify()):
            return prof
    raise ProfileJoinError("no monotone C^1 bridge found for the given constants")
