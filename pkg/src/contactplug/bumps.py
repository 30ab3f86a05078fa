"""Negative bump Hamiltonians supported on packed balls.

Each bump K(z) = -c chi_eps(|z - z0|^2 / r0^2) is a translated radial
Hamiltonian; its action picks up the primitive-correction term
eta(u) = Im<u, z0>/2 coming from conjugation by the translation, which is
exact, so no line integral is ever needed for the composed action.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import InputError, as_complex, as_real, norm_sq
from .cutoffs import CutoffChi
from .radial import RadialHamiltonian, ScaledProfile, calabi_radial


@dataclass(frozen=True)
class BumpSpec:
    """One bump: center, radius, strength c > 0, cutoff parameter epsilon."""

    center: np.ndarray
    radius: float
    c: float
    chi: CutoffChi

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.radius <= 0 or self.c <= 0:
            raise InputError("bump radius and strength must be positive")
        if self.center.shape[-1] % 2:
            raise InputError("center must have an even number of coordinates")

    @property
    def m(self) -> int:
        return self.center.shape[-1] // 2

    @property
    def epsilon(self) -> float:
        return self.chi.delta

    def translated(self) -> RadialHamiltonian:
        """The centered model: -c chi(|u|^2 / r^2) as a radial Hamiltonian."""
        prof = ScaledProfile(self.chi, value_scale=1.0, arg_scale=self.radius ** 2)
        return RadialHamiltonian(m=self.m, profile=prof, scale=-self.c,
                                 ambient_sq=np.inf)

    def k_eval(self, z: np.ndarray) -> np.ndarray:
        u2 = norm_sq(np.asarray(z, dtype=float) - self.center)
        return -self.c * np.asarray(self.chi.eval(u2 / self.radius ** 2))

    def rotation_rate(self, u_sq) -> np.ndarray:
        """Angular speed about the center at squared distance u_sq: -2 h'(u_sq)."""
        H = self.translated()
        return -2.0 * np.asarray(H.hp(u_sq))


def bump_flow(spec: BumpSpec, t, z: np.ndarray) -> np.ndarray:
    """Rotation about the center inside the ball, identity outside.

    |z - center| is preserved exactly.  Either z is a batch with scalar t, or
    z is a single point and t an array (whole trajectory at once).
    """
    z = np.asarray(z, dtype=float)
    u = z - spec.center
    u2 = norm_sq(u)
    if np.ndim(t) and z.ndim == 1:
        if u2 >= spec.radius ** 2:
            return np.broadcast_to(z, (np.size(t), z.size)).copy()
        phase = np.exp(1j * float(spec.rotation_rate(u2)) * np.asarray(t, dtype=float))
        return spec.center + as_real(phase[:, None] * as_complex(u)[None, :])
    phase = np.exp(1j * spec.rotation_rate(u2) * float(t))
    rot = spec.center + as_real(np.atleast_1d(phase)[..., None] * np.atleast_2d(as_complex(u)))
    out = np.where(np.atleast_1d(u2)[:, None] < spec.radius ** 2, rot, np.atleast_2d(z))
    return out[0] if z.ndim == 1 else out


def eta_correction(spec: BumpSpec, u: np.ndarray) -> np.ndarray:
    """Primitive shift eta(u) = Im<u, center>/2 from conjugating by the
    translation: d eta = (translation pullback of lambda) - lambda."""
    uc = as_complex(u)
    zc = as_complex(spec.center)
    return 0.5 * np.sum(uc.imag * zc.real - uc.real * zc.imag, axis=-1)


def bump_action(spec: BumpSpec, t, z: np.ndarray):
    """Action of the time-t bump map at z; zero outside the ball.

    Inside: translated radial action -ct(chi - rho chi') plus the correction
    eta(rotated u) - eta(u), all closed form.
    """
    z = np.asarray(z, dtype=float)
    u = z - spec.center
    u2 = norm_sq(u)
    rho = u2 / spec.radius ** 2
    sig_tilde = -spec.c * np.asarray(t, dtype=float) * (
        np.asarray(spec.chi.eval(rho)) - rho * np.asarray(spec.chi.deriv(rho)))
    if np.ndim(t) and z.ndim == 1:
        if u2 >= spec.radius ** 2:
            return np.zeros(np.size(t))
        phase = np.exp(1j * float(spec.rotation_rate(u2)) * np.asarray(t, dtype=float))
        rotated_u = as_real(phase[:, None] * as_complex(u)[None, :])
        return sig_tilde + eta_correction(spec, rotated_u) - eta_correction(spec, u)
    phase = np.exp(1j * spec.rotation_rate(u2) * float(t))
    rotated_u = as_real(np.atleast_1d(phase)[..., None] * np.atleast_2d(as_complex(u)))
    corr = eta_correction(spec, rotated_u) - eta_correction(spec, np.atleast_2d(u))
    out = np.where(np.atleast_1d(u2) < spec.radius ** 2,
                   np.atleast_1d(sig_tilde) + corr, 0.0)
    return float(out[0]) if z.ndim == 1 else out


def bump_calabi(spec: BumpSpec) -> tuple[float, float]:
    """(value, paper bound): value = CAL of the bump via radial quadrature on
    the centered model; bound = -c pi^m (1-2eps)^(m+1) r^(2m) must dominate it.
    """
    m = spec.m
    H = spec.translated()
    # integrate over [0, r]: substitute into the unit-ball closed form
    prof = ScaledProfile(spec.chi, value_scale=-spec.c, arg_scale=1.0)
    unit = RadialHamiltonian(m=m, profile=prof, scale=1.0)
    val = calabi_radial(unit) * spec.radius ** (2 * m)
    bound = -spec.c * np.pi ** m * (1.0 - 2.0 * spec.epsilon) ** (m + 1) \
        * spec.radius ** (2 * m)
    return float(val), float(bound)


@dataclass(frozen=True)
class SupportedMap:
    """A compactly supported symplectomorphism given by closures."""

    apply: Callable
    action: Callable

    @staticmethod
    def identity() -> "SupportedMap":
        return SupportedMap(apply=lambda z: np.asarray(z, dtype=float),
                            action=lambda z: np.zeros(np.asarray(z).shape[:-1]))


def compose_action(outer: SupportedMap, inner: SupportedMap, z: np.ndarray):
    """Action of outer∘inner: sigma_outer(inner(z)) + sigma_inner(z)."""
    z = np.asarray(z, dtype=float)
    return np.asarray(outer.action(inner.apply(z))) + np.asarray(inner.action(z))


def bump_map(spec: BumpSpec, t: float = 1.0) -> SupportedMap:
    return SupportedMap(apply=lambda z: bump_flow(spec, t, z),
                        action=lambda z: bump_action(spec, t, z))
