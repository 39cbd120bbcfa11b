"""Complex two-photon transition amplitudes and the Lorentzian lineshape.

Everything here is in Hartree atomic units and pure: per-intermediate-state
resolvent factors, the 3x3 transition tensor summed over intermediate states,
its contraction with photon polarizations, the detection-amplitude scaling
with the pair frequencies and entanglement time, and the Bloch-sphere
superposition of two pair amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .molecule import ExcitedStateSet

POL_X = np.array([1.0, 0.0, 0.0])
POL_Y = np.array([0.0, 1.0, 0.0])
POL_Z = np.array([0.0, 0.0, 1.0])
for _v in (POL_X, POL_Y, POL_Z):
    _v.setflags(write=False)

UNIT_NORM_TOL = 1e-12

# Largest tolerated |omega_T(MC) - omega_T(BC)| in hartree: a coherent
# superposition of pair states requires both pairs to carry the same total
# energy.
ENERGY_CONSERVATION_TOL = 1e-10


def _unit_vector(v, name: str) -> np.ndarray:
    raw = np.asarray(v)
    if np.iscomplexobj(raw):
        raise DomainError(f"{name}: polarizations must be real 3-vectors")
    try:
        arr = raw.astype(float)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name}: polarizations must be real 3-vectors") from exc
    if arr.shape != (3,):
        raise DomainError(f"{name}: expected a real 3-vector, got shape {arr.shape}")
    if abs(float(arr @ arr) - 1.0) > 2.0 * UNIT_NORM_TOL:
        raise DomainError(f"{name}: polarization must have unit norm, got {arr!r}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


def _check_bloch_angles(theta: float, phi: float) -> None:
    if not (0.0 <= theta <= math.pi):
        raise DomainError(f"theta must lie in [0, pi], got {theta!r}")
    if not (0.0 <= phi <= 2.0 * math.pi):
        raise DomainError(f"phi must lie in [0, 2*pi], got {phi!r}")


def _bloch_weights(theta: float) -> tuple[float, float]:
    """Half-angle weights (cos, sin); pinned so both poles are exact."""
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    if theta == math.pi:  # cos(pi/2) rounds to 6.1e-17, not 0
        c = 0.0
    return c, s


@dataclass(frozen=True)
class PhotonPairConfig:
    """One photon pair: frequencies (hartree), entanglement time (a.u.),
    and linear polarization unit vectors. Default polarizations are crossed."""

    omega1: float
    omega2: float
    t_e: float
    pol1: np.ndarray = field(default_factory=lambda: POL_X)
    pol2: np.ndarray = field(default_factory=lambda: POL_Y)

    def __post_init__(self):
        if not (self.omega1 > 0.0 and self.omega2 > 0.0):
            raise DomainError(
                f"photon frequencies must be positive, got "
                f"({self.omega1!r}, {self.omega2!r})"
            )
        if not (self.t_e >= 0.0):
            raise DomainError(f"entanglement time must be >= 0, got {self.t_e!r}")
        object.__setattr__(self, "pol1", _unit_vector(self.pol1, "pol1"))
        object.__setattr__(self, "pol2", _unit_vector(self.pol2, "pol2"))

    @property
    def total(self) -> float:
        """Total two-photon frequency in hartree."""
        return self.omega1 + self.omega2


@dataclass(frozen=True)
class LinewidthParams:
    """Intermediate linewidth kappa and final linewidth gamma (hartree), plus
    the entanglement area (cm^2)."""

    kappa: float
    gamma: float
    area: float

    def __post_init__(self):
        for name in ("kappa", "gamma", "area"):
            if not (getattr(self, name) > 0.0):
                raise DomainError(
                    f"{name} must be strictly positive, got {getattr(self, name)!r}"
                )


@dataclass(frozen=True)
class McsConfig:
    """A color superposition of a monochromatic and a bichromatic pair,
    parameterized by Bloch angles theta (polar) and phi (azimuthal)."""

    mc: PhotonPairConfig
    bc: PhotonPairConfig
    theta: float
    phi: float

    def __post_init__(self):
        _check_bloch_angles(self.theta, self.phi)
        if abs(self.mc.total - self.bc.total) > ENERGY_CONSERVATION_TOL:
            raise DomainError(
                "MC and BC pairs must share the same total frequency "
                f"(energy conservation): {self.mc.total!r} vs {self.bc.total!r}"
            )

    @property
    def total(self) -> float:
        return self.mc.total


def resolvent_factor(omega_j, omega: float, kappa: float, t_e: float):
    """Per-intermediate-state factor

        {1 - exp[-i (w_j - w - i*kappa) T]} / (w_j - w - i*kappa)

    kappa > 0 keeps the denominator away from zero for any real detuning.
    Vectorized over ``omega_j``.
    """
    if not (kappa > 0.0):
        raise DomainError(f"kappa must be positive, got {kappa!r}")
    z = np.asarray(omega_j, dtype=complex) - omega - 1j * kappa
    return (1.0 - np.exp(-1j * t_e * z)) / z


def transition_tensor(
    model: ExcitedStateSet,
    f: int,
    omega1: float,
    omega2: float,
    kappa: float,
    t_e: float,
) -> np.ndarray:
    """3x3 complex two-photon tensor for the transition into state f.

    M[a, b] sums mu_{fj}^a mu_{j0}^b over intermediate states j weighted by
    the resolvent at omega1, plus the same with tensor indices and photon
    frequency exchanged. Contracting pol2 . M . pol1 gives the scalar
    amplitude with both photon orderings included.
    """
    f = model.check_state_index(f)
    d1 = resolvent_factor(model.energies, omega1, kappa, t_e)
    d2 = resolvent_factor(model.energies, omega2, kappa, t_e)
    mu_fj = model.interstate_dipoles[f - 1]
    mu_j0 = model.ground_dipoles
    first = np.einsum("j,ja,jb->ab", d1, mu_fj, mu_j0)
    second = np.einsum("j,jb,ja->ab", d2, mu_fj, mu_j0)
    return first + second


def s_amplitude(tensor, pol1, pol2) -> complex:
    """Contract the transition tensor with unit polarizations: pol2 . M . pol1."""
    m = np.asarray(tensor, dtype=complex)
    if m.shape != (3, 3):
        raise DomainError(f"tensor must be 3x3, got shape {m.shape}")
    e1 = _unit_vector(pol1, "pol1")
    e2 = _unit_vector(pol2, "pol2")
    return complex(e2 @ m @ e1)


def w_amplitude(s: complex, omega1: float, omega2: float, t_e: float) -> complex:
    """Scale the scalar amplitude by sqrt(omega1*omega2/t_e).

    t_e must be strictly positive; the t_e -> 0 limit is handled by callers
    evaluating at small positive times (the resolvent bracket vanishes there).
    """
    if not (t_e > 0.0):
        raise DomainError(f"t_e must be positive, got {t_e!r}")
    return complex(math.sqrt(omega1 * omega2 / t_e) * s)


def w_superposed(w_mc: complex, w_bc: complex, theta: float, phi: float) -> complex:
    """Bloch-sphere superposition cos(theta/2) w_mc + sin(theta/2) e^{i phi} w_bc."""
    _check_bloch_angles(theta, phi)
    c, s = _bloch_weights(theta)
    return complex(c * w_mc + s * np.exp(1j * phi) * w_bc)


def lineshape(delta_omega, gamma: float):
    """Unit-normalized Lorentzian (1/pi) (gamma/2) / (dw^2 + (gamma/2)^2).

    Evaluated as peak / (1 + (2 dw / gamma)^2) so the peak value 2/(pi*gamma)
    and the half-maximum at dw = gamma/2 are exact. Vectorized over
    ``delta_omega``.
    """
    if not (gamma > 0.0):
        raise DomainError(f"gamma must be positive, got {gamma!r}")
    u = 2.0 * np.asarray(delta_omega, dtype=float) / gamma
    out = (2.0 / (math.pi * gamma)) / (1.0 + u * u)
    return float(out) if out.ndim == 0 else out
