"""Pinned physical constants and the unit conversions used at I/O boundaries.

All internal math runs in Hartree atomic units. Conversions happen only when
ingesting input (eV, fs) or emitting cross sections (cm^2, GM). The constant
values are pinned CODATA-2018 literals so output is reproducible bit for bit;
nothing else in the package re-declares a physical constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class PhysicalConstants:
    alpha: float  # fine-structure constant (dimensionless)
    bohr_cm: float  # Bohr radius in cm
    tau0_s: float  # atomic unit of time in s
    c_cm_s: float  # speed of light in cm/s
    hartree_ev: float  # Hartree energy in eV
    autime_fs: float  # atomic unit of time in fs
    me_kg: float  # electron mass in kg
    hbar_js: float  # reduced Planck constant in J s


CODATA2018 = PhysicalConstants(
    alpha=7.2973525693e-3,
    bohr_cm=5.29177210903e-9,
    tau0_s=2.4188843265857e-17,
    c_cm_s=2.99792458e10,
    hartree_ev=27.211386245988,
    autime_fs=2.4188843265857e-2,
    me_kg=9.1093837015e-31,
    hbar_js=1.054571817e-34,
)

# One Goeppert-Mayer unit in cm^4 s / photon.
GM_CM4S = 1e-50

# One atomic unit of two-photon cross section (a0^4 * tau0) in cm^4 s.
TPA_AU_CM4S = CODATA2018.bohr_cm**4 * CODATA2018.tau0_s


def ev_to_hartree(x: float) -> float:
    """Convert an energy from eV to hartree."""
    if not math.isfinite(x):
        raise DomainError(f"energy must be finite, got {x!r}")
    return x / CODATA2018.hartree_ev


def hartree_to_ev(x: float) -> float:
    """Convert an energy from hartree to eV."""
    if not math.isfinite(x):
        raise DomainError(f"energy must be finite, got {x!r}")
    return x * CODATA2018.hartree_ev


def fs_to_au_time(t: float) -> float:
    """Convert a time from femtoseconds to atomic units."""
    if not (t >= 0.0):
        raise DomainError(f"time must be non-negative, got {t!r}")
    return t / CODATA2018.autime_fs


def au_time_to_fs(t: float) -> float:
    """Convert a time from atomic units to femtoseconds."""
    if not (t >= 0.0):
        raise DomainError(f"time must be non-negative, got {t!r}")
    return t * CODATA2018.autime_fs


def cross_section_prefactor(area: float) -> float:
    """Dimensional scale 4 pi^3 alpha a0^5 / (A tau0 c) in cm^2.

    ``area`` is the quantum (entanglement) area of the photon pair in cm^2.
    This is the only place where the pair-absorption cross section picks up
    physical units; everything it multiplies is a pure number in a.u.
    """
    if not (area > 0.0):
        raise DomainError(f"entanglement area must be positive, got {area!r}")
    k = CODATA2018
    return 4.0 * math.pi**3 * k.alpha * k.bohr_cm**5 / (area * k.tau0_s * k.c_cm_s)


def cm4s_to_gm(x: float) -> float:
    """Convert a classical two-photon cross section from cm^4 s to GM."""
    if not (x >= 0.0):
        raise DomainError(f"cross section must be non-negative, got {x!r}")
    return x / GM_CM4S
