"""Cross-section assembly: single transitions, spectra, time sweeps, Bloch scans.

Pair-absorption cross sections come out in cm^2 as

    sigma = prefactor(area) * lineshape(omega_T - E_f) * <|W|^2>

where <|W|^2> carries the pair flux factor omega1*omega2/t_e and either an
isotropic orientation average of the transition tensor or a fixed-orientation
contraction with the pair polarizations. Color-superposed pairs mix the
monochromatic and bichromatic amplitudes on the Bloch sphere before squaring,
which brings in the orientation-averaged cross bilinear of the two tensors.
Classical two-photon cross sections (GM) use the long-time limit of the
resolvent and degenerate photons.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .amplitudes import (
    LinewidthParams,
    McsConfig,
    PhotonPairConfig,
    _bloch_weights,
    _check_bloch_angles,
    lineshape,
    s_amplitude,
    transition_tensor,
)
from .averaging import (
    PolarizationScheme,
    bilinear_isotropic_average,
    scheme_for_polarizations,
)
from .constants import (
    CODATA2018,
    TPA_AU_CM4S,
    cm4s_to_gm,
    cross_section_prefactor,
    ev_to_hartree,
    fs_to_au_time,
    hartree_to_ev,
    au_time_to_fs,
)
from .errors import DomainError
from .molecule import ExcitedStateSet

# Default quantum-pair parameters: final/intermediate linewidths, quantum
# area, and entanglement times. The 75 fs value is a stock preset for runs
# where the bichromatic arm has a shorter entanglement time than the
# monochromatic one.
DEFAULT_GAMMA_EV = 1e-8
DEFAULT_KAPPA_EV = 0.01
DEFAULT_AREA_CM2 = 1e-8
DEFAULT_TE_FS = 100.0
DEFAULT_TE_PRIME_FS = 100.0
SHORT_TE_PRIME_FS = 75.0
DEFAULT_BC_SPLIT = (1.0 / 3.0, 2.0 / 3.0)

# Classical-comparison linewidths.
CTPA_GAMMA_EV = 0.1
CTPA_KAPPA_EV = 0.05

# Classical prefactor: sigma_au = CTPA_PREFACTOR * omega^2 * g * delta with
# everything in a.u.; 8 pi^3 alpha^2 is the plane-wave second-order golden
# rule value for a single degenerate beam. Override via the environment
# variable below (or per call) to recalibrate against another convention.
DEFAULT_CTPA_PREFACTOR_AU = 8.0 * math.pi**3 * CODATA2018.alpha**2
CTPA_PREFACTOR_ENV = "TWOPHOTON_CTPA_PREFACTOR_AU"

SPECTRUM_MODES = ("mc", "bc", "mcs", "ctpa")


def default_linewidths(area_cm2: float = DEFAULT_AREA_CM2) -> LinewidthParams:
    """Quantum-pair linewidth defaults (hartree) with the given area."""
    return LinewidthParams(
        kappa=ev_to_hartree(DEFAULT_KAPPA_EV),
        gamma=ev_to_hartree(DEFAULT_GAMMA_EV),
        area=area_cm2,
    )


def classical_linewidths(area_cm2: float = DEFAULT_AREA_CM2) -> LinewidthParams:
    """Classical-comparison linewidths (hartree); area is carried but unused."""
    return LinewidthParams(
        kappa=ev_to_hartree(CTPA_KAPPA_EV),
        gamma=ev_to_hartree(CTPA_GAMMA_EV),
        area=area_cm2,
    )


def ctpa_prefactor_au(override: float | None = None) -> float:
    """Resolve the classical prefactor: explicit override, else env, else default."""
    if override is not None:
        return float(override)
    raw = os.environ.get(CTPA_PREFACTOR_ENV)
    return float(raw) if raw is not None else DEFAULT_CTPA_PREFACTOR_AU


@dataclass(frozen=True)
class CrossSectionResult:
    """One cross-section value plus an echo of every input that shaped it.

    Quantum values are in cm^2, classical comparisons in GM; exactly one of
    the two is set. ``omega_h_ev`` is half the total two-photon frequency.
    """

    omega_h_ev: float
    value_cm2: float | None
    value_gm: float | None
    metadata: dict

    def __post_init__(self):
        if (self.value_cm2 is None) == (self.value_gm is None):
            raise DomainError("exactly one of value_cm2/value_gm must be set")
        value = self.value_cm2 if self.value_cm2 is not None else self.value_gm
        if not (value >= 0.0):
            raise DomainError(f"cross section must be non-negative, got {value!r}")

    @property
    def value(self) -> float:
        return self.value_cm2 if self.value_cm2 is not None else self.value_gm


@dataclass(frozen=True)
class ScanGrid:
    """Bloch-scan output: theta/phi sample arrays and the cell matrix."""

    theta_rad: np.ndarray
    phi_rad: np.ndarray
    cells: tuple

    def __post_init__(self):
        t = np.asarray(self.theta_rad, dtype=float)
        p = np.asarray(self.phi_rad, dtype=float)
        if len(self.cells) != t.size or any(len(row) != p.size for row in self.cells):
            raise DomainError("scan matrix dimensions must match the axis grids")
        object.__setattr__(self, "theta_rad", t)
        object.__setattr__(self, "phi_rad", p)

    @property
    def values_cm2(self) -> np.ndarray:
        return np.array([[cell.value_cm2 for cell in row] for row in self.cells])


def _clamp(x: float) -> float:
    # squared magnitudes may come out a hair negative from cancellation
    return x if x > 0.0 else 0.0


def _pair_flux(pair: PhotonPairConfig) -> float:
    if not (pair.t_e > 0.0):
        raise DomainError(
            f"entanglement time must be positive for cross sections, got {pair.t_e!r}"
        )
    return pair.omega1 * pair.omega2 / pair.t_e


def _resolve_scheme(
    scheme: PolarizationScheme | None, pair: PhotonPairConfig
) -> PolarizationScheme:
    if scheme is not None:
        return scheme
    return scheme_for_polarizations(pair.pol1, pair.pol2)


def _mean_square(model, f, pair, kappa, averaged, scheme) -> float:
    """<|S|^2> over orientations, or |S|^2 at the pair's fixed orientation."""
    tensor = transition_tensor(model, f, pair.omega1, pair.omega2, kappa, pair.t_e)
    if averaged:
        return _clamp(bilinear_isotropic_average(tensor, tensor, scheme).real)
    return abs(s_amplitude(tensor, pair.pol1, pair.pol2)) ** 2


def _echo_common(lw: LinewidthParams, averaged, scheme) -> dict:
    return {
        "kappa_ev": hartree_to_ev(lw.kappa),
        "gamma_ev": hartree_to_ev(lw.gamma),
        "area_cm2": lw.area,
        "averaged": bool(averaged),
        "scheme": scheme.value if scheme is not None else None,
    }


def etpa_cross_section(
    model: ExcitedStateSet,
    f: int,
    pair: PhotonPairConfig,
    lw: LinewidthParams,
    averaged: bool = True,
    scheme: PolarizationScheme | None = None,
) -> CrossSectionResult:
    """Entangled-pair absorption cross section in cm^2 for final state f."""
    f = model.check_state_index(f)
    used_scheme = _resolve_scheme(scheme, pair) if averaged else None
    s2 = _mean_square(model, f, pair, lw.kappa, averaged, used_scheme)
    value = _pair_flux(pair) * s2
    g = lineshape(pair.total - model.energy(f), lw.gamma)
    sigma = cross_section_prefactor(lw.area) * g * value
    meta = _echo_common(lw, averaged, used_scheme)
    meta.update(
        mode="etpa",
        final_state=f,
        omega1_ev=hartree_to_ev(pair.omega1),
        omega2_ev=hartree_to_ev(pair.omega2),
        te_fs=au_time_to_fs(pair.t_e),
    )
    if not averaged:
        meta["pol1"] = [float(x) for x in pair.pol1]
        meta["pol2"] = [float(x) for x in pair.pol2]
    return CrossSectionResult(
        omega_h_ev=hartree_to_ev(0.5 * pair.total),
        value_cm2=sigma,
        value_gm=None,
        metadata=meta,
    )


def _mcs_bilinears(model, f, mc, bc, kappa, averaged, scheme):
    """The three amplitude bilinears feeding the Bloch mix: |W_MC|^2-like,
    |W_BC|^2-like, and the complex MC x BC cross term."""
    tensor_mc = transition_tensor(model, f, mc.omega1, mc.omega2, kappa, mc.t_e)
    tensor_bc = transition_tensor(model, f, bc.omega1, bc.omega2, kappa, bc.t_e)
    flux_mc = _pair_flux(mc)
    flux_bc = _pair_flux(bc)
    if averaged:
        if scheme is None:
            scheme = scheme_for_polarizations(mc.pol1, mc.pol2)
            if scheme_for_polarizations(bc.pol1, bc.pol2) is not scheme:
                raise DomainError(
                    "MC and BC pairs must share the same polarization geometry"
                )
        a_mm = flux_mc * _clamp(
            bilinear_isotropic_average(tensor_mc, tensor_mc, scheme).real
        )
        a_bb = flux_bc * _clamp(
            bilinear_isotropic_average(tensor_bc, tensor_bc, scheme).real
        )
        a_bm = math.sqrt(flux_mc * flux_bc) * bilinear_isotropic_average(
            tensor_bc, tensor_mc, scheme
        )
    else:
        s_mc = s_amplitude(tensor_mc, mc.pol1, mc.pol2)
        s_bc = s_amplitude(tensor_bc, bc.pol1, bc.pol2)
        a_mm = flux_mc * abs(s_mc) ** 2
        a_bb = flux_bc * abs(s_bc) ** 2
        a_bm = math.sqrt(flux_mc * flux_bc) * (s_bc * np.conj(s_mc))
    return a_mm, a_bb, a_bm, scheme


def _mix(theta: float, phi: float, a_mm: float, a_bb: float, a_bm: complex) -> float:
    """|cos(t/2) W_MC + sin(t/2) e^{i phi} W_BC|^2 from precomputed bilinears."""
    _check_bloch_angles(theta, phi)
    c, s = _bloch_weights(theta)
    cross = (np.exp(1j * phi) * a_bm).real
    return _clamp(c * c * a_mm + s * s * a_bb + 2.0 * c * s * cross)


def mcs_cross_section(
    model: ExcitedStateSet,
    f: int,
    mcs: McsConfig,
    lw: LinewidthParams,
    averaged: bool = True,
    scheme: PolarizationScheme | None = None,
) -> CrossSectionResult:
    """Cross section in cm^2 for a color-superposed pair hitting state f."""
    f = model.check_state_index(f)
    a_mm, a_bb, a_bm, used_scheme = _mcs_bilinears(
        model, f, mcs.mc, mcs.bc, lw.kappa, averaged, scheme if averaged else None
    )
    mixed = _mix(mcs.theta, mcs.phi, a_mm, a_bb, a_bm)
    g = lineshape(mcs.total - model.energy(f), lw.gamma)
    sigma = cross_section_prefactor(lw.area) * g * mixed
    meta = _echo_common(lw, averaged, used_scheme)
    meta.update(
        mode="mcs",
        final_state=f,
        theta_rad=float(mcs.theta),
        phi_rad=float(mcs.phi),
        omega1_ev=hartree_to_ev(mcs.mc.omega1),
        omega2_ev=hartree_to_ev(mcs.mc.omega2),
        omega1_bc_ev=hartree_to_ev(mcs.bc.omega1),
        omega2_bc_ev=hartree_to_ev(mcs.bc.omega2),
        te_fs=au_time_to_fs(mcs.mc.t_e),
        te_prime_fs=au_time_to_fs(mcs.bc.t_e),
    )
    return CrossSectionResult(
        omega_h_ev=hartree_to_ev(0.5 * mcs.total),
        value_cm2=sigma,
        value_gm=None,
        metadata=meta,
    )


def ctpa_cross_section(
    model: ExcitedStateSet,
    f: int,
    omega_h: float,
    lw: LinewidthParams,
    averaged: bool = True,
    scheme: PolarizationScheme | None = None,
    prefactor_au: float | None = None,
) -> CrossSectionResult:
    """Classical degenerate two-photon cross section in GM for state f.

    Uses the long-time limit of the resolvent, 1 / (E_j - omega - i*kappa),
    both photons at omega_h, and sigma_au = prefactor * omega_h^2 * g * delta
    converted from a.u. of cm^4 s. ``lw`` should carry the classical
    linewidths (see ``classical_linewidths``).
    """
    f = model.check_state_index(f)
    if not (omega_h > 0.0):
        raise DomainError(f"omega_h must be positive, got {omega_h!r}")
    used_scheme = scheme if scheme is not None else PolarizationScheme.PERPENDICULAR
    d = 1.0 / (model.energies - omega_h - 1j * lw.kappa)
    half = np.einsum(
        "j,ja,jb->ab", d, model.interstate_dipoles[f - 1], model.ground_dipoles
    )
    tensor = half + half.T
    if averaged:
        delta = _clamp(bilinear_isotropic_average(tensor, tensor, used_scheme).real)
    else:
        e1, e2 = used_scheme.lab_vectors()
        delta = abs(s_amplitude(tensor, e1, e2)) ** 2
    g = lineshape(2.0 * omega_h - model.energy(f), lw.gamma)
    prefactor = ctpa_prefactor_au(prefactor_au)
    sigma_au = prefactor * omega_h**2 * g * delta
    meta = _echo_common(lw, averaged, used_scheme)
    meta.update(mode="ctpa", final_state=f, prefactor_au=prefactor)
    return CrossSectionResult(
        omega_h_ev=hartree_to_ev(omega_h),
        value_cm2=None,
        value_gm=cm4s_to_gm(sigma_au * TPA_AU_CM4S),
        metadata=meta,
    )


def _normalize_split(split) -> tuple[float, float]:
    try:
        s1, s2 = (float(x) for x in split)
    except (TypeError, ValueError):
        raise DomainError(f"split must be two numbers, got {split!r}") from None
    if not (s1 > 0.0 and s2 > 0.0 and math.isfinite(s1) and math.isfinite(s2)):
        raise DomainError(f"split fractions must be positive, got {split!r}")
    total = s1 + s2
    return s1 / total, s2 / total


def spectrum(
    model: ExcitedStateSet,
    f_list,
    pair_template: PhotonPairConfig | None,
    lw: LinewidthParams,
    omega_h_grid_ev,
    mode: str,
    *,
    theta: float = 0.0,
    phi: float = 0.0,
    t_e_prime: float | None = None,
    split=DEFAULT_BC_SPLIT,
    averaged: bool = True,
    scheme: PolarizationScheme | None = None,
    window: float | None = None,
) -> list[CrossSectionResult]:
    """Cross-section curve over a half-frequency grid (eV, ascending).

    At each grid point the total frequency is 2*omega_h; final states from
    ``f_list`` whose excitation energy lies within ``window`` (hartree,
    default 10x the final linewidth) of that total contribute, incoherently
    summed. Modes: 'mc' (degenerate pair), 'bc' (pair split per ``split``),
    'mcs' (Bloch superposition of the two, using ``theta``/``phi`` and
    ``t_e_prime`` for the bichromatic arm), 'ctpa' (classical comparison,
    in GM; ``lw`` should then hold the classical linewidths).
    """
    mode = str(mode).lower()
    if mode not in SPECTRUM_MODES:
        raise DomainError(f"mode must be one of {SPECTRUM_MODES}, got {mode!r}")
    grid = np.asarray(omega_h_grid_ev, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("omega_h grid must be a non-empty 1-d array")
    if np.any(np.diff(grid) < 0.0):
        raise DomainError("omega_h grid must be sorted ascending")
    f_list = [model.check_state_index(f) for f in f_list]
    if mode != "ctpa" and pair_template is None:
        raise DomainError(f"mode {mode!r} needs a photon-pair template")
    if mode == "mcs":
        _check_bloch_angles(theta, phi)
    split = _normalize_split(split)
    window_ha = 10.0 * lw.gamma if window is None else float(window)
    if not (window_ha > 0.0):
        raise DomainError(f"window must be positive, got {window!r}")

    results = []
    for point_ev in grid:
        omega_h = ev_to_hartree(float(point_ev))
        omega_t = 2.0 * omega_h
        selected = [
            f for f in f_list if abs(model.energy(f) - omega_t) <= window_ha
        ]
        total = 0.0
        meta_scheme = scheme
        for f in selected:
            if mode == "ctpa":
                res = ctpa_cross_section(model, f, omega_h, lw, averaged, scheme)
            elif mode == "mc":
                pair = replace(pair_template, omega1=omega_h, omega2=omega_h)
                res = etpa_cross_section(model, f, pair, lw, averaged, scheme)
            elif mode == "bc":
                pair = replace(
                    pair_template, omega1=split[0] * omega_t, omega2=split[1] * omega_t
                )
                res = etpa_cross_section(model, f, pair, lw, averaged, scheme)
            else:  # mcs
                mc = replace(pair_template, omega1=omega_h, omega2=omega_h)
                bc = replace(
                    pair_template,
                    omega1=split[0] * omega_t,
                    omega2=split[1] * omega_t,
                    t_e=pair_template.t_e if t_e_prime is None else t_e_prime,
                )
                cfg = McsConfig(mc=mc, bc=bc, theta=theta, phi=phi)
                res = mcs_cross_section(model, f, cfg, lw, averaged, scheme)
            total += res.value
            meta_scheme = res.metadata["scheme"]
        meta = _echo_common(lw, averaged, None)
        meta["scheme"] = meta_scheme if selected else (
            scheme.value if scheme is not None else None
        )
        meta.update(
            mode=mode,
            window_ev=hartree_to_ev(window_ha),
            contributing_states=selected,
        )
        if mode != "ctpa":
            meta["te_fs"] = au_time_to_fs(pair_template.t_e)
        if mode == "mcs":
            meta["theta_rad"] = float(theta)
            meta["phi_rad"] = float(phi)
            meta["te_prime_fs"] = au_time_to_fs(
                pair_template.t_e if t_e_prime is None else t_e_prime
            )
        if mode in ("bc", "mcs"):
            meta["split"] = list(split)
        results.append(
            CrossSectionResult(
                omega_h_ev=float(point_ev),
                value_cm2=None if mode == "ctpa" else total,
                value_gm=total if mode == "ctpa" else None,
                metadata=meta,
            )
        )
    return results


def te_sweep(
    model: ExcitedStateSet,
    f: int,
    pair_template: PhotonPairConfig,
    lw: LinewidthParams,
    te_grid_fs,
    averaged: bool = True,
    scheme: PolarizationScheme | None = None,
) -> list[CrossSectionResult]:
    """Cross section versus entanglement time (fs) at fixed pair frequencies."""
    grid = np.asarray(te_grid_fs, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("te grid must be a non-empty 1-d array")
    if np.any(grid <= 0.0):
        raise DomainError("entanglement times must be positive")
    results = []
    for te_fs in grid:
        pair = replace(pair_template, t_e=fs_to_au_time(float(te_fs)))
        results.append(etpa_cross_section(model, f, pair, lw, averaged, scheme))
    return results


def bloch_scan(
    model: ExcitedStateSet,
    f: int,
    mcs_template: McsConfig,
    lw: LinewidthParams,
    theta_grid,
    phi_grid,
    averaged: bool = True,
    scheme: PolarizationScheme | None = None,
) -> ScanGrid:
    """Matrix of color-superposition cross sections over theta x phi (radians).

    The amplitude bilinears do not depend on the Bloch angles, so they are
    computed once; every cell then matches ``mcs_cross_section`` at the same
    angles exactly.
    """
    f = model.check_state_index(f)
    thetas = np.asarray(theta_grid, dtype=float)
    phis = np.asarray(phi_grid, dtype=float)
    if thetas.ndim != 1 or thetas.size == 0 or phis.ndim != 1 or phis.size == 0:
        raise DomainError("scan grids must be non-empty 1-d arrays")
    for t in thetas:
        _check_bloch_angles(float(t), 0.0)
    for p in phis:
        _check_bloch_angles(0.0, float(p))
    a_mm, a_bb, a_bm, used_scheme = _mcs_bilinears(
        model,
        f,
        mcs_template.mc,
        mcs_template.bc,
        lw.kappa,
        averaged,
        scheme if averaged else None,
    )
    g = lineshape(mcs_template.total - model.energy(f), lw.gamma)
    prefactor = cross_section_prefactor(lw.area)
    base_meta = _echo_common(lw, averaged, used_scheme)
    base_meta.update(
        mode="mcs",
        final_state=f,
        te_fs=au_time_to_fs(mcs_template.mc.t_e),
        te_prime_fs=au_time_to_fs(mcs_template.bc.t_e),
    )
    omega_h_ev = hartree_to_ev(0.5 * mcs_template.total)
    rows = []
    for t in thetas:
        row = []
        for p in phis:
            sigma = prefactor * g * _mix(float(t), float(p), a_mm, a_bb, a_bm)
            meta = dict(base_meta, theta_rad=float(t), phi_rad=float(p))
            row.append(
                CrossSectionResult(
                    omega_h_ev=omega_h_ev,
                    value_cm2=sigma,
                    value_gm=None,
                    metadata=meta,
                )
            )
        rows.append(tuple(row))
    return ScanGrid(theta_rad=thetas, phi_rad=phis, cells=tuple(rows))
