"""Command-line surface: ingest a molecule document, run one of the
computation modes, and emit a deterministic CSV or JSON table.

Exit codes: 0 success, 2 usage error, 3 input validation failure,
4 numerical domain error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .amplitudes import McsConfig, PhotonPairConfig
from .averaging import PolarizationScheme
from .constants import ev_to_hartree, fs_to_au_time
from .engine import (
    CTPA_GAMMA_EV,
    CTPA_KAPPA_EV,
    DEFAULT_AREA_CM2,
    DEFAULT_GAMMA_EV,
    DEFAULT_KAPPA_EV,
    DEFAULT_TE_FS,
    LinewidthParams,
    _normalize_split,
    bloch_scan,
    ctpa_prefactor_au,
    spectrum,
    te_sweep,
)
from .errors import DomainError, MoleculeError
from .molecule import parse_molecule_file

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_DOMAIN = 4


def _parse_range(text: str) -> list[float]:
    """START:STOP:STEP, endpoints included within half a step."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected START:STOP:STEP, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric range {text!r}") from None
    if not (step > 0.0):
        raise argparse.ArgumentTypeError(f"step must be positive in {text!r}")
    if stop < start:
        raise argparse.ArgumentTypeError(f"stop below start in {text!r}")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    values = [start + i * step for i in range(count)]
    return [v for v in values if v <= stop + 0.5 * step]


def _parse_fraction(text: str) -> float:
    if "/" in text:
        num, _, den = text.partition("/")
        return float(num) / float(den)
    return float(text)


def _parse_split(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}")
    try:
        a, b = (_parse_fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"non-numeric split {text!r}") from None
    if not (a > 0.0 and b > 0.0):
        raise argparse.ArgumentTypeError(f"split fractions must be positive: {text!r}")
    return a, b


def _parse_grid_shape(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected NxM, got {text!r}")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-integer grid {text!r}") from None
    if n < 1 or m < 1:
        raise argparse.ArgumentTypeError(f"grid sides must be >= 1: {text!r}")
    return n, m


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--molecule", type=Path, required=True,
                        help="molecule document (TOML)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", type=Path, default=None,
                        help="output file (default: stdout)")
    common.add_argument("--kappa-ev", type=float, default=None,
                        help="intermediate linewidth in eV")
    common.add_argument("--gamma-ev", type=float, default=None,
                        help="final linewidth in eV")
    common.add_argument("--area-cm2", type=float, default=DEFAULT_AREA_CM2,
                        help="entanglement area in cm^2")
    common.add_argument("--polarization", choices=("perpendicular", "parallel"),
                        default="perpendicular")
    common.add_argument("--fixed-orientation", action="store_true",
                        help="skip orientational averaging")
    common.add_argument("--window-ev", type=float, default=None,
                        help="resonance window around 2*omega_h in eV "
                             "(default: 10x the final linewidth)")

    parser = argparse.ArgumentParser(
        prog="twophoton",
        description="Two-photon absorption cross sections from excited-state data",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ctpa", parents=[common],
                       help="classical two-photon spectrum (GM)")
    p.add_argument("--omega-h", type=_parse_range, required=True,
                   metavar="EV:EV:EV", help="half-frequency grid")

    p = sub.add_parser("etpa", parents=[common],
                       help="entangled-pair spectrum (cm^2)")
    p.add_argument("--omega-h", type=_parse_range, required=True, metavar="EV:EV:EV")
    p.add_argument("--mode", choices=("mc", "bc"), default="mc")
    p.add_argument("--split", type=_parse_split, default=(1.0, 2.0), metavar="A:B",
                   help="bichromatic frequency fractions (default 1/3:2/3)")
    p.add_argument("--te", type=float, default=DEFAULT_TE_FS, metavar="FS")

    p = sub.add_parser("mcs", parents=[common],
                       help="color-superposition spectrum at fixed Bloch angles")
    p.add_argument("--omega-h", type=_parse_range, required=True, metavar="EV:EV:EV")
    p.add_argument("--theta", type=float, default=0.0, metavar="DEG")
    p.add_argument("--phi", type=float, default=0.0, metavar="DEG")
    p.add_argument("--te", type=float, default=DEFAULT_TE_FS, metavar="FS")
    p.add_argument("--te-prime", type=float, default=None, metavar="FS",
                   help="bichromatic-arm entanglement time (default: --te)")
    p.add_argument("--split", type=_parse_split, default=(1.0, 2.0), metavar="A:B")

    p = sub.add_parser("mcs-scan", parents=[common],
                       help="color-superposition scan over the Bloch sphere")
    p.add_argument("--omega-h", type=float, required=True, metavar="EV")
    p.add_argument("--grid", type=_parse_grid_shape, default=(37, 73), metavar="NxM",
                   help="theta x phi sample counts (default 37x73)")
    p.add_argument("--te", type=float, default=DEFAULT_TE_FS, metavar="FS")
    p.add_argument("--te-prime", type=float, default=None, metavar="FS")
    p.add_argument("--split", type=_parse_split, default=(1.0, 2.0), metavar="A:B")
    p.add_argument("--final-state", type=int, default=0,
                   help="1-based final state (default: closest to 2*omega_h)")

    p = sub.add_parser("te-sweep", parents=[common],
                       help="cross section versus entanglement time")
    p.add_argument("--te-range", type=_parse_range, required=True, metavar="FS:FS:FS")
    p.add_argument("--omega-h", type=float, required=True, metavar="EV")
    p.add_argument("--final-state", type=int, default=0,
                   help="1-based final state (default: closest to 2*omega_h)")

    return parser


def _resolve_linewidths(args) -> tuple[LinewidthParams, float, float]:
    """Fill per-command linewidth defaults; returns (params, kappa_ev, gamma_ev)."""
    classical = args.command == "ctpa"
    kappa_ev = args.kappa_ev if args.kappa_ev is not None else (
        CTPA_KAPPA_EV if classical else DEFAULT_KAPPA_EV
    )
    gamma_ev = args.gamma_ev if args.gamma_ev is not None else (
        CTPA_GAMMA_EV if classical else DEFAULT_GAMMA_EV
    )
    lw = LinewidthParams(
        kappa=ev_to_hartree(kappa_ev),
        gamma=ev_to_hartree(gamma_ev),
        area=args.area_cm2,
    )
    return lw, kappa_ev, gamma_ev


def _scheme(args) -> PolarizationScheme:
    if args.polarization == "parallel":
        return PolarizationScheme.PARALLEL
    return PolarizationScheme.PERPENDICULAR


def _pair_template(args, scheme: PolarizationScheme) -> PhotonPairConfig:
    pol1, pol2 = scheme.lab_vectors()
    te_fs = getattr(args, "te", DEFAULT_TE_FS)
    # placeholder frequencies; the engine fills them per grid point
    return PhotonPairConfig(1.0, 1.0, fs_to_au_time(te_fs), pol1, pol2)


def _auto_final_state(model, requested: int, omega_h_ev: float) -> int:
    if requested:
        return model.check_state_index(requested)
    omega_t = 2.0 * ev_to_hartree(omega_h_ev)
    return int(np.argmin(np.abs(model.energies - omega_t))) + 1


def _fmt9(v) -> str:
    return f"{v:.9g}" if isinstance(v, float) else str(v)


def _csv_document(manifest: dict, columns, rows) -> str:
    lines = [
        "# manifest: " + json.dumps(manifest, sort_keys=True, separators=(",", ":")),
        ",".join(columns),
    ]
    lines.extend(",".join(_fmt9(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_document(manifest: dict, axes: dict, values) -> str:
    doc = {"manifest": manifest, "axes": axes, "values": values}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _manifest(args, parameters: dict, molecule_bytes: bytes) -> dict:
    return {
        "command": args.command,
        "parameters": parameters,
        "molecule_sha256": hashlib.sha256(molecule_bytes).hexdigest(),
        "format": args.format,
        "version": __version__,
    }


def _common_parameters(args, lw_ev_pair: tuple[float, float]) -> dict:
    return {
        "kappa_ev": lw_ev_pair[0],
        "gamma_ev": lw_ev_pair[1],
        "area_cm2": args.area_cm2,
        "polarization": args.polarization,
        "averaged": not args.fixed_orientation,
        "window_ev": args.window_ev,
    }


def _run(args) -> str:
    molecule_bytes = args.molecule.read_bytes()
    model = parse_molecule_file(molecule_bytes.decode("utf-8"))
    lw, kappa_ev, gamma_ev = _resolve_linewidths(args)
    scheme = _scheme(args)
    averaged = not args.fixed_orientation
    window = None if args.window_ev is None else ev_to_hartree(args.window_ev)
    params = _common_parameters(args, (kappa_ev, gamma_ev))
    all_states = list(range(1, model.n_states + 1))

    if args.command == "ctpa":
        params["omega_h_ev"] = args.omega_h
        params["ctpa_prefactor_au"] = ctpa_prefactor_au()
        results = spectrum(
            model, all_states, None, lw, args.omega_h, "ctpa",
            averaged=averaged, scheme=scheme, window=window,
        )
        manifest = _manifest(args, params, molecule_bytes)
        sigmas = [r.value_gm for r in results]
        if args.format == "json":
            return _json_document(manifest, {"omega_h_ev": args.omega_h}, sigmas)
        rows = list(zip(args.omega_h, sigmas))
        return _csv_document(manifest, ("omega_h_ev", "sigma_gm"), rows)

    if args.command == "etpa":
        params.update(omega_h_ev=args.omega_h, mode=args.mode,
                      split=list(_normalize_split(args.split)), te_fs=args.te)
        pair = _pair_template(args, scheme)
        results = spectrum(
            model, all_states, pair, lw, args.omega_h, args.mode,
            split=args.split, averaged=averaged, scheme=scheme, window=window,
        )
        manifest = _manifest(args, params, molecule_bytes)
        sigmas = [r.value_cm2 for r in results]
        if args.format == "json":
            return _json_document(manifest, {"omega_h_ev": args.omega_h}, sigmas)
        rows = list(zip(args.omega_h, sigmas))
        return _csv_document(manifest, ("omega_h_ev", "sigma_cm2"), rows)

    if args.command == "mcs":
        te_prime = args.te if args.te_prime is None else args.te_prime
        params.update(omega_h_ev=args.omega_h, theta_deg=args.theta,
                      phi_deg=args.phi, split=list(_normalize_split(args.split)),
                      te_fs=args.te, te_prime_fs=te_prime)
        pair = _pair_template(args, scheme)
        results = spectrum(
            model, all_states, pair, lw, args.omega_h, "mcs",
            theta=math.radians(args.theta), phi=math.radians(args.phi),
            t_e_prime=fs_to_au_time(te_prime), split=args.split,
            averaged=averaged, scheme=scheme, window=window,
        )
        manifest = _manifest(args, params, molecule_bytes)
        sigmas = [r.value_cm2 for r in results]
        if args.format == "json":
            return _json_document(manifest, {"omega_h_ev": args.omega_h}, sigmas)
        rows = list(zip(args.omega_h, sigmas))
        return _csv_document(manifest, ("omega_h_ev", "sigma_cm2"), rows)

    if args.command == "mcs-scan":
        te_prime = args.te if args.te_prime is None else args.te_prime
        omega_h = ev_to_hartree(args.omega_h)
        omega_t = 2.0 * omega_h
        f = _auto_final_state(model, args.final_state, args.omega_h)
        s1, s2 = _normalize_split(args.split)
        params.update(omega_h_ev=args.omega_h, grid=list(args.grid),
                      split=[s1, s2], te_fs=args.te,
                      te_prime_fs=te_prime, final_state=f)
        pol1, pol2 = _scheme(args).lab_vectors()
        mc = PhotonPairConfig(omega_h, omega_h, fs_to_au_time(args.te), pol1, pol2)
        bc = PhotonPairConfig(s1 * omega_t, s2 * omega_t,
                              fs_to_au_time(te_prime), pol1, pol2)
        template = McsConfig(mc=mc, bc=bc, theta=0.0, phi=0.0)
        thetas_deg = np.linspace(0.0, 180.0, args.grid[0])
        phis_deg = np.linspace(0.0, 360.0, args.grid[1])
        scan = bloch_scan(
            model, f, template, lw,
            np.radians(thetas_deg), np.radians(phis_deg),
            averaged=averaged, scheme=scheme,
        )
        manifest = _manifest(args, params, molecule_bytes)
        if args.format == "json":
            axes = {
                "theta_deg": [float(t) for t in thetas_deg],
                "phi_deg": [float(p) for p in phis_deg],
            }
            values = [[cell.value_cm2 for cell in row] for row in scan.cells]
            return _json_document(manifest, axes, values)
        rows = [
            (float(t), float(p), cell.value_cm2)
            for t, row in zip(thetas_deg, scan.cells)
            for p, cell in zip(phis_deg, row)
        ]
        return _csv_document(manifest, ("theta_deg", "phi_deg", "sigma_cm2"), rows)

    if args.command == "te-sweep":
        f = _auto_final_state(model, args.final_state, args.omega_h)
        params.update(omega_h_ev=args.omega_h, te_range_fs=args.te_range,
                      final_state=f)
        omega_h = ev_to_hartree(args.omega_h)
        pol1, pol2 = scheme.lab_vectors()
        pair = PhotonPairConfig(
            omega_h, omega_h, fs_to_au_time(args.te_range[0]), pol1, pol2
        )
        results = te_sweep(
            model, f, pair, lw, args.te_range, averaged=averaged, scheme=scheme
        )
        manifest = _manifest(args, params, molecule_bytes)
        sigmas = [r.value_cm2 for r in results]
        if args.format == "json":
            return _json_document(manifest, {"te_fs": args.te_range}, sigmas)
        rows = list(zip(args.te_range, sigmas))
        return _csv_document(manifest, ("te_fs", "sigma_cm2"), rows)

    raise DomainError(f"unknown command {args.command!r}")  # pragma: no cover


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        text = _run(args)
    except FileNotFoundError as exc:
        print(f"error: molecule file not found: {exc.filename}", file=sys.stderr)
        return EXIT_INPUT
    except MoleculeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text, encoding="utf-8")
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
