"""Excited-state datasets: energies and transition dipoles for the state sums.

States are labeled 1..n; the ground state is the implicit label 0 and is the
zero of energy. The canonical molecule document is TOML with four fields:

    n_states = 2                      # number of excited states
    energies_ev = [1.64, 3.28]        # excitation energies, ascending, eV
    ground_dipoles_au = [[x, y, z], ...]          # mu_{j0}, one per state, a.u.
    interstate_dipoles_au = [[[x, y, z], ...], ...]  # mu_{fj}, n x n, a.u.

``interstate_dipoles_au[f-1][j-1]`` is the transition dipole between excited
states f and j and must equal its transpose partner (real matrix elements);
mismatches up to 1e-8 a.u. are averaged away, larger ones are rejected.
Energies are converted to hartree when the document is read.

``render_molecule_file`` additionally writes ``energies_hartree`` (the exact
machine numbers). When present it takes precedence over ``energies_ev``, which
keeps write/read round trips bit-identical; the eV values remain the canonical
hand-authored input. A reference document ships at data/sample_molecule.toml.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .constants import ev_to_hartree, hartree_to_ev
from .errors import DomainError, MoleculeError

# Largest tolerated |mu_{fj} - mu_{jf}| before a document is rejected, a.u.
DIPOLE_SYMMETRY_TOL = 1e-8


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ExcitedStateSet:
    """Immutable set of excited states; all quantities in atomic units.

    energies: (n,) excitation energies in hartree, ascending.
    ground_dipoles: (n, 3) transition dipoles ground -> state j.
    interstate_dipoles: (n, n, 3) transition dipoles state j -> state f,
        symmetric in the state indices.
    """

    energies: np.ndarray
    ground_dipoles: np.ndarray
    interstate_dipoles: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        g = np.asarray(self.ground_dipoles, dtype=float)
        d = np.asarray(self.interstate_dipoles, dtype=float)
        if e.ndim != 1 or e.size == 0:
            raise MoleculeError("energies: need at least one excited state")
        n = e.size
        if not np.all(np.isfinite(e)):
            raise MoleculeError("energies: all values must be finite")
        if not np.all(e > 0.0):
            raise MoleculeError("energies: all values must be strictly positive")
        if np.any(np.diff(e) < 0.0):
            raise MoleculeError("energies: values must be sorted non-decreasing")
        if g.shape != (n, 3):
            raise MoleculeError(
                f"ground_dipoles: expected shape ({n}, 3), got {g.shape}"
            )
        if d.shape != (n, n, 3):
            raise MoleculeError(
                f"interstate_dipoles: expected shape ({n}, {n}, 3), got {d.shape}"
            )
        if not (np.all(np.isfinite(g)) and np.all(np.isfinite(d))):
            raise MoleculeError("dipoles: all components must be finite")
        skew = np.abs(d - d.transpose(1, 0, 2))
        if skew.max(initial=0.0) > DIPOLE_SYMMETRY_TOL:
            f, j = divmod(int(np.argmax(skew.max(axis=2))), n)
            raise MoleculeError(
                f"interstate_dipoles: pair ({f + 1}, {j + 1}) asymmetric beyond "
                f"{DIPOLE_SYMMETRY_TOL} a.u."
            )
        # symmetrize rounding noise; exact for already-symmetric input
        d = 0.5 * (d + d.transpose(1, 0, 2))
        object.__setattr__(self, "energies", _readonly(e))
        object.__setattr__(self, "ground_dipoles", _readonly(g))
        object.__setattr__(self, "interstate_dipoles", _readonly(d))

    @property
    def n_states(self) -> int:
        return self.energies.size

    def check_state_index(self, f: int) -> int:
        """Validate a 1-based excited-state label and return it."""
        if not isinstance(f, (int, np.integer)) or isinstance(f, bool):
            raise DomainError(f"state index must be an integer, got {f!r}")
        if not 1 <= f <= self.n_states:
            raise DomainError(
                f"state index {f} out of range 1..{self.n_states}"
            )
        return int(f)

    def energy(self, j: int) -> float:
        """Excitation energy of state j in hartree."""
        return float(self.energies[self.check_state_index(j) - 1])

    def ground_dipole(self, j: int) -> np.ndarray:
        return self.ground_dipoles[self.check_state_index(j) - 1]

    def interstate_dipole(self, f: int, j: int) -> np.ndarray:
        return self.interstate_dipoles[
            self.check_state_index(f) - 1, self.check_state_index(j) - 1
        ]


def _require(doc: dict, key: str, kind) -> object:
    if key not in doc:
        raise MoleculeError(f"{key}: required field missing")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise MoleculeError(f"{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def _float_list(raw: object, key: str, length: int) -> list[float]:
    if not isinstance(raw, list) or len(raw) != length:
        raise MoleculeError(f"{key}: expected a list of {length} numbers")
    out = []
    for i, v in enumerate(raw):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise MoleculeError(f"{key}[{i}]: expected a number, got {v!r}")
        out.append(float(v))
    return out


def _vector_table(raw: object, key: str, shape: tuple[int, ...]) -> np.ndarray:
    """Parse a nested list of [x, y, z] vectors into an array of given shape."""
    if shape:
        if not isinstance(raw, list) or len(raw) != shape[0]:
            raise MoleculeError(f"{key}: expected a list of length {shape[0]}")
        return np.array(
            [_vector_table(v, f"{key}[{i}]", shape[1:]) for i, v in enumerate(raw)]
        )
    return np.array(_float_list(raw, key, 3))


def parse_molecule_file(text: str) -> ExcitedStateSet:
    """Parse a molecule document (TOML, schema in the module docstring)."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise MoleculeError(f"molecule document is not valid TOML: {exc}") from exc

    n = _require(doc, "n_states", int)
    if n < 1:
        raise MoleculeError(f"n_states: must be at least 1, got {n}")
    energies_ev = _float_list(_require(doc, "energies_ev", list), "energies_ev", n)
    if "energies_hartree" in doc:
        energies = np.array(
            _float_list(doc["energies_hartree"], "energies_hartree", n)
        )
        roundtrip = np.array([ev_to_hartree(x) for x in energies_ev])
        if np.max(np.abs(energies - roundtrip), initial=0.0) > 1e-9 * np.max(energies):
            raise MoleculeError(
                "energies_hartree: inconsistent with energies_ev beyond rounding"
            )
    else:
        energies = np.array([ev_to_hartree(x) for x in energies_ev])
    ground = _vector_table(
        _require(doc, "ground_dipoles_au", list), "ground_dipoles_au", (n,)
    )
    inter = _vector_table(
        _require(doc, "interstate_dipoles_au", list), "interstate_dipoles_au", (n, n)
    )
    return ExcitedStateSet(energies, ground, inter)


def load_molecule_file(path) -> ExcitedStateSet:
    """Read and parse a molecule document from disk."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_molecule_file(handle.read())


def _fmt(x: float) -> str:
    # repr round-trips binary64 exactly; TOML floats need a '.' or exponent
    s = repr(float(x))
    return s if ("." in s or "e" in s or "E" in s) else s + ".0"


def _fmt_vec(v) -> str:
    return "[" + ", ".join(_fmt(x) for x in v) + "]"


def render_molecule_file(model: ExcitedStateSet) -> str:
    """Serialize a model back to the canonical document, exactly invertible."""
    lines = [f"n_states = {model.n_states}"]
    ev = [_fmt(hartree_to_ev(x)) for x in model.energies]
    lines.append("energies_ev = [" + ", ".join(ev) + "]")
    ha = [_fmt(x) for x in model.energies]
    lines.append("energies_hartree = [" + ", ".join(ha) + "]")
    lines.append("ground_dipoles_au = [")
    for v in model.ground_dipoles:
        lines.append(f"    {_fmt_vec(v)},")
    lines.append("]")
    lines.append("interstate_dipoles_au = [")
    for row in model.interstate_dipoles:
        lines.append("    [" + ", ".join(_fmt_vec(v) for v in row) + "],")
    lines.append("]")
    return "\n".join(lines) + "\n"


def synthetic_ladder(n: int, gap: float, dipole_scale: float) -> ExcitedStateSet:
    """Deterministic n-state test model.

    Energies are j * gap (hartree). Ground dipoles point along z with
    magnitude dipole_scale / j; interstate dipoles point along x with
    magnitude dipole_scale / (1 + |f - j|).
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise DomainError(f"ladder needs at least 2 states, got {n!r}")
    if not (gap > 0.0):
        raise DomainError(f"gap must be positive, got {gap!r}")
    if not (dipole_scale > 0.0):
        raise DomainError(f"dipole_scale must be positive, got {dipole_scale!r}")
    j = np.arange(1, n + 1, dtype=float)
    energies = gap * j
    ground = np.zeros((n, 3))
    ground[:, 2] = dipole_scale / j
    inter = np.zeros((n, n, 3))
    inter[:, :, 0] = dipole_scale / (1.0 + np.abs(j[:, None] - j[None, :]))
    return ExcitedStateSet(energies, ground, inter)
