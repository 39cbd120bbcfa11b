from pathlib import Path

import numpy as np
import pytest

import twophoton as tp

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def sample_molecule_path() -> Path:
    return DATA_DIR / "sample_molecule.toml"


@pytest.fixture(scope="session")
def sample_model(sample_molecule_path):
    return tp.load_molecule_file(sample_molecule_path)


@pytest.fixture(scope="session")
def ladder4():
    return tp.synthetic_ladder(4, 0.05, 1.0)


@pytest.fixture(scope="session")
def quantum_lw():
    return tp.default_linewidths()


@pytest.fixture(scope="session")
def classical_lw():
    return tp.classical_linewidths()


def random_model(rng: np.random.Generator, n_states: int) -> tp.ExcitedStateSet:
    """Random but valid excited-state set for property tests."""
    energies = np.sort(0.02 + rng.uniform(0.0, 0.2, size=n_states))
    ground = rng.normal(size=(n_states, 3))
    inter = rng.normal(size=(n_states, n_states, 3))
    inter = 0.5 * (inter + inter.transpose(1, 0, 2))
    return tp.ExcitedStateSet(energies, ground, inter)


def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)
