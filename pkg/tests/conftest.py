import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cfran.channel import ChannelRealization
from cfran.config import SimConfig
from cfran.topology import build_topology


@pytest.fixture(scope="session")
def default_config():
    return SimConfig()


@pytest.fixture(scope="session")
def default_topology(default_config):
    return build_topology(default_config)


def make_realization_from_beta_db(beta_db, tx_power=1.0, noise_power=1e-8, seed=0):
    """Realization with prescribed large-scale gains and CN(0,1)-faded h."""
    rng = np.random.default_rng(seed)
    m, k = beta_db.shape
    z = (rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))) * np.sqrt(0.5)
    h = np.sqrt(10.0 ** (beta_db / 10.0)) * z
    return ChannelRealization(
        h=h, beta_db=beta_db, ue_positions=None, tx_power=tx_power, noise_power=noise_power
    )


def random_channel(rng, n_ant, n_users, tx_power=1.0, noise_power=1.0):
    """Unit-scale random complex channel matrix for math-level tests."""
    h = (rng.standard_normal((n_ant, n_users)) + 1j * rng.standard_normal((n_ant, n_users)))
    h *= np.sqrt(0.5)
    return h
