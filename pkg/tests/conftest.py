from pathlib import Path

import numpy as np
import pytest

from floquet_pacs import build_configuration, build_flt, preset_mathieu_pair

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"
MATHIEU_PARAMS = (1.1, 0.9, 0.05, 0.1, 2 * np.pi)


def unit_config(n_modes=1, period=1.0, omega=1.0):
    return build_configuration(
        n_modes, period, {"k_qq": omega**2 * np.eye(n_modes), "k_pp": np.eye(n_modes)}
    )


@pytest.fixture(scope="session")
def config_dir():
    return CONFIG_DIR


@pytest.fixture(scope="session")
def unit_decomp():
    return build_flt(unit_config(1))


@pytest.fixture(scope="session")
def pair_decomp():
    return build_flt(unit_config(2))


@pytest.fixture(scope="session")
def mathieu_config():
    return preset_mathieu_pair(*MATHIEU_PARAMS)


@pytest.fixture(scope="session")
def mathieu_decomp(mathieu_config):
    return build_flt(mathieu_config)


@pytest.fixture(scope="session")
def squeezed_decomp():
    """Single driven mode whose U(t) is far from 1/sqrt(2)."""
    cfg = build_configuration(
        1, 2 * np.pi, {"k_qq": {"constant": [[0.7]], "harmonics": [{"harmonic": 1, "cos": [[-0.2]]}]}, "k_pp": np.eye(1)}
    )
    return build_flt(cfg)


@pytest.fixture(scope="session")
def skew_decomp():
    """Two modes with a sine drive and q-p coupling (no time-reversal symmetry)."""
    cfg = build_configuration(
        2,
        2 * np.pi,
        {
            "k_qq": {
                "constant": [[1.3, 0.1], [0.1, 0.8]],
                "harmonics": [{"harmonic": 1, "sin": [[0.05, 0.0], [0.0, -0.04]]}],
            },
            "k_pp": np.eye(2),
            "k_qp": {"constant": [[0.0, 0.05], [-0.03, 0.0]]},
        },
    )
    return build_flt(cfg)


ACCEPTANCE_RESULTS = {}


def record_acceptance(number, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {title} ({detail})"
    ACCEPTANCE_RESULTS[(number, title)] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[key])
