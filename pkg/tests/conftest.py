import pytest

from ramanpump.core import DriveParams, Environment, MoleculeParams
from ramanpump.oracle import OracleConfig

# typical organic-molecule values; probe frequency and strength are our choice
ORGANIC_MOL = MoleculeParams(omega0=3.0, omega_v=0.1, gamma_perp=0.01, gamma_v=1e-3, g=0.01, d_eg=0.1)
ORGANIC_DRIVE = DriveParams(omega_vis=2.0, rabi_vis=1e-3, omega_ir=0.05, rabi_ir=0.01)
ORGANIC_ENV = Environment(kT=0.02)

# dimensionless desk-scale set used for the master-equation comparisons
DESK_MOL = MoleculeParams(omega0=20.0, omega_v=1.0, gamma_perp=0.05, gamma_v=0.005, g=0.2, d_eg=1.0)
DESK_DRIVE = DriveParams(omega_vis=6.0, rabi_vis=0.0, omega_ir=0.5, rabi_ir=1.0)
DESK_ENV = Environment(kT=0.025)
DESK_CFG = OracleConfig(fock_cutoff=8, n_bar_override=0.0)


@pytest.fixture
def organic():
    return ORGANIC_MOL, ORGANIC_DRIVE, ORGANIC_ENV


@pytest.fixture
def desk():
    return DESK_MOL, DESK_DRIVE, DESK_ENV, DESK_CFG


# one (number, title, passed, detail) entry per acceptance criterion
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:>2}: {title} -- {detail}")
