import pytest

from qotto import cli, cycle, qdyn, thermal

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ref_thermal():
    return thermal.ThermalConfig(1.60, 12.21)


@pytest.fixture(scope="session")
def cold():
    return thermal.gibbs_populations(2.0, 1.60)


@pytest.fixture(scope="session")
def hot():
    return thermal.gibbs_populations(3.6, 12.21)


@pytest.fixture(scope="session")
def cycle_at(ref_thermal):
    cache = {}

    def get(tau, steps=qdyn.DEFAULT_STEPS):
        if (tau, steps) not in cache:
            cache[tau, steps] = cycle.run_cycle(qdyn.DriveProtocol(2.0, 3.6, tau), ref_thermal, steps)
        return cache[tau, steps]

    return get


@pytest.fixture(scope="session")
def default_sweep():
    cfg = cli.load_config(write_joint=False)
    return cli.sweep(cfg)


@pytest.fixture
def make_peaks(cold, hot):
    def make(xi_exp, xi_com=None, c=None, h=None):
        xi = qdyn.TransitionProbabilities(xi_exp, xi_exp if xi_com is None else xi_com)
        return cycle.discrete_joint(cycle.enumerate_histories(xi, c or cold, h or hot))

    return make
