from fractions import Fraction as F

import pytest
from hypothesis import HealthCheck, settings

from aggrec.risk import ClaimNumberSpec, ClaimSizeSpec, CompoundModel

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str):
    ACCEPTANCE[criterion] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} ({detail})")


def negbin_negbin(alpha=F(1, 2), p=F(1, 2), beta=F(1, 3), q=F(1, 3)) -> CompoundModel:
    return CompoundModel(ClaimNumberSpec.negbin(alpha, p), ClaimSizeSpec.negbin(beta, q))


def gig_geometric(psi=F(1), chi=F(2), theta=F(2, 3), q=F(1, 2)) -> CompoundModel:
    return CompoundModel(ClaimNumberSpec.gig(psi, chi, theta), ClaimSizeSpec.geometric_shifted(q))


def poisson_negbin(lam=F(1), p=F(1, 2)) -> CompoundModel:
    return CompoundModel(ClaimNumberSpec.poisson(lam), ClaimSizeSpec.negbin(F(1, 2), p))


@pytest.fixture(scope="session")
def example1():
    return negbin_negbin()


@pytest.fixture(scope="session")
def example2():
    return gig_geometric()


@pytest.fixture(scope="session")
def example3():
    return poisson_negbin()
