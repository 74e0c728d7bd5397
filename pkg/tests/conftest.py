import pytest

from helpers import CTX3, sine_gordon
from plurilag import EquationSystem, parse_expr


@pytest.fixture
def ctx():
    return CTX3


@pytest.fixture
def P(ctx):
    return lambda text: parse_expr(text, ctx)


@pytest.fixture
def sg():
    return sine_gordon()


@pytest.fixture
def SG(P):
    return EquationSystem.of((P("u_xy"), P("sin(u)")))


@pytest.fixture
def MKDV(P):
    return EquationSystem.of((P("u_z"), P("u_xxx + 1/2*u_x^3")))


@pytest.fixture
def SG_MKDV(P):
    return EquationSystem.of((P("u_xy"), P("sin(u)")), (P("u_z"), P("u_xxx + 1/2*u_x^3")))


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
