import numpy as np
import pytest

from posc4.graph_core import Ownership, new_board

M, B = Ownership.MAKER, Ownership.BREAKER


def build(n, maker=(), breaker=()):
    board = new_board(n)
    for e in maker:
        board.claim(M, e)
    for e in breaker:
        board.claim(B, e)
    return board


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


def figure_board(breaker_threats=0):
    """a = {0, 1}; Maker star 0-{2,3,4}, 1-{5,6}; first k threats Breaker's."""
    threats = [(x, y) for x in (2, 3, 4) for y in (5, 6)]
    return build(7, maker=[(0, 2), (0, 3), (0, 4), (1, 5), (1, 6)], breaker=threats[:breaker_threats])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
