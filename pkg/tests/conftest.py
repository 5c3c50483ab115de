import pytest

from combimap import GraphicalModel

# Reference micro-models. Expected values asserted in the tests were frozen
# from the pure-Python enumeration oracle in helpers.py (see test_exact).


@pytest.fixture
def m1():
    """Two nodes, unique optimum (0, 0) with energy 0; bound tight at zero."""
    return GraphicalModel([2, 2], [[0, 1], [0, 1]], [(0, 1, [[0, 2], [2, 1]])])


@pytest.fixture
def m2():
    """Frustrated triangle: all unaries zero, every edge prefers disagreement.

    The odd cycle cannot fully disagree, so the optimum is 1 while the dual
    bound at zero messages is 0 (the instance is not LP-tight).
    """
    disagree = [[1, 0], [0, 1]]
    return GraphicalModel([2, 2, 2], [[0, 0]] * 3,
                          [(0, 1, disagree), (0, 2, disagree), (1, 2, disagree)])


@pytest.fixture
def m3():
    """Tree-structured chain a-b-c with unique optimum (0, 0, 0), energy 1."""
    return GraphicalModel([2, 2, 2], [[0, 1], [1, 0], [0, 1]],
                          [(0, 1, [[0, 1], [2, 3]]), (1, 2, [[0, 2], [1, 3]])])
