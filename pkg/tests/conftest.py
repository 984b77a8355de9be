import pytest

from unsharp import order


@pytest.fixture
def diamond():
    return order.validate_poset(["bot", "a", "b", "top"],
                                [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])


@pytest.fixture
def chain3():
    return order.validate_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
