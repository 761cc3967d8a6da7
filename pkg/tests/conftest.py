import pytest

from classfield.quadforms import OrderContext, class_enumerate


@pytest.fixture(scope="session")
def ctx200():
    return OrderContext.from_disc(-200)


@pytest.fixture(scope="session")
def G200(ctx200):
    return class_enumerate(ctx200, 3)


@pytest.fixture(scope="session")
def logs200(ctx200, G200):
    from classfield.lfunctions import log_g_values

    return log_g_values(G200, ctx200, 60)
