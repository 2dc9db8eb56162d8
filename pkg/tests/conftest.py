import random

import pytest

from padicq import PadicContext, PadicNumber


@pytest.fixture
def ctx3() -> PadicContext:
    return PadicContext(3, 30)


@pytest.fixture
def ctx5() -> PadicContext:
    return PadicContext(5, 30)


@pytest.fixture
def ctx7() -> PadicContext:
    return PadicContext(7, 30)


def random_padic(rng: random.Random, ctx: PadicContext,
                 vmin: int = -5, vmax: int = 6) -> PadicNumber:
    """A random nonzero element with full relative precision."""
    p, k = ctx.prime, ctx.precision
    v = rng.randrange(vmin, vmax)
    unit = rng.randrange(1, p**k)
    while unit % p == 0:
        unit = rng.randrange(1, p**k)
    return ctx.from_int(unit).shifted(v)


def assert_agree(a: PadicNumber, b: PadicNumber, floor: int | None = None):
    """Both sides must agree on every digit they jointly claim."""
    bound = min(a.abs_prec, b.abs_prec)
    if floor is not None:
        bound = min(bound, floor)
    dv = (a - b).valuation_lower_bound
    assert dv >= bound, f"difference valuation {dv} below joint precision {bound}"
