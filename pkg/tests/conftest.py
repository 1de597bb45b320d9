import pytest
from mpmath import mp

from nearparab.dynamics import make_map
from nearparab.fatou import build_fatou_chart
from nearparab.presets import make_preset
from nearparab.rotation import brjuno_profile


@pytest.fixture(scope="session")
def golden2():
    return make_preset("golden2", 40)


@pytest.fixture(scope="session")
def golden2_profile(golden2):
    return brjuno_profile(golden2, 30, 128)


@pytest.fixture(scope="session")
def pmap(golden2):
    return make_map("P", golden2, 128)


@pytest.fixture(scope="session")
def qmap_hi50():
    return make_map("Q", make_preset("hiN:50", 40), 128)


@pytest.fixture(scope="session")
def chart_hi50(qmap_hi50):
    return build_fatou_chart(qmap_hi50, abel_tol=1e-4)


def rand_high_type_stream(rng, depth, n_min=2, a_max=50, plus_only=False):
    """Seeded random high-type digit stream (a_i >= n_min), in canonical
    form: eps = -1 never follows a digit 2."""
    from nearparab.rotation import RotationNumber
    digits = []
    prev_a = None
    for _ in range(depth):
        a = rng.randint(n_min, a_max)
        eps = 1 if (plus_only or prev_a == 2 or rng.random() < 0.5) else -1
        digits.append((eps, a))
        prev_a = a
    # eps_0 = +1 keeps alpha in (0, 1/2) for map-facing tests
    digits[0] = (1, digits[0][1])
    # a trailing 2 makes the truncated tail exactly 1/2 (an expansion tie)
    if digits[-1][1] == 2:
        digits[-1] = (digits[-1][0], 3)
    return RotationNumber(0, tuple(digits))
