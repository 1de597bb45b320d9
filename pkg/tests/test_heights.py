import random

import pytest
from mpmath import mp

from nearparab.errors import NonBrjunoSuspected
from nearparab.heights import (dichotomy_diagnostics, propagate_heights,
                               yoccoz_height_compare)
from nearparab.presets import make_preset
from nearparab.rotation import bisequence, brjuno_profile

from conftest import rand_high_type_stream


def test_m4_zero_equals_bisequence_exactly(golden2, golden2_profile):
    tab = bisequence(golden2, 0.0, 10, 128)
    chain = propagate_heights(golden2_profile, 10, seed_height=-2.0, M4=0.0,
                              B_const=0.0, table=tab)
    for j in range(11):
        assert chain.lo[j] == tab.entry(10, j)   # bit-for-bit
        assert chain.hi[j] == tab.entry(10, j)


def test_seed_reproduces_diagonal(golden2_profile):
    chain = propagate_heights(golden2_profile, 7, seed_height=-2.0, M4=1.0)
    assert chain.lo[7] == -2 and chain.hi[7] == -2


def test_width_bounds(golden2_profile):
    chain = propagate_heights(golden2_profile, 10, M4=1.0)
    assert chain.width(0) <= 4           # 2 M4 sum beta <= 4 for golden2
    assert chain.width(0) <= 12 * 1.0    # the transfer-proof slack


def test_width_bound_random_profiles():
    rng = random.Random(31)
    for _ in range(15):
        depth = rng.randint(3, 15)
        rn = rand_high_type_stream(rng, depth + 2)
        prof = brjuno_profile(rn, depth, 128)
        M4 = rng.choice([0.5, 1.0, 3.0])
        chain = propagate_heights(prof, depth, M4=M4)
        for j in range(depth + 1):
            assert chain.width(j) <= 12 * M4


def test_monotone_in_m4(golden2_profile):
    small = propagate_heights(golden2_profile, 8, M4=0.5)
    big = propagate_heights(golden2_profile, 8, M4=2.0)
    for j in range(9):
        assert big.lo[j] <= small.lo[j] <= small.hi[j] <= big.hi[j]


def test_cross_check_against_table(golden2, golden2_profile):
    tab = bisequence(golden2, 1.0, 10, 128)
    # M4 = B_const: the lower edge coincides with the bi-sequence; the
    # containment check with slack 12 M4 must pass
    propagate_heights(golden2_profile, 10, M4=1.0, B_const=1.0, table=tab)


def test_dichotomy_golden2(golden2, golden2_profile):
    tab = bisequence(golden2, 0.0, 12, 128)
    rep = dichotomy_diagnostics(tab, golden2_profile, 1.0, 4, 12)
    assert rep.heuristic
    for l, members in enumerate(rep.levels):
        assert members == (l + 1,)
        assert rep.flavors[l].startswith("B-flavored")


def test_dichotomy_degenerate_threshold(golden2, golden2_profile):
    tab = bisequence(golden2, 0.0, 8, 128)
    rep = dichotomy_diagnostics(tab, golden2_profile, -1e6, 2, 8)
    assert rep.levels[0] == tuple(range(1, 9))
    assert "degenerate" in rep.flavors[0]


def test_dichotomy_liouville_gains_level():
    # a fast digit within k_bound adds a level exactly when the growth rate
    # beats the threshold: B_{2,1} alpha_1 ~ c against T
    out = {}
    for c in (2, 12):
        rn = make_preset(f"liouville:{c}", 3)
        prof = brjuno_profile(rn, 2, 192)
        tab = bisequence(rn, 0.0, 2, 192)
        rep = dichotomy_diagnostics(tab, prof, 10.0, 0, 2)
        out[c] = rep.levels[0]
    assert out[2] == (1,)
    assert out[12] == (1, 2)


def test_dichotomy_depth_monotone(golden2, golden2_profile):
    tab = bisequence(golden2, 0.0, 12, 128)
    shallow = dichotomy_diagnostics(tab, golden2_profile, 1.0, 2, 6)
    deep = dichotomy_diagnostics(tab, golden2_profile, 1.0, 2, 12)
    for l in range(3):
        assert set(shallow.levels[l]) <= set(deep.levels[l])


def test_yoccoz_compare_golden2(golden2, golden2_profile):
    tab = bisequence(golden2, 0.0, 25, 128)
    lim, proxy, diff = yoccoz_height_compare(tab, golden2_profile, 0)
    assert abs(lim - mp.mpf("1.5045988")) < 1e-6
    # shift invariance of the self-similar stream
    lim5, _, _ = yoccoz_height_compare(tab, golden2_profile, 5)
    assert abs(lim - lim5) < 1e-6
    # with B = 1 the limit stays within 2B + 2 = 4 of the Brjuno tail
    tab1 = bisequence(golden2, 1.0, 25, 128)
    lim1, _, _ = yoccoz_height_compare(tab1, golden2_profile, 0)
    assert abs(lim1 - mp.mpf("1.5045988")) <= 4


def test_yoccoz_compare_nonbrjuno_raises():
    rn = make_preset("liouville:6", 3)
    prof = brjuno_profile(rn, 2, 192)
    tab = bisequence(rn, 0.0, 2, 192)
    with pytest.raises(NonBrjunoSuspected):
        yoccoz_height_compare(tab, prof, 0)
