#!/usr/bin/env python3
"""Rotation-number arithmetic from digit streams.

Walks through the modified continued fraction of sqrt(2) - 1 (the
"golden2" preset: every digit (+1, 2)), its closest-return times, the
Brjuno partial sums, and the backward bi-sequence with its closed-form
cross-check and good-level sets.
"""

from mpmath import mp

from nearparab import (bisequence, brjuno_profile, closest_return_times,
                       expand_cf, good_levels, make_preset, synthesize_alpha)

mp.pretty = True

print("== digit streams ==")
g = make_preset("golden2", 40)
alpha = synthesize_alpha(g, 256)
print("golden2 digits (first 6):", g.digits[:6])
print("alpha =", mp.nstr(alpha, 25), " (sqrt(2)-1 =", mp.nstr(mp.sqrt(2) - 1, 25), ")")

back = expand_cf(alpha, 8, 256)
print("re-expansion of the value reproduces the digits:", back.digits[:8])

print("\n== closest returns and Brjuno sums ==")
prof = brjuno_profile(g, 30, 128)
print("q_n from the recurrence:        ", prof.q_times[:9])
print("brute-force closest returns:    ", closest_return_times(g, 1000))
print("Brjuno partial at depth 30:     ", mp.nstr(prof.brjuno_partial, 12))
print("geometric closed form log(1/a)/(1-a):",
      mp.nstr(mp.log(1 / alpha) / (1 - alpha), 12))

print("\n== bi-sequence ==")
tab = bisequence(g, 0.0, 20, 128)
print("B[k][k] = -2 for every k; B[20][0] =", mp.nstr(tab.entry(20, 0), 12))
print("recursion vs closed form, max deviation:", mp.nstr(tab.max_deviation(), 4))
print("good levels L(alpha, T=1, l=0) up to 10:",
      sorted(good_levels(tab, prof, 1.0, 0, 10)),
      " (B[2][1] =", mp.nstr(tab.entry(2, 1), 6), "< 1/alpha_1 =",
      mp.nstr(1 / prof.alphas[1], 6), ")")

print("\n== a non-Brjuno-flavored stream ==")
liou = make_preset("liouville:6", 3)
print("liouville:6 digits: a_0 = %d, a_1 = %d, a_2 ~ 10^%d"
      % (liou.digits[0][1], liou.digits[1][1], len(str(liou.digits[2][1])) - 1))
pl = brjuno_profile(liou, 2, 128)
print("its Brjuno partials grow by ~c per level:",
      [mp.nstr(p, 6) for p in pl.partials])
