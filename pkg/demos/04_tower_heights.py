#!/usr/bin/env python3
"""The arithmetic height model of chains in the renormalization tower.

Interval propagation of Im zeta_j down the tower, its degeneration to the
bi-sequence at M4 = 0, finite-depth good-level diagnostics, and the
comparison of lim_m B[m][j] with the truncated Brjuno tail.
"""

from mpmath import mp

from nearparab import (bisequence, brjuno_profile, dichotomy_diagnostics,
                       make_preset, propagate_heights, yoccoz_height_compare)

mp.pretty = True

g = make_preset("golden2", 40)
prof = brjuno_profile(g, 12, 128)
tab = bisequence(g, 0.0, 12, 128)

print("== interval heights down the tower ==")
chain = propagate_heights(prof, 10, seed_height=-2.0, M4=1.0, table=tab,
                          B_const=0.0)
print("level   lo          hi          width")
for j in (10, 8, 5, 2, 0):
    print(" %2d   %-10s  %-10s  %s" % (j, mp.nstr(chain.lo[j], 6),
                                       mp.nstr(chain.hi[j], 6),
                                       mp.nstr(chain.width(j), 4)))
print("accumulated width stays below 12 M4 =", 12.0)

chain0 = propagate_heights(prof, 10, M4=0.0)
print("M4 = 0 degenerates to the bi-sequence exactly:",
      all(chain0.lo[j] == tab.entry(10, j) for j in range(11)))

print("\n== dichotomy diagnostics (finite-depth heuristic) ==")
rep = dichotomy_diagnostics(tab, prof, 1.0, 3, 12)
for l, (members, flavor) in enumerate(zip(rep.levels, rep.flavors)):
    print(f"  L(alpha, 1, {l}) = {list(members)}  -> {flavor}")

print("\n  against a stream with a fast digit (liouville:12, T = 10):")
liou = make_preset("liouville:12", 3)
lp = brjuno_profile(liou, 2, 192)
lt = bisequence(liou, 0.0, 2, 192)
lrep = dichotomy_diagnostics(lt, lp, 10.0, 0, 2)
print("  L(alpha, 10, 0) =", list(lrep.levels[0]), "->", lrep.flavors[0])

print("\n== bi-sequence limit vs the Brjuno tail ==")
lim, proxy, diff = yoccoz_height_compare(tab, prof, 0)
print("lim_m B[m][0]          =", mp.nstr(lim, 10))
print("Siegel-lift height proxy =", mp.nstr(proxy, 10),
      " (tail / 2 pi plus the Yoccoz-ball offset)")
lim3, _, _ = yoccoz_height_compare(tab, prof, 3)
print("shift invariance of the self-similar stream: lim at j=3 =",
      mp.nstr(lim3, 10))
