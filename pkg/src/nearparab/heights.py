"""Arithmetic height model of chains in the renormalization tower.

A chain assigns to each tower level j an imaginary part Im zeta_j; one
renormalization step transports heights by

    Im zeta_{j-1} = alpha_j Im zeta_j + log(1/alpha_j) -+ M4,

which this module propagates as intervals [lo_j, hi_j] down from a seed
at level n (default -2, the height of the base point 1/(2 alpha_n) - 2i).
With M4 = 0 the recursion degenerates exactly to the bi-sequence
B_{k,i-1} = alpha_i B_{k,i} + log(1/alpha_i) - B with B = 0, which is the
cross-check used throughout.

On top of the interval model: diagnostics for the good-level sets
L(alpha, T, l) (explicitly heuristic at finite depth) and the comparison
of lim_m B_{m,j} against the truncated Brjuno tail at level j.
"""

from dataclasses import dataclass, field
from typing import Optional

from mpmath import mp

from .errors import NonBrjunoSuspected
from .rotation import bisequence_limit, good_levels

_GUARD_BITS = 24


@dataclass(frozen=True)
class HeightChain:
    """Interval heights [lo_j, hi_j] for levels j = 0..n (index j)."""

    n: int
    seed: object
    M4: object
    B_const: object
    lo: tuple
    hi: tuple
    precision_bits: int

    def width(self, j):
        return self.hi[j] - self.lo[j]

    def __post_init__(self):
        for j in range(self.n + 1):
            if not self.lo[j] <= self.hi[j]:
                raise AssertionError("interval inverted")

    def to_json_dict(self, digits=30):
        return {"n": self.n, "seed": float(self.seed), "M4": float(self.M4),
                "B_const": float(self.B_const),
                "lo": [mp.nstr(x, digits) for x in self.lo],
                "hi": [mp.nstr(x, digits) for x in self.hi]}


def propagate_heights(profile, n, seed_height=-2.0, M4=1.0, B_const=0.0,
                      table=None, slack_factor=12.0):
    """Propagate the height interval from level n down to level 0.

    When a BiSequenceTable is supplied, cross-checks that B[n][j] lies in
    [lo_j - slack, hi_j + slack] with the analytically forced slack
    12 * M4 (the accumulated-width bound of the transfer proof).
    """
    if n > profile.depth:
        raise ValueError("n exceeds profile depth")
    bits = profile.precision_bits
    with mp.workprec(bits + _GUARD_BITS):
        M4_ = mp.mpf(M4)
        seed = mp.mpf(seed_height)
        lo = [mp.mpf(0)] * (n + 1)
        hi = [mp.mpf(0)] * (n + 1)
        lo[n] = seed
        hi[n] = seed
        for j in range(n, 0, -1):
            a = profile.alphas[j]
            loginv = mp.log(1 / a)
            lo[j - 1] = a * lo[j] + loginv - M4_
            hi[j - 1] = a * hi[j] + loginv + M4_
        chain = HeightChain(n=n, seed=seed, M4=M4_, B_const=mp.mpf(B_const),
                            lo=tuple(lo), hi=tuple(hi), precision_bits=bits)
        if table is not None:
            slack = mp.mpf(slack_factor) * M4_
            for j in range(n + 1):
                b = table.entry(n, j)
                if not (lo[j] - slack <= b <= hi[j] + slack):
                    raise AssertionError(
                        f"bi-sequence B[{n}][{j}] outside chain interval + slack")
        return chain


@dataclass(frozen=True)
class DichotomyReport:
    """Finite-depth evidence about the good-level sets; explicitly a
    HEURISTIC (the true dichotomy is undecidable from finitely many
    digits)."""

    T: float
    l_max: int
    k_bound: int
    B_const: float
    M4: Optional[float]
    levels: tuple            # per l: sorted tuple of members of L(alpha,T,l)
    flavors: tuple           # per l: "A-flavored (appears unbounded)" / "B-flavored (appears to terminate)"
    liminf_track: tuple      # running min over j of lim_m B[m][j] - T/alpha_j
    heuristic: bool = True

    def to_json_dict(self):
        return {"heuristic": self.heuristic, "T": self.T, "l_max": self.l_max,
                "k_bound": self.k_bound, "B_const": self.B_const, "M4": self.M4,
                "levels": [list(x) for x in self.levels],
                "flavors": list(self.flavors),
                "liminf_track": [mp.nstr(x, 17) for x in self.liminf_track]}


def dichotomy_diagnostics(table, profile, T, l_max, k_bound, M4=None):
    """Report L(alpha, T, l) for l <= l_max, a saturate/terminate label per
    l, and the running liminf of lim_m B[m][j] - T/alpha_j."""
    if k_bound > table.k_max:
        raise ValueError("k_bound exceeds table depth")
    with mp.workprec(table.precision_bits + _GUARD_BITS):
        levels = []
        flavors = []
        degenerate = mp.mpf(T) <= -1e6
        for l in range(l_max + 1):
            members = sorted(good_levels(table, profile, T, l, k_bound))
            levels.append(tuple(members))
            if degenerate:
                flavors.append("degenerate threshold (all levels pass)")
            elif members and members[-1] >= k_bound - 1:
                flavors.append("A-flavored (appears unbounded)")
            else:
                flavors.append("B-flavored (appears to terminate)")
        track = []
        running = None
        for j in range(0, min(l_max, profile.depth - 1) + 1):
            v = bisequence_limit(table, profile, j) - mp.mpf(T) / profile.alphas[j]
            running = v if running is None else min(running, v)
            track.append(+running)
        return DichotomyReport(T=float(T), l_max=l_max, k_bound=k_bound,
                               B_const=float(table.B_const), M4=M4,
                               levels=tuple(levels), flavors=tuple(flavors),
                               liminf_track=tuple(track))


def yoccoz_height_compare(table, profile, j, C_config=1.0, tail_tol=1e-3):
    """Pair (lim_m B[m][j], height proxy of the Siegel lift at level j).

    The proxy is (1/2pi) * truncated Brjuno tail at j plus the offset
    -(1/2pi) log(27 C / 4) from the Yoccoz ball of radius
    C exp(-beta_j^{-1} sum_{i>=j} beta_i log alpha_{i+1}^{-1}).  Asserts
    only that lim_m B[m][j] lies within 2 B + 2 of the tail sum (the
    good-level sandwich transported to start index j); raises
    NonBrjunoSuspected when the tail has not converged at this depth.
    """
    with mp.workprec(table.precision_bits + _GUARD_BITS):
        lim_b = bisequence_limit(table, profile, j)
        d = profile.depth
        tail = mp.mpf(0)
        for m in range(j + 1, d + 1):
            tail += profile.betas[m - 1] * mp.log(1 / profile.alphas[m])
        tail /= profile.betas[j]
        # convergence check: the last materialized term relative to beta_j
        last_term = profile.betas[d - 1] * mp.log(1 / profile.alphas[d]) / profile.betas[j]
        if last_term > tail_tol:
            raise NonBrjunoSuspected(
                f"Brjuno tail not converged at depth {d}: last term {mp.nstr(last_term, 4)}")
        B = mp.mpf(table.B_const)
        if not abs(lim_b - tail) <= 2 * B + 2:
            raise AssertionError("lim B[m][j] strayed beyond 2B + 2 of the Brjuno tail")
        proxy = tail / (2 * mp.pi) - mp.log(mp.mpf(27) * C_config / 4) / (2 * mp.pi)
        return +lim_b, +proxy, +(lim_b - proxy)
