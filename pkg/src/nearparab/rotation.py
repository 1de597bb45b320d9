"""Modified continued fractions and the arithmetic invariants built on them.

A rotation number is represented by its nearest-integer digit stream
``a_{-1}; (eps_0, a_0), (eps_1, a_1), ...`` with ``eps_i = +-1`` and
``a_i >= 2``, so that

    alpha = a_{-1} + eps_0/(a_0 + eps_1/(a_1 + ...))

and every fractional part ``alpha_i = d(1/alpha_{i-1}, Z)`` lies in
(0, 1/2).  The digit stream is the primary representation; floats are
derived views.  High-type and Liouville-flavored numbers with digits as
large as 10^6 (and far beyond) are exactly constructible this way while
no float could tell them apart.

On top of the digit stream the module computes the derived arithmetic:
the fractional parts alpha_i, the products beta_k = prod alpha_i, partial
Brjuno sums, closest-return times q_n, the backward bi-sequence B_{k,i},
and the good-level sets L(alpha, T, l).
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

from mpmath import mp

from .errors import NearRational, PrecisionExhausted

# Working-precision guard bits added on top of the requested precision.
_GUARD_BITS = 24


def _nearest_int(x):
    return int(mp.nint(x))


def default_guard_band(precision_bits):
    """Guard band around 0 and 1/2 below which a digit is undecidable.

    2^(-precision/4) leaves headroom for the error amplification of
    downstream multiplications.
    """
    return mp.mpf(2) ** (-(precision_bits // 4))


@dataclass(frozen=True)
class RotationNumber:
    """Exact rotation number given by a modified continued fraction.

    ``digits[i] == (eps_i, a_i)``.  ``label`` is provenance only (preset
    spec string); it does not participate in equality.
    """

    a_minus1: int
    digits: tuple
    label: Optional[str] = field(default=None, compare=False)
    rule: Optional[Callable[[int], tuple]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for i, (eps, a) in enumerate(self.digits):
            if eps not in (1, -1):
                raise ValueError(f"digit {i}: eps must be +-1, got {eps}")
            if not isinstance(a, int) or a < 2:
                raise ValueError(f"digit {i}: a must be an integer >= 2, got {a}")
            # canonical nearest-integer form: a tail 1/(2 - t) would exceed 1/2
            if a == 2 and i + 1 < len(self.digits) and self.digits[i + 1][0] == -1:
                raise ValueError(
                    f"digit {i}: a_i = 2 cannot be followed by eps = -1 "
                    "(fractional part would leave (0, 1/2))")

    @property
    def depth(self):
        """Count of materialized digits (the spec's declared_depth)."""
        return len(self.digits)

    def materialize(self, depth):
        """Return a stream with at least ``depth`` digits, extending via the
        generating rule when one is attached."""
        if depth <= self.depth:
            return self
        if self.rule is None:
            raise PrecisionExhausted(
                f"digit stream has {self.depth} digits, {depth} requested and no rule to extend")
        digits = list(self.digits)
        while len(digits) < depth:
            digits.append(self.rule(len(digits)))
        return RotationNumber(self.a_minus1, tuple(digits), label=self.label, rule=self.rule)

    def tail_values(self, precision_bits, count=None):
        """alpha_0 .. alpha_{count-1} as one backward sweep of the truncated
        fraction (alpha_i is the value of the digit tail starting at i)."""
        if self.depth == 0:
            return []
        if count is None:
            count = self.depth
        if count > self.depth:
            raise PrecisionExhausted(
                f"alpha_{count - 1} needs digit {count - 1}; only {self.depth} materialized")
        with mp.workprec(precision_bits + _GUARD_BITS):
            tails = [mp.mpf(0)] * self.depth
            t = mp.mpf(0)
            for i in range(self.depth - 1, -1, -1):
                a = self.digits[i][1]
                eps_next = self.digits[i + 1][0] if i + 1 < self.depth else 1
                t = 1 / (a + eps_next * t)
                tails[i] = t
        return tails[:count]

    def eval(self, precision_bits):
        """High-precision value of the (truncated) fraction, in
        (a_{-1} - 1/2, a_{-1} + 1/2)."""
        return synthesize_alpha(self, precision_bits)

    def to_json_dict(self):
        return {"a_minus1": self.a_minus1,
                "digits": [[eps, a] for (eps, a) in self.digits]}

    @staticmethod
    def from_json_dict(doc):
        return RotationNumber(int(doc["a_minus1"]),
                              tuple((int(e), int(a)) for e, a in doc["digits"]))


def expand_cf(x, depth, precision_bits=128, guard_band=None):
    """Expand a real number into its modified continued fraction.

    ``alpha_0 = d(x, Z)`` and ``alpha_{i+1} = d(1/alpha_i, Z)``; the digit
    a_i is the nearest integer to 1/alpha_i and eps_{i+1} the sign of the
    remainder.  Pass ``x`` as a string or mpf to retain full precision.

    Raises NearRational when some alpha_i falls within the guard band of
    0 or 1/2 (digit undecidable), PrecisionExhausted when the propagated
    rounding error grows comparable to alpha_i itself.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    with mp.workprec(precision_bits + _GUARD_BITS):
        if guard_band is None:
            guard_band = default_guard_band(precision_bits)
        x = mp.mpf(x) if not isinstance(x, mp.mpf) else x
        a_m1 = _nearest_int(x)
        frac = x - a_m1
        eps = 1 if frac > 0 else -1
        alpha = abs(frac)
        err = mp.mpf(2) ** (-precision_bits) * (abs(x) + 1)
        digits = []
        for i in range(depth):
            near = min(alpha, abs(mp.mpf(1) / 2 - alpha))
            if alpha < guard_band or abs(mp.mpf(1) / 2 - alpha) < guard_band:
                raise NearRational(
                    f"alpha_{i} = {mp.nstr(alpha, 8)} within guard band {mp.nstr(guard_band, 3)}")
            if err > near / 4:
                raise PrecisionExhausted(
                    f"error bound {mp.nstr(err, 3)} too large at level {i}; "
                    f"increase precision_bits for depth {depth}")
            v = 1 / alpha
            a = _nearest_int(v)
            rem = v - a
            digits.append((eps, a))
            eps = 1 if rem > 0 else -1
            err = err / (alpha * alpha) * mp.mpf("1.01")
            alpha = abs(rem)
        return RotationNumber(a_m1, tuple(digits))


def synthesize_alpha(digits, precision_bits=128):
    """Value of the truncated modified continued fraction.

    Inverse of expand_cf; the error versus the infinite fraction is
    bounded by 2*beta_depth.
    """
    if digits.depth < 1:
        raise ValueError("need at least one digit")
    if precision_bits < 16:
        raise PrecisionExhausted("precision_bits too small to evaluate a fraction")
    with mp.workprec(precision_bits + _GUARD_BITS):
        t = mp.mpf(0)
        for i in range(digits.depth - 1, -1, -1):
            eps_next = digits.digits[i + 1][0] if i + 1 < digits.depth else 1
            t = 1 / (digits.digits[i][1] + eps_next * t)
        val = digits.a_minus1 + digits.digits[0][0] * t
        return +val


@dataclass(frozen=True)
class HighTypeResult:
    """Verdict of a high-type check, explicitly 'up to checked_depth'.

    An empty stream yields the vacuous verdict True with checked_depth 0.
    """

    ok: bool
    checked_depth: int
    first_violation: Optional[int] = None

    def __bool__(self):
        return self.ok


def is_high_type(digits, N):
    """True iff a_i >= N for every materialized digit."""
    for i, (_eps, a) in enumerate(digits.digits):
        if a < N:
            return HighTypeResult(False, digits.depth, first_violation=i)
    return HighTypeResult(True, digits.depth)


@dataclass(frozen=True)
class BrjunoProfile:
    """Fractional parts, beta products, partial Brjuno sums and closest
    return times derived from one digit stream.

    alphas[i] = alpha_i for i = 0..depth, betas[k] = prod_{i=1..k} alpha_i
    (beta_0 = 1), partials[k] = sum_{j=1..k} beta_{j-1} log alpha_j^{-1},
    q_times[n] = q_n for n = 0..depth+1 with q_0 = 1, q_1 = a_0 and
    q_n = a_{n-1} q_{n-1} + q_{n-2}.
    """

    depth: int
    precision_bits: int
    alphas: tuple
    betas: tuple
    partials: tuple
    q_times: tuple

    def __post_init__(self):
        two = mp.mpf(2)
        acc = mp.mpf(0)
        for k in range(1, self.depth + 1):
            if not self.betas[k] <= two ** (-k):
                raise AssertionError(f"beta_{k} > 2^-{k}")
            if not self.betas[k] < self.betas[k - 1]:
                raise AssertionError("beta not strictly decreasing")
            if not self.partials[k] >= self.partials[k - 1]:
                raise AssertionError("brjuno partials not nondecreasing")
            acc += self.betas[k - 1]
        if not acc <= 2:
            raise AssertionError("sum of beta_{j-1} exceeded 2")

    @property
    def brjuno_partial(self):
        return self.partials[self.depth]


def brjuno_profile(digits, depth, precision_bits=128):
    """Build the BrjunoProfile of a digit stream to the given depth.

    Needs depth+1 digits (alpha_depth is the value of the tail starting at
    digit ``depth``); generator-backed streams are extended on demand.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    digits = digits.materialize(depth + 1)
    alphas = digits.tail_values(precision_bits, count=depth + 1)
    with mp.workprec(precision_bits + _GUARD_BITS):
        betas = [mp.mpf(1)]
        partials = [mp.mpf(0)]
        for k in range(1, depth + 1):
            partials.append(partials[-1] + betas[-1] * mp.log(1 / alphas[k]))
            betas.append(betas[-1] * alphas[k])
        q = [1, digits.digits[0][1]]
        for n in range(2, depth + 2):
            q.append(digits.digits[n - 1][1] * q[-1] + q[-2])
    return BrjunoProfile(depth=depth, precision_bits=precision_bits,
                         alphas=tuple(alphas), betas=tuple(betas),
                         partials=tuple(partials), q_times=tuple(q))


def closest_return_times(digits, q_max, precision_bits=192):
    """Brute-force closest-return times: record minima of the circle
    distance ||q alpha|| for q = 1 .. q_max.

    The defining distance is |e^{2 pi i q alpha} - 1| = 2|sin(pi q alpha)|,
    which is monotone in ||q alpha||, so the records coincide; the scan
    runs in exact fixed-point integer arithmetic (alpha rounded to
    ``precision_bits`` fractional bits, rounding error q * 2^-bits is far
    below any distance of interest for q <= 10^6).
    """
    bits = max(precision_bits, 128)
    with mp.workprec(bits + _GUARD_BITS):
        x = digits.eval(bits) if isinstance(digits, RotationNumber) else mp.mpf(digits)
        frac = x - mp.floor(x)
        A = int(mp.floor(frac * mp.mpf(2) ** bits))
    M = 1 << bits
    r = 0
    best = None
    records = []
    for q in range(1, q_max + 1):
        r += A
        if r >= M:
            r -= M
        d = r if (r << 1) < M else M - r
        if best is None or d < best:
            records.append(q)
            best = d
    return records


def sin_distance(digits, q, precision_bits=128):
    """2|sin(pi q alpha)|, the literal closest-return distance, for cross
    checks of the integer oracle."""
    with mp.workprec(precision_bits + _GUARD_BITS):
        x = digits.eval(precision_bits) if isinstance(digits, RotationNumber) else mp.mpf(digits)
        return 2 * abs(mp.sin(mp.pi * q * x))


@dataclass(frozen=True)
class BiSequenceTable:
    """Triangular backward recursion B_{k,k} = -2,
    B_{k,i-1} = alpha_i B_{k,i} + log alpha_i^{-1} - B, together with an
    independent closed-form evaluation

        B_{k,i-1} = beta_{i-1}^{-1} ( -2 beta_k
                     + sum_{j=i..k} beta_{j-1}(log alpha_j^{-1} - B) ).
    """

    B_const: object
    k_max: int
    precision_bits: int
    rows: tuple          # rows[k][i], 0 <= i <= k
    closed_rows: tuple
    tol_bisequence: float = 1e-12

    def entry(self, k, i):
        return self.rows[k][i]

    def closed_form(self, k, i):
        return self.closed_rows[k][i]

    def max_deviation(self):
        dev = mp.mpf(0)
        for k in range(self.k_max + 1):
            for i in range(k + 1):
                dev = max(dev, abs(self.rows[k][i] - self.closed_rows[k][i]))
        return dev

    def __post_init__(self):
        for k in range(self.k_max + 1):
            if not self.rows[k][k] == -2:
                raise AssertionError("B_{k,k} != -2")
        if not self.max_deviation() <= self.tol_bisequence:
            raise AssertionError("bi-sequence recursion and closed form disagree beyond tolerance")


def bisequence(digits, B_const, k_max, precision_bits=128, tol_bisequence=1e-12):
    """Build the bi-sequence table for a stream, cross-checked against the
    closed form at construction time."""
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    prof = brjuno_profile(digits, max(k_max, 1), precision_bits)
    alphas, betas = prof.alphas, prof.betas
    with mp.workprec(precision_bits + _GUARD_BITS):
        B = mp.mpf(B_const)
        logs = [None] + [mp.log(1 / alphas[j]) for j in range(1, k_max + 1)]
        rows = []
        closed = []
        minus2 = mp.mpf(-2)
        for k in range(k_max + 1):
            row = [mp.mpf(0)] * (k + 1)
            row[k] = minus2
            for i in range(k, 0, -1):
                row[i - 1] = alphas[i] * row[i] + logs[i] - B
            # independent closed form; the tail sums accumulate backward
            # (small terms first) to avoid cancellation against beta_{i-1}
            crow = [mp.mpf(0)] * (k + 1)
            crow[k] = minus2
            tail = mp.mpf(0)
            for i in range(k, 0, -1):
                tail += betas[i - 1] * (logs[i] - B)
                crow[i - 1] = (minus2 * betas[k] + tail) / betas[i - 1]
            rows.append(tuple(row))
            closed.append(tuple(crow))
    return BiSequenceTable(B_const=B, k_max=k_max, precision_bits=precision_bits,
                           rows=tuple(rows), closed_rows=tuple(closed),
                           tol_bisequence=tol_bisequence)


def good_levels(table, profile, T, l, k_bound):
    """The set { k in (l, k_bound] : B_{k,i} >= T / alpha_i for l < i < k }.

    l+1 is always a member (no condition to satisfy).
    """
    if k_bound > table.k_max:
        raise ValueError("k_bound exceeds table depth")
    with mp.workprec(table.precision_bits + _GUARD_BITS):
        T = mp.mpf(T)
        out = set()
        for k in range(l + 1, k_bound + 1):
            if all(table.rows[k][i] >= T / profile.alphas[i] for i in range(l + 1, k)):
                out.add(k)
    return out


def bisequence_limit(table, profile, j):
    """Depth-truncated lim_{m->inf} B_{m,j} =
    beta_j^{-1} sum_{m>j} beta_{m-1}(log alpha_m^{-1} - B), evaluated with
    all materialized terms."""
    with mp.workprec(table.precision_bits + _GUARD_BITS):
        B = mp.mpf(table.B_const)
        acc = mp.mpf(0)
        for m in range(j + 1, profile.depth + 1):
            acc += profile.betas[m - 1] * (mp.log(1 / profile.alphas[m]) - B)
        return acc / profile.betas[j]
