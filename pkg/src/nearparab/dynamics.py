"""High-precision iteration of the neutral quadratics P and Q.

Q_alpha(z) = lam z + (27/16) lam^2 z^2  with lam = e^{2 pi i alpha}: the
normalization with critical value at -4/27.  P_alpha(z) = lam z + z^2.
Both fix 0 with multiplier lam and carry a nonzero fixed point sigma that
has split from 0:

    sigma_Q = (1 - lam) (16/27) lam^{-2},      sigma_P = 1 - lam,

and in both cases the multiplier at sigma is 2 - lam.

On top of the maps: orbit traces with escape/nearness flags and a
per-step error audit, Birkhoff running averages, Siegel-disk radius
estimates (Yoccoz-style lower bound from the Brjuno sum plus a root-test
estimate of the linearizing series), a Newton search for small cycles of
period q_n, and the orbit-sample density proxies for the sector-count
sets of the theory.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

from mpmath import mp

from .errors import (EscapeDetected, NewtonDiverged, NoCycleFound,
                     NonBrjunoSuspected, PrecisionExhausted)
from .rotation import RotationNumber, brjuno_profile

_GUARD_BITS = 24

FLAG_ESCAPED = 1
FLAG_NEAR_ZERO = 2
FLAG_NEAR_REF = 4


class NeutralQuadratic:
    """One of the maps P_alpha / Q_alpha with its derived data.

    Immutable after construction; safe to share across workers for
    read-only use.
    """

    def __init__(self, variant, alpha: RotationNumber, precision_bits=128):
        if variant not in ("P", "Q"):
            raise ValueError("variant must be 'P' or 'Q'")
        if alpha.depth < 1:
            raise ValueError("alpha needs at least one digit")
        self.variant = variant
        self.alpha = alpha
        self.precision_bits = precision_bits
        with mp.workprec(precision_bits + _GUARD_BITS):
            aval = alpha.eval(precision_bits + _GUARD_BITS)
            self.alpha_value = +aval
            self.alpha0 = abs(aval - mp.nint(aval))
            lam = mp.exp(2j * mp.pi * aval)
            self.lam = lam
            if variant == "Q":
                self.a2 = mp.mpf(27) / 16 * lam * lam
                self.cp = mp.mpf(-8) / 27 / lam
                self.cv = mp.mpc(mp.mpf(-4) / 27)
                self.sigma = (1 - lam) * mp.mpf(16) / 27 / (lam * lam)
            else:
                self.a2 = mp.mpc(1)
                self.cp = -lam / 2
                self.cv = -lam * lam / 4
                self.sigma = 1 - lam
            self.sigma_multiplier = 2 - lam
            self._check_invariants()

    def _check_invariants(self):
        ulp = mp.mpf(2) ** (-self.precision_bits)
        if not abs(self(mp.mpc(0))) == 0:
            raise AssertionError("0 is not fixed")
        if not abs(self(self.sigma) - self.sigma) <= 10 * ulp:
            raise AssertionError("sigma fixed-point residual too large")
        # central difference is exact for a quadratic; residual is pure roundoff
        h = mp.mpf(2) ** (-(self.precision_bits // 2))
        fd = (self(mp.mpc(h)) - self(mp.mpc(-h))) / (2 * h)
        if not abs(fd - self.lam) <= 10 * ulp:
            raise AssertionError("multiplier mismatch at 0")
        if not abs(self.deriv(self.cp)) <= 10 * ulp:
            raise AssertionError("critical point is not critical")

    def __call__(self, z):
        return z * (self.lam + self.a2 * z)

    def deriv(self, z):
        return self.lam + 2 * self.a2 * z

    def residual_sigma(self):
        """|map(sigma) - sigma| evaluated at the map's own precision."""
        with mp.workprec(self.precision_bits + _GUARD_BITS):
            return abs(self(self.sigma) - self.sigma)

    def iterate_n(self, z, n):
        with mp.workprec(self.precision_bits + _GUARD_BITS):
            for _ in range(n):
                z = z * (self.lam + self.a2 * z)
            return +z


def make_map(variant, alpha, precision_bits=128):
    """Construct a NeutralQuadratic with all invariants checked."""
    return NeutralQuadratic(variant, alpha, precision_bits)


@dataclass(frozen=True)
class OrbitTrace:
    """Orbit of a seed with per-point flags and a precision audit.

    ``points[j]`` is the orbit point at index ``indices[j]`` (indices are
    multiples of the stride, always including 0).  ``escaped_at`` is the
    first index whose point left the escape radius; no later points are
    stored.  ``err_bound`` is the accumulated worst-case error estimate
    (per-step growth by |f'(z)| + margin).
    """

    seed: object
    length: int
    stride: int
    indices: tuple
    points: tuple
    flags: tuple
    escaped_at: Optional[int]
    err_bound: object
    precision_bits: int

    def to_csv(self, digits=30):
        lines = ["index,re,im,flags"]
        for idx, z, fl in zip(self.indices, self.points, self.flags):
            lines.append(f"{idx},{mp.nstr(z.real, digits)},{mp.nstr(z.imag, digits)},{fl}")
        return "\n".join(lines) + "\n"

    def to_binary(self):
        """Little-endian frames: u64 index + two IEEE doubles (down-converted)."""
        import struct
        out = bytearray()
        for idx, z in zip(self.indices, self.points):
            out += struct.pack("<Qdd", idx, float(z.real), float(z.imag))
        return bytes(out)

    def to_json_dict(self, digits=30):
        return {"seed": [mp.nstr(mp.mpc(self.seed).real, digits),
                         mp.nstr(mp.mpc(self.seed).imag, digits)],
                "length": self.length, "stride": self.stride,
                "escaped_at": self.escaped_at,
                "points": [[mp.nstr(z.real, digits), mp.nstr(z.imag, digits)]
                           for z in self.points],
                "flags": list(self.flags)}


def iterate(nq, seed, n, stride=1, escape_radius=10.0, flag_delta=None,
            ref_points=None, audit_margin=1e-6):
    """Iterate the map, recording every stride-th point.

    EscapeDetected is a flag on the trace, not an error.  Raises
    PrecisionExhausted if the running error bound exceeds
    2^(-precision/4).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    bits = nq.precision_bits
    with mp.workprec(bits + _GUARD_BITS):
        z = mp.mpc(seed)
        budget = mp.mpf(2) ** (-(bits // 4))
        err = mp.mpf(2) ** (-bits)
        margin = mp.mpf(audit_margin)
        esc = mp.mpf(escape_radius)
        delta = mp.mpf(flag_delta) if flag_delta is not None else None
        refs = [mp.mpc(p) for p in ref_points] if ref_points else None

        def flags_of(z, escaped):
            fl = FLAG_ESCAPED if escaped else 0
            if delta is not None:
                if abs(z) < delta:
                    fl |= FLAG_NEAR_ZERO
                if refs and min(abs(z - p) for p in refs) < delta:
                    fl |= FLAG_NEAR_REF
            return fl

        indices, points, flags = [], [], []
        escaped_at = None
        for k in range(n + 1):
            escaped = abs(z) > esc
            if k % stride == 0 or escaped:
                indices.append(k)
                points.append(+z)
                flags.append(flags_of(z, escaped))
            if escaped:
                escaped_at = k
                break
            if k < n:
                err = err * (abs(nq.deriv(z)) + margin) + mp.mpf(2) ** (-bits)
                if err > budget:
                    raise PrecisionExhausted(
                        f"orbit error bound exceeded budget at step {k + 1}")
                z = z * (nq.lam + nq.a2 * z)
        return OrbitTrace(seed=mp.mpc(seed), length=n, stride=stride,
                          indices=tuple(indices), points=tuple(points),
                          flags=tuple(flags), escaped_at=escaped_at,
                          err_bound=+err, precision_bits=bits)


def _observable(spec):
    if callable(spec):
        return spec, getattr(spec, "__name__", "user")
    if spec == "re":
        return (lambda z: z.real), "re"
    if spec == "im":
        return (lambda z: z.imag), "im"
    if spec == "abs2":
        return (lambda z: z.real * z.real + z.imag * z.imag), "abs2"
    if spec.startswith("indicator_ball:"):
        cre, cim, dl = (mp.mpf(t) for t in spec.split(":")[1].split(","))
        c = mp.mpc(cre, cim)
        return (lambda z: mp.mpf(1) if abs(z - c) < dl else mp.mpf(0)), spec
    raise ValueError(f"unknown observable: {spec!r}")


def _log_checkpoints(N):
    ks = sorted({min(N, max(1, int(round(10 ** (j / 8))))) for j in range(0, 8 * 7)})
    return [k for k in ks if k <= N] + ([N] if N not in ks else [])


@dataclass(frozen=True)
class BirkhoffSeries:
    """Running Birkhoff averages (1/n) sum_{j<n} phi(f^j(seed)) at
    log-spaced checkpoints, plus a Cauchy-gap diagnostic over windows of
    one closest-return time."""

    observable: str
    N: int
    checkpoints: tuple
    averages: tuple
    final: object
    q_window: Optional[int] = None
    block_means: tuple = ()
    cauchy_gap: Optional[object] = None


def birkhoff_averages(nq, seed, observables, N, escape_radius=10.0, q_window=None):
    """One orbit pass, several observables.  Seeds must stay bounded:
    leaving the escape radius raises EscapeDetected."""
    obs = [_observable(o) for o in observables]
    bits = nq.precision_bits
    with mp.workprec(bits + _GUARD_BITS):
        z = mp.mpc(seed)
        esc = mp.mpf(escape_radius)
        sums = [mp.mpf(0) for _ in obs]
        marks = _log_checkpoints(N)
        mark_set = set(marks)
        chk = [[] for _ in obs]
        blocks = [[] for _ in obs]
        block_acc = [mp.mpf(0) for _ in obs]
        lam, a2 = nq.lam, nq.a2
        for j in range(N):
            if abs(z) > esc:
                raise EscapeDetected(f"orbit escaped at step {j}")
            for t, (fn, _name) in enumerate(obs):
                v = fn(z)
                sums[t] += v
                if q_window:
                    block_acc[t] += v
            n = j + 1
            if n in mark_set:
                for t in range(len(obs)):
                    chk[t].append(sums[t] / n)
            if q_window and n % q_window == 0:
                for t in range(len(obs)):
                    blocks[t].append(block_acc[t] / q_window)
                    block_acc[t] = mp.mpf(0)
            z = z * (lam + a2 * z)
        out = []
        for t, (_fn, name) in enumerate(obs):
            gap = None
            bm = tuple(blocks[t][-16:])
            if len(bm) >= 2:
                gap = max(abs(bm[i + 1] - bm[i]) for i in range(len(bm) - 1))
            out.append(BirkhoffSeries(observable=name, N=N, checkpoints=tuple(marks),
                                      averages=tuple(chk[t]), final=sums[t] / N,
                                      q_window=q_window, block_means=bm, cauchy_gap=gap))
        return out


def birkhoff_average(nq, seed, observable_id, N, escape_radius=10.0, q_window=None):
    """Running averages of one observable along one orbit."""
    return birkhoff_averages(nq, seed, [observable_id], N,
                             escape_radius=escape_radius, q_window=q_window)[0]


@dataclass(frozen=True)
class SiegelEstimate:
    yoccoz_lower: object
    linearization_radius: object
    boundary_sample: tuple
    brjuno_partial: object
    depth_used: int
    terms_used: int


def linearization_coefficients(nq, n_terms):
    """Power-series coefficients b_1..b_n of the linearizer psi(w) = w + ...
    with psi(lam w) = f(psi(w)), by the standard conjugacy recursion."""
    bits = nq.precision_bits
    with mp.workprec(bits + _GUARD_BITS):
        lam, a2 = nq.lam, nq.a2
        b = [mp.mpc(0), mp.mpc(1)]
        for n in range(2, n_terms + 1):
            conv = mp.mpc(0)
            for i in range(1, n):
                conv += b[i] * b[n - i]
            div = lam - lam ** n
            if abs(div) < mp.mpf(2) ** (-(bits // 2)):
                raise PrecisionExhausted(f"small divisor |lam - lam^{n}| below resolution")
            b.append(a2 * conv / div)
        return b


def _root_test_radius(coeffs):
    # Cesaro smoothing of -log|b_n|/n over the last 10% of terms
    n_terms = len(coeffs) - 1
    lo = max(2, int(n_terms * 0.9))
    vals = []
    for n in range(lo, n_terms + 1):
        an = abs(coeffs[n])
        if an > 0:
            vals.append(-mp.log(an) / n)
    return mp.exp(mp.fsum(vals) / len(vals))


def siegel_estimate(nq, depth, series_terms, C_config=1.0, blowup_threshold=25.0,
                    sample_cap=2048):
    """Yoccoz-style lower bound C exp(-Brjuno partial), a root-test estimate
    of the linearization radius, and a critical-orbit boundary sample.

    Raises NonBrjunoSuspected when the partial sums pass the threshold.
    """
    prof = brjuno_profile(nq.alpha, depth, nq.precision_bits)
    with mp.workprec(nq.precision_bits + _GUARD_BITS):
        partial = prof.brjuno_partial
        if partial > blowup_threshold:
            raise NonBrjunoSuspected(
                f"Brjuno partial {mp.nstr(partial, 6)} exceeds threshold {blowup_threshold}")
        lower = mp.mpf(C_config) * mp.exp(-partial)
        radius = mp.mpf(0)
        if series_terms >= 16:
            radius = _root_test_radius(linearization_coefficients(nq, series_terms))
        m = max(i for i in range(len(prof.q_times)) if prof.q_times[i] <= sample_cap)
        sample = iterate(nq, nq.cv, prof.q_times[m] - 1).points
        return SiegelEstimate(yoccoz_lower=+lower, linearization_radius=+radius,
                              boundary_sample=sample, brjuno_partial=+partial,
                              depth_used=depth, terms_used=series_terms)


def _newton_once(nq, z, q):
    """One Newton step for F(z) = f^q(z) - z; returns (new z, |F|)."""
    w = z
    dw = mp.mpc(1)
    for _ in range(q):
        dw *= nq.deriv(w)
        w = w * (nq.lam + nq.a2 * w)
    F = w - z
    dF = dw - 1
    if abs(dF) == 0:
        raise ZeroDivisionError
    return z - F / dF, abs(F)


def find_small_cycle(nq, n, profile=None, seed_ring_radius=None, newton_tol=1e-10,
                     max_newton_steps=60, num_seeds=64, ring_factor=1.1,
                     q_cap=10_000, escape_radius=10.0):
    """Newton search for a cycle of period q_n near the Siegel disk.

    Seeds sit on a ring of radius yoccoz_lower * ring_factor.  A candidate
    is accepted when |f^q(z) - z| <= newton_tol, z is away from the origin,
    and no proper divisor d of q has |f^d(z) - z| small (cycle of exact
    period).  Returns (cycle points, residual, newton residual history).
    """
    bits = nq.precision_bits
    prof = profile or brjuno_profile(nq.alpha, max(n, 1) + 1, bits)
    q = prof.q_times[n]
    if q > q_cap:
        raise ValueError(f"q_{n} = {q} exceeds cap {q_cap}")
    with mp.workprec(bits + _GUARD_BITS):
        tol = mp.mpf(newton_tol)
        if seed_ring_radius is None:
            est = siegel_estimate(nq, min(prof.depth, 20), 0)
            seed_ring_radius = est.yoccoz_lower * mp.mpf(ring_factor)
        r = mp.mpf(seed_ring_radius)
        esc = mp.mpf(escape_radius)
        divisors = [d for d in range(1, q) if q % d == 0]
        sep = max(tol * 1e6, mp.mpf(1e-6))
        any_converged = False
        best = None
        for s in range(num_seeds):
            theta = 2 * mp.pi * s / num_seeds
            z = r * mp.exp(1j * theta)
            hist = []
            ok = False
            try:
                for _ in range(max_newton_steps):
                    z, res = _newton_once(nq, z, q)
                    hist.append(res)
                    if abs(z) > esc:
                        break
                    if res <= tol:
                        ok = True
                        break
            except ZeroDivisionError:
                continue
            if not ok:
                continue
            # converged; res is the residual at the previous iterate, so measure at z
            w = z
            for _ in range(q):
                w = w * (nq.lam + nq.a2 * w)
            res = abs(w - z)
            if res > tol:
                continue
            any_converged = True
            if abs(z) <= sep:
                continue
            if any(abs(nq.iterate_n(z, d) - z) <= sep for d in divisors):
                continue
            if best is None or res < best[1]:
                best = (z, res, hist)
        if best is None:
            if any_converged:
                raise NoCycleFound("all converged seeds landed on invalid points")
            raise NewtonDiverged("no Newton seed converged")
        z, res, hist = best
        cycle = [z]
        for _ in range(q - 1):
            cycle.append(nq(cycle[-1]))
        return [+p for p in cycle], +res, [+h for h in hist]


class _BucketIndex:
    """Uniform-grid bucket index for nearest-sample queries at one scale."""

    def __init__(self, points, cell):
        self.cell = float(cell)
        self.grid = {}
        self.pts = [(float(p.real), float(p.imag)) for p in points]
        for (x, y) in self.pts:
            key = (math.floor(x / self.cell), math.floor(y / self.cell))
            self.grid.setdefault(key, []).append((x, y))

    def within(self, z, delta):
        x, y = float(z.real), float(z.imag)
        cx, cy = math.floor(x / self.cell), math.floor(y / self.cell)
        d2 = delta * delta
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for (px, py) in self.grid.get((cx + dx, cy + dy), ()):
                    if (px - x) ** 2 + (py - y) ** 2 < d2:
                        return True
        return False


def density_estimate(nq, n, delta, mode, profile=None, boundary_sample=None,
                     interior_radius=None, escape_radius=10.0, sample_cap=2048):
    """Fraction of the first q_n critical-orbit points flagged near zero or
    near the Siegel boundary sample.

    This is a point-sample proxy for the sector counts |G(n,delta)|/q_n and
    |H(n,delta)|/q_n of the theory, not the sector count itself: sectors are
    replaced by the orbit points of the critical value that generate them.
    """
    if mode not in ("near_zero", "near_siegel"):
        raise ValueError("mode must be near_zero or near_siegel")
    bits = nq.precision_bits
    prof = profile or brjuno_profile(nq.alpha, max(n, 1) + 1, bits)
    q = prof.q_times[n]
    with mp.workprec(bits + _GUARD_BITS):
        dl = mp.mpf(delta)
        esc = mp.mpf(escape_radius)
        if dl >= esc:
            return mp.mpf(1)
        index = None
        r_in = None
        if mode == "near_siegel":
            if boundary_sample is None:
                est = siegel_estimate(nq, min(prof.depth, 20), 0, sample_cap=max(sample_cap, q))
                boundary_sample = est.boundary_sample
                r_in = est.yoccoz_lower if interior_radius is None else mp.mpf(interior_radius)
            else:
                r_in = mp.mpf(interior_radius) if interior_radius is not None else mp.mpf(0)
            index = _BucketIndex(boundary_sample, float(dl))
        z = mp.mpc(nq.cv)
        hits = 0
        for _ in range(q):
            if abs(z) > esc:
                raise EscapeDetected("critical orbit escaped")
            if mode == "near_zero":
                if abs(z) < dl:
                    hits += 1
            else:
                if index.within(z, float(dl)) or abs(z) < r_in:
                    hits += 1
            z = z * (nq.lam + nq.a2 * z)
        return mp.mpf(hits) / q
