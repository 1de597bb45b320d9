"""Numerical perturbed Fatou coordinates and near-parabolic renormalization.

For a neutral quadratic h with small rotation number alpha, the petal
between the fixed points 0 and sigma carries a univalent solution of the
Abel equation Phi(h(z)) = Phi(z) + 1, normalized by Phi(cp) = 0 (so the
critical value goes to 1).  This module evaluates such a coordinate
numerically and composes it into the renormalization return map

    R(h)(w) = Exp(Phi(h^l(z))),    z = Phi^{-1}(lift of w),

with Exp(zeta) = (-4/27) e^{2 pi i zeta}.

Evaluation scheme.  The displacement of a neutral quadratic factors
exactly through both fixed points, v(z) = h(z) - z = a z (z - sigma), so
the Abel equation admits a closed-form asymptotic solution: solving
sum_m v^m Phi^{(m)} / m! = 1 order by order gives

    Phi_K(z) = CA log((z-sigma)/z) + CB log(z(z-sigma)) + poly_K(z),

where CA and CB are truncations of the Gregory series of 1/log and the
per-step Abel defect of the order-K truncation is O((1-lam)^{K+1}),
uniformly on a disk around the gate segment [0, sigma].  (The truncated
log z and log(z-sigma) coefficients match 1/log(lam) and 1/log(mu) to the
same order, so the template is asymptotically exact at both ends of the
petal.)  Points outside the gate disk are anchored to it by walking the
orbit (the nearest entry, forward or backward), which composes exactly
through the functional equation.  The log branches are cut along the two
rays of the line through 0 and sigma that avoid the gate segment, which
places the chart's wrap seam just outside the strip Re Phi in
(0, 1/alpha - k); residuals are self-validating and every chart carries
its own Abel-residual statistics.
"""

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .errors import (ChartDiverged, NewtonDiverged, NoReturn, OutsideDomain,
                     OutsideRegime, PoleArgument, ZeroArgument)

_GUARD_BITS = 32

EM_ORDER_MAX = 10

# Gregory-series coefficients of the two log terms, as (power of x, rational)
# with x = a*sigma = 1 - lam; CA multiplies log((z-sigma)/z), CB multiplies
# log(z(z-sigma)).  Entry k of each list belongs to expansion order k.
_CA_TERMS = {0: (-1, Fraction(1)),
             2: (1, Fraction(-1, 12)),
             4: (3, Fraction(-19, 720)),
             6: (5, Fraction(-4315, 302400)),
             8: (7, Fraction(-33953, 3628800)),
             10: (9, Fraction(-3250433, 479001600))}
_CB_TERMS = {1: (0, Fraction(1, 2)),
             3: (2, Fraction(1, 24)),
             5: (4, Fraction(3, 160)),
             7: (6, Fraction(275, 24192)),
             9: (8, Fraction(57281, 7257600))}

# Polynomial parts: order -> (denominator, [coeff of s^(k-j) z^j for j=1..]),
# the whole bracket multiplied by a^(order-1)/denominator.
_POLY_TERMS = {
    2: (12, [-6]),
    3: (24, [-8, 8]),
    4: (720, [-270, 390, -260]),
    5: (1440, [-448, 1126, -1356, 678]),
    6: (302400, [-99750, 291480, -526680, 498540, -199416]),
    7: (120960, [-35424, 140376, -322160, 441720, -336768, 112256]),
    8: (4233600, [-1287965, 5600175, -15706810, 27138510, -29212344,
                  18356940, -5244840]),
    9: (7257600, [-2025472, 10853014, -35116844, 71773842, -94629360,
                  80827880, -42244080, 10561020]),
    10: (762048000, [-218689065, 1253712810, -4623721760, 10728135180,
                     -16143467508, 15958139820, -10425077640, 4399206840,
                     -977601520]),
}


def renorm_radius_bound():
    """|w| bound of the renormalization image: the disk of radius (4/27) e^{4 pi}."""
    return mp.mpf(4) / 27 * mp.exp(4 * mp.pi)


def exp_proj(zeta):
    """Exp(zeta) = (-4/27) e^{2 pi i zeta}; maps integers to -4/27."""
    return mp.mpf(-4) / 27 * mp.exp(2j * mp.pi * mp.mpc(zeta))


def exp_lift(z, branch=0):
    """Inverse of exp_proj with Re in (branch - 1/2, branch + 1/2]."""
    z = mp.mpc(z)
    if z == 0:
        raise ZeroArgument("exp_lift needs a nonzero argument")
    return mp.log(z * mp.mpf(-27) / 4) / (2j * mp.pi) + branch


def covering_T(sigma, alpha0, w):
    """T(w) = sigma / (1 - e^{-2 pi i alpha w}); commutes with w -> w + 1/alpha."""
    den = 1 - mp.exp(-2j * mp.pi * mp.mpf(alpha0) * mp.mpc(w))
    if abs(den) == 0:
        raise PoleArgument("w is a pole of the covering map")
    return mp.mpc(sigma) / den


def covering_T_inv(sigma, alpha0, z, branch=0):
    """Inverse branch of covering_T mapping into the strip that separates 0
    from 1/alpha: Re in [0, 1/alpha) for branch 0."""
    z = mp.mpc(z)
    if z == 0 or z == sigma:
        raise PoleArgument("z must avoid 0 and sigma")
    u = 1 - mp.mpc(sigma) / z
    theta = mp.arg(u)
    if theta > 0:
        theta -= 2 * mp.pi
    t = 2 * mp.pi * mp.mpf(alpha0)
    w = mp.mpc(-theta, mp.log(abs(u))) / t
    return w + branch / mp.mpf(alpha0)


def _windowed_log(w, cut_angle):
    """log with the argument taken in (cut_angle - 2 pi, cut_angle]."""
    theta = mp.arg(w)
    while theta > cut_angle:
        theta -= 2 * mp.pi
    while theta <= cut_angle - 2 * mp.pi:
        theta += 2 * mp.pi
    return mp.mpc(mp.log(abs(w)), theta)


class FatouChart:
    """Cached numerical Fatou-coordinate evaluator for one map.

    Built by :func:`build_fatou_chart`; immutable afterwards and safe for
    concurrent read-only evaluation.
    """

    def __init__(self, nq, abel_tol, k_cfg, em_order, r_acc_frac, theta_r,
                 norm_offset, refinement_m, residual_stats, chart_alpha_max):
        self.map = nq
        self.precision_bits = nq.precision_bits
        self.abel_tol = abel_tol
        self.k_cfg = k_cfg
        self.em_order = em_order
        self.r_acc_frac = r_acc_frac
        self.theta_r = theta_r
        self.norm_offset = norm_offset
        self.refinement_m = refinement_m
        self.residual_stats = residual_stats
        self.chart_alpha_max = chart_alpha_max
        with mp.workprec(self.precision_bits + _GUARD_BITS):
            self.sigma = nq.sigma
            self.alpha0 = nq.alpha0
            self.t_angle = 2 * mp.pi * self.alpha0
            self.period = 1 / self.alpha0
            self.period_int = int(mp.nint(self.period))
            self.r_acc = mp.mpf(r_acc_frac) * abs(self.sigma)
            ang = mp.arg(self.sigma) + mp.mpf(theta_r)
            self.cut_zero = ang + mp.pi   # cut of log z: ray from 0 away from sigma
            self.cut_sigma = ang          # cut of log(z - sigma): ray below sigma
            x = nq.a2 * self.sigma        # = 1 - lam
            self.CA = mp.mpc(0)
            self.CB = mp.mpc(0)
            for k, (p, c) in _CA_TERMS.items():
                if k <= em_order:
                    self.CA += mp.mpf(c.numerator) / c.denominator * x ** p
            for k, (p, c) in _CB_TERMS.items():
                if k <= em_order:
                    self.CB += mp.mpf(c.numerator) / c.denominator * x ** p
            deg = max((k - 1 for k in _POLY_TERMS if k <= em_order), default=0)
            poly = [mp.mpc(0)] * (deg + 1)
            for k, (den, row) in _POLY_TERMS.items():
                if k > em_order:
                    continue
                pref = nq.a2 ** (k - 1) / den
                for j, cj in enumerate(row, start=1):
                    poly[j] += pref * cj * self.sigma ** (k - 1 - j)
            self.poly = poly
            self.dpoly = [j * poly[j] for j in range(1, len(poly))]

    # -- template ----------------------------------------------------------

    def template(self, z):
        """Order-K closed-form Abel template, single-valued off the cut rays."""
        z = mp.mpc(z)
        if z == 0 or z == self.sigma:
            raise OutsideDomain("template undefined at the fixed points")
        l0 = _windowed_log(z, self.cut_zero)
        ls = _windowed_log(z - self.sigma, self.cut_sigma)
        val = self.CA * (ls - l0) + self.CB * (ls + l0)
        acc = mp.mpc(0)
        for c in reversed(self.poly[1:]):
            acc = acc * z + c
        return val + acc * z

    def template_deriv(self, z):
        z = mp.mpc(z)
        w = z - self.sigma
        d = self.CA * (1 / w - 1 / z) + self.CB * (1 / w + 1 / z)
        acc = mp.mpc(0)
        for c in reversed(self.dpoly):
            acc = acc * z + c
        return d + acc

    def mobius_template(self, z):
        """Plain Moebius-model coordinate T^{-1}(z) (initial guesses and the
        orbit-averaged refinement diagnostic)."""
        z = mp.mpc(z)
        if z == 0 or z == self.sigma:
            raise OutsideDomain("template undefined at the fixed points")
        u = 1 - self.sigma / z
        theta = mp.arg(u)
        if theta > self.theta_r:
            theta -= 2 * mp.pi
        return mp.mpc(-theta, mp.log(abs(u))) / self.t_angle

    def mobius_inverse(self, tau):
        u = mp.exp(-1j * self.t_angle * mp.mpc(tau))
        return self.sigma / (1 - u)

    # -- anchored evaluation -------------------------------------------------

    def _preimage(self, w, near):
        """Root of a2 v^2 + lam v - w = 0 nearest to ``near`` (the backward
        branch along the petal; away from the critical value the other root
        is far)."""
        nq = self.map
        disc = mp.sqrt(nq.lam * nq.lam + 4 * nq.a2 * w)
        r1 = (-nq.lam + disc) / (2 * nq.a2)
        r2 = (-nq.lam - disc) / (2 * nq.a2)
        return r1 if abs(r1 - near) <= abs(r2 - near) else r2

    def _anchor(self, z):
        """Nearest orbit point inside the gate disk |z - sigma/2| <= r_acc.

        Returns (k, z_k, d z_k / d z); k is signed (backward via the inverse
        branch).  The per-step template defect is uniformly small on the
        disk, so any anchor on the same gate passage yields the same value
        up to a few defects.
        """
        nq = self.map
        center = self.sigma / 2
        fwd = [(mp.mpc(z), mp.mpc(1))]
        bwd = [(mp.mpc(z), mp.mpc(1))]

        def point(k):
            if k >= 0:
                while len(fwd) <= k:
                    w, dw = fwd[-1]
                    if abs(w) > 2:
                        raise OutsideDomain("orbit left the petal region while anchoring")
                    fwd.append((w * (nq.lam + nq.a2 * w), dw * nq.deriv(w)))
                return fwd[k]
            while len(bwd) <= -k:
                w, dw = bwd[-1]
                pre = self._preimage(w, w)
                if abs(pre) > 2:
                    raise OutsideDomain("backward orbit left the petal region")
                bwd.append((pre, dw / nq.deriv(pre)))
            return bwd[-k]

        cap_f = self.period_int + 60
        cap_b = self.period_int // 2 + 40
        for d in range(0, cap_f + 1):
            for k in (-d, d) if d else (0,):
                if k < -cap_b or k > cap_f:
                    continue
                try:
                    zk, dzk = point(k)
                except OutsideDomain:
                    continue
                if abs(zk - center) <= self.r_acc:
                    return k, zk, dzk
        raise OutsideDomain("no orbit point reached the gate disk")

    def phi_raw(self, z, want_deriv=False):
        k, zk, dzk = self._anchor(z)
        val = self.template(zk) - k
        if want_deriv:
            return val, self.template_deriv(zk) * dzk
        return val

    def phi(self, z):
        """Normalized Fatou coordinate: Phi(cp) = 0."""
        with mp.workprec(self.precision_bits + _GUARD_BITS):
            return self.phi_raw(z) - self.norm_offset

    def phi_deriv(self, z):
        with mp.workprec(self.precision_bits + _GUARD_BITS):
            val, dv = self.phi_raw(z, want_deriv=True)
            return val - self.norm_offset, dv

    def abel_residual(self, z):
        """|Phi(h(z)) - Phi(z) - 1| with two independent evaluations."""
        with mp.workprec(self.precision_bits + _GUARD_BITS):
            return abs(self.phi(self.map(z)) - self.phi(z) - 1)

    # -- orbit-averaged template refinement (diagnostic) --------------------

    def template_averaged(self, z, m):
        """Hann-weighted orbit average of the Moebius-template estimates
        (tau(h^j z) - j), j = 0..m, with seam unwrapping.  m = 0 is the raw
        template.  This is the orbit-averaged refinement; it reduces the
        template residual but cannot reach small tolerances in the gate,
        which is why the shipped evaluator uses the higher-order closed-form
        template instead."""
        nq = self.map
        with mp.workprec(self.precision_bits + _GUARD_BITS):
            z = mp.mpc(z)
            total = mp.mpf(0)
            acc = mp.mpc(0)
            prev = None
            for j in range(m + 1):
                e = self.mobius_template(z) - j
                if prev is not None:
                    while (e - prev).real > self.period / 2:
                        e -= self.period
                    while (e - prev).real < -self.period / 2:
                        e += self.period
                prev = e
                w = 1 - mp.cos(2 * mp.pi * (j + mp.mpf("0.5")) / (m + 1)) if m > 0 else mp.mpf(1)
                acc += w * e
                total += w
                z = z * (nq.lam + nq.a2 * z)
            return acc / total

    # -- serialization -------------------------------------------------------

    def to_json_dict(self):
        def num(x):
            sign, man, exp, _bc = x._mpf_ if hasattr(x, "_mpf_") else mp.mpf(x)._mpf_
            return [str(-man if sign else man), int(exp)]

        return {
            "variant": self.map.variant,
            "digits": self.map.alpha.to_json_dict(),
            "precision_bits": self.precision_bits,
            "abel_tol": self.abel_tol,
            "k_cfg": self.k_cfg,
            "em_order": self.em_order,
            "r_acc_frac": self.r_acc_frac,
            "theta_r": self.theta_r,
            "norm_offset": [num(self.norm_offset.real), num(self.norm_offset.imag)],
            "refinement_m": self.refinement_m,
            "residual_stats": self.residual_stats,
            "chart_alpha_max": self.chart_alpha_max,
        }

    @staticmethod
    def from_json_dict(doc, nq=None):
        from .dynamics import make_map
        from .rotation import RotationNumber

        def num(v):
            return mp.mpf((int(v[0]), int(v[1])))

        if nq is None:
            nq = make_map(doc["variant"],
                          RotationNumber.from_json_dict(doc["digits"]),
                          doc["precision_bits"])
        with mp.workprec(doc["precision_bits"] + _GUARD_BITS):
            offset = mp.mpc(num(doc["norm_offset"][0]), num(doc["norm_offset"][1]))
        return FatouChart(
            nq, abel_tol=doc["abel_tol"], k_cfg=doc["k_cfg"],
            em_order=doc["em_order"], r_acc_frac=doc["r_acc_frac"],
            theta_r=doc["theta_r"], norm_offset=offset,
            refinement_m=doc["refinement_m"],
            residual_stats=doc["residual_stats"],
            chart_alpha_max=doc["chart_alpha_max"])


def chart_cache_key(variant, digits, precision_bits, abel_tol, k_cfg):
    doc = json.dumps({"variant": variant, "digits": digits.to_json_dict(),
                      "precision_bits": precision_bits, "abel_tol": abel_tol,
                      "k_cfg": k_cfg}, sort_keys=True)
    return hashlib.sha256(doc.encode()).hexdigest()


def _default_grid(strip_lo, strip_hi, nx=20, ny=20, im_lo=-2.0, im_hi=2.0):
    pts = []
    for i in range(nx):
        re = strip_lo + (mp.mpf(i) + mp.mpf("0.5")) / nx * (strip_hi - strip_lo)
        for j in range(ny):
            im = mp.mpf(im_lo) + (mp.mpf(j) + mp.mpf("0.5")) / ny * (mp.mpf(im_hi) - mp.mpf(im_lo))
            pts.append(mp.mpc(re, im))
    return pts


def build_fatou_chart(nq, abel_tol=1e-4, m_max=512, validation_grid_spec=None,
                      k_cfg=5, em_order=EM_ORDER_MAX, chart_alpha_max=0.05,
                      theta_r=0.0, r_acc_frac=1.05, newton_tol=None):
    """Build and validate a Fatou chart for a neutral quadratic.

    validation_grid_spec: (nx, ny, im_lo, im_hi) or None for the default
    20 x 20 grid over Re Phi in (1, 1/alpha - k_cfg - 1), Im Phi in [-2, 2].

    Raises OutsideRegime unless alpha is small positive (a_{-1} = 0,
    eps_0 = +1, alpha <= chart_alpha_max); ChartDiverged when validation
    residuals exceed abel_tol.
    """
    bits = nq.precision_bits
    if nq.alpha.a_minus1 != 0 or nq.alpha.digits[0][0] != 1:
        raise OutsideRegime("chart requires alpha in (0, 1/2): a_{-1} = 0, eps_0 = +1")
    with mp.workprec(bits + _GUARD_BITS):
        alpha0 = nq.alpha0
        if not alpha0 <= chart_alpha_max:
            raise OutsideRegime(
                f"alpha = {mp.nstr(alpha0, 6)} above chart_alpha_max = {chart_alpha_max}")
        chart = FatouChart(nq, abel_tol=float(abel_tol), k_cfg=k_cfg,
                           em_order=em_order, r_acc_frac=r_acc_frac,
                           theta_r=theta_r, norm_offset=mp.mpc(0),
                           refinement_m=0, residual_stats={},
                           chart_alpha_max=chart_alpha_max)
        chart.norm_offset = chart.phi_raw(nq.cp)

        strip_lo = mp.mpf(1)
        strip_hi = 1 / alpha0 - k_cfg - 1
        if validation_grid_spec is None:
            grid = _default_grid(strip_lo, strip_hi)
        else:
            nx, ny, im_lo, im_hi = validation_grid_spec
            grid = _default_grid(strip_lo, strip_hi, nx, ny, im_lo, im_hi)
        residuals = []
        for zeta in grid:
            z = fatou_inverse(chart, zeta, newton_tol=newton_tol)
            residuals.append(chart.abel_residual(z))
        r_cp = abs(chart.phi(nq.cp))
        r_cv = abs(chart.phi(nq.cv) - 1)
        max_res = max(max(residuals), r_cp, r_cv)
        stats = {"max": float(max(residuals)),
                 "mean": float(mp.fsum(residuals) / len(residuals)),
                 "cp": float(r_cp), "cv": float(r_cv),
                 "grid_points": len(grid), "em_order": em_order}
        if max_res > mp.mpf(abel_tol):
            raise ChartDiverged(
                f"validation residual {mp.nstr(max_res, 4)} exceeds abel_tol {abel_tol}")

        # orbit-averaged Moebius-template refinement: adapt m until the
        # estimate stabilizes to abel_tol/4 (or m_max) and record the
        # residual reduction over the raw template
        probes = [grid[len(grid) // 3], grid[2 * len(grid) // 3]]
        probe_pts = [fatou_inverse(chart, zeta, newton_tol=newton_tol) for zeta in probes]

        def avg_residual(m):
            worst = mp.mpf(0)
            for z in probe_pts:
                d = chart.template_averaged(nq(z), m) - chart.template_averaged(z, m) - 1
                d -= mp.nint(d.real / chart.period) * chart.period
                worst = max(worst, abs(d))
            return worst

        m = 8
        prev = avg_residual(m)
        while m < m_max:
            cur = avg_residual(2 * m)
            m = 2 * m
            if abs(cur - prev) < mp.mpf(abel_tol) / 4:
                prev = cur
                break
            prev = cur
        stats["template_residual_m0"] = float(avg_residual(0))
        stats["template_residual_refined"] = float(prev)
        chart.refinement_m = m
        chart.residual_stats = stats
        return chart


def fatou_inverse(chart, zeta, newton_tol=None, max_steps=200):
    """Solve Phi(z) = zeta by Newton from the Moebius-template guess.

    Re zeta beyond the base strip is reduced by the functional equation
    Phi^{-1}(w + 1) = h(Phi^{-1}(w)).
    """
    nq = chart.map
    bits = chart.precision_bits
    with mp.workprec(bits + _GUARD_BITS):
        zeta = mp.mpc(zeta)
        if newton_tol is None:
            newton_tol = mp.mpf(2) ** (-(bits // 2))
        tol = mp.mpf(newton_tol)
        strip_hi = chart.period - chart.k_cfg - 1
        k_shift = 0
        if zeta.real > strip_hi:
            k_shift = int(mp.ceil(zeta.real - strip_hi))
        elif zeta.real < -1:
            k_shift = -int(mp.ceil(-1 - zeta.real))
        base = zeta - k_shift
        z = chart.mobius_inverse(base + chart.norm_offset)
        last = None
        for _ in range(max_steps):
            val, dv = chart.phi_deriv(z)
            F = val - base
            if abs(F) <= tol:
                break
            if abs(dv) == 0:
                raise NewtonDiverged("Phi' vanished during inversion")
            step = F / dv
            # double the step when stalled near the critical point (double root)
            if last is not None and abs(F) > 0.7 * last and abs(F) > 100 * tol:
                step = 2 * step
            cap = max(mp.mpf("0.25") * abs(z - chart.sigma), mp.mpf("0.02") * abs(chart.sigma))
            if abs(step) > cap:
                step = step / abs(step) * cap
            z = z - step
            last = abs(F)
        else:
            raise NewtonDiverged(f"no convergence after {max_steps} Newton steps")
        if k_shift > 0:
            for _ in range(k_shift):
                z = nq(z)
        elif k_shift < 0:
            for _ in range(-k_shift):
                z = chart._preimage(z, z)
        return +z


@dataclass(frozen=True)
class RenormValue:
    value: object
    ell: int
    zeta: object


def renormalize_eval(chart, w, strip_target=(0.5, 1.5), max_iters=None,
                     newton_tol=None):
    """Pointwise near-parabolic renormalization R(h)(w).

    Lifts w to the sector end of the strip, pulls back by the chart,
    iterates h until the Fatou coordinate re-enters strip_target, and
    projects by Exp.  Reports the iterate count l (the operational content
    of the orbit-relation lemma; 1 <= l <= a_0 + O(k) for in-regime w).
    """
    nq = chart.map
    bits = chart.precision_bits
    with mp.workprec(bits + _GUARD_BITS):
        w = mp.mpc(w)
        if abs(w) > renorm_radius_bound():
            raise OutsideDomain("w outside the renormalization image bound (4/27) e^{4 pi}")
        if w == 0:
            return RenormValue(value=mp.mpc(0), ell=0, zeta=None)
        zw = exp_lift(w, 0)
        if zw.imag < -2 - mp.mpf("1e-9"):
            raise OutsideDomain("lift below Im = -2")
        r_end = chart.period_int - chart.k_cfg - mp.mpf("1.5")
        zeta0 = zw + int(mp.nint(r_end - zw.real))
        z = fatou_inverse(chart, zeta0, newton_tol=newton_tol)
        if max_iters is None:
            max_iters = chart.period_int + chart.k_cfg + 12
        lo, hi = mp.mpf(strip_target[0]), mp.mpf(strip_target[1])
        for j in range(1, max_iters + 1):
            z = nq(z)
            zeta = chart.phi(z)
            if lo <= zeta.real < hi:
                return RenormValue(value=exp_proj(zeta), ell=j, zeta=+zeta)
        raise NoReturn(f"no iterate re-entered the strip within {max_iters} steps")


def renorm_multiplier(chart, radius=1e-3):
    """Finite-difference derivative of R(h) at 0 by a 4-point circle
    stencil (the symmetrization kills the other Taylor orders)."""
    with mp.workprec(chart.precision_bits + _GUARD_BITS):
        r = mp.mpf(radius)
        acc = mp.mpc(0)
        for j in range(4):
            w = r * mp.exp(2j * mp.pi * j / 4)
            acc += renormalize_eval(chart, w).value / w
        return acc / 4


def multiplier_phase_error(chart, deriv):
    """Angular distance between arg(deriv) and -2 pi / alpha (mod 2 pi)."""
    with mp.workprec(chart.precision_bits + _GUARD_BITS):
        target = -2 * mp.pi / chart.alpha0
        diff = mp.arg(deriv) - target
        diff -= mp.nint(diff / (2 * mp.pi)) * 2 * mp.pi
        return abs(diff)


def lift_chi(chart, zeta, branch=0):
    """The composed lift chi(zeta) = exp_lift(Phi^{-1}(zeta)): the change of
    coordinates whose derivative tends to alpha high in the strip."""
    return exp_lift(fatou_inverse(chart, zeta), branch)
