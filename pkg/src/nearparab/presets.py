"""Named digit presets.

The interesting rotation numbers of this domain are defined by the
behavior of their digits, not by decimal values, so the CLI and tests
speak in presets:

  golden2        all digits (+1, 2); the value is sqrt(2) - 1
  hiN:<n>        all digits (+1, n); high type of any requested strength
  liouville:<c>[:<base>]
                 a_0 = base, a_{j+1} ~ exp(c * a_1 ... a_j): each Brjuno
                 term contributes ~ c, so partial sums grow linearly and
                 the stream is non-Brjuno-flavored by construction.
"""

import json
import os

from mpmath import mp

from .errors import PrecisionExhausted
from .rotation import RotationNumber

# Integers above this bit size are not materialized as digits.
_MAX_DIGIT_BITS = 4_000_000


def _liouville_digit(c, base, index, digits_so_far):
    if index == 0:
        return (1, base)
    # exponent c * a_1 * ... * a_{index-1}; a_0 does not enter beta
    log2_exp = mp.log(c, 2)
    for (_e, a) in digits_so_far[1:]:
        log2_exp += mp.log(a, 2)
    if log2_exp > mp.log(_MAX_DIGIT_BITS, 2):
        raise PrecisionExhausted(
            f"liouville digit {index} needs ~2^{mp.nstr(log2_exp, 5)} bits; beyond materializable size")
    exponent = mp.mpf(c)
    for (_e, a) in digits_so_far[1:]:
        exponent *= a
    with mp.workprec(64):
        val = mp.exp(exponent)
    a = int(mp.ceil(val))
    return (1, max(a, 2))


def make_preset(spec, depth):
    """Materialize a named preset to the requested number of digits."""
    if spec == "golden2":
        rule = lambda i: (1, 2)
        return RotationNumber(0, tuple((1, 2) for _ in range(depth)),
                              label="golden2", rule=rule)
    if spec.startswith("hiN:"):
        n = int(spec.split(":")[1])
        if n < 2:
            raise ValueError("hiN digit must be >= 2")
        rule = lambda i, n=n: (1, n)
        return RotationNumber(0, tuple((1, n) for _ in range(depth)),
                              label=spec, rule=rule)
    if spec.startswith("liouville:"):
        parts = spec.split(":")
        c = float(parts[1])
        base = int(parts[2]) if len(parts) > 2 else 10
        digits = []
        for i in range(depth):
            digits.append(_liouville_digit(c, base, i, digits))

        def rule(i, c=c, base=base):
            # recompute the prefix so extension stays consistent
            ds = []
            for j in range(i + 1):
                ds.append(_liouville_digit(c, base, j, ds))
            return ds[i]

        return RotationNumber(0, tuple(digits), label=spec, rule=rule)
    raise ValueError(f"unknown digit preset: {spec!r}")


def parse_digits(spec, depth):
    """Resolve a --digits argument: preset name, inline JSON document, or
    path to a JSON file with the digit-stream schema."""
    if spec in ("golden2",) or spec.startswith(("hiN:", "liouville:")):
        return make_preset(spec, depth)
    if spec.strip().startswith("{"):
        rn = RotationNumber.from_json_dict(json.loads(spec))
    elif os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            rn = RotationNumber.from_json_dict(json.load(fh))
    else:
        raise ValueError(f"--digits: not a preset, JSON document, or file: {spec!r}")
    rn = RotationNumber(rn.a_minus1, rn.digits, label=spec)
    return rn
