"""Output schemas: JSON documents and RFC-4180-style CSV (UTF-8, LF).

Reals are emitted as decimal strings at a configurable digit count
(default 30); bit-exactness is not promised across platforms, but output
is deterministic for a fixed configuration.
"""

import json

from mpmath import mp

DEFAULT_DIGITS = 30


def fmt(x, digits=DEFAULT_DIGITS):
    """Decimal string of an mpf/mpc/int at the configured digit count."""
    if isinstance(x, (int, str)):
        return str(x)
    if isinstance(x, complex) or (hasattr(x, "imag") and x.imag != 0):
        return f"{mp.nstr(x.real, digits)}{'+' if x.imag >= 0 else ''}{mp.nstr(x.imag, digits)}j"
    if hasattr(x, "real"):
        x = x.real
    return mp.nstr(mp.mpf(x), digits)


def profile_to_csv(profile, digits=DEFAULT_DIGITS, header_prefix=None):
    lines = [] if header_prefix is None else [header_prefix]
    lines.append("k,alpha_k,beta_k,brjuno_partial_k,q_k")
    for k in range(profile.depth + 1):
        q = profile.q_times[k] if k < len(profile.q_times) else ""
        lines.append(",".join([str(k), fmt(profile.alphas[k], digits),
                               fmt(profile.betas[k], digits),
                               fmt(profile.partials[k], digits), str(q)]))
    return "\n".join(lines) + "\n"


def profile_to_json(profile, digits=DEFAULT_DIGITS):
    return {"depth": profile.depth, "precision_bits": profile.precision_bits,
            "alphas": [fmt(a, digits) for a in profile.alphas],
            "betas": [fmt(b, digits) for b in profile.betas],
            "brjuno_partials": [fmt(p, digits) for p in profile.partials],
            "q_times": [str(q) for q in profile.q_times]}


def table_to_csv(table, digits=DEFAULT_DIGITS, header_prefix=None):
    lines = [] if header_prefix is None else [header_prefix]
    lines.append("k,i,B_ki,closed_form")
    for k in range(table.k_max + 1):
        for i in range(k + 1):
            lines.append(",".join([str(k), str(i), fmt(table.entry(k, i), digits),
                                   fmt(table.closed_form(k, i), digits)]))
    return "\n".join(lines) + "\n"


def table_to_json(table, digits=DEFAULT_DIGITS):
    return {"B_const": fmt(table.B_const, digits), "k_max": table.k_max,
            "precision_bits": table.precision_bits,
            "rows": [[fmt(x, digits) for x in row] for row in table.rows],
            "closed_form": [[fmt(x, digits) for x in row] for row in table.closed_rows],
            "max_deviation": fmt(table.max_deviation(), digits)}


def dumps_canonical(doc):
    """Deterministic JSON text (sorted keys, LF, no trailing spaces)."""
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"
