"""Command-line surface tying the computational modules into reproducible
experiments.

Every run resolves a RunConfig (defaults <- --config file <- explicit
flags), embeds its fingerprint in the emitted artifact, and caches the
artifact on disk keyed by a canonical hash of (subcommand, inputs,
config).  Domain errors exit 1 with a machine-readable JSON object on
stderr; usage errors exit 2.
"""

import argparse
import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field

from mpmath import mp

from . import dynamics, fatou, heights, presets, rotation, serialize
from .cache import DiskCache, cache_key
from .errors import CacheCorrupt, NearParabError

SUBCOMMANDS = ["cf-expand", "synth", "brjuno", "bisequence", "good-levels",
               "heights", "dichotomy", "orbit", "birkhoff", "siegel",
               "cycles", "density", "fatou-chart", "renorm-check"]


@dataclass
class RunConfig:
    precision_bits: int = 128
    depth: int = 20
    abel_tol: float = 1e-4
    newton_tol: float = 1e-10
    tail_tol: float = 1e-3
    N_hightype: int = 2
    M4: float = 1.0
    B_const: float = 0.0
    C_yoccoz: float = 1.0
    D_lift: float = 1.0
    cache_dir: str = ".nearparab-cache"
    output_format: str = "json"
    digits_out: int = 30

    def validate(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be >= 64")
        for name in ("abel_tol", "newton_tol", "tail_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.output_format not in ("json", "csv"):
            raise ValueError("output_format must be json or csv")

    def fingerprint(self):
        doc = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(doc.encode()).hexdigest()[:16]


def _build_parser():
    p = argparse.ArgumentParser(
        prog="nearparab",
        description="Arithmetic and dynamics of quadratic polynomials with a "
                    "neutral fixed point.")
    p.add_argument("--config", help="JSON file mirroring RunConfig")
    p.add_argument("--precision", type=int, help="working precision in bits")
    p.add_argument("--output", choices=["json", "csv"], help="artifact format")
    p.add_argument("--no-cache", action="store_true", help="bypass the disk cache")
    p.add_argument("--cache-dir", help="cache directory")
    p.add_argument("--digits-out", type=int, help="decimal digits in output")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        sp = sub.add_parser(name, **kw)
        return sp

    sp = add("cf-expand", help="modified continued fraction of a real number")
    sp.add_argument("--value", required=True, help="decimal value (string keeps precision)")
    sp.add_argument("--depth", type=int)

    sp = add("synth", help="evaluate a digit stream to a real number")
    sp.add_argument("--digits", required=True)
    sp.add_argument("--depth", type=int)

    sp = add("brjuno", help="alphas, betas, Brjuno partial sums, q_n")
    sp.add_argument("--digits", required=True)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--oracle-bound", type=int, default=0,
                    help="cross-check q_n against the closest-return scan up to this bound")

    sp = add("bisequence", help="backward bi-sequence table with closed-form check")
    sp.add_argument("--digits", required=True)
    sp.add_argument("--B", type=float, default=0.0)
    sp.add_argument("--k", type=int, required=True, help="table depth k_max")

    sp = add("good-levels", help="the set L(alpha, T, l) up to a bound")
    sp.add_argument("--digits", required=True)
    sp.add_argument("--B", type=float, default=0.0)
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--level", type=int, default=0, help="l")
    sp.add_argument("--k", type=int, required=True, help="k_bound")

    sp = add("heights", help="interval height chain down the tower")
    sp.add_argument("--digits", required=True)
    sp.add_argument("--level", type=int, required=True, help="top level n")
    sp.add_argument("--M4", type=float)
    sp.add_argument("--B", type=float)
    sp.add_argument("--seed-height", type=float, default=-2.0)

    sp = add("dichotomy", help="good-level diagnostics (finite-depth heuristic)")
    sp.add_argument("--digits", required=True)
    sp.add_argument("--B", type=float, default=0.0)
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--l-max", type=int, default=3)
    sp.add_argument("--k", type=int, required=True, help="k_bound")

    sp = add("orbit", help="high-precision orbit trace")
    sp.add_argument("--digits", required=True)
    sp.add_argument("--variant", choices=["P", "Q"], default="Q")
    sp.add_argument("--seed", required=True,
                    help="cv, cp, sigma, zero, 're,im', optionally with @<n> or @q<k> forward shift")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--escape-radius", type=float, default=10.0)
    sp.add_argument("--flag-delta", type=float)
    sp.add_argument("--binary-out", help="write the compact binary frames here")

    sp = add("birkhoff", help="running Birkhoff averages along an orbit")
    sp.add_argument("--digits", required=True)
    sp.add_argument("--variant", choices=["P", "Q"], default="P")
    sp.add_argument("--seeds", required=True, help="comma-separated seed specs")
    sp.add_argument("--observable", default="re",
                    help="re | im | abs2 | indicator_ball:cre,cim,delta (comma-separate several)")
    sp.add_argument("--N", type=int, required=True)

    sp = add("siegel", help="Siegel-disk radius estimates")
    sp.add_argument("--digits", required=True)
    sp.add_argument("--variant", choices=["P", "Q"], default="P")
    sp.add_argument("--depth", type=int)
    sp.add_argument("--terms", type=int, default=400)

    sp = add("cycles", help="Newton search for a small cycle of period q_n")
    sp.add_argument("--digits", required=True)
    sp.add_argument("--variant", choices=["P", "Q"], default="P")
    sp.add_argument("--level", type=int, required=True, help="n with period q_n")

    sp = add("density", help="orbit-sample density proxy for the sector counts")
    sp.add_argument("--digits", required=True)
    sp.add_argument("--variant", choices=["P", "Q"], default="Q")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--mode", choices=["near_zero", "near_siegel"], required=True)

    sp = add("fatou-chart", help="build (or fetch) a validated Fatou chart")
    sp.add_argument("--digits", required=True)
    sp.add_argument("--variant", choices=["P", "Q"], default="Q")
    sp.add_argument("--abel-tol", type=float)

    sp = add("renorm-check", help="renormalization multiplier against -2 pi / alpha")
    sp.add_argument("--digits", required=True)
    sp.add_argument("--variant", choices=["P", "Q"], default="Q")
    sp.add_argument("--abel-tol", type=float)
    sp.add_argument("--radius", type=float, default=1e-3)
    return p


def _resolve_config(args):
    cfg = RunConfig()
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        for k, v in doc.items():
            if not hasattr(cfg, k):
                raise ValueError(f"unknown config key: {k}")
            setattr(cfg, k, v)
    if args.precision is not None:
        cfg.precision_bits = args.precision
    if args.output is not None:
        cfg.output_format = args.output
    if args.cache_dir is not None:
        cfg.cache_dir = args.cache_dir
    if args.digits_out is not None:
        cfg.digits_out = args.digits_out
    if getattr(args, "abel_tol", None) is not None:
        cfg.abel_tol = args.abel_tol
    if getattr(args, "M4", None) is not None:
        cfg.M4 = args.M4
    if getattr(args, "B", None) is not None and args.command == "heights":
        cfg.B_const = args.B
    cfg.validate()
    return cfg


def _digits_of(args, cfg, extra=1):
    depth = getattr(args, "depth", None) or cfg.depth
    return presets.parse_digits(args.digits, depth + extra), depth


def _parse_seed(spec, nq, profile):
    shift = 0
    if "@" in spec:
        spec, tail = spec.split("@", 1)
        if tail.startswith("q"):
            shift = profile.q_times[int(tail[1:])]
        else:
            shift = int(tail)
    base = {"cv": nq.cv, "cp": nq.cp, "sigma": nq.sigma, "zero": mp.mpc(0),
            "0": mp.mpc(0)}.get(spec)
    if base is None:
        parts = spec.split(",")
        base = mp.mpc(mp.mpf(parts[0]), mp.mpf(parts[1]) if len(parts) > 1 else 0)
    return nq.iterate_n(base, shift) if shift else base


def _run_command(args, cfg):
    """Returns (data_dict, csv_text_or_None)."""
    digits_out = cfg.digits_out
    fmt = lambda x: serialize.fmt(x, digits_out)

    if args.command == "cf-expand":
        depth = args.depth or cfg.depth
        rn = rotation.expand_cf(mp.mpf(args.value), depth, cfg.precision_bits)
        return {"digits": rn.to_json_dict()}, None

    if args.command == "synth":
        rn, depth = _digits_of(args, cfg, extra=0)
        rn = rn.materialize(depth)
        val = rotation.synthesize_alpha(
            rotation.RotationNumber(rn.a_minus1, rn.digits[:depth]), cfg.precision_bits)
        return {"alpha": fmt(val), "depth": depth}, None

    if args.command == "brjuno":
        rn, depth = _digits_of(args, cfg)
        prof = rotation.brjuno_profile(rn, depth, cfg.precision_bits)
        data = serialize.profile_to_json(prof, digits_out)
        data["brjuno_partial"] = fmt(prof.brjuno_partial)
        if args.oracle_bound:
            records = rotation.closest_return_times(rn, args.oracle_bound)
            expect = [q for q in prof.q_times if q <= args.oracle_bound]
            data["oracle_q"] = records
            data["oracle_agrees"] = records == expect
        return data, serialize.profile_to_csv(prof, digits_out)

    if args.command == "bisequence":
        rn, _ = _digits_of(args, cfg, extra=max(2, args.k + 2))
        table = rotation.bisequence(rn, args.B, args.k, cfg.precision_bits)
        return (serialize.table_to_json(table, digits_out),
                serialize.table_to_csv(table, digits_out))

    if args.command == "good-levels":
        rn, _ = _digits_of(args, cfg, extra=max(2, args.k + 2))
        table = rotation.bisequence(rn, args.B, args.k, cfg.precision_bits)
        prof = rotation.brjuno_profile(rn, args.k, cfg.precision_bits)
        members = sorted(rotation.good_levels(table, prof, args.T, args.level, args.k))
        return {"T": args.T, "l": args.level, "k_bound": args.k,
                "members": members}, None

    if args.command == "heights":
        rn, _ = _digits_of(args, cfg, extra=max(2, args.level + 2))
        prof = rotation.brjuno_profile(rn, args.level, cfg.precision_bits)
        table = rotation.bisequence(rn, cfg.B_const, args.level, cfg.precision_bits)
        chain = heights.propagate_heights(prof, args.level, args.seed_height,
                                          cfg.M4, cfg.B_const, table=table)
        return chain.to_json_dict(digits_out), None

    if args.command == "dichotomy":
        rn, _ = _digits_of(args, cfg, extra=max(2, args.k + 2))
        table = rotation.bisequence(rn, args.B, args.k, cfg.precision_bits)
        prof = rotation.brjuno_profile(rn, args.k, cfg.precision_bits)
        report = heights.dichotomy_diagnostics(table, prof, args.T, args.l_max,
                                               args.k, M4=cfg.M4)
        return report.to_json_dict(), None

    if args.command == "orbit":
        rn, _ = _digits_of(args, cfg)
        nq = dynamics.make_map(args.variant, rn, cfg.precision_bits)
        prof = rotation.brjuno_profile(rn, min(rn.depth - 1, 12), cfg.precision_bits)
        seed = _parse_seed(args.seed, nq, prof)
        trace = dynamics.iterate(nq, seed, args.N, stride=args.stride,
                                 escape_radius=args.escape_radius,
                                 flag_delta=args.flag_delta)
        if args.binary_out:
            with open(args.binary_out, "wb") as fh:
                fh.write(trace.to_binary())
        return trace.to_json_dict(digits_out), trace.to_csv(digits_out)

    if args.command == "birkhoff":
        rn, _ = _digits_of(args, cfg)
        nq = dynamics.make_map(args.variant, rn, cfg.precision_bits)
        prof = rotation.brjuno_profile(rn, min(rn.depth - 1, 12), cfg.precision_bits)
        q_window = max(q for q in prof.q_times if q <= max(args.N // 4, 1))
        out = {"N": args.N, "q_window": q_window, "seeds": {}}
        for spec in args.seeds.split(";") if ";" in args.seeds else args.seeds.split(","):
            seed = _parse_seed(spec.strip(), nq, prof)
            series = dynamics.birkhoff_averages(
                nq, seed, [o.strip() for o in args.observable.split("|")],
                args.N, q_window=q_window)
            out["seeds"][spec.strip()] = {
                s.observable: {"final": fmt(s.final),
                               "checkpoints": list(s.checkpoints),
                               "averages": [fmt(a) for a in s.averages],
                               "cauchy_gap": fmt(s.cauchy_gap) if s.cauchy_gap is not None else None}
                for s in series}
        return out, None

    if args.command == "siegel":
        rn, depth = _digits_of(args, cfg)
        nq = dynamics.make_map(args.variant, rn, cfg.precision_bits)
        est = dynamics.siegel_estimate(nq, depth, args.terms, C_config=cfg.C_yoccoz)
        return {"yoccoz_lower": fmt(est.yoccoz_lower),
                "linearization_radius": fmt(est.linearization_radius),
                "brjuno_partial": fmt(est.brjuno_partial),
                "depth_used": est.depth_used, "terms_used": est.terms_used,
                "boundary_sample_size": len(est.boundary_sample)}, None

    if args.command == "cycles":
        rn, _ = _digits_of(args, cfg, extra=max(2, args.level + 2))
        nq = dynamics.make_map(args.variant, rn, cfg.precision_bits)
        prof = rotation.brjuno_profile(rn, args.level + 1, cfg.precision_bits)
        cycle, res, hist = dynamics.find_small_cycle(
            nq, args.level, profile=prof, newton_tol=cfg.newton_tol)
        return {"period": prof.q_times[args.level], "residual": fmt(res),
                "points": [[fmt(p.real), fmt(p.imag)] for p in cycle],
                "newton_residuals": [fmt(h) for h in hist]}, None

    if args.command == "density":
        rn, _ = _digits_of(args, cfg, extra=max(2, args.level + 2))
        nq = dynamics.make_map(args.variant, rn, cfg.precision_bits)
        prof = rotation.brjuno_profile(rn, args.level + 1, cfg.precision_bits)
        frac = dynamics.density_estimate(nq, args.level, args.delta, args.mode,
                                         profile=prof)
        return {"mode": args.mode, "level": args.level, "delta": args.delta,
                "q_n": prof.q_times[args.level], "fraction": fmt(frac),
                "proxy_note": "point-sample proxy for the sector count, "
                              "not the sector count itself"}, None

    if args.command in ("fatou-chart", "renorm-check"):
        rn, _ = _digits_of(args, cfg, extra=max(2, 12))
        nq = dynamics.make_map(args.variant, rn, cfg.precision_bits)
        chart = _chart_cached(nq, rn, cfg)
        if args.command == "fatou-chart":
            return chart.to_json_dict(), None
        deriv = fatou.renorm_multiplier(chart, radius=args.radius)
        err = fatou.multiplier_phase_error(chart, deriv)
        with mp.workprec(cfg.precision_bits):
            target = -2 * mp.pi / chart.alpha0
        return {"derivative": [fmt(deriv.real), fmt(deriv.imag)],
                "abs": fmt(abs(deriv)), "target_phase": fmt(target),
                "phase_error": fmt(err), "radius": args.radius,
                "chart_residuals": chart.residual_stats}, None

    raise ValueError(f"unknown command {args.command}")


def _chart_cached(nq, rn, cfg):
    key = fatou.chart_cache_key(nq.variant, rn, cfg.precision_bits,
                                cfg.abel_tol, 5)
    cache = DiskCache(cfg.cache_dir)
    try:
        hit = cache.get("chart-" + key)
    except CacheCorrupt:
        hit = None
    if hit is not None:
        return fatou.FatouChart.from_json_dict(json.loads(hit), nq=nq)
    chart = fatou.build_fatou_chart(nq, abel_tol=cfg.abel_tol,
                                    newton_tol=cfg.newton_tol)
    cache.put("chart-" + key, json.dumps(chart.to_json_dict(), sort_keys=True))
    return chart


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        fingerprint = cfg.fingerprint()
        inputs = {k: v for k, v in sorted(vars(args).items())
                  if k not in ("config", "no_cache")}
        key = cache_key(args.command, inputs, asdict(cfg))
        cache = DiskCache(cfg.cache_dir)
        artifact = None
        if not args.no_cache:
            try:
                artifact = cache.get(key)
            except CacheCorrupt:
                artifact = None  # recompute and overwrite below
        if artifact is None:
            with mp.workprec(cfg.precision_bits + 16):
                data, csv_text = _run_command(args, cfg)
            if cfg.output_format == "csv" and csv_text is not None:
                artifact = f"config,{fingerprint}\n" + csv_text
            else:
                envelope = {"command": args.command, "fingerprint": fingerprint,
                            "config": asdict(cfg), "data": data}
                artifact = serialize.dumps_canonical(envelope)
            if not args.no_cache:
                cache.put(key, artifact)
        sys.stdout.write(artifact)
        return 0
    except NearParabError as exc:
        sys.stderr.write(json.dumps({"error": exc.payload()}) + "\n")
        return 1
    except (ValueError, OSError) as exc:
        sys.stderr.write(json.dumps(
            {"error": {"type": type(exc).__name__, "message": str(exc)}}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
