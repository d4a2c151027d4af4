"""Batch front-end: analyze / synthesize / expand / decompose / rotate /
verify / theta subcommands with a single JSON config and deterministic output.

Exit codes: 0 ok, 1 invariant failure, 2 input or configuration error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import certainty, expansion, gabor, higher, metaplectic, numerics, phaseplane, verify


@dataclass
class RunConfig:
    T: float = 8.0
    h: float = 1.0 / 64.0
    N: int = 32
    Q: int = 8
    dlam: float = 1.0 / 16.0
    box: float = 8.0
    R: int = 6
    delta: float = 2.0
    m: int = 0
    r: float = 4.0
    refine: bool = True
    decomp_dlam: float = 1.0 / 8.0
    margin: float = 4.0
    seed: int = 0

    def validate(self):
        if self.T <= 0 or self.h <= 0:
            raise ValueError("config: T and h must be positive")
        n = 2 * self.T / self.h
        if abs(n - round(n)) > 1e-9:
            raise ValueError("config: 2T/h must be an integer")
        if abs(self.T - round(self.T)) > 1e-9:
            raise ValueError("config: T must be an integer (Zak and sharp sums need integer support)")
        half = 0.5 / self.h
        if abs(half - round(half)) > 1e-9:
            raise ValueError("config: 1/(2h) must be an integer so half-integer points are sampled")
        if self.N % 2 != 0:
            raise ValueError("config: N must be even (midpoint-grid rule)")
        s = 1.0 / (self.N * self.h)
        if abs(s - round(s)) > 1e-9 or round(s) % 2 != 0:
            raise ValueError("config: 1/(N h) must be an even integer (midpoint grid on samples)")
        if self.Q < 1:
            raise ValueError("config: Q must be >= 1")
        if self.dlam <= 0 or self.decomp_dlam <= 0:
            raise ValueError("config: phase-grid spacings must be positive")
        if self.box <= 0 or self.box > self.T + 1e-9:
            raise ValueError("config: phase box must lie within the grid, 0 < box <= T")
        if self.R < 0:
            raise ValueError("config: cutoff R must be >= 0")
        if self.delta < 0:
            raise ValueError("config: delta must be >= 0")
        if not (0 <= self.m <= higher.MAX_ORDER):
            raise ValueError(f"config: m must be in 0..{higher.MAX_ORDER}")
        if self.r <= 0:
            raise ValueError("config: r must be positive")
        if self.margin < 0:
            raise ValueError("config: margin must be >= 0")
        return self

    def hash(self) -> str:
        payload = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def load_config(args) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            values.update(json.load(fh))
    for f in fields(RunConfig):
        override = getattr(args, f.name, None)
        if override is not None:
            values[f.name] = override
    known = {f.name for f in fields(RunConfig)}
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"config: unknown fields {sorted(unknown)}")
    return RunConfig(**values).validate()


def _add_config_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file; command-line flags override it")
    p.add_argument("--T", type=float, dest="T")
    p.add_argument("--h", type=float, dest="h")
    p.add_argument("--N", type=int, dest="N")
    p.add_argument("--Q", type=int, dest="Q")
    p.add_argument("--dlam", type=float, dest="dlam")
    p.add_argument("--box", type=float, dest="box")
    p.add_argument("--R", type=int, dest="R")
    p.add_argument("--delta", type=float, dest="delta")
    p.add_argument("--m", type=int, dest="m")
    p.add_argument("--r", type=float, dest="r")
    p.add_argument("--margin", type=float, dest="margin")
    p.add_argument("--seed", type=int, dest="seed")
    p.add_argument("--no-refine", dest="refine", action="store_const", const=False)
    p.add_argument("--decomp-dlam", type=float, dest="decomp_dlam")


def _dump_json(payload, path=None):
    text = json.dumps(payload, sort_keys=True, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_analyze(args) -> int:
    config = load_config(args)
    f = numerics.signal_from_csv(args.input)
    field = gabor.gabor_transform(f, config.box, config.dlam)
    if args.out_field:
        field.to_csv(args.out_field)
    summary = {
        "config_hash": config.hash(),
        "norm": f.norm(),
        "hdelta_norm": expansion.hdelta_norm(f, config.delta, config.box, config.dlam),
        "parseval_ratio": field.mass() / f.norm() ** 2 if f.norm() > 0 else 0.0,
        "grid": {"T": f.T, "h": f.h, "samples": int(f.values.size)},
        "delta": config.delta,
    }
    _dump_json(summary, args.out_summary)
    return 0


def cmd_synthesize(args) -> int:
    config = load_config(args)
    with open(args.coeffs) as fh:
        coeffs = gabor.CoefficientSet.from_json(fh.read())
    sig = gabor.synthesize(coeffs, config.T, config.h, config.margin)
    sig.to_csv(args.out)
    return 0


def cmd_expand(args) -> int:
    config = load_config(args)
    f = numerics.signal_from_csv(args.input)
    n_override = args.N if getattr(args, "N", None) else None
    # residual diagnostics must synthesize atoms out to |p| = R
    diag_margin = max(0.0, min(config.margin, f.T - config.R))
    if config.m == 0:
        exp = expansion.relaxed_coefficients(f, config.R, n_override, config.refine)
        rec = exp.signal(f.T, f.h, diag_margin)
        coeffs = exp.full_coefficients()
    else:
        exp = higher.order_m_coefficients(f, config.m, R=config.R, refine=config.refine)
        rec = exp.signal(f.T, f.h, diag_margin)
        coeffs = exp.full_coefficients()
    residual = (f - rec).norm() / f.norm() if f.norm() > 0 else 0.0
    payload = json.loads(coeffs.to_json())
    payload["diagnostics"] = {
        "residual": residual,
        "l2": coeffs.l2(),
        "hdelta": expansion.hdelta_norm(f, config.delta, config.box, config.dlam),
        "config_hash": config.hash(),
    }
    _dump_json(payload, args.out)
    return 0


def cmd_decompose(args) -> int:
    config = load_config(args)
    f = numerics.signal_from_csv(args.input)
    with open(args.domain) as fh:
        K = phaseplane.domain_from_json(fh.read())
    dec = certainty.decompose(f, K, config.r, config.m if args.m is not None else None,
                              config.delta, config.decomp_dlam)
    payload = {
        "config_hash": config.hash(),
        "lattice": json.loads(dec.alpha.to_json()),
        "sharp": json.loads(dec.omega.to_json()),
        "report": dec.report,
    }
    _dump_json(payload, args.out)
    if args.residual_csv:
        dec.residual.to_csv(args.residual_csv)
    return 0


def cmd_rotate(args) -> int:
    config = load_config(args)
    f = numerics.signal_from_csv(args.input)
    out = metaplectic.metaplectic_apply(metaplectic.Rotation(args.angle), f)
    out.to_csv(args.out)
    return 0


def cmd_theta(args) -> int:
    config = load_config(args)
    cfg = numerics.ThetaConfig(config.Q)
    if args.z is not None:
        re, im = (float(t) for t in args.z.split(","))
        val = numerics.theta(complex(re, im), cfg)
        print(f"theta({re},{im}) = {val.real!r} {val.imag:+}i")
    if args.x is not None:
        print(f"locint({args.x}) = {numerics.loc_integral(args.x)!r}")
    if args.z is None and args.x is None:
        print("nothing to evaluate: pass --z RE,IM and/or --x X")
        return 2
    return 0


def cmd_verify(args) -> int:
    config = load_config(args)
    rng = np.random.default_rng(config.seed)
    checks = verify.run_checks(config, rng)
    for c in checks:
        status = "PASS" if c["passed"] else "FAIL"
        rel = "<=" if c["mode"] == "max" else ">="
        print(f"{status} {c['name']}: measured={c['measured']!r} {rel} tol={c['tol']!r}")
    all_passed = all(c["passed"] for c in checks)
    report = {
        "config": asdict(config),
        "config_hash": config.hash(),
        "seed": config.seed,
        "checks": checks,
        "all_passed": all_passed,
    }
    if args.out:
        _dump_json(report, args.out)
    print(("OK" if all_passed else "FAILED") + f" ({sum(c['passed'] for c in checks)}/{len(checks)} checks)")
    return 0 if all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="criticalgabor",
                                     description="Gabor analysis at critical density")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="Gabor-transform a signal; emit field CSV + summary JSON")
    _add_config_flags(p)
    p.add_argument("--input", required=True)
    p.add_argument("--out-field")
    p.add_argument("--out-summary")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("synthesize", help="synthesize a signal from a coefficient JSON")
    _add_config_flags(p)
    p.add_argument("--coeffs", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_synthesize)

    p = sub.add_parser("expand", help="relaxed (m=0) or order-m expansion of a signal")
    _add_config_flags(p)
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_expand)

    p = sub.add_parser("decompose", help="certainty decomposition over a domain JSON")
    _add_config_flags(p)
    p.add_argument("--input", required=True)
    p.add_argument("--domain", required=True)
    p.add_argument("--out")
    p.add_argument("--residual-csv")
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("rotate", help="apply the metaplectic operator of a rotation")
    _add_config_flags(p)
    p.add_argument("--input", required=True)
    p.add_argument("--angle", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_rotate)

    p = sub.add_parser("theta", help="print theta(z) and the localization integral I(x)")
    _add_config_flags(p)
    p.add_argument("--z", help="complex argument as RE,IM")
    p.add_argument("--x", type=float)
    p.set_defaults(fn=cmd_theta)

    p = sub.add_parser("verify", help="run the named invariant suite")
    _add_config_flags(p)
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
