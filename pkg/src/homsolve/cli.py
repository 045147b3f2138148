"""Command-line surface: solve a system file, generate random inputs,
certify a candidate point, and run seeded benchmark sweeps to CSV.

All commands are deterministic given their flags; `seconds` is the only
benchmark column that varies between runs.

Exit codes: 0 success / certified, 1 parse or usage error, 2 solver
failure (rounds exceeded, entropy exhausted), 3 certification failed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .conditioning import certify_root, mu_exact
from .errors import EntropyExhausted, RoundsExceeded
from .homotopy import hc, path_oracle
from .projective import ProjectivePoint, dist_sphere
from .randomization import bp
from .solver import SolverConfig, dbp, random_unit_system
from .systems import DegreeProfile, dump_system, parse_system, weyl_inner

BENCH_HEADER = "trial,n,D,N,K,rounds,mu_start_sq,seconds,certified"
PATHS_HEADER = "trial,n,D,N,K,d_s,I2_hat,I3_hat,M_hat,M_tilde,seconds"


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-rounds", type=int, default=8)
    p.add_argument("--max-steps", type=int, default=10_000_000)
    p.add_argument("--trig", choices=["hw", "bss"], default="hw")
    p.add_argument("--geodesic", choices=["exact", "chord"], default="exact")
    p.add_argument("--mu", choices=["exact", "bound"], default="exact")
    p.add_argument("--entropy-fallback", choices=["fail", "hash"], default="hash")


def _config_from(args) -> SolverConfig:
    return SolverConfig(max_rounds=args.max_rounds, geodesic_mode=args.geodesic,
                        trig_mode=args.trig, mu_mode=args.mu,
                        entropy_fallback=args.entropy_fallback,
                        max_steps=args.max_steps)


def _parse_degrees(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def _load_system(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_system(fh.read())


def cmd_solve(args) -> int:
    try:
        f = _load_system(args.path)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot read system: {exc}", file=sys.stderr)
        return 1
    cfg = _config_from(args)
    try:
        report = dbp(f, cfg)
    except (RoundsExceeded, EntropyExhausted) as exc:
        print(f"error: solve failed: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(report.to_obj()))
    return 0 if report.certificate.passed else 3


def cmd_gen(args) -> int:
    profile = DegreeProfile(args.n, _parse_degrees(args.degrees))
    rng = np.random.default_rng(args.seed)
    print(dump_system(random_unit_system(profile, rng)))
    return 0


def cmd_certify(args) -> int:
    try:
        f = _load_system(args.path)
        coords = [complex(tok) for tok in args.point.split(",")]
        if len(coords) != f.profile.nvars:
            raise ValueError(f"point must have {f.profile.nvars} coordinates")
        z = ProjectivePoint(np.array(coords))
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    cert = certify_root(f, z, iters=args.iters)
    print(json.dumps(cert.to_obj()))
    return 0 if cert.passed else 3


# --- benchmark harness ------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(int(x))


def _bench_trial(payload) -> str:
    kind, trial, seed, n, degrees, cfg_kw, resolution = payload
    profile = DegreeProfile(n, degrees)
    cfg = SolverConfig(**cfg_kw)
    rng = np.random.default_rng(np.random.SeedSequence((seed, trial)))
    t0 = time.perf_counter()

    if kind == "mu":
        u = random_unit_system(profile, rng)
        pair = bp(u)
        musq = mu_exact(pair.g, pair.zeta) ** 2
        row = [trial, profile.n, profile.D, profile.N, 0, 0, musq,
               time.perf_counter() - t0, False]
        return ",".join(_fmt(x) for x in row)

    if kind in ("steps", "omega"):
        f = random_unit_system(profile, rng)
        try:
            report = dbp(f, cfg)
            k_total, rounds = report.K_total, report.rounds
            mu_start = report.per_round[-1].mu_start
            certified = report.certificate.passed
        except RoundsExceeded as exc:
            k_total = sum(r.K for r in exc.per_round)
            rounds = len(exc.per_round)
            mu_start = exc.per_round[-1].mu_start if exc.per_round else math.nan
            certified = False
        except EntropyExhausted:
            k_total, rounds, mu_start, certified = 0, 0, math.nan, False
        row = [trial, profile.n, profile.D, profile.N, k_total, rounds,
               mu_start * mu_start, time.perf_counter() - t0, certified]
        return ",".join(_fmt(x) for x in row)

    if kind == "paths":
        f = random_unit_system(profile, rng)
        pair = bp(random_unit_system(profile, rng))
        sign = 1.0 if weyl_inner(f, pair.g).real >= 0.0 else -1.0
        g = sign * pair.g
        d_s = dist_sphere(f, g)
        outcome = hc(f, g, pair.zeta, max_steps=cfg.max_steps, mu_mode=cfg.mu_mode,
                     geodesic_mode=cfg.geodesic_mode)
        m_hat, integrals = path_oracle(f, g, pair.zeta, [2.0, 3.0],
                                       resolution=resolution)
        row = [trial, profile.n, profile.D, profile.N, outcome.trace.K, d_s,
               integrals[2.0], integrals[3.0], m_hat, outcome.trace.max_mu,
               time.perf_counter() - t0]
        return ",".join(_fmt(x) for x in row)

    raise ValueError(f"unknown bench kind {kind!r}")


def run_bench(kind: str, trials: int, seed: int, profile: DegreeProfile,
              cfg: SolverConfig, jobs: int = 1, resolution: int = 10_000):
    """Rows of one benchmark sweep, in trial order regardless of scheduling."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cfg_kw = dict(max_rounds=cfg.max_rounds, geodesic_mode=cfg.geodesic_mode,
                  trig_mode=cfg.trig_mode, mu_mode=cfg.mu_mode,
                  entropy_fallback=cfg.entropy_fallback, max_steps=cfg.max_steps)
    payloads = [(kind, t, seed, profile.n, profile.degrees, cfg_kw, resolution)
                for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_bench_trial, payloads, chunksize=4))
    return [_bench_trial(p) for p in payloads]


def cmd_bench(args) -> int:
    profile = DegreeProfile(args.n, _parse_degrees(args.degrees))
    rows = run_bench(args.kind, args.trials, args.seed, profile,
                     _config_from(args), jobs=args.jobs,
                     resolution=args.oracle_resolution)
    print(PATHS_HEADER if args.kind == "paths" else BENCH_HEADER)
    for row in rows:
        print(row)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="homsolve",
        description="Certified roots of homogeneous polynomial systems by "
                    "homotopy continuation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a system file, JSON report on stdout")
    p.add_argument("path")
    _add_solver_flags(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("gen", help="emit a seeded random unit system file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degrees", required=True, help="comma-separated, e.g. 2,2")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("certify", help="certify a candidate root of a system file")
    p.add_argument("path")
    p.add_argument("--point", required=True,
                   help="comma-separated complex coordinates, e.g. '1+0j,0.5j'")
    p.add_argument("--iters", type=int, default=3)
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("bench", help="seeded Monte Carlo sweeps, CSV on stdout")
    p.add_argument("kind", choices=["steps", "mu", "omega", "paths"])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degrees", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--oracle-resolution", type=int, default=10_000)
    _add_solver_flags(p)
    p.set_defaults(fn=cmd_bench)

    args = parser.parse_args(argv)
    return args.fn(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
