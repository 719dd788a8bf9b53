#!/usr/bin/env python3
"""Covering-number growth study: stabilizing vs. linearly growing families.

Streams greedy covering numbers N(eps, K) over the first K members of two
generator-backed families: the escaping-bump family (totally bounded, so
N stabilizes) and the moving-bump family (every member is far from every
other, so N = K).  Optionally cross-checks each reported prefix net by
rebuilding and re-verifying it.

Usage:
    python3 scripts/covering_growth.py [--eps 0.5 0.25] [--max-k 512] [--csv out.csv]
"""
import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import asymlp as a


@dataclass(frozen=True)
class GrowthConfig:
    eps_values: tuple[float, ...] = (0.5, 0.25)
    horizons: tuple[int, ...] = (4, 8, 16, 32, 64, 128, 256, 512)
    verify_upto: int = 64
    csv: str | None = None


def profiles(cfg: GrowthConfig) -> list[dict]:
    rows = []
    for label, fam in (("escaping-bump", a.u_family(4, 1.0)),
                       ("moving-bump", a.g_family(4, 1.0))):
        for eps in cfg.eps_values:
            sizes = a.covering_profile(fam, eps, cfg.horizons)
            for K, N in zip(cfg.horizons, sizes):
                rows.append({"family": label, "eps": eps, "K": K, "N": N})
    return rows


def verify_prefixes(cfg: GrowthConfig) -> None:
    print(f"\nre-verifying greedy nets on prefixes up to K={cfg.verify_upto}:")
    for label, build in (("escaping-bump", a.u_family),
                         ("moving-bump", a.g_family)):
        fam = build(cfg.verify_upto, 1.0)
        for eps in cfg.eps_values:
            net = a.greedy_net(fam, eps)
            check = a.verify_covering(fam, net)
            status = "ok" if check.passed else "FAILED"
            print(f"  {label:14s} eps={eps:<5g} N={net.size:<4d} "
                  f"max-distance={max(net.distances):.6g}  {status}")
            if not check.passed:
                raise SystemExit(1)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--eps", type=float, nargs="+", default=[0.5, 0.25])
    parser.add_argument("--max-k", type=int, default=512)
    parser.add_argument("--csv", help="write the profile table as CSV")
    args = parser.parse_args(argv)
    horizons = tuple(K for K in (4, 8, 16, 32, 64, 128, 256, 512, 1024)
                     if K <= args.max_k)
    cfg = GrowthConfig(eps_values=tuple(args.eps), horizons=horizons,
                       csv=args.csv)

    rows = profiles(cfg)
    print("greedy covering numbers N(eps, K):\n")
    print(f"{'family':14s} {'eps':>6s} " +
          " ".join(f"K={K:<5d}" for K in cfg.horizons))
    for label in ("escaping-bump", "moving-bump"):
        for eps in cfg.eps_values:
            line = [r["N"] for r in rows
                    if r["family"] == label and r["eps"] == eps]
            print(f"{label:14s} {eps:>6g} " +
                  " ".join(f"{n:<7d}" for n in line))

    verify_prefixes(cfg)

    if cfg.csv:
        with open(cfg.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["family", "eps", "K", "N"])
            writer.writeheader()
            writer.writerows(rows)
        print(f"\nwrote {cfg.csv}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
