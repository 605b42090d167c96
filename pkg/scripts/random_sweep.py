"""Run every finite-fan check over a range of random instances and tabulate.

    python3 scripts/random_sweep.py --seeds 200
"""

import argparse
import json
import random
import time

from conecell import fixtures as fx
from conecell.cellular import cocellular, compare_2pb, cprime_2na, double_complex_2pc
from conecell.complexes import homology, validate
from conecell.config import SweepConfig, add_arguments, from_args
from conecell.fans import maximal_intersection_counts, sample_openness


def _orders(fan, rng):
    rays = sorted(fan.rays())
    perm = list(range(len(rays)))
    rng.shuffle(perm)
    salt = {i: rng.random() for i in fan.ids}
    return dict(zip(rays, perm)), salt.__getitem__


def run(cfg: SweepConfig) -> dict:
    stats = {k: 0 for k in ("instances", "d2", "open", "compare_match", "compare_certified",
                            "counts_hold", "sample_clean", "dc_ok", "cones", "cprime_ok", "order_ok")}
    timing = {"cellular": 0.0, "double": 0.0, "cprime": 0.0, "compare": 0.0}
    worst = (0.0, None)
    for seed in range(cfg.start, cfg.start + cfg.seeds):
        fan, t = fx.random_instance(seed, max_rank=cfg.max_rank, max_cones=cfg.max_cones,
                                    subdivisions=cfg.subdivisions)
        stats["instances"] += 1
        t0 = time.perf_counter()
        stats["d2"] += validate(cocellular(t))
        t1 = time.perf_counter()
        res = double_complex_2pc(t, cover=cfg.cover)
        t2 = time.perf_counter()
        stats["dc_ok"] += res.columns_acyclic and res.diagonal_quasi_iso
        if t2 - t1 > worst[0]:
            worst = (t2 - t1, seed)
        rng = random.Random(seed)
        orders = [_orders(fan, rng) for _ in range(cfg.orderings)]
        for tau in t.ids:
            r = cprime_2na(t, tau)
            stats["cones"] += 1
            stats["cprime_ok"] += r.quasi_iso
            h = homology(r.cprime)
            stats["order_ok"] += all(homology(cprime_2na(t, tau, o, c).cprime) == h for o, c in orders)
        t3 = time.perf_counter()
        rep = compare_2pb(t)
        if rep.open_in_span:
            stats["open"] += 1
            stats["compare_match"] += rep.homology_match
            stats["compare_certified"] += rep.chain_map_certified
            stats["counts_hold"] += all(n == w for n, w in maximal_intersection_counts(t).values())
            stats["sample_clean"] += not sample_openness(t, samples=cfg.samples, seed=seed)
        t4 = time.perf_counter()
        timing["cellular"] += t1 - t0
        timing["double"] += t2 - t1
        timing["cprime"] += t3 - t2
        timing["compare"] += t4 - t3
    return {"config": vars(cfg), "stats": stats,
            "seconds": {k: round(v, 2) for k, v in timing.items()},
            "slowest_double_complex": {"seed": worst[1], "seconds": round(worst[0], 2)}}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    add_arguments(p, SweepConfig)
    p.add_argument("--json", action="store_true")
    args = p.parse_args()
    out = run(from_args(args, SweepConfig))
    if args.json:
        print(json.dumps(out, indent=2, sort_keys=True))
        return
    for k, v in out["stats"].items():
        print(f"{k:18s} {v}")
    for k, v in out["seconds"].items():
        print(f"time {k:13s} {v}s")
    print(f"slowest double complex: seed {out['slowest_double_complex']['seed']}, "
          f"{out['slowest_double_complex']['seconds']}s")


if __name__ == "__main__":
    main()
