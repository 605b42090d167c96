"""Equivariant consistency for the periodic fixture across radii and coefficients.

    python3 scripts/periodic_check.py --radii 2 3 4
"""

import argparse

from conecell.config import PeriodicConfig, add_arguments, from_args
from conecell.equivariant import (
    Representation,
    check_2main_c,
    check_freeness,
    materialize_window,
    sign_rep,
    tate,
    trivial_rep,
)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    add_arguments(p, PeriodicConfig)
    cfg = from_args(p.parse_args(), PeriodicConfig)
    pf = tate()
    g = pf.group
    reps = {
        "Z": trivial_rep(g),
        "Z^2": trivial_rep(g, 2),
        "sign": sign_rep(g),
        "unipotent": Representation(g, 2, [[[1, 1], [0, 1]]], name="unipotent"),
        "swap": Representation(g, 2, [[[0, 1], [1, 0]]], name="swap"),
    }
    print(f"freeness up to word length {cfg.word_bound}: {check_freeness(pf, cfg.word_bound)}")
    for r in cfg.radii:
        w = materialize_window(pf, r)
        print(f"radius {r}: {len(w.subset.ids)} interior cones, boundary {w.boundary}, gamma {pf.check_gamma(r)}")
        for name, a in reps.items():
            rep = check_2main_c(pf, a, cfg.word_bound, r)
            print(f"  {name:10s} match={rep.match}  {rep.invariants_homology.describe()}")


if __name__ == "__main__":
    main()
