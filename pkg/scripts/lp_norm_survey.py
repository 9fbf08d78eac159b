"""Smallest normalized eigenvalue of C(-a)C for l_p norms over point sets.

In the plane every norm passes (two-dimensional normed spaces embed in L1);
from d = 3 on, p > 2 fails on a small integer grid.
"""
import argparse
import itertools
from dataclasses import dataclass

import numpy as np

from gdcov.cndf import nd_check


@dataclass
class Config:
    ps: tuple = (1.5, 2.0, 2.5, 3.0, 4.0)
    dims: tuple = (2, 3)
    random_sets: int = 200
    grid: int = 5
    seed: int = 0


def lp(p):
    return lambda z: np.sum(np.abs(z) ** p, axis=-1) ** (1.0 / p)


def worst(c, sets):
    return min(r.min_centered_eigenvalue / r.scale for r in (nd_check(c, s) for s in sets))


def main(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    print("  p    d   random sets   grid")
    for d in cfg.dims:
        sets = [rng.standard_normal((20, d)) for _ in range(cfg.random_sets)]
        grid = np.array(list(itertools.product(range(cfg.grid), repeat=d)), dtype=float)
        for p in cfg.ps:
            print(f"{p:4.1f}  {d}   {worst(lp(p), sets):+.3e}   {worst(lp(p), [grid]):+.3e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--random-sets", type=int, default=Config.random_sets)
    ap.add_argument("--grid", type=int, default=Config.grid)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    main(Config(random_sets=a.random_sets, grid=a.grid, seed=a.seed))
