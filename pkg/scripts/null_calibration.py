"""Rejection rates of the permutation and chi-squared(1) tests under independence."""
import argparse
import math
from dataclasses import dataclass

import numpy as np

from gdcov.cndf import make_cndf
from gdcov.inference import permutation_test, quadform_test
from gdcov.population import ScenarioSampler


@dataclass
class Config:
    n: int = 40
    runs: int = 1000
    replicates: int = 199
    cndf: str = "euclidean"
    seed: int = 0
    levels: tuple = (0.01, 0.05, 0.1)


def main(cfg: Config):
    c = make_cndf(cfg.cndf)
    g = ScenarioSampler("independent")
    perm, chi2 = np.empty(cfg.runs), np.empty(cfg.runs)
    for r in range(cfg.runs):
        x, y = g.draw(cfg.n, cfg.seed, r)
        perm[r] = permutation_test(x, y, c, c, cfg.replicates, seed=r).pvalue
        chi2[r] = quadform_test(x, y, c, c).pvalue
    print(f"N={cfg.n} runs={cfg.runs} B={cfg.replicates} cndf={cfg.cndf}")
    print("level   perm    chi2    3-SE band")
    for u in cfg.levels:
        band = 3 * math.sqrt(u * (1 - u) / cfg.runs)
        print(f"{u:<7} {np.mean(perm <= u):<7.3f} {np.mean(chi2 <= u):<7.3f} {u - band:.3f}..{u + band:.3f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=Config.n)
    p.add_argument("--runs", type=int, default=Config.runs)
    p.add_argument("--replicates", type=int, default=Config.replicates)
    p.add_argument("--cndf", default=Config.cndf)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    main(Config(a.n, a.runs, a.replicates, a.cndf, a.seed))
