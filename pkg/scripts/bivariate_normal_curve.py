"""Sample distance correlation against the bivariate normal closed form over rho."""
import argparse
from dataclasses import dataclass

import numpy as np

from gdcov.cndf import make_cndf
from gdcov.estimator import summarize
from gdcov.population import ScenarioSampler, bivariate_normal_R


@dataclass
class Config:
    n: int = 5000
    points: int = 11
    seed: int = 0


def main(cfg: Config):
    euc = make_cndf("euclidean")
    print(" rho     R(rho)   R_N      |diff|")
    for k, rho in enumerate(np.linspace(0.0, 1.0, cfg.points)):
        g = ScenarioSampler("identity") if rho == 1.0 else ScenarioSampler("bivariate_normal", rho=rho)
        x, y = g.draw(cfg.n, cfg.seed, k)
        rn = summarize(x, y, euc, euc).rn
        ref = bivariate_normal_R(rho)
        print(f"{rho:5.2f}  {ref:.5f}  {rn:.5f}  {abs(rn - ref):.5f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=Config.n)
    p.add_argument("--points", type=int, default=Config.points)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    main(Config(a.n, a.points, a.seed))
