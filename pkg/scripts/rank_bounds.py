"""Sweep normal-form boxes and report the largest ranks of the two views.

For each (|C|, |D|, dim H) the script samples random boxes and prints the
maximum rank seen for phi1 and phi2 next to the linear bounds |D|, |C|
and the Gram bounds |D|^2, |C|^2.
"""

import argparse
import itertools
from dataclasses import dataclass

import numpy as np

from dualdensity import density as dn
from dualdensity.tensor import Space


@dataclass
class Config:
    max_bond: int = 3
    max_dim: int = 5
    samples: int = 20
    seed: int = 0
    cutoff: float = 1e-9


def parse() -> Config:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    return Config(**vars(p.parse_args()))


def main():
    cfg = parse()
    rng = np.random.default_rng(cfg.seed)
    print(f"{'|C|':>3} {'|D|':>3} {'H':>2} | {'rk1':>3} {'<=|D|':>5} {'<=|D|^2':>7} | "
          f"{'rk2':>3} {'<=|C|':>5} {'<=|C|^2':>7}")
    bonds = range(1, cfg.max_bond + 1)
    for nc, nd, h in itertools.product(bonds, bonds, range(2, cfg.max_dim + 1)):
        r1 = r2 = 0
        for _ in range(cfg.samples):
            d = dn.dual_density_from_normal_form(rng.normal(size=(h, nc, nd)), Space.of_dim("H", h))
            r1 = max(r1, dn.rank(dn.phi1(d), cfg.cutoff))
            r2 = max(r2, dn.rank(dn.phi2(d), cfg.cutoff))
        print(f"{nc:>3} {nd:>3} {h:>2} | {r1:>3} {str(r1 <= nd):>5} {str(r1 <= nd * nd):>7} | "
              f"{r2:>3} {str(r2 <= nc):>5} {str(r2 <= nc * nc):>7}")


if __name__ == "__main__":
    main()
