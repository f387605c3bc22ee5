"""Check reduce against exhaustive matching enumeration on every short sequence."""

import argparse
import itertools
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from dualdensity.errors import NotReducible
from dualdensity.pregroup import PregroupType, SimpleType, check_diagram, parse_type, reduce

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from oracles import brute_force_reducible  # noqa: E402


@dataclass
class Config:
    max_len: int = 5
    max_z: int = 1
    targets: str = "1,n,s"


def parse() -> Config:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-len", type=int, default=Config.max_len)
    p.add_argument("--max-z", type=int, default=Config.max_z)
    p.add_argument("--targets", default=Config.targets)
    return Config(**vars(p.parse_args()))


def main():
    cfg = parse()
    alphabet = [SimpleType(b, z) for b in ("n", "s") for z in range(-cfg.max_z, cfg.max_z + 1)]
    targets = [parse_type(t) for t in cfg.targets.split(",")]
    t0 = time.perf_counter()
    total = yes = bad = 0
    for m in range(1, cfg.max_len + 1):
        for simples in itertools.product(alphabet, repeat=m):
            for target in targets:
                expected = brute_force_reducible(simples, target.simples)
                try:
                    d = reduce([PregroupType(simples)], target)
                    got = check_diagram(d)
                except NotReducible:
                    got = False
                total += 1
                yes += expected
                if got != expected:
                    bad += 1
                    print("disagreement:", " ".join(map(str, simples)), "->", target)
    print(f"{total} cases, {yes} reducible, {bad} disagreements, {time.perf_counter() - t0:.1f}s")
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
