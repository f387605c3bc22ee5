"""Compose the two Beirut phrases and print what each one collapses to."""

import argparse
import json
from dataclasses import asdict, dataclass

from dualdensity.demo import beirut_demo


@dataclass
class Config:
    tol: float = 1e-9
    base: str = "2"
    json: bool = False


def parse() -> Config:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--tol", type=float, default=Config.tol)
    p.add_argument("--base", choices=["2", "e"], default=Config.base)
    p.add_argument("--json", action="store_true")
    return Config(**vars(p.parse_args()))


def main():
    cfg = parse()
    res = beirut_demo(cfg.tol, "e" if cfg.base == "e" else 2)
    if cfg.json:
        print(json.dumps({"config": asdict(cfg), "result": res}, indent=2, sort_keys=True))
        return
    b = res["before"]
    print(f"Beirut before composition: S1={b['entropy1']:.6f} S2={b['entropy2']:.6f}")
    for p in res["phrases"]:
        matches = ", ".join(f"{w} (x{f:g})" for w, f in sorted(p["proportional_to"].items())) or "none"
        print(f"\n{p['phrase']}")
        print(f"  readings        {p['readings']}")
        print(f"  links           {p['links']}")
        print(f"  expected        {p['expected']}: {'yes' if p['proportional_to_expected'] else 'no'}")
        print(f"  proportional to {matches}")
        print(f"  k(result, expected) = {p['entailment_k_into_expected']}")
        print(f"  S1={p['entropy1']:.6f} S2={p['entropy2']:.6f}")
    print(f"\nambiguity collapsed: {res['collapse']}")


if __name__ == "__main__":
    main()
