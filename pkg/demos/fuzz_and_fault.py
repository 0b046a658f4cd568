"""A short property run, then the same run against a deliberately broken Tor.

Run:  python demos/fuzz_and_fault.py
"""

import os

from fihom.harness import FuzzConfig, run_fuzz

cfg = FuzzConfig(seed=42, trials=8, checks=("td-bound", "hd-bound-gd-hd1", "socle-degree",
                                            "shift-filtered", "polynomial-growth"))


def summary(rep):
    for v in rep.verdicts:
        line = f"  {v.name:20s} passed {v.passed} failed {v.failed} skipped {v.skipped}"
        if v.counterexample:
            ce = v.counterexample
            line += f"\n    trial {ce['trial']} seed {ce['seed']}: {ce['detail']}"
        print(line)


print("clean build:")
summary(run_fuzz(cfg, workers=1))

os.environ["FIHOM_FAULT"] = "tor"       # H_1 loses its top degree
print("\nwith FIHOM_FAULT=tor:")
summary(run_fuzz(cfg, workers=1))
