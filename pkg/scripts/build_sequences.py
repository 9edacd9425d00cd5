"""Build fundamental sequences for several families and summarize them.

Saves each sequence as JSON under --outdir and prints stage sizes, task
counts and the top-stage approximant report.
"""

import argparse
import time
from collections import Counter
from pathlib import Path

from treefraisse import io
from treefraisse.limits import BuildConfig, approximant_report, build_sequence, ends_lift


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--family", action="append")
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--cap", type=int, default=3)
    p.add_argument("--outdir", default="sequences")
    args = p.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(exist_ok=True)
    for name in args.family or ["TM", "TM3", "TC", "TCE"]:
        cfg = BuildConfig(depth=args.depth, cap=args.cap, on_failure="log")
        t0 = time.perf_counter()
        seq = build_sequence(name, args.depth, args.cap, cfg)
        elapsed = time.perf_counter() - t0
        io.save(io.sequence_to_dict(seq), outdir / f"{name}.json")
        status = Counter((e.get("kind"), e.get("status")) for e in seq.log)
        rep = approximant_report(seq, seq.depth).to_dict()
        print(f"{name}: stages {[seq.stage(k).n for k in range(1, seq.depth + 1)]} in {elapsed:.1f}s")
        print(f"  tasks {dict(sorted(status.items(), key=str))}")
        print(f"  bonds {'ok' if not seq.check_bonds() else seq.check_bonds()}, "
              f"ends lift {all(ends_lift(seq, k) for k in range(1, seq.depth)) if seq.family.rooted else '-'}")
        print(f"  top stage {rep}")


if __name__ == "__main__":
    main()
