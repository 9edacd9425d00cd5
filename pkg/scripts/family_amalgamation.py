"""Run every family amalgamator exhaustively and classify its failures.

For each failing instance an exhaustive search over trees up to
--search-verts vertices decides whether any amalgamation in the family
exists.  Writes a JSON summary (stdout or --out).

    python3 scripts/family_amalgamation.py --cap 5 --family TC --family TCE
"""

import argparse
import time
from dataclasses import dataclass, field

from treefraisse import io
from treefraisse.amalgamation import AmalgamationError, PreconditionError, search_amalgamate
from treefraisse.families import FAMILIES, _instance, amalgamation_instances, family, family_amalgamate


@dataclass
class RunConfig:
    cap: int = 5
    search_verts: int = 8
    families: list = field(default_factory=lambda: ["TM", "TM3", "TC", "TCE", "TE", "FE"])


def run_family(name, cfg):
    spec = family(name)
    t0 = time.perf_counter()
    count, failures = 0, []
    for a, f, g in amalgamation_instances(spec, cfg.cap):
        count += 1
        try:
            family_amalgamate(spec, f, g)
        except (AmalgamationError, PreconditionError) as exc:
            failures.append((a, f, g, str(exc)))
    elapsed = time.perf_counter() - t0
    rows = []
    for a, f, g, err in failures:
        found = search_amalgamate(f, g, list(spec.constraints), cfg.search_verts)
        rows.append({"instance": _instance(a, f, g), "error": err,
                     "search": None if found is None else found.d.n})
    return {"family": name, "cap": cfg.cap, "instances": count, "seconds": round(elapsed, 2),
            "failures": len(rows), "impossible": sum(r["search"] is None for r in rows), "details": rows}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--cap", type=int, default=5)
    p.add_argument("--search-verts", type=int, default=8)
    p.add_argument("--family", action="append", choices=sorted(FAMILIES))
    p.add_argument("--out")
    args = p.parse_args()
    cfg = RunConfig(args.cap, args.search_verts)
    if args.family:
        cfg.families = args.family
    out = []
    for name in cfg.families:
        r = run_family(name, cfg)
        print(f"{name}: {r['instances']} instances, {r['failures']} failures "
              f"({r['impossible']} impossible), {r['seconds']}s", flush=True)
        out.append(r)
    if args.out:
        io.save(out, args.out)


if __name__ == "__main__":
    main()
