#!/usr/bin/env python3
"""Convert a discrete BIF network file into the hnet CPD fixture JSON.

Usage:
    python3 tools/bif_to_json.py data/alarm.bif.gz data/alarm.json

The output schema is

    {"nodes": [{"name", "states": [...], "parents": [...], "cpt": [[...], ...]}]}

with CPT rows ordered by mixed-radix enumeration of parent states, first
parent slowest. Only the subset of BIF used by the public bnlearn
repository files is understood: `variable` blocks with `type discrete`,
and `probability` blocks using either `table` (root nodes) or one
`(s1, s2, ...) p1, p2, ...;` line per parent configuration.

data/alarm.bif.gz is the ALARM network as distributed in the bnlearn
Bayesian network repository (the copy bundled with pgmpy 1.1.2 under
pgmpy/utils/example_models/alarm.bif.gz).
"""

import gzip
import itertools
import json
import re
import sys


def read_text(path):
    opener = gzip.open if path.endswith(".gz") else open
    with opener(path, "rt", encoding="utf-8") as fh:
        return fh.read()


def parse_bif(text):
    states = {}
    order = []
    for m in re.finditer(r"variable\s+(\S+)\s*\{\s*type\s+discrete\s*\[\s*\d+\s*\]\s*\{([^}]*)\}", text):
        name = m.group(1)
        states[name] = [s.strip() for s in m.group(2).split(",")]
        order.append(name)

    parents = {}
    cpts = {}
    for m in re.finditer(r"probability\s*\(\s*([^)|]+?)\s*(?:\|\s*([^)]*))?\)\s*\{([^}]*)\}", text):
        child = m.group(1).strip()
        pars = [p.strip() for p in m.group(2).split(",")] if m.group(2) else []
        body = m.group(3)
        parents[child] = pars
        rows = {}
        table = None
        for line in body.split(";"):
            line = line.strip()
            if not line:
                continue
            if line.startswith("table"):
                table = [float(v) for v in line[len("table"):].split(",")]
                continue
            lm = re.match(r"\(([^)]*)\)\s*(.*)", line)
            if not lm:
                raise ValueError(f"unrecognised CPT line for {child}: {line!r}")
            key = tuple(s.strip() for s in lm.group(1).split(","))
            rows[key] = [float(v) for v in lm.group(2).split(",")]
        if table is not None:
            if pars:
                raise ValueError(f"'table' form with parents is not supported ({child})")
            cpts[child] = [table]
        else:
            ordered = []
            # itertools.product varies the last factor fastest: first parent slowest.
            for combo in itertools.product(*[states[p] for p in pars]):
                if combo not in rows:
                    raise ValueError(f"missing CPT row {combo} for {child}")
                ordered.append(rows[combo])
            cpts[child] = ordered
    return order, states, parents, cpts


def main(argv):
    if len(argv) != 3:
        print(__doc__, file=sys.stderr)
        return 1
    order, states, parents, cpts = parse_bif(read_text(argv[1]))
    nodes = []
    for name in order:
        cpt = cpts[name]
        for i, row in enumerate(cpt):
            total = sum(row)
            if abs(total - 1.0) > 1e-6:
                raise ValueError(f"CPT row of {name} sums to {total}")
            # Source files print 1/3 as 0.3333333; renormalise so the loader's 1e-9 check holds.
            cpt[i] = [v / total for v in row]
        nodes.append({"name": name, "states": states[name], "parents": parents.get(name, []), "cpt": cpt})
    with open(argv[2], "w", encoding="utf-8") as fh:
        fh.write('{"nodes": [\n')
        fh.write(",\n".join("  " + json.dumps(n) for n in nodes))
        fh.write("\n]}\n")
    arcs = sum(len(n["parents"]) for n in nodes)
    params = sum(len(n["cpt"]) * (len(n["states"]) - 1) for n in nodes)
    print(f"{len(nodes)} nodes, {arcs} arcs, {params} free parameters", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
