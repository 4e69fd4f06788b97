"""End-to-end demo on a generated toy lexicon: run -> compare -> stream.

Generates a small two-layer word network plus an experiment config in a work
directory, runs the 27-cell grid, compares easy vs hard items, and extracts
one shortest-path subgraph. Everything the CLI writes lands under --workdir.

Usage: python scripts/toy_pipeline.py [--workdir demo_out]
"""

import argparse
import random
from pathlib import Path

from plexspread.cli import main as plexspread

WORDS = [
    "anchor", "bottle", "candle", "dragon", "ember", "falcon",
    "garden", "harbor", "island", "jungle", "kettle", "lantern",
]

CONFIG = """\
[network]
layers = [["semantic", "semantic.tsv"], ["phonological", "phonological.tsv"]]
attributes = "attributes.tsv"

[simulation]
horizon = 40
retention = [0.2, 0.5, 0.8]
coupling = [0.1, 1.0, 10.0]
seed_modes = ["semantic", "phonological", "ALL"]

{items}
"""

ITEM = """\
[[items]]
id = "{id}"
seeds = [{seeds}]
target = "{target}"
group = "{group}"
frequency = {frequency}
"""


def random_connected_edges(words, extra, rng):
    order = words[:]
    rng.shuffle(order)
    edges = {tuple(sorted(pair)) for pair in zip(order, order[1:])}
    while len(edges) < len(words) - 1 + extra:
        a, b = rng.sample(words, 2)
        edges.add(tuple(sorted((a, b))))
    return sorted(edges)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", default="demo_out")
    args = parser.parse_args()
    work = Path(args.workdir)
    work.mkdir(parents=True, exist_ok=True)
    rng = random.Random(7)

    for name, extra in (("semantic", 8), ("phonological", 5)):
        with open(work / f"{name}.tsv", "w", encoding="utf-8") as fh:
            for a, b in random_connected_edges(WORDS, extra, rng):
                fh.write(f"{a}\t{b}\n")
    with open(work / "attributes.tsv", "w", encoding="utf-8") as fh:
        for word in WORDS:
            valence = rng.choice(["positive", "negative", "neutral"])
            fh.write(f"{word}\tvalence\t{valence}\n")

    items = []
    for k in range(8):
        seeds = rng.sample(WORDS, 3)
        target = rng.choice([w for w in WORDS if w not in seeds])
        group = "easy" if k < 4 else "hard"
        items.append(ITEM.format(
            id=f"item{k}", seeds=", ".join(f'"{s}"' for s in seeds),
            target=target, group=group, frequency=round(rng.uniform(1, 20), 1),
        ))
    (work / "config.toml").write_text(CONFIG.format(items="\n".join(items)), encoding="utf-8")

    steps = [
        ["run", "--config", str(work / "config.toml"), "--out-dir", str(work / "out")],
        ["compare", "--metrics", str(work / "out" / "metrics.csv"),
         "--out", str(work / "stats" / "difficulty"), "--kendall-col", "frequency"],
        ["stream", "--layer", f"semantic={work/'semantic.tsv'}",
         "--layer", f"phonological={work/'phonological.tsv'}",
         "--attributes", str(work / "attributes.tsv"),
         "--in-layer", "semantic", "--source", WORDS[0], "--target", WORDS[-1],
         "--out", str(work / "stream" / "demo")],
    ]
    for argv in steps:
        print("+ plexspread " + " ".join(argv))
        code = plexspread(argv)
        if code != 0:
            raise SystemExit(code)
    print(f"outputs under {work}/: out/metrics.csv, out/report.json, "
          "stats/difficulty__*.csv, stream/demo.*")


if __name__ == "__main__":
    main()
