#!/usr/bin/env python3
"""Regenerate the bundled 200-post synthetic mini corpus.

Deterministic for a fixed seed; the committed file is the contract, this
script only documents how it was produced.  Raw labels are on-topic /
off-topic so runs exercise the label map.
"""

import argparse
from pathlib import Path

import numpy as np

INFO_SUBJECTS = ["flood", "fire", "storm", "quake", "outage", "landslide"]
INFO_VERBS = ["hits", "closes", "damages", "threatens", "cuts", "floods"]
INFO_PLACES = ["downtown", "north district", "the harbor", "main bridge",
               "the old town", "route 9"]
INFO_TAILS = [
    "evacuation ordered", "crews on site", "shelter open at the school",
    "two lanes blocked", "power out for 2000 homes", "avoid the area",
    "volunteers needed", "water rising fast",
]
CHATTER_OPENERS = ["omg", "lol", "tbh", "ngl", "yay", "wow", "meh", "smh"]
CHATTER_BODIES = [
    "this song is stuck in my head", "cant wait for the weekend",
    "coffee first then everything else", "my cat just knocked over a plant",
    "thinking about pizza again", "that movie was something else",
    "i need a nap so badly", "scrolling instead of sleeping",
]
CHATTER_TAILS = ["haha", "so true", "love it", "send help", "no way", ""]


def make_rows(seed: int) -> list[tuple[str, str, str]]:
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(200):
        informative = rng.random() < 0.55
        if informative:
            text = (f"{rng.choice(INFO_SUBJECTS)} {rng.choice(INFO_VERBS)} "
                    f"{rng.choice(INFO_PLACES)}, {rng.choice(INFO_TAILS)}")
            if rng.random() < 0.5:
                text += f" #{rng.choice(INFO_SUBJECTS)}"
            if rng.random() < 0.4:
                text += f" http://news.example/{i}"
            if rng.random() < 0.2:
                text = f"RT @watch{int(rng.integers(10))}: " + text
            label = "on-topic"
        else:
            text = f"{rng.choice(CHATTER_OPENERS)} {rng.choice(CHATTER_BODIES)}"
            tail = rng.choice(CHATTER_TAILS)
            if tail:
                text += f" {tail}"
            if rng.random() < 0.3:
                text += f" @friend{int(rng.integers(10))}"
            label = "off-topic"
        if i in (13, 137):
            text = "..." if i == 13 else "!!!"  # degenerate: normalizes to empty
        rows.append((f"t{i:04d}", text, label))
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=20240101)
    parser.add_argument("--out", type=Path,
                        default=Path(__file__).resolve().parents[1]
                        / "src" / "postsift" / "data" / "mini_corpus.tsv")
    args = parser.parse_args()
    rows = make_rows(args.seed)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id\ttext\tlabel\n")
        for rec_id, text, label in rows:
            fh.write(f"{rec_id}\t{text}\t{label}\n")
    print(f"wrote {args.out} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
