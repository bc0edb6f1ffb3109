#!/usr/bin/env python3
"""Freeze expected handcrafted-feature values for the 20-tweet fixture.

Re-implements the feature rules from scratch (no postsift import) and
writes integer-valued expectations: counts, binary flags, distinct/total
token counts (for lexical diversity) and the raw user counters (the test
applies the log transform itself).

Fixture lexicons: slang {omg, lol, btw}; interjections {wow, ouch, yay}.
"""

import re
import string
from pathlib import Path

HASHTAG = re.compile(r"#(?=[0-9A-Za-z])")
MENTION = re.compile(r"@(?=[0-9A-Za-z])")
URL = re.compile(r"https?://", re.IGNORECASE)
URL_SPAN = re.compile(r"https?://\S+", re.IGNORECASE)
MENTION_TOKEN = re.compile(r"@[0-9a-z]")
PUNCT = str.maketrans({c: " " for c in string.punctuation})

SLANG = {"omg", "lol", "btw"}
INTERJ = {"wow", "ouch", "yay"}

# (id, text, verified, followers, followees, tweets)
TWEETS = [
    ("f01", "Fire near the old bridge", 0, 0, 0, 0),
    ("f02", "RT @alice: #flood in CBD http://x.co", 1, 999, 99, 9),
    ("f03", "omg omg the river is rising!! http://news.example/flood https://mirror.example/a",
     0, 9999, 0, 99999),
    ("f04", "Wow!!! That sunset \U0001F60D\U0001F60D", 1, 1, 1, 1),
    ("f05", "", 0, 123, 456, 789),
    ("f06", "@bob @carol meet @ the station", 1, 10, 100, 1000),
    ("f07", "rt@jane evacuation in progress #safety", 0, 0, 9, 99),
    ("f08", "Traffic rt @mike says road closed", 0, 5000, 5000, 5000),
    ("f09", "LOL this is sooo funny lol", 1, 42, 7, 314),
    ("f10", "Shelter open at 5pm: 200 Main St. #relief #help", 0, 99999, 9, 0),
    ("f11", "Check https://a.b and http://c.d and HTTP://E.F now", 0, 1, 0, 2),
    ("f12", "Ouch! Stubbed my toe… btw the meeting is at noon", 1, 250000, 1200, 56000),
    ("f13", "water water water everywhere", 0, 33, 44, 55),
    ("f14", "#2024 #fires4u ##double #-dash", 0, 2, 3, 4),
    ("f15", "Email me at name@host.com or visit the http site", 1, 0, 0, 12345),
    ("f16", "   rt @zoe: bridge closed", 0, 777, 888, 999),
    ("f17", "Die Straße ist überflutet #Hochwasser", 0, 64, 128, 256),
    ("f18", "YAY!!! We won the game!!! YAY YAY", 1, 9, 99, 999),
    ("f19", "Power outage in 3 districts http://grid.example/status updates to follow",
     0, 100000, 50, 2000),
    ("f20", "just chilling... nothing to see here", 0, 3, 1, 0),
]


def tokens_of(raw: str) -> list[str]:
    stripped = URL_SPAN.sub(" ", raw)
    lowered = stripped.lower().encode("ascii", "ignore").decode("ascii")
    return lowered.translate(PUNCT).split()


def expected(raw: str) -> dict:
    toks = tokens_of(raw)
    low = raw.lower().lstrip()
    is_rt = low.startswith("rt @") or low.startswith("rt@")
    if not is_rt:
        raw_toks = raw.lower().split()
        is_rt = any(cur == "rt" and MENTION_TOKEN.match(nxt)
                    for cur, nxt in zip(raw_toks, raw_toks[1:]))
    n_hashtags = len(HASHTAG.findall(raw))
    n_url = len(URL.findall(raw))
    n_at = len(MENTION.findall(raw))
    return {
        "n_chars": len(raw),
        "n_words": len(toks),
        "n_hashtags": n_hashtags,
        "n_url": n_url,
        "n_at": n_at,
        "b_hashtag": int(n_hashtags > 0),
        "b_at": int(n_at > 0),
        "b_rt": int(is_rt),
        "b_slang": int(any(t in SLANG for t in toks)),
        "b_url": int(n_url > 0),
        "t_distinct": len(set(toks)),
        "t_total": len(toks),
        "b_interj": int(any(t in INTERJ for t in toks)),
    }


COLUMNS = ["n_chars", "n_words", "n_hashtags", "n_url", "n_at", "b_hashtag",
           "b_at", "b_rt", "b_slang", "b_url", "t_distinct", "t_total", "b_interj"]


def main() -> None:
    assert len(TWEETS) == 20
    out = Path(__file__).resolve().parents[1] / "tests" / "data" / "feature_fixture.tsv"
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id\ttext\tuser_verified\tuser_followers\tuser_followees\t"
                 "user_tweets\tlabel\t" + "\t".join(COLUMNS) + "\n")
        for i, (rec_id, text, verified, followers, followees, tweets) in \
                enumerate(TWEETS):
            label = "Informative" if i % 2 == 0 else "NotInformative"
            exp = expected(text)
            cells = "\t".join(str(exp[c]) for c in COLUMNS)
            fh.write(f"{rec_id}\t{text}\t{verified}\t{followers}\t{followees}\t"
                     f"{tweets}\t{label}\t{cells}\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
