#!/usr/bin/env python3
"""Freeze expected pattern counts for a 50-string fixture.

Implements the adopted detection rules independently (no postsift
import) so the committed fixture acts as an oracle against regressions
in the package implementation.
"""

import re
from pathlib import Path

HASHTAG = re.compile(r"#(?=[0-9A-Za-z])")
MENTION = re.compile(r"@(?=[0-9A-Za-z])")
URL = re.compile(r"https?://", re.IGNORECASE)
MENTION_TOKEN = re.compile(r"@[0-9a-z]")

STRINGS = [
    "RT @alice: #fire in #cbd http://x.co",
    "",
    "email me at name@host",
    "plain words only",
    "#a",
    "# a",
    "#1 trending",
    "##double",
    "#-dash",
    "@b",
    "@ b",
    "@@stacked",
    "http://x.co",
    "https://x.co",
    "HTTP://CAPS.example",
    "hTtPs://MixedCase.example/path",
    "http:// incomplete",
    "no scheme www.x.co",
    "bit.ly/short not counted",
    "two http://a.b http://c.d",
    "glued:http://a.b,http://c.d",
    "rt@jane starts it",
    "RT @jane starts it",
    "  rt @leading spaces",
    "middle rt @mike retweet",
    "heart @you is not rt",
    "rt without mention",
    "rt @9digits",
    "RT@X",
    "cart @wheel no",
    "rt #tag not mention",
    "#fire#flood#storm",
    "@a@b@c",
    "mixed #tag @user http://u.rl RT @z: done",
    "trailing hash #",
    "trailing at @",
    "#ümlaut not ascii start",
    "@ümlaut not ascii start",
    "#_underscore",
    "@_underscore",
    "rt  @double space",
    "xrt @not a token",
    "RT : @late mention",
    "price @ $9 #sale2024",
    "ftp://old.school not http",
    "https://nested http://inner",
    "end with url http://end.example",
    "http://a.b then words then #tag",
    "just @one mention",
    "RT @s: rt @t: double retweet",
]


def expected(raw: str) -> tuple[int, int, int, int]:
    hashtags = len(HASHTAG.findall(raw))
    mentions = len(MENTION.findall(raw))
    urls = len(URL.findall(raw))
    low = raw.lower().lstrip()
    is_rt = low.startswith("rt @") or low.startswith("rt@")
    if not is_rt:
        toks = low.split()
        is_rt = any(cur == "rt" and MENTION_TOKEN.match(nxt)
                    for cur, nxt in zip(toks, toks[1:]))
    return hashtags, mentions, urls, int(is_rt)


def main() -> None:
    assert len(STRINGS) == 50, len(STRINGS)
    out = Path(__file__).resolve().parents[1] / "tests" / "data" / "pattern_fixture.tsv"
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("text\thashtags\tmentions\turls\tis_retweet\n")
        for raw in STRINGS:
            h, m, u, r = expected(raw)
            fh.write(f"{raw}\t{h}\t{m}\t{u}\t{r}\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
