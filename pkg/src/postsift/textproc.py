"""Tweet text normalization, tokenization, and surface-pattern detection.

Pattern detection (hashtags, mentions, URLs, retweet markers) always runs
on the *raw* text: normalization strips the very symbols those patterns
count.  Normalization produces lower-cased, ASCII-only, punctuation-free
text and is idempotent.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

# '#'/'@' count only when immediately followed by an alphanumeric, so bare
# symbols ("tune in @ 9") are not markers.  URLs are counted by scheme
# occurrence; bare domains without a scheme do not count.
_HASHTAG_RE = re.compile(r"#(?=[0-9A-Za-z])")
_MENTION_RE = re.compile(r"@(?=[0-9A-Za-z])")
_URL_SCHEME_RE = re.compile(r"https?://", re.IGNORECASE)
_URL_SPAN_RE = re.compile(r"https?://\S+", re.IGNORECASE)
_MENTION_TOKEN_RE = re.compile(r"@[0-9a-z]")

_PUNCT_TO_SPACE = str.maketrans({c: " " for c in string.punctuation})

LEXICON_KINDS = ("slang", "interjection")


@dataclass(frozen=True)
class PatternCounts:
    """Surface markers found in one raw tweet."""

    hashtags: int
    mentions: int
    urls: int
    is_retweet: bool


def detect_patterns(raw: str) -> PatternCounts:
    """Count hashtags, mentions and URL schemes, and flag retweets.

    A tweet is a retweet when its text (lower-cased, leading whitespace
    ignored) starts with ``rt @`` or ``rt@``, or contains a whitespace
    token ``rt`` directly before a mention token.
    """
    hashtags = len(_HASHTAG_RE.findall(raw))
    mentions = len(_MENTION_RE.findall(raw))
    urls = len(_URL_SCHEME_RE.findall(raw))

    low = raw.lower().lstrip()
    is_retweet = low.startswith("rt @") or low.startswith("rt@")
    if not is_retweet:
        toks = low.split()
        for cur, nxt in zip(toks, toks[1:]):
            if cur == "rt" and _MENTION_TOKEN_RE.match(nxt):
                is_retweet = True
                break
    return PatternCounts(hashtags, mentions, urls, is_retweet)


def strip_urls(raw: str) -> str:
    """Replace every ``http(s)://...`` span with a space.

    Used before word counting so URL fragments do not inflate token
    counts.  The span extends to the next whitespace.
    """
    return _URL_SPAN_RE.sub(" ", raw)


def normalize(raw: str) -> str:
    """Lower-case, drop non-ASCII, map punctuation to space, collapse runs.

    The result contains only lower-case ASCII letters, digits and single
    spaces, with no leading or trailing whitespace.  Applying normalize to
    its own output is a no-op.
    """
    lowered = raw.lower()
    ascii_only = lowered.encode("ascii", "ignore").decode("ascii")
    spaced = ascii_only.translate(_PUNCT_TO_SPACE)
    return " ".join(spaced.split())


def tokenize(norm: str) -> list[str]:
    """Split normalized text on whitespace; never yields empty tokens."""
    return norm.split()


class Lexicon:
    """Immutable set of lower-cased terms loaded from a plain text file.

    File format: UTF-8, one term per line, blank lines and lines starting
    with ``#`` ignored, terms lower-cased on load.
    """

    def __init__(self, entries: Iterable[str], kind: str):
        if kind not in LEXICON_KINDS:
            raise ValueError(f"unknown lexicon kind {kind!r}")
        self.kind = kind
        self.entries = frozenset(term.lower() for term in entries if term)

    @classmethod
    def from_file(cls, path: str | Path, kind: str) -> "Lexicon":
        entries = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                term = line.strip()
                if not term or term.startswith("#"):
                    continue
                entries.append(term)
        if not entries:
            raise ValueError(f"lexicon file {path} contains no terms")
        return cls(entries, kind)

    def __contains__(self, term: str) -> bool:
        return term in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __repr__(self) -> str:
        return f"Lexicon(kind={self.kind!r}, size={len(self.entries)})"


def contains_lexicon_term(tokens: Iterable[str], lexicon: Lexicon) -> bool:
    """True iff any token is an exact member of the lexicon."""
    return any(tok in lexicon for tok in tokens)


def _bundled(name: str) -> Path:
    return Path(str(resources.files("postsift").joinpath("data", "lexicons", name)))


def load_slang_lexicon(path: str | Path | None = None) -> Lexicon:
    """Bundled snapshot of common internet slang, or a caller-supplied file."""
    return Lexicon.from_file(path or _bundled("slang.txt"), "slang")


def load_interjection_lexicon(path: str | Path | None = None) -> Lexicon:
    """Bundled snapshot of English interjections, or a caller-supplied file."""
    return Lexicon.from_file(path or _bundled("interjections.txt"), "interjection")
