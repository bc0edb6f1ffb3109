"""Labeled dataset loading, binary label mapping, and seeded fold plans.

Input files are delimiter-separated text (comma or tab) with a header row
and RFC-4180 style quoting.  Raw label strings are mapped to the binary
Informative / NotInformative scheme through a LabelMap; a raw label may
also map to Drop, which removes the record.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from postsift.textproc import normalize


class Label(Enum):
    INFORMATIVE = "Informative"
    NOT_INFORMATIVE = "NotInformative"


#: Sentinel target in a LabelMap; records with this target are removed.
DROP = "Drop"

_TARGETS = {label.value: label for label in Label}


class DatasetError(Exception):
    """Base class for dataset loading problems."""


class SchemaError(DatasetError):
    """A required column is missing or a cell cannot be parsed."""


class UnmappedLabelError(DatasetError):
    """A raw label value is absent from the LabelMap."""


class DuplicateIdError(DatasetError):
    """Two records share the same id."""


@dataclass(frozen=True)
class UserMeta:
    """Account metadata of the posting user."""

    verified: bool
    followers: int
    followees: int
    tweets_posted: int

    def __post_init__(self):
        for name in ("followers", "followees", "tweets_posted"):
            if getattr(self, name) < 0:
                raise ValueError(f"UserMeta.{name} must be >= 0")


@dataclass(frozen=True)
class TweetRecord:
    """One labeled post.  ``degenerate`` flags text that normalizes to ''."""

    id: str
    text: str
    label: Label
    user: UserMeta | None = None
    degenerate: bool = False


@dataclass(frozen=True)
class ColumnSchema:
    """Names the columns of a dataset file and its delimiter.

    The four user columns must be given all together or not at all.
    """

    id: str = "id"
    text: str = "text"
    label: str = "label"
    delimiter: str = "\t"
    user_verified: str | None = None
    user_followers: str | None = None
    user_followees: str | None = None
    user_tweets: str | None = None

    def __post_init__(self):
        if self.delimiter not in ("\t", ","):
            raise ValueError("delimiter must be tab or comma")
        user_cols = self._user_columns()
        if user_cols and None in user_cols:
            raise ValueError("user columns must be declared all together")

    def _user_columns(self):
        cols = (self.user_verified, self.user_followers,
                self.user_followees, self.user_tweets)
        return cols if any(c is not None for c in cols) else ()

    @property
    def has_user_columns(self) -> bool:
        return bool(self._user_columns())

    def required_columns(self) -> tuple[str, ...]:
        return (self.id, self.text, self.label) + tuple(self._user_columns())


class LabelMap:
    """Total mapping from raw label strings to Informative/NotInformative/Drop."""

    def __init__(self, mapping: Mapping[str, str]):
        if not mapping:
            raise ValueError("LabelMap needs at least one entry")
        self._map: dict[str, Label | None] = {}
        for raw, target in mapping.items():
            if target == DROP:
                self._map[raw] = None
            elif target in _TARGETS:
                self._map[raw] = _TARGETS[target]
            else:
                raise ValueError(
                    f"label map target for {raw!r} must be one of "
                    f"Informative, NotInformative, Drop; got {target!r}")

    def apply(self, raw: str) -> Label | None:
        """Map a raw label; None means the record is dropped."""
        try:
            return self._map[raw]
        except KeyError:
            raise UnmappedLabelError(
                f"raw label {raw!r} is not covered by the label map") from None

    @classmethod
    def identity(cls) -> "LabelMap":
        """Maps the canonical label strings to themselves."""
        return cls({label.value: label.value for label in Label})


@dataclass(frozen=True)
class Dataset:
    """Ordered, immutable collection of labeled records."""

    name: str
    records: tuple[TweetRecord, ...]
    has_user_meta: bool

    def __len__(self) -> int:
        return len(self.records)

    def labels(self) -> np.ndarray:
        """Int label vector: 1 = Informative, 0 = NotInformative."""
        return np.array(
            [1 if r.label is Label.INFORMATIVE else 0 for r in self.records],
            dtype=np.int64)

    def ids(self) -> list[str]:
        return [r.id for r in self.records]

    def texts(self) -> list[str]:
        return [r.text for r in self.records]


def _parse_user(row: Mapping[str, str], schema: ColumnSchema, lineno: int) -> UserMeta:
    raw_verified = row[schema.user_verified].strip()
    if raw_verified not in ("0", "1"):
        raise SchemaError(
            f"line {lineno}: column {schema.user_verified!r} must be 0 or 1, "
            f"got {raw_verified!r}")
    counts = {}
    for col in (schema.user_followers, schema.user_followees, schema.user_tweets):
        cell = row[col].strip()
        try:
            value = int(cell)
        except ValueError:
            raise SchemaError(
                f"line {lineno}: column {col!r} must be a decimal integer, "
                f"got {cell!r}") from None
        if value < 0:
            raise SchemaError(f"line {lineno}: column {col!r} must be >= 0")
        counts[col] = value
    return UserMeta(
        verified=raw_verified == "1",
        followers=counts[schema.user_followers],
        followees=counts[schema.user_followees],
        tweets_posted=counts[schema.user_tweets])


def load_dataset(path: str | Path, schema: ColumnSchema, label_map: LabelMap,
                 name: str | None = None) -> Dataset:
    """Read a delimited file into a Dataset, applying the label map.

    Records arrive in file order.  Raises SchemaError for missing columns
    or malformed cells, UnmappedLabelError for unknown raw labels, and
    DuplicateIdError for repeated ids.
    """
    path = Path(path)
    records: list[TweetRecord] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter=schema.delimiter)
        header = reader.fieldnames or []
        missing = [c for c in schema.required_columns() if c not in header]
        if missing:
            raise SchemaError(
                f"{path}: header is missing column(s) {', '.join(missing)}")
        for lineno, row in enumerate(reader, start=2):
            rec_id = row[schema.id]
            if not rec_id:
                raise SchemaError(f"line {lineno}: empty id")
            if rec_id in seen_ids:
                raise DuplicateIdError(f"line {lineno}: duplicate id {rec_id!r}")
            seen_ids.add(rec_id)
            label = label_map.apply(row[schema.label])
            if label is None:
                continue
            text = row[schema.text] or ""
            user = _parse_user(row, schema, lineno) if schema.has_user_columns else None
            records.append(TweetRecord(
                id=rec_id,
                text=text,
                label=label,
                user=user,
                degenerate=normalize(text) == ""))
    return Dataset(
        name=name if name is not None else path.stem,
        records=tuple(records),
        has_user_meta=schema.has_user_columns)


def class_counts(dataset: Dataset) -> tuple[int, int]:
    """(informative, not_informative) record counts."""
    informative = sum(1 for r in dataset.records if r.label is Label.INFORMATIVE)
    return informative, len(dataset.records) - informative


@dataclass(frozen=True)
class FoldPlan:
    """Partition of record indices into k near-equal folds."""

    k: int
    assignments: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.assignments.setflags(write=False)

    def fold_indices(self, fold: int) -> np.ndarray:
        """Indices of the records evaluated in this fold."""
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        """Indices of the records trained on for this fold."""
        return np.flatnonzero(self.assignments != fold)

    def fold_sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)


def _chunk_assign(order: np.ndarray, k: int) -> np.ndarray:
    """Chunk a permutation into k folds whose sizes differ by at most one."""
    n = len(order)
    base, rem = divmod(n, k)
    assignments = np.empty(n, dtype=np.int64)
    start = 0
    for fold in range(k):
        size = base + (1 if fold < rem else 0)
        assignments[order[start:start + size]] = fold
        start += size
    return assignments


def make_folds(dataset: Dataset | int, k: int, seed: int,
               stratified: bool = False) -> FoldPlan:
    """Seeded random fold plan over a dataset (or a plain record count).

    Plain shuffling by default.  With ``stratified=True`` each class is
    shuffled separately and dealt round-robin so fold class ratios track
    the dataset's.  Identical (dataset, k, seed) inputs give identical
    plans.
    """
    n = dataset if isinstance(dataset, int) else len(dataset)
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > n:
        raise ValueError(f"k={k} exceeds dataset size {n}")
    rng = np.random.default_rng(seed)
    if not stratified:
        return FoldPlan(k=k, assignments=_chunk_assign(rng.permutation(n), k))
    if isinstance(dataset, int):
        raise ValueError("stratified folds need a Dataset, not a size")
    y = dataset.labels()
    order_parts = [rng.permutation(np.flatnonzero(y == cls)) for cls in (1, 0)]
    order = np.concatenate(order_parts)
    assignments = np.empty(n, dtype=np.int64)
    assignments[order] = np.arange(n) % k
    return FoldPlan(k=k, assignments=assignments)
