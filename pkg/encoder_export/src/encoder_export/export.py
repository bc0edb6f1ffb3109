"""Batch [CLS]-vector export into the sentence-vector interchange format.

The interchange contract (shared with the classification pipeline):
line 1 ``#dim=D count=N``, further ``#`` lines are comments, then one
``id<TAB>f1 f2 .. fD`` row per record with 6-significant-digit floats
and LF line endings.

Raw tweet text goes into the encoder as-is: subword tokenizers handle
Unicode natively, so the pipeline's ASCII normalization is deliberately
not applied here.
"""

from __future__ import annotations

import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import torch


class ExportError(Exception):
    """Dataset or schema problem; the CLI maps this to a usage error."""


@dataclass(frozen=True)
class SchemaSpec:
    """Column names and delimiter of the input dataset file."""

    id: str = "id"
    text: str = "text"
    delimiter: str = "\t"

    @classmethod
    def parse(cls, spec: str) -> "SchemaSpec":
        """Parse ``id=<col>,text=<col>,delimiter=tab|comma``."""
        fields = {"id": "id", "text": "text", "delimiter": "tab"}
        if spec:
            for item in spec.split(","):
                key, sep, value = item.partition("=")
                if not sep or key.strip() not in fields:
                    raise ExportError(f"bad schema item {item!r}; expected "
                                      "id=<col>,text=<col>,delimiter=tab|comma")
                fields[key.strip()] = value.strip()
        delim = {"tab": "\t", "comma": ","}.get(fields["delimiter"])
        if delim is None:
            raise ExportError("schema delimiter must be 'tab' or 'comma'")
        return cls(id=fields["id"], text=fields["text"], delimiter=delim)


@dataclass(frozen=True)
class ExportJob:
    """One export run: dataset in, interchange file out."""

    input_path: Path
    output_path: Path
    schema: SchemaSpec = SchemaSpec()
    encoder: str = "bert-base-uncased"
    max_length: int = 80
    batch_size: int = 16

    def __post_init__(self):
        if self.max_length < 1:
            raise ExportError("max length must be >= 1")
        if self.batch_size < 1:
            raise ExportError("batch size must be >= 1")


def read_records(job: ExportJob) -> list[tuple[str, str]]:
    """(id, text) pairs in file order; empty-text records are skipped
    with a warning line on stderr."""
    records: list[tuple[str, str]] = []
    seen: set[str] = set()
    with open(job.input_path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter=job.schema.delimiter)
        header = reader.fieldnames or []
        missing = [c for c in (job.schema.id, job.schema.text) if c not in header]
        if missing:
            raise ExportError(
                f"{job.input_path}: header is missing column(s) {', '.join(missing)}")
        for lineno, row in enumerate(reader, start=2):
            rec_id = row[job.schema.id]
            if not rec_id:
                raise ExportError(f"{job.input_path}:{lineno}: empty id")
            if rec_id in seen:
                raise ExportError(
                    f"{job.input_path}:{lineno}: duplicate id {rec_id!r}")
            seen.add(rec_id)
            text = row[job.schema.text]
            if text is None or not text.strip():
                print(f"warning: skipping id={rec_id}: missing text",
                      file=sys.stderr)
                continue
            records.append((rec_id, text))
    return records


def load_encoder(name_or_path: str):
    """Tokenizer + model in eval mode.  Accepts a hub name or a local
    directory (e.g. externally fine-tuned weights)."""
    from transformers import AutoModel, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(name_or_path)
    model = AutoModel.from_pretrained(name_or_path)
    model.eval()
    return tokenizer, model


def encode_cls(tokenizer, model, texts: list[str], max_length: int,
               batch_size: int) -> torch.Tensor:
    """(n, hidden) matrix of final-layer hidden states at the first token."""
    chunks = []
    with torch.no_grad():
        for start in range(0, len(texts), batch_size):
            batch = texts[start:start + batch_size]
            encoded = tokenizer(batch, padding=True, truncation=True,
                                max_length=max_length, return_tensors="pt")
            output = model(**encoded)
            chunks.append(output.last_hidden_state[:, 0, :])
    return torch.cat(chunks, dim=0) if chunks else torch.empty(0, 0)


def write_interchange(path: Path, ids: list[str], vectors: torch.Tensor,
                      dimension: int, encoder_name: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"#dim={dimension} count={len(ids)}\n")
        fh.write(f"#encoder={encoder_name}\n")
        for rec_id, vec in zip(ids, vectors):
            cells = " ".join(format(float(v), ".6g") for v in vec)
            fh.write(f"{rec_id}\t{cells}\n")


def export_cls(job: ExportJob) -> int:
    """Run the export; returns the number of vectors written."""
    records = read_records(job)
    tokenizer, model = load_encoder(job.encoder)
    hidden = int(model.config.hidden_size)
    ids = [rec_id for rec_id, _ in records]
    texts = [text for _, text in records]
    vectors = encode_cls(tokenizer, model, texts, job.max_length, job.batch_size)
    if len(ids) and vectors.shape[1] != hidden:
        raise RuntimeError(
            f"encoder produced dim {vectors.shape[1]}, config says {hidden}")
    write_interchange(job.output_path, ids, vectors, hidden, job.encoder)
    return len(ids)
