"""Command-line wrapper around the export job.

Exit codes: 0 success, 1 usage error (bad flags, bad schema, unreadable
dataset), 2 runtime error (encoder load or inference failure).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from encoder_export.export import ExportError, ExportJob, SchemaSpec, export_cls


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="encoder-export",
        description="Write frozen sentence-encoder [CLS] vectors for a "
                    "dataset into the interchange format.")
    parser.add_argument("--input", required=True, type=Path,
                        help="dataset file (delimited, header row)")
    parser.add_argument("--schema", default="",
                        help="id=<col>,text=<col>,delimiter=tab|comma "
                             "(default: id,text,tab)")
    parser.add_argument("--encoder", default="bert-base-uncased",
                        help="encoder hub name or local directory "
                             "(a path may hold externally fine-tuned weights)")
    parser.add_argument("--max-len", type=int, default=80,
                        help="encoder token truncation length")
    parser.add_argument("--batch", type=int, default=16, help="batch size")
    parser.add_argument("--out", required=True, type=Path,
                        help="output interchange file")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1

    if not args.input.exists():
        print(f"error: input file not found: {args.input}", file=sys.stderr)
        return 1
    try:
        schema = SchemaSpec.parse(args.schema)
        job = ExportJob(input_path=args.input, output_path=args.out,
                        schema=schema, encoder=args.encoder,
                        max_length=args.max_len, batch_size=args.batch)
    except ExportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        records = export_cls(job)
    except ExportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # encoder load/inference failures
        print(f"error: encoder export failed: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out} ({records} vectors)")
    return 0


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
