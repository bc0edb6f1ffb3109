"""Self-describing text container for trained model parameters.

Layout::

    #model kind=<kind> dims=<d> layout=<tag> seed=<seed>
    #param <key>=<value>            (zero or more)
    #block <name> shape=<r>x<c>     (or shape=<n> for vectors)
    <one line of space-separated floats per row>
    ...
    #end

Floats are written with 17 significant digits, which round-trips IEEE
doubles exactly: a reloaded model predicts identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class ContainerError(ValueError):
    """Model container file is malformed."""


@dataclass
class Container:
    kind: str
    dims: int
    layout: str
    seed: int
    params: dict[str, str] = field(default_factory=dict)
    blocks: dict[str, np.ndarray] = field(default_factory=dict)

    def block(self, name: str) -> np.ndarray:
        try:
            return self.blocks[name]
        except KeyError:
            raise ContainerError(f"container has no block {name!r}") from None


def _fmt_row(row: np.ndarray) -> str:
    return " ".join(format(v, ".17g") for v in row)


def write_container(path: str | Path, container: Container) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"#model kind={container.kind} dims={container.dims} "
                 f"layout={container.layout} seed={container.seed}\n")
        for key in sorted(container.params):
            fh.write(f"#param {key}={container.params[key]}\n")
        for name, array in container.blocks.items():
            arr = np.asarray(array, dtype=np.float64)
            if arr.ndim == 1:
                fh.write(f"#block {name} shape={arr.shape[0]}\n")
                fh.write(_fmt_row(arr) + "\n")
            elif arr.ndim == 2:
                fh.write(f"#block {name} shape={arr.shape[0]}x{arr.shape[1]}\n")
                for row in arr:
                    fh.write(_fmt_row(row) + "\n")
            else:
                raise ValueError(f"block {name!r} must be 1-D or 2-D")
        fh.write("#end\n")


def _parse_kv(text: str, what: str, lineno: int) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep:
        raise ContainerError(f"line {lineno}: malformed {what} {text!r}")
    return key, value


def read_container(path: str | Path) -> Container:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("#model "):
        raise ContainerError(f"{path}: missing '#model' header")
    header: dict[str, str] = {}
    for item in lines[0][len("#model "):].split():
        key, value = _parse_kv(item, "header field", 1)
        header[key] = value
    for required in ("kind", "dims", "layout", "seed"):
        if required not in header:
            raise ContainerError(f"{path}: header lacks {required!r}")
    container = Container(
        kind=header["kind"], dims=int(header["dims"]),
        layout=header["layout"], seed=int(header["seed"]))

    i = 1
    ended = False
    while i < len(lines):
        line = lines[i]
        if line == "#end":
            ended = True
            i += 1
            break
        if line.startswith("#param "):
            key, value = _parse_kv(line[len("#param "):], "param", i + 1)
            container.params[key] = value
            i += 1
            continue
        if line.startswith("#block "):
            fields = line[len("#block "):].split()
            if len(fields) != 2 or not fields[1].startswith("shape="):
                raise ContainerError(f"{path}:{i + 1}: malformed block header")
            name = fields[0]
            shape_txt = fields[1][len("shape="):]
            if "x" in shape_txt:
                rows, cols = (int(s) for s in shape_txt.split("x"))
                shape: tuple[int, ...] = (rows, cols)
                n_lines = rows
            else:
                shape = (int(shape_txt),)
                n_lines = 1
            values = []
            for j in range(n_lines):
                lineno = i + 1 + j
                if lineno >= len(lines):
                    raise ContainerError(f"{path}: block {name!r} is truncated")
                values.append([float(c) for c in lines[lineno].split()])
            try:
                arr = np.array(values, dtype=np.float64).reshape(shape)
            except ValueError:
                raise ContainerError(
                    f"{path}: block {name!r} does not match shape {shape}") from None
            if name in container.blocks:
                raise ContainerError(f"{path}: duplicate block {name!r}")
            container.blocks[name] = arr
            i += 1 + n_lines
            continue
        raise ContainerError(f"{path}:{i + 1}: unexpected line {line!r}")
    if not ended:
        raise ContainerError(f"{path}: missing '#end' sentinel (truncated file?)")
    return container
