"""Chart-ready table files for analysis products."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .analysis import InterestMatrix
from .labels import PartyLabel

FORMATS = {"delimited": ".tsv", "structured-record": ".jsonl"}


@dataclass
class Table:
    header: list[str]
    rows: list[list]


@dataclass
class Shares:
    """Row-normalized view of an interest matrix."""

    matrix: InterestMatrix


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def to_table(product) -> Table:
    if isinstance(product, Table):
        return product
    if isinstance(product, InterestMatrix):
        rows = [[label, *counts] for label, counts in zip(product.rows, product.counts)]
        return Table(["label", *product.columns], sorted(rows, key=lambda r: r[0]))
    if isinstance(product, Shares):
        m = product.matrix
        rows = [[label, *shares] for label, shares in zip(m.rows, m.shares)]
        return Table(["label", *m.columns], sorted(rows, key=lambda r: r[0]))
    if isinstance(product, Mapping) and product and all(isinstance(k, PartyLabel) for k in product):
        total = sum(product.values())
        rows = [[p.code, n, n / total if total else 0.0] for p, n in product.items()]
        return Table(["label", "count", "share"], sorted(rows, key=lambda r: r[0]))
    if isinstance(product, Mapping) and all(isinstance(v, list) for v in product.values()):
        rows = [
            [group, rank, term, freq]
            for group, terms in product.items()
            for rank, (term, freq) in enumerate(terms, start=1)
        ]
        return Table(["label", "rank", "term", "frequency"], sorted(rows, key=lambda r: (r[0], r[1])))
    raise TypeError(f"cannot tabulate {type(product).__name__}")


def render_table(table: Table, fmt: str = "delimited") -> str:
    if fmt == "delimited":
        out = io.StringIO()
        writer = csv.writer(out, delimiter="\t", lineterminator="\n")
        writer.writerow(table.header)
        for row in table.rows:
            writer.writerow([_fmt(v) for v in row])
        return out.getvalue()
    if fmt == "structured-record":
        lines = []
        for row in table.rows:
            record = {h: (round(v, 6) if isinstance(v, float) else v) for h, v in zip(table.header, row)}
            lines.append(json.dumps(record, ensure_ascii=False))
        return "".join(line + "\n" for line in lines)
    raise ValueError(f"unknown table format {fmt!r}")


def emit_tables(products: Mapping[str, object], out_dir: str | Path,
                fmt: str = "delimited") -> list[Path]:
    if not products:
        raise ValueError("no analysis products to emit")
    if fmt not in FORMATS:
        raise ValueError(f"unknown table format {fmt!r}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name in sorted(products):
        path = out_dir / f"{name}{FORMATS[fmt]}"
        path.write_text(render_table(to_table(products[name]), fmt), "utf-8")
        written.append(path)
    return written


def _number(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def read_table(path: str | Path) -> Table:
    path = Path(path)
    text = path.read_text("utf-8")
    if path.suffix == ".jsonl":
        records = [json.loads(line) for line in text.split("\n") if line.strip()]
        header = list(records[0]) if records else []
        return Table(header, [[r[h] for h in header] for r in records])
    reader = csv.reader(io.StringIO(text), delimiter="\t")
    header = next(reader)
    return Table(header, [[row[0], *(_number(v) for v in row[1:])] for row in reader])


def matrix_from_table(table: Table) -> InterestMatrix:
    return InterestMatrix(
        rows=[r[0] for r in table.rows],
        columns=table.header[1:],
        counts=[[int(v) for v in r[1:]] for r in table.rows],
    )
