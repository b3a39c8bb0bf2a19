"""Delimited result tables."""
from dataclasses import dataclass, field
import json
import os
import subprocess


@dataclass
class ResultTable:
    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values, header has {len(self.columns)}")
        self.rows.append(tuple(float(v) for v in values))

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def body(self):
        lines = [",".join(self.columns)]
        lines += [",".join(repr(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def to_csv(self):
        meta = [f"# {k} = {v}" for k, v in self.metadata.items()]
        return "\n".join(meta) + ("\n" if meta else "") + self.body()

    def write(self, path, json_mirror=False):
        parent = os.path.dirname(os.path.abspath(path))
        os.makedirs(parent, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())
        if json_mirror:
            stem, _ = os.path.splitext(path)
            with open(stem + ".json", "w", encoding="utf-8") as fh:
                json.dump({"metadata": self.metadata, "columns": self.columns,
                           "rows": [list(r) for r in self.rows]}, fh, indent=1)


def read_csv(path):
    """Parse a table written by :meth:`ResultTable.write`."""
    meta, rows, columns = {}, [], None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                meta[key.strip()] = value.strip()
            elif columns is None:
                columns = line.split(",")
            else:
                rows.append(tuple(float(x) for x in line.split(",")))
    return ResultTable(columns or [], rows, meta)


def strip_metadata(text):
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))


def git_describe():
    here = os.path.dirname(os.path.abspath(__file__))
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty", "--tags"], cwd=here,
                             capture_output=True, text=True, timeout=5)
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return out.stdout.strip() or "unknown"
