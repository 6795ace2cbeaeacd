"""Graph serialization: edge-list, Graphviz DOT and JSON lines."""
from __future__ import annotations

import json
import re
from typing import Iterable, Optional

from .dag import Dag
from .exceptions import InputError

FORMATS = ("edge-list", "dot", "jsonl")


def to_edge_list(g: Dag) -> str:
    """``i j`` lines; a ``# n=N`` header is added only when vertex n is isolated."""
    arcs = g.arcs
    head = "" if any(g.n in a for a in arcs) else f"# n={g.n}\n"
    return head + "".join(f"{i} {j}\n" for i, j in arcs)


def to_dot(g: Dag) -> str:
    lines = ["digraph G {"]
    lines += [f"  {v};" for v in range(1, g.n + 1)]
    lines += [f"  {i} -> {j};" for i, j in g.arcs]
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_jsonl(g: Dag) -> str:
    return json.dumps({"n": g.n, "arcs": [list(a) for a in g.arcs]}, separators=(",", ":")) + "\n"


_WRITERS = {"edge-list": to_edge_list, "dot": to_dot, "jsonl": to_jsonl}


def dumps(graphs: Iterable[Dag], fmt: str = "edge-list") -> str:
    """Serialize graphs; consecutive edge-list graphs are split by a blank line."""
    if fmt not in _WRITERS:
        raise InputError(f"unknown format {fmt!r}; choose from {FORMATS}")
    parts = [_WRITERS[fmt](g) for g in graphs]
    return ("\n" if fmt == "edge-list" else "").join(parts)


def parse_edge_list(text: str, n: Optional[int] = None) -> Dag:
    """One ``i j`` pair per line; ``#`` starts a comment, ``# n=N`` fixes n.

    Without an explicit ``n`` the largest vertex label is used, which is
    exact for connected graphs.
    """
    arcs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            m = re.match(r"#\s*n\s*=\s*(\d+)", line)
            if m and n is None:
                n = int(m.group(1))
            continue
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise InputError(f"line {lineno}: expected 'i j', got {raw!r}")
        try:
            arcs.append((int(fields[0]), int(fields[1])))
        except ValueError:
            raise InputError(f"line {lineno}: non-integer vertex in {raw!r}") from None
    if n is None:
        if not arcs:
            raise InputError("empty edge list and no vertex count given")
        n = max(max(a) for a in arcs)
    return Dag(n, arcs)


def split_edge_lists(text: str) -> list[str]:
    return [block for block in re.split(r"\n\s*\n", text) if block.strip()]


def parse_dot(text: str) -> Dag:
    nodes = {int(v) for v in re.findall(r"^\s*(\d+)\s*;", text, flags=re.M)}
    arcs = [(int(i), int(j)) for i, j in re.findall(r"(\d+)\s*->\s*(\d+)", text)]
    labels = nodes | {v for a in arcs for v in a}
    if not labels:
        raise InputError("no vertices in DOT input")
    return Dag(max(labels), arcs)


def parse_jsonl_line(line: str) -> Dag:
    try:
        obj = json.loads(line)
        return Dag(int(obj["n"]), [tuple(a) for a in obj["arcs"]])
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"bad JSON graph line: {exc}") from exc


def loads(text: str, fmt: str = "edge-list", n: Optional[int] = None) -> list[Dag]:
    if fmt == "edge-list":
        return [parse_edge_list(block, n) for block in split_edge_lists(text)]
    if fmt == "dot":
        return [parse_dot(block) for block in re.findall(r"digraph[^{]*\{[^}]*\}", text)]
    if fmt == "jsonl":
        return [parse_jsonl_line(ln) for ln in text.splitlines() if ln.strip()]
    raise InputError(f"unknown format {fmt!r}; choose from {FORMATS}")


def read_config_file(path: str) -> dict[str, str]:
    """Plain ``key = value`` lines; ``#`` comments and blank lines ignored."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values
