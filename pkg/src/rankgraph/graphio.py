"""Reading and writing graphs and probability matrices as text files.

Two graph formats are supported and auto-detected:

* edgelist: a mandatory first line ``n <count>`` followed by one ``i j`` pair
  per line (0-based, i != j). ``#`` starts a comment; blank lines are ignored.
* dense: n rows of n whitespace-separated 0/1 values. The matrix must be
  symmetric with a zero diagonal; violations are reported with their line
  number.

Estimated probability matrices are written as n rows of n reals with six
decimal places.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .symmat import SymMatrix


def _significant_lines(path) -> list[tuple[int, str]]:
    """(line_number, content) pairs with comments and blank lines removed."""
    lines = []
    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if text:
                lines.append((lineno, text))
    return lines


def read_graph(path) -> SymMatrix:
    """Load an adjacency matrix from an edgelist or dense 0/1 file."""
    lines = _significant_lines(path)
    if not lines:
        raise InputError(f"{path}: file contains no data")
    first_tokens = lines[0][1].split()
    if first_tokens[0] == "n":
        return _parse_edgelist(path, lines)
    return _parse_dense(path, lines)


def _parse_edgelist(path, lines) -> SymMatrix:
    lineno, header = lines[0]
    tokens = header.split()
    if len(tokens) != 2:
        raise InputError(f"{path}:{lineno}: header must be 'n <count>', got {header!r}")
    try:
        n = int(tokens[1])
    except ValueError:
        raise InputError(f"{path}:{lineno}: vertex count {tokens[1]!r} is not an integer")
    if n < 1:
        raise InputError(f"{path}:{lineno}: vertex count must be >= 1, got {n}")
    dense = np.zeros((n, n))
    for lineno, text in lines[1:]:
        tokens = text.split()
        if len(tokens) != 2:
            raise InputError(f"{path}:{lineno}: expected 'i j', got {text!r}")
        try:
            i, j = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise InputError(f"{path}:{lineno}: vertex indices must be integers, got {text!r}")
        if not (0 <= i < n and 0 <= j < n):
            raise InputError(f"{path}:{lineno}: vertex index outside [0, {n - 1}]")
        if i == j:
            raise InputError(f"{path}:{lineno}: self-loop {i} {j} is not allowed")
        dense[i, j] = dense[j, i] = 1.0
    return SymMatrix.from_dense(dense, atol=0.0)


def _parse_dense(path, lines) -> SymMatrix:
    rows = []
    linenos = []
    width = len(lines[0][1].split())
    for lineno, text in lines:
        tokens = text.split()
        if len(tokens) != width:
            raise InputError(
                f"{path}:{lineno}: row has {len(tokens)} values, expected {width}"
            )
        row = np.empty(width)
        for col, token in enumerate(tokens):
            try:
                value = float(token)
            except ValueError:
                raise InputError(f"{path}:{lineno}: {token!r} is not a number")
            if value not in (0.0, 1.0):
                raise InputError(f"{path}:{lineno}: entry {token!r} is not 0 or 1")
            row[col] = value
        rows.append(row)
        linenos.append(lineno)
    if len(rows) != width:
        raise InputError(f"{path}: dense matrix has {len(rows)} rows but {width} columns")
    dense = np.array(rows)
    for i in range(width):
        if dense[i, i] != 0.0:
            raise InputError(f"{path}:{linenos[i]}: diagonal entry ({i},{i}) must be 0")
        for j in range(i + 1, width):
            if dense[i, j] != dense[j, i]:
                raise InputError(
                    f"{path}:{linenos[j]}: entry ({j},{i}) != ({i},{j}); matrix not symmetric"
                )
    return SymMatrix.from_dense(dense, atol=0.0)


def write_dense_graph(graph: SymMatrix, path) -> None:
    """Write an adjacency matrix as n rows of 0/1 integers."""
    dense = graph.to_dense()
    with open(path, "w") as fh:
        for row in dense:
            fh.write(" ".join(str(int(v)) for v in row))
            fh.write("\n")


def write_edgelist(graph: SymMatrix, path) -> None:
    """Write an adjacency matrix as an ``n <count>`` header plus i<j edges."""
    n = graph.n
    dense = graph.to_dense()
    with open(path, "w") as fh:
        fh.write(f"n {n}\n")
        rows, cols = np.nonzero(np.triu(dense, k=1))
        for i, j in zip(rows, cols):
            fh.write(f"{i} {j}\n")


def write_prob_matrix(p: SymMatrix, path) -> None:
    """Write a probability matrix as n rows of reals, 6 decimal places."""
    dense = p.to_dense()
    with open(path, "w") as fh:
        for row in dense:
            fh.write(" ".join(f"{v:.6f}" for v in row))
            fh.write("\n")
