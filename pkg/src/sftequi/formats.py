"""Plain-text file formats.

Matrix:    first line s, then s rows of space-separated 0/1 entries.
Function:  first line depth k, then one line ``w_0 ... w_{k-1} value`` per
           admissible k-word.
OrbitSet:  one block per line, symbols space-separated, lexicographic.
Measure:   one line ``block... weight`` per support point.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import LocallyConstantFunction, TransitionMatrix
from .errors import InvalidMatrix, TableError
from .measures import FiniteInvariantMeasure
from .orbits import OrbitSet, orbit_closure


def _lines(text: str) -> list[str]:
    return [ln.split("#", 1)[0].strip() for ln in text.splitlines()
            if ln.split("#", 1)[0].strip()]


def parse_matrix(text: str) -> TransitionMatrix:
    lines = _lines(text)
    if not lines:
        raise InvalidMatrix("empty matrix file")
    s = int(lines[0])
    rows = [tuple(int(t) for t in ln.split()) for ln in lines[1:]]
    if len(rows) != s:
        raise InvalidMatrix(f"expected {s} rows, found {len(rows)}")
    return TransitionMatrix(tuple(rows))


def format_matrix(A: TransitionMatrix) -> str:
    return f"{A.s}\n{A}\n"


def read_matrix(path) -> TransitionMatrix:
    return parse_matrix(Path(path).read_text())


def write_matrix(A: TransitionMatrix, path) -> None:
    Path(path).write_text(format_matrix(A))


def parse_function(text: str, matrix: TransitionMatrix) -> LocallyConstantFunction:
    lines = _lines(text)
    if not lines:
        raise TableError("empty function file")
    k = int(lines[0])
    values = {}
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != k + 1:
            raise TableError(f"expected {k} symbols and a value: {ln!r}")
        word = tuple(int(t) for t in toks[:k])
        if word in values:
            raise TableError(f"word {word} listed twice")
        values[word] = float(toks[k])
    return LocallyConstantFunction(matrix, k, values)


def format_function(f: LocallyConstantFunction) -> str:
    body = "".join(" ".join(map(str, w)) + f" {f.values[w]!r}\n" for w in f.words)
    return f"{f.depth}\n{body}"


def read_function(path, matrix: TransitionMatrix) -> LocallyConstantFunction:
    return parse_function(Path(path).read_text(), matrix)


def write_function(f: LocallyConstantFunction, path) -> None:
    Path(path).write_text(format_function(f))


def format_orbit_set(I: OrbitSet) -> str:
    return "".join(" ".join(map(str, b)) + "\n" for b in I.blocks)


def parse_orbit_set(text: str, matrix: TransitionMatrix) -> OrbitSet:
    blocks = [tuple(int(t) for t in ln.split()) for ln in _lines(text)]
    if not blocks:
        raise ValueError("empty orbit set")
    n = len(blocks[0])
    if any(len(b) != n for b in blocks):
        raise ValueError("all blocks of an orbit set share the period n")
    I = orbit_closure(blocks, n, matrix)
    if len(I) != len(set(blocks)):
        raise ValueError("listed blocks are not closed under the shift")
    return I


def format_measure(mu: FiniteInvariantMeasure) -> str:
    return "".join(" ".join(map(str, b)) + f" {float(w)!r}\n"
                   for b, w in zip(mu.blocks, mu.weights))


def parse_measure(text: str, matrix: TransitionMatrix) -> FiniteInvariantMeasure:
    blocks, weights = [], []
    for ln in _lines(text):
        toks = ln.split()
        blocks.append(tuple(int(t) for t in toks[:-1]))
        weights.append(float(toks[-1]))
    return FiniteInvariantMeasure(matrix, tuple(blocks), np.array(weights))
