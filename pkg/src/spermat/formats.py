"""Text and JSON formats for S-permutation, pair and Sudoku matrices.

S-permutation text: first line ``n``, then n^2 lines of n^2 space-separated
0/1 digits. Sudoku text: same layout with values in 1..n^2. Pair-matrix JSON:
``{"n": N, "entries": [[[a, b], ...], ...]}``.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import InvalidPiMatrix, ParseError
from .matrix import PiMatrix, SPermMatrix, SudokuMatrix, validate_s_permutation


def _parse_grid(text: str, allowed: range) -> tuple[int, list[list[int]]]:
    lines = [(no, ln) for no, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise ParseError("empty input")
    first_no, first = lines[0]
    try:
        n = int(first.strip())
    except ValueError:
        raise ParseError(f"expected n on the first line, got {first.strip()!r}", first_no) from None
    if n < 1:
        raise ParseError("n must be positive", first_no)
    m = n * n
    body = lines[1:]
    if len(body) != m:
        last = body[-1][0] if body else first_no
        raise ParseError(f"expected {m} grid lines, got {len(body)}", last)
    grid = []
    for no, ln in body:
        tokens = ln.split()
        if len(tokens) != m:
            raise ParseError(f"expected {m} values, got {len(tokens)}", no)
        row = []
        for pos, tok in enumerate(tokens, 1):
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"not an integer: {tok!r}", no, pos) from None
            if v not in allowed:
                raise ParseError(f"value {v} out of range {allowed.start}..{allowed.stop - 1}", no, pos)
            row.append(v)
        grid.append(row)
    return n, grid


def parse_sperm_text(text: str) -> SPermMatrix:
    _, grid = _parse_grid(text, range(0, 2))
    return validate_s_permutation(grid)


def format_sperm_text(a: SPermMatrix) -> str:
    lines = [str(a.n)] + [" ".join(map(str, row)) for row in a.to_grid()]
    return "\n".join(lines) + "\n"


def parse_sudoku_text(text: str) -> SudokuMatrix:
    head = next((ln for ln in text.splitlines() if ln.strip()), "")
    try:
        m = int(head.strip()) ** 2
    except ValueError:
        m = 0
    _, grid = _parse_grid(text, range(1, max(m, 1) + 1))
    return SudokuMatrix(grid)


def format_sudoku_text(s: SudokuMatrix) -> str:
    lines = [str(s.n)] + [" ".join(map(str, row)) for row in s.cells]
    return "\n".join(lines) + "\n"


def pi_to_json(p: PiMatrix) -> dict[str, Any]:
    return {"n": p.n, "entries": [[[a, b] for a, b in row] for row in p.entries]}


def pi_from_json(obj: dict[str, Any] | str) -> PiMatrix:
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(obj, dict) or "entries" not in obj:
        raise InvalidPiMatrix('expected an object with "n" and "entries"')
    p = PiMatrix(obj["entries"])
    if "n" in obj and obj["n"] != p.n:
        raise InvalidPiMatrix(f'declared n={obj["n"]} but entries are {p.n} x {p.n}')
    return p


def read_matrix(text: str) -> SPermMatrix | PiMatrix:
    """Sniff the format: JSON object means a pair matrix, anything else S-permutation text."""
    if text.lstrip().startswith("{"):
        return pi_from_json(text)
    return parse_sperm_text(text)
