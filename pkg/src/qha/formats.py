"""Text file formats and PGM heatmap emission.

All numeric text uses 17 significant digits so float64 values round-trip
exactly; parse(emit(x)) == x bit for bit.  Formats:

* signal:   "QHA1 signal N L" header, then N lines "re im"
* operator: "QHA1 op N L R" header, then R blocks of 2N lines (f_n then g_n)
* grid:     "QHA1 psf N L" header, then N*N lines in row-major (x, w) order
* heatmap:  binary NetPBM P5, maxval 255, |value| linearly scaled,
            scaling constants recorded in the comment line
"""

from __future__ import annotations

import numpy as np

from .grid import GridSpec, PhaseSpaceFunction
from .operators import FiniteRankOperator
from .signals import Signal


class FormatError(ValueError):
    """Malformed input file."""


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _emit_complex_lines(values: np.ndarray) -> list[str]:
    return [f"{_fmt(v.real)} {_fmt(v.imag)}" for v in values]


def _parse_complex_lines(lines: list[str], count: int, what: str) -> np.ndarray:
    if len(lines) != count:
        raise FormatError(f"expected {count} value lines for {what}, got {len(lines)}")
    out = np.empty(count, dtype=np.complex128)
    for i, line in enumerate(lines):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"bad value line {i + 1} in {what}: {line!r}")
        try:
            out[i] = complex(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise FormatError(f"bad number on line {i + 1} in {what}: {line!r}") from exc
    return out


def _parse_header(text: str, kind: str, extra: int = 0) -> tuple[list[str], list[str]]:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty file")
    head = lines[0].split()
    if len(head) != 4 + extra or head[0] != "QHA1" or head[1] != kind:
        raise FormatError(f"expected 'QHA1 {kind} ...' header, got {lines[0]!r}")
    return head[2:], lines[1:]


def _grid_from_header(fields: list[str]) -> GridSpec:
    try:
        n = int(fields[0])
        length = float(fields[1])
    except ValueError as exc:
        raise FormatError(f"bad grid header fields {fields!r}") from exc
    try:
        return GridSpec(n, length)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def emit_signal(sig: Signal) -> str:
    head = f"QHA1 signal {sig.grid.n} {_fmt(sig.grid.length)}"
    return "\n".join([head] + _emit_complex_lines(sig.values)) + "\n"


def parse_signal(text: str) -> Signal:
    fields, rest = _parse_header(text, "signal")
    grid = _grid_from_header(fields)
    return Signal(grid, _parse_complex_lines(rest, grid.n, "signal"))


def emit_operator(op: FiniteRankOperator) -> str:
    head = f"QHA1 op {op.grid.n} {_fmt(op.grid.length)} {op.rank}"
    lines = [head]
    for f, g in op.terms:
        lines += _emit_complex_lines(f.values)
        lines += _emit_complex_lines(g.values)
    return "\n".join(lines) + "\n"


def parse_operator(text: str) -> FiniteRankOperator:
    fields, rest = _parse_header(text, "op", extra=1)
    grid = _grid_from_header(fields[:2])
    try:
        rank = int(fields[2])
    except ValueError as exc:
        raise FormatError(f"bad rank field {fields[2]!r}") from exc
    if rank < 0:
        raise FormatError(f"rank must be >= 0, got {rank}")
    n = grid.n
    if len(rest) != 2 * n * rank:
        raise FormatError(
            f"expected {2 * n * rank} value lines for rank-{rank} operator, got {len(rest)}"
        )
    terms = []
    for r in range(rank):
        block = rest[2 * n * r : 2 * n * (r + 1)]
        f = Signal(grid, _parse_complex_lines(block[:n], n, f"term {r} f"))
        g = Signal(grid, _parse_complex_lines(block[n:], n, f"term {r} g"))
        terms.append((f, g))
    return FiniteRankOperator(grid, tuple(terms))


def emit_grid(f: PhaseSpaceFunction) -> str:
    head = f"QHA1 psf {f.grid.n} {_fmt(f.grid.length)}"
    return "\n".join([head] + _emit_complex_lines(f.values.ravel())) + "\n"


def parse_grid(text: str) -> PhaseSpaceFunction:
    fields, rest = _parse_header(text, "psf")
    grid = _grid_from_header(fields)
    vals = _parse_complex_lines(rest, grid.n * grid.n, "psf")
    return PhaseSpaceFunction(grid, vals.reshape(grid.n, grid.n))


def emit_pgm(values: np.ndarray) -> bytes:
    """|values| as a P5 image, max -> 255, min -> 0; scale in the comment."""
    mag = np.abs(np.asarray(values))
    lo = float(mag.min())
    hi = float(mag.max())
    if hi > lo:
        pixels = np.round(255.0 * (mag - lo) / (hi - lo)).astype(np.uint8)
    else:
        pixels = np.zeros_like(mag, dtype=np.uint8)
    header = f"P5\n# scale min={_fmt(lo)} max={_fmt(hi)}\n{mag.shape[1]} {mag.shape[0]}\n255\n"
    return header.encode("ascii") + pixels.tobytes()


def read_text(path) -> str:
    with open(path, "r", encoding="ascii") as fh:
        return fh.read()


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def write_bytes(path, blob: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(blob)
