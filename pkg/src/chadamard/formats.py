"""JSON and plain-text formats for phase matrices, families and conference matrices.

Text grid format, one matrix row per line, entries separated by whitespace::

    params: a b
    1  i*exp(i*(a))  -1*exp(i*(a-b))
    ...

Base tokens are ``1``, ``-1``, ``i``, ``-i`` and ``w^{p/q}`` (``exp(2*pi*i*p/q)``).
The optional suffix ``*exp(i*(...))`` carries the linear form, written with
the parameter names, e.g. ``a-b+2*c``.  Blank lines and ``#`` comments are
ignored.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .conference import ConferenceMatrix
from .phase import AffineEntry, AffinePhaseMatrix, Phase

_BASE_TOKENS = {"1": Phase(0), "-1": Phase(1, 2), "i": Phase(1, 4), "-i": Phase(3, 4)}
_BASE_NAMES = {v: k for k, v in _BASE_TOKENS.items()}
_W_RE = re.compile(r"^(-?)w\^\{(-?\d+)/(\d+)\}$|^(-?)w\^\{?(-?\d+)\}?$")
_TERM_RE = re.compile(r"([+-]?)\s*(?:(\d+)\s*\*?\s*)?([A-Za-z_]\w*)")
_ENTRY_RE = re.compile(r"^(?P<base>[^*]+?)(?:\*exp\(i\*\((?P<form>[^()]*)\)\))?$")


class FormatError(ValueError):
    pass


# ----------------------------------------------------------------- linear forms

def format_form(form, params) -> str:
    out = []
    for c, name in zip(form, params):
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        term = name if mag == 1 else f"{mag}*{name}"
        out.append((sign, term))
    if not out:
        return "0"
    text = "".join(s + t for s, t in out)
    return text[1:] if text.startswith("+") else text


def parse_form(text: str, params) -> tuple[int, ...]:
    """Parse ``a-b+2*c`` (or ``.``/``0``/bullet for the zero form) into coefficients."""
    params = list(params)
    text = text.strip()
    coeffs = [0] * len(params)
    if text in ("", ".", "0", "•"):
        return tuple(coeffs)
    pos = 0
    compact = text.replace(" ", "")
    for m in _TERM_RE.finditer(compact):
        if m.start() != pos:
            raise FormatError(f"cannot parse linear form {text!r}")
        pos = m.end()
        sign, mag, name = m.groups()
        if name not in params:
            raise FormatError(f"unknown parameter {name!r} in {text!r}")
        value = int(mag) if mag else 1
        coeffs[params.index(name)] += -value if sign == "-" else value
    if pos != len(compact):
        raise FormatError(f"cannot parse linear form {text!r}")
    return tuple(coeffs)


# ----------------------------------------------------------------- base tokens

def format_base(q: Phase) -> str:
    q = Phase(q)
    if q in _BASE_NAMES:
        return _BASE_NAMES[q]
    return f"w^{{{q.numerator}/{q.denominator}}}"


def parse_base(token: str) -> Phase:
    token = token.strip()
    if token in _BASE_TOKENS:
        return _BASE_TOKENS[token]
    m = _W_RE.match(token)
    if not m:
        raise FormatError(f"unknown entry token {token!r}")
    if m.group(2) is not None:
        neg, value = m.group(1), Fraction(int(m.group(2)), int(m.group(3)))
    else:
        neg, value = m.group(4), Fraction(int(m.group(5)))
    return Phase(value + (Fraction(1, 2) if neg else 0))


# ----------------------------------------------------------------- text grids

def format_text(F: AffinePhaseMatrix) -> str:
    lines = []
    if F.param_count:
        lines.append("params: " + " ".join(F.params))
    cells = []
    for row in F.entries:
        out = []
        for e in row:
            tok = format_base(e.base)
            if any(e.form):
                tok += f"*exp(i*({format_form(e.form, F.params)}))"
            out.append(tok)
        cells.append(out)
    width = max((len(t) for row in cells for t in row), default=1)
    lines.extend(" ".join(t.rjust(width) for t in row).rstrip() for row in cells)
    return "\n".join(lines) + "\n"


def parse_text(text: str) -> AffinePhaseMatrix:
    params: tuple[str, ...] = ()
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("params:"):
            params = tuple(line[len("params:"):].replace(",", " ").split())
            continue
        row = []
        for tok in line.split():
            m = _ENTRY_RE.match(tok)
            if not m:
                raise FormatError(f"cannot parse entry {tok!r}")
            form = parse_form(m.group("form"), params) if m.group("form") else (0,) * len(params)
            row.append(AffineEntry(parse_base(m.group("base")), form))
        rows.append(tuple(row))
    if not rows:
        raise FormatError("empty matrix")
    return AffinePhaseMatrix(tuple(rows), params)


def parse_r_matrix(text: str, params) -> list[list[tuple[int, ...]]]:
    """Grid of linear forms, whitespace separated; ``.`` marks a zero form."""
    grid = []
    for raw in text.strip().splitlines():
        line = raw.strip()
        if line:
            grid.append([parse_form(tok, params) for tok in line.split()])
    return grid


# ----------------------------------------------------------------- JSON

def to_json_dict(F: AffinePhaseMatrix) -> dict:
    return {
        "order": F.order,
        "params": list(F.params),
        "entries": [[{"base": str(e.base), "coeffs": list(e.form)} for e in row]
                    for row in F.entries],
    }


def from_json_dict(d: dict) -> AffinePhaseMatrix:
    try:
        params = tuple(d.get("params", ()))
        entries = d["entries"]
        rows = tuple(
            tuple(AffineEntry(Phase(Fraction(str(cell["base"]))),
                              tuple(cell.get("coeffs", (0,) * len(params))))
                  for cell in row)
            for row in entries
        )
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"malformed phase-matrix JSON: {exc}") from exc
    F = AffinePhaseMatrix(rows, params)
    if "order" in d and d["order"] != F.order:
        raise FormatError(f"declared order {d['order']} but found {F.order} rows")
    return F


def conference_to_json_dict(C: ConferenceMatrix) -> dict:
    return {"type": "conference", "order": C.order, "entries": [list(r) for r in C.entries]}


def conference_from_json(d) -> ConferenceMatrix:
    grid = d["entries"] if isinstance(d, dict) else d
    return ConferenceMatrix(tuple(tuple(int(x) for x in row) for row in grid))


def dumps(obj, fmt: str = "json") -> str:
    if isinstance(obj, ConferenceMatrix):
        if fmt != "json":
            return "\n".join(" ".join(f"{x:2d}" for x in row) for row in obj.entries) + "\n"
        return json.dumps(conference_to_json_dict(obj))
    if fmt == "text":
        return format_text(obj)
    return json.dumps(to_json_dict(obj))


def loads(text: str):
    """Parse a phase matrix, family or conference matrix from JSON or text.

    A text grid over {0, 1, -1} containing a 0 is read as a conference matrix.
    """
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from exc
        if isinstance(d, list) or d.get("type") == "conference":
            try:
                return conference_from_json(d)
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"malformed conference JSON: {exc}") from exc
        if isinstance(d, dict) and "matrix" in d and "entries" not in d:
            d = d["matrix"]
        return from_json_dict(d)
    grid = [line.split("#", 1)[0].split() for line in text.splitlines()]
    grid = [row for row in grid if row]
    tokens = {t for row in grid for t in row}
    if "0" in tokens and tokens <= {"0", "1", "-1"}:
        try:
            return conference_from_json(grid)
        except ValueError as exc:
            raise FormatError(f"malformed conference matrix: {exc}") from exc
    return parse_text(text)


def load(path) -> object:
    return loads(Path(path).read_text())


def save(obj, path, fmt: str = "json") -> None:
    Path(path).write_text(dumps(obj, fmt))
