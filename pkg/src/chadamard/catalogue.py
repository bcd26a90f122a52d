"""Exact fixtures: transcribed matrices and families plus generated standard ones.

Transcribed grids are kept as text below and guarded twice: a sha256 over the
raw text catches accidental edits, and every entry is re-verified (Hadamard,
family or conference identity) when it is loaded.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from functools import lru_cache

from .conference import ConferenceMatrix, conference_to_hadamard, paley_conference
from .errors import VerificationError
from .formats import parse_r_matrix
from .ops import dephase, is_hadamard, kron
from .phase import AffinePhaseMatrix, Phase, family_is_hadamard, fourier

_H12 = """
1  1  1  1  1  1  1  1  1  1  1  1
1  1  1  1  1  1 -1 -1 -1 -1 -1 -1
1 -1  1  1 -1 -1  1  1 -1  1 -1 -1
1 -1  1 -1  1 -1 -1  1  1 -1  1 -1
1 -1 -1  1 -1  1 -1  1  1 -1 -1  1
1  1  1 -1 -1 -1  1 -1  1 -1 -1  1
1  1 -1 -1  1 -1 -1  1 -1  1 -1  1
1  1 -1  1 -1 -1 -1 -1  1  1  1 -1
1 -1  1 -1 -1  1 -1 -1 -1  1  1  1
1  1 -1 -1 -1  1  1  1 -1 -1  1 -1
1 -1 -1 -1  1  1  1 -1  1  1 -1 -1
1 -1 -1  1  1 -1  1 -1 -1 -1  1  1
"""

_R_H12 = """
. . .   .   .   .   .     .     .       .       .     .
. . .   .   .   .   .     .     .       .       .     .
. . a   a   a   a   a+g   a+g   a+e+g   a+e+g   a+g   a+g
. . a+b a+b a+c a+c a+d+g a+d+g a+e+g   a+e+g   a+f+g a+f+g
. . a+b a+b a+c a+c a+d+g a+d+g a+e+g   a+e+g   a+f+g a+f+g
. . b   b   .   .   d+g   d+g   e+g     e+g     f+g   f+g
. . .   .   c   c   d+g   d+g   e+g     e+g     f+g   f+g
. . b   b   .   .   g     g     g       g       f+g   f+g
. . a+b a+b a+c a+c a+g   a+g   a+e+g   a+e+g   a+g   a+g
. . .   .   c   c   g     g     g       g       f+g   f+g
. . a   a   a   a   a+d+g a+d+g a+g     a+g     a+g   a+g
. . a+b a+b a+c a+c a+d+g a+d+g a+g     a+g     a+g   a+g
"""

_D10 = """
1  1  1  1  1  1  1  1  1  1
1 -1 -i -i -i -i  i  i  i  i
1 -i -1  i  i -i -i -i  i  i
1 -i  i -1 -i  i -i  i -i  i
1 -i  i -i -1  i  i -i  i -i
1 -i -i  i  i -1  i  i -i -i
1  i -i -i  i  i -1 -i -i  i
1  i -i  i -i  i -i -1  i -i
1  i  i -i  i -i -i  i -1 -i
1  i  i  i -i -i  i -i -i -1
"""

_R_D10 = """
. .    .    .  .  .  .  .    .    .
. .    a-b  a  -c .  -c a    a-b  .
. -a+b .    b  -c .  -c b    .    -a+b
. -a   -b   .  .  .  .  .    -b   -a
. c    c    .  .  .  .  .    c    c
. .    .    .  .  .  .  .    .    .
. c    c    .  .  .  .  .    c    c
. -a   -b   .  .  .  .  .    -b   -a
. -a+b .    b  -c .  -c b    .    -a+b
. .    a-b  a  -c .  -c a    a-b  .
"""

_D14 = """
1  1  1  1  1  1  1  1  1  1  1  1  1  1
1 -1  i -i  i  i -i -i -i -i  i  i -i  i
1  i -1  i -i  i  i -i -i -i -i  i  i -i
1 -i  i -1  i -i  i  i -i -i -i -i  i  i
1  i -i  i -1  i -i  i  i -i -i -i -i  i
1  i  i -i  i -1  i -i  i  i -i -i -i -i
1 -i  i  i -i  i -1  i -i  i  i -i -i -i
1 -i -i  i  i -i  i -1  i -i  i  i -i -i
1 -i -i -i  i  i -i  i -1  i -i  i  i -i
1 -i -i -i -i  i  i -i  i -1  i -i  i  i
1  i -i -i -i -i  i  i -i  i -1  i -i  i
1  i  i -i -i -i -i  i  i -i  i -1  i -i
1 -i  i  i -i -i -i -i  i  i -i  i -1  i
1  i -i  i  i -i -i -i -i  i  i -i  i -1
"""

_R_D14 = """
. .   .   .   .   .   .   .   .   . .   .   .   .
. .   .   a-b a-b -c  a   -e  -c  . a   -e  a   a
. .   .   a-b a-b -c  a   -e  -c  . a   -e  a   a
. b-a b-a .   .   b   b   -e  b   . -f  -e  b   -f
. b-a b-a .   .   b   b   -e  b   . -f  -e  b   -f
. c   c   -b  -b  .   c-d c   .   . .   c   c-d .
. -a  -a  -b  -b  d-c .   d-e d-c . d-f d-e .   d-f
. e   e   e   e   -c  e-d .   -c  . -f  .   e-d -f
. c   c   -b  -b  .   c-d c   .   . .   c   c-d .
. .   .   .   .   .   .   .   .   . .   .   .   .
. -a  -a  f   f   .   f-d f   .   . .   f   f-d .
. e   e   e   e   -c  e-d .   -c  . -f  .   e-d -f
. -a  -a  -b  -b  d-c .   d-e d-c . d-f d-e .   d-f
. -a  -a  f   f   .   f-d f   .   . .   f   f-d .
"""

_FIXTURES = (_H12, _R_H12, _D10, _R_D10, _D14, _R_D14)
FIXTURE_SHA256 = "204b59b5920fb9ae7fa91e6c2ba405d08c7fdd812feccd6346fb685079daeb7e"

_TOKENS = {"1": Phase(0), "-1": Phase(1, 2), "i": Phase(1, 4), "-i": Phase(3, 4)}


def fixture_digest() -> str:
    return hashlib.sha256("".join(_FIXTURES).encode()).hexdigest()


def _grid(text) -> AffinePhaseMatrix:
    return AffinePhaseMatrix.from_phases(
        [[_TOKENS[t] for t in line.split()] for line in text.strip().splitlines()]
    )


def _family(base_text, r_text, params) -> AffinePhaseMatrix:
    return _grid(base_text).with_forms(parse_r_matrix(r_text, params), tuple(params))


@dataclass(frozen=True)
class CatalogueEntry:
    id: str
    object: AffinePhaseMatrix | ConferenceMatrix
    provenance: str

    @property
    def kind(self) -> str:
        if isinstance(self.object, ConferenceMatrix):
            return "conference"
        return "family" if self.object.param_count else "hadamard"


def _sylvester(m):
    out = fourier(2)
    for _ in range(m - 1):
        out = kron(out, fourier(2))
    return out


def _d6():
    D, _ = dephase(conference_to_hadamard(paley_conference(5)))
    return D


_BUILDERS = {
    "H12": (lambda: _grid(_H12), "real Hadamard matrix of order 12, transcribed"),
    "H12_7": (lambda: _family(_H12, _R_H12, "abcdefg"),
              "7-parameter affine family through H12, transcribed"),
    "D10": (lambda: _grid(_D10), "dephased symmetric-conference Hadamard matrix of order 10, transcribed"),
    "D10_3": (lambda: _family(_D10, _R_D10, "abc"),
              "3-parameter affine family through D10, transcribed"),
    "D14": (lambda: _grid(_D14), "dephased symmetric-conference Hadamard matrix of order 14, transcribed"),
    "D14_6": (lambda: _family(_D14, _R_D14, "abcdef"),
              "6-parameter affine family through D14, transcribed"),
    "H4": (lambda: _sylvester(2), "F2 (x) F2, generated"),
    "H8": (lambda: _sylvester(3), "F2 (x) F2 (x) F2, generated"),
    "H16": (lambda: _sylvester(4), "F2 tensor power 4, generated"),
    "D6": (_d6, "dephased I + iC for the Paley conference matrix with q = 5, generated"),
    "C6": (lambda: paley_conference(5), "Paley conference matrix with q = 5, generated"),
}

_FOURIER_RE = re.compile(r"^F([1-9]\d*)$")
FOURIER_MAX = 64


def _verify(entry: CatalogueEntry) -> CatalogueEntry:
    obj = entry.object
    if entry.kind == "hadamard" and not is_hadamard(obj):
        raise VerificationError(f"catalogue entry {entry.id} is not Hadamard")
    if entry.kind == "family":
        check = family_is_hadamard(obj)
        if not check:
            raise VerificationError(f"catalogue entry {entry.id} fails at rows {check.rows}", check)
    # conference matrices validate themselves on construction
    return entry


@lru_cache(maxsize=None)
def get(id: str) -> CatalogueEntry:
    if fixture_digest() != FIXTURE_SHA256:
        raise VerificationError("embedded fixture text does not match its checksum")
    if id in _BUILDERS:
        build, provenance = _BUILDERS[id]
        return _verify(CatalogueEntry(id, build(), provenance))
    m = _FOURIER_RE.match(id)
    if m and int(m.group(1)) <= FOURIER_MAX:
        n = int(m.group(1))
        return _verify(CatalogueEntry(id, fourier(n), f"Fourier matrix of order {n}, generated"))
    raise KeyError(f"unknown catalogue id {id!r}; known: {', '.join(ids())}, F<N>")


def ids() -> list[str]:
    return list(_BUILDERS) + ["F2", "F3", "F4", "F6", "F12"]


def list_entries() -> list[tuple[str, str]]:
    """Listed ids with provenance; any ``F<N>`` up to ``FOURIER_MAX`` also loads."""
    return [(i, get(i).provenance) for i in ids()]


def families() -> list[str]:
    return [i for i in ids() if get(i).kind == "family"]


def matrices() -> list[str]:
    return [i for i in ids() if get(i).kind == "hadamard"]
