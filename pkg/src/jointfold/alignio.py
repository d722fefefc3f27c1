"""Alignment parsing, species pairing and consensus.

Symbols are stored as uint8 codes so that the numba kernels can index
lookup tables directly: A=0, C=1, G=2, U=3, gap=4.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, MissingSpecies, UnmatchedSpecies

ALPHABET = "ACGU."
GAP = 4
_CODE = {c: k for k, c in enumerate(ALPHABET)}


class Orientation(enum.Enum):
    FivePrimeToThreePrime = "5to3"
    ThreePrimeToFivePrime = "3to5"


@dataclass(frozen=True)
class MsaRow:
    name: str
    species: str
    symbols: str


@dataclass(frozen=True)
class Msa:
    rows: tuple[MsaRow, ...]
    width: int
    orientation: Orientation = Orientation.FivePrimeToThreePrime

    def __post_init__(self):
        if not self.rows:
            raise FormatError("alignment has no rows")
        for r in self.rows:
            if len(r.symbols) != self.width:
                raise FormatError(
                    f"row {r.name!r} has length {len(r.symbols)}, expected {self.width}")
            bad = set(r.symbols) - set(ALPHABET)
            if bad:
                raise FormatError(f"row {r.name!r} has illegal symbols {sorted(bad)}")
        for c in range(self.width):
            if all(r.symbols[c] == "." for r in self.rows):
                raise FormatError(f"column {c + 1} consists only of gaps")

    @property
    def m(self) -> int:
        return len(self.rows)

    def reversed(self) -> "Msa":
        """Same alignment read in the opposite direction."""
        flip = {Orientation.FivePrimeToThreePrime: Orientation.ThreePrimeToFivePrime,
                Orientation.ThreePrimeToFivePrime: Orientation.FivePrimeToThreePrime}
        rows = tuple(MsaRow(r.name, r.species, r.symbols[::-1]) for r in self.rows)
        return Msa(rows, self.width, flip[self.orientation])


@dataclass(frozen=True)
class PairedAlignment:
    """The m interacting row pairs as code matrices (m x N and m x M)."""
    rmatrix: np.ndarray
    smatrix: np.ndarray
    provenance: tuple[tuple[int, int, str], ...] = field(default=())

    def __post_init__(self):
        if self.rmatrix.ndim != 2 or self.smatrix.ndim != 2:
            raise FormatError("matrices must be two-dimensional")
        if self.rmatrix.shape[0] != self.smatrix.shape[0]:
            raise FormatError("R and S matrices differ in row count")

    @property
    def m(self) -> int:
        return self.rmatrix.shape[0]

    @property
    def n(self) -> int:
        return self.rmatrix.shape[1]

    @property
    def mlen(self) -> int:
        return self.smatrix.shape[1]

    def row_strings(self) -> list[tuple[str, str]]:
        return [(decode(a), decode(b)) for a, b in zip(self.rmatrix, self.smatrix)]

    @classmethod
    def from_strings(cls, rows: list[tuple[str, str]]) -> "PairedAlignment":
        """Build directly from (R row, S row) strings; handy for tests."""
        if not rows:
            raise FormatError("no rows")
        r = np.array([encode(a) for a, _ in rows], dtype=np.uint8)
        s = np.array([encode(b) for _, b in rows], dtype=np.uint8)
        prov = tuple((k, k, "") for k in range(len(rows)))
        return cls(r, s, prov)


def normalize(seq: str) -> str:
    seq = seq.strip().upper().replace("T", "U").replace("-", ".")
    return seq


def encode(seq: str) -> np.ndarray:
    seq = normalize(seq)
    try:
        return np.array([_CODE[c] for c in seq], dtype=np.uint8)
    except KeyError as exc:
        raise FormatError(f"illegal symbol {exc.args[0]!r}") from None


def decode(codes) -> str:
    return "".join(ALPHABET[int(c)] for c in codes)


def _split_name(name: str) -> tuple[str, str]:
    if "|" not in name:
        raise MissingSpecies(f"record {name!r} carries no species tag")
    base, species = name.rsplit("|", 1)
    if not species:
        raise MissingSpecies(f"record {name!r} carries an empty species tag")
    return base, species


def _fasta_records(text: str):
    name, chunks = None, []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(";"):
            continue
        if line.startswith(">"):
            if name is not None:
                yield name, "".join(chunks)
            name, chunks = line[1:].strip(), []
        else:
            if name is None:
                raise FormatError("sequence data before first header")
            chunks.append(line)
    if name is not None:
        yield name, "".join(chunks)


def _clustal_records(text: str):
    lines = text.splitlines()
    if not lines or not lines[0].upper().startswith(("CLUSTAL", "MUSCLE")):
        raise FormatError("missing CLUSTAL header")
    seqs: dict[str, list[str]] = {}
    for line in lines[1:]:
        if not line.strip() or line.startswith((" ", "\t")):
            continue  # blank or conservation line
        parts = line.split()
        if len(parts) < 2:
            raise FormatError(f"malformed clustal line: {line!r}")
        if len(parts) == 3 and parts[2].isdigit():
            parts = parts[:2]
        if len(parts) != 2:
            raise FormatError(f"malformed clustal line: {line!r}")
        seqs.setdefault(parts[0], []).append(parts[1])
    for name, chunks in seqs.items():
        yield name, "".join(chunks)


def parse_msa(text: str, format: str = "fasta",
              orientation: Orientation = Orientation.FivePrimeToThreePrime) -> Msa:
    """Parse aligned FASTA or Clustal text into an :class:`Msa`."""
    fmt = format.lower()
    if fmt in ("fasta", "alignedfasta", "aligned_fasta"):
        recs = list(_fasta_records(text))
    elif fmt == "clustal":
        recs = list(_clustal_records(text))
    else:
        raise FormatError(f"unknown format {format!r}")
    if not recs:
        raise FormatError("no records found")
    rows = []
    for name, seq in recs:
        base, species = _split_name(name)
        seq = normalize(seq)
        bad = set(seq) - set(ALPHABET)
        if bad:
            raise FormatError(f"record {name!r} has illegal symbols {sorted(bad)}")
        rows.append(MsaRow(base, species, seq))
    widths = {len(r.symbols) for r in rows}
    if len(widths) != 1:
        raise FormatError(f"ragged alignment, row widths {sorted(widths)}")
    return Msa(tuple(rows), widths.pop(), orientation)


def serialize_msa(a: Msa) -> str:
    return "".join(f">{r.name}|{r.species}\n{r.symbols}\n" for r in a.rows)


def expand_interaction_pairs(r: Msa, s: Msa) -> PairedAlignment:
    """Cross all same-species rows of R and S.

    Rows are ordered by species (first appearance in R), then R row, then S row.
    """
    species_r = list(dict.fromkeys(row.species for row in r.rows))
    species_s = set(row.species for row in s.rows)
    lonely = [sp for sp in species_r if sp not in species_s]
    lonely += [sp for sp in dict.fromkeys(row.species for row in s.rows)
               if sp not in set(species_r)]
    if lonely:
        raise UnmatchedSpecies(f"species without a partner: {', '.join(lonely)}")
    rr, ss, prov = [], [], []
    for sp in species_r:
        for a, ra in enumerate(r.rows):
            if ra.species != sp:
                continue
            for b, sb in enumerate(s.rows):
                if sb.species == sp:
                    rr.append(encode(ra.symbols))
                    ss.append(encode(sb.symbols))
                    prov.append((a, b, sp))
    return PairedAlignment(np.array(rr, dtype=np.uint8), np.array(ss, dtype=np.uint8),
                           tuple(prov))


def consensus(a: Msa) -> str:
    """Column-wise majority symbol; ties go to the earlier of A, C, G, U, gap."""
    out = []
    for c in range(a.width):
        cnt = Counter(r.symbols[c] for r in a.rows)
        out.append(max(ALPHABET, key=lambda x: (cnt[x], -ALPHABET.index(x))))
    return "".join(out)
