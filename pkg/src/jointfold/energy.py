"""Row-averaged loop energies for joint structures.

Every loop gets a size term that depends only on alignment positions (gaps
count as bases) and, for stacks, bulges and interior loops, a row-dependent
part looked up from that row's nucleotides. A stack or terminal term whose
pair is not a WC/GU pair in that row contributes 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

import numpy as np

from .alignio import PairedAlignment
from .compat import PAIR_TYPE, PAIRS, FoldParams
from .errors import InvalidStructure, ParamsError
from .jointstruct import JointStructure, Loop, LoopKind, decompose_loops
from .kvfile import as_float, read_kv


def _default_stack() -> np.ndarray:
    st = np.full((6, 6), -2.0)
    for a, p in enumerate(PAIRS):
        for b, q in enumerate(PAIRS):
            if "GU" in (p, q) or "UG" in (p, q):
                st[a, b] = -1.3
    return st


def _default_terminal() -> np.ndarray:
    return np.array([0.5 if p not in ("GC", "CG") else 0.0 for p in PAIRS])


_SCALARS = ("hairpin_base", "hairpin_per_nt", "interior_base", "interior_per_nt",
            "bulge_base", "bulge_per_nt", "multi_close", "multi_branch", "multi_unpaired",
            "hybrid_init", "kissing_penalty", "rt")


@dataclass(frozen=True, eq=False)
class EnergyModel:
    """Parameters in kcal/mol; Boltzmann weights are exp(-F/rt)."""
    stack: np.ndarray = field(default_factory=_default_stack)
    terminal: np.ndarray = field(default_factory=_default_terminal)
    hairpin_base: float = 3.0
    hairpin_per_nt: float = 0.3
    interior_base: float = 1.0
    interior_per_nt: float = 0.3
    bulge_base: float = 2.0
    bulge_per_nt: float = 0.3
    multi_close: float = 3.4
    multi_branch: float = 0.4
    multi_unpaired: float = 0.1
    hybrid_init: float = 1.0
    kissing_penalty: float = 2.0
    rt: float = 0.6163

    def __post_init__(self):
        st = np.array(self.stack, dtype=np.float64)
        te = np.array(self.terminal, dtype=np.float64)
        if st.shape != (6, 6) or te.shape != (6,):
            raise ParamsError("stack must be 6x6 and terminal of length 6")
        if not (np.all(np.isfinite(st)) and np.all(np.isfinite(te))):
            raise ParamsError("non-finite table entry")
        object.__setattr__(self, "stack", st)
        object.__setattr__(self, "terminal", te)
        for name in _SCALARS:
            if not np.isfinite(getattr(self, name)):
                raise ParamsError(f"{name} is not finite")
        if not self.rt > 0:
            raise ParamsError("rt must be positive")

    @classmethod
    def zero(cls, rt: float = 0.6163) -> "EnergyModel":
        """All energies 0, so every structure has weight 1 (counting mode)."""
        return cls(np.zeros((6, 6)), np.zeros(6), **{k: 0.0 for k in _SCALARS[:-1]}, rt=rt)

    def with_(self, **kw) -> "EnergyModel":
        return replace(self, **kw)

    def listing(self) -> str:
        """Full parameter listing in load_params syntax."""
        lines = [f"{k}={float(getattr(self, k))!r}" for k in _SCALARS]
        lines += [f"stack.{p}.{q}={float(self.stack[a, b])!r}"
                  for a, p in enumerate(PAIRS) for b, q in enumerate(PAIRS)]
        lines += [f"terminal.{p}={float(self.terminal[a])!r}" for a, p in enumerate(PAIRS)]
        return "\n".join(lines) + "\n"


def load_params(source=None) -> EnergyModel:
    """Energy model from a key=value file. Fold-parameter keys are skipped."""
    kv = read_kv(source)
    fold_keys = {f.name for f in fields(FoldParams)}
    stack = _default_stack()
    term = _default_terminal()
    scal = {}
    for key, val in kv.items():
        if key in fold_keys:
            continue
        x = as_float(key, val)
        parts = key.split(".")
        if key in _SCALARS:
            scal[key] = x
        elif parts[0] == "stack" and len(parts) == 3 and parts[1] in PAIRS and parts[2] in PAIRS:
            stack[PAIRS.index(parts[1]), PAIRS.index(parts[2])] = x
        elif parts[0] == "terminal" and len(parts) == 2 and parts[1] in PAIRS:
            term[PAIRS.index(parts[1])] = x
        else:
            raise ParamsError(f"unknown parameter {key!r}")
    return EnergyModel(stack, term, **scal)


@dataclass(frozen=True)
class LoopEnergy:
    value: float
    per_row: tuple


def _ptype(a, b) -> int:
    return int(PAIR_TYPE[int(a), int(b)])


def _stack_term(p1, p2, em):
    return em.stack[p1, p2] if p1 >= 0 and p2 >= 0 else 0.0


def _terminal_term(p1, p2, em):
    return em.terminal[p1] + em.terminal[p2] if p1 >= 0 and p2 >= 0 else 0.0


def _two_pair_loop(size_a, size_b, p1, p2, em):
    if size_a == 0 and size_b == 0:
        return _stack_term(p1, p2, em)
    if size_a == 0 or size_b == 0:
        base = em.bulge_base + em.bulge_per_nt * (size_a + size_b)
    else:
        base = em.interior_base + em.interior_per_nt * (size_a + size_b)
    return base + _terminal_term(p1, p2, em)


def loop_energy_row(loop: Loop, pa: PairedAlignment, row: int, em: EnergyModel) -> float:
    if not 0 <= row < pa.m:
        raise IndexError(f"row {row} out of range")
    k = loop.kind
    if k == LoopKind.External:
        return 0.0
    if k == LoopKind.Kissing:
        return em.kissing_penalty
    if k == LoopKind.Hybrid:
        r, s = pa.rmatrix[row], pa.smatrix[row]
        e = em.hybrid_init
        for (i, h), (j, l) in zip(loop.closing, loop.closing[1:]):
            p1 = _ptype(r[i - 1], s[h - 1])
            p2 = _ptype(r[j - 1], s[l - 1])
            e += _two_pair_loop(j - i - 1, l - h - 1, p1, p2, em)
        return e
    seq = pa.rmatrix[row] if loop.strand == "R" else pa.smatrix[row]
    (a, b) = loop.closing[0]
    inner = loop.closing[1:]
    if k == LoopKind.Hairpin:
        return em.hairpin_base + em.hairpin_per_nt * (b - a - 1)
    if k == LoopKind.Multi:
        nunp = len(loop.unpaired_r) + len(loop.unpaired_s)
        return em.multi_close + em.multi_branch * len(inner) + em.multi_unpaired * nunp
    (c, d) = inner[0]
    p1 = _ptype(seq[a - 1], seq[b - 1])
    p2 = _ptype(seq[c - 1], seq[d - 1])
    return _two_pair_loop(c - a - 1, b - d - 1, p1, p2, em)


def loop_energy(loop: Loop, pa: PairedAlignment, em: EnergyModel) -> LoopEnergy:
    per = tuple(loop_energy_row(loop, pa, r, em) for r in range(pa.m))
    return LoopEnergy(sum(per) / pa.m, per)


def structure_energy(js: JointStructure, pa: PairedAlignment, em: EnergyModel) -> float:
    """Sum over loops of the row-averaged loop energy."""
    if js.n != pa.n or js.m_len != pa.mlen:
        raise InvalidStructure("structure and alignment lengths differ")
    return float(sum(loop_energy(lp, pa, em).value for lp in decompose_loops(js)))
