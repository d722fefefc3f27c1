"""Random small instances for oracle comparisons and benchmarks."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alignio import PairedAlignment
from .compat import CompatibilityMasks, ConstraintSet, FoldParams, apply_constraints, build_masks
from .errors import ConstraintError, TooLarge
from .oracle import Limits, enumerate_structures


@dataclass(frozen=True)
class InstanceConfig:
    n_range: tuple = (4, 12)
    m_range: tuple = (4, 12)
    density: tuple = (0.3, 0.7)
    rows: tuple = (1, 3)
    min_hairpin: int = 3
    gap_rate: float = 0.08
    symbol_rate: float = 0.12  # chance a position carries a constraint symbol
    forced_rate: float = 0.3  # chance of one forced pair per instance
    forced_kinds: tuple = ("R", "S", "E")
    max_structures: int | None = 20000  # oracle budget; larger draws are redrawn
    min_structures: int = 1


@dataclass
class Instance:
    pa: PairedAlignment
    masks: CompatibilityMasks
    cs: ConstraintSet
    count: int = -1


def random_sequence(rng, length, gap_rate):
    p = np.full(5, (1 - gap_rate) / 4)
    p[4] = gap_rate
    s = "".join(rng.choice(list("ACGU."), size=length, p=p))
    return s


def random_masks(rng, n, m, density, min_hairpin=3) -> CompatibilityMasks:
    i, j = np.indices((n, n))
    ir = (rng.random((n, n)) < density) & ((j - i) > min_hairpin)
    i, j = np.indices((m, m))
    is_ = (rng.random((m, m)) < density) & ((j - i) > min_hairpin)
    ex = rng.random((n, m)) < density
    return CompatibilityMasks(ir, is_, ex)


def random_constraints(rng, masks: CompatibilityMasks, symbol_rate: float, forced_rate: float,
                       symbols: str = "x-^*", forced_kinds=("R", "S", "E")) -> ConstraintSet:
    n, m = masks.n, masks.mlen

    def line(k):
        return "".join(rng.choice(list(symbols)) if rng.random() < symbol_rate else "."
                       for _ in range(k))

    r, s = line(n), line(m)
    fr, fs, fe = (), (), ()
    if rng.random() < forced_rate:
        kind = "RSE".index(forced_kinds[rng.integers(len(forced_kinds))])
        src = (masks.interior_r, masks.interior_s, masks.exterior)[kind]
        cand = np.argwhere(src)
        if len(cand):
            a, b = cand[rng.integers(len(cand))] + 1
            pair = ((int(a), int(b)),)
            fr, fs, fe = [(pair if k == kind else ()) for k in range(3)]
            # a forced position carries no other symbol
            clear_r = {a, b} if kind == 0 else {a} if kind == 2 else set()
            clear_s = {a, b} if kind == 1 else {b} if kind == 2 else set()
            r = "".join("." if p + 1 in clear_r else c for p, c in enumerate(r))
            s = "".join("." if p + 1 in clear_s else c for p, c in enumerate(s))
    return ConstraintSet(r, s, fr, fs, fe)


def count_structures(masks, cap):
    c = 0
    for _ in enumerate_structures(masks, Limits(max_structures=cap)):
        c += 1
    return c


def random_instance(rng, cfg: InstanceConfig = InstanceConfig(), constrained: bool = True,
                    symbols: str = "x-^*") -> Instance:
    """Draw until the instance is satisfiable and within the oracle budget."""
    while True:
        n = int(rng.integers(cfg.n_range[0], cfg.n_range[1] + 1))
        m = int(rng.integers(cfg.m_range[0], cfg.m_range[1] + 1))
        d = float(rng.uniform(*cfg.density))
        k = int(rng.integers(cfg.rows[0], cfg.rows[1] + 1))
        pa = PairedAlignment.from_strings([(random_sequence(rng, n, cfg.gap_rate),
                                            random_sequence(rng, m, cfg.gap_rate))
                                           for _ in range(k)])
        base = random_masks(rng, n, m, d, cfg.min_hairpin)
        if constrained:
            cs = random_constraints(rng, base, cfg.symbol_rate, cfg.forced_rate, symbols,
                                    cfg.forced_kinds)
            try:
                masks = apply_constraints(base, cs)
            except ConstraintError:
                continue
        else:
            cs, masks = ConstraintSet.empty(n, m), base
        try:
            cnt = count_structures(masks, cfg.max_structures)
        except TooLarge:
            continue
        if cnt < cfg.min_structures:
            continue
        return Instance(pa, masks, cs, cnt)


def homolog_alignment(rng, n, m, rows=4, mutation=0.1) -> PairedAlignment:
    """Mutated copies of two random sequences: a benchmark-style alignment pair."""
    r0 = random_sequence(rng, n, 0.0)
    s0 = random_sequence(rng, m, 0.0)

    def mut(x):
        return "".join(rng.choice(list("ACGU")) if rng.random() < mutation else c for c in x)

    return PairedAlignment.from_strings([(mut(r0), mut(s0)) for _ in range(rows)])


def benchmark_case(seed, n, m, rows=4):
    rng = np.random.default_rng(seed)
    pa = homolog_alignment(rng, n, m, rows)
    return pa, build_masks(pa, FoldParams())
