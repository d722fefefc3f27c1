"""Public entry points of the dynamic programming engine."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..alignio import PairedAlignment
from ..compat import CompatibilityMasks
from ..energy import EnergyModel
from ..errors import BoundsError, ConstraintError, NumericsError
from ..jointstruct import JointStructure
from . import kernels
from .layout import (HY, NAMES, QH_R, QP_R, RL, STRAND_SHIFT, TH, TP, VH, VP, XH, XP, YH, YP, ZZ, F,
                     geometry, joint_view, strand_view)
from .weights import Weights, build_weights


@dataclass(frozen=True)
class EngineConfig:
    scale: float = 1.0  # per-position scaling constant; 1 disables scaling

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError("scale must be a positive finite number")


@dataclass
class InsideTables:
    pa: PairedAlignment
    masks: CompatibilityMasks
    em: EnergyModel
    config: EngineConfig
    geom: np.ndarray
    weights: Weights
    values: np.ndarray
    _outside: np.ndarray = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return int(self.geom[0])

    @property
    def mlen(self) -> int:
        return int(self.geom[1])

    @property
    def z_scaled(self) -> float:
        return float(self.values[self.geom[4 + ZZ]])

    @property
    def log_z(self) -> float:
        return math.log(self.z_scaled) + (self.n + self.mlen) * math.log(self.config.scale)

    @property
    def z(self) -> float:
        if self.config.scale == 1.0:
            return self.z_scaled
        return math.exp(self.log_z)

    @property
    def free_energy(self) -> float:
        return -self.em.rt * self.log_z

    def table(self, name: str) -> np.ndarray:
        """Named table as an array view (strand tables and RL 2D, joint tables 4D, Z 0D)."""
        t = NAMES.index(name)
        g = self.geom
        if t < 2 * STRAND_SHIFT:
            return strand_view(self.values, g, t)
        if t == RL:
            off = int(g[4 + RL])
            return self.values[off:off + g[2] * g[3]].reshape(g[2], g[3])
        if t == ZZ:
            return self.values[g[4 + ZZ]:g[4 + ZZ] + 1].reshape(())
        return joint_view(self.values, g, t)

    def outside(self) -> np.ndarray:
        if self._outside is None:
            self._outside = kernels.fill_outside(self.values, self.geom,
                                                 self.weights.as_tuple())
        return self._outside


@dataclass
class ProbMatrices:
    p_interior_r: np.ndarray
    p_interior_s: np.ndarray
    p_ext: np.ndarray


def partition_function(pa: PairedAlignment, masks: CompatibilityMasks, em: EnergyModel,
                       config: EngineConfig = EngineConfig()) -> InsideTables:
    """Fill all inside tables; ``.z`` is the partition function."""
    if pa.n != masks.n or pa.mlen != masks.mlen:
        raise BoundsError(f"alignment is {pa.n}x{pa.mlen} but masks are {masks.n}x{masks.mlen}")
    w = build_weights(pa.rmatrix, pa.smatrix, masks, em, config.scale)
    g = geometry(pa.n, pa.mlen)
    vals = kernels.fill_inside(g, w.as_tuple())
    tabs = InsideTables(pa, masks, em, config, g, w, vals)
    z = tabs.z_scaled
    if not math.isfinite(z):
        raise NumericsError("partition function overflowed; try a scale above 1")
    if z <= 0.0:
        if np.any(masks.must_pair_r) or np.any(masks.must_pair_s):
            raise ConstraintError("constraints admit no structure")
        raise NumericsError("partition function underflowed; try a scale below 1")
    return tabs


def _cell_probs(t: InsideTables) -> np.ndarray:
    return t.values * t.outside() / t.z_scaled


def pair_probabilities(t: InsideTables) -> ProbMatrices:
    p = _cell_probs(t)
    g = t.geom
    n, m = t.n, t.mlen
    pr = strand_view(p, g, QP_R) + strand_view(p, g, QH_R)
    ps = strand_view(p, g, QP_R + STRAND_SHIFT) + strand_view(p, g, QH_R + STRAND_SHIFT)
    for tid in (VP, VH, XP, XH):
        pr = pr + joint_view(p, g, tid).sum(axis=(2, 3))
    for tid in (TP, TH, YP, YH):
        ps = ps + joint_view(p, g, tid).sum(axis=(0, 1))
    pe = joint_view(p, g, F).sum(axis=(1, 3))
    return ProbMatrices(np.ascontiguousarray(pr[1:n + 1, 1:n + 1]),
                        np.ascontiguousarray(ps[1:m + 1, 1:m + 1]),
                        np.ascontiguousarray(pe[1:n + 1, 1:m + 1]))


def hybrid_probabilities(t: InsideTables) -> dict:
    """Map (i, j, h, l) -> probability of the maximal hybrid with those boundaries."""
    hy = joint_view(_cell_probs(t), t.geom, HY)
    out = {}
    for i, j, h, l in zip(*np.nonzero(hy)):
        out[(int(i), int(j), int(h), int(l))] = float(hy[i, j, h, l])
    return out


def contact_region_probability(t: InsideTables, strand: str, a: int, b: int) -> float:
    """Probability that some hybrid's span on the strand intersects [a, b].

    Exact: one minus the relative weight of structures with no such hybrid.
    """
    length = t.n if strand == "R" else t.mlen
    if strand not in ("R", "S"):
        raise ValueError("strand must be 'R' or 'S'")
    if not (1 <= a <= b <= length):
        raise BoundsError(f"region [{a},{b}] outside 1..{length}")
    reg = np.array([1 if strand == "R" else 2, a, b], dtype=np.int64)
    vals = kernels.fill_inside(t.geom, t.weights.as_tuple(reg))
    z0 = vals[t.geom[4 + ZZ]]
    return float(max(0.0, 1.0 - z0 / t.z_scaled))


def sample(t: InsideTables, n: int, seed: int = 0) -> list[JointStructure]:
    """n independent Boltzmann-distributed structures; deterministic in seed."""
    if n < 1:
        raise ValueError("n must be at least 1")
    arcs, counts = kernels.sample_many(t.values, t.geom, t.weights.as_tuple(), int(n),
                                       int(seed) % (2 ** 32))
    return [_to_structure(arcs[s, :counts[s]], t.n, t.mlen) for s in range(n)]


def _to_structure(rows: np.ndarray, n: int, m: int) -> JointStructure:
    r, s, e = [], [], []
    for kind, a, b in rows:
        (r if kind == kernels.ARC_R else s if kind == kernels.ARC_S else e).append((a, b))
    return JointStructure(n, m, r, s, e)


def warmup() -> None:
    """Compile the kernels once on a tiny instance."""
    from ..alignio import PairedAlignment as PA
    pa = PA.from_strings([("GGGGAAACCCC", "GGGGAAACCCC")])
    masks = CompatibilityMasks.full(11, 11)
    t = partition_function(pa, masks, EnergyModel())
    pair_probabilities(t)
    sample(t, 2, 0)
    contact_region_probability(t, "R", 1, 2)
