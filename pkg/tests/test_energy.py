import numpy as np
import pytest
from hypothesis import given, strategies as st

from jointfold.alignio import PairedAlignment
from jointfold.compat import PAIRS, FoldParams, score_masks
from jointfold.energy import EnergyModel, load_params, loop_energy, structure_energy
from jointfold.errors import InvalidStructure, ParamsError
from jointfold.jointstruct import JointStructure, Loop, LoopKind, decompose_loops
from jointfold.oracle import enumerate_structures

GC, GU = PAIRS.index("GC"), PAIRS.index("GU")


def J(n, m, r=(), s=(), e=()):
    return JointStructure(n, m, tuple(r), tuple(s), tuple(e))


def test_stack_lookup():
    em = EnergyModel()
    pa = PairedAlignment.from_strings([("GGAAAACC", "A")])
    lp = Loop(LoopKind.Stack, "R", ((1, 8), (2, 7)))
    assert loop_energy(lp, pa, em).value == em.stack[GC, GC]


def test_interior_loop_terminal_terms():
    em = EnergyModel()
    rows = [("GAGAAACAC", "A"), ("GAGAAAUAU", "A"), ("GA.AAA.AC", "A")]
    pa = PairedAlignment.from_strings(rows)
    lp = Loop(LoopKind.Interior, "R", ((1, 9), (3, 7)), unpaired_r=(2, 8))
    per = loop_energy(lp, pa, em).per_row
    base = em.interior_base + 2 * em.interior_per_nt
    assert per[0] == pytest.approx(base + 2 * em.terminal[GC])
    assert per[1] == pytest.approx(base + 2 * em.terminal[GU])
    assert per[2] == pytest.approx(base)


def test_hairpin_counts_gaps():
    em = EnergyModel()
    pa = PairedAlignment.from_strings([("GAA.AAC", "A"), ("UAAAAAA", "A")])
    lp = Loop(LoopKind.Hairpin, "R", ((1, 7),))
    assert loop_energy(lp, pa, em).value == pytest.approx(em.hairpin_base + 5 * em.hairpin_per_nt)


def test_empty_structure_costs_nothing():
    pa = PairedAlignment.from_strings([("ACGU", "ACGU")])
    assert structure_energy(J(4, 4), pa, EnergyModel()) == 0.0


def test_stacked_hairpin_energy():
    em = EnergyModel()
    pa = PairedAlignment.from_strings([("GGAAAAACC", "A")])
    e = structure_energy(J(9, 1, r=[(1, 9), (2, 8)]), pa, em)
    assert e == pytest.approx(em.stack[GC, GC] + em.hairpin_base + 5 * em.hairpin_per_nt)


def test_average_over_rows():
    em = EnergyModel()
    js = J(9, 4, r=[(1, 9), (2, 8)], e=[(4, 1), (5, 2)])
    r1, r2 = ("GGAAUGACC", "CAGA"), ("GUAGCAAUC", "UCGG")
    e1 = structure_energy(js, PairedAlignment.from_strings([r1]), em)
    e2 = structure_energy(js, PairedAlignment.from_strings([r2]), em)
    assert structure_energy(js, PairedAlignment.from_strings([r1, r2]), em) == pytest.approx((e1 + e2) / 2)


def test_length_mismatch():
    with pytest.raises(InvalidStructure):
        structure_energy(J(3, 3), PairedAlignment.from_strings([("ACGU", "ACG")]), EnergyModel())


def test_load_params():
    assert load_params("").listing() == EnergyModel().listing()
    em = load_params("rt=1.0\n")
    assert em.rt == 1.0 and em.hairpin_base == EnergyModel().hairpin_base
    em = load_params("stack.GC.AU = -9\nterminal.GU=0.25\nphi1=2\n")
    assert em.stack[GC, PAIRS.index("AU")] == -9 and em.terminal[GU] == 0.25
    for bad in ("rt=0", "rt=-1", "nonsense=1", "hairpin_base", "stack.GX.AU=1", "rt=abc"):
        with pytest.raises(ParamsError):
            load_params(bad)


def test_listing_round_trip():
    em = EnergyModel().with_(kissing_penalty=1.5)
    assert load_params(em.listing()).listing() == em.listing()


def _ensemble(seed, n=9, m=8):
    rng = np.random.default_rng(seed)
    rows = [("".join(rng.choice(list("ACGU."), n)), "".join(rng.choice(list("ACGU."), m)))
            for _ in range(3)]
    pa = PairedAlignment.from_strings(rows)
    mk = score_masks(pa, FoldParams(bstar_r=-1, bstar_s=-1, bstar_ext=-1))
    mk.exterior &= rng.random(mk.exterior.shape) < 0.5
    structs = []
    for js in enumerate_structures(mk):
        structs.append(js)
        if len(structs) == 400:
            break
    return pa, structs


@pytest.mark.parametrize("seed", range(3))
def test_zero_model_and_row_permutation(seed):
    pa, structs = _ensemble(seed)
    rows = pa.row_strings()
    perm = PairedAlignment.from_strings(rows[::-1])
    em, zero = EnergyModel(), EnergyModel.zero()
    for js in structs:
        assert structure_energy(js, pa, zero) == 0.0
        assert structure_energy(js, perm, em) == pytest.approx(structure_energy(js, pa, em), abs=1e-12)


@given(st.floats(-2, 2))
def test_base_shift(c):
    # gap-free single sequence: every arc is a valid pair, so stacks shift too
    pa = PairedAlignment.from_strings([("GGGACAUCCC", "GGAUGU")])
    mk = score_masks(pa)
    em = EnergyModel()
    sh = em.with_(hairpin_base=em.hairpin_base + c, interior_base=em.interior_base + c,
                  bulge_base=em.bulge_base + c, multi_close=em.multi_close + c,
                  hybrid_init=em.hybrid_init + c, kissing_penalty=em.kissing_penalty + c,
                  stack=em.stack + c)
    for js in list(enumerate_structures(mk))[:300]:
        loops = decompose_loops(js)
        k = sum(1 for lp in loops if lp.kind != LoopKind.External)
        k += sum(len(lp.closing) - 1 for lp in loops if lp.kind == LoopKind.Hybrid)
        assert structure_energy(js, pa, sh) == pytest.approx(structure_energy(js, pa, em) + c * k,
                                                             abs=1e-9)
