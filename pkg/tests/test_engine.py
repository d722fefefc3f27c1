from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jointfold.alignio import PairedAlignment
from jointfold.compat import CompatibilityMasks
from jointfold.energy import EnergyModel
from jointfold.engine import (EngineConfig, contact_region_probability, hybrid_probabilities,
                              pair_probabilities, partition_function, sample, warmup)
from jointfold.errors import BoundsError, ConstraintError, NumericsError
from jointfold.instances import InstanceConfig, random_instance, random_masks
from jointfold.jointstruct import JointStructure, LoopKind, decompose_loops, validate
from jointfold.oracle import brute_force, contact_region, strand_partition_function

SMALL = InstanceConfig(n_range=(3, 9), m_range=(3, 9), max_structures=5000)


@pytest.fixture(scope="module", autouse=True)
def _compiled():
    warmup()


def _compare(pa, masks, em, tol=1e-9):
    ens = brute_force(masks, pa, em)
    t = partition_function(pa, masks, em)
    assert t.z == pytest.approx(ens.z, rel=tol)
    pm = pair_probabilities(t)
    for a, b in ((pm.p_interior_r, ens.p_interior_r), (pm.p_interior_s, ens.p_interior_s),
                 (pm.p_ext, ens.p_ext)):
        assert np.abs(a - b).max(initial=0.0) <= tol
    hp = hybrid_probabilities(t)
    for k in set(hp) | set(ens.hybrid_probs):
        assert abs(hp.get(k, 0.0) - ens.hybrid_probs.get(k, 0.0)) <= tol
    return t, ens


def test_blocked_masks():
    pa = PairedAlignment.from_strings([("GGGAAACCC", "GGGUUU")])
    t = partition_function(pa, CompatibilityMasks.empty(9, 6), EnergyModel())
    assert t.z == 1.0 and t.free_energy == 0.0
    pm = pair_probabilities(t)
    assert not pm.p_ext.any() and not pm.p_interior_r.any()
    assert all(js == JointStructure.empty(9, 6) for js in sample(t, 20, 1))


def test_two_by_two_fixture():
    pa = PairedAlignment.from_strings([("GC", "CG")])
    t = partition_function(pa, CompatibilityMasks.full(2, 2), EnergyModel.zero())
    assert t.z == 2.0
    pm = pair_probabilities(t)
    assert pm.p_ext == pytest.approx(np.array([[0.5, 0.0], [0.0, 0.5]]), abs=1e-15)
    assert hybrid_probabilities(t) == pytest.approx({(1, 2, 1, 2): 0.5})


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_counts_match_enumeration(seed):
    inst = random_instance(np.random.default_rng(seed), SMALL)
    t = partition_function(inst.pa, inst.masks, EnergyModel.zero())
    assert t.z == inst.count


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_default_model_matches_enumeration(seed):
    inst = random_instance(np.random.default_rng(seed), SMALL)
    _compare(inst.pa, inst.masks, EnergyModel())


def test_short_hairpins_and_multiloops():
    rng = np.random.default_rng(5)
    pa = PairedAlignment.from_strings([("GGCGAUCGCCAU", "GCUAG"), ("GGCGAUUGCCAA", "GCUAU")])
    masks = CompatibilityMasks.full(12, 5, min_hairpin=0)
    masks.exterior &= rng.random((12, 5)) < 0.4
    t, ens = _compare(pa, masks, EnergyModel())
    kinds = {lp.kind for js, _, _ in ens.structures for lp in decompose_loops(js)}
    assert LoopKind.Multi in kinds and LoopKind.Kissing in kinds


def test_contact_region_is_exact():
    rng = np.random.default_rng(11)
    for _ in range(5):
        inst = random_instance(rng, SMALL, constrained=False)
        t = partition_function(inst.pa, inst.masks, EnergyModel())
        ens = brute_force(inst.masks, inst.pa, EnergyModel())
        for strand, length in (("R", inst.pa.n), ("S", inst.pa.mlen)):
            a = int(rng.integers(1, length + 1))
            b = int(rng.integers(a, length + 1))
            assert contact_region_probability(t, strand, a, b) == pytest.approx(
                contact_region(ens, strand, a, b), abs=1e-9)
    with pytest.raises(BoundsError):
        contact_region_probability(t, "R", 0, 1)


def test_sampler_matches_boltzmann():
    rng = np.random.default_rng(2)
    for _ in range(3):
        inst = random_instance(rng, InstanceConfig(n_range=(4, 7), m_range=(4, 7),
                                                 max_structures=40, min_structures=5))
        em = EnergyModel()
        ens = brute_force(inst.masks, inst.pa, em)
        t = partition_function(inst.pa, inst.masks, em)
        draws = sample(t, 20000, seed=7)
        cnt = Counter(js.key() for js in draws)
        allowed = {js.key() for js, _, _ in ens.structures}
        assert set(cnt) <= allowed
        for js, _, w in ens.structures:
            p = w / ens.z
            sd = np.sqrt(p * (1 - p) / 20000)
            assert abs(cnt[js.key()] / 20000 - p) <= 5 * sd + 1e-12
        assert all(validate(js, inst.masks).ok for js in draws)


def test_sampler_is_deterministic():
    inst = random_instance(np.random.default_rng(9), SMALL)
    t = partition_function(inst.pa, inst.masks, EnergyModel())
    a = [js.key() for js in sample(t, 500, seed=3)]
    assert a == [js.key() for js in sample(t, 500, seed=3)]
    if inst.count > 3:
        assert a != [js.key() for js in sample(t, 500, seed=4)]


@pytest.mark.parametrize("scale", [0.5, 1.7, 1e6])
def test_scaling_leaves_results_unchanged(scale):
    inst = random_instance(np.random.default_rng(21), SMALL)
    em = EnergyModel()
    a = partition_function(inst.pa, inst.masks, em)
    b = partition_function(inst.pa, inst.masks, em, EngineConfig(scale=scale))
    assert b.z == pytest.approx(a.z, rel=1e-12)
    pa_, pb = pair_probabilities(a), pair_probabilities(b)
    assert np.abs(pa_.p_ext - pb.p_ext).max(initial=0) < 1e-12
    assert np.abs(pa_.p_interior_r - pb.p_interior_r).max(initial=0) < 1e-12


def test_factorisation_without_exterior_arcs():
    rng = np.random.default_rng(4)
    for n, m in ((14, 11), (18, 16)):
        pa = PairedAlignment.from_strings([("".join(rng.choice(list("ACGU"), n)),
                                            "".join(rng.choice(list("ACGU"), m)))
                                           for _ in range(2)])
        masks = random_masks(rng, n, m, 0.8)
        masks.exterior[:] = False
        em = EnergyModel()
        z = partition_function(pa, masks, em).z
        zr = strand_partition_function(pa.rmatrix, masks.interior_r, em)
        zs = strand_partition_function(pa.smatrix, masks.interior_s, em)
        assert z == pytest.approx(zr * zs, rel=1e-12)


def test_errors():
    pa = PairedAlignment.from_strings([("GGGG", "CCCC")])
    with pytest.raises(BoundsError):
        partition_function(pa, CompatibilityMasks.full(3, 4), EnergyModel())
    masks = CompatibilityMasks.empty(4, 4)
    masks.must_pair_r[0] = True
    with pytest.raises(ConstraintError):
        partition_function(pa, masks, EnergyModel())
    big = PairedAlignment.from_strings([("G" * 12, "C" * 12)])
    with pytest.raises(NumericsError):
        partition_function(big, CompatibilityMasks.full(12, 12),
                           EnergyModel().with_(hybrid_init=-300.0))
    with pytest.raises(ValueError):
        EngineConfig(scale=0)


def test_named_tables():
    pa = PairedAlignment.from_strings([("GGGAAACCC", "GGGUUU")])
    t = partition_function(pa, CompatibilityMasks.full(9, 6), EnergyModel())
    assert float(t.table("Z")) == t.z
    assert t.table("QP_R").shape == (11, 11) and t.table("QP_S").shape == (8, 8)
    assert t.table("RL").shape == (11, 8) and t.table("HY").shape == (11, 11, 8, 8)


def test_two_by_two_sampling_and_region():
    pa = PairedAlignment.from_strings([("GC", "CG")])
    t = partition_function(pa, CompatibilityMasks.full(2, 2), EnergyModel.zero())
    n = 100_000
    freq = sum(bool(js.ext) for js in sample(t, n, seed=12)) / n
    assert abs(freq - 0.5) <= 3 * np.sqrt(0.25 / n)
    assert contact_region_probability(t, "R", 1, 1) == pytest.approx(0.5, abs=1e-12)
    blocked = partition_function(pa, CompatibilityMasks.empty(2, 2), EnergyModel())
    assert contact_region_probability(blocked, "S", 1, 2) == 0.0


def test_forced_exterior_pair_in_every_sample():
    from jointfold.compat import ConstraintSet, apply_constraints
    pa = PairedAlignment.from_strings([("GGAUCC", "CCUAGG")])
    masks = apply_constraints(CompatibilityMasks.full(6, 6),
                              ConstraintSet("." * 6, "." * 6, forced_ext=((1, 1),)))
    t = partition_function(pa, masks, EnergyModel())
    assert all((1, 1) in js.ext for js in sample(t, 2000, seed=1))
