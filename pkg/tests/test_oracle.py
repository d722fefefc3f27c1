import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jointfold.alignio import PairedAlignment
from jointfold.compat import CompatibilityMasks
from jointfold.energy import EnergyModel
from jointfold.errors import TooLarge
from jointfold.jointstruct import JointStructure, validate
from jointfold.oracle import (Limits, brute_force, contact_region, enumerate_structures,
                              naive_enumerate, strand_partition_function, strand_structures)


def _keys(it):
    return sorted(js.key() for js in it)


# frozen counts of the full-mask ensembles (min_hairpin 3)
@pytest.mark.parametrize("n,m,count", [(2, 2, 2), (3, 3, 11), (4, 4, 54), (5, 3, 41),
                                       (6, 6, 888), (7, 5, 798), (8, 8, 14486)])
def test_full_mask_counts(n, m, count):
    assert sum(1 for _ in enumerate_structures(CompatibilityMasks.full(n, m))) == count


def test_two_by_two_ensemble():
    mk = CompatibilityMasks.full(2, 2)
    got = _keys(enumerate_structures(mk))
    assert got == [JointStructure.empty(2, 2).key(),
                   JointStructure(2, 2, (), (), ((1, 1), (2, 2))).key()]
    pa = PairedAlignment.from_strings([("GC", "CG")])
    ens = brute_force(mk, pa, EnergyModel.zero())
    assert ens.z == 2.0
    assert ens.p_ext[0, 0] == 0.5 and ens.p_ext[0, 1] == 0.0
    assert ens.hybrid_probs == {(1, 2, 1, 2): 0.5}


def test_blocked_masks_give_empty_structure_only():
    mk = CompatibilityMasks.empty(5, 4)
    ens = brute_force(mk, PairedAlignment.from_strings([("ACGUA", "ACGU")]), EnergyModel())
    assert ens.count == 1 and ens.z == 1.0


def test_frozen_energy_values():
    mk = CompatibilityMasks.full(6, 6)
    ens = brute_force(mk, PairedAlignment.from_strings([("GGGAAA", "CCCUUU")]), EnergyModel())
    assert ens.count == 888
    assert ens.z == pytest.approx(2391302.3412442436, rel=1e-12)
    pa = PairedAlignment.from_strings([("GGCAUC", "CCGUAG"), ("GGCA.C", "CUGUAG")])
    ens = brute_force(mk, pa, EnergyModel())
    assert ens.z == pytest.approx(36701.62483883198, rel=1e-12)
    assert ens.p_ext[0, 0] == pytest.approx(0.9309432656597522, abs=1e-12)
    assert ens.hybrid_probs[(1, 6, 1, 6)] == pytest.approx(0.7511576972942086, abs=1e-12)


def test_probabilities_are_normalised():
    mk = CompatibilityMasks.full(6, 5)
    ens = brute_force(mk, PairedAlignment.from_strings([("GGCAUC", "CCGUA")]), EnergyModel())
    assert sum(w for _, _, w in ens.structures) == pytest.approx(ens.z)
    # each position pairs at most once
    tot_r = ens.p_interior_r.sum(1) + ens.p_interior_r.sum(0) + ens.p_ext.sum(1)
    assert (tot_r <= 1 + 1e-12).all()
    assert 0 <= contact_region(ens, "R", 1, 6) <= 1


def _random_masks(rng, n, m, d):
    i, j = np.indices((n, n))
    ir = (rng.random((n, n)) < d) & (j - i > 3)
    i, j = np.indices((m, m))
    is_ = (rng.random((m, m)) < d) & (j - i > 3)
    return CompatibilityMasks(ir, is_, rng.random((n, m)) < d)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_pruned_enumeration_matches_generate_and_filter(seed):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(2, 7, 2)
    mk = _random_masks(rng, int(n), int(m), rng.uniform(0.2, 0.7))
    try:
        naive = _keys(naive_enumerate(mk, max_arcs=16))
    except TooLarge:
        return
    assert _keys(enumerate_structures(mk)) == naive


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_every_enumerated_structure_is_valid(seed):
    rng = np.random.default_rng(seed)
    mk = _random_masks(rng, 8, 7, 0.4)
    structs = list(enumerate_structures(mk))
    assert all(validate(js, mk).ok for js in structs)
    # no duplicates either
    assert len({js.key() for js in structs}) == len(structs)


def test_structure_cap_raises():
    with pytest.raises(TooLarge):
        list(enumerate_structures(CompatibilityMasks.full(8, 8), Limits(max_structures=100)))
    with pytest.raises(TooLarge):
        list(enumerate_structures(CompatibilityMasks.full(15, 2)))


def test_strand_structures_are_canonical():
    cm = CompatibilityMasks.full(12, 1).interior_r
    for arcs in strand_structures(cm):
        s = set(arcs)
        assert all((a + 1, b - 1) in s or (a - 1, b + 1) in s for a, b in arcs)


def test_strand_partition_function_frozen():
    pa = PairedAlignment.from_strings([("GGGAAACCC", "A")])
    cm = CompatibilityMasks.full(9, 1).interior_r
    assert strand_partition_function(pa.rmatrix, cm, EnergyModel()) == pytest.approx(
        2.299200063165155, rel=1e-12)
    # zero model counts canonical structures
    assert strand_partition_function(pa.rmatrix, cm, EnergyModel.zero()) == len(strand_structures(cm))
