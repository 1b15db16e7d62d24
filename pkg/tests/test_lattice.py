"""Combinatorial lattice criteria against the numeric oracle."""

import numpy as np
import pytest

from latticewitness import cli, criteria, lattice, linalg, pauli, states


def test_quadruple_census():
    quads = lattice.all_quadruples()
    assert len(quads) == 60
    assert len(set(quads)) == 60
    for q in quads:
        assert len(q) == 4
        assert lattice.is_special(q)
    # each lattice point lies in exactly 15 quadruples
    for p in lattice.ALL_POINTS:
        assert sum(p in q for q in quads) == 15
    q00 = lattice.quadruples_q00()
    assert len(q00) == 15
    for q in q00:
        assert (0, 0) in q


def test_q00_quadruples_pairwise_commute():
    # the words of a special quadruple through the origin commute pairwise
    for q in lattice.quadruples_q00():
        for i in range(4):
            for j in range(i + 1, 4):
                assert pauli.words_commute(q[i], q[j])


def test_nonzero_word_commutant_structure():
    # every nonzero two-qudit word commutes with exactly 6 other nonzero
    # words and lies in exactly 3 origin quadruples
    q00 = lattice.quadruples_q00()
    nonzero = [p for p in lattice.ALL_POINTS if p != (0, 0)]
    for w in nonzero:
        others = [v for v in nonzero if v != w and pauli.words_commute(w, v)]
        assert len(others) == 6
        assert sum(w in q for q in q00) == 3


def test_quadruple_states_separable_and_ppt():
    for q in lattice.all_quadruples()[:10]:
        mask = states.points_mask(q)
        assert lattice.ppt_combinatorial(mask)
        assert lattice.pt_min_eig(mask) > -1e-12
        cls = lattice.classify(mask)
        assert cls.tag == "Separable"
        assert cls.covering.multiplicity == 1


def test_combinatorial_ppt_matches_numeric_sample():
    rng = np.random.default_rng(7)
    for _ in range(300):
        mask = int(rng.integers(1, 1 << 16))
        comb = lattice.ppt_combinatorial(mask)
        assert comb == (lattice.pt_min_eig(mask) >= -1e-9)


def test_ppt_empty_subset_raises():
    with pytest.raises(lattice.EmptySubset):
        lattice.ppt_combinatorial(0)
    with pytest.raises(lattice.EmptySubset):
        lattice.classify(0)


def test_criteria_require_ppt():
    npt_mask = cli.example_mask("npt-5")
    assert not lattice.ppt_combinatorial(npt_mask)
    with pytest.raises(lattice.NotPpt):
        lattice.entangled_one_point(npt_mask)
    with pytest.raises(lattice.NotPpt):
        lattice.k_criterion(npt_mask)


def test_one_point_examples():
    for name in ("one-point-6", "one-point-8"):
        mask = cli.example_mask(name)
        assert lattice.entangled_one_point(mask) == (0, 0)
        assert lattice.pt_min_eig(mask) > -1e-9  # PPT yet entangled


def test_k_criterion_examples():
    mask10 = cli.example_mask("k-10")
    assert lattice.entangled_one_point(mask10) is None
    assert lattice.k_criterion(mask10) == (0, 0)
    mask11 = cli.example_mask("k-11")
    assert lattice.k_criterion(mask11) is not None


def test_special_subset_examples():
    # the 8-point grid: faithfully computed values (the state is NPT with
    # special point (2,2); see the one Q00 quadruple it contains)
    mask8 = cli.example_mask("special-8")
    assert lattice.special_subset_point(mask8) == (2, 2)
    assert lattice.special_subset_point(cli.example_mask("special-10")) == (3, 3)
    assert lattice.special_subset_point(cli.example_mask("special-11")) == (0, 0)


def test_covering_examples():
    cov = lattice.uniform_covering(cli.example_mask("cover-10"))
    assert cov.multiplicity == 2 and cov.total_weight == 5
    cov = lattice.uniform_covering(cli.example_mask("cover-8"))
    assert cov.multiplicity == 2 and cov.total_weight == 4
    cov9 = lattice.uniform_covering(cli.example_mask("cover-9"))
    assert cov9.multiplicity == 4 and cov9.total_weight == 9


def test_certificate_verifies():
    for name in ("cover-10", "cover-8", "cover-9", "open-11"):
        mask = cli.example_mask(name)
        cov = lattice.uniform_covering(mask)
        assert cov is not None
        rec = lattice.separability_certificate(mask, cov)
        assert rec.reconstruction_error < 1e-12
        assert rec.all_quadruple_states_ppt
        assert abs(sum(w for _, w in rec.weights) - 1) < 1e-12


def test_certificate_rejects_bad_coverings():
    mask = cli.example_mask("cover-8")
    cov = lattice.uniform_covering(mask)
    outside = lattice.Covering([(lattice.all_quadruples()[0], 1)], 1)
    if states.points_mask(lattice.all_quadruples()[0]) & mask != states.points_mask(
        lattice.all_quadruples()[0]
    ):
        with pytest.raises(lattice.BadCovering):
            lattice.separability_certificate(mask, outside)
    lopsided = lattice.Covering([(cov.items[0][0], 1)], cov.multiplicity)
    with pytest.raises(lattice.BadCovering):
        lattice.separability_certificate(mask, lopsided)


def test_translation_covariance():
    rng = np.random.default_rng(11)
    for _ in range(50):
        mask = int(rng.integers(1, 1 << 16))
        t = lattice.ALL_POINTS[int(rng.integers(16))]
        img = lattice.translate_mask(t, mask)
        assert lattice.popcount(img) == lattice.popcount(mask)
        assert lattice.translate_mask(t, img) == mask  # involutive
        assert lattice.ppt_combinatorial(img) == lattice.ppt_combinatorial(mask)
        assert lattice.classify(img).tag == lattice.classify(mask).tag


def test_canonical_mask():
    rng = np.random.default_rng(13)
    for _ in range(30):
        mask = int(rng.integers(1, 1 << 16))
        canon, t = lattice.canonical_mask(mask)
        assert lattice.translate_mask(t, mask) == canon
        assert all(lattice.translate_mask(s, mask) >= canon for s in lattice.ALL_POINTS)


def test_classify_consistency_invariants():
    rng = np.random.default_rng(17)
    for _ in range(200):
        mask = int(rng.integers(1, 1 << 16))
        cls = lattice.classify(mask)
        if cls.tag == "NptEntangled":
            assert cls.min_pt_eig < -1e-9
        elif cls.tag == "PptEntangled":
            assert cls.criteria_fired
            assert lattice.pt_min_eig(mask) > -1e-9
        elif cls.tag == "Separable":
            rec = lattice.separability_certificate(mask, cls.covering)
            assert rec.reconstruction_error < 1e-10


def test_classify_with_witness():
    mask = cli.example_mask("special-10")
    cls = lattice.classify(mask, witness=True)
    assert cls.tag == "PptEntangled"
    assert cls.witness_delta > 0
    W = criteria.diagonal_lattice_witness(mask, cls.special_point, cls.witness_delta)
    rho = states.lattice_state(mask)
    val = criteria.witness_value(W, rho)
    assert abs(val + cls.witness_delta / (4 * lattice.popcount(mask))) < 1e-12


def test_survey_sample_matches_classify():
    # survey records are a pure function of the mask
    recs = lattice._survey_range(range(1, 200), True, 12, {})
    for rec in recs:
        direct = lattice.classify(rec.mask)
        assert rec.classification.tag == direct.tag
        assert rec.cross_check_ok
