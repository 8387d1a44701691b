import random

import pytest

from oracles import exact_couple_bockstein, presentation_complex, random_graded_group
from sseqtools.errors import InputError
from sseqtools.linalg import PrimeField, rank
from sseqtools.specseq import (BigradedPage, ChainComplex, DifferentialData,
                               GradedAbelianGroup, bockstein_from_chain_complex,
                               bockstein_pages, compare_bockstein_uass,
                               integral_homology, parse_summand, turn_page,
                               uass_em_chart)


def test_parse_summand():
    assert parse_summand("Z") == 0
    assert parse_summand("Z/9") == 9
    with pytest.raises(InputError):
        parse_summand("Z/1")
    with pytest.raises(InputError):
        parse_summand("Q")


# -- turn_page ---------------------------------------------------------------

def test_turn_page_zero_differentials():
    page = BigradedPage(2, {(0, 2): 1, (1, 3): 2})
    nxt = turn_page(page, DifferentialData(2, 2, {}))
    assert nxt.dims == page.dims
    assert nxt.r == 3


def test_turn_page_iso_kills_both():
    page = BigradedPage(2, {(0, 3): 1, (2, 4): 1})
    diff = DifferentialData(2, 2, {(0, 3): [[1]]})
    nxt = turn_page(page, diff)
    assert nxt.dims == {}


def test_turn_page_rank_one_out_of_two():
    page = BigradedPage(2, {(0, 3): 2, (2, 4): 1})
    diff = DifferentialData(2, 2, {(0, 3): [[1, 0]]})
    nxt = turn_page(page, diff)
    assert nxt.dims == {(0, 3): 1}


def test_turn_page_rejects_bad_shapes():
    page = BigradedPage(2, {(0, 3): 1, (2, 4): 1})
    with pytest.raises(InputError):
        turn_page(page, DifferentialData(2, 2, {(0, 3): [[1, 1]]}))


def test_turn_page_rejects_nonzero_dd():
    page = BigradedPage(1, {(0, 0): 1, (1, 0): 1, (2, 0): 1})
    diff = DifferentialData(1, 2, {(0, 0): [[1]], (1, 0): [[1]]}, bidegree=(1, 0))
    with pytest.raises(InputError):
        turn_page(page, diff)


# -- bockstein_pages ----------------------------------------------------------

def test_bockstein_free_summand():
    ss = bockstein_pages(5, GradedAbelianGroup.from_dict({4: [0]}), 4)
    assert ss.page(1).dims == {(0, 4): 1}
    assert ss.infinity.dims == {(0, 4): 1}
    assert all(not diff.matrices for _, diff in ss.pages)


def test_bockstein_torsion_summand():
    for p, k in ((2, 3), (3, 2)):
        ss = bockstein_pages(p, GradedAbelianGroup.from_dict({3: [p**k]}), k + 2)
        for r in range(1, k + 1):
            assert ss.page(r).dims == {(0, 3): 1, (0, 4): 1}
        assert ss.differentials(k).is_nonzero_at((0, 4))
        assert ss.page(k + 1).dims == {}
        assert ss.infinity.dims == {}


def test_bockstein_mixed_degree():
    ss = bockstein_pages(2, GradedAbelianGroup.from_dict({3: [2, 0]}), 3)
    assert ss.page(1).dims == {(0, 3): 2, (0, 4): 1}
    assert ss.page(2).dims == {(0, 3): 1}
    assert ss.infinity.dims == {(0, 3): 1}


def test_bockstein_ignores_coprime_torsion():
    ss = bockstein_pages(2, GradedAbelianGroup.from_dict({3: [9]}), 3)
    assert ss.page(1).dims == {}
    ss = bockstein_pages(2, GradedAbelianGroup.from_dict({3: [6]}), 3)
    # Z/6 contributes its 2-part only
    assert ss.page(1).dims == {(0, 3): 1, (0, 4): 1}
    assert ss.differentials(1).is_nonzero_at((0, 4))


def test_bockstein_totals_identity():
    rng = random.Random(11)
    fp = {2: PrimeField(2), 3: PrimeField(3)}
    for _ in range(25):
        p = rng.choice([2, 3])
        group = random_graded_group(rng, p, ks=(2, 3))
        r_max = 5
        ss = bockstein_pages(p, group, r_max)
        degrees = {s[1] for s in ss.page(1).dims}
        for m in degrees:
            cancelled = 0
            for r in range(1, r_max + 1):
                diff = ss.differentials(r)
                for spot, mat in diff.matrices.items():
                    rk = rank(fp[p], mat) if mat else 0
                    if spot == (0, m) or diff.target(spot) == (0, m):
                        cancelled += rk
            assert ss.page(1).dim((0, m)) == ss.infinity.dim((0, m)) + cancelled


# -- bockstein_from_chain_complex ---------------------------------------------

def test_chain_complex_examples():
    zero = ChainComplex({}, {})
    ss = bockstein_from_chain_complex(2, zero)
    assert ss.page(1).dims == {} and ss.infinity.dims == {}

    for p, k in ((2, 2), (3, 3)):
        c = ChainComplex({0: 1, 1: 1}, {1: [[p**k]]})
        ss = bockstein_from_chain_complex(p, c)
        want = bockstein_pages(p, GradedAbelianGroup.from_dict({0: [p**k]}), k)
        for r in range(1, k + 1):
            assert ss.page(r).dims == want.page(r).dims
        assert ss.infinity.dims == want.infinity.dims

    c = ChainComplex({0: 2, 1: 2}, {1: [[2, 0], [0, 3]]})
    ss = bockstein_from_chain_complex(2, c)
    assert ss.page(1).dims == {(0, 0): 1, (0, 1): 1}
    assert ss.differentials(1).is_nonzero_at((0, 1))
    assert ss.infinity.dims == {}


def test_rejects_non_complex():
    with pytest.raises(InputError):
        ChainComplex({0: 1, 1: 1, 2: 1}, {1: [[1]], 2: [[1]]}).validate()


def test_integral_homology_snf():
    c = ChainComplex({0: 2, 1: 2}, {1: [[2, 1], [0, 8]]})
    assert integral_homology(c).to_json() == {"0": ["Z/16"]}


def test_oracle_equivalence_sample():
    # presentation complex -> SNF homology -> pages equals the direct
    # route, and both match the exact-couple lattice oracle
    rng = random.Random(42)
    for i in range(30):
        p = rng.choice([2, 3, 5])
        group = random_graded_group(rng, p)
        complex_ = presentation_complex(group, rng=rng, max_entry=200)
        via_complex = bockstein_from_chain_complex(p, complex_)
        via_group = bockstein_pages(p, group, max(pg.r for pg, _ in via_complex.pages))
        for pg, _ in via_complex.pages:
            assert pg.dims == via_group.page(pg.r).dims
        assert via_complex.infinity.dims == via_group.infinity.dims
        dims, ranks = exact_couple_bockstein(p, complex_, 5)
        for r in range(1, 6):
            page = via_group.page(r) if r <= len(via_group.pages) else via_group.infinity
            for m in range(0, 10):
                assert dims.get((r, m), 0) == page.dim((0, m)), (i, r, m)


# -- uass_em_chart ------------------------------------------------------------

def test_uass_z_tower():
    ss = uass_em_chart(3, [(2, "Z")], s_max=5, r_max=4)
    assert ss.page(2).dims == {(s, s + 2): 1 for s in range(6)}
    assert ss.infinity.dims == ss.page(2).dims
    assert ss.annotations["extensions"]["2"] == "all group extensions nontrivial"


def test_uass_torsion_pattern():
    ss = uass_em_chart(2, [(2, "Z/4")], s_max=4, r_max=3)
    d2 = ss.differentials(2)
    sources = sorted(s for s in d2.matrices if d2.is_nonzero_at(s))
    assert sources == [(s, s + 3) for s in range(5)]
    col2 = sorted(s for (s, t) in ss.infinity.dims if t - s == 2)
    assert col2 == [0, 1]
    assert not any(t - s == 3 for (s, t) in ss.infinity.dims)


def test_uass_empty():
    ss = uass_em_chart(2, [], 4, 3)
    assert ss.page(2).dims == {} and ss.infinity.dims == {}


def test_uass_rejections():
    with pytest.raises(InputError, match="first-order torsion"):
        uass_em_chart(2, [(2, "Z/2")], 3, 3)
    with pytest.raises(InputError, match="only Z and Z/p"):
        uass_em_chart(2, [(2, "Z/3")], 3, 3)
    with pytest.raises(InputError):
        uass_em_chart(2, [(0, "Z")], 3, 3)


# -- compare ------------------------------------------------------------------

def test_compare_examples():
    for p, table, pages in (
            (3, {3: [9]}, 5),
            (2, {2: [0]}, 4),
            (5, {5: [25, 125]}, 6)):
        report = compare_bockstein_uass(p, GradedAbelianGroup.from_dict(table), pages)
        assert report.agree, report.mismatches()


def test_compare_rejects_unsupported():
    with pytest.raises(InputError):
        compare_bockstein_uass(2, GradedAbelianGroup.from_dict({3: [2]}), 4)
    with pytest.raises(InputError):
        compare_bockstein_uass(2, GradedAbelianGroup.from_dict({3: [12]}), 4)
