import doctest
from itertools import product

import pytest

import sseqtools.steenrod as steenrod
from oracles import admissible_words_by_filter, compositions
from sseqtools.errors import InputError
from sseqtools.linalg import PrimeField, rank
from sseqtools.steenrod import (SteenrodElement, adem_normal_form,
                                admissible_basis, beta_left_multiply,
                                bockstein_right_multiply, excess,
                                is_admissible, multiply, word_degree)


def test_doctests():
    failures, _ = doctest.testmod(steenrod)
    assert failures == 0


def test_basis_spec_examples():
    assert admissible_basis(2, 0) == [()]
    assert admissible_basis(2, 3) == [(3,), (2, 1)]
    assert admissible_basis(2, 3, max_excess=1) == [(2, 1)]


def test_basis_against_filter_oracle():
    for d in range(0, 13):
        assert admissible_basis(2, d) == admissible_words_by_filter(d)


def test_basis_deterministic_and_admissible():
    for p in (2, 3, 5):
        for d in range(0, 16):
            words = admissible_basis(p, d)
            assert words == admissible_basis(p, d)
            assert words == sorted(words, reverse=True)
            for w in words:
                assert is_admissible(p, w)
                assert word_degree(p, w) == d


def test_excess_examples():
    assert excess(2, (1,)) == 1
    assert excess(2, (2, 1)) == 1
    assert excess(2, (4, 2, 1)) == 1
    assert excess(2, ()) == 0
    # odd prime: leading Bockstein counts
    assert excess(3, (0,)) == 1
    assert excess(3, (1, 0)) == 1  # P^1 b
    assert excess(3, (0, 1)) == 3  # b P^1


def test_excess_lower_bound_on_nonempty_words():
    # instability: nonzero words act nontrivially only above their excess
    for d in range(1, 12):
        for w in admissible_basis(2, d):
            assert excess(2, w) >= 1


def test_adem_spec_examples():
    assert adem_normal_form(2, (1, 1)).is_zero()
    assert adem_normal_form(2, (2, 2)) == SteenrodElement.of_word(2, (3, 1))
    assert adem_normal_form(2, (3, 1)) == SteenrodElement.of_word(2, (3, 1))


def test_adem_rejects_bad_input():
    with pytest.raises(InputError):
        adem_normal_form(3, (1, 1))
    with pytest.raises(InputError):
        adem_normal_form(4, (1,))
    with pytest.raises(InputError):
        adem_normal_form(2, (0, 1))


def test_adem_idempotent_degree_preserving_admissible():
    for d in range(0, 15):
        for w in compositions(d):
            nf = adem_normal_form(2, w)
            for word, coeff in nf.terms.items():
                assert coeff == 1
                assert is_admissible(2, word)
                assert word_degree(2, word) == d
                assert adem_normal_form(2, word) == SteenrodElement.of_word(2, word)


def test_adem_associativity():
    for a, b, c in product(range(1, 11), repeat=3):
        if a + b + c > 12:
            continue
        sa = SteenrodElement.of_word(2, (a,))
        sb = SteenrodElement.of_word(2, (b,))
        sc = SteenrodElement.of_word(2, (c,))
        assert multiply(multiply(sa, sb), sc) == multiply(sa, multiply(sb, sc))


def test_spanning_dimension():
    f2 = PrimeField(2)
    for d in range(0, 11):
        basis = admissible_basis(2, d)
        index = {w: i for i, w in enumerate(basis)}
        rows = []
        for w in compositions(d):
            nf = adem_normal_form(2, w)
            vec = [0] * len(basis)
            for word, coeff in nf.terms.items():
                vec[index[word]] = coeff
            rows.append(vec)
        assert rank(f2, rows) == len(basis)


def test_beta_left_examples():
    assert beta_left_multiply(2, ()) == SteenrodElement.of_word(2, (1,))
    assert beta_left_multiply(2, (1,)).is_zero()
    assert beta_left_multiply(2, (2,)) == SteenrodElement.of_word(2, (3,))
    assert beta_left_multiply(3, ()) == SteenrodElement.of_word(3, (0,))
    assert beta_left_multiply(3, (0, 1)).is_zero()
    assert beta_left_multiply(3, (1,)) == SteenrodElement.of_word(3, (0, 1))


def test_beta_left_agrees_with_adem():
    for d in range(0, 15):
        for w in admissible_basis(2, d):
            assert beta_left_multiply(2, w) == adem_normal_form(2, (1,) + w)


def test_beta_squared_is_zero():
    for p in (2, 3):
        for d in range(0, 21):
            for w in admissible_basis(p, d):
                once = beta_left_multiply(p, w)
                for word in once.terms:
                    assert beta_left_multiply(p, word).is_zero()
                right = bockstein_right_multiply(p, w)
                for word in right.terms:
                    assert bockstein_right_multiply(p, word).is_zero()


def test_right_multiplication():
    assert bockstein_right_multiply(2, (2,)) == SteenrodElement.of_word(2, (2, 1))
    assert bockstein_right_multiply(2, (2, 1)).is_zero()
    assert bockstein_right_multiply(3, (1,)) == SteenrodElement.of_word(3, (1, 0))
    assert bockstein_right_multiply(3, (1, 0)).is_zero()


def test_element_homogeneity_enforced():
    with pytest.raises(InputError):
        SteenrodElement(2, {(1,): 1, (2,): 1})
