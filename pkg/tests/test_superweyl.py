"""Kernel tests: defining relations, normal ordering, canonical form.

The reference implementations here (naive rewriting in both scan directions,
brute-force inversion counting) are deliberately independent of the packed
fast paths in supergaudin.superweyl.
"""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from supergaudin.rational import Rational
from supergaudin.superweyl import (
    D_KIND,
    NOElement,
    WeylAlgebra,
    X_KIND,
    letter_col,
    letter_is_odd,
    letter_kind,
    letter_row,
    normal_order,
    super_commutator,
    word_parity,
)


# ---------------------------------------------------------------------------
# naive rewriting oracle
# ---------------------------------------------------------------------------

def _rewrite_step(letters, pos):
    """Rewrite the adjacent pair at pos; returns list of (sign, letters)."""
    A, B = letters[pos], letters[pos + 1]
    rest_l, rest_r = letters[:pos], letters[pos + 2:]
    if A == B and A & 1:
        return []
    if A <= B:
        return None
    both_odd = A & B & 1
    swap = (-1 if both_odd else 1, rest_l + [B, A] + rest_r)
    if (
        letter_kind(A) == D_KIND
        and letter_kind(B) == X_KIND
        and letter_row(A) == letter_row(B)
        and letter_col(A) == letter_col(B)
    ):
        return [swap, (1, rest_l + rest_r)]
    return [swap]


def naive_normal_form(letters, direction):
    """Normal order a raw letter list by adjacent rewriting.

    direction='l2r' rewrites at the first reducible position, 'r2l' at the
    last one. Returns the canonical term dict {word: coeff}.
    """
    agenda = [(Rational(1), list(letters))]
    acc = {}
    while agenda:
        coeff, seq = agenda.pop()
        positions = range(len(seq) - 1)
        if direction == "r2l":
            positions = reversed(positions)
        fired = False
        for pos in positions:
            res = _rewrite_step(seq, pos)
            if res is None:
                continue
            fired = True
            for sign, nxt in res:
                agenda.append((coeff * sign, nxt))
            break
        if not fired:
            word = []
            ok = True
            for L in seq:
                if word and word[-2] == L:
                    if L & 1:
                        ok = False
                        break
                    word[-1] += 1
                else:
                    word.extend((L, 1))
            if ok:
                w = tuple(word)
                acc[w] = acc.get(w, Rational(0)) + coeff
    return {w: c for w, c in acc.items() if c}


def product_of_letters(letters):
    p = NOElement.one()
    for L in letters:
        p = p * NOElement.from_word((L, 1))
    return p


W212 = WeylAlgebra(2, 1, 2)


def all_letters(alg):
    out = []
    for i in range(1, alg.m + alg.n + 1):
        for a in range(1, alg.k + 1):
            out.append(alg.x_letter(i, a))
            out.append(alg.d_letter(i, a))
    return out


# ---------------------------------------------------------------------------
# defining relations
# ---------------------------------------------------------------------------

def test_even_contraction():
    alg = WeylAlgebra(1, 1, 1)
    assert alg.d(1, 1) * alg.x(1, 1) == alg.x(1, 1) * alg.d(1, 1) + 1


def test_odd_anticontraction():
    alg = WeylAlgebra(1, 1, 1)
    lhs = alg.d(2, 1) * alg.x(2, 1)
    assert lhs == -(alg.x(2, 1) * alg.d(2, 1)) + 1


def test_odd_square_is_zero():
    alg = WeylAlgebra(1, 1, 1)
    assert (alg.x(2, 1) * alg.x(2, 1)).is_zero()
    assert (alg.d(2, 1) * alg.d(2, 1)).is_zero()


def test_distinct_generators_supercommute():
    alg = WeylAlgebra(2, 1, 2)
    assert super_commutator(alg.x(1, 1), alg.x(2, 1)).is_zero()
    assert super_commutator(alg.d(1, 1), alg.x(2, 2)).is_zero()
    # odd-odd pair anticommutes
    assert alg.x(3, 1) * alg.x(3, 2) == -(alg.x(3, 2) * alg.x(3, 1))


def test_commutator_of_defining_pair():
    alg = WeylAlgebra(1, 0, 1)
    assert super_commutator(alg.d(1, 1), alg.x(1, 1)) == NOElement.one()


def test_super_commutator_rejects_inhomogeneous():
    alg = WeylAlgebra(1, 1, 1)
    mixed = alg.x(1, 1) + alg.x(2, 1)
    with pytest.raises(ValueError):
        super_commutator(mixed, alg.x(1, 1))


# ---------------------------------------------------------------------------
# the reordering symbol
# ---------------------------------------------------------------------------

def test_reorder_display_example():
    # :d[1,1] x[1,1] d[2,2] x[2,1]: = -x[1,1] x[2,1] d[1,1] d[2,2]  (m=1)
    alg = WeylAlgebra(1, 1, 2)
    seq = [alg.d_letter(1, 1), alg.x_letter(1, 1), alg.d_letter(2, 2), alg.x_letter(2, 1)]
    sign, word = normal_order(seq)
    assert sign == -1
    assert word == (
        (alg.x_letter(1, 1), 1)
        + (alg.x_letter(2, 1), 1)
        + (alg.d_letter(1, 1), 1)
        + (alg.d_letter(2, 2), 1)
    )


def test_reorder_already_ordered():
    alg = WeylAlgebra(1, 1, 1)
    sign, word = normal_order([alg.x_letter(1, 1), alg.d_letter(1, 1)])
    assert sign == 1 and word == (alg.x_letter(1, 1), 1, alg.d_letter(1, 1), 1)


def test_reorder_odd_transposition():
    # two odd d letters out of (column, row) order: one transposition
    alg = WeylAlgebra(1, 2, 1)
    sign, word = normal_order([alg.d_letter(3, 1), alg.d_letter(2, 1)])
    assert sign == -1
    assert word == (alg.d_letter(2, 1), 1, alg.d_letter(3, 1), 1)


def test_reorder_repeated_odd_letter_is_zero():
    alg = WeylAlgebra(1, 1, 1)
    sign, word = normal_order([alg.x_letter(2, 1), alg.d_letter(2, 1), alg.x_letter(2, 1)])
    assert word is None


def test_reorder_sign_matches_bruteforce_inversions():
    rng = random.Random(7)
    pool = all_letters(W212)
    for _ in range(200):
        seq = rng.sample(pool, rng.randint(1, 6))
        sign, word = normal_order(seq)
        odd_positions = [t for t, L in enumerate(seq) if L & 1]
        inversions = sum(
            1
            for ii in range(len(odd_positions))
            for jj in range(ii + 1, len(odd_positions))
            if seq[odd_positions[ii]] > seq[odd_positions[jj]]
        )
        assert word is not None
        assert sign == (-1) ** inversions


# ---------------------------------------------------------------------------
# canonical form and ring axioms
# ---------------------------------------------------------------------------

def test_rewriting_directions_agree_and_match_mul():
    rng = random.Random(20240915)
    pool = all_letters(W212)
    for _ in range(150):
        letters = [rng.choice(pool) for _ in range(rng.randint(1, 6))]
        l2r = naive_normal_form(letters, "l2r")
        r2l = naive_normal_form(letters, "r2l")
        assert l2r == r2l
        assert product_of_letters(letters).terms == l2r


@st.composite
def elements(draw, alg=W212, max_terms=3, max_len=4):
    pool = all_letters(alg)
    nterms = draw(st.integers(0, max_terms))
    acc = NOElement.zero()
    for _ in range(nterms):
        letters = draw(st.lists(st.sampled_from(pool), min_size=0, max_size=max_len))
        coeff = draw(st.integers(-3, 3))
        acc = acc + product_of_letters(letters) * Rational(coeff)
    return acc


@settings(max_examples=60, deadline=None)
@given(elements(), elements(), elements())
def test_associativity(p, q, r):
    assert (p * q) * r == p * (q * r)


@settings(max_examples=60, deadline=None)
@given(elements(), elements(), elements())
def test_distributivity(p, q, r):
    assert p * (q + r) == p * q + p * r


@st.composite
def homogeneous_words(draw, alg=W212, max_len=4):
    pool = all_letters(alg)
    letters = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=max_len))
    return product_of_letters(letters)


@settings(max_examples=60, deadline=None)
@given(homogeneous_words(), homogeneous_words())
def test_parity_grading(p, q):
    if p.is_zero() or q.is_zero() or (p * q).is_zero():
        return
    assert (p * q).parity() == (p.parity() + q.parity()) % 2


def test_word_parity_counts_odd_letters():
    alg = WeylAlgebra(1, 2, 1)
    w = (alg.x(2, 1) * alg.x(3, 1) * alg.d(1, 1)).terms
    assert all(word_parity(word) == 0 for word in w)


# ---------------------------------------------------------------------------
# representations of the two classical algebras
# ---------------------------------------------------------------------------

def _row_parity(alg, i):
    return 1 if i > alg.m else 0


@pytest.mark.parametrize("m,n,k", [(1, 0, 1), (1, 1, 2), (2, 1, 3), (1, 2, 2), (0, 3, 3)])
def test_row_generators_satisfy_superbracket(m, n, k):
    # [e_ij, e_pq] = delta_jp e_iq - (-1)^{(|i|+|j|)(|p|+|q|)} delta_iq e_pj
    alg = WeylAlgebra(m, n, k)
    size = m + n
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            for p in range(1, size + 1):
                for q in range(1, size + 1):
                    lhs = super_commutator(alg.e_row(i, j), alg.e_row(p, q))
                    sign = (-1) ** (
                        (_row_parity(alg, i) + _row_parity(alg, j))
                        * (_row_parity(alg, p) + _row_parity(alg, q))
                    )
                    rhs = NOElement.zero()
                    if j == p:
                        rhs = rhs + alg.e_row(i, q)
                    if i == q:
                        rhs = rhs - alg.e_row(p, j) * sign
                    assert lhs == rhs, (i, j, p, q)


def test_row_commutator_example():
    # [e_12, e_21] = e_11 - e_22 in the even block
    alg = WeylAlgebra(2, 1, 3)
    got = super_commutator(alg.e_row(1, 2), alg.e_row(2, 1))
    assert got == alg.e_row(1, 1) - alg.e_row(2, 2)


def test_column_generators_satisfy_gl_bracket():
    alg = WeylAlgebra(1, 1, 3)
    for a in range(1, 4):
        for b in range(1, 4):
            for c in range(1, 4):
                for e in range(1, 4):
                    lhs = super_commutator(alg.e_col(a, b), alg.e_col(c, e))
                    rhs = NOElement.zero()
                    if b == c:
                        rhs = rhs + alg.e_col(a, e)
                    if a == e:
                        rhs = rhs - alg.e_col(c, b)
                    assert lhs == rhs


# ---------------------------------------------------------------------------
# supercommutative product
# ---------------------------------------------------------------------------

def test_mul_reorder_drops_contractions():
    alg = WeylAlgebra(1, 1, 1)
    full = alg.d(1, 1) * alg.x(1, 1)
    reordered = alg.d(1, 1).mul_reorder(alg.x(1, 1))
    assert full == reordered + 1
    assert reordered == alg.x(1, 1) * alg.d(1, 1)


def test_mul_reorder_matches_mul_without_matching_pairs():
    alg = WeylAlgebra(2, 1, 2)
    p = alg.d(1, 1) * alg.x(3, 2)
    q = alg.x(2, 2) * alg.d(3, 1)
    assert p.mul_reorder(q) == p * q


def test_letter_accessors():
    alg = WeylAlgebra(2, 1, 2)
    L = alg.d_letter(3, 2)
    assert letter_kind(L) == D_KIND
    assert letter_row(L) == 3
    assert letter_col(L) == 2
    assert letter_is_odd(L)
