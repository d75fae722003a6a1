"""Exact arithmetic in the Weyl superalgebra on a rectangle of generators.

The algebra is generated by coordinates x[i,a] and derivations d[i,a] with
1 <= i <= m+n and 1 <= a <= k.  A generator is odd exactly when its row i
exceeds m.  The defining relations are the supercommutators

    [x[i,a], x[j,b]] = [d[i,a], d[j,b]] = 0,
    [d[i,a], x[j,b]] = delta_ij * delta_ab,

where [p, q] = pq - (-1)^{|p||q|} qp on homogeneous elements.  Every element
is kept in a canonical normal-ordered form: within each monomial all x
letters precede all d letters, and within each kind letters are sorted by
(column, row).  Odd letters never carry an exponent above 1.

Letters are packed into ints so that the natural int order *is* the
canonical order: kind first (x before d), then column, then row.  A word is
a flat tuple (L1, e1, L2, e2, ...) with strictly increasing letters, and an
element is a finite map from words to nonzero rationals.  Two equal algebra
elements always have identical term maps.
"""

from __future__ import annotations

from math import comb, factorial

from .rational import ONE, Rational, rat_str

_ROW_BITS = 9
_COL_SHIFT = _ROW_BITS + 1
_KIND_SHIFT = _COL_SHIFT + 9
_MAX_INDEX = (1 << 9) - 1

X_KIND = 0
D_KIND = 1


def pack_letter(kind: int, row: int, col: int, odd: bool) -> int:
    if not (1 <= row <= _MAX_INDEX and 1 <= col <= _MAX_INDEX):
        raise ValueError(f"generator index out of range: row={row}, col={col}")
    return (kind << _KIND_SHIFT) | (col << _COL_SHIFT) | (row << 1) | int(odd)


def letter_kind(L: int) -> int:
    return L >> _KIND_SHIFT


def letter_row(L: int) -> int:
    return (L >> 1) & _MAX_INDEX


def letter_col(L: int) -> int:
    return (L >> _COL_SHIFT) & _MAX_INDEX


def letter_is_odd(L: int) -> bool:
    return bool(L & 1)


def word_parity(word: tuple) -> int:
    p = 0
    for t in range(0, len(word), 2):
        p ^= word[t] & word[t + 1] & 1
    return p


def _split(word: tuple):
    """Split a word into its x block and its d block."""
    kind_bit = 1 << _KIND_SHIFT
    for t in range(0, len(word), 2):
        if word[t] & kind_bit:
            return word[:t], word[t:]
    return word, ()


def _merge(a: tuple, b: tuple):
    """Sort the concatenation a.b of two sorted blocks.

    Returns (sign, merged) where the sign counts transpositions of odd
    letters, or None when an odd letter would get exponent 2.
    """
    if not a:
        return 1, b
    if not b:
        return 1, a
    na, nb = len(a) // 2, len(b) // 2
    odd_suffix = [0] * (na + 1)
    for t in range(na - 1, -1, -1):
        odd_suffix[t] = odd_suffix[t + 1] + (a[2 * t] & 1)
    out = []
    sign = 1
    i = j = 0
    while i < na and j < nb:
        La, Lb = a[2 * i], b[2 * j]
        if La < Lb:
            out.extend((La, a[2 * i + 1]))
            i += 1
        elif La > Lb:
            if Lb & 1 and odd_suffix[i] & 1:
                sign = -sign
            out.extend((Lb, b[2 * j + 1]))
            j += 1
        else:
            if La & 1:
                return None
            out.extend((La, a[2 * i + 1] + b[2 * j + 1]))
            i += 1
            j += 1
    out.extend(a[2 * i:])
    out.extend(b[2 * j:])
    return sign, tuple(out)


def _cross_single(L: int, e: int, xblock: tuple):
    """Move d-letter L^e from the left of an x block to the right.

    Yields (xblock', remaining d exponent, integer coefficient, sign).
    Contractions with the matching x letter produce the lower terms.
    """
    Lx = L ^ (1 << _KIND_SHIFT)
    pos = None
    for t in range(0, len(xblock), 2):
        if xblock[t] == Lx:
            pos = t
            break
    if not L & 1:
        if pos is None:
            return ((xblock, e, 1, 1),)
        f = xblock[pos + 1]
        terms = []
        for j in range(min(e, f) + 1):
            if j == f:
                newx = xblock[:pos] + xblock[pos + 2:]
            else:
                newx = xblock[:pos] + (Lx, f - j) + xblock[pos + 2:]
            terms.append((newx, e - j, comb(e, j) * comb(f, j) * factorial(j), 1))
        return tuple(terms)
    # odd letter, e == 1: a sign per odd x letter crossed
    odd_total = 0
    odd_before = 0
    for t in range(0, len(xblock), 2):
        if xblock[t] & 1:
            odd_total += 1
            if pos is not None and t < pos:
                odd_before += 1
    terms = [(xblock, 1, 1, -1 if odd_total & 1 else 1)]
    if pos is not None:
        newx = xblock[:pos] + xblock[pos + 2:]
        terms.append((newx, 0, 1, -1 if odd_before & 1 else 1))
    return tuple(terms)


_DX_CACHE: dict = {}


def _dx_cross(dblock: tuple, xblock: tuple):
    """Expand (d block) * (x block) into canonical x.d terms with int coeffs."""
    if not dblock or not xblock:
        return ((xblock, dblock, 1),)
    key = (dblock, xblock)
    hit = _DX_CACHE.get(key)
    if hit is not None:
        return hit
    L, e = dblock[-2], dblock[-1]
    rest = dblock[:-2]
    acc: dict = {}
    for xa, rem, c0, s0 in _cross_single(L, e, xblock):
        c = c0 * s0
        for xr, dr, c1 in _dx_cross(rest, xa):
            wd = dr + (L, rem) if rem else dr
            key2 = (xr, wd)
            acc[key2] = acc.get(key2, 0) + c * c1
    out = tuple((xr, wd, c) for (xr, wd), c in acc.items() if c)
    _DX_CACHE[key] = out
    return out


_MUL_CACHE: dict = {}


def word_mul(w1: tuple, w2: tuple):
    """Product of two canonical words as a tuple of (word, int coefficient)."""
    key = (w1, w2)
    hit = _MUL_CACHE.get(key)
    if hit is not None:
        return hit
    x1, d1 = _split(w1)
    x2, d2 = _split(w2)
    acc: dict = {}
    for xm, dm, c in _dx_cross(d1, x2):
        mx = _merge(x1, xm)
        if mx is None:
            continue
        md = _merge(dm, d2)
        if md is None:
            continue
        word = mx[1] + md[1]
        cc = c * mx[0] * md[0]
        acc[word] = acc.get(word, 0) + cc
    out = tuple((w, c) for w, c in acc.items() if c)
    _MUL_CACHE[key] = out
    return out


def normal_order(letters, sign: int = 1):
    """Reorder a raw sequence of letters into canonical order, combinatorially.

    This is the pure reordering symbol: contraction terms are discarded, the
    sign flips once per transposition of two odd letters, and a repeated odd
    letter kills the word.  Returns (sign, word) with word None for zero.
    """
    seq = list(letters)
    for idx in range(1, len(seq)):
        j = idx
        while j > 0 and seq[j - 1] > seq[j]:
            if seq[j - 1] & seq[j] & 1:
                sign = -sign
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            j -= 1
    word: list = []
    for L in seq:
        if word and word[-2] == L:
            if L & 1:
                return 1, None
            word[-1] += 1
        else:
            word.extend((L, 1))
    return sign, tuple(word)


_REORDER_CACHE: dict = {}


def _word_reorder(w1: tuple, w2: tuple):
    key = (w1, w2)
    hit = _REORDER_CACHE.get(key, 0)
    if hit != 0:
        return hit
    letters = []
    for w in (w1, w2):
        for t in range(0, len(w), 2):
            letters.extend([w[t]] * w[t + 1])
    out = normal_order(letters)
    _REORDER_CACHE[key] = out
    return out


class NOElement:
    """A finite rational combination of normal-ordered words.

    Instances are immutable; all operators return fresh elements.  The term
    map never stores zero coefficients, so `==` on term maps is equality in
    the algebra.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict):
        self.terms = terms

    @staticmethod
    def zero() -> "NOElement":
        return _ZERO

    @staticmethod
    def one() -> "NOElement":
        return _ONE

    @staticmethod
    def scalar(c) -> "NOElement":
        c = Rational(c)
        return NOElement({(): c}) if c else _ZERO

    @staticmethod
    def from_word(word: tuple, coeff=ONE) -> "NOElement":
        coeff = Rational(coeff)
        return NOElement({word: coeff}) if coeff else _ZERO

    def is_zero(self) -> bool:
        return not self.terms

    # Weyl elements are always exact; the window protocol of the series
    # rings degenerates to plain equality here.
    is_zero_window = is_zero

    def eq_window(self, other) -> bool:
        return self == other

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, NOElement):
            return self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self == NOElement.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, (int, Rational)):
            other = NOElement.scalar(other)
        if not isinstance(other, NOElement):
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            v = c if v is None else v + c
            if v:
                out[w] = v
            elif w in out:
                del out[w]
        return NOElement(out)

    __radd__ = __add__

    def __neg__(self):
        return NOElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, NOElement) else NOElement.scalar(-Rational(other)))

    def __rsub__(self, other):
        return NOElement.scalar(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            c = Rational(other)
            if not c:
                return _ZERO
            return NOElement({w: v * c for w, v in self.terms.items()})
        if not isinstance(other, NOElement):
            return NotImplemented
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                c12 = c1 * c2
                for w, k in word_mul(w1, w2):
                    v = out.get(w)
                    v = c12 * k if v is None else v + c12 * k
                    if v:
                        out[w] = v
                    elif w in out:
                        del out[w]
        return NOElement(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Rational)):
            return self * other
        return NotImplemented

    def mul_reorder(self, other: "NOElement") -> "NOElement":
        """Product with all contractions dropped: pure supercommutative reordering."""
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                sign, w = _word_reorder(w1, w2)
                if w is None:
                    continue
                c = c1 * c2 * sign
                v = out.get(w)
                v = c if v is None else v + c
                if v:
                    out[w] = v
                elif w in out:
                    del out[w]
        return NOElement(out)

    def parity(self):
        """0 or 1 on homogeneous elements, None on zero; raises otherwise."""
        if not self.terms:
            return None
        parities = {word_parity(w) for w in self.terms}
        if len(parities) > 1:
            raise ValueError("element is not parity-homogeneous")
        return parities.pop()

    def constant_term(self) -> Rational:
        return self.terms.get((), Rational(0))

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w, c in self.sorted_terms():
            piece = word_str(w)
            if piece == "1":
                bits.append(rat_str(c))
            elif c == 1:
                bits.append(piece)
            elif c == -1:
                bits.append(f"-{piece}")
            else:
                bits.append(f"{rat_str(c)}*{piece}")
        text = " + ".join(bits)
        return text.replace("+ -", "- ")


_ZERO = NOElement({})
_ONE = NOElement({(): ONE})


def word_str(word: tuple) -> str:
    if not word:
        return "1"
    bits = []
    for t in range(0, len(word), 2):
        L, e = word[t], word[t + 1]
        name = "x" if letter_kind(L) == X_KIND else "d"
        bit = f"{name}[{letter_row(L)},{letter_col(L)}]"
        if e > 1:
            bit += f"^{e}"
        bits.append(bit)
    return "*".join(bits)


def super_commutator(p: NOElement, q: NOElement) -> NOElement:
    """[p, q] = pq - (-1)^{|p||q|} qp for parity-homogeneous p, q."""
    if p.is_zero() or q.is_zero():
        return NOElement.zero()
    sign = -1 if p.parity() and q.parity() else 1
    return p * q - q * p * sign


class WeylAlgebra:
    """Generator factory for fixed sizes m, n (rows) and k (columns)."""

    def __init__(self, m: int, n: int, k: int):
        if m < 0 or n < 0 or m + n < 1 or k < 1:
            raise ValueError("need m, n >= 0, m + n >= 1 and k >= 1")
        self.m = m
        self.n = n
        self.k = k

    def row_is_odd(self, i: int) -> bool:
        return i > self.m

    def _check(self, i: int, a: int):
        if not 1 <= i <= self.m + self.n:
            raise ValueError(f"row index {i} out of range 1..{self.m + self.n}")
        if not 1 <= a <= self.k:
            raise ValueError(f"column index {a} out of range 1..{self.k}")

    def x_letter(self, i: int, a: int) -> int:
        self._check(i, a)
        return pack_letter(X_KIND, i, a, self.row_is_odd(i))

    def d_letter(self, i: int, a: int) -> int:
        self._check(i, a)
        return pack_letter(D_KIND, i, a, self.row_is_odd(i))

    def x(self, i: int, a: int) -> NOElement:
        return NOElement.from_word((self.x_letter(i, a), 1))

    def d(self, i: int, a: int) -> NOElement:
        return NOElement.from_word((self.d_letter(i, a), 1))

    def xd(self, i: int, a: int, j: int, b: int) -> NOElement:
        """The normal-ordered word x[i,a] d[j,b]."""
        return self.x(i, a) * self.d(j, b)

    def e_row(self, i: int, j: int) -> NOElement:
        """Row-algebra generator image: sum_a x[i,a] d[j,a]."""
        acc = NOElement.zero()
        for a in range(1, self.k + 1):
            acc = acc + self.xd(i, a, j, a)
        return acc

    def e_col(self, a: int, b: int) -> NOElement:
        """Column-algebra generator image: sum_i x[i,a] d[i,b]."""
        acc = NOElement.zero()
        for i in range(1, self.m + self.n + 1):
            acc = acc + self.xd(i, a, i, b)
        return acc
