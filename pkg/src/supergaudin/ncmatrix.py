"""Matrix calculus over noncommutative graded coefficient rings.

Matrices carry a declared parity sequence (one sign per row/column); the
entry (i, j) of a matrix of parity s is homogeneous of parity |i| + |j|.
Products use the naive row-by-column formula: a matrix of declared parity
is an even morphism, so no extra signs enter.

Determinant-like constructions only behave for Manin matrices:

- ``cdet``: the permutation sum with factors multiplied in column order.
- ``principal_quasi_minors``: the Schur-complement chain d_1, ..., d_N,
  where d_i is the (i, i) quasideterminant of the leading i x i block.
- ``ber_parity``: the ordered product d_1^{s_1} ... d_N^{s_N}.
- ``ber_standard_by_inverse``: the direct two-block formula (column
  determinant of the even block of A times the row determinant of the odd
  block of the inverse), used as an independent oracle.

Ring-specific inversion and truncation are injected through ``RingOps``,
so the same chain runs over plain Weyl elements, spectral series,
pseudodifferential operators, or w-series.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable

from .spectral import WSeries


@dataclass
class RingOps:
    """Inversion and (optionally truncated) multiplication for one ring."""

    invert: Callable
    mul: Callable = operator.mul


class NCMatrix:
    """Square matrix over one coefficient ring with a parity sequence."""

    __slots__ = ("entries", "parity")

    def __init__(self, entries, parity):
        entries = tuple(tuple(row) for row in entries)
        size = len(entries)
        if any(len(row) != size for row in entries):
            raise ValueError("matrix must be square")
        parity = tuple(parity)
        if len(parity) != size or any(s not in (1, -1) for s in parity):
            raise ValueError("parity sequence must be +/-1 of matching length")
        self.entries = entries
        self.parity = parity

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row_parity(self, i: int) -> int:
        """0 for an even row, 1 for an odd one (0-indexed)."""
        return 0 if self.parity[i] == 1 else 1

    def one_entry(self):
        return type(self.entries[0][0]).one()

    def zero_entry(self):
        return type(self.entries[0][0]).zero()

    def identity_like(self) -> "NCMatrix":
        one, zero = self.one_entry(), self.zero_entry()
        ents = [
            [one if i == j else zero for j in range(self.size)]
            for i in range(self.size)
        ]
        return NCMatrix(ents, self.parity)

    def __repr__(self):
        return f"NCMatrix(size={self.size}, parity={self.parity})"


def mat_mul(A: NCMatrix, B: NCMatrix, mul=operator.mul) -> NCMatrix:
    n = A.size
    ents = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = None
            for t in range(n):
                term = mul(A.entries[i][t], B.entries[t][j])
                acc = term if acc is None else acc + term
            row.append(acc)
        ents.append(row)
    return NCMatrix(ents, A.parity)


def mat_sub(A: NCMatrix, B: NCMatrix) -> NCMatrix:
    ents = [
        [A.entries[i][j] - B.entries[i][j] for j in range(A.size)]
        for i in range(A.size)
    ]
    return NCMatrix(ents, A.parity)


def perm_sign(perm) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def cdet(A: NCMatrix, mul=operator.mul):
    """Column determinant: sum over permutations, factors in column order."""
    if len(set(A.parity)) > 1:
        raise ValueError("cdet needs a purely even (or purely odd) parity")
    n = A.size
    acc = None
    for perm in permutations(range(n)):
        prod = A.entries[perm[0]][0]
        for col in range(1, n):
            prod = mul(prod, A.entries[perm[col]][col])
        if perm_sign(perm) < 0:
            prod = -prod
        acc = prod if acc is None else acc + prod
    return acc


def nc_inverse(A: NCMatrix, ops: RingOps) -> NCMatrix:
    """Two-sided inverse by Gauss-Jordan elimination with ring pivots."""
    n = A.size
    mul = ops.mul
    M = [list(row) for row in A.entries]
    one, zero = A.one_entry(), A.zero_entry()
    X = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for p in range(n):
        pinv = ops.invert(M[p][p])
        M[p] = [mul(pinv, e) for e in M[p]]
        X[p] = [mul(pinv, e) for e in X[p]]
        for i in range(n):
            if i == p:
                continue
            factor = M[i][p]
            M[i] = [M[i][j] - mul(factor, M[p][j]) for j in range(n)]
            X[i] = [X[i][j] - mul(factor, X[p][j]) for j in range(n)]
    return NCMatrix(X, A.parity)


def principal_quasi_minors(A: NCMatrix, ops: RingOps) -> list:
    """All principal quasi-minors d_1, ..., d_N via the Schur chain.

    Each step pivots on the current (1, 1) entry; d_i of the original
    matrix is the pivot of the (i-1)-fold Schur complement.
    """
    mul = ops.mul
    M = [list(row) for row in A.entries]
    ds = []
    while True:
        pivot = M[0][0]
        ds.append(pivot)
        size = len(M)
        if size == 1:
            return ds
        pinv = ops.invert(pivot)
        col = [mul(M[i][0], pinv) for i in range(1, size)]
        M = [
            [M[i][j] - mul(col[i - 1], M[0][j]) for j in range(1, size)]
            for i in range(1, size)
        ]


def quasi_minor(A: NCMatrix, i: int, ops: RingOps):
    """The i-th principal quasi-minor (1-indexed)."""
    sub = NCMatrix(
        [row[:i] for row in A.entries[:i]], A.parity[:i]
    )
    return principal_quasi_minors(sub, ops)[-1]


def ber_parity(A: NCMatrix, ops: RingOps):
    """Berezinian of the declared parity: ordered product of d_i^{s_i}."""
    ds = principal_quasi_minors(A, ops)
    acc = None
    for d, s in zip(ds, A.parity):
        factor = d if s == 1 else ops.invert(d)
        acc = factor if acc is None else ops.mul(acc, factor)
    return acc


def ber_standard_by_inverse(A: NCMatrix, m: int, n: int, ops: RingOps):
    """Berezinian of standard parity from the defining two-block formula.

    Independent of the quasi-minor chain: the even block contributes a
    column determinant, the odd block of the full inverse a row determinant.
    """
    mul = ops.mul
    even = None
    for perm in permutations(range(m)):
        prod = None
        for col in range(m):
            e = A.entries[perm[col]][col]
            prod = e if prod is None else mul(prod, e)
        if prod is None:
            prod = A.one_entry()
        if perm_sign(perm) < 0:
            prod = -prod
        even = prod if even is None else even + prod
    if even is None:
        even = A.one_entry()
    inv = nc_inverse(A, ops)
    odd = None
    for perm in permutations(range(n)):
        prod = None
        for row in range(n):
            e = inv.entries[m + row][m + perm[row]]
            prod = e if prod is None else mul(prod, e)
        if prod is None:
            prod = A.one_entry()
        if perm_sign(perm) < 0:
            prod = -prod
        odd = prod if odd is None else odd + prod
    if odd is None:
        odd = A.one_entry()
    return mul(even, odd)


def graded_bracket(x, y, px: int, py: int):
    """[x, y] = xy - (-1)^{px py} yx with declared parities."""
    if px and py:
        return x * y + y * x
    return x * y - y * x


def is_manin(A: NCMatrix):
    """Check the cross-commutation relations of a Manin matrix of parity s.

    Returns (True, None) or (False, (i, j, p, q)) with 1-indexed positions
    of the first violated quadruple.
    """
    n = A.size
    rp = [A.row_parity(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            for p in range(n):
                for q in range(n):
                    pij = (rp[i] + rp[j]) % 2
                    ppq = (rp[p] + rp[q]) % 2
                    ppj = (rp[p] + rp[j]) % 2
                    piq = (rp[i] + rp[q]) % 2
                    lhs = graded_bracket(A.entries[i][j], A.entries[p][q], pij, ppq)
                    rhs = graded_bracket(A.entries[p][j], A.entries[i][q], ppj, piq)
                    sign = (-1) ** (rp[i] * rp[j] + rp[i] * rp[p] + rp[j] * rp[p])
                    if not (lhs - rhs * sign).is_zero_window():
                        return False, (i + 1, j + 1, p + 1, q + 1)
    return True, None


def permute(A: NCMatrix, sigma) -> NCMatrix:
    """Conjugate by a permutation: relabel rows, columns, and parity.

    ``sigma`` is a 0-indexed tuple with sigma[i] the image of i.
    """
    n = A.size
    inv = [0] * n
    for i, image in enumerate(sigma):
        inv[image] = i
    ents = [[A.entries[inv[i]][inv[j]] for j in range(n)] for i in range(n)]
    parity = [A.parity[inv[i]] for i in range(n)]
    return NCMatrix(ents, parity)


def block_ber(A: NCMatrix, r: int, ops: RingOps):
    """Berezinian through the Gauss factorization at split index r."""
    n = A.size
    if not 1 <= r <= n:
        raise ValueError("split index out of range")
    W = NCMatrix([row[:r] for row in A.entries[:r]], A.parity[:r])
    top = ber_parity(W, ops)
    if r == n:
        return top
    winv = nc_inverse(W, ops)
    mul = ops.mul
    ents = []
    for i in range(r, n):
        row = []
        for j in range(r, n):
            acc = A.entries[i][j]
            for s in range(r):
                for t in range(r):
                    acc = acc - mul(mul(A.entries[i][s], winv.entries[s][t]), A.entries[t][j])
            row.append(acc)
        ents.append(row)
    comp = NCMatrix(ents, A.parity[r:])
    return ops.mul(top, ber_parity(comp, ops))


def affine_inverse(A: NCMatrix, wtop: int) -> NCMatrix:
    """Inverse of an affine matrix 1 + w M over w-series, by Neumann sum."""
    n = A.size
    one, zero = WSeries.one(), WSeries.zero()
    for i in range(n):
        for j in range(n):
            e = A.entries[i][j]
            want = one if i == j else zero
            if not (e.coeff(0) - want.coeff(0)).is_zero_window():
                raise ValueError("matrix is not affine: w^0 part is not the identity")
    N = [
        [
            WSeries(
                {d: p for d, p in A.entries[i][j].coeffs.items() if d != 0 or i != j},
                A.entries[i][j].ceil,
            )
            for j in range(n)
        ]
        for i in range(n)
    ]
    ident = A.identity_like()
    acc = [list(row) for row in ident.entries]
    power = [list(row) for row in ident.entries]
    while True:
        nxt = []
        for i in range(n):
            row = []
            for j in range(n):
                s = WSeries.zero()
                for t in range(n):
                    s = s + power[i][t] * N[t][j]
                row.append((-s).truncate(wtop))
            nxt.append(row)
        power = nxt
        if all(power[i][j].is_zero_window() for i in range(n) for j in range(n)):
            break
        acc = [
            [acc[i][j] + power[i][j] for j in range(n)]
            for i in range(n)
        ]
    return NCMatrix(acc, A.parity)
