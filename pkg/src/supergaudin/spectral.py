"""Truncated spectral series with certified windows.

Three nested rings, all with Weyl-superalgebra coefficients:

- ``VSeries``: Laurent series in a spectral variable (v or u).  ``floor``
  is the certified truncation: every coefficient at degree >= floor is
  exact, everything below is unknown and never stored.  ``floor=None``
  means the series is exact at all degrees (a Laurent polynomial).
- ``PDO``: pseudodifferential operators, Laurent series in the inverse
  derivation with VSeries coefficients (written to the left of the powers
  of the derivation).  The product uses the composition rule
  ``D^r a = sum_s binom(r, s) a^(s) D^(r-s)`` with generalized binomials.
- ``WSeries``: series in an auxiliary even variable w, truncated *above*
  at a certified ceiling, with PDO coefficients.  The homomorphisms
  ``phi`` (D -> D + 1/w) and ``phi_hat`` (v -> v + 1/w, D -> D + 1/w)
  land here, expanded in positive powers of w.

Floors and ceilings propagate pessimistically through every operation, so
an equality assertion on a certified slot is always an exact statement.
"""

from __future__ import annotations

from math import comb

from .rational import ONE, Rational
from .superweyl import NOElement


def binom(r: int, s: int) -> int:
    """Generalized binomial r(r-1)...(r-s+1)/s! for integer r, s >= 0."""
    if s < 0:
        return 0
    if r >= 0:
        return comb(r, s)
    return (-1) ** s * comb(s - r - 1, s)


def _fmax(*floors):
    """Combine lower truncation bounds; None stands for minus infinity."""
    vals = [f for f in floors if f is not None]
    return max(vals) if vals else None


def _cmin(*ceils):
    """Combine upper truncation bounds; None stands for plus infinity."""
    vals = [c for c in ceils if c is not None]
    return min(vals) if vals else None


def _as_element(value) -> NOElement:
    if isinstance(value, NOElement):
        return value
    return NOElement.scalar(value)


class TruncationError(ValueError):
    """An operation would need a truncation bound that was not supplied."""


class VSeries:
    """Laurent series in the spectral variable with NOElement coefficients."""

    __slots__ = ("coeffs", "floor")

    def __init__(self, coeffs: dict, floor=None, _trusted=False):
        if not _trusted:
            coeffs = {
                d: _as_element(c)
                for d, c in coeffs.items()
                if (floor is None or d >= floor) and _as_element(c)
            }
        self.coeffs = coeffs
        self.floor = floor

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero() -> "VSeries":
        return VSeries({}, None, _trusted=True)

    @staticmethod
    def one() -> "VSeries":
        return VSeries.scalar(ONE)

    @staticmethod
    def scalar(c) -> "VSeries":
        return VSeries({0: c})

    @staticmethod
    def monomial(degree: int, c=ONE) -> "VSeries":
        return VSeries({degree: c})

    @staticmethod
    def poly(coeffs: dict) -> "VSeries":
        """Exact Laurent polynomial from {degree: coefficient}."""
        return VSeries(coeffs)

    # -- window bookkeeping -------------------------------------------
    def top(self):
        return max(self.coeffs) if self.coeffs else None

    def hi(self):
        """Highest possibly-nonzero degree (None if certainly zero)."""
        if self.coeffs:
            return max(self.coeffs)
        return None if self.floor is None else self.floor - 1

    def is_zero_window(self) -> bool:
        """True when every certified coefficient vanishes."""
        return not self.coeffs

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.floor is None

    def truncate(self, floor: int) -> "VSeries":
        new_floor = floor if self.floor is None else max(self.floor, floor)
        return VSeries(
            {d: c for d, c in self.coeffs.items() if d >= new_floor},
            new_floor,
            _trusted=True,
        )

    def coeff(self, degree: int) -> NOElement:
        if self.floor is not None and degree < self.floor:
            raise TruncationError(f"degree {degree} below certified floor {self.floor}")
        return self.coeffs.get(degree, NOElement.zero())

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Rational, NOElement)):
            other = VSeries.scalar(other) if not isinstance(other, NOElement) else VSeries({0: other})
        if not isinstance(other, VSeries):
            return NotImplemented
        floor = _fmax(self.floor, other.floor)
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            v = out.get(d)
            v = c if v is None else v + c
            if v:
                out[d] = v
            elif d in out:
                del out[d]
        if floor is not None:
            out = {d: c for d, c in out.items() if d >= floor}
        return VSeries(out, floor, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return VSeries({d: -c for d, c in self.coeffs.items()}, self.floor, _trusted=True)

    def __sub__(self, other):
        if isinstance(other, (int, Rational, NOElement)):
            other = VSeries({0: _as_element(other)})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            c = Rational(other)
            if not c:
                return VSeries({}, self.floor, _trusted=True)
            return VSeries({d: v * c for d, v in self.coeffs.items()}, self.floor, _trusted=True)
        if isinstance(other, NOElement):
            out = {d: v * other for d, v in self.coeffs.items()}
            return VSeries(out, self.floor)
        if not isinstance(other, VSeries):
            return NotImplemented
        floor = self._mul_floor(other)
        out: dict = {}
        for da, ca in self.coeffs.items():
            for db, cb in other.coeffs.items():
                d = da + db
                if floor is not None and d < floor:
                    continue
                prod = ca * cb
                if not prod:
                    continue
                v = out.get(d)
                v = prod if v is None else v + prod
                if v:
                    out[d] = v
                elif d in out:
                    del out[d]
        return VSeries(out, floor, _trusted=True)

    def __rmul__(self, other):
        if isinstance(other, (int, Rational)):
            return self * other
        if isinstance(other, NOElement):
            out = {d: other * v for d, v in self.coeffs.items()}
            return VSeries(out, self.floor)
        return NotImplemented

    def _mul_floor(self, other):
        if self.is_exact_zero() or other.is_exact_zero():
            return None
        cands = []
        if self.floor is not None:
            cands.append(self.floor + other.hi())
        if other.floor is not None:
            cands.append(other.floor + self.hi())
        return max(cands) if cands else None

    def derivative(self) -> "VSeries":
        out = {d - 1: c * d for d, c in self.coeffs.items() if d != 0}
        floor = None if self.floor is None else self.floor - 1
        return VSeries(out, floor, _trusted=True)

    def invert(self, floor=None) -> "VSeries":
        """Two-sided inverse; needs a scalar leading coefficient.

        The result is certified down to ``floor`` (defaulting to the series'
        own floor).  Exact monomials invert exactly with no floor needed.
        """
        if not self.coeffs:
            raise ZeroDivisionError("cannot invert a series with no certified terms")
        d = max(self.coeffs)
        lead = self.coeffs[d]
        c = lead.constant_term()
        if not c or lead != NOElement.scalar(c):
            raise ValueError("leading coefficient is not a nonzero scalar")
        cinv = 1 / Rational(c)
        tail = {deg - d: val * cinv for deg, val in self.coeffs.items() if deg != d}
        rfloor = None if self.floor is None else self.floor - d
        r = VSeries(tail, rfloor, _trusted=True)
        if r.is_exact_zero():
            return VSeries({-d: NOElement.scalar(cinv)})
        target = floor if floor is not None else self.floor
        if target is None:
            raise TruncationError("series inversion needs a target floor")
        floor_s = target + d
        total = VSeries.one()
        term = VSeries.one()
        neg_r = -r
        while True:
            term = (term * neg_r).truncate(floor_s)
            if term.is_zero_window():
                total = total + term  # keep the floor information
                break
            total = total + term
        return total * VSeries.monomial(-d, cinv)

    # -- comparisons and display ----------------------------------------
    def eq_window(self, other) -> bool:
        return (self - other).is_zero_window()

    def parity(self):
        parities = {c.parity() for c in self.coeffs.values()}
        parities.discard(None)
        if not parities:
            return None
        if len(parities) > 1:
            raise ValueError("series is not parity-homogeneous")
        return parities.pop()

    def __repr__(self):
        bits = [f"({self.coeffs[d]!r})*v^{d}" for d in sorted(self.coeffs, reverse=True)]
        body = " + ".join(bits) if bits else "0"
        tag = "" if self.floor is None else f"  [floor {self.floor}]"
        return body + tag


class PDO:
    """Pseudodifferential operator: Laurent series in the derivation."""

    __slots__ = ("coeffs", "floor")

    def __init__(self, coeffs: dict, floor=None, _trusted=False):
        if not _trusted:
            coeffs = {
                r: s
                for r, s in coeffs.items()
                if (floor is None or r >= floor) and not s.is_exact_zero()
            }
        self.coeffs = coeffs
        self.floor = floor

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero() -> "PDO":
        return PDO({}, None, _trusted=True)

    @staticmethod
    def one() -> "PDO":
        return PDO({0: VSeries.one()}, None, _trusted=True)

    @staticmethod
    def scalar(c) -> "PDO":
        return PDO({0: VSeries.scalar(c)})

    @staticmethod
    def from_series(s: VSeries) -> "PDO":
        return PDO({0: s})

    @staticmethod
    def d_power(r: int) -> "PDO":
        return PDO({r: VSeries.one()}, None, _trusted=True)

    @staticmethod
    def monomial(order: int, s: VSeries) -> "PDO":
        return PDO({order: s})

    # -- window bookkeeping -------------------------------------------
    def top_order(self):
        return max(self.coeffs) if self.coeffs else None

    def hi_order(self):
        if self.coeffs:
            return max(self.coeffs)
        return None if self.floor is None else self.floor - 1

    def is_zero_window(self) -> bool:
        return all(s.is_zero_window() for s in self.coeffs.values())

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.floor is None

    def truncate(self, floor: int) -> "PDO":
        new_floor = floor if self.floor is None else max(self.floor, floor)
        return PDO(
            {r: s for r, s in self.coeffs.items() if r >= new_floor},
            new_floor,
            _trusted=True,
        )

    def coeff(self, order: int) -> VSeries:
        if self.floor is not None and order < self.floor:
            raise TruncationError(f"order {order} below certified floor {self.floor}")
        return self.coeffs.get(order, VSeries.zero())

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Rational, NOElement)):
            other = PDO({0: VSeries({0: _as_element(other)})})
        if not isinstance(other, PDO):
            return NotImplemented
        floor = _fmax(self.floor, other.floor)
        out = dict(self.coeffs)
        for r, s in other.coeffs.items():
            v = out.get(r)
            v = s if v is None else v + s
            if not v.is_exact_zero():
                out[r] = v
            elif r in out:
                del out[r]
        if floor is not None:
            out = {r: s for r, s in out.items() if r >= floor}
        return PDO(out, floor, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return PDO({r: -s for r, s in self.coeffs.items()}, self.floor, _trusted=True)

    def __sub__(self, other):
        if isinstance(other, (int, Rational, NOElement)):
            other = PDO({0: VSeries({0: _as_element(other)})})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational, NOElement)):
            return PDO({r: s * other for r, s in self.coeffs.items()}, self.floor)
        if isinstance(other, VSeries):
            return self.mul(PDO.from_series(other))
        if not isinstance(other, PDO):
            return NotImplemented
        return self.mul(other)

    def __rmul__(self, other):
        if isinstance(other, (int, Rational, NOElement)):
            return PDO({r: other * s for r, s in self.coeffs.items()}, self.floor)
        if isinstance(other, VSeries):
            return PDO.from_series(other).mul(self)
        return NotImplemented

    def mul(self, other: "PDO", floor=None) -> "PDO":
        """Composition product, certified down to the propagated floor.

        An explicit ``floor`` bounds the expansion of negative powers of the
        derivation against coefficients with infinite tails; without it such
        products raise TruncationError.
        """
        prop = []
        if self.floor is not None:
            h = other.hi_order()
            if h is not None:
                prop.append(self.floor + h)
        if other.floor is not None:
            h = self.hi_order()
            if h is not None:
                prop.append(other.floor + h)
        cut = _fmax(floor, *prop) if (prop or floor is not None) else None
        out: dict = {}
        clipped = False
        for r, ar in self.coeffs.items():
            for t, bt in other.coeffs.items():
                if r < 0 and cut is None and (
                    bt.floor is not None or (bt.coeffs and min(bt.coeffs) < 0)
                ):
                    raise TruncationError(
                        "product with negative derivation powers needs an order floor"
                    )
                deriv = bt
                s = 0
                while True:
                    if r >= 0 and s > r:
                        break
                    order = r + t - s
                    if cut is not None and order < cut:
                        if not deriv.is_exact_zero():
                            clipped = True
                        break
                    if deriv.is_exact_zero():
                        break
                    c = binom(r, s)
                    if c:
                        term = (ar * deriv) * c
                        v = out.get(order)
                        v = term if v is None else v + term
                        out[order] = v
                    s += 1
                    deriv = deriv.derivative()
        result_floor = cut if clipped else _fmax(*prop) if prop else None
        if result_floor is not None:
            out = {r: s for r, s in out.items() if r >= result_floor}
        out = {r: s for r, s in out.items() if not s.is_exact_zero()}
        return PDO(out, result_floor, _trusted=True)

    def invert(self, order_floor: int, vfloor=None) -> "PDO":
        """Two-sided inverse of c*D^M*(1 + lower order tail)."""
        if not self.coeffs:
            raise ZeroDivisionError("cannot invert a vanishing operator")
        M = max(self.coeffs)
        lead = self.coeffs[M]
        lead_inv = lead.invert(floor=vfloor)
        linv = PDO.d_power(-M).mul(PDO.from_series(lead_inv), floor=order_floor)
        t = linv.mul(self, floor=order_floor) - 1
        if any(r >= 0 and not s.is_zero_window() for r, s in t.coeffs.items()):
            raise ValueError("operator is not of the form c*D^M*(1 + lower tail)")
        total = PDO.one()
        term = PDO.one()
        neg_t = -t
        while True:
            term = term.mul(neg_t, floor=order_floor)
            if term.is_zero_window():
                total = total + term
                break
            total = total + term
        return total.mul(linv, floor=order_floor)

    # -- comparisons and display ----------------------------------------
    def eq_window(self, other) -> bool:
        return (self - other).is_zero_window()

    def parity(self):
        parities = {s.parity() for s in self.coeffs.values()}
        parities.discard(None)
        if not parities:
            return None
        if len(parities) > 1:
            raise ValueError("operator is not parity-homogeneous")
        return parities.pop()

    def __repr__(self):
        bits = [f"({self.coeffs[r]!r})*D^{r}" for r in sorted(self.coeffs, reverse=True)]
        body = "  +  ".join(bits) if bits else "0"
        tag = "" if self.floor is None else f"  [order floor {self.floor}]"
        return body + tag


class WSeries:
    """Laurent series in w with PDO coefficients, truncated above."""

    __slots__ = ("coeffs", "ceil")

    def __init__(self, coeffs: dict, ceil=None, _trusted=False):
        if not _trusted:
            coeffs = {
                d: p
                for d, p in coeffs.items()
                if (ceil is None or d <= ceil) and not p.is_exact_zero()
            }
        self.coeffs = coeffs
        self.ceil = ceil

    @staticmethod
    def zero() -> "WSeries":
        return WSeries({}, None, _trusted=True)

    @staticmethod
    def one() -> "WSeries":
        return WSeries({0: PDO.one()}, None, _trusted=True)

    @staticmethod
    def scalar(c) -> "WSeries":
        return WSeries({0: PDO.scalar(c)})

    @staticmethod
    def from_pdo(p: PDO, degree: int = 0) -> "WSeries":
        return WSeries({degree: p})

    @staticmethod
    def w_power(d: int) -> "WSeries":
        return WSeries({d: PDO.one()}, None, _trusted=True)

    # -- window bookkeeping -------------------------------------------
    def lo_degree(self):
        if self.coeffs:
            return min(self.coeffs)
        return None if self.ceil is None else self.ceil + 1

    def is_zero_window(self) -> bool:
        return all(p.is_zero_window() for p in self.coeffs.values())

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.ceil is None

    def truncate(self, ceil: int) -> "WSeries":
        new_ceil = ceil if self.ceil is None else min(self.ceil, ceil)
        return WSeries(
            {d: p for d, p in self.coeffs.items() if d <= new_ceil},
            new_ceil,
            _trusted=True,
        )

    def coeff(self, degree: int) -> PDO:
        if self.ceil is not None and degree > self.ceil:
            raise TruncationError(f"degree {degree} above certified ceiling {self.ceil}")
        return self.coeffs.get(degree, PDO.zero())

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Rational, NOElement)):
            other = WSeries({0: PDO({0: VSeries({0: _as_element(other)})})})
        if not isinstance(other, WSeries):
            return NotImplemented
        ceil = _cmin(self.ceil, other.ceil)
        out = dict(self.coeffs)
        for d, p in other.coeffs.items():
            v = out.get(d)
            v = p if v is None else v + p
            if not v.is_exact_zero():
                out[d] = v
            elif d in out:
                del out[d]
        if ceil is not None:
            out = {d: p for d, p in out.items() if d <= ceil}
        return WSeries(out, ceil, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return WSeries({d: -p for d, p in self.coeffs.items()}, self.ceil, _trusted=True)

    def __sub__(self, other):
        if isinstance(other, (int, Rational, NOElement)):
            other = WSeries({0: PDO({0: VSeries({0: _as_element(other)})})})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational, NOElement)):
            return WSeries({d: p * other for d, p in self.coeffs.items()}, self.ceil)
        if not isinstance(other, WSeries):
            return NotImplemented
        ceil = self._mul_ceil(other)
        out: dict = {}
        for da, pa in self.coeffs.items():
            for db, pb in other.coeffs.items():
                d = da + db
                if ceil is not None and d > ceil:
                    continue
                prod = pa.mul(pb)
                if prod.is_exact_zero():
                    continue
                v = out.get(d)
                v = prod if v is None else v + prod
                out[d] = v
        out = {d: p for d, p in out.items() if not p.is_exact_zero()}
        return WSeries(out, ceil, _trusted=True)

    def __rmul__(self, other):
        if isinstance(other, (int, Rational, NOElement)):
            return WSeries({d: other * p for d, p in self.coeffs.items()}, self.ceil)
        return NotImplemented

    def _mul_ceil(self, other):
        cands = []
        if self.ceil is not None:
            lo = other.lo_degree()
            if lo is not None:
                cands.append(self.ceil + lo)
        if other.ceil is not None:
            lo = self.lo_degree()
            if lo is not None:
                cands.append(other.ceil + lo)
        return _cmin(*cands) if cands else None

    def invert(self, ceil: int) -> "WSeries":
        """Inverse of c*w^lo*(1 + higher terms) with scalar lowest coefficient."""
        if not self.coeffs:
            raise ZeroDivisionError("cannot invert a vanishing w-series")
        lo = min(self.coeffs)
        lead = self.coeffs[lo]
        if list(lead.coeffs) != [0]:
            raise ValueError("lowest w coefficient is not an order-zero scalar")
        series = lead.coeffs[0]
        if list(series.coeffs) != [0]:
            raise ValueError("lowest w coefficient is not an order-zero scalar")
        c = series.coeffs[0].constant_term()
        if not c or series.coeffs[0] != NOElement.scalar(c):
            raise ValueError("lowest w coefficient is not an invertible scalar")
        cinv = 1 / Rational(c)
        tail = {d - lo: p * cinv for d, p in self.coeffs.items() if d != lo}
        t = WSeries(tail, None if self.ceil is None else self.ceil - lo)
        ceil_s = ceil + lo
        total = WSeries.one()
        term = WSeries.one()
        neg_t = -t
        while True:
            term = (term * neg_t).truncate(ceil_s)
            if term.is_zero_window():
                total = total + term
                break
            total = total + term
        shifted = {d - lo: p * cinv for d, p in total.coeffs.items()}
        new_ceil = None if total.ceil is None else total.ceil - lo
        return WSeries(shifted, new_ceil, _trusted=True)

    # -- comparisons and display ----------------------------------------
    def eq_window(self, other) -> bool:
        return (self - other).is_zero_window()

    def parity(self):
        parities = {p.parity() for p in self.coeffs.values()}
        parities.discard(None)
        if not parities:
            return None
        if len(parities) > 1:
            raise ValueError("series is not parity-homogeneous")
        return parities.pop()

    def __repr__(self):
        bits = [f"w^{d} * ({self.coeffs[d]!r})" for d in sorted(self.coeffs)]
        body = "\n + ".join(bits) if bits else "0"
        tag = "" if self.ceil is None else f"  [w ceiling {self.ceil}]"
        return body + tag


def phi(p: PDO, wtop: int) -> WSeries:
    """Shift homomorphism D^r -> (1/w + D)^r, expanded in powers of w.

    Order-zero operators are fixed, and the coefficient of w^(-N) of the
    image recovers the order-N input coefficient, so the map is injective
    on the certified window.
    """
    out: dict = {}
    truncated = False
    for r, ar in p.coeffs.items():
        s = 0
        while True:
            if r >= 0 and s > r:
                break
            wdeg = s - r
            if wdeg > wtop:
                truncated = True
                break
            c = binom(r, s)
            if c:
                slot = out.setdefault(wdeg, {})
                v = slot.get(s)
                term = ar * c
                slot[s] = term if v is None else v + term
            s += 1
    ceil = _cmin(
        wtop if truncated else None,
        None if p.floor is None else -p.floor,
    )
    coeffs = {
        d: PDO(orders, None)
        for d, orders in out.items()
        if (ceil is None or d <= ceil)
    }
    return WSeries(coeffs, ceil, _trusted=True)


def phi_hat(p: PDO, wtop: int) -> WSeries:
    """Shift homomorphism v -> v + 1/w, D -> D + 1/w on exact operators.

    Coefficients of every power of w in the image are polynomials in the
    spectral variable and the derivation.  Inputs must carry no order floor;
    Laurent tails in v contribute to the certified ceiling.
    """
    if p.floor is not None:
        raise TruncationError("phi_hat needs exact derivation orders")
    out: dict = {}
    truncated = False
    ceil_cands = [wtop]
    exact = True
    for r, ar in p.coeffs.items():
        if ar.floor is not None:
            ceil_cands.append(-ar.floor - r)
            exact = False
        maxd = ar.top()
        if maxd is None:
            continue
        if r < 0 or (ar.coeffs and min(ar.coeffs) < 0):
            exact = False
        s2 = 0
        while True:
            if r >= 0 and s2 > r:
                break
            wdeg2 = s2 - r
            if wdeg2 > wtop + maxd:
                truncated = True
                break
            c2 = binom(r, s2)
            if c2:
                for d, elem in ar.coeffs.items():
                    s1 = 0
                    while True:
                        if d >= 0 and s1 > d:
                            break
                        wdeg = wdeg2 + s1 - d
                        if wdeg > wtop:
                            truncated = True
                            break
                        c1 = binom(d, s1)
                        if c1:
                            slot = out.setdefault(wdeg, {})
                            oslot = slot.setdefault(s2, {})
                            term = elem * (c1 * c2)
                            v = oslot.get(s1)
                            v = term if v is None else v + term
                            if v:
                                oslot[s1] = v
                            elif s1 in oslot:
                                del oslot[s1]
                        s1 += 1
            s2 += 1
    ceil = None if (exact and not truncated) else _cmin(*ceil_cands)
    coeffs = {}
    for wd, orders in out.items():
        if ceil is not None and wd > ceil:
            continue
        pd = {s: VSeries(vs, None) for s, vs in orders.items() if vs}
        pd = {s: v for s, v in pd.items() if not v.is_exact_zero()}
        if pd:
            coeffs[wd] = PDO(pd, None, _trusted=True)
    return WSeries(coeffs, ceil, _trusted=True)
