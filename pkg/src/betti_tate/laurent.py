"""Exact Laurent polynomials and matrices over R = Q[y, y^-1].

R is a Euclidean domain: every nonzero element is a unit monomial times a
polynomial with nonzero constant term, and the exponent spread
(max exponent - min exponent) serves as the Euclidean size.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Fraction",
    "LaurentPoly",
    "LaurentMatrix",
    "Y",
    "ONE",
    "ZERO",
    "rational_to_json",
    "rational_from_json",
    "as_poly",
]


def rational_to_json(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def rational_from_json(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"not a rational: {s!r}")
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {s!r}") from exc


class LaurentPoly:
    """An element of Q[y, y^-1], stored as sorted (exponent, coefficient) pairs."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        acc: dict[int, Fraction] = {}
        for e, c in items:
            c = Fraction(c)
            if c:
                acc[int(e)] = acc.get(int(e), Fraction(0)) + c
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))
        self._hash = None

    @classmethod
    def _raw(cls, terms: tuple) -> "LaurentPoly":
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        c = Fraction(c)
        return cls._raw(((0, c),) if c else ())

    @classmethod
    def monomial(cls, c, e: int) -> "LaurentPoly":
        c = Fraction(c)
        return cls._raw(((int(e), c),) if c else ())

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, low: int = 0) -> "LaurentPoly":
        """Build sum coeffs[i] * y^(low + i)."""
        return cls((low + i, c) for i, c in enumerate(coeffs))

    # -- basic queries ---------------------------------------------------

    @property
    def terms(self) -> tuple:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def nterms(self) -> int:
        return len(self._terms)

    def low(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no lowest exponent")
        return self._terms[0][0]

    def high(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no highest exponent")
        return self._terms[-1][0]

    def spread(self) -> int:
        """Euclidean size: high - low. Units have spread 0."""
        if not self._terms:
            raise ValueError("zero polynomial has no spread")
        return self._terms[-1][0] - self._terms[0][0]

    def is_unit(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self._terms[0][0] == 0)

    def coeff(self, e: int) -> Fraction:
        for ee, c in self._terms:
            if ee == e:
                return c
        return Fraction(0)

    def __call__(self, value) -> Fraction:
        value = Fraction(value)
        if not value and any(e < 0 for e, _ in self._terms):
            raise ZeroDivisionError("negative power of y evaluated at 0")
        return sum((c * value**e for e, c in self._terms), Fraction(0))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        acc = dict(self._terms)
        for e, c in other._terms:
            acc[e] = acc.get(e, Fraction(0)) + c
        return LaurentPoly._raw(tuple(sorted((e, c) for e, c in acc.items() if c)))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(tuple((e, -c) for e, c in self._terms))

    def __sub__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        if len(other._terms) == 1:
            e2, c2 = other._terms[0]
            return LaurentPoly._raw(tuple((e + e2, c * c2) for e, c in self._terms))
        if len(self._terms) == 1:
            return other * self
        acc: dict[int, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                acc[e1 + e2] = acc.get(e1 + e2, Fraction(0)) + c1 * c2
        return LaurentPoly._raw(tuple(sorted((e, c) for e, c in acc.items() if c)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.unit_inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def unit_inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit of Q[y, y^-1]")
        e, c = self._terms[0]
        return LaurentPoly._raw(((-e, 1 / c),))

    def divmod(self, other: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """Euclidean division: self = q*other + r with r = 0 or spread(r) < spread(other)."""
        other = as_poly(other)
        if not other._terms:
            raise ZeroDivisionError("division by zero in Q[y, y^-1]")
        if not self._terms:
            return ZERO, ZERO
        b0 = other._terms[0][0]
        a0 = self._terms[0][0]
        # polynomial parts with nonzero constant term
        bdeg = other._terms[-1][0] - b0
        b = [Fraction(0)] * (bdeg + 1)
        for e, c in other._terms:
            b[e - b0] = c
        adeg = self._terms[-1][0] - a0
        a = [Fraction(0)] * (adeg + 1)
        for e, c in self._terms:
            a[e - a0] = c
        q = [Fraction(0)] * max(adeg - bdeg + 1, 0)
        lead = b[-1]
        for i in range(adeg - bdeg, -1, -1):
            coef = a[i + bdeg] / lead
            if coef:
                q[i] = coef
                for j in range(bdeg + 1):
                    a[i + j] -= coef * b[j]
        quo = LaurentPoly.from_coeffs(q, a0 - b0)
        rem = LaurentPoly.from_coeffs(a[:bdeg], a0)
        return quo, rem

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "LaurentPoly") -> bool:
        """True iff self | other in R."""
        other = as_poly(other)
        if not self._terms:
            return not other._terms
        return not other.divmod(self)[1]

    def normalized(self) -> "LaurentPoly":
        """Unit multiple with lowest exponent 0 and lowest coefficient 1."""
        if not self._terms:
            return self
        return self * self.normalizing_unit()

    def normalizing_unit(self) -> "LaurentPoly":
        e, c = self._terms[0]
        return LaurentPoly._raw(((-e, 1 / c),))

    # -- comparison, hashing, printing -------------------------------------

    def __eq__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms:
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                ypart = "y" if e == 1 else f"y^{e}"
                body = ypart if mag == 1 else f"{mag}*{ypart}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> list:
        return [[e, rational_to_json(c)] for e, c in self._terms]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        if not isinstance(data, list):
            raise ValueError(f"LaurentPoly must be a list of [exponent, coefficient] pairs: {data!r}")
        terms = []
        seen = set()
        for item in data:
            if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], int)
                    and not isinstance(item[0], bool)):
                raise ValueError(f"bad LaurentPoly term: {item!r}")
            if item[0] in seen:
                raise ValueError(f"repeated exponent {item[0]}")
            seen.add(item[0])
            terms.append((item[0], rational_from_json(item[1])))
        return cls(terms)


def as_poly(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction, _RationalABC)) and not isinstance(x, bool):
        return LaurentPoly.const(x)
    return NotImplemented


ZERO = LaurentPoly._raw(())
ONE = LaurentPoly._raw(((0, Fraction(1)),))
Y = LaurentPoly._raw(((1, Fraction(1)),))


class LaurentMatrix:
    """Dense, immutable matrix over Q[y, y^-1]."""

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, rows: Sequence[Sequence] = (), nrows: int | None = None,
                 ncols: int | None = None):
        rows = [tuple(as_poly(e) for e in row) for row in rows]
        if nrows is None:
            nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if len(rows) != nrows:
            raise ValueError(f"expected {nrows} rows, got {len(rows)}")
        for row in rows:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            if any(e is NotImplemented for e in row):
                raise TypeError("matrix entries must be Laurent polynomials or rationals")
        self.nrows = nrows
        self.ncols = ncols
        self._rows = tuple(rows)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "LaurentMatrix":
        return cls([[ZERO] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def scalar(cls, n: int, c) -> "LaurentMatrix":
        c = as_poly(c)
        return cls([[c if i == j else ZERO for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diagonal(cls, entries: Sequence, nrows: int, ncols: int) -> "LaurentMatrix":
        m = [[ZERO] * ncols for _ in range(nrows)]
        for i, e in enumerate(entries):
            m[i][i] = as_poly(e)
        return cls(m, nrows, ncols)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "LaurentMatrix":
        return cls([[col[i] for col in cols] for i in range(nrows)], nrows, len(cols))

    @classmethod
    def block(cls, blocks: Sequence[Sequence["LaurentMatrix"]]) -> "LaurentMatrix":
        rows = []
        for brow in blocks:
            h = brow[0].nrows
            for i in range(h):
                row = []
                for b in brow:
                    if b.nrows != h:
                        raise ValueError("block row heights differ")
                    row.extend(b._rows[i])
                rows.append(row)
        ncols = sum(b.ncols for b in blocks[0]) if blocks else 0
        return cls(rows, len(rows), ncols)

    @classmethod
    def block_diag(cls, mats: Sequence["LaurentMatrix"]) -> "LaurentMatrix":
        nr = sum(m.nrows for m in mats)
        nc = sum(m.ncols for m in mats)
        out = [[ZERO] * nc for _ in range(nr)]
        r0 = c0 = 0
        for m in mats:
            for i in range(m.nrows):
                for j in range(m.ncols):
                    out[r0 + i][c0 + j] = m._rows[i][j]
            r0 += m.nrows
            c0 += m.ncols
        return cls(out, nr, nc)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def rows(self) -> tuple:
        return self._rows

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> Iterator[tuple]:
        for j in range(self.ncols):
            yield self.column(j)

    def to_lists(self) -> list[list[LaurentPoly]]:
        return [list(r) for r in self._rows]

    def is_zero(self) -> bool:
        return all(not e for r in self._rows for e in r)

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and all(
            e == (ONE if i == j else ZERO) for i, r in enumerate(self._rows) for j, e in enumerate(r))

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix([self.column(j) for j in range(self.ncols)], self.ncols, self.nrows)

    @property
    def T(self) -> "LaurentMatrix":
        return self.transpose()

    def select_columns(self, idx: Sequence[int]) -> "LaurentMatrix":
        return LaurentMatrix([[r[j] for j in idx] for r in self._rows], self.nrows, len(idx))

    def select_rows(self, idx: Sequence[int]) -> "LaurentMatrix":
        return LaurentMatrix([self._rows[i] for i in idx], len(idx), self.ncols)

    def hstack(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.nrows != other.nrows:
            raise ValueError("hstack needs equal row counts")
        return LaurentMatrix([a + b for a, b in zip(self._rows, other._rows)],
                             self.nrows, self.ncols + other.ncols)

    def vstack(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.ncols != other.ncols:
            raise ValueError("vstack needs equal column counts")
        return LaurentMatrix(self._rows + other._rows, self.nrows + other.nrows, self.ncols)

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return LaurentMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)],
                             self.nrows, self.ncols)

    def __neg__(self) -> "LaurentMatrix":
        return LaurentMatrix([[-a for a in r] for r in self._rows], self.nrows, self.ncols)

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return self + (-other)

    def scale(self, c) -> "LaurentMatrix":
        c = as_poly(c)
        return LaurentMatrix([[c * a for a in r] for r in self._rows], self.nrows, self.ncols)

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.column(j) for j in range(other.ncols)]
        out = []
        for r in self._rows:
            row = []
            for col in cols:
                acc = ZERO
                for a, b in zip(r, col):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LaurentMatrix(out, self.nrows, other.ncols)

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum((a * as_poly(b) for a, b in zip(r, vec) if a and b), ZERO) for r in self._rows)

    def map_entries(self, fn) -> "LaurentMatrix":
        return LaurentMatrix([[fn(a) for a in r] for r in self._rows], self.nrows, self.ncols)

    def evaluate(self, value) -> list[list[Fraction]]:
        return [[a(value) for a in r] for r in self._rows]

    def det(self) -> LaurentPoly:
        """Determinant by cofactor-free fraction-free elimination (small sizes only)."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return ONE
        # Laplace expansion along the first row; sizes here are tiny.
        if n == 1:
            return self._rows[0][0]
        total = ZERO
        for j, a in enumerate(self._rows[0]):
            if not a:
                continue
            minor = LaurentMatrix([r[:j] + r[j + 1:] for r in self._rows[1:]], n - 1, n - 1)
            term = a * minor.det()
            total = total + (term if j % 2 == 0 else -term)
        return total

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.nrows, self.ncols, self._rows))

    def __repr__(self):
        body = "; ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self._rows)
        return f"LaurentMatrix({self.nrows}x{self.ncols}: {body})"

    def to_json(self) -> list:
        return [[e.to_json() for e in r] for r in self._rows]

    @classmethod
    def from_json(cls, data, nrows: int | None = None, ncols: int | None = None) -> "LaurentMatrix":
        if not isinstance(data, list):
            raise ValueError("matrix must be a nested list")
        rows = []
        for r in data:
            if not isinstance(r, list):
                raise ValueError("matrix rows must be lists")
            rows.append([LaurentPoly.from_json(e) for e in r])
        return cls(rows, nrows if nrows is not None else len(rows), ncols)
