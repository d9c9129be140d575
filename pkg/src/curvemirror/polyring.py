"""Exact arithmetic: Gaussian rationals, sparse polynomials in x, y, z,
and matrices over that polynomial ring.

Everything here is immutable and hashable, and all arithmetic is exact
(built on fractions.Fraction).  No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Scalarish = Union[int, Fraction, "QI"]


class QI:
    """A Gaussian rational re + im*i with Fraction components.

    >>> (QI(1, 2) * QI(1, -2)).re
    Fraction(5, 1)
    >>> QI.i() ** 2 == QI(-1)
    True
    >>> QI(3, 4) / QI(3, 4)
    QI(1)
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Scalarish = 0, im=0):
        if isinstance(re, QI):
            object.__setattr__(self, "re", re.re)
            object.__setattr__(self, "im", re.im + Fraction(im))
            return
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("QI is immutable")

    @staticmethod
    def i() -> "QI":
        return QI(0, 1)

    @staticmethod
    def _coerce(other) -> "QI | None":
        if isinstance(other, QI):
            return other
        if isinstance(other, (int, Fraction)):
            return QI(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QI(self.re * o.re - self.im * o.im,
                  self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def conjugate(self) -> "QI":
        return QI(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "QI":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return QI(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QI(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_rational(self) -> bool:
        return self.im == 0

    def __repr__(self):
        if self.im == 0:
            return f"QI({self.re})"
        return f"QI({self.re}, {self.im})"

    def __str__(self):
        return format_qi(self)


def format_qi(c: QI) -> str:
    """Canonical text form: 1, -2, 1/2, i, -i, 3*i, 1+i, 1-2*i."""
    re, im = c.re, c.im
    if im == 0:
        return str(re)
    if im == 1:
        imtxt = "i"
    elif im == -1:
        imtxt = "-i"
    else:
        imtxt = f"{im}*i"
    if re == 0:
        return imtxt
    sign = "+" if im > 0 else "-"
    mag = imtxt.lstrip("-")
    return f"{re}{sign}{mag}"


QI_ZERO = QI(0)
QI_ONE = QI(1)
QI_I = QI(0, 1)


class _DegreeMarker:
    """Sentinel result of weighted_degree_check."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)

    def __setattr__(self, name, value):
        raise AttributeError("marker is immutable")

    def __repr__(self):
        return self.name


#: Marker: the polynomial mixes terms of different weighted degrees.
NON_HOMOGENEOUS = _DegreeMarker("NON_HOMOGENEOUS")
#: Marker: the zero polynomial (every degree vacuously).
ZERO_POLY = _DegreeMarker("ZERO_POLY")

Exps = tuple  # (ex, ey, ez) with nonnegative int entries

_VAR_INDEX = {"x": 0, "y": 1, "z": 2}
_VAR_NAMES = ("x", "y", "z")


class SparsePoly:
    """Sparse polynomial in x, y, z over the Gaussian rationals.

    Terms are held as a dict mapping exponent triples to nonzero QI
    coefficients.  Instances are treated as immutable.

    >>> x, y, z = SparsePoly.gens()
    >>> print(x**2 + x*y - z)
    x^2 + x*y - z
    >>> print((x + y) * (x - y))
    x^2 - y^2
    >>> SparsePoly.parse("x^3 + x*y^2") == x**3 + x*y**2
    True
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Exps, QI] | None = None):
        clean: dict[Exps, QI] = {}
        if terms:
            for exps, coeff in terms.items():
                if not isinstance(coeff, QI):
                    coeff = QI(coeff)
                if coeff:
                    e = tuple(int(v) for v in exps)
                    if len(e) != 3 or any(v < 0 for v in e):
                        raise ValueError(f"bad exponent triple {exps!r}")
                    clean[e] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "SparsePoly":
        return SparsePoly()

    @staticmethod
    def one() -> "SparsePoly":
        return SparsePoly({(0, 0, 0): QI_ONE})

    @staticmethod
    def const(c: Scalarish) -> "SparsePoly":
        return SparsePoly({(0, 0, 0): QI(c)})

    @staticmethod
    def var(name: str) -> "SparsePoly":
        i = _VAR_INDEX[name]
        e = [0, 0, 0]
        e[i] = 1
        return SparsePoly({tuple(e): QI_ONE})

    @staticmethod
    def gens() -> tuple["SparsePoly", "SparsePoly", "SparsePoly"]:
        return (SparsePoly.var("x"), SparsePoly.var("y"), SparsePoly.var("z"))

    @staticmethod
    def monomial(exps: Sequence[int], coeff: Scalarish = 1) -> "SparsePoly":
        return SparsePoly({tuple(exps): QI(coeff)})

    @staticmethod
    def _coerce(other) -> "SparsePoly | None":
        if isinstance(other, SparsePoly):
            return other
        if isinstance(other, (int, Fraction, QI)):
            return SparsePoly.const(other)
        return None

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for exps, coeff in o.terms.items():
            s = out.get(exps, QI_ZERO) + coeff
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return SparsePoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __neg__(self):
        return SparsePoly({e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[Exps, QI] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                s = out.get(e, QI_ZERO) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return SparsePoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = SparsePoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ----------------------------------------------------

    def coefficient(self, exps: Sequence[int]) -> QI:
        return self.terms.get(tuple(exps), QI_ZERO)

    def sorted_terms(self) -> list[tuple[Exps, QI]]:
        """Terms in display order: total degree descending, then lex
        descending on (x, y, z), so x^2 precedes x*y precedes y^2."""
        return sorted(self.terms.items(),
                      key=lambda item: (-sum(item[0]),
                                        tuple(-e for e in item[0])))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_constant(self) -> bool:
        return all(e == (0, 0, 0) for e in self.terms)

    def constant_value(self) -> QI:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.coefficient((0, 0, 0))

    def is_unit_constant(self) -> bool:
        """True when the polynomial is a nonzero scalar."""
        return len(self.terms) == 1 and (0, 0, 0) in self.terms

    def weighted_degrees(self, weights: Sequence[Fraction]) -> set[Fraction]:
        """The set of weighted degrees of the terms."""
        w = [Fraction(v) for v in weights]
        return {e[0] * w[0] + e[1] * w[1] + e[2] * w[2] for e in self.terms}

    def is_quasihomogeneous(self, weights: Sequence[Fraction],
                            degree) -> bool:
        degs = self.weighted_degrees(weights)
        return degs <= {Fraction(degree)}

    def weighted_degree_check(self, weights: Sequence[Fraction]):
        """Common weighted degree of all terms, or a marker.

        Returns the degree (a Fraction) when every term has the same
        weighted degree, ``ZERO_POLY`` for the zero polynomial, and
        ``NON_HOMOGENEOUS`` when terms of different degrees are mixed.

        >>> x, y, z = SparsePoly.gens()
        >>> (x**2 + y**3).weighted_degree_check([3, 2, 0])
        Fraction(6, 1)
        >>> (x + y).weighted_degree_check([1, 2, 0]) is NON_HOMOGENEOUS
        True
        >>> SparsePoly.zero().weighted_degree_check([1, 1, 1]) is ZERO_POLY
        True
        """
        degs = self.weighted_degrees(weights)
        if not degs:
            return ZERO_POLY
        if len(degs) == 1:
            return next(iter(degs))
        return NON_HOMOGENEOUS

    # -- substitution ---------------------------------------------------

    def substitute(self, mapping: Mapping[str, "SparsePoly"]) -> "SparsePoly":
        """Ring homomorphism sending each named variable to a polynomial.

        Variables absent from the mapping are kept.

        >>> x, y, z = SparsePoly.gens()
        >>> print((x*y + z).substitute({"z": x**2}))
        x^2 + x*y
        """
        images = []
        for name in _VAR_NAMES:
            images.append(mapping.get(name, SparsePoly.var(name)))
        out = SparsePoly.zero()
        # Cache powers per variable to avoid rework on repeated exponents.
        pow_cache: list[dict[int, SparsePoly]] = [
            {0: SparsePoly.one()} for _ in range(3)]

        def power(i: int, n: int) -> SparsePoly:
            cache = pow_cache[i]
            if n not in cache:
                cache[n] = images[i] ** n
            return cache[n]

        for exps, coeff in self.terms.items():
            term = SparsePoly.const(coeff)
            for i, n in enumerate(exps):
                if n:
                    term = term * power(i, n)
            out = out + term
        return out

    # -- text ------------------------------------------------------------

    @staticmethod
    def parse(text: str) -> "SparsePoly":
        """Parse expressions like "x^3 + x*y^2", "-2*i*x*z", "(1+i)*y".

        Supported syntax: +, -, *, ^ (or **), integer and fraction scalars,
        the imaginary unit i, the variables x/y/z, and parentheses.

        >>> SparsePoly.parse("x^2*y - 3*z") == (
        ...     SparsePoly.monomial((2, 1, 0)) - 3 * SparsePoly.var("z"))
        True
        """
        return _PolyParser(text).parse()

    def __str__(self):
        if not self.terms:
            return "0"
        parts: list[str] = []
        for exps, coeff in self.sorted_terms():
            mono = "*".join(
                (name if n == 1 else f"{name}^{n}")
                for name, n in zip(_VAR_NAMES, exps) if n)
            ctxt = format_qi(coeff)
            if mono:
                if coeff == QI_ONE:
                    body = mono
                elif coeff == QI(-1):
                    body = f"-{mono}"
                elif ("+" in ctxt[1:]) or ("-" in ctxt[1:]):
                    body = f"({ctxt})*{mono}"
                else:
                    body = f"{ctxt}*{mono}"
            else:
                body = f"({ctxt})" if ("+" in ctxt[1:] or "-" in ctxt[1:]) else ctxt
            parts.append(body)
        out = parts[0]
        for part in parts[1:]:
            if part.startswith("-"):
                out += f" - {part[1:]}"
            else:
                out += f" + {part}"
        return out

    def __repr__(self):
        return f"SparsePoly({self})"


class _PolyParser:
    """Recursive-descent parser for the polynomial text syntax."""

    def __init__(self, text: str):
        self.tokens = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text: str) -> list[str]:
        tokens: list[str] = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                tokens.append(text[i:j])
                i = j
            elif ch in "xyzi":
                tokens.append(ch)
                i += 1
            elif text.startswith("**", i):
                tokens.append("^")
                i += 2
            elif ch in "+-*/^()":
                tokens.append(ch)
                i += 1
            else:
                raise ValueError(f"unexpected character {ch!r} in polynomial")
        return tokens

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of polynomial text")
        self.pos += 1
        return tok

    def parse(self) -> SparsePoly:
        value = self.expr()
        if self.peek() is not None:
            raise ValueError(f"trailing tokens at {self.tokens[self.pos:]}")
        return value

    def expr(self) -> SparsePoly:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        value = sign * self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> SparsePoly:
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                value = value * SparsePoly.const(rhs.constant_value().inverse())
        return value

    def factor(self) -> SparsePoly:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        base = self.atom()
        if self.peek() == "^":
            self.take()
            exp_tok = self.take()
            if not exp_tok.isdigit():
                raise ValueError(f"expected integer exponent, got {exp_tok!r}")
            base = base ** int(exp_tok)
        return sign * base

    def atom(self) -> SparsePoly:
        tok = self.take()
        if tok == "(":
            value = self.expr()
            if self.take() != ")":
                raise ValueError("unbalanced parenthesis")
            return value
        if tok.isdigit():
            return SparsePoly.const(int(tok))
        if tok == "i":
            return SparsePoly.const(QI_I)
        if tok in _VAR_INDEX:
            return SparsePoly.var(tok)
        raise ValueError(f"unexpected token {tok!r}")


P_ZERO = SparsePoly.zero()
P_ONE = SparsePoly.one()


class RingMatrix:
    """Immutable matrix over SparsePoly.

    >>> m = RingMatrix.from_strings([["x", "y"], ["-y", "x"]])
    >>> print((m * m.transpose()).entry(0, 0))
    x^2 + y^2
    >>> RingMatrix.identity(2).is_identity()
    True
    """

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[SparsePoly]]):
        packed = []
        width = None
        for row in rows:
            tup = tuple(self._entry_coerce(v) for v in row)
            if width is None:
                width = len(tup)
            elif len(tup) != width:
                raise ValueError("ragged matrix rows")
            packed.append(tup)
        if not packed or width == 0:
            raise ValueError("empty matrix")
        object.__setattr__(self, "rows", tuple(packed))

    def __setattr__(self, name, value):
        raise AttributeError("RingMatrix is immutable")

    @staticmethod
    def _entry_coerce(v) -> SparsePoly:
        if isinstance(v, SparsePoly):
            return v
        if isinstance(v, str):
            return SparsePoly.parse(v)
        if isinstance(v, (int, Fraction, QI)):
            return SparsePoly.const(v)
        raise TypeError(f"cannot use {v!r} as a matrix entry")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_strings(rows: Sequence[Sequence[str]]) -> "RingMatrix":
        return RingMatrix(rows)

    @staticmethod
    def identity(n: int) -> "RingMatrix":
        return RingMatrix([[P_ONE if i == j else P_ZERO for j in range(n)]
                           for i in range(n)])

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "RingMatrix":
        return RingMatrix([[P_ZERO] * ncols for _ in range(nrows)])

    @staticmethod
    def scalar(n: int, value) -> "RingMatrix":
        v = RingMatrix._entry_coerce(value)
        return RingMatrix([[v if i == j else P_ZERO for j in range(n)]
                           for i in range(n)])

    @staticmethod
    def block(layout: Sequence[Sequence["RingMatrix"]]) -> "RingMatrix":
        """Assemble a block matrix from a grid of compatible matrices."""
        rows: list[list[SparsePoly]] = []
        for block_row in layout:
            height = block_row[0].nrows
            if any(b.nrows != height for b in block_row):
                raise ValueError("inconsistent block heights")
            for i in range(height):
                row: list[SparsePoly] = []
                for b in block_row:
                    row.extend(b.rows[i])
                rows.append(row)
        return RingMatrix(rows)

    # -- shape and access -------------------------------------------------

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def entry(self, i: int, j: int) -> SparsePoly:
        return self.rows[i][j]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return RingMatrix([[a + b for a, b in zip(r1, r2)]
                           for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return RingMatrix([[-v for v in row] for row in self.rows])

    def __mul__(self, other):
        if isinstance(other, RingMatrix):
            if self.ncols != other.nrows:
                raise ValueError(
                    f"cannot multiply {self.shape} by {other.shape}")
            cols = other.ncols
            out = []
            for row in self.rows:
                new_row = []
                for j in range(cols):
                    acc = P_ZERO
                    for k, a in enumerate(row):
                        if a:
                            acc = acc + a * other.rows[k][j]
                    new_row.append(acc)
                out.append(new_row)
            return RingMatrix(out)
        scalar = SparsePoly._coerce(other)
        if scalar is None:
            return NotImplemented
        return self.map(lambda p: p * scalar)

    def __rmul__(self, other):
        scalar = SparsePoly._coerce(other)
        if scalar is None:
            return NotImplemented
        return self.map(lambda p: scalar * p)

    def transpose(self) -> "RingMatrix":
        return RingMatrix(list(zip(*self.rows)))

    def map(self, fn) -> "RingMatrix":
        return RingMatrix([[fn(v) for v in row] for row in self.rows])

    def substitute(self, mapping: Mapping[str, SparsePoly]) -> "RingMatrix":
        return self.map(lambda p: p.substitute(mapping))

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return all(not v for row in self.rows for v in row)

    def is_identity(self) -> bool:
        return self.is_scalar(P_ONE)

    def is_scalar(self, value) -> bool:
        """True when the matrix equals value * identity."""
        v = self._entry_coerce(value)
        if self.nrows != self.ncols:
            return False
        for i, row in enumerate(self.rows):
            for j, entry in enumerate(row):
                want = v if i == j else P_ZERO
                if entry != want:
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __str__(self):
        body = "], [".join(
            ", ".join(str(v) for v in row) for row in self.rows)
        return f"[[{body}]]"

    def __repr__(self):
        return f"RingMatrix({self})"

    def to_strings(self) -> list[list[str]]:
        return [[str(v) for v in row] for row in self.rows]
