"""Exact coefficient rings.

Three kinds of scalars appear in this package:

* rationals: Python ``int`` and ``fractions.Fraction``;
* elements of a number field Q[x]/(m(x)) (:class:`NumberFieldElem`), which house
  Hecke eigenvalues of elliptic eigenforms;
* elements of a formal quadratic extension base[y]/(y^2 - e1*y + e2)
  (:class:`QuadExtElem`), in which ``y`` plays the unit root alpha_l and its
  conjugate ``e1 - y`` plays beta_l.

Values are immutable; every operation returns a new object.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Sequence

import sympy

RATIONAL = (int, Fraction)

#: Degree of the zero polynomial.
MINUS_INFINITY = float("-inf")


def _trim(coeffs: list) -> list:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


# -- dense polynomials over Q, coefficient lists low -> high ------------------


def _qpoly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _qpoly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in a]
    _trim(rem)
    quo = [Fraction(0)] * max(len(rem) - len(b) + 1, 0)
    lead = Fraction(b[-1])
    while len(rem) >= len(b):
        shift = len(rem) - len(b)
        q = rem[-1] / lead
        quo[shift] = q
        for i, c in enumerate(b):
            rem[shift + i] -= q * c
        rem.pop()
        _trim(rem)
    return _trim(quo), rem


def _qpoly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [Fraction(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def _qpoly_resultant(f: Sequence, g: Sequence) -> Fraction:
    f = _trim([Fraction(c) for c in f])
    g = _trim([Fraction(c) for c in g])
    if not f or not g:
        return Fraction(0)
    df, dg = len(f) - 1, len(g) - 1
    if dg == 0:
        return g[0] ** df
    if df == 0:
        return f[0] ** dg
    _, r = _qpoly_divmod(f, g)
    if not r:
        return Fraction(0)
    dr = len(r) - 1
    sign = -1 if (df * dg) % 2 else 1
    # Res(f, g) = (-1)^{df dg} lc(g)^{df - dr} Res(g, r)
    return sign * g[-1] ** (df - dr) * _qpoly_resultant(g, r)


# -- number fields -------------------------------------------------------------


class NumberField:
    """Q[x]/(m(x)) for a monic irreducible integer polynomial m."""

    def __init__(self, minimal_polynomial: Sequence[int] | str, var: str = "x"):
        if isinstance(minimal_polynomial, str):
            sym = sympy.Symbol(var)
            poly = sympy.Poly(sympy.sympify(minimal_polynomial.replace("^", "**")), sym)
            coeffs = [int(c) for c in reversed(poly.all_coeffs())]
        else:
            coeffs = [int(c) for c in minimal_polynomial]
        _trim(coeffs)
        if len(coeffs) < 2 or coeffs[-1] != 1:
            raise ValueError("minimal polynomial must be monic of positive degree")
        self.var = var
        self.coeffs = tuple(coeffs)
        self.degree = len(coeffs) - 1
        if self.degree > 1:
            sym = sympy.Symbol(var)
            poly = sympy.Poly(list(reversed(coeffs)), sym)
            if not poly.is_irreducible:
                raise ValueError(f"{self.polynomial_string()} is reducible over Q")

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("NumberField", self.coeffs))

    def __repr__(self):
        return f"NumberField({self.polynomial_string()!r})"

    def polynomial_string(self) -> str:
        return Poly(list(self.coeffs), var=self.var).to_string()

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def gen(self) -> "NumberFieldElem":
        if self.degree == 1:
            return self(-self.coeffs[0])
        return NumberFieldElem(self, [0, 1])

    def __call__(self, value) -> "NumberFieldElem":
        if isinstance(value, NumberFieldElem):
            if value.field != self:
                raise TypeError("element of a different number field")
            return value
        if isinstance(value, RATIONAL):
            return NumberFieldElem(self, [value])
        if isinstance(value, (list, tuple)):
            return NumberFieldElem(self, value)
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot coerce {value!r} into {self!r}")

    def parse(self, text: str) -> "NumberFieldElem":
        sym = sympy.Symbol(self.var)
        expr = sympy.sympify(text.replace("^", "**"))
        poly = sympy.Poly(expr, sym)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
        _, rem = _qpoly_divmod(coeffs, self.coeffs)
        return NumberFieldElem(self, rem)


QQ = NumberField([0, 1])


class NumberFieldElem:
    """An element of a :class:`NumberField`, stored by its reduced representative."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Sequence):
        coords = [Fraction(c) for c in coords]
        if len(coords) > field.degree:
            _, coords = _qpoly_divmod(coords, field.coords if False else field.coeffs)
        coords = coords + [Fraction(0)] * (field.degree - len(coords))
        self.field = field
        self.coords = tuple(coords)

    # coercion
    def _other(self, other):
        if isinstance(other, NumberFieldElem):
            if other.field != self.field:
                raise TypeError("number field mismatch")
            return other
        if isinstance(other, RATIONAL):
            return NumberFieldElem(self.field, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return NumberFieldElem(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElem(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return NumberFieldElem(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RATIONAL):
            return NumberFieldElem(self.field, [a * other for a in self.coords])
        other = self._other(other)
        if other is NotImplemented:
            return other
        prod = _qpoly_mul(self.coords, other.coords)
        _, rem = _qpoly_divmod(prod, self.field.coeffs)
        return NumberFieldElem(self.field, rem)

    __rmul__ = __mul__

    def inverse(self) -> "NumberFieldElem":
        if self == 0:
            raise ZeroDivisionError("inverse of zero in a number field")
        # extended Euclid on (m, a)
        r0, r1 = [Fraction(c) for c in self.field.coeffs], _trim(list(self.coords))
        t0, t1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _qpoly_divmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, _qpoly_sub(t0, _qpoly_mul(q, t1))
        c = r1[0]
        return NumberFieldElem(self.field, [x / c for x in t1])

    def __truediv__(self, other):
        if isinstance(other, RATIONAL):
            return NumberFieldElem(self.field, [a / other for a in self.coords])
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = NumberFieldElem(self.field, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, RATIONAL):
            return self.coords[0] == other and not any(self.coords[1:])
        if isinstance(other, NumberFieldElem):
            return self.field == other.field and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        if not any(self.coords[1:]):
            return hash(self.coords[0])
        return hash((self.field, self.coords))

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coords[0]

    def norm(self) -> Fraction:
        """Product of the conjugates, as Res(m, a) for the monic minimal polynomial m."""
        return _qpoly_resultant(self.field.coeffs, self.coords)

    def trace(self) -> Fraction:
        x = self.field.gen() if self.field.degree > 1 else None
        if x is None:
            return self.coords[0]
        total = Fraction(0)
        basis = NumberFieldElem(self.field, [1])
        for i in range(self.field.degree):
            total += (self * basis).coords[i]
            basis = basis * x
        return total

    def denominator(self) -> int:
        return reduce(lambda a, b: a * b // _gcd(a, b), (c.denominator for c in self.coords), 1)

    def __repr__(self):
        return f"NumberFieldElem({self})"

    def __str__(self):
        return Poly(list(self.coords), var=self.field.var).to_string()


def _gcd(a: int, b: int) -> int:
    from math import gcd

    return gcd(a, b)


def field_norm(a) -> Fraction:
    """Norm to Q of a number-field element (rationals have norm equal to themselves)."""
    if isinstance(a, NumberFieldElem):
        return a.norm()
    return Fraction(a)


def common_field(values) -> NumberField:
    """The number field shared by a collection of scalars (QQ if all rational)."""
    field = QQ
    for v in values:
        if isinstance(v, NumberFieldElem) and v.field.degree > 1:
            if field is not QQ and field != v.field:
                raise TypeError("values live in different number fields")
            field = v.field
    return field


def to_string(value) -> str:
    """Serialize a scalar: decimal integers, ``a/b`` rationals, polynomials in x or y."""
    if isinstance(value, bool):
        raise TypeError("booleans are not ring elements")
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    return str(value)


def parse_scalar(text: str, field: NumberField | None = None):
    text = text.strip()
    if field is None or field.degree == 1:
        value = Fraction(text)
        return value.numerator if value.denominator == 1 else value
    return field.parse(text)


# -- formal quadratic extensions -----------------------------------------------


class QuadRing:
    """base[y]/(y^2 - e1*y + e2).

    With e1 = a_l(f) and e2 = l^(2k-1) the class of ``y`` is alpha_l and its
    conjugate ``e1 - y`` is beta_l.
    """

    def __init__(self, e1, e2, name: str = "y"):
        self.e1 = e1
        self.e2 = e2
        self.name = name

    def __eq__(self, other):
        return isinstance(other, QuadRing) and self.e1 == other.e1 and self.e2 == other.e2

    def __hash__(self):
        return hash(("QuadRing", self.e1, self.e2))

    def __repr__(self):
        return f"QuadRing(e1={to_string(self.e1)}, e2={to_string(self.e2)})"

    def __call__(self, c0, c1=0) -> "QuadExtElem":
        return QuadExtElem(self, c0, c1)

    @property
    def y(self) -> "QuadExtElem":
        return QuadExtElem(self, 0, 1)

    @property
    def alpha(self) -> "QuadExtElem":
        return self.y

    @property
    def beta(self) -> "QuadExtElem":
        return QuadExtElem(self, self.e1, -1)


class QuadExtElem:
    """c0 + c1*y in a :class:`QuadRing`."""

    __slots__ = ("ring", "c0", "c1")

    def __init__(self, ring: QuadRing, c0, c1=0):
        self.ring = ring
        self.c0 = c0
        self.c1 = c1

    def _other(self, other):
        if isinstance(other, QuadExtElem):
            if other.ring is not self.ring and other.ring != self.ring:
                raise TypeError("quadratic ring mismatch")
            return other
        if isinstance(other, (int, Fraction, NumberFieldElem)):
            return QuadExtElem(self.ring, other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return QuadExtElem(self.ring, self.c0 + other.c0, self.c1 + other.c1)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtElem(self.ring, -self.c0, -self.c1)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return QuadExtElem(self.ring, self.c0 - other.c0, self.c1 - other.c1)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, NumberFieldElem)):
            return QuadExtElem(self.ring, self.c0 * other, self.c1 * other)
        other = self._other(other)
        if other is NotImplemented:
            return other
        a0, a1, b0, b1 = self.c0, self.c1, other.c0, other.c1
        t = a1 * b1
        return QuadExtElem(
            self.ring,
            a0 * b0 - t * self.ring.e2,
            a0 * b1 + a1 * b0 + t * self.ring.e1,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExtElem":
        """y -> e1 - y, i.e. swap alpha and beta."""
        return QuadExtElem(self.ring, self.c0 + self.c1 * self.ring.e1, -self.c1)

    def norm(self):
        """self * conjugate(self), an element of the base ring."""
        prod = self * self.conjugate()
        return prod.c0

    def inverse(self) -> "QuadExtElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("element is a zero divisor in the quadratic ring")
        conj = self.conjugate()
        return QuadExtElem(self.ring, conj.c0 / n if not isinstance(conj.c0, int) else Fraction(conj.c0) / n,
                           conj.c1 / n if not isinstance(conj.c1, int) else Fraction(conj.c1) / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, NumberFieldElem)):
            if isinstance(other, int):
                other = Fraction(other)
            return QuadExtElem(self.ring, self.c0 / other, self.c1 / other)
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = QuadExtElem(self.ring, 1, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_symmetric(self) -> bool:
        return self.c1 == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, NumberFieldElem)):
            return self.c1 == 0 and self.c0 == other
        if isinstance(other, QuadExtElem):
            return self.ring == other.ring and self.c0 == other.c0 and self.c1 == other.c1
        return NotImplemented

    def __hash__(self):
        return hash((self.c0, self.c1))

    def __repr__(self):
        return f"QuadExtElem({self})"

    def __str__(self):
        def wrap(v):
            s = to_string(v)
            return f"({s})" if isinstance(v, NumberFieldElem) and ("+" in s or " - " in s) else s

        return f"{wrap(self.c0)} + {wrap(self.c1)}*{self.ring.name}"


def quadext_conjugate(a):
    if isinstance(a, QuadExtElem):
        return a.conjugate()
    return a


def quadext_is_symmetric(a) -> tuple[bool, object]:
    """Whether ``a`` is fixed by alpha <-> beta; the witness is its base-ring value."""
    if not isinstance(a, QuadExtElem):
        return True, a
    if a.c1 == 0:
        return True, a.c0
    return False, None


# -- one-variable polynomials over any of the rings above ----------------------


class Poly:
    """Dense polynomial in one variable, coefficients low -> high, trailing zeros trimmed."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Sequence = (), var: str = "X"):
        self.coeffs = tuple(_trim(list(coeffs)))
        self.var = var

    @classmethod
    def monomial(cls, c, e: int, var: str = "X") -> "Poly":
        return cls([0] * e + [c], var)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else MINUS_INFINITY

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _other(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly([other], self.var)

    def __add__(self, other):
        other = self._other(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] + other[i] for i in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([c * other for c in self.coeffs], self.var)
        if not self.coeffs or not other.coeffs:
            return Poly([], self.var)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out, self.var)

    def __rmul__(self, other):
        return Poly([other * c for c in self.coeffs], self.var)

    def __pow__(self, e: int):
        result = Poly([1], self.var)
        for _ in range(e):
            result = result * self
        return result

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod_monic(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other.coeffs or other.coeffs[-1] != 1:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        d = len(other.coeffs) - 1
        quo = [0] * max(len(rem) - d, 0)
        for shift in range(len(rem) - d - 1, -1, -1):
            q = rem[shift + d]
            quo[shift] = q
            if q != 0:
                for i, c in enumerate(other.coeffs):
                    rem[shift + i] = rem[shift + i] - q * c
        return Poly(quo, self.var), Poly(rem[:d], self.var)

    def divides(self, other: "Poly") -> bool:
        """Whether this monic polynomial divides ``other`` exactly."""
        _, r = other.divmod_monic(self)
        return r.degree == MINUS_INFINITY

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return len(self.coeffs) == len(other.coeffs) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({self.to_string()!r})"

    def __str__(self):
        return self.to_string()

    def to_string(self, descending: bool = None) -> str:
        """Render like ``1 - 1452*X + 161051*X^2``; number-field polys print high-to-low."""
        if not self.coeffs:
            return "0"
        if descending is None:
            descending = self.var != "X" and self.var != "Y"
        order = range(len(self.coeffs) - 1, -1, -1) if descending else range(len(self.coeffs))
        parts: list[tuple[str, str]] = []
        for i in order:
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if isinstance(c, RATIONAL):
                neg = c < 0
                mag = to_string(-c if neg else c)
                if mono:
                    body = mono if mag == "1" else f"{mag}*{mono}"
                else:
                    body = mag
                parts.append(("-" if neg else "+", body))
            else:
                s = to_string(c)
                body = f"({s})*{mono}" if mono else f"({s})"
                parts.append(("+", body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    @classmethod
    def parse(cls, text: str, var: str = "X") -> "Poly":
        sym = sympy.Symbol(var)
        poly = sympy.Poly(sympy.sympify(text.replace("^", "**")), sym)
        coeffs = []
        for c in reversed(poly.all_coeffs()):
            r = Fraction(int(c.p), int(c.q))
            coeffs.append(r.numerator if r.denominator == 1 else r)
        return cls(coeffs, var)
