"""Truncated formal q-expansions over the exact rings of :mod:`ikedalift.arith`."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .arith import to_string

DEFAULT_PRECISION = 200


class QExpansion:
    """sum_{m < precision} coeffs[m] q^m.

    ``ring`` is a tag naming the coefficient ring: ``None`` for Z/Q, otherwise a
    :class:`~ikedalift.arith.NumberField` or :class:`~ikedalift.arith.QuadRing`.
    Binary operations refuse mismatched tags and truncate to the smaller precision.
    """

    __slots__ = ("coeffs", "ring")

    def __init__(self, coeffs: Sequence, precision: int | None = None, ring=None):
        coeffs = list(coeffs)
        if precision is None:
            precision = len(coeffs)
        if precision < 0:
            raise ValueError("negative precision")
        coeffs = coeffs[:precision] + [0] * (precision - len(coeffs))
        self.coeffs = coeffs
        self.ring = ring

    @classmethod
    def from_dict(cls, terms: dict, precision: int, ring=None) -> "QExpansion":
        coeffs = [0] * precision
        for m, c in terms.items():
            if m >= precision:
                raise ValueError(f"exponent {m} beyond precision {precision}")
            coeffs[m] = c
        return cls(coeffs, precision, ring)

    @classmethod
    def from_function(cls, fn: Callable[[int], object], precision: int, ring=None) -> "QExpansion":
        return cls([fn(m) for m in range(precision)], precision, ring)

    @classmethod
    def zero(cls, precision: int, ring=None) -> "QExpansion":
        return cls([], precision, ring)

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, m: int):
        if m >= len(self.coeffs):
            raise IndexError(f"coefficient q^{m} beyond precision {len(self.coeffs)}")
        return self.coeffs[m]

    def __len__(self):
        return len(self.coeffs)

    def _check(self, other: "QExpansion"):
        if self.ring is not None and other.ring is not None and self.ring != other.ring:
            raise TypeError("coefficient ring mismatch")
        return self.ring if self.ring is not None else other.ring

    def __add__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        ring = self._check(other)
        n = min(self.precision, other.precision)
        return QExpansion([self.coeffs[i] + other.coeffs[i] for i in range(n)], n, ring)

    def __sub__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        ring = self._check(other)
        n = min(self.precision, other.precision)
        return QExpansion([self.coeffs[i] - other.coeffs[i] for i in range(n)], n, ring)

    def __neg__(self):
        return QExpansion([-c for c in self.coeffs], self.precision, self.ring)

    def __mul__(self, other):
        if not isinstance(other, QExpansion):
            return self.scale(other)
        ring = self._check(other)
        n = min(self.precision, other.precision)
        a, b = self.coeffs, other.coeffs
        if ring is None and _all_int(a) and _all_int(b):
            return QExpansion(int_poly_mul(a[:n], b[:n], n), n, None)
        out = [0] * n
        nz_b = [(j, y) for j, y in enumerate(b[:n]) if y != 0]
        for i in range(n):
            x = a[i]
            if x == 0:
                continue
            lim = n - i
            for j, y in nz_b:
                if j >= lim:
                    break
                out[i + j] = out[i + j] + x * y
        return QExpansion(out, n, ring)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a series")
        result = QExpansion([1], self.precision, self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c) -> "QExpansion":
        return QExpansion([c * x for x in self.coeffs], self.precision, self.ring)

    def Vp(self, p: int) -> "QExpansion":
        """q -> q^p, keeping the precision."""
        out = [0] * self.precision
        for m in range(0, (self.precision - 1) // p + 1 if self.precision else 0):
            out[p * m] = self.coeffs[m]
        return QExpansion(out, self.precision, self.ring)

    def Up(self, p: int) -> "QExpansion":
        """sum a_{pm} q^m; precision becomes floor(N / p)."""
        n = self.precision // p
        return QExpansion([self.coeffs[p * m] for m in range(n)], n, self.ring)

    def truncate(self, precision: int) -> "QExpansion":
        return QExpansion(self.coeffs[:precision], min(precision, self.precision), self.ring)

    def map(self, fn: Callable, ring=None) -> "QExpansion":
        return QExpansion([fn(c) for c in self.coeffs], self.precision, ring)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def valuation(self) -> int | None:
        for m, c in enumerate(self.coeffs):
            if c != 0:
                return m
        return None

    def nonzero_terms(self) -> Iterable[tuple[int, object]]:
        return ((m, c) for m, c in enumerate(self.coeffs) if c != 0)

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self.precision == other.precision and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def agrees_with(self, other: "QExpansion") -> bool:
        """Equality up to the common precision."""
        n = min(self.precision, other.precision)
        return all(self.coeffs[i] == other.coeffs[i] for i in range(n))

    def __repr__(self):
        return f"QExpansion({self.to_string(max_terms=8)}, precision={self.precision})"

    def to_string(self, max_terms: int | None = None) -> str:
        parts = []
        for m, c in self.nonzero_terms():
            if max_terms is not None and len(parts) >= max_terms:
                break
            s = to_string(c)
            if not isinstance(c, int) and not s.lstrip("-").replace("/", "").isdigit():
                s = f"({s})"
            mono = "" if m == 0 else ("q" if m == 1 else f"q^{m}")
            if not mono:
                parts.append(s)
            elif s == "1":
                parts.append(mono)
            elif s == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{s}*{mono}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(q^{self.precision})"


def _all_int(values) -> bool:
    return all(type(c) is int for c in values)


def int_poly_mul(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """Product of integer coefficient lists truncated to n terms, by Kronecker substitution."""
    if not a or not b or n == 0:
        return [0] * n
    bound = max(abs(c) for c in a) * max(abs(c) for c in b) * min(len(a), len(b))
    if bound == 0:
        return [0] * n
    bits = -(-(bound.bit_length() + 2) // 8) * 8
    A = _pack(a, bits)
    B = _pack(b, bits)
    return _unpack(A * B, bits, n)


def _pack(coeffs: Sequence[int], bits: int) -> int:
    width = bits // 8
    half = 1 << (bits - 1)
    raw = b"".join((c + half).to_bytes(width, "little") for c in coeffs)
    offset = int.from_bytes(half.to_bytes(width, "little") * len(coeffs), "little")
    return int.from_bytes(raw, "little") - offset


def _unpack(value: int, bits: int, n: int) -> list[int]:
    # shift every digit into [0, 2^bits) so the bytes can be sliced directly
    half = 1 << (bits - 1)
    offset = int.from_bytes((half.to_bytes(bits // 8, "little")) * n, "little")
    value = (value + offset) & ((1 << (bits * n)) - 1)
    width = bits // 8
    raw = value.to_bytes(width * n, "little")
    return [int.from_bytes(raw[i * width : (i + 1) * width], "little") - half for i in range(n)]


def series_add(a: QExpansion, b: QExpansion) -> QExpansion:
    return a + b


def series_mul(a: QExpansion, b: QExpansion) -> QExpansion:
    return a * b


def series_scale(a: QExpansion, c) -> QExpansion:
    return a.scale(c)


def series_Vp(a: QExpansion, p: int) -> QExpansion:
    return a.Vp(p)


def series_Up(a: QExpansion, p: int) -> QExpansion:
    return a.Up(p)
