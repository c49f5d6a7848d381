"""Integral binary quadratic forms [a, b, c] = a x^2 + b x y + c y^2.

Classes under SL2(Z) come from reduction (definite) or from cycles of reduced
forms (indefinite).  Classes of L_p(D) = {[a,b,c] primitive of discriminant D,
p | a} under Gamma0(p) are read off from a single SL2-class: inside the class of
Q they correspond to Aut(Q)-orbits on the zeros of Q in P^1(F_p).
For D < 0 only positive definite forms are considered.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterable

from sympy.solvers.diophantine.diophantine import diop_DN

from ..nt import crt_coprime_completion, is_square, kronecker

Matrix = tuple[tuple[int, int], tuple[int, int]]

IDENTITY: Matrix = ((1, 0), (0, 1))
MINUS_IDENTITY: Matrix = ((-1, 0), (0, -1))
S_MATRIX: Matrix = ((0, -1), (1, 0))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


def inverse(A: Matrix) -> Matrix:
    """Inverse of a determinant-one integer matrix."""
    (a, b), (c, d) = A
    return ((d, -b), (-c, a))


def matpow_mod(A: Matrix, e: int, m: int) -> Matrix:
    result = IDENTITY
    base = tuple(tuple(x % m for x in row) for row in A)
    while e:
        if e & 1:
            result = tuple(tuple(x % m for x in row) for row in matmul(result, base))
        base = tuple(tuple(x % m for x in row) for row in matmul(base, base))
        e >>= 1
    return result


def in_gamma0(M: Matrix, p: int) -> bool:
    return M[1][0] % p == 0


@dataclass(frozen=True, order=True)
class BinaryQF:
    a: int
    b: int
    c: int

    @classmethod
    def parse(cls, text: str) -> "BinaryQF":
        a, b, c = (int(x) for x in text.strip().strip("[]").split(","))
        return cls(a, b, c)

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return gcd(gcd(self.a, self.b), self.c)

    def is_primitive(self) -> bool:
        return self.content == 1

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def act(self, M: Matrix) -> "BinaryQF":
        """Q o M = M^t Q M, i.e. (x, y) -> Q(alpha x + beta y, gamma x + delta y)."""
        (al, be), (ga, de) = M
        return BinaryQF(
            self(al, ga),
            2 * self.a * al * be + self.b * (al * de + be * ga) + 2 * self.c * ga * de,
            self(be, de),
        )

    def __neg__(self) -> "BinaryQF":
        return BinaryQF(-self.a, -self.b, -self.c)

    def __str__(self):
        return f"[{self.a},{self.b},{self.c}]"


# -- definite reduction ----------------------------------------------------------


def _reduce_positive(Q: BinaryQF) -> tuple[BinaryQF, Matrix]:
    g = IDENTITY
    while True:
        a, b = Q.a, Q.b
        t = (a - b) // (2 * a)
        if t:
            T = ((1, t), (0, 1))
            Q, g = Q.act(T), matmul(g, T)
        if Q.a > Q.c:
            Q, g = Q.act(S_MATRIX), matmul(g, S_MATRIX)
            continue
        break
    if Q.a == Q.c and Q.b < 0:
        Q, g = Q.act(S_MATRIX), matmul(g, S_MATRIX)
    return Q, g


def reduce_definite(Q: BinaryQF) -> tuple[BinaryQF, Matrix]:
    """(R, g) with Q o g = R reduced (|b| <= a <= c up to the overall sign)."""
    if Q.disc >= 0:
        raise ValueError("form is not definite")
    if Q.a > 0:
        return _reduce_positive(Q)
    R, g = _reduce_positive(-Q)
    return -R, g


# -- indefinite reduction ------------------------------------------------------


def _is_reduced_indefinite(Q: BinaryQF) -> bool:
    D = Q.disc
    a2 = 2 * abs(Q.a)
    b = Q.b
    return 0 < b and b * b < D and (a2 + b) ** 2 > D and (a2 - b < 0 or (a2 - b) ** 2 < D)


def _rho(Q: BinaryQF) -> tuple[BinaryQF, Matrix]:
    """One Gauss step [a,b,c] -> [c, b', *] with b' = -b mod 2|c| normalized."""
    D = Q.disc
    r = isqrt(D)
    c = Q.c
    m = 2 * abs(c)
    if abs(c) > r:  # |c| > sqrt(D): choose -|c| < b' <= |c|
        bp = (-Q.b) % m
        if bp > abs(c):
            bp -= m
    else:  # sqrt(D) - 2|c| < b' < sqrt(D)
        bp = (-Q.b) % m
        bp = r - ((r - bp) % m)  # largest representative below sqrt(D)
    t = (bp + Q.b) // (2 * c)
    M = ((0, -1), (1, t))
    return Q.act(M), M


def reduce_indefinite(Q: BinaryQF) -> tuple[BinaryQF, Matrix]:
    if Q.disc <= 0 or is_square(Q.disc):
        raise ValueError("needs a positive non-square discriminant")
    g = IDENTITY
    for _ in range(10_000):
        if _is_reduced_indefinite(Q):
            return Q, g
        Q, M = _rho(Q)
        g = matmul(g, M)
    raise RuntimeError("indefinite reduction did not terminate")


def reduced_cycle(R: BinaryQF) -> list[tuple[BinaryQF, Matrix]]:
    """The rho-cycle of a reduced form, with cumulative transforms from R."""
    out = [(R, IDENTITY)]
    Q, g = R, IDENTITY
    while True:
        Q, M = _rho(Q)
        g = matmul(g, M)
        if Q == R:
            return out + [(Q, g)]
        out.append((Q, g))


def reduce_form(Q: BinaryQF) -> tuple[BinaryQF, Matrix]:
    return reduce_definite(Q) if Q.disc < 0 else reduce_indefinite(Q)


# -- class sets ------------------------------------------------------------------


def _check_disc(D: int):
    if D == 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a discriminant")
    if is_square(D):
        raise ValueError(f"square discriminant {D}: degenerate forms are not supported")


def _reduced_forms(D: int) -> list[BinaryQF]:
    if D < 0:
        out = []
        absD = -D
        for a in range(1, isqrt(absD // 3) + 1):
            for b in range(-a + 1, a + 1):
                if (b * b - D) % (4 * a):
                    continue
                c = (b * b - D) // (4 * a)
                if c < a or (b < 0 and a == c):
                    continue
                Q = BinaryQF(a, b, c)
                if Q.is_primitive():
                    out.append(Q)
        return out
    out = []
    r = isqrt(D)
    for b in range(1, r + 1):
        if b * b >= D or (b * b - D) % 4:
            continue
        ac = (b * b - D) // 4
        for a in range(1, -ac + 1):
            if ac % a:
                continue
            for sa in (a, -a):
                Q = BinaryQF(sa, b, ac // sa)
                if Q.is_primitive() and _is_reduced_indefinite(Q):
                    out.append(Q)
    return out


def sl2_classes(D: int) -> list[BinaryQF]:
    """Representatives of primitive forms of discriminant D modulo SL2(Z)
    (positive definite ones when D < 0)."""
    _check_disc(D)
    forms = _reduced_forms(D)
    if D < 0:
        return sorted(forms)
    seen: set[BinaryQF] = set()
    reps = []
    for Q in sorted(forms):
        if Q in seen:
            continue
        cyc = [F for F, _ in reduced_cycle(Q)]
        seen.update(cyc)
        reps.append(min(cyc))
    return sorted(reps)


def sl2_equivalence(Q1: BinaryQF, Q2: BinaryQF) -> Matrix | None:
    """Some g in SL2(Z) with Q1 o g = Q2, or None."""
    if Q1.disc != Q2.disc:
        return None
    R1, g1 = reduce_form(Q1)
    R2, g2 = reduce_form(Q2)
    if Q1.disc < 0:
        return matmul(g1, inverse(g2)) if R1 == R2 else None
    for F, h in reduced_cycle(R1):
        if F == R2:
            return matmul(matmul(g1, h), inverse(g2))
    return None


def sl2_class_of(Q: BinaryQF, reps: Iterable[BinaryQF]) -> BinaryQF:
    for R in reps:
        if sl2_equivalence(Q, R) is not None:
            return R
    raise ValueError(f"{Q} matches no representative")


def automorphs(Q: BinaryQF) -> tuple[list[Matrix], Matrix | None]:
    """(finite part, infinite generator): Aut^+(Q) = finite part x <generator>.

    Definite forms have a finite automorph group and no generator; for indefinite
    forms the finite part is {I, -I} and the generator is a fundamental automorph.
    """
    R, g = reduce_form(Q)
    gi = inverse(g)
    if Q.disc < 0:
        found = []
        for al in range(-2, 3):
            for be in range(-2, 3):
                for ga in range(-2, 3):
                    for de in range(-2, 3):
                        M = ((al, be), (ga, de))
                        if al * de - be * ga == 1 and R.act(M) == R:
                            found.append(M)
        return [matmul(matmul(g, M), gi) for M in found], None
    cyc = reduced_cycle(R)
    A = cyc[-1][1]
    return [IDENTITY, MINUS_IDENTITY], matmul(matmul(g, A), gi)


def pell_fundamental(D: int) -> tuple[int, int]:
    """Least t, u > 0 with t^2 - D u^2 = 4."""
    sols = [(abs(t), abs(u)) for t, u in diop_DN(D, 4) if u != 0]
    return min(sols, key=lambda s: (s[1], s[0]))


# -- Gamma0(p) ---------------------------------------------------------------


def _aut_mod_p(Q: BinaryQF, p: int) -> list[Matrix]:
    finite, gen = automorphs(Q)
    mats = {tuple(tuple(x % p for x in row) for row in M) for M in finite}
    if gen is not None:
        cur = tuple(tuple(x % p for x in row) for row in IDENTITY)
        base = matpow_mod(gen, 1, p)
        for _ in range(p * p * p + 1):
            for F in list(finite):
                mats.add(tuple(tuple(x % p for x in row) for row in matmul(F, cur)))
            cur = tuple(tuple(x % p for x in row) for row in matmul(cur, base))
            if cur == ((1, 0), (0, 1)):
                break
    return sorted(mats)


def gamma0_equivalence(Q1: BinaryQF, Q2: BinaryQF, p: int) -> Matrix | None:
    """Some g in Gamma0(p) with Q1 o g = Q2, or None."""
    g = sl2_equivalence(Q1, Q2)
    if g is None:
        return None
    finite, gen = automorphs(Q1)
    if gen is None:
        for A in finite:
            h = matmul(A, g)
            if in_gamma0(h, p):
                return h
        return None
    # A^j has finite order mod p; j runs over one period in both directions
    period = 1
    cur = matpow_mod(gen, 1, p)
    while cur != ((1, 0), (0, 1)):
        cur = tuple(tuple(x % p for x in row) for row in matmul(cur, matpow_mod(gen, 1, p)))
        period += 1
    power = IDENTITY
    for _ in range(period):
        for F in finite:
            h = matmul(matmul(F, power), g)
            if in_gamma0(h, p):
                return h
        power = matmul(power, gen)
    return None


def _projective_zeros(Q: BinaryQF, p: int) -> list[tuple[int, int]]:
    pts = [(x, 1) for x in range(p)] + [(1, 0)]
    return [v for v in pts if Q(*v) % p == 0]


def _normalize_point(v: tuple[int, int], p: int) -> tuple[int, int]:
    x, y = v[0] % p, v[1] % p
    if y:
        return ((x * pow(y, -1, p)) % p, 1)
    return (1, 0)


def gamma0_classes(D: int, p: int) -> list[BinaryQF]:
    """Representatives of L_p(D) / Gamma0(p)."""
    reps = []
    for Q in sl2_classes(D):
        auts = _aut_mod_p(Q, p)
        zeros = _projective_zeros(Q, p)
        seen: set[tuple[int, int]] = set()
        for v in zeros:
            if v in seen:
                continue
            orbit = {_normalize_point((A[0][0] * v[0] + A[0][1] * v[1], A[1][0] * v[0] + A[1][1] * v[1]), p) for A in auts}
            seen |= orbit
            b, d = crt_coprime_completion(v[0], v[1])
            g = ((v[0], b), (v[1], d))
            reps.append(Q.act(g))
    return reps


def binary_class_set(D: int, group: str = "SL2", p: int | None = None, subset: str = "L") -> list[BinaryQF]:
    """Orbit representatives of L(D) or L_p(D) under SL2(Z) or Gamma0(p)."""
    if group == "SL2" and subset == "L":
        return sl2_classes(D)
    if p is None:
        raise ValueError("p is required for Gamma0(p) or L_p")
    if group == "Gamma0":
        if subset != "Lp":
            raise ValueError("Gamma0(p) acts on L_p(D)")
        return gamma0_classes(D, p)
    if group == "SL2" and subset == "Lp":
        # SL2-classes meeting L_p(D); by Lemma (i) every class when p | D
        return [Q for Q in sl2_classes(D) if _projective_zeros(Q, p)]
    raise ValueError(f"unknown group/subset {group}/{subset}")


# -- genus character ---------------------------------------------------------


class InconclusiveError(RuntimeError):
    pass


def genus_character(Q: BinaryQF, d: int, bound: int = 200) -> int:
    """chi_d(Q) = (d / r) for an integer r represented by Q and prime to d; 0 if
    gcd(a, b, c, d) > 1."""
    D = Q.disc
    if D % d or (D // d) % 4 not in (0, 1):
        raise ValueError(f"{d} does not split the discriminant {D}")
    if gcd(Q.content, d) > 1:
        return 0
    if d == 1:
        return 1
    best = None
    for s in range(0, bound + 1):
        # shell max(|x|, |y|) = s, in a fixed order
        for x in range(-s, s + 1):
            for y in ((-s, s) if abs(x) != s else range(-s, s + 1)):
                if gcd(x, y) != 1:
                    continue
                r = Q(x, y)
                if r != 0 and gcd(r, d) == 1:
                    best = r
                    break
            if best is not None:
                break
        if best is not None:
            break
    if best is None:
        raise InconclusiveError(f"no value of {Q} prime to {d} with |x|, |y| <= {bound}")
    return kronecker(d, best)


# -- the correspondences between L(D), L_p(D) ------------------------------------


def lemma36_i(Q: BinaryQF, p: int) -> tuple[BinaryQF, Matrix]:
    """An SL2-equivalent form with p | a: translate so p | b, then apply [[p, p-1], [1, 1]]."""
    if Q.disc % p:
        raise ValueError("needs p | D")
    if Q.a % p == 0:
        return Q, IDENTITY
    g = IDENTITY
    if Q.b % p:
        beta = (-Q.b * pow(2 * Q.a, -1, p)) % p
        T = ((1, beta), (0, 1))
        Q, g = Q.act(T), matmul(g, T)
    M = ((p, p - 1), (1, 1))
    return Q.act(M), matmul(g, M)


def lemma36_ii(Q: BinaryQF, p: int) -> tuple[BinaryQF, Matrix]:
    """A Gamma0(p)-equivalent [a, b, c] with p^3 | a, when p^2 | D and (D/p^2 | p) = 1."""
    D = Q.disc
    if D % (p * p) or kronecker(D // (p * p), p) != 1:
        raise ValueError("needs p^2 | D and (D/p^2 | p) = 1")
    if Q.a % p:
        raise ValueError("form is not in L_p(D)")
    p3 = p**3
    for t in range(0, p + 1):
        for al in range(1, p3 + 1):
            if gcd(al, p * t) != 1:
                continue
            if Q(al, p * t) % p3 == 0:
                b, d = crt_coprime_completion(al, p * t)
                g = ((al, b), (p * t, d))
                return Q.act(g), g
    raise RuntimeError("no Gamma0(p) translate with p^3 | a found")


@dataclass
class CorrespondenceReport:
    variant: str
    D: int
    p: int
    pairs: list[tuple[BinaryQF, BinaryQF]]
    source_count: int
    target_count: int
    bijective: bool


def lemma36_correspondence(variant: str, D: int, p: int) -> CorrespondenceReport:
    """Verify the bijection L_p(D)/Gamma0(p) -> L(D)/SL2(Z) of variant iii or iv."""
    if D % p:
        raise ValueError("needs p | D")
    if variant == "iv" and D % (p * p) == 0:
        raise ValueError("variant iv needs p^2 not dividing D")
    targets = sl2_classes(D)
    sources = gamma0_classes(D, p)
    for i, Q1 in enumerate(sources):
        for Q2 in sources[i + 1 :]:
            if gamma0_equivalence(Q1, Q2, p) is not None:
                raise AssertionError(f"{Q1} and {Q2} are Gamma0({p})-equivalent")
    pairs = []
    for Q in sources:
        image = Q if variant == "iii" else BinaryQF(Q.a // p, Q.b, p * Q.c)
        pairs.append((Q, sl2_class_of(image, targets)))
    images = [t for _, t in pairs]
    bijective = len(set(images)) == len(images) == len(targets)
    return CorrespondenceReport(variant, D, p, pairs, len(sources), len(targets), bijective)


def lemma36_map(variant: str, Q: BinaryQF | None = None, p: int | None = None, D: int | None = None):
    if variant == "i":
        return lemma36_i(Q, p)
    if variant == "ii":
        return lemma36_ii(Q, p)
    if variant in ("iii", "iv"):
        return lemma36_correspondence(variant, D, p)
    raise ValueError(f"unknown variant {variant}")
