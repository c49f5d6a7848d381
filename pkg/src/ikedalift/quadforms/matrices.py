"""Half-integral symmetric matrices of even size, their discriminant data, isometry
testing and desk-scale class enumeration.

A matrix T of size 2n is written in the tuple order

    genus 2: [t11, t22, t12]
    genus 4: [t11, t22, t33, t44, t12, t13, t23, t14, t24, t34]

where the off-diagonal slots hold the integers 2*t_ij.  Internally we keep the
even Gram matrix G = 2T.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd, isqrt

import numpy as np

from ..nt import factorize, fundamental_part

OFFDIAG_ORDER = {
    2: [(0, 1)],
    4: [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)],
}


def _det(m: list[list[int]]) -> int:
    """Exact determinant by fraction-free elimination (Bareiss)."""
    n = len(m)
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class HalfIntMatrix:
    """A half-integral symmetric matrix of size ``genus`` (2 or 4)."""

    genus: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.genus not in OFFDIAG_ORDER:
            raise ValueError("genus must be 2 or 4")
        expected = self.genus + len(OFFDIAG_ORDER[self.genus])
        if len(self.entries) != expected:
            raise ValueError(f"genus {self.genus} needs {expected} entries")
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))

    @classmethod
    def from_entries(cls, entries) -> "HalfIntMatrix":
        entries = tuple(entries)
        genus = {3: 2, 10: 4}.get(len(entries))
        if genus is None:
            raise ValueError("expected 3 (genus 2) or 10 (genus 4) entries")
        return cls(genus, entries)

    @classmethod
    def from_gram(cls, G) -> "HalfIntMatrix":
        """From the even Gram matrix 2T."""
        n = len(G)
        for i in range(n):
            if G[i][i] % 2:
                raise ValueError("2T must have even diagonal")
            for j in range(n):
                if G[i][j] != G[j][i]:
                    raise ValueError("matrix not symmetric")
        diag = [int(G[i][i]) // 2 for i in range(n)]
        off = [int(G[i][j]) for i, j in OFFDIAG_ORDER[n]]
        return cls(n, tuple(diag + off))

    @classmethod
    def parse(cls, text: str) -> "HalfIntMatrix":
        body = text.strip().strip("[]")
        return cls.from_entries(int(x) for x in body.split(",") if x.strip())

    @cached_property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        n = self.genus
        G = [[0] * n for _ in range(n)]
        for i in range(n):
            G[i][i] = 2 * self.entries[i]
        for (i, j), v in zip(OFFDIAG_ORDER[n], self.entries[n:]):
            G[i][j] = G[j][i] = v
        return tuple(tuple(r) for r in G)

    @property
    def n(self) -> int:
        return self.genus // 2

    @cached_property
    def disc(self) -> int:
        """(-1)^n det(2T)."""
        return (-1) ** self.n * _det([list(r) for r in self.gram])

    def is_positive_definite(self) -> bool:
        G = self.gram
        return all(_det([list(r[:k]) for r in G[:k]]) > 0 for k in range(1, self.genus + 1))

    def scale(self, c: int) -> "HalfIntMatrix":
        return HalfIntMatrix(self.genus, tuple(c * e for e in self.entries))

    def transform(self, U) -> "HalfIntMatrix":
        """U^t T U."""
        G = np.array(self.gram, dtype=object)
        U = np.array(U, dtype=object)
        return HalfIntMatrix.from_gram((U.T.dot(G).dot(U)).tolist())

    def value(self, v) -> int:
        """T[v] = v^t T v."""
        G = self.gram
        return sum(G[i][j] * v[i] * v[j] for i in range(self.genus) for j in range(self.genus)) // 2

    def __str__(self):
        return "[" + ",".join(str(e) for e in self.entries) + "]"


def discriminant_data(T: HalfIntMatrix) -> tuple[int, int, int, dict[int, int]]:
    """(D, d, f, {l: v_l(f)}) with D = (-1)^n det(2T) = d f^2 and d fundamental."""
    D = T.disc
    if D == 0:
        raise ValueError("singular matrix")
    d, f = fundamental_part(D)
    return D, d, f, factorize(f) if f > 1 else {}


def content(T: HalfIntMatrix) -> int:
    """Largest m with T/m half-integral: gcd of the diagonal and the doubled off-diagonal."""
    g = 0
    for e in T.entries:
        g = gcd(g, e)
    if g == 0:
        raise ValueError("zero matrix")
    return g


# -- short vectors and isometry ------------------------------------------------


@lru_cache(maxsize=4096)
def _short_vectors(T: HalfIntMatrix, bound: int) -> tuple[np.ndarray, np.ndarray]:
    """Nonzero v with T[v] <= bound up to sign (first nonzero entry positive), and T[v]."""
    G = np.array(T.gram, dtype=np.int64)
    n = T.genus
    Ginv = np.linalg.inv(G.astype(float))
    # T[v] = v^t G v / 2 <= B  gives  |v_i| <= sqrt(2 B (G^-1)_ii)
    ranges = [int(np.floor(np.sqrt(2 * bound * Ginv[i, i]) + 1e-9)) for i in range(n)]
    axes = [np.arange(-r, r + 1, dtype=np.int64) for r in ranges]
    grid = np.array(np.meshgrid(*axes, indexing="ij")).reshape(n, -1).T
    vals = np.einsum("ki,ij,kj->k", grid, G, grid) // 2
    nz = grid != 0
    first = grid[np.arange(len(grid)), np.argmax(nz, axis=1)]
    keep = (vals <= bound) & (vals > 0) & (first > 0)
    return grid[keep], vals[keep]


def short_vectors(T: HalfIntMatrix, bound: int) -> dict[int, list[tuple[int, ...]]]:
    """All nonzero v with T[v] <= bound, up to sign, grouped by T[v]."""
    vecs, vals = _short_vectors(T, bound)
    out: dict[int, list[tuple[int, ...]]] = {}
    for v, q in zip(vecs.tolist(), vals.tolist()):
        out.setdefault(q, []).append(tuple(v))
    return out


@lru_cache(maxsize=4096)
def theta_invariant(T: HalfIntMatrix, bound: int) -> tuple[int, ...]:
    """Numbers of vector pairs +-v with T[v] = 1, ..., bound."""
    _, vals = _short_vectors(T, bound)
    counts = np.bincount(vals, minlength=bound + 1)
    return tuple(int(c) for c in counts[1:])


def reduce_gram(T: HalfIntMatrix) -> tuple[HalfIntMatrix, list[list[int]], list[list[int]]]:
    """Pairwise reduction: R = U^t T U with 2|r_ij| <= r_ii for i < j-ordered diagonals.

    Each step e_j -> e_j - q e_i strictly lowers the trace, so the loop ends.  Returns
    (R, U, U^-1).
    """
    n = T.genus
    G = [list(r) for r in T.gram]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    Ui = [row[:] for row in U]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if i == j or 2 * abs(G[i][j]) <= G[i][i]:
                    continue
                q = (2 * G[i][j] + G[i][i]) // (2 * G[i][i])
                # column j -= q column i, then the same on rows
                for r in range(n):
                    G[r][j] -= q * G[r][i]
                for r in range(n):
                    G[j][r] -= q * G[i][r]
                for r in range(n):
                    U[r][j] -= q * U[r][i]
                Ui[i] = [a + q * b for a, b in zip(Ui[i], Ui[j])]
                changed = True
    order = sorted(range(n), key=lambda i: G[i][i])
    G = [[G[a][b] for b in order] for a in order]
    U = [[row[b] for b in order] for row in U]
    Ui = [Ui[a] for a in order]
    return HalfIntMatrix.from_gram(G), U, Ui


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def isometric(T: HalfIntMatrix, S: HalfIntMatrix) -> tuple[bool, list[list[int]] | None]:
    """Decide whether U^t T U = S for some U in GL(Z); return a witness U."""
    if T.genus != S.genus or T.disc != S.disc:
        return False, None
    Tr, U1, _ = reduce_gram(T)
    Sr, _, U2inv = reduce_gram(S)
    ok, W = _isometric_reduced(Tr, Sr)
    if not ok:
        return False, None
    return True, _matmul(_matmul(U1, W), U2inv)


def _isometric_reduced(T: HalfIntMatrix, S: HalfIntMatrix) -> tuple[bool, list[list[int]] | None]:
    n = T.genus
    SG = S.gram
    bound = max(S.entries[:n])
    if theta_invariant(T, bound) != theta_invariant(S, bound):
        return False, None
    vecs, vals = _short_vectors(T, bound)
    V = np.concatenate([vecs, -vecs])
    Q = np.concatenate([vals, vals])
    IP = (V @ np.array(T.gram, dtype=np.int64) @ V.T).tolist()
    cands = [np.nonzero(Q == S.entries[i])[0].tolist() for i in range(n)]
    chosen: list[int] = []

    def rec(i: int) -> bool:
        if i == n:
            M = [V[c].tolist() for c in chosen]
            return abs(_det(M)) == 1
        for c in cands[i]:
            row = IP[c]
            if all(row[chosen[j]] == SG[j][i] for j in range(i)):
                chosen.append(c)
                if rec(i + 1):
                    return True
                chosen.pop()
        return False

    if rec(0):
        cols = [V[c].tolist() for c in chosen]
        U = [list(r) for r in zip(*cols)]
        return True, U
    return False, None


# -- enumeration -----------------------------------------------------------------


def _binary_classes(absD: int) -> list[HalfIntMatrix]:
    """GL2(Z)-classes of positive definite [a, c, b] with 4ac - b^2 = |D|: 0 <= b <= a <= c."""
    out = []
    for a in range(1, isqrt(absD // 3) + 2):
        for b in range(0, a + 1):
            num = absD + b * b
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c >= a:
                out.append(HalfIntMatrix(2, (a, c, b)))
    return sorted(out, key=lambda T: T.entries)


def _minkowski_vectors(n: int) -> list[tuple[int, np.ndarray]]:
    """(k, v) pairs: v in {0, +-1}^n, first nonzero among v_k..v_n equal to 1 at some index >= k."""
    out = []
    for v in itertools.product((-1, 0, 1), repeat=n):
        for k in range(n):
            if any(v[j] for j in range(k, n)) and sum(abs(x) for x in v) >= 2:
                out.append((k, np.array(v, dtype=np.int64)))
    return out


def _det4(G: np.ndarray) -> np.ndarray:
    """Exact determinants of a stack of 4x4 int64 matrices."""
    a = G
    def m2(r1, r2, c1, c2):
        return a[:, r1, c1] * a[:, r2, c2] - a[:, r1, c2] * a[:, r2, c1]
    s0 = m2(0, 1, 0, 1); s1 = m2(0, 1, 0, 2); s2 = m2(0, 1, 0, 3)
    s3 = m2(0, 1, 1, 2); s4 = m2(0, 1, 1, 3); s5 = m2(0, 1, 2, 3)
    c5 = m2(2, 3, 2, 3); c4 = m2(2, 3, 1, 3); c3 = m2(2, 3, 1, 2)
    c2 = m2(2, 3, 0, 3); c1 = m2(2, 3, 0, 2); c0 = m2(2, 3, 0, 1)
    return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0


def _signed_permutation_minima(G: np.ndarray) -> np.ndarray:
    """Over all signed permutations of the basis: least diagonal, then largest off-diagonal."""
    best = None
    for perm in itertools.permutations(range(4)):
        P = G[:, perm][:, :, perm]
        for signs in itertools.product((1, -1), repeat=3):
            s = np.array((1,) + signs)
            H = P * s[None, :, None] * s[None, None, :]
            flat = np.stack(
                [H[:, i, i] // 2 for i in range(4)] + [-H[:, i, j] for i, j in OFFDIAG_ORDER[4]], axis=1
            )
            if best is None:
                best = flat
                continue
            diff = flat - best
            nz = diff != 0
            first = np.argmax(nz, axis=1)
            smaller = nz.any(axis=1) & (diff[np.arange(len(diff)), first] < 0)
            best = np.where(smaller[:, None], flat, best)
    best[:, 4:] *= -1
    return best


def _quaternary_candidates(max_disc: int, slack: int = 1) -> np.ndarray:
    """Minkowski-style reduced candidates [t11..t44, b12, b13, b23, b14, b24, b34] with
    det(2T) <= max_disc, b1j >= 0, |b_ij| <= t_ii, t11 <= t22 <= t33 <= t44 and
    t11 t22 t33 t44 <= det(T) * 4 (the Minkowski product bound in dimension 4)."""
    prod_bound = slack * max_disc // 4  # det T = det(2T)/16, times 4
    rows = []
    mv = _minkowski_vectors(4)
    for t1 in range(1, prod_bound + 1):
        for t2 in range(t1, prod_bound // t1 + 1):
            for t3 in range(t2, prod_bound // (t1 * t2) + 1):
                for t4 in range(t3, prod_bound // (t1 * t2 * t3) + 1):
                    r1 = np.arange(0, t1 + 1)
                    r2 = np.arange(-t2, t2 + 1)
                    r3 = np.arange(-t3, t3 + 1)
                    b12, b13, b23, b14, b24, b34 = (
                        g.ravel() for g in np.meshgrid(r1, r1, r2, r1, r2, r3, indexing="ij")
                    )
                    m = b12.size
                    G = np.zeros((m, 4, 4), dtype=np.int64)
                    G[:, 0, 0], G[:, 1, 1], G[:, 2, 2], G[:, 3, 3] = 2 * t1, 2 * t2, 2 * t3, 2 * t4
                    for (i, j), b in zip(OFFDIAG_ORDER[4], (b12, b13, b23, b14, b24, b34)):
                        G[:, i, j] = b
                        G[:, j, i] = b
                    d = _det4(G)
                    keep = (d > 0) & (d <= max_disc)
                    if not keep.any():
                        continue
                    G = G[keep]
                    d = d[keep]
                    diag = np.array([2 * t1, 2 * t2, 2 * t3, 2 * t4])
                    ok = np.ones(len(G), dtype=bool)
                    for k, v in mv:
                        q = np.einsum("i,kij,j->k", v, G, v)
                        ok &= q >= diag[k]
                    G = G[ok]
                    if len(G):
                        # positive definiteness: leading minors
                        m1 = G[:, 0, 0] * G[:, 1, 1] - G[:, 0, 1] ** 2
                        m3 = np.einsum(
                            "k,k->k",
                            G[:, 0, 0],
                            G[:, 1, 1] * G[:, 2, 2] - G[:, 1, 2] ** 2,
                        ) - G[:, 0, 1] * (G[:, 0, 1] * G[:, 2, 2] - G[:, 1, 2] * G[:, 0, 2]) + G[:, 0, 2] * (
                            G[:, 0, 1] * G[:, 1, 2] - G[:, 1, 1] * G[:, 0, 2]
                        )
                        pd = (m1 > 0) & (m3 > 0)
                        G = G[pd]
                        rows.append(G)
    return np.concatenate(rows) if rows else np.zeros((0, 4, 4), dtype=np.int64)


_QUATERNARY_CACHE: dict[int, dict[int, list[HalfIntMatrix]]] = {}


def quaternary_classes_up_to(max_disc: int) -> dict[int, list[HalfIntMatrix]]:
    """All classes of positive definite genus-4 half-integral T with det(2T) <= max_disc."""
    for bound, table in _QUATERNARY_CACHE.items():
        if bound >= max_disc:
            return {D: reps for D, reps in table.items() if D <= max_disc}
    cands = _quaternary_candidates(max_disc)
    by_disc: dict[int, list[HalfIntMatrix]] = {}
    if len(cands):
        for row in np.unique(_signed_permutation_minima(np.array(cands)), axis=0):
            T = HalfIntMatrix(4, tuple(int(x) for x in row))
            by_disc.setdefault(T.disc, []).append(T)
    table = {}
    for D in sorted(by_disc):
        reps: list[HalfIntMatrix] = []
        for T in sorted(by_disc[D], key=lambda T: T.entries):
            if any(isometric(R, T)[0] for R in reps):
                continue
            reps.append(T)
        table[D] = reps
    _QUATERNARY_CACHE[max_disc] = table
    return table


MAX_GENUS4_DISC = 500


def enumerate_classes(genus: int, disc: int, positive_definite: bool = True) -> list[HalfIntMatrix]:
    """One representative per GL-class of positive definite T with (-1)^n det(2T) = disc.

    For genus 2 the discriminant is negative; either sign of ``disc`` is accepted and
    |disc| = det(2T) is used.
    """
    if not positive_definite:
        raise ValueError("only positive definite enumeration is supported")
    if genus == 2:
        absD = abs(disc)
        if absD == 0:
            return []
        return _binary_classes(absD)
    if genus == 4:
        if disc > MAX_GENUS4_DISC:
            raise ValueError(f"discriminant bound {MAX_GENUS4_DISC} exceeded")
        if disc <= 0:
            return []
        return quaternary_classes_up_to(disc).get(disc, [])
    raise ValueError("genus must be 2 or 4")


def classes_up_to(genus: int, max_disc: int) -> list[HalfIntMatrix]:
    """All classes with 1 <= det(2T) <= max_disc, ordered by discriminant."""
    if genus == 2:
        return [T for D in range(1, max_disc + 1) for T in _binary_classes(D)]
    if max_disc > MAX_GENUS4_DISC:
        raise ValueError(f"discriminant bound {MAX_GENUS4_DISC} exceeded")
    table = quaternary_classes_up_to(max_disc)
    return [T for D in sorted(table) for T in table[D]]
