"""Class algebra and exact character tables by Dixon's modular method.

Character values are kept exactly as eigenvalue multiplicities: entry
``mult[c, t, j]`` says how often ``exp(2 pi i j / e)`` occurs as an
eigenvalue of the class-``t`` representative in character ``c``, with
``e`` the group exponent.  Sums of such vectors are compared or tested for
rationality after reduction modulo the cyclotomic polynomial Phi_e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .field import is_prime
from .groups import ClassData, FiniteGroup, power_class

MAX_CLASSES = 60
PRIME_LIMIT = 2**31


class CharacterTableError(RuntimeError):
    pass


# -- cyclotomic arithmetic -------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_divide(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_divide(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        out[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return out


def reduce_cyclotomic(vec, e: int) -> tuple[int, ...]:
    """Canonical power-basis coordinates (length phi(e)) of sum_j vec[j] zeta_e^j."""
    phi = np.array(cyclotomic_poly(e), dtype=object)
    v = np.array([int(x) for x in vec], dtype=object)
    deg = len(phi) - 1
    for i in range(len(v) - 1, deg - 1, -1):
        c = v[i]
        if c:
            v[i - deg:i + 1] -= c * phi
    return tuple(int(x) for x in v[:deg])


def cyclotomic_rational(vec, e: int):
    """The integer value of a cyclotomic integer vector if it is rational, else None."""
    red = reduce_cyclotomic(vec, e)
    if any(red[1:]):
        return None
    return red[0]


# -- linear algebra over GF(l) --------------------------------------------

def _nullspace_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Basis (as columns) of the right nullspace of A over GF(p)."""
    A = np.array(A, dtype=object) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c] % p), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=object)
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-A[i, fc]) % p
    return basis


def _charpoly_mod(A: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial of A over GF(p), lowest degree first (Faddeev-LeVerrier)."""
    n = A.shape[0]
    A = np.array(A, dtype=object) % p
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    M = np.zeros((n, n), dtype=object)
    I = np.identity(n, dtype=object)
    for k in range(1, n + 1):
        M = (A.dot(M) + coeffs[n - k + 1] * I) % p
        tr = int(np.trace(A.dot(M))) % p
        coeffs[n - k] = (-tr * pow(k, p - 2, p)) % p
    return coeffs


def _roots_mod(poly: list[int], p: int) -> list[int]:
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(poly):
        acc = (acc * xs + c) % p
    return [int(x) for x in np.flatnonzero(acc == 0)]


def dixon_prime(order: int, e: int) -> int:
    """Smallest prime l = 1 (mod e) with l > 2 sqrt(order)."""
    ell = e + 1
    while ell * ell <= 4 * order or not is_prime(ell):
        ell += e
        if ell >= PRIME_LIMIT:
            raise CharacterTableError(f"no Dixon prime below 2^31 for exponent {e}")
    return ell


def primitive_root(p: int) -> int:
    factors = [f for f in range(2, p) if (p - 1) % f == 0 and is_prime(f)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    return 1


# -- class algebra ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ClassAlgebra:
    """``a[i, j, t]`` = #{(x, y) in C_i x C_j : x y = z_t}."""
    a: np.ndarray

    def matrix(self, j: int) -> np.ndarray:
        """Matrix of right multiplication by the class sum K_j: entry (i, t) = a[i, j, t]."""
        return self.a[:, j, :]


def class_algebra(G: FiniteGroup, classes: ClassData | None = None) -> ClassAlgebra:
    cd = classes or G.classes
    k = cd.k
    a = np.zeros((k, k, k), dtype=np.int64)
    allx = np.arange(G.order)
    cx = cd.class_of[allx] * k
    xinv = G.inverse[allx]
    for t, z in enumerate(cd.reps):
        y = G.mul(xinv, z)
        a[:, :, t] = np.bincount(cx + cd.class_of[y], minlength=k * k).reshape(k, k)
    return ClassAlgebra(a)


# -- character table -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CharacterTable:
    descriptor: str
    group_order: int
    class_sizes: tuple[int, ...]
    inverse_class: tuple[int, ...]
    exponent: int
    prime: int
    degrees: tuple[int, ...]
    mult: np.ndarray                 # (k, k, e) eigenvalue multiplicities
    values: np.ndarray = field(repr=False)  # (k, k) complex mirror

    @property
    def k(self) -> int:
        return len(self.degrees)

    @property
    def real(self) -> tuple[bool, ...]:
        return tuple(self.is_real(c) for c in range(self.k))

    def exact(self, c: int, t: int) -> tuple[int, ...]:
        """Power-basis coordinates of chi_c(g_t) in Q(zeta_e)."""
        return reduce_cyclotomic(self.mult[c, t], self.exponent)

    def is_real(self, c: int) -> bool:
        # chi real iff chi(g) = chi(g^-1) on every class
        return all(self.exact(c, t) == self.exact(c, self.inverse_class[t])
                   for t in range(self.k))

    def degree_counts(self) -> dict[int, int]:
        """r_n(G): number of irreducible characters of each degree n."""
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return out


def _mirror(mult: np.ndarray, e: int) -> np.ndarray:
    roots = np.exp(2j * np.pi * np.arange(e) / e)
    return mult @ roots


def _split_spaces(algebra: ClassAlgebra, k: int, ell: int) -> list[np.ndarray]:
    spaces = [np.identity(k, dtype=object)]
    for j in range(1, k):
        if all(S.shape[1] == 1 for S in spaces):
            break
        Mj = np.array(algebra.matrix(j) % ell, dtype=object)
        refined = []
        for S in spaces:
            d = S.shape[1]
            if d == 1:
                refined.append(S)
                continue
            # column echelon: pick rows where S restricted is invertible
            pivots = _pivot_rows(S, ell)
            Sp = S[pivots]
            Spinv = _inverse_mod(Sp, ell)
            A = Spinv.dot(Mj.dot(S)[pivots]) % ell
            found = 0
            for lam in _roots_mod(_charpoly_mod(A, ell), ell):
                N = _nullspace_mod((A - lam * np.identity(d, dtype=object)) % ell, ell)
                found += N.shape[1]
                refined.append(S.dot(N) % ell)
            if found != d:
                raise CharacterTableError("class matrix is not diagonalisable over GF(l)")
        spaces = refined
    if len(spaces) != k or any(S.shape[1] != 1 for S in spaces):
        raise CharacterTableError("class algebra did not split into one-dimensional spaces")
    return spaces


def _pivot_rows(S: np.ndarray, p: int) -> list[int]:
    T = np.array(S.T, dtype=object) % p
    rows, cols = T.shape
    pivots, r = [], 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if T[i, c] % p), None)
        if piv is None:
            continue
        T[[r, piv]] = T[[piv, r]]
        T[r] = (T[r] * pow(int(T[r, c]), p - 2, p)) % p
        for i in range(rows):
            if i != r and T[i, c]:
                T[i] = (T[i] - T[i, c] * T[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def _inverse_mod(A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    M = np.concatenate([np.array(A, dtype=object) % p, np.identity(n, dtype=object)], axis=1)
    for c in range(n):
        piv = next(i for i in range(c, n) if M[i, c] % p)
        M[[c, piv]] = M[[piv, c]]
        M[c] = (M[c] * pow(int(M[c, c]), p - 2, p)) % p
        for i in range(n):
            if i != c and M[i, c]:
                M[i] = (M[i] - M[i, c] * M[c]) % p
    return M[:, n:]


def character_table(G: FiniteGroup, classes: ClassData | None = None,
                    algebra: ClassAlgebra | None = None) -> CharacterTable:
    cd = classes or G.classes
    k = cd.k
    if k > MAX_CLASSES:
        raise CharacterTableError(f"{G.descriptor}: {k} classes exceeds cap {MAX_CLASSES}")
    algebra = algebra or class_algebra(G, cd)
    n = G.order
    e = math.lcm(*cd.orders)
    ell = dixon_prime(n, e)
    z = pow(primitive_root(ell), (ell - 1) // e, ell)
    sizes = cd.sizes
    inv_size = [pow(s, ell - 2, ell) for s in sizes]

    # power maps: class of g_t^r for r < order(g_t)
    powmap = [[power_class(G, t, r) for r in range(cd.orders[t])] for t in range(k)]

    chars = []
    for S in _split_spaces(algebra, k, ell):
        v = [int(x) % ell for x in S[:, 0]]
        v0 = pow(v[0], ell - 2, ell)
        omega = [x * v0 % ell for x in v]
        s = sum(omega[t] * omega[cd.inverse_class[t]] * inv_size[t] for t in range(k)) % ell
        target = n * pow(s, ell - 2, ell) % ell
        deg = next((d for d in range(1, math.isqrt(n) + 1) if d * d % ell == target), None)
        if deg is None:
            raise CharacterTableError("degree recovery failed")
        chi = [omega[t] * deg * inv_size[t] % ell for t in range(k)]
        mult = np.zeros((k, e), dtype=np.int64)
        for t in range(k):
            o = cd.orders[t]
            zo = pow(z, e // o, ell)
            inv_o = pow(o, ell - 2, ell)
            for j in range(o):
                acc = sum(chi[powmap[t][r]] * pow(zo, (-j * r) % o, ell) for r in range(o))
                m = acc * inv_o % ell
                if m > deg:
                    raise CharacterTableError("eigenvalue multiplicity out of range")
                mult[t, j * (e // o)] = m
            if mult[t].sum() != deg:
                raise CharacterTableError("multiplicities do not sum to the degree")
        chars.append((deg, mult))

    values = [_mirror(m, e) for _, m in chars]

    def sort_key(i):
        deg, _ = chars[i]
        vals = values[i]
        trivial = all(abs(x - 1) < 1e-9 for x in vals)
        flat = tuple(v for x in vals for v in (round(x.real, 9) + 0.0, round(x.imag, 9) + 0.0))
        return (not trivial, deg, flat)

    order = sorted(range(k), key=sort_key)
    mult = np.stack([chars[i][1] for i in order])
    return CharacterTable(
        descriptor=G.descriptor,
        group_order=n,
        class_sizes=tuple(sizes),
        inverse_class=tuple(cd.inverse_class),
        exponent=e,
        prime=ell,
        degrees=tuple(chars[i][0] for i in order),
        mult=mult,
        values=np.stack([values[i] for i in order]),
    )


_TABLES: dict[int, tuple[FiniteGroup, CharacterTable]] = {}


def table_for(G: FiniteGroup) -> CharacterTable:
    """Memoised character table of a group handle."""
    hit = _TABLES.get(id(G))
    if hit is None or hit[0] is not G:
        hit = _TABLES[id(G)] = (G, character_table(G))
    return hit[1]


def register_table(G: FiniteGroup, table: CharacterTable) -> None:
    """Make ``table`` the memoised table of ``G`` (used by the on-disk cache)."""
    _TABLES[id(G)] = (G, table)


def real_characters(table: CharacterTable) -> list[int]:
    return [c for c in range(table.k) if table.is_real(c)]


def orthogonality_errors(table: CharacterTable) -> tuple[float, float]:
    """Max deviation in the row and column orthogonality relations."""
    X = table.values
    sizes = np.array(table.class_sizes, dtype=float)
    n = table.group_order
    rows = (X * sizes) @ X.conj().T / n
    cols = X.T @ X.conj()
    want_cols = np.diag(n / sizes)
    return (float(np.abs(rows - np.identity(table.k)).max()),
            float(np.abs(cols - want_cols).max()))
