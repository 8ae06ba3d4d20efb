"""Concrete finite groups with canonical integer indexing.

Every group enumerates its elements once; element ``0`` is the identity and
all arithmetic works on index arrays.  Products follow one convention
throughout the package: ``mul(a, b)`` applies ``a`` first and then ``b``
(for permutations ``(ab)(x) = b(a(x))``; for matrices the ordinary product
``A @ B`` acting on row vectors).
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .field import Field, prime_power

CONVENTION = "left-to-right (leftmost factor acts first)"

TABLE_CAP = 2600
CYCLIC_CAP = 10**4
PRODUCT_CAP = 10**4


class GroupError(ValueError):
    """Unsupported group descriptor or parameter."""


class ResourceCapError(RuntimeError):
    """A computation would exceed one of the configured size caps."""


class UnsupportedAutomorphisms(GroupError):
    pass


class FiniteGroup:
    family: str
    descriptor: str
    order: int

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.descriptor} order={self.order}>"

    # subclasses provide _mul, _inverse_all, generators, decode, encode
    def _mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _inverse_all(self) -> np.ndarray:
        raise NotImplementedError

    @cached_property
    def table(self) -> np.ndarray | None:
        """Full multiplication table, or None above TABLE_CAP."""
        n = self.order
        if n > TABLE_CAP:
            return None
        dtype = np.int16 if n < 2**15 else np.int32
        out = np.empty((n, n), dtype=dtype)
        allx = np.arange(n)
        step = max(1, 2**20 // n)
        for start in range(0, n, step):
            rows = np.arange(start, min(n, start + step))
            prods = self._mul(np.repeat(rows, n), np.tile(allx, len(rows)))
            out[rows] = prods.reshape(len(rows), n)
        return out

    def mul(self, a, b):
        """Product of index arrays (broadcast) or of two scalar indices."""
        scalar = np.ndim(a) == 0 and np.ndim(b) == 0
        t = self.table
        if t is not None:
            r = t[a, b]
            return int(r) if scalar else r.astype(np.int64)
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        r = self._mul(a.ravel(), b.ravel()).reshape(a.shape)
        return int(r) if scalar else r

    @cached_property
    def inverse(self) -> np.ndarray:
        return self._inverse_all()

    def inv(self, a):
        r = self.inverse[a]
        return int(r) if np.ndim(a) == 0 else r

    def power(self, g: int, r: int) -> int:
        if r < 0:
            g, r = self.inv(g), -r
        result, base = 0, g
        while r:
            if r & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            r >>= 1
        return result

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.mul(x, g)
            k += 1
        return k

    def conjugate(self, g, x):
        """x^-1 g x for scalar or array g."""
        return self.mul(self.mul(self.inv(x), g), x)

    def commutator(self, x, y):
        """[x, y] = x^-1 y^-1 x y."""
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    def conjugation_map(self, x: int) -> np.ndarray:
        """Index array g -> x^-1 g x over all elements."""
        return self.conjugate(np.arange(self.order), x)

    def elements(self):
        return range(self.order)

    @cached_property
    def classes(self) -> ClassData:
        return _compute_classes(self)

    @cached_property
    def digest_material(self) -> bytes:
        """Bytes pinning down the multiplication: element encodings plus the
        right-regular action of every generator."""
        parts = [self.descriptor.encode(), repr(self.encoding_info()).encode()]
        allx = np.arange(self.order)
        for g in self.generators:
            parts.append(np.asarray(self.mul(allx, g), dtype=np.int64).tobytes())
        parts.append(np.asarray(self.inverse, dtype=np.int64).tobytes())
        return b"\x00".join(parts)

    def encoding_info(self) -> dict:
        return {"family": self.family}


def lehmer_rank(perms: np.ndarray) -> np.ndarray:
    """Rank of each row (a permutation of 0..n-1) in lexicographic order."""
    m, n = perms.shape
    rank = np.zeros(m, dtype=np.int64)
    for i in range(n):
        smaller = (perms[:, i + 1:] < perms[:, i:i + 1]).sum(axis=1)
        rank = rank * (n - i) + smaller
    return rank


def perm_from_cycles(n: int, cycles: str | list) -> tuple[int, ...]:
    """Build an image tuple on 0..n-1 from 1-based cycle notation, e.g. "(1 2)(3 4 5)"."""
    if isinstance(cycles, str):
        cycles = [[int(t) for t in c.replace(",", " ").split()]
                  for c in re.findall(r"\(([^)]*)\)", cycles)]
    img = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def cycle_string(img) -> str:
    n, seen, parts = len(img), set(), []
    for s in range(n):
        if s in seen or img[s] == s:
            continue
        cyc, x = [], s
        while x not in seen:
            seen.add(x)
            cyc.append(str(x + 1))
            x = img[x]
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) or "()"


class PermutationGroup(FiniteGroup):
    """S_n or A_n on points 0..n-1, elements in lexicographic order."""

    def __init__(self, n: int, alternating: bool):
        self.n = n
        self.alternating = alternating
        self.family = "Alternating" if alternating else "Symmetric"
        self.descriptor = f"{'A' if alternating else 'S'}{n}"
        allp = np.array(list(itertools.permutations(range(n))), dtype=np.int8).reshape(-1, n)
        if alternating:
            inversions = np.zeros(len(allp), dtype=np.int64)
            for i in range(n):
                inversions += (allp[:, i + 1:] < allp[:, i:i + 1]).sum(axis=1)
            allp = allp[inversions % 2 == 0]
        self.perms = allp
        self.order = len(allp)
        self._index = np.full(math.factorial(n), -1, dtype=np.int64)
        self._index[lehmer_rank(allp)] = np.arange(self.order)

    def _lookup(self, imgs: np.ndarray) -> np.ndarray:
        idx = self._index[lehmer_rank(imgs)]
        if (idx < 0).any():
            raise GroupError(f"permutation outside {self.descriptor}")
        return idx

    def _mul(self, a, b):
        pa = self.perms[a].astype(np.intp)
        return self._lookup(np.take_along_axis(self.perms[b], pa, axis=1))

    def _inverse_all(self):
        return self._lookup(np.argsort(self.perms, axis=1).astype(np.int8))

    def decode(self, i: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.perms[i])

    def encode(self, img) -> int:
        if isinstance(img, str):
            img = perm_from_cycles(self.n, img)
        return int(self._lookup(np.array([img], dtype=np.int8))[0])

    def label(self, i: int) -> str:
        return cycle_string(self.decode(i))

    def conjugation_by_permutation(self, t) -> np.ndarray:
        """Index map g -> t^-1 g t for an arbitrary permutation t of the points."""
        t = np.asarray(t, dtype=np.intp)
        tinv = np.argsort(t)
        return self._lookup(t[self.perms[:, tinv]].astype(np.int8))

    @cached_property
    def generators(self) -> list[int]:
        n = self.n
        if self.alternating:
            cands = [perm_from_cycles(n, [[1, 2, k]]) for k in range(3, n + 1)]
        else:
            cands = [perm_from_cycles(n, [[1, 2]]), perm_from_cycles(n, [list(range(1, n + 1))])]
        return sorted({self.encode(c) for c in cands} - {0})

    def fixed_points(self, i: int) -> int:
        return int((self.perms[i] == np.arange(self.n)).sum())

    def encoding_info(self):
        return {"family": self.family, "n": self.n}


class PSL2Group(FiniteGroup):
    """PSL(2, q) as determinant-one 2x2 matrices modulo {+-I}.

    Entries are field codes; each coset is stored as the lexicographically
    smaller (by flattened entry codes) of M and -M.
    """

    def __init__(self, q: int):
        pp = prime_power(q)
        if pp is None:
            raise GroupError(f"PSL2({q}): {q} is not a prime power")
        self.q = q
        self.p, self.f = pp
        self.field = F = Field(*pp)
        self.family = "PSL2"
        self.descriptor = f"PSL2({q})"
        grid = np.array(list(itertools.product(range(q), repeat=4)), dtype=np.int64)
        a, b, c, d = grid.T
        det = F.add_table[F.mul_table[a, d], F.neg_table[F.mul_table[b, c]]]
        grid = grid[det == 1]
        codes = self._codes(grid)
        neg = self._codes(F.neg_table[grid])
        grid = grid[codes <= neg]
        codes = self._codes(grid)
        order = np.argsort(codes)
        grid, codes = grid[order], codes[order]
        ident = self._codes(np.array([[1, 0, 0, 1]]))[0]
        first = np.flatnonzero(codes == ident)[0]
        perm = np.r_[first, np.delete(np.arange(len(grid)), first)]
        self.mats = grid[perm]
        self.order = len(self.mats)
        self._index = np.full(q**4, -1, dtype=np.int64)
        self._index[self._codes(self.mats)] = np.arange(self.order)

    def _codes(self, m: np.ndarray) -> np.ndarray:
        q = self.q
        return ((m[:, 0] * q + m[:, 1]) * q + m[:, 2]) * q + m[:, 3]

    def _lookup(self, mats: np.ndarray) -> np.ndarray:
        c1 = self._codes(mats)
        c2 = self._codes(self.field.neg_table[mats])
        idx = self._index[np.minimum(c1, c2)]
        if (idx < 0).any():
            raise GroupError("matrix not in SL2")
        return idx

    def _matmul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        A, M = self.field.add_table, self.field.mul_table
        return np.stack([
            A[M[x[:, 0], y[:, 0]], M[x[:, 1], y[:, 2]]],
            A[M[x[:, 0], y[:, 1]], M[x[:, 1], y[:, 3]]],
            A[M[x[:, 2], y[:, 0]], M[x[:, 3], y[:, 2]]],
            A[M[x[:, 2], y[:, 1]], M[x[:, 3], y[:, 3]]],
        ], axis=1)

    def _mul(self, a, b):
        return self._lookup(self._matmul(self.mats[a], self.mats[b]))

    def _inverse_all(self):
        m, neg = self.mats, self.field.neg_table
        return self._lookup(np.stack([m[:, 3], neg[m[:, 1]], neg[m[:, 2]], m[:, 0]], axis=1))

    def decode(self, i: int) -> tuple[int, int, int, int]:
        return tuple(int(v) for v in self.mats[i])

    def encode(self, mat) -> int:
        return int(self._lookup(np.array([list(mat)], dtype=np.int64))[0])

    def label(self, i: int) -> str:
        a, b, c, d = self.decode(i)
        return f"[[{a},{b}],[{c},{d}]]"

    def trace(self, i: int) -> int:
        a, _, _, d = self.decode(i)
        return self.field.add(a, d)

    @cached_property
    def generators(self) -> list[int]:
        gens = set()
        for i in range(self.f):
            x = self.p**i
            gens.add(self.encode((1, x, 0, 1)))
            gens.add(self.encode((1, 0, x, 1)))
        return sorted(gens - {0})

    def map_entries(self, fn) -> np.ndarray:
        """Index map obtained by applying a code->code array entrywise."""
        return self._lookup(np.asarray(fn)[self.mats])

    def conjugation_by_matrix(self, mat) -> np.ndarray:
        """g -> X^-1 g X for X in GL(2, q); the determinant cancels."""
        F = self.field
        a, b, c, d = mat
        det = F.add(F.mul(a, d), F.neg(F.mul(b, c)))
        di = F.inv(det)
        xinv = np.array([[F.mul(d, di), F.mul(F.neg(b), di), F.mul(F.neg(c), di), F.mul(a, di)]])
        xs = np.repeat(np.array([mat]), self.order, axis=0)
        left = self._matmul(np.repeat(xinv, self.order, axis=0), self.mats)
        return self._lookup(self._matmul(left, xs))

    def encoding_info(self):
        return {"family": "PSL2", "q": self.q, "modulus": list(self.field.modulus)}


class CyclicGroup(FiniteGroup):
    def __init__(self, m: int):
        self.m = m
        self.order = m
        self.family = "Cyclic"
        self.descriptor = f"C{m}"

    def _mul(self, a, b):
        return (a + b) % self.m

    def _inverse_all(self):
        return (-np.arange(self.m)) % self.m

    def decode(self, i: int) -> int:
        return int(i)

    def encode(self, x: int) -> int:
        return int(x) % self.m

    def label(self, i: int) -> str:
        return str(i)

    @cached_property
    def generators(self) -> list[int]:
        return [1] if self.m > 1 else []

    def encoding_info(self):
        return {"family": "Cyclic", "m": self.m}


class DirectProduct(FiniteGroup):
    """G1 x ... x Gr, index = mixed radix with the first factor most significant."""

    def __init__(self, factors: list[FiniteGroup]):
        self.factors = factors
        self.family = "Product"
        self.descriptor = "x".join(f.descriptor for f in factors)
        self.order = math.prod(f.order for f in factors)
        self._radix = [math.prod(f.order for f in factors[i + 1:]) for i in range(len(factors))]

    def split(self, i):
        i = np.asarray(i, dtype=np.int64)
        return [(i // r) % f.order for f, r in zip(self.factors, self._radix)]

    def join(self, parts):
        return sum(np.asarray(p, dtype=np.int64) * r for p, r in zip(parts, self._radix))

    def _mul(self, a, b):
        return self.join([f.mul(x, y) for f, x, y in zip(self.factors, self.split(a), self.split(b))])

    def _inverse_all(self):
        parts = self.split(np.arange(self.order))
        return self.join([f.inverse[p] for f, p in zip(self.factors, parts)])

    def decode(self, i: int):
        return tuple(f.decode(int(p)) for f, p in zip(self.factors, self.split(i)))

    def encode(self, parts) -> int:
        return int(self.join([f.encode(p) for f, p in zip(self.factors, parts)]))

    def label(self, i: int) -> str:
        return "(" + ", ".join(f.label(int(p)) for f, p in zip(self.factors, self.split(i))) + ")"

    def embed(self, k: int, g: int) -> int:
        parts = [0] * len(self.factors)
        parts[k] = g
        return int(self.join(parts))

    @cached_property
    def generators(self) -> list[int]:
        return [self.embed(k, g) for k, f in enumerate(self.factors) for g in f.generators]

    def encoding_info(self):
        return {"family": "Product", "factors": [f.encoding_info() for f in self.factors]}


_ATOM = re.compile(r"^(?:A(\d+)|S(\d+)|C(\d+)|PSL2\((\d+)\))$")


def _atom(text: str) -> FiniteGroup:
    m = _ATOM.match(text.strip())
    if not m:
        raise GroupError(f"cannot parse group descriptor {text!r}")
    an, sn, cm, q = m.groups()
    if an is not None:
        n = int(an)
        if not 3 <= n <= 9:
            raise GroupError(f"A{n}: supported range is 3 <= n <= 9")
        return PermutationGroup(n, alternating=True)
    if sn is not None:
        n = int(sn)
        if not 2 <= n <= 8:
            raise GroupError(f"S{n}: supported range is 2 <= n <= 8")
        return PermutationGroup(n, alternating=False)
    if cm is not None:
        m_ = int(cm)
        if not 1 <= m_ <= CYCLIC_CAP:
            raise GroupError(f"C{m_}: supported range is 1 <= m <= {CYCLIC_CAP}")
        return CyclicGroup(m_)
    qq = int(q)
    if not 2 <= qq <= 16 or prime_power(qq) is None:
        raise GroupError(f"PSL2({qq}): q must be a prime power in 2..16")
    return PSL2Group(qq)


@lru_cache(maxsize=None)
def group_new(descriptor: str) -> FiniteGroup:
    """Build (and memoise) a group from a descriptor like "A5", "PSL2(7)", "S3xC2"."""
    parts = descriptor.replace(" ", "").split("x")
    if len(parts) == 1:
        return _atom(parts[0])
    factors = [group_new(p) for p in parts]
    if math.prod(f.order for f in factors) > PRODUCT_CAP:
        raise ResourceCapError(f"{descriptor}: direct products limited to order {PRODUCT_CAP}")
    return DirectProduct(factors)


# -- subgroups ------------------------------------------------------------

def subgroup_closure(G: FiniteGroup, gens, early_exit: bool = True) -> np.ndarray:
    """Sorted element indices of <gens>.

    With ``early_exit`` the search stops as soon as more than half the group
    is reached, which already forces the whole group.
    """
    gens = np.unique(np.asarray(list(gens), dtype=np.int64))
    gens = gens[gens != 0]
    n = G.order
    member = np.zeros(n, dtype=bool)
    member[0] = True
    count = 1
    frontier = np.array([0], dtype=np.int64)
    while frontier.size and gens.size:
        prods = G.mul(frontier[:, None], gens[None, :]).ravel()
        new = np.unique(prods[~member[prods]])
        member[new] = True
        count += new.size
        if early_exit and 2 * count > n:
            return np.arange(n)
        frontier = new
    return np.flatnonzero(member)


def is_generating_tuple(G: FiniteGroup, tup) -> bool:
    if G.order == 1:
        return True
    return subgroup_closure(G, tup).size == G.order


# -- conjugacy classes ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class ClassData:
    group_order: int
    sizes: tuple[int, ...]
    reps: tuple[int, ...]
    orders: tuple[int, ...]
    class_of: np.ndarray
    inverse_class: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def centralizer_orders(self) -> tuple[int, ...]:
        return tuple(self.group_order // s for s in self.sizes)

    def members(self, t: int) -> np.ndarray:
        return np.flatnonzero(self.class_of == t)

    def label(self, t: int) -> str:
        return f"{self.orders[t]}/{self.sizes[t]}/{t}"


def _compute_classes(G: FiniteGroup) -> ClassData:
    n = G.order
    rows, cols = [], []
    allx = np.arange(n)
    for g in G.generators:
        rows.append(allx)
        cols.append(G.conjugation_map(g))
    if rows:
        r, c = np.concatenate(rows), np.concatenate(cols)
    else:
        r = c = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(n, n))
    ncomp, labels = connected_components(graph, directed=True, connection="weak")
    reps = np.full(ncomp, n, dtype=np.int64)
    np.minimum.at(reps, labels, allx)
    sizes = np.bincount(labels, minlength=ncomp)
    orders = [G.element_order(int(x)) for x in reps]
    key = sorted(range(ncomp), key=lambda c: (orders[c], int(sizes[c]), int(reps[c])))
    relabel = np.empty(ncomp, dtype=np.int64)
    relabel[key] = np.arange(ncomp)
    class_of = relabel[labels]
    reps_sorted = tuple(int(reps[c]) for c in key)
    inverse_class = tuple(int(class_of[G.inv(r)]) for r in reps_sorted)
    class_of.setflags(write=False)
    return ClassData(
        group_order=n,
        sizes=tuple(int(sizes[c]) for c in key),
        reps=reps_sorted,
        orders=tuple(orders[c] for c in key),
        class_of=class_of,
        inverse_class=inverse_class,
    )


def conjugacy_classes(G: FiniteGroup) -> ClassData:
    return G.classes


def power_class(G: FiniteGroup, t: int, r: int) -> int:
    cd = G.classes
    return int(cd.class_of[G.power(cd.reps[t], r)])


def exponent(G: FiniteGroup) -> int:
    return math.lcm(*G.classes.orders)


def min_centralizer_order(G: FiniteGroup) -> int:
    return min(G.classes.centralizer_orders)


def conjugator_transversal(G: FiniteGroup) -> np.ndarray:
    """For every g an element c with c^-1 rep(g) c = g, rep being the class representative."""
    cd = G.classes
    n = G.order
    conj = np.full(n, -1, dtype=np.int64)
    reps = np.asarray(cd.reps)
    conj[reps] = 0
    frontier = reps
    gens = G.generators
    while frontier.size:
        found = []
        for s in gens:
            imgs = G.conjugate(frontier, s)
            fresh = conj[imgs] < 0
            imgs, src = imgs[fresh], frontier[fresh]
            imgs, first = np.unique(imgs, return_index=True)
            conj[imgs] = G.mul(conj[src[first]], s)
            found.append(imgs)
        frontier = np.unique(np.concatenate(found)) if found else np.zeros(0, np.int64)
    return conj


# -- automorphisms --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AutAction:
    maps: tuple[np.ndarray, ...]
    out_order: int
    description: str


def automorphism_action(G: FiniteGroup) -> AutAction:
    if isinstance(G, PermutationGroup):
        n = G.n
        if n == 6:
            raise UnsupportedAutomorphisms(
                f"{G.descriptor}: exceptional outer automorphism unsupported")
        sgens = [perm_from_cycles(n, [[1, 2]]), perm_from_cycles(n, [list(range(1, n + 1))])]
        maps = tuple(G.conjugation_by_permutation(t) for t in sgens)
        if G.alternating:
            return AutAction(maps, 2, f"conjugation by S{n} generators")
        return AutAction(maps, 1, "inner automorphisms")
    if isinstance(G, PSL2Group):
        F = G.field
        maps = [G.conjugation_map(g) for g in G.generators]
        desc = ["inner"]
        if G.q % 2 == 1:
            maps.append(G.conjugation_by_matrix((F.primitive_element, 0, 0, 1)))
            desc.append("PGL2 diagonal")
        if G.f > 1:
            maps.append(G.map_entries([F.frobenius(x) for x in range(G.q)]))
            desc.append("Frobenius")
        return AutAction(tuple(maps), math.gcd(2, G.q - 1) * G.f, " + ".join(desc))
    if isinstance(G, CyclicGroup):
        m = G.m
        units = [u for u in range(1, m) if math.gcd(u, m) == 1] if m > 1 else []
        gens, reached = [], {1 % m}
        for u in units:
            if u in reached:
                continue
            gens.append(u)
            frontier = set(reached)
            while frontier:
                nxt = {(x * g) % m for x in frontier for g in gens} - reached
                reached |= nxt
                frontier = nxt
        maps = tuple((u * np.arange(m)) % m for u in gens)
        return AutAction(maps, max(1, len(units)), "unit multiplications")
    raise UnsupportedAutomorphisms(f"{G.descriptor}: automorphisms not implemented for this family")


def check_automorphism(G: FiniteGroup, phi: np.ndarray, samples: int = 10**4, seed: int = 0) -> bool:
    if G.order <= 1200:
        x = np.arange(G.order)
        a, b = np.repeat(x, G.order), np.tile(x, G.order)
    else:
        rng = np.random.default_rng(seed)
        a, b = rng.integers(0, G.order, samples), rng.integers(0, G.order, samples)
    bij = np.unique(phi).size == G.order
    return bij and bool(np.array_equal(phi[G.mul(a, b)], G.mul(phi[a], phi[b])))


@dataclass(frozen=True)
class AutClassOrbits:
    orbits: tuple[tuple[int, ...], ...]
    orbit_of: tuple[int, ...]
    inverse_closed: tuple[tuple[int, ...], ...]
    inverse_closed_of: tuple[int, ...]


def _partition(k: int, pairs) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    blocks: dict[int, list[int]] = {}
    for c in range(k):
        blocks.setdefault(find(c), []).append(c)
    parts = tuple(sorted(tuple(b) for b in blocks.values()))
    of = [0] * k
    for i, b in enumerate(parts):
        for c in b:
            of[c] = i
    return parts, tuple(of)


def aut_class_orbits(G: FiniteGroup, act: AutAction) -> AutClassOrbits:
    cd = G.classes
    pairs = [(t, int(cd.class_of[phi[r]])) for phi in act.maps for t, r in enumerate(cd.reps)]
    orbits, orbit_of = _partition(cd.k, pairs)
    inv_pairs = pairs + [(t, cd.inverse_class[t]) for t in range(cd.k)]
    closed, closed_of = _partition(cd.k, inv_pairs)
    return AutClassOrbits(orbits, orbit_of, closed, closed_of)


def generating_pair_matrix(G: FiniteGroup) -> np.ndarray:
    """Boolean |G| x |G| matrix M with M[g, h] iff <g, h> = G.

    Closures are only run for one g per class; the verdict for c^-1 x c is
    read off from x and c h c^-1.
    """
    n = G.order
    cd = G.classes
    base = np.zeros((cd.k, n), dtype=bool)
    for t, x in enumerate(cd.reps):
        for h in range(n):
            base[t, h] = subgroup_closure(G, (x, h)).size == n
    conj = conjugator_transversal(G)
    allx = np.arange(n)
    out = np.empty((n, n), dtype=bool)
    for g in range(n):
        c = int(conj[g])
        out[g] = base[cd.class_of[g], G.conjugate(allx, G.inv(c))]
    return out
