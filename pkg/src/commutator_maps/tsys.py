"""Generating tuples, Nielsen-move graphs, T-systems, Higman labels and the
product replacement walk."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .character import table_for
from .groups import (AutAction, AutClassOrbits, ClassData, FiniteGroup, GroupError,
                     ResourceCapError, conjugator_transversal, generating_pair_matrix,
                     min_centralizer_order, subgroup_closure)
from .spectral import RootBound, at_most, epsilon_bound

TUPLE_CAP = 10**7


@dataclass(frozen=True, eq=False)
class GeneratingTupleSet:
    """All generating k-tuples, sorted lexicographically; row i is tuple i."""
    group_order: int
    k: int
    tuples: np.ndarray

    def __len__(self) -> int:
        return len(self.tuples)

    @cached_property
    def codes(self) -> np.ndarray:
        n = self.group_order
        return sum(self.tuples[:, i] * n ** (self.k - 1 - i) for i in range(self.k))

    def lookup(self, T: np.ndarray) -> np.ndarray:
        """Dense indices of the rows of T; -1 where a row is not in the set."""
        n = self.group_order
        c = sum(T[:, i].astype(np.int64) * n ** (self.k - 1 - i) for i in range(self.k))
        codes = self.codes
        pos = np.searchsorted(codes, c)
        pos = np.minimum(pos, len(codes) - 1)
        return np.where(codes[pos] == c, pos, -1)

    def index(self, tup) -> int:
        return int(self.lookup(np.asarray([tup], dtype=np.int64))[0])


def generating_tuples(G: FiniteGroup, k: int) -> GeneratingTupleSet:
    if k not in (2, 3):
        raise GroupError("exhaustive enumeration supports k = 2 or 3")
    n = G.order
    if n ** k > TUPLE_CAP:
        raise ResourceCapError(f"|G|^{k} = {n ** k} exceeds the tuple cap {TUPLE_CAP}")
    pair = generating_pair_matrix(G)
    if k == 2:
        a, b = np.nonzero(pair)
        return GeneratingTupleSet(n, 2, np.stack([a, b], axis=1).astype(np.int64))
    # k = 3: decide one first coordinate per class, then conjugate
    cd = G.classes
    memo: dict[tuple[int, int], bool] = {}
    ids: dict[bytes, int] = {}
    base = np.zeros((cd.k, n, n), dtype=bool)
    for t, x in enumerate(cd.reps):
        base[t] = pair | pair[x][:, None] | pair[x][None, :]
        for h in np.flatnonzero(~pair[x]):
            H = subgroup_closure(G, (x, int(h)), early_exit=False)
            hid = ids.setdefault(H.tobytes(), len(ids))
            for g3 in np.flatnonzero(~base[t, h]):
                mk = (hid, int(g3))
                if mk not in memo:
                    memo[mk] = subgroup_closure(G, np.append(H, g3)).size == n
                base[t, h, g3] = memo[mk]
    conj = conjugator_transversal(G)
    allx = np.arange(n)
    rows = []
    for g in range(n):
        c = G.inv(int(conj[g]))
        img = G.conjugate(allx, c)
        sub = base[cd.class_of[g]][np.ix_(img, img)]
        b, c3 = np.nonzero(sub)
        rows.append(np.stack([np.full(b.size, g), b, c3], axis=1))
    return GeneratingTupleSet(n, 3, np.concatenate(rows).astype(np.int64))


# -- moves -----------------------------------------------------------------

Move = Callable[[FiniteGroup, np.ndarray], np.ndarray]


def _with(T: np.ndarray, i: int, col: np.ndarray) -> np.ndarray:
    out = T.copy()
    out[:, i] = col
    return out


@dataclass(frozen=True)
class MoveSet:
    """R+-, L+- for every ordered pair (the PRA edges); ``extended`` adds P and I."""
    k: int
    extended: bool = False
    moves: tuple[tuple[str, Move], ...] = field(init=False, repr=False)

    def __post_init__(self):
        out: list[tuple[str, Move]] = []
        for i in range(self.k):
            for j in range(self.k):
                if i == j:
                    continue
                out += [
                    (f"R+{i + 1}{j + 1}", lambda G, T, i=i, j=j: _with(T, i, G.mul(T[:, i], T[:, j]))),
                    (f"R-{i + 1}{j + 1}", lambda G, T, i=i, j=j: _with(T, i, G.mul(T[:, i], G.inverse[T[:, j]]))),
                    (f"L+{i + 1}{j + 1}", lambda G, T, i=i, j=j: _with(T, i, G.mul(T[:, j], T[:, i]))),
                    (f"L-{i + 1}{j + 1}", lambda G, T, i=i, j=j: _with(T, i, G.mul(G.inverse[T[:, j]], T[:, i]))),
                ]
        if self.extended:
            for i in range(self.k):
                for j in range(i + 1, self.k):
                    out.append((f"P{i + 1}{j + 1}", lambda G, T, i=i, j=j: T[:, _swap(self.k, i, j)]))
                out.append((f"I{i + 1}", lambda G, T, i=i: _with(T, i, G.inverse[T[:, i]])))
        object.__setattr__(self, "moves", tuple(out))


def _swap(k: int, i: int, j: int) -> list[int]:
    perm = list(range(k))
    perm[i], perm[j] = j, i
    return perm


def nielsen_neighbors(G: FiniteGroup, tup, moves: MoveSet) -> list[tuple[int, ...]]:
    T = np.asarray([tup], dtype=np.int64)
    return [tuple(int(x) for x in f(G, T)[0]) for _, f in moves.moves]


# -- components ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ComponentStructure:
    labels: np.ndarray
    count: int
    sizes: tuple[int, ...]
    representatives: tuple[int, ...]   # smallest tuple index per component
    higman: tuple[tuple[int, ...], ...] | None = None


def _components(n_vertices: int, edge_batches) -> ComponentStructure:
    """Connected components, merging one batch of edges at a time."""
    labels = np.arange(n_vertices)
    count = n_vertices
    for src, dst in edge_batches:
        a, b = labels[src], labels[dst]
        graph = coo_matrix((np.ones(a.size, dtype=np.int8), (a, b)), shape=(count, count))
        count, sub = connected_components(graph, directed=True, connection="weak")
        labels = sub[labels]
    # renumber components by their smallest member so reports are stable
    first = np.full(count, n_vertices, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(n_vertices))
    order = np.argsort(first)
    relabel = np.empty(count, dtype=np.int64)
    relabel[order] = np.arange(count)
    labels = relabel[labels]
    labels.setflags(write=False)
    sizes = np.bincount(labels, minlength=count)
    return ComponentStructure(labels, int(count), tuple(int(s) for s in sizes),
                              tuple(int(first[c]) for c in order))


def _move_edges(G: FiniteGroup, tuples: GeneratingTupleSet, moves: MoveSet):
    idx = np.arange(len(tuples))
    for name, f in moves.moves:
        dst = tuples.lookup(f(G, tuples.tuples))
        if np.any(dst < 0):
            raise AssertionError(f"move {name} leaves the set of generating tuples")
        yield idx, dst


def _aut_edges(tuples: GeneratingTupleSet, act: AutAction):
    idx = np.arange(len(tuples))
    for phi in act.maps:
        dst = tuples.lookup(np.asarray(phi)[tuples.tuples])
        if np.any(dst < 0):
            raise AssertionError("automorphism leaves the set of generating tuples")
        yield idx, dst


def graph_components(G: FiniteGroup, tuples: GeneratingTupleSet, moves: MoveSet) -> ComponentStructure:
    return _components(len(tuples), _move_edges(G, tuples, moves))


def t_systems(G: FiniteGroup, tuples: GeneratingTupleSet, act: AutAction,
              orbits: AutClassOrbits | None = None) -> ComponentStructure:
    """Components of the extended graph merged under Aut(G); Higman labels when k = 2."""
    edges = itertools.chain(_move_edges(G, tuples, MoveSet(tuples.k, extended=True)),
                            _aut_edges(tuples, act))
    cs = _components(len(tuples), edges)
    if orbits is None or tuples.k != 2:
        return cs
    labels = tuple(higman_invariant(G, tuples.tuples[r], orbits) for r in cs.representatives)
    return ComponentStructure(cs.labels, cs.count, cs.sizes, cs.representatives, labels)


# -- Higman invariant ------------------------------------------------------

def higman_invariant(G: FiniteGroup, tup, orbits: AutClassOrbits) -> tuple[int, ...]:
    """Sorted class indices of the Aut-orbit union of class([g1,g2]) and its inverse class."""
    t = int(G.classes.class_of[G.commutator(int(tup[0]), int(tup[1]))])
    return orbits.inverse_closed[orbits.inverse_closed_of[t]]


def higman_labels(G: FiniteGroup, tuples: GeneratingTupleSet, orbits: AutClassOrbits) -> np.ndarray:
    """Per-tuple block index of the Higman label."""
    T = tuples.tuples
    cls = G.classes.class_of[G.commutator(T[:, 0], T[:, 1])]
    return np.asarray(orbits.inverse_closed_of)[cls]


@dataclass(frozen=True)
class T2Census:
    labels: tuple[tuple[int, ...], ...]
    c: int
    out_order: int

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def centralizer_ratio(self) -> Fraction:
        return Fraction(self.c, 2 * self.out_order)


def t2_invariant_census(G: FiniteGroup, tuples: GeneratingTupleSet, act: AutAction,
                        orbits: AutClassOrbits) -> T2Census:
    blocks = np.unique(higman_labels(G, tuples, orbits))
    labels = tuple(orbits.inverse_closed[int(b)] for b in blocks)
    return T2Census(labels, min_centralizer_order(G), act.out_order)


def pra_component_invariant_check(G: FiniteGroup, tuples: GeneratingTupleSet,
                                  components: ComponentStructure | None = None) -> bool:
    """The conjugacy class of [g1, g2] is constant on every component of the PRA graph."""
    cs = components or graph_components(G, tuples, MoveSet(2))
    T = tuples.tuples
    cls = G.classes.class_of[G.commutator(T[:, 0], T[:, 1])]
    return _constant_on(cs.labels, cls, cs.count)


def _constant_on(labels: np.ndarray, values: np.ndarray, count: int) -> bool:
    lo = np.full(count, np.iinfo(np.int64).max)
    hi = np.full(count, np.iinfo(np.int64).min)
    np.minimum.at(lo, labels, values)
    np.maximum.at(hi, labels, values)
    return bool(np.all(lo == hi))


def higman_constant_on_t_systems(G: FiniteGroup, tuples: GeneratingTupleSet,
                                 ts: ComponentStructure, orbits: AutClassOrbits) -> bool:
    return _constant_on(ts.labels, higman_labels(G, tuples, orbits), ts.count)


@dataclass(frozen=True)
class ComponentSummary:
    k: int
    vertices: int
    chi: int
    chi_ext: int
    t_count: int | None
    census: int | None

    @property
    def chain_ok(self) -> bool:
        ok = self.chi_ext <= self.chi <= 2 * self.chi_ext
        if self.t_count is not None:
            ok = ok and self.t_count <= self.chi_ext
        if self.census is not None and self.t_count is not None:
            ok = ok and self.census <= self.t_count
        return ok

    @property
    def connectivity_agrees(self) -> bool:
        return (self.chi == 1) == (self.chi_ext == 1)


# -- product replacement ---------------------------------------------------

def first_generating_tuple(G: FiniteGroup, k: int) -> tuple[int, ...]:
    """Lexicographically smallest generating k-tuple of element indices."""
    n = G.order
    memo: dict[tuple[bytes, int], tuple[int, ...] | None] = {}

    def extend(H: np.ndarray, r: int):
        if H.size == n:
            return (0,) * r
        if r == 0:
            return None
        key = (H.tobytes(), r)
        if key in memo:
            return memo[key]
        result = None
        member = np.zeros(n, dtype=bool)
        member[H] = True
        for g in range(n):
            H2 = H if member[g] else subgroup_closure(G, np.append(H, g), early_exit=False)
            rest = extend(H2, r - 1)
            if rest is not None:
                result = (g,) + rest
                break
        memo[key] = result
        return result

    found = extend(np.array([0], dtype=np.int64), k)
    if found is None:
        raise GroupError(f"{G.descriptor} has no generating {k}-tuple")
    return found


@dataclass(frozen=True, eq=False)
class WalkReport:
    k: int
    steps: int
    burn_in: int
    seed: int
    start: tuple[int, ...]
    samples: np.ndarray

    def histogram(self, n: int) -> np.ndarray:
        return np.bincount(self.samples, minlength=n)

    def l1_to_uniform(self, n: int) -> float:
        h = self.histogram(n) / len(self.samples)
        return float(np.abs(h - 1 / n).sum())


def pra_walk(G: FiniteGroup, k: int, steps: int, burn_in: int, samples: int,
             seed: int) -> WalkReport:
    """Product replacement: pick i != j uniformly, then one of R+-, L+-.

    Moves and emitted coordinates are drawn from two independent streams
    spawned from the seed, so the sample sequence does not depend on how
    random numbers are batched.
    """
    if not 2 <= k <= 5:
        raise GroupError("walks support 2 <= k <= 5")
    if steps < 0 or burn_in < 0 or samples < 1:
        raise ValueError("steps and burn_in must be >= 0 and samples >= 1")
    start = first_generating_tuple(G, k)
    move_rng, coord_rng = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
    table = G.table
    mul = (lambda a, b: int(table[a, b])) if table is not None else G.mul
    inv = G.inverse.tolist()
    pairs = [(i, j) for i in range(k) for j in range(k) if i != j]
    cur = list(start)
    out = np.empty(samples, dtype=np.int64)

    batch = 1 << 16
    buf_pair = buf_op = None
    pos = batch

    def advance(count: int):
        nonlocal buf_pair, buf_op, pos
        for _ in range(count):
            if pos == batch:
                buf_pair = move_rng.integers(0, len(pairs), batch).tolist()
                buf_op = move_rng.integers(0, 4, batch).tolist()
                pos = 0
            i, j = pairs[buf_pair[pos]]
            op = buf_op[pos]
            pos += 1
            if op == 0:
                cur[i] = mul(cur[i], cur[j])
            elif op == 1:
                cur[i] = mul(cur[i], inv[cur[j]])
            elif op == 2:
                cur[i] = mul(cur[j], cur[i])
            else:
                cur[i] = mul(inv[cur[j]], cur[i])

    advance(burn_in)
    coords = coord_rng.integers(0, k, samples)
    for s in range(samples):
        if s:
            advance(steps)
        out[s] = cur[coords[s]]
    return WalkReport(k, steps, burn_in, seed, tuple(start), out)


# -- coverage by commutators of generating pairs ---------------------------

@dataclass(frozen=True)
class Coverage:
    covered: frozenset
    fraction: Fraction
    lower_bound: float
    verdict: bool
    vacuous: bool


def commutator_generating_coverage(G: FiniteGroup, tuples: GeneratingTupleSet) -> Coverage:
    if tuples.k != 2:
        raise GroupError("coverage is defined for generating pairs")
    T = tuples.tuples
    covered = np.unique(G.commutator(T[:, 0], T[:, 1]))
    n = G.order
    frac = Fraction(covered.size, n)
    base = Fraction(len(tuples), n * n)
    eps3 = epsilon_bound(table_for(G)).scaled(3)
    # fraction >= base - 3 eps  <=>  base - fraction <= 3 eps
    verdict = at_most(base - frac, eps3)
    vacuous = at_most(base, eps3)
    return Coverage(frozenset(int(x) for x in covered), frac, float(base) - float(eps3),
                    verdict, vacuous)


def component_summary(G: FiniteGroup, k: int, act: AutAction | None,
                      orbits: AutClassOrbits | None = None) -> ComponentSummary:
    V = generating_tuples(G, k)
    chi = graph_components(G, V, MoveSet(k)).count
    chi_ext = graph_components(G, V, MoveSet(k, extended=True)).count
    t_count = census = None
    if act is not None:
        t_count = t_systems(G, V, act).count
        if k == 2 and orbits is not None:
            census = t2_invariant_census(G, V, act, orbits).size
    return ComponentSummary(k, len(V), chi, chi_ext, t_count, census)
