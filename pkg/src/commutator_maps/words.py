"""Words in the free group, commutator shapes, word-map evaluation and the
brute-force fiber oracle.

Products compose left to right: the leftmost letter acts first, so for
permutations (ab)(x) = b(a(x)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .character import CharacterTable
from .groups import FiniteGroup, ResourceCapError, generating_pair_matrix
from .spectral import Distribution, FiberTable, RootBound, zeta2_exact

BRUTE_CAP = 10**8
SAMPLES_DEFAULT = 10**7
MAX_VARS = 9


class WordSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos


@dataclass(frozen=True)
class Word:
    """A freely reduced word; letters are (variable, +1 or -1), variables 1-based."""
    letters: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for (a, e), (b, f) in zip(self.letters, self.letters[1:]):
            if a == b and e == -f:
                raise ValueError("word is not freely reduced")

    @property
    def arity(self) -> int:
        return max((v for v, _ in self.letters), default=0)

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> Word:
        return Word(tuple((v, -e) for v, e in reversed(self.letters)))

    def __mul__(self, other: Word) -> Word:
        return Word(_reduce(self.letters + other.letters))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        out = []
        for v, e in self.letters:
            out.append(f"x{v}" if e == 1 else f"x{v}^-1")
        return "".join(out)


def _reduce(letters) -> tuple[tuple[int, int], ...]:
    stack: list[tuple[int, int]] = []
    for v, e in letters:
        if stack and stack[-1] == (v, -e):
            stack.pop()
        else:
            stack.append((v, e))
    return tuple(stack)


def commutator_word(u: Word, v: Word) -> Word:
    """[u, v] = u^-1 v^-1 u v."""
    return Word(_reduce(u.inverse().letters + v.inverse().letters + u.letters + v.letters))


def word_power(w: Word, k: int) -> Word:
    base = w if k >= 0 else w.inverse()
    return Word(_reduce(base.letters * abs(k)))


class _Parser:
    # word   := factor*
    # factor := atom ('^' int)?
    # atom   := 'x' digit | '1' | '[' word ',' word ']' | '(' word ')'
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise WordSyntaxError(msg, self.text, self.pos)

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def word(self) -> Word:
        w = Word(())
        while self.peek() in ("x", "[", "(", "1"):
            w = w * self.factor()
        return w

    def factor(self) -> Word:
        a = self.atom()
        if self.peek() == "^":
            self.pos += 1
            a = word_power(a, self.integer())
        return a

    def integer(self) -> int:
        self.peek()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        digits = self.text[start:self.pos]
        if digits in ("", "-"):
            self.pos = start
            self.error("expected an integer exponent")
        return int(digits)

    def atom(self) -> Word:
        ch = self.peek()
        if ch == "x":
            self.pos += 1
            if self.pos >= len(self.text) or not self.text[self.pos].isdigit() or self.text[self.pos] == "0":
                self.error("expected a variable index 1..9")
            v = int(self.text[self.pos])
            self.pos += 1
            return Word(((v, 1),))
        if ch == "1":
            self.pos += 1
            return Word(())
        if ch == "[":
            self.pos += 1
            u = self.word()
            self.expect(",")
            v = self.word()
            self.expect("]")
            return commutator_word(u, v)
        if ch == "(":
            self.pos += 1
            u = self.word()
            self.expect(")")
            return u
        self.error("unexpected character" if ch else "unexpected end of input")


def parse_word(text: str) -> Word:
    p = _Parser(text)
    w = p.word()
    if p.peek():
        p.error("unexpected character")
    return w


# -- commutator shapes -----------------------------------------------------

Shape = Union[int, tuple]


@dataclass(frozen=True)
class CommutatorShape:
    """A binary bracket tree; leaves are variable indices 1..m, each used once."""
    tree: Shape

    def __post_init__(self):
        leaves = self.leaves()
        if sorted(leaves) != list(range(1, len(leaves) + 1)):
            raise ValueError(f"leaves must be a permutation of 1..m, got {leaves}")

    def leaves(self) -> list[int]:
        def walk(t):
            return [t] if isinstance(t, int) else walk(t[0]) + walk(t[1])
        return walk(self.tree)

    @property
    def m(self) -> int:
        return len(self.leaves())

    def __str__(self) -> str:
        def show(t):
            return f"x{t}" if isinstance(t, int) else f"[{show(t[0])},{show(t[1])}]"
        return show(self.tree)


def shape_to_word(shape: CommutatorShape) -> Word:
    def expand(t):
        if isinstance(t, int):
            return Word(((t, 1),))
        return commutator_word(expand(t[0]), expand(t[1]))
    return expand(shape.tree)


def left_nested(m: int) -> CommutatorShape:
    t: Shape = 1
    for v in range(2, m + 1):
        t = (t, v)
    return CommutatorShape(t)


def balanced(m: int) -> CommutatorShape:
    def build(lo, hi):
        if lo == hi:
            return lo
        mid = (lo + hi) // 2
        return (build(lo, mid), build(mid + 1, hi))
    return CommutatorShape(build(1, m))


def all_shapes(m: int) -> list[CommutatorShape]:
    """Every bracketing of x1..xm in order."""
    def build(lo, hi):
        if lo == hi:
            return [lo]
        return [(a, b) for mid in range(lo, hi)
                for a in build(lo, mid) for b in build(mid + 1, hi)]
    if m < 2:
        raise ValueError("a commutator shape needs m >= 2")
    return [CommutatorShape(t) for t in build(1, m)]


# -- evaluation ------------------------------------------------------------

def evaluate(w: Word, G: FiniteGroup, tup: Sequence):
    """Substitute ``tup`` into ``w``.  Entries may be scalars or equal-shape arrays."""
    if len(tup) < w.arity:
        raise ValueError(f"word needs {w.arity} arguments, got {len(tup)}")
    shape = np.broadcast(*[np.asarray(t) for t in tup]).shape if tup else ()
    acc = np.zeros(shape, dtype=np.int64)
    inverses = {}
    for v, e in w.letters:
        x = np.asarray(tup[v - 1])
        if e < 0:
            if v not in inverses:
                inverses[v] = G.inverse[x]
            x = inverses[v]
        acc = G.mul(acc, x)
    return int(acc) if np.ndim(acc) == 0 else acc


def brute_force_fibers(w: Word, G: FiniteGroup, classes=None, cap: int = BRUTE_CAP) -> FiberTable:
    """Exact fibers of the word map G^m -> G by enumeration.

    The first variable runs over class representatives only, weighted by the
    class size: simultaneous conjugation permutes tuples and fibers alike.
    """
    cd = classes or G.classes
    n, m = G.order, w.arity
    if m == 0:
        counts = [1] + [0] * (cd.k - 1)
        return FiberTable(tuple(counts), cd.sizes, 1, str(w))
    if n ** m > cap:
        raise ResourceCapError(f"|G|^{m} = {n ** m} exceeds the enumeration cap {cap}")
    total = np.zeros(cd.k, dtype=np.int64)
    rest = m - 1
    span = n ** rest
    step = 2**21
    for rep, size in zip(cd.reps, cd.sizes):
        hits = np.zeros(cd.k, dtype=np.int64)
        for start in range(0, span, step):
            flat = np.arange(start, min(span, start + step), dtype=np.int64)
            tup = [np.full(flat.shape, rep, dtype=np.int64)]
            for i in range(rest):
                tup.append((flat // n ** (rest - 1 - i)) % n)
            vals = evaluate(w, G, tup)
            hits += np.bincount(cd.class_of[np.asarray(vals)], minlength=cd.k)
        total += size * hits
    sizes = np.asarray(cd.sizes)
    if np.any(total % sizes):
        raise AssertionError("fiber totals are not constant on classes")
    return FiberTable(tuple(int(x) for x in total // sizes), cd.sizes, n ** m, str(w))


@dataclass(frozen=True)
class SampledFibers:
    """Class hit counts from uniformly sampled tuples."""
    word: str
    hits: tuple[int, ...]
    class_sizes: tuple[int, ...]
    samples: int
    seed: int
    exhaustive: bool = False

    def per_element(self) -> np.ndarray:
        return np.asarray(self.hits, float) / self.samples / np.asarray(self.class_sizes)


def sampled_fibers(w: Word, G: FiniteGroup, samples: int = SAMPLES_DEFAULT, seed: int = 0,
                   classes=None) -> SampledFibers:
    cd = classes or G.classes
    rng = np.random.default_rng(seed)
    hits = np.zeros(cd.k, dtype=np.int64)
    block = 2**20
    done = 0
    while done < samples:
        b = min(block, samples - done)
        tup = list(rng.integers(0, G.order, size=(max(1, w.arity), b)))
        hits += np.bincount(cd.class_of[evaluate(w, G, tup)], minlength=cd.k)
        done += b
    return SampledFibers(str(w), tuple(int(h) for h in hits), cd.sizes, samples, seed)


def word_fibers(w: Word, G: FiniteGroup, classes=None, cap: int = BRUTE_CAP,
                samples: int = SAMPLES_DEFAULT, seed: int = 0):
    """Exhaustive fibers when under the cap, sampled estimates above it."""
    try:
        return brute_force_fibers(w, G, classes, cap)
    except ResourceCapError:
        return sampled_fibers(w, G, samples, seed, classes)


def gamma_bound(table: CharacterTable, m: int) -> RootBound:
    """(m-1)^(1/2) (zeta(2)-1)^(1/4), as an exact fourth root."""
    if m < 2:
        raise ValueError("m must be at least 2")
    return RootBound((m - 1) ** 2 * (zeta2_exact(table) - 1), 4)


# -- product and composition of word maps ----------------------------------

def pushforward(dist: Distribution, G: FiniteGroup, w: Word, classes=None) -> Distribution:
    """Image of a class-function distribution under a one-variable word map."""
    if w.arity > 1:
        raise ValueError("pushforward needs a word in x1 only")
    cd = classes or G.classes
    if dist.class_sizes != cd.sizes:
        raise ValueError("distribution does not match the class partition")
    mass = [Fraction(0)] * cd.k
    for t, rep in enumerate(cd.reps):
        u = int(cd.class_of[evaluate(w, G, [rep])])
        mass[u] += dist.masses[t] * cd.sizes[t]
    return Distribution(tuple(mm / s for mm, s in zip(mass, cd.sizes)), cd.sizes)


def product_fibers(f1: FiberTable, f2: FiberTable) -> FiberTable:
    """Fibers of (f1, f2) on the product: classes of G1 x G2 are pairs, first index major."""
    counts = tuple(a * b for a in f1.counts for b in f2.counts)
    sizes = tuple(a * b for a in f1.class_sizes for b in f2.class_sizes)
    return FiberTable(counts, sizes, f1.domain_size * f2.domain_size, f"({f1.word})x({f2.word})")


# -- nested commutators of pairwise generating tuples ----------------------

@dataclass(frozen=True)
class NestedCommutatorCensus:
    samples: int
    accepted: int
    seed: int
    elements: frozenset
    conjugation_closed: bool

    @property
    def count(self) -> int:
        return len(self.elements)


def pairwise_generating_nested_commutators(G: FiniteGroup, samples: int = 10**5,
                                           seed: int = 0) -> NestedCommutatorCensus:
    """Sample 4-tuples with every pair generating and collect [[g1,g2],[g3,g4]]."""
    gen = generating_pair_matrix(G)
    rng = np.random.default_rng(seed)
    T = rng.integers(0, G.order, size=(4, samples))
    ok = np.ones(samples, dtype=bool)
    for i in range(4):
        for j in range(i + 1, 4):
            ok &= gen[T[i], T[j]]
    w = shape_to_word(balanced(4))
    vals = evaluate(w, G, list(T[:, ok])) if ok.any() else np.zeros(0, np.int64)
    found = np.unique(vals)
    closed = True
    for g in G.generators:
        img = np.unique(G.conjugate(found, g))
        closed &= bool(np.array_equal(img, found))
    return NestedCommutatorCensus(samples, int(ok.sum()), seed,
                                  frozenset(int(x) for x in found), closed)


def classes_in(found, classes) -> tuple[int, ...]:
    return tuple(sorted({int(classes.class_of[g]) for g in found}))

