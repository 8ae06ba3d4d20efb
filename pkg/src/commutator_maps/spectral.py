"""Quantities derived from character tables: zeta values, fiber counts,
L1 distances, equidistribution witnesses and closed-form deviations.

Bounds such as (zeta(2) - 1)^(1/4) are irrational in general.  They are
carried as :class:`RootBound` so that comparisons against the exact
rational fiber data stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .character import CharacterTable, cyclotomic_rational, real_characters, table_for
from .groups import ClassData, FiniteGroup, PermutationGroup, PSL2Group, group_new


class FiberIntegralityError(ArithmeticError):
    """A character sum that must be a nonnegative integer was not."""


@dataclass(frozen=True)
class RootBound:
    """The real number ``factor * radicand ** (1 / degree)``."""
    radicand: Fraction
    degree: int
    factor: Fraction = Fraction(1)

    def __float__(self) -> float:
        return float(self.factor) * float(self.radicand) ** (1 / self.degree)

    def scaled(self, c) -> RootBound:
        return RootBound(self.radicand, self.degree, self.factor * Fraction(c))

    def sqrt(self) -> RootBound:
        if self.factor != 1:
            raise ValueError("sqrt only defined for unit factor")
        return RootBound(self.radicand, 2 * self.degree)

    def ge(self, x) -> bool:
        """Exactly decide x <= self."""
        x = Fraction(x)
        if x <= 0:
            return True
        if self.factor <= 0:
            return False
        return (x / self.factor) ** self.degree <= self.radicand


Bound = Union[float, Fraction, RootBound]


def at_most(x, bound: Bound) -> bool:
    """Exact x <= bound; floats are compared through their exact binary value."""
    if isinstance(bound, RootBound):
        return bound.ge(x)
    return Fraction(x) <= Fraction(bound)


# -- distributions ---------------------------------------------------------

@dataclass(frozen=True)
class Distribution:
    """A class function probability distribution: ``masses[t]`` is the
    probability of each single element of class ``t``."""
    masses: tuple[Fraction, ...]
    class_sizes: tuple[int, ...]
    arity: int = 1

    def __post_init__(self):
        if any(m < 0 for m in self.masses):
            raise ValueError("negative probability mass")
        if sum(m * s for m, s in zip(self.masses, self.class_sizes)) != 1:
            raise ValueError("masses do not sum to one")

    @property
    def floats(self) -> np.ndarray:
        return np.array([float(m) for m in self.masses])

    @property
    def support_size(self) -> int:
        return sum(s for m, s in zip(self.masses, self.class_sizes) if m)


def uniform(class_sizes: Sequence[int]) -> Distribution:
    n = sum(class_sizes)
    return Distribution(tuple(Fraction(1, n) for _ in class_sizes), tuple(class_sizes))


def point_mass(class_sizes: Sequence[int], t: int = 0) -> Distribution:
    if class_sizes[t] != 1:
        raise ValueError("point mass needs a singleton class")
    return Distribution(tuple(Fraction(int(i == t)) for i in range(len(class_sizes))),
                        tuple(class_sizes))


@dataclass(frozen=True)
class FiberTable:
    """Per-element fiber sizes, stored once per class."""
    counts: tuple[int, ...]
    class_sizes: tuple[int, ...]
    domain_size: int
    word: str = ""
    exhaustive: bool = True

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise FiberIntegralityError("negative fiber count")
        total = sum(c * s for c, s in zip(self.counts, self.class_sizes))
        if total != self.domain_size:
            raise FiberIntegralityError(f"fibers sum to {total}, expected {self.domain_size}")

    @property
    def codomain_size(self) -> int:
        return sum(self.class_sizes)

    @property
    def k(self) -> int:
        return len(self.counts)

    def ratio(self, t: int) -> Fraction:
        """N(g) relative to the mean fiber size |X|/|Y|."""
        return Fraction(self.counts[t] * self.codomain_size, self.domain_size)

    def deviation(self, t: int) -> Fraction:
        return self.ratio(t) - 1

    def distribution(self) -> Distribution:
        return Distribution(tuple(Fraction(c, self.domain_size) for c in self.counts),
                            self.class_sizes)


# -- zeta ------------------------------------------------------------------

def witten_zeta(table: CharacterTable, s: float) -> float:
    if s <= 0:
        raise ValueError("s must be positive")
    return math.fsum(d ** -s for d in table.degrees)


def zeta2_exact(table: CharacterTable, chars: Sequence[int] | None = None) -> Fraction:
    chars = range(table.k) if chars is None else chars
    return sum((Fraction(1, table.degrees[c] ** 2) for c in chars), Fraction(0))


def delta_bound(table: CharacterTable) -> RootBound:
    return RootBound(zeta2_exact(table) - 1, 2)


def epsilon_bound(table: CharacterTable) -> RootBound:
    return RootBound(zeta2_exact(table) - 1, 4)


def delta_epsilon(table: CharacterTable) -> tuple[float, float]:
    z = witten_zeta(table, 2) - 1
    return z ** 0.5, z ** 0.25


def real_bound(table: CharacterTable) -> RootBound:
    """(sum over real characters of chi(1)^-2 - 1)^(1/2)."""
    return RootBound(zeta2_exact(table, real_characters(table)) - 1, 2)


# -- character-sum fibers --------------------------------------------------

def _character_sum_fibers(table: CharacterTable, chars: Sequence[int], word: str) -> FiberTable:
    n = table.group_order
    degs = [table.degrees[c] for c in chars]
    L = math.lcm(*degs)
    counts = []
    for t in range(table.k):
        vec = sum((L // d) * table.mult[c, t] for c, d in zip(chars, degs))
        r = cyclotomic_rational(vec, table.exponent)
        if r is None or (n * r) % L:
            raise FiberIntegralityError(f"class {t}: character sum is not integral")
        exact = n * r // L
        approx = n * sum(table.values[c, t] / d for c, d in zip(chars, degs))
        if abs(approx - exact) > 1e-6:
            raise FiberIntegralityError(f"class {t}: float mirror {approx} disagrees with {exact}")
        counts.append(exact)
    return FiberTable(tuple(counts), table.class_sizes, n * n, word)


def frobenius_fibers(table: CharacterTable, classes: ClassData | None = None) -> FiberTable:
    """N(g) = |G| sum_chi chi(g)/chi(1) for the commutator [x1,x2]."""
    return _character_sum_fibers(table, range(table.k), "[x1,x2]")


def squares_word_fibers(table: CharacterTable, classes: ClassData | None = None) -> FiberTable:
    """Fibers of x1^2 x2^2: the same sum restricted to real characters."""
    return _character_sum_fibers(table, real_characters(table), "x1^2x2^2")


@dataclass(frozen=True)
class DeviationReport:
    deltas: tuple[Fraction, ...]
    E: tuple[float, ...]

    @property
    def ok(self) -> bool:
        return all(abs(float(d)) <= e + 1e-9 for d, e in zip(self.deltas, self.E))


def deviation_report(table: CharacterTable, fibers: FiberTable | None = None) -> DeviationReport:
    fibers = fibers or frobenius_fibers(table)
    X = np.abs(table.values[1:])
    degs = np.array(table.degrees[1:], dtype=float)
    E = tuple(float(v) for v in (X / degs[:, None]).sum(axis=0))
    return DeviationReport(tuple(fibers.deviation(t) for t in range(table.k)), E)


# -- Fourier analysis and distances ----------------------------------------

def fourier_coefficients(dist: Distribution, table: CharacterTable, tol: float = 1e-8) -> np.ndarray:
    """Coefficients a_chi with P = |G|^-1 sum a_chi chi."""
    sizes = np.array(table.class_sizes, dtype=float)
    a = (table.values.conj() * (sizes * dist.floats)).sum(axis=1)
    if abs(a[0] - 1) > tol:
        raise AssertionError(f"a_1 = {a[0]}, expected 1")
    lhs = float((sizes * dist.floats ** 2).sum())
    rhs = float((np.abs(a) ** 2).sum()) / table.group_order
    if abs(lhs - rhs) > tol:
        raise AssertionError(f"Plancherel identity fails: {lhs} vs {rhs}")
    return a


def l1_distance(p: Distribution, q: Distribution) -> Fraction:
    if p.class_sizes != q.class_sizes:
        raise ValueError("distributions live on different class partitions")
    return sum((s * abs(a - b) for a, b, s in zip(p.masses, q.masses, p.class_sizes)),
               Fraction(0))


def l1_to_uniform(fibers: FiberTable) -> Fraction:
    return l1_distance(fibers.distribution(), uniform(fibers.class_sizes))


def product_l1(p1: Distribution, p2: Distribution) -> Fraction:
    """L1 distance to uniform of the product distribution on Y1 x Y2."""
    n1, n2 = sum(p1.class_sizes), sum(p2.class_sizes)
    u = Fraction(1, n1 * n2)
    return sum((s1 * s2 * abs(a * b - u)
                for a, s1 in zip(p1.masses, p1.class_sizes)
                for b, s2 in zip(p2.masses, p2.class_sizes)), Fraction(0))


# -- equidistribution ------------------------------------------------------

@dataclass(frozen=True)
class EquidistributionWitness:
    eps: Bound
    classes: tuple[int, ...]
    size: int
    size_ok: bool
    fibers_ok: bool
    min_ratio: Fraction | None
    max_ratio: Fraction | None

    @property
    def verdict(self) -> bool:
        return self.size_ok and self.fibers_ok


def equidistribution_witness(fibers: FiberTable, eps: Bound) -> EquidistributionWitness:
    """Largest candidate S: every class whose fibers sit within (1 +- eps) of the mean."""
    if float(eps) <= 0:
        raise ValueError("eps must be positive")
    S = tuple(t for t in range(fibers.k) if at_most(abs(fibers.deviation(t)), eps))
    size = sum(fibers.class_sizes[t] for t in S)
    n = fibers.codomain_size
    size_ok = at_most(1 - Fraction(size, n), eps)
    ratios = [fibers.ratio(t) for t in S]
    fibers_ok = all(at_most(abs(r - 1), eps) for r in ratios)
    return EquidistributionWitness(eps, S, size, size_ok, fibers_ok,
                                   min(ratios) if ratios else None,
                                   max(ratios) if ratios else None)


@dataclass(frozen=True)
class MeasureReport:
    preimage_fraction: Fraction
    target_fraction: Fraction
    eps: Bound

    @property
    def gap(self) -> Fraction:
        return self.preimage_fraction - self.target_fraction

    @property
    def ok(self) -> bool:
        return at_most(abs(self.gap), _scale(self.eps, 3))


def _scale(b: Bound, c) -> Bound:
    return b.scaled(c) if isinstance(b, RootBound) else Fraction(b) * c


def measure_preservation_check(fibers: FiberTable, subset, eps: Bound, class_of=None) -> MeasureReport:
    """Compare |f^-1(Y0)|/|X| with |Y0|/|Y| for a subset Y0.

    ``subset`` is an iterable of element indices when ``class_of`` is given,
    otherwise a per-class count of chosen elements.
    """
    if class_of is not None:
        idx = np.asarray(list(subset), dtype=np.int64)
        per_class = np.bincount(np.asarray(class_of)[idx], minlength=fibers.k)
    else:
        per_class = list(subset)
    pre = sum(int(c) * n for c, n in zip(per_class, fibers.counts))
    chosen = sum(int(c) for c in per_class)
    return MeasureReport(Fraction(pre, fibers.domain_size),
                         Fraction(chosen, fibers.codomain_size), eps)


@dataclass(frozen=True)
class CommutatorCount:
    count: int
    bound: float
    verdict: bool
    vacuous: bool


def commutator_count_check(fibers: FiberTable, delta: Bound) -> CommutatorCount:
    """Elements hit by the map versus the lower bound (1 - delta)|Y|."""
    n = fibers.codomain_size
    count = sum(s for c, s in zip(fibers.counts, fibers.class_sizes) if c > 0)
    vacuous = at_most(1, delta)
    verdict = at_most(1 - Fraction(count, n), delta)
    return CommutatorCount(count, max(0.0, (1 - float(delta)) * n), verdict, vacuous)


@dataclass(frozen=True)
class RoundTrip:
    l1: Fraction
    forward_ok: bool   # witness(eps) succeeded => l1 <= 4 eps
    backward_ok: bool  # witness(sqrt(l1)) succeeds


def witness_roundtrip(fibers: FiberTable, eps: Bound) -> RoundTrip:
    l1 = l1_to_uniform(fibers)
    w = equidistribution_witness(fibers, eps)
    forward = (not w.verdict) or at_most(l1, _scale(eps, 4))
    if l1 == 0:
        backward = all(c * fibers.codomain_size == fibers.domain_size for c in fibers.counts)
    else:
        backward = equidistribution_witness(fibers, RootBound(l1, 2)).verdict
    return RoundTrip(l1, forward, backward)


# -- PSL(2, q) closed forms ------------------------------------------------

def psl2_delta_closed_form(q: int, kind: str, exponent: int = 1) -> Fraction:
    """Deviation Delta for split ('a'), nonsplit ('b') or unipotent ('c') elements."""
    if q % 2 == 0:
        kind_mod = "even"
    else:
        kind_mod = 1 if q % 4 == 1 else 3
    if kind == "a":
        if kind_mod == 1:
            alpha = 2 if exponent % 2 == 0 else -4
        else:
            alpha = -1
        return Fraction(1, q) + Fraction(alpha, q + 1)
    if kind == "b":
        if kind_mod in (1, "even"):
            beta = 1
        else:
            beta = -2 if exponent % 2 == 0 else 4
        return -Fraction(1, q) + Fraction(beta, q - 1)
    if kind == "c":
        if kind_mod == 1:
            return Fraction(1, 2 * (q + 1))
        if kind_mod == 3:
            return -Fraction(1, q + 1) - Fraction(3, 2 * (q - 1))
        return -Fraction(3, 2 * (q + 1)) - Fraction(1, 2 * (q - 1))
    raise ValueError(f"unknown element type {kind!r}")


@dataclass(frozen=True)
class ClosedFormRow:
    kind: str
    exponent: int
    class_index: int
    element_order: int
    closed_form: Fraction
    table_value: Fraction

    @property
    def match(self) -> bool:
        return self.closed_form == self.table_value


def psl2_torus_elements(G: PSL2Group) -> tuple[int, int]:
    """A generator of the split torus and one of the nonsplit torus."""
    F = G.field
    nu = F.primitive_element
    a = G.encode((nu, 0, 0, F.inv(nu)))
    d = math.gcd(2, G.q - 1)
    target = (G.q + 1) // d
    b = next(g for g in range(G.order) if G.element_order(g) == target)
    return a, b


def closed_form_rows(q: int) -> list[ClosedFormRow]:
    G = group_new(f"PSL2({q})")
    cd = G.classes
    fib = frobenius_fibers(table_for(G))
    a, b = psl2_torus_elements(G)
    rows = []
    for kind, x in (("a", a), ("b", b)):
        o = G.element_order(x)
        for e in range(1, o):
            t = int(cd.class_of[G.power(x, e)])
            rows.append(ClosedFormRow(kind, e, t, cd.orders[t],
                                  psl2_delta_closed_form(q, kind, e), fib.deviation(t)))
    for t in range(cd.k):
        if cd.orders[t] == G.p:
            rows.append(ClosedFormRow("c", 1, t, G.p, psl2_delta_closed_form(q, "c"), fib.deviation(t)))
    return rows


# -- symmetric and alternating groups --------------------------------------

def sn_delta(n: int, f: int) -> float:
    """Exponent saving for a permutation of S_n with f fixed points (natural log)."""
    ln = math.log(n)
    return 1.0 / ((1 - 1 / ln) ** -1 * 12 * ln / math.log(n / f) + 18)


@dataclass(frozen=True)
class SnBoundReport:
    n: int
    checked: tuple[tuple[int, int, float], ...]   # (class, fixed points, delta)
    skipped: tuple[int, ...]
    violations: tuple[tuple[int, int], ...]       # (character, class)

    @property
    def ok(self) -> bool:
        return not self.violations


def sn_character_bound_check(n: int, table: CharacterTable | None = None,
                             classes: ClassData | None = None) -> SnBoundReport:
    G = group_new(f"S{n}")
    assert isinstance(G, PermutationGroup)
    table = table or table_for(G)
    cd = classes or G.classes
    checked, skipped, bad = [], [], []
    for t, r in enumerate(cd.reps):
        f = G.fixed_points(r)
        if f < 1 or f >= n:
            skipped.append(t)
            continue
        d = sn_delta(n, f)
        checked.append((t, f, d))
        for c in range(table.k):
            val = abs(table.values[c, t])
            if val > table.degrees[c] ** (1 - d):
                bad.append((c, t))
    return SnBoundReport(n, tuple(checked), tuple(skipped), tuple(bad))


@dataclass(frozen=True)
class FixedPointTail:
    n: int
    f: int
    exact: Fraction | None
    bound: Fraction

    @property
    def ok(self) -> bool:
        return self.exact is None or self.exact <= self.bound


def an_fixed_point_tail(n: int, f: int) -> FixedPointTail:
    """Fraction of A_n with at least f fixed points against the 2/f! tail."""
    if not 1 <= f <= n:
        raise ValueError("need 1 <= f <= n")
    bound = Fraction(2, math.factorial(f))
    if n > 9:
        return FixedPointTail(n, f, None, bound)
    G = group_new(f"A{n}")
    cd = G.classes
    hit = sum(s for r, s in zip(cd.reps, cd.sizes) if G.fixed_points(r) >= f)
    return FixedPointTail(n, f, Fraction(hit, G.order), bound)


# -- zeta trends -----------------------------------------------------------

@dataclass(frozen=True)
class ZetaTrend:
    family: str
    s: float
    rows: tuple[tuple[int, int, float, float], ...]  # (parameter, |G|, zeta-1, scaled)
    decreasing: bool
    max_scaled: float


def zeta_trend_report(family: str, params: Sequence[int], s: float = 2.0) -> ZetaTrend:
    """zeta^G(s) - 1 across A_n (scaled by n^s) or PSL2(q) (scaled by q)."""
    rows = []
    for x in params:
        desc = f"A{x}" if family == "A" else f"PSL2({x})"
        G = group_new(desc)
        z = witten_zeta(table_for(G), s) - 1
        scale = x ** s if family == "A" else x
        rows.append((x, G.order, z, z * scale))
    zs = [r[2] for r in rows]
    decreasing = all(b < a for a, b in zip(zs, zs[1:]))
    return ZetaTrend(family, s, tuple(rows), decreasing, max(r[3] for r in rows))


def group_summary(G: FiniteGroup) -> dict:
    table = table_for(G)
    d, e = delta_epsilon(table)
    return {"order": G.order, "k": table.k, "zeta2": witten_zeta(table, 2), "delta": d, "epsilon": e}
