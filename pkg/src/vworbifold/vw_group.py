"""Vafa-Witten groups V_n, their elements, and admissible-subgroup enumeration.

An element (m1, m2, m3; a1, a2, a3) acts on the product of three copies of
E_n coordinate-wise by z_j -> zeta_n^{m_j} z_j + a_j t_n.  The twist triple
always sums to zero mod n; shifts live mod k_n (3, 2, 1 for n = 3, 4, 6).
Composition is componentwise addition, which the test-suite cross-checks
against the affine action on the torus rather than taking on faith.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, NamedTuple

from .errors import ContractError, InputError
from .exact_torus import CURVE_ORDERS, SHIFT_MODULUS

Triple = tuple[int, int, int]


class GroupElement(NamedTuple):
    n: int
    twist: Triple
    shift: Triple

    def __str__(self):
        m, a = self.twist, self.shift
        return f"({m[0]},{m[1]},{m[2]};{a[0]},{a[1]},{a[2]})"


def element(n: int, twist: Iterable[int], shift: Iterable[int] = (0, 0, 0)) -> GroupElement:
    """Validated group element with entries reduced mod n resp. mod k_n."""
    if n not in CURVE_ORDERS:
        raise InputError(f"curve order must be one of {CURVE_ORDERS}, got {n!r}")
    k = SHIFT_MODULUS[n]
    raw_twist, raw_shift = tuple(twist), tuple(shift)
    if len(raw_twist) != 3 or len(raw_shift) != 3:
        raise InputError("twist and shift must be triples")
    m = tuple(x % n for x in raw_twist)
    if sum(m) % n != 0:
        raise InputError(f"inadmissible twist {m}: entries must sum to 0 mod {n}")
    if k == 1 and any(raw_shift):
        raise InputError("torsion trivial: order-6 elements cannot carry shifts")
    return GroupElement(n, m, tuple(x % k for x in raw_shift))


def identity(n: int) -> GroupElement:
    return element(n, (0, 0, 0), (0, 0, 0))


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """Product of two symmetries: twists add mod n, shifts add mod k_n."""
    if g.n != h.n:
        raise InputError(f"cannot compose elements of V_{g.n} and V_{h.n}")
    n, k = g.n, SHIFT_MODULUS[g.n]
    return GroupElement(
        n,
        ((g.twist[0] + h.twist[0]) % n, (g.twist[1] + h.twist[1]) % n, (g.twist[2] + h.twist[2]) % n),
        ((g.shift[0] + h.shift[0]) % k, (g.shift[1] + h.shift[1]) % k, (g.shift[2] + h.shift[2]) % k),
    )


def inverse(g: GroupElement) -> GroupElement:
    n, k = g.n, SHIFT_MODULUS[g.n]
    return GroupElement(n, tuple(-x % n for x in g.twist), tuple(-x % k for x in g.shift))


def scale(g: GroupElement, c: int) -> GroupElement:
    """c-fold composition of g with itself (c may be any integer)."""
    n, k = g.n, SHIFT_MODULUS[g.n]
    return GroupElement(n, tuple(c * x % n for x in g.twist), tuple(c * x % k for x in g.shift))


def element_order(g: GroupElement) -> int:
    orders = [g.n // math.gcd(g.n, x) for x in g.twist]
    k = SHIFT_MODULUS[g.n]
    orders += [k // math.gcd(k, x) for x in g.shift]
    return math.lcm(*orders)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of V_n, identified by its sorted element tuple.

    Equality and hashing ignore the cached generator sequence: two
    subgroups are the same exactly when their element sets coincide.
    """

    n: int
    elements: tuple[GroupElement, ...]
    generators: tuple[GroupElement, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if tuple(sorted(set(self.elements))) != self.elements:
            raise InputError("subgroup elements must be sorted and duplicate-free")

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: GroupElement) -> bool:
        return g in set(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def twist_image(self) -> frozenset[Triple]:
        return frozenset(g.twist for g in self.elements)

    def __str__(self):
        gens = ", ".join(str(g) for g in (self.generators or minimal_generators(self)))
        return f"<{gens}> of order {self.order} in V_{self.n}"


def closure(n: int, gens: Iterable[GroupElement]) -> Subgroup:
    """Smallest subgroup of V_n containing the given elements."""
    gens = tuple(gens)
    for g in gens:
        if g.n != n:
            raise InputError(f"generator {g} does not live in V_{n}")
    ident = identity(n)
    els = {ident}
    for g in gens:
        # abelian: extend the current set by the nontrivial powers of g
        span, x = [], g
        while x != ident:
            span.append(x)
            x = compose(x, g)
        els |= {compose(y, p) for y in tuple(els) for p in span}
    return Subgroup(n, tuple(sorted(els)), gens)


@lru_cache(maxsize=None)
def full_multiplicative_twists(n: int) -> frozenset[Triple]:
    """All sum-zero twist triples: the image of the multiplicative (Z/n)^2."""
    return frozenset(
        (m1, m2, (-m1 - m2) % n) for m1 in range(n) for m2 in range(n)
    )


def multiplicative_generators(n: int) -> tuple[GroupElement, GroupElement]:
    """The shift-free lifts of the standard multiplicative generators."""
    return element(n, (1, n - 1, 0)), element(n, (n - 1, 0, 1))


@lru_cache(maxsize=None)
def vafa_witten_group(n: int) -> Subgroup:
    """The full group V_n."""
    g1, g2 = multiplicative_generators(n)
    k = SHIFT_MODULUS[n]
    trans = [element(n, (0, 0, 0), s) for s in product(range(k), repeat=3)]
    return closure(n, (g1, g2, *trans[1:]))


def is_admissible(group: Subgroup) -> bool:
    """True iff the twist projection is the full multiplicative part."""
    return group.twist_image() == full_multiplicative_twists(group.n)


def translations(group: Subgroup) -> tuple[GroupElement, ...]:
    """The pure-translation elements (twist zero), sorted."""
    return tuple(g for g in group.elements if g.twist == (0, 0, 0))


def invariant_factors(group: Subgroup) -> tuple[int, ...]:
    """Invariant-factor decomposition d1 | d2 | ... of the abelian group."""
    return _invariant_factors_from_orders(group.order, lambda g, c: scale(g, c), group.elements, identity(group.n))


def _invariant_factors_from_orders(order, scale_fn, elements, ident) -> tuple[int, ...]:
    if order == 1:
        return ()
    exponents_by_prime: dict[int, list[int]] = {}
    for p in _prime_factors(order):
        # layer sizes of the p-primary component: t_i = log_p #(p^i)-torsion
        layers = [0]
        i = 1
        while True:
            count = sum(1 for g in elements if scale_fn(g, p**i) == ident)
            t_i = _exact_log(count, p)
            if t_i == layers[-1]:
                break
            layers.append(t_i)
            i += 1
        diffs = [layers[j] - layers[j - 1] for j in range(1, len(layers))]
        exps: list[int] = []
        for j, d in enumerate(diffs):
            nxt = diffs[j + 1] if j + 1 < len(diffs) else 0
            exps.extend([j + 1] * (d - nxt))
        exponents_by_prime[p] = sorted(exps, reverse=True)
    width = max(len(v) for v in exponents_by_prime.values())
    factors = []
    for j in range(width):
        d = 1
        for p, exps in exponents_by_prime.items():
            if j < len(exps):
                d *= p ** exps[j]
        factors.append(d)
    return tuple(sorted(factors))


def _exact_log(count: int, p: int) -> int:
    t, c = 0, count
    while c > 1:
        if c % p:
            raise ContractError(f"torsion layer size {count} is not a power of {p}")
        c //= p
        t += 1
    return t


def _prime_factors(x: int) -> list[int]:
    out, d = [], 2
    while d * d <= x:
        if x % d == 0:
            out.append(d)
            while x % d == 0:
                x //= d
        d += 1
    if x > 1:
        out.append(x)
    return out


def group_rank(group: Subgroup) -> int:
    """Minimal number of generators minus 2 (the count of independent translations)."""
    if not is_admissible(group):
        raise ContractError("rank is defined for admissible subgroups only")
    return len(invariant_factors(group)) - 2


def minimal_generators(group: Subgroup) -> tuple[GroupElement, ...]:
    """Small deterministic generating sequence in the standard normal form.

    Picks the lexicographically least lifts of the two multiplicative
    generators, then greedily adjoins least translations until the closure
    fills the group.
    """
    n = group.n
    t1, t2 = (1, n - 1, 0), (n - 1, 0, 1)
    gens = [
        min(g for g in group.elements if g.twist == t1),
        min(g for g in group.elements if g.twist == t2),
    ]
    current = closure(n, gens)
    while current.order < group.order:
        extra = min(g for g in translations(group) if g not in current)
        gens.append(extra)
        current = closure(n, gens)
    return tuple(gens)


@lru_cache(maxsize=None)
def translation_subgroups(n: int) -> tuple[tuple[tuple[GroupElement, ...], frozenset[GroupElement]], ...]:
    """All subgroups of the translation group T_n, as (generators, elements)."""
    k = SHIFT_MODULUS[n]
    vectors = [element(n, (0, 0, 0), s) for s in product(range(k), repeat=3)]
    seen: dict[frozenset[GroupElement], tuple[GroupElement, ...]] = {}
    for size in range(4):
        for gens in product(vectors, repeat=size):
            sub = closure(n, gens)
            key = frozenset(sub.elements)
            if key not in seen:
                seen[key] = gens
    return tuple(sorted(((gens, els) for els, gens in seen.items()), key=lambda it: sorted(it[1])))


def enumerate_admissible(n: int, rng=None) -> frozenset[Subgroup]:
    """The complete set of admissible subgroups of V_n.

    Every admissible subgroup has generators g1 = (1, n-1, 0; *),
    g2 = (n-1, 0, 1; *) plus pure translations, so iterating the two shift
    triples against all translation subgroups and deduplicating element
    sets is exhaustive.  The optional rng shuffles generator order; the
    result is the same either way.
    """
    if n not in CURVE_ORDERS:
        raise InputError(f"curve order must be one of {CURVE_ORDERS}, got {n!r}")
    k = SHIFT_MODULUS[n]
    shifts = list(product(range(k), repeat=3))
    out: dict[tuple[GroupElement, ...], Subgroup] = {}
    for a in shifts:
        g1 = element(n, (1, n - 1, 0), a)
        for b in shifts:
            g2 = element(n, (n - 1, 0, 1), b)
            for tgens, _ in translation_subgroups(n):
                gens = [g1, g2, *tgens]
                if rng is not None:
                    rng.shuffle(gens)
                sub = closure(n, gens)
                out.setdefault(sub.elements, sub)
    result = frozenset(out.values())
    assert all(is_admissible(g) for g in result)
    return result
