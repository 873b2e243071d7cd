"""Orbifold cohomology of X_n/G assembled sector by sector.

For an abelian group G acting on the triple product X_n the orbifold
cohomology is the direct sum, over group elements g, of the G-invariant
cohomology of the fixed locus of g, shifted diagonally by the age of g.
The identity contributes the G-invariant cohomology of X_n itself; a
fully twisted element contributes one class per G-orbit of its fixed
points; an element with one untwisted, unshifted coordinate contributes
per G-orbit of fixed elliptic curves, where the orbit's stabilizer decides
between projective-line and elliptic-curve invariants.

Orbits, stabilizers and fixed sets are computed exactly on the 1/12 grid;
a Burnside count is available as an independent oracle for every orbit
decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .errors import ConsistencyError, ContractError, InputError
from .exact_torus import (
    GRID_DENOM,
    TorusPoint,
    act_table,
    decode_point,
    encode_point,
    fixed_codes,
)
from .vw_group import (
    GroupElement,
    Subgroup,
    identity,
    inverse,
    is_admissible,
    minimal_generators,
)

Grid = tuple[tuple[int, int, int, int], ...]


@dataclass(frozen=True)
class HodgeDiamond:
    """The 4x4 grid of Hodge numbers h^{p,q} of a threefold, 0 <= p,q <= 3."""

    rows: Grid

    def h(self, p: int, q: int) -> int:
        return self.rows[p][q]

    @property
    def hodge_pair(self) -> tuple[int, int]:
        """(h^{1,1}, h^{1,2}), the pair the classification tables report."""
        return (self.rows[1][1], self.rows[1][2])

    def validate(self, calabi_yau: bool = False) -> "HodgeDiamond":
        """Assert Hodge and Serre symmetry (and CY corners); never repair."""
        for p in range(4):
            for q in range(4):
                if self.rows[p][q] < 0:
                    raise ConsistencyError(f"negative Hodge number at ({p},{q})")
                if self.rows[p][q] != self.rows[q][p]:
                    raise ConsistencyError(f"Hodge symmetry fails at ({p},{q})")
                if self.rows[p][q] != self.rows[3 - p][3 - q]:
                    raise ConsistencyError(f"Serre symmetry fails at ({p},{q})")
        if calabi_yau and not (self.rows[0][0] == self.rows[3][0] == self.rows[0][3] == self.rows[3][3] == 1):
            raise ConsistencyError("corner Hodge numbers of the quotient must be 1")
        return self

    def __str__(self):
        return "\n".join(" ".join(f"{v:3d}" for v in row) for row in self.rows)


def _freeze(grid: list[list[int]]) -> HodgeDiamond:
    return HodgeDiamond(tuple(tuple(row) for row in grid))


# --- fixed loci ------------------------------------------------------------


@dataclass(frozen=True)
class FullLocus:
    pass


@dataclass(frozen=True)
class EmptyLocus:
    pass


@dataclass(frozen=True)
class PointsLocus:
    points: frozenset[tuple[TorusPoint, TorusPoint, TorusPoint]]


@dataclass(frozen=True)
class CurvesLocus:
    """Curve components, indexed by fixed-point pairs on the twisted tori.

    free_index is the 0-based coordinate on which the element acts
    trivially; each component is {p} x E x {q}-style, recorded by its pair
    of twisted-coordinate fixed points in torus order.
    """

    free_index: int
    components: frozenset[tuple[TorusPoint, TorusPoint]]


FixedLocus = FullLocus | EmptyLocus | PointsLocus | CurvesLocus


def _locus_kind(g: GroupElement) -> tuple[str, int | None]:
    """One of the four exclusive shapes of a fixed locus, from twist/shift."""
    zero = [j for j in range(3) if g.twist[j] == 0]
    if any(g.shift[j] for j in zero):
        return "empty", None
    if len(zero) == 0:
        return "points", None
    if len(zero) == 1:
        return "curves", zero[0]
    return "full", None  # all twists zero with zero shifts: the identity


def fixed_locus(group: Subgroup, g: GroupElement) -> FixedLocus:
    """Classify and return the exact fixed locus of g acting on X_n."""
    if g not in group:
        raise ContractError(f"element {g} does not belong to the given subgroup")
    kind, free = _locus_kind(g)
    if kind == "full":
        return FullLocus()
    if kind == "empty":
        return EmptyLocus()
    n = g.n
    if kind == "points":
        per_torus = [
            sorted(decode_point(c) for c in fixed_codes(n, g.twist[j], g.shift[j])) for j in range(3)
        ]
        return PointsLocus(frozenset(product(*per_torus)))
    twisted = [j for j in range(3) if j != free]
    per_torus = [
        sorted(decode_point(c) for c in fixed_codes(n, g.twist[j], g.shift[j])) for j in twisted
    ]
    return CurvesLocus(free, frozenset(product(*per_torus)))


# --- untwisted sector ------------------------------------------------------

_SUBSETS = ((), (0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2))


def untwisted_sector_diamond(group: Subgroup) -> HodgeDiamond:
    """Invariant part of the torus cohomology under the twist action.

    A monomial dz_I ^ dzbar_J is scaled by zeta to the power
    sum(m_i, i in I) - sum(m_j, j in J); it survives iff that weight
    vanishes for every element.  Shifts act trivially.
    """
    n = group.n
    twists = sorted(group.twist_image())
    grid = [[0] * 4 for _ in range(4)]
    for I in _SUBSETS:
        for J in _SUBSETS:
            if all((sum(m[i] for i in I) - sum(m[j] for j in J)) % n == 0 for m in twists):
                grid[len(I)][len(J)] += 1
    return _freeze(grid).validate()


# --- age -------------------------------------------------------------------


def age(n: int, twist: tuple[int, int, int]) -> int:
    """Sum of the normalized rotation angles; an integer in {0, 1, 2} here."""
    total = sum(m % n for m in twist)
    if total % n:
        raise InputError(f"twist {twist} does not sum to 0 mod {n}")
    return total // n


# --- orbits and stabilizers ------------------------------------------------


def _component_maps(group: Subgroup, tori: tuple[int, ...]):
    """For each generator / element, the per-coordinate grid permutations."""
    n = group.n
    gens = minimal_generators(group)
    gen_tabs = [tuple(act_table(n, g.twist[t], g.shift[t]) for t in tori) for g in gens]
    return gens, gen_tabs


def _orbit_partition(group: Subgroup, comps: frozenset[tuple[int, ...]], tori: tuple[int, ...]):
    """Orbits (as frozensets of code tuples) plus stabilizer element tuples."""
    _, gen_tabs = _component_maps(group, tori)
    n = group.n
    width = range(len(tori))
    seen: set[tuple[int, ...]] = set()
    out = []
    for start in sorted(comps):
        if start in seen:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for c in frontier:
                for tabs in gen_tabs:
                    image = tuple(tabs[i][c[i]] for i in width)
                    if image not in orbit:
                        if image not in comps:
                            raise ContractError("component set is not closed under the group action")
                        orbit.add(image)
                        nxt.append(image)
            frontier = nxt
        seen |= orbit
        rep = min(orbit)
        stab = tuple(
            g
            for g in group.elements
            if all(act_table(n, g.twist[tori[i]], g.shift[tori[i]])[rep[i]] == rep[i] for i in width)
        )
        out.append((frozenset(orbit), stab))
    return out


def orbit_decomposition(
    group: Subgroup,
    components: frozenset[tuple[TorusPoint, ...]],
    tori: tuple[int, ...],
) -> list[tuple[frozenset[tuple[TorusPoint, ...]], Subgroup]]:
    """Exact orbit partition with stabilizers.

    `tori` names the 0-based torus index each component coordinate lives
    on; the action is the per-torus affine action of each group element.
    """
    coded = frozenset(tuple(encode_point(p) for p in comp) for comp in components)
    result = []
    for orbit, stab in _orbit_partition(group, coded, tori):
        points = frozenset(tuple(decode_point(c) for c in comp) for comp in orbit)
        result.append((points, Subgroup(group.n, tuple(sorted(stab)))))
    return result


def burnside_orbit_count(
    group: Subgroup,
    components: frozenset[tuple[TorusPoint, ...]],
    tori: tuple[int, ...],
) -> int:
    """Independent orbit count: average number of fixed components."""
    coded = [tuple(encode_point(p) for p in comp) for comp in components]
    n = group.n
    width = range(len(tori))
    total = 0
    for g in group.elements:
        tabs = [act_table(n, g.twist[t], g.shift[t]) for t in tori]
        total += sum(1 for c in coded if all(tabs[i][c[i]] == c[i] for i in width))
    if total % group.order:
        raise ConsistencyError("Burnside sum is not divisible by the group order")
    return total // group.order


# --- twisted sectors -------------------------------------------------------


@dataclass(frozen=True)
class SectorOrbit:
    kind: str  # "point" | "P1" | "elliptic"
    size: int


@dataclass(frozen=True)
class SectorContribution:
    element: GroupElement
    kappa: int
    orbit_count: int
    orbits: tuple[SectorOrbit, ...]
    delta: HodgeDiamond  # increments contributed to the full diamond


def _sector(group: Subgroup, g: GroupElement) -> SectorContribution:
    n = group.n
    kind, free = _locus_kind(g)
    if kind in ("full", "empty"):
        raise ContractError("sector contributions exist for non-identity elements with nonempty fixed locus")
    kappa = age(n, g.twist)
    grid = [[0] * 4 for _ in range(4)]
    if kind == "points":
        if kappa not in (1, 2) or kappa + age(n, inverse(g).twist) != 3:
            raise ConsistencyError(f"point sector of {g} violates the age pairing")
        tori = (0, 1, 2)
        comps = frozenset(product(*(fixed_codes(n, g.twist[j], g.shift[j]) for j in tori)))
        orbits = _orbit_partition(group, comps, tori)
        for orbit, _ in orbits:
            grid[kappa][kappa] += 1
        sector_orbits = tuple(SectorOrbit("point", len(o)) for o, _ in orbits)
    else:
        if kappa != 1:
            raise ConsistencyError(f"curve sector of {g} must have age 1, got {kappa}")
        tori = tuple(j for j in range(3) if j != free)
        comps = frozenset(product(*(fixed_codes(n, g.twist[j], g.shift[j]) for j in tori)))
        orbits = _orbit_partition(group, comps, tori)
        kinds = []
        for orbit, stab in orbits:
            elliptic = all(s.twist[free] % n == 0 for s in stab)
            grid[1][1] += 1
            grid[2][2] += 1
            if elliptic:
                grid[1][2] += 1
                grid[2][1] += 1
            kinds.append(SectorOrbit("elliptic" if elliptic else "P1", len(orbit)))
        sector_orbits = tuple(kinds)
    return SectorContribution(g, kappa, len(sector_orbits), sector_orbits, _freeze(grid))


def sector_contribution(group: Subgroup, g: GroupElement) -> SectorContribution:
    """Diamond increments contributed by one non-identity group element."""
    if g not in group:
        raise ContractError(f"element {g} does not belong to the given subgroup")
    if g == identity(group.n):
        raise ContractError("the identity is handled by the untwisted sector")
    if _locus_kind(g)[0] == "empty":
        raise ContractError(f"element {g} has empty fixed locus")
    return _sector(group, g)


@lru_cache(maxsize=None)
def _sector_table(group: Subgroup) -> tuple[SectorContribution, ...]:
    out = []
    ident = identity(group.n)
    for g in group.elements:
        if g == ident or _locus_kind(g)[0] == "empty":
            continue
        out.append(_sector(group, g))
    return tuple(out)


@lru_cache(maxsize=None)
def chen_ruan_diamond(group: Subgroup) -> HodgeDiamond:
    """Full orbifold Hodge diamond: untwisted sector plus all twisted sectors."""
    if not is_admissible(group):
        raise ContractError("orbifold diamonds are computed for admissible subgroups")
    base = untwisted_sector_diamond(group)
    grid = [list(row) for row in base.rows]
    for sector in _sector_table(group):
        for p in range(4):
            for q in range(4):
                grid[p][q] += sector.delta.rows[p][q]
    return _freeze(grid).validate(calabi_yau=True)


def hodge_pair(group: Subgroup) -> tuple[int, int]:
    return chen_ruan_diamond(group).hodge_pair


# --- reporting conventions -------------------------------------------------


@dataclass(frozen=True)
class BreakdownEntry:
    """One line of a per-element contribution report.

    For n = 3, 4 each entry covers an inverse pair {g, g^-1} (curve
    contributions doubled, point pairs merged).  For n = 6 each entry
    additionally sums a full orbit of coordinate permutations; orbit_size
    is the number of distinct permuted images of the representative.
    """

    element: GroupElement
    h11: int
    h12: int
    orbit_size: int | None = None

    @property
    def contribution(self) -> tuple[int, int]:
        return (self.h11, self.h12)


_PERMS = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))


def _permute_element(g: GroupElement, perm: tuple[int, int, int]) -> GroupElement:
    return GroupElement(g.n, tuple(g.twist[p] for p in perm), tuple(g.shift[p] for p in perm))


def _pair_contribution(sector: SectorContribution) -> tuple[GroupElement, int, int]:
    """(pair representative, h11, h12) under the report conventions."""
    g = sector.element
    rep = min(g, inverse(g))
    if sector.orbits[0].kind == "point":
        return rep, sector.orbit_count, 0
    elliptic = sum(1 for o in sector.orbits if o.kind == "elliptic")
    if inverse(g) == g:
        return rep, sector.orbit_count, elliptic
    return rep, 2 * sector.orbit_count, 2 * elliptic


def contribution_breakdown(group: Subgroup) -> tuple[BreakdownEntry, ...]:
    """Per-element contributions in the conventions of the reference lists.

    The identity entry carries the untwisted (h11, h12).  Every other
    entry represents an inverse pair: point pairs merged into one line,
    curve contributions doubled unless the element is an involution.
    For n = 6 entries are folded along coordinate permutations.
    """
    if not is_admissible(group):
        raise ContractError("breakdowns are computed for admissible subgroups")
    untwisted = untwisted_sector_diamond(group)
    ident_entry = (identity(group.n), untwisted.rows[1][1], untwisted.rows[1][2])
    pair_entries: dict[GroupElement, tuple[int, int]] = {}
    for sector in _sector_table(group):
        rep, h11, h12 = _pair_contribution(sector)
        if rep in pair_entries:
            continue
        pair_entries[rep] = (h11, h12)
    if group.n != 6:
        rows = [BreakdownEntry(*ident_entry)]
        rows += [BreakdownEntry(e, c[0], c[1]) for e, c in sorted(pair_entries.items())]
        return tuple(rows)

    folded: dict[GroupElement, list[int]] = {}
    for rep, (h11, h12) in pair_entries.items():
        images = {_permute_element(rep, p) for p in _PERMS}
        images |= {inverse(e) for e in images}
        key = min(images)
        agg = folded.setdefault(key, [0, 0])
        agg[0] += h11
        agg[1] += h12
    rows = [BreakdownEntry(*ident_entry, orbit_size=1)]
    for key in sorted(folded):
        size = len({_permute_element(key, p) for p in _PERMS})
        rows.append(BreakdownEntry(key, folded[key][0], folded[key][1], orbit_size=size))
    return tuple(rows)
