"""Fundamental groups of the quotient orbifolds, by a finite computation.

The quotient of complex 3-space by the lifted group has fundamental group
(lifted group)/(normal closure of the fixed-point-carrying elements).
Because every admissible G contains a fully twisted element h, any lattice
translation l factors as h^{-1} * (h l) with both factors carrying fixed
points, so the whole lattice lies in that normal closure.  The computation
therefore collapses to G modulo the subgroup generated by the image of the
fixed-point-carrying elements, which is finite and tiny.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import ConsistencyError, ContractError
from .vw_group import (
    GroupElement,
    Subgroup,
    _invariant_factors_from_orders,
    closure,
    compose,
    identity,
    is_admissible,
    scale,
)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Invariant-factor form d1 | d2 | ... ; the empty product is trivial."""

    factors: tuple[int, ...]

    def __post_init__(self):
        for i, d in enumerate(self.factors):
            if d < 2:
                raise ConsistencyError("invariant factors must be at least 2")
            if i and self.factors[i] % self.factors[i - 1]:
                raise ConsistencyError("invariant factors must form a divisor chain")

    @property
    def order(self) -> int:
        out = 1
        for d in self.factors:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    def __str__(self):
        return " x ".join(f"Z/{d}" for d in self.factors) if self.factors else "1"


TRIVIAL = FiniteAbelianGroup(())


def fixed_point_subset(group: Subgroup) -> tuple[GroupElement, ...]:
    """Elements whose affine lifts fix a point of complex 3-space.

    A lift has a fixed point iff every untwisted coordinate carries a zero
    shift: twisted coordinates are solvable because zeta^m - 1 is
    invertible over the complex numbers, and an untwisted coordinate is a
    genuine translation unless its shift vanishes in the torsion group.
    """
    if not is_admissible(group):
        raise ContractError("the fixed-point subset is computed for admissible subgroups")
    return tuple(
        g
        for g in group.elements
        if all(g.twist[j] != 0 or g.shift[j] == 0 for j in range(3))
    )


@lru_cache(maxsize=None)
def fundamental_group(group: Subgroup) -> FiniteAbelianGroup:
    """G modulo the subgroup generated by fixed-point-carrying elements."""
    fbar = fixed_point_subset(group)
    if not any(all(m != 0 for m in g.twist) for g in fbar):
        raise ConsistencyError("no fully twisted element: the lattice reduction does not apply")
    n = group.n
    normal = closure(n, fbar)
    members = set(normal.elements)

    def coset_rep(g: GroupElement) -> GroupElement:
        return min(compose(g, h) for h in members)

    cosets = sorted({coset_rep(g) for g in group.elements})
    if len(cosets) * normal.order != group.order:
        raise ConsistencyError("coset count violates Lagrange")
    factors = _invariant_factors_from_orders(
        len(cosets),
        lambda g, c: coset_rep(scale(g, c)),
        cosets,
        coset_rep(identity(n)),
    )
    return FiniteAbelianGroup(factors)
