"""Exact rational model of the three CM elliptic curves and their symmetries.

Everything lives on the fixed 1/12 grid of the torus: every torsion point,
fixed point and distinguished translation occurring for curve orders 3, 4
and 6 has coordinates with denominator dividing 12 in the lattice basis
(1, omega_n), so all arithmetic below is exact.

Conventions:
  * basis (1, omega_n) with omega_3 = omega_6 = exp(i*pi/3), omega_4 = i;
  * matrices act on column vectors (x, y) of basis coordinates;
  * multiplication by zeta_n is the integer matrix ZETA_GEN[n].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .errors import ContractError, InputError

CURVE_ORDERS = (3, 4, 6)

#: shift modulus k_n: the order of the distinguished translation t_n.
SHIFT_MODULUS = {3: 3, 4: 2, 6: 1}

#: common denominator of every point this package ever produces.
GRID_DENOM = 12


class Mat2(NamedTuple):
    """2x2 integer matrix ((a, b), (c, d)) acting on column vectors."""

    a: int
    b: int
    c: int
    d: int

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def apply(self, x: Fraction, y: Fraction) -> tuple[Fraction, Fraction]:
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c


IDENTITY = Mat2(1, 0, 0, 1)

# Multiplication by zeta_n in basis (1, omega_n).  For n = 3, 6 the basis
# vector omega satisfies omega^2 = omega - 1; for n = 4 it is i.
ZETA_GEN = {
    3: Mat2(-1, -1, 1, 0),
    4: Mat2(0, -1, 1, 0),
    6: Mat2(0, -1, 1, 1),
}


def _check_order(n: int) -> None:
    if n not in CURVE_ORDERS:
        raise InputError(f"curve order must be one of {CURVE_ORDERS}, got {n!r}")


@dataclass(frozen=True, order=True)
class TorusPoint:
    """A point of the curve E_n: a reduced rational residue pair mod Z^2."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x) % 1)
        object.__setattr__(self, "y", Fraction(self.y) % 1)
        if GRID_DENOM % self.x.denominator or GRID_DENOM % self.y.denominator:
            raise InputError(f"point ({self.x}, {self.y}) is off the 1/{GRID_DENOM} grid")

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint(self.x + other.x, self.y + other.y)

    def __neg__(self) -> "TorusPoint":
        return TorusPoint(-self.x, -self.y)

    def scale(self, k: int) -> "TorusPoint":
        return TorusPoint(k * self.x, k * self.y)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def __str__(self):
        return f"({self.x}, {self.y})"


ORIGIN = TorusPoint(Fraction(0), Fraction(0))


@lru_cache(maxsize=None)
def zeta_matrix(n: int, m: int) -> Mat2:
    """Integer matrix of multiplication by zeta_n^m in basis (1, omega_n)."""
    _check_order(n)
    if not 0 <= m < n:
        raise InputError(f"twist exponent must satisfy 0 <= m < {n}, got {m!r}")
    result = IDENTITY
    for _ in range(m):
        result = ZETA_GEN[n] @ result
    return result


@lru_cache(maxsize=None)
def torsion_translation(n: int) -> TorusPoint:
    """Generator t_n of the zeta-fixed torsion subgroup, found by brute force.

    Scans the full 1/12 grid for points annihilated by (zeta_n - 1) and
    returns the lexicographically smallest nonzero one.  Any generator
    would do; determinism picks this one.
    """
    _check_order(n)
    if n == 6:
        raise InputError("torsion trivial: the order-6 curve has no zeta-fixed translations")
    m = zeta_matrix(n, 1)
    kernel = sorted(
        p
        for p in grid_points()
        if not p.is_zero() and _in_lattice(m.apply(p.x, p.y), p)
    )
    expected = SHIFT_MODULUS[n] - 1
    if len(kernel) != expected:
        raise ConsistencyError(f"kernel of zeta_{n} - 1 has {len(kernel) + 1} points, expected {expected + 1}")
    return kernel[0]


def _in_lattice(image: tuple[Fraction, Fraction], p: TorusPoint) -> bool:
    """True when image - p lies in Z^2, i.e. the two agree on the torus."""
    return (image[0] - p.x).denominator == 1 and (image[1] - p.y).denominator == 1


@lru_cache(maxsize=None)
def grid_points() -> tuple[TorusPoint, ...]:
    """All 144 points of the 1/12 grid, sorted."""
    return tuple(
        TorusPoint(Fraction(i, GRID_DENOM), Fraction(j, GRID_DENOM))
        for i in range(GRID_DENOM)
        for j in range(GRID_DENOM)
    )


@dataclass(frozen=True)
class CurveModel:
    """The curve E_n with its multiplicative action and torsion translation."""

    n: int
    omega_basis: str
    zeta_order: int
    shift_modulus: int
    t_coords: TorusPoint

    @staticmethod
    @lru_cache(maxsize=None)
    def for_order(n: int) -> "CurveModel":
        _check_order(n)
        omega = "i" if n == 4 else "exp(i*pi/3)"
        t = torsion_translation(n) if n != 6 else ORIGIN
        return CurveModel(n=n, omega_basis=omega, zeta_order=n, shift_modulus=SHIFT_MODULUS[n], t_coords=t)


def _check_twist_shift(n: int, m: int, a: int) -> None:
    _check_order(n)
    if not 0 <= m < n:
        raise InputError(f"twist exponent must satisfy 0 <= m < {n}, got {m!r}")
    if not 0 <= a < SHIFT_MODULUS[n]:
        raise InputError(f"shift count must satisfy 0 <= a < {SHIFT_MODULUS[n]}, got {a!r}")


def act_affine(n: int, m: int, a: int, p: TorusPoint) -> TorusPoint:
    """Apply z -> zeta_n^m z + a t_n to a point, reduced mod Z^2."""
    _check_twist_shift(n, m, a)
    ix, iy = zeta_matrix(n, m).apply(p.x, p.y)
    t = CurveModel.for_order(n).t_coords
    return TorusPoint(ix + a * t.x, iy + a * t.y)


def solve_twisted_fixed_points(n: int, m: int, a: int) -> frozenset[TorusPoint]:
    """All p with (zeta_n^m - 1) p = -a t_n on the torus, by exhaustive scan.

    The solution count, when nonzero, equals |det(zeta_n^m - I)|; an empty
    result means the affine map z -> zeta^m z + a t is fixed-point free.
    """
    _check_twist_shift(n, m, a)
    if m == 0:
        raise ContractError("twist 0 has a full or empty fixed set; callers branch beforehand")
    sols = frozenset(p for p in grid_points() if act_affine(n, m, a, p) == p)
    if sols:
        mat = zeta_matrix(n, m)
        expected = abs((mat.a - 1) * (mat.d - 1) - mat.b * mat.c)
        if len(sols) != expected:
            raise ConsistencyError(f"fixed-point count {len(sols)} != |det(zeta^m - 1)| = {expected}")
    return sols


# ---------------------------------------------------------------------------
# Integer-encoded fast layer.
#
# Hot loops (orbit decomposition, Burnside sums, full-enumeration sweeps)
# run on grid codes 0..143 with precomputed action tables instead of
# Fraction pairs.  The public API above stays exact and is the reference
# the tables are built from.
# ---------------------------------------------------------------------------


def encode_point(p: TorusPoint) -> int:
    return int(p.x * GRID_DENOM) * GRID_DENOM + int(p.y * GRID_DENOM)


def decode_point(code: int) -> TorusPoint:
    return TorusPoint(Fraction(code // GRID_DENOM, GRID_DENOM), Fraction(code % GRID_DENOM, GRID_DENOM))


@lru_cache(maxsize=None)
def act_table(n: int, m: int, a: int) -> tuple[int, ...]:
    """Permutation of grid codes induced by z -> zeta_n^m z + a t_n."""
    return tuple(encode_point(act_affine(n, m, a, decode_point(c))) for c in range(GRID_DENOM * GRID_DENOM))


@lru_cache(maxsize=None)
def fixed_codes(n: int, m: int, a: int) -> tuple[int, ...]:
    """Grid codes of solve_twisted_fixed_points, sorted."""
    return tuple(sorted(encode_point(p) for p in solve_twisted_fixed_points(n, m, a)))
