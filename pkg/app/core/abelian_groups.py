"""Finite abelian groups given as direct sums of cyclic groups.

A subgroup S of G = Z/d_1 + ... + Z/d_r is handled through the lattice
L = preimage of S in Z^r, spanned by the generators and the relations d_i e_i.
The Smith decomposition D = U M V of that relation matrix gives membership,
index and quotient coordinates; the Hermite form of M^T is the canonical basis.
"""

from dataclasses import dataclass, field
from itertools import product
from math import lcm, prod
from typing import Iterator, List, Optional, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import hermite_normal_form, smith_normal_decomp

from .config import SizeGuards, default_guards
from .errors import InputError, OutOfRangeVector, SizeGuardExceeded

Elemen = Tuple[int, ...]


@dataclass(frozen=True)
class FiniteAbelianGroup:
    cyclic_orders: Tuple[int, ...]

    def __post_init__(self):
        orde = tuple(int(d) for d in self.cyclic_orders)
        if any(d < 2 for d in orde):
            raise InputError("cyclic orders must be integers >= 2", {"cyclic_orders": list(orde)})
        object.__setattr__(self, "cyclic_orders", orde)

    @property
    def rank(self) -> int:
        return len(self.cyclic_orders)

    def order(self) -> int:
        return prod(self.cyclic_orders)

    def exponent(self) -> int:
        return lcm(*self.cyclic_orders) if self.cyclic_orders else 1

    def check_vector(self, v: Sequence[int]) -> Elemen:
        if len(v) != self.rank or any(not 0 <= int(x) < d for x, d in zip(v, self.cyclic_orders)):
            raise OutOfRangeVector(
                "element vector out of range for the group",
                {"vector": [int(x) for x in v], "cyclic_orders": list(self.cyclic_orders)},
            )
        return tuple(int(x) for x in v)

    def normalize(self, v: Sequence[int]) -> Elemen:
        if len(v) != self.rank:
            raise OutOfRangeVector("element vector has the wrong length", {"vector": list(v), "rank": self.rank})
        return tuple(int(x) % d for x, d in zip(v, self.cyclic_orders))

    def zero(self) -> Elemen:
        return tuple(0 for _ in self.cyclic_orders)

    def add(self, u: Sequence[int], v: Sequence[int]) -> Elemen:
        return self.normalize([a + b for a, b in zip(u, v)])

    def scale(self, m: int, v: Sequence[int]) -> Elemen:
        return self.normalize([m * a for a in v])

    def elements(self, guards: SizeGuards = default_guards) -> Iterator[Elemen]:
        check_group_order(self, guards)
        return product(*(range(d) for d in self.cyclic_orders))

    def to_payload(self) -> dict:
        return {"cyclic_orders": list(self.cyclic_orders), "order": self.order()}


def check_group_order(group: FiniteAbelianGroup, guards: SizeGuards = default_guards) -> None:
    if group.order() > guards.max_group_order:
        raise SizeGuardExceeded(
            f"group order {group.order()} exceeds max_group_order={guards.max_group_order}",
            {"cyclic_orders": list(group.cyclic_orders), "max_group_order": guards.max_group_order},
        )


@dataclass(frozen=True, eq=False)
class Subgroup:
    ambient: FiniteAbelianGroup
    generators: Tuple[Elemen, ...]
    canonical_basis: Tuple[Elemen, ...] = field(init=False)
    _diagonal: Tuple[int, ...] = field(init=False, repr=False)
    _transform: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        generator = tuple(self.ambient.check_vector(g) for g in self.generators)
        object.__setattr__(self, "generators", generator)
        r = self.ambient.rank
        if r == 0:
            object.__setattr__(self, "canonical_basis", ())
            object.__setattr__(self, "_diagonal", ())
            object.__setattr__(self, "_transform", ())
            return

        relasi = [[d if i == j else 0 for j in range(r)] for i, d in enumerate(self.ambient.cyclic_orders)]
        baris = [list(g) for g in generator] + relasi
        m = DM(baris, ZZ)
        d, _, t = smith_normal_decomp(m)
        diag_list = d.to_list()
        diagonal = tuple(abs(int(diag_list[j][j])) for j in range(r))
        transform = tuple(tuple(int(x) for x in row) for row in t.to_list())

        # Columns of the Hermite form of M^T span the same lattice as the rows of M.
        hnf = hermite_normal_form(m.transpose()).to_list()
        basis = tuple(tuple(int(hnf[i][j]) for i in range(r)) for j in range(len(hnf[0]) if hnf else 0))

        object.__setattr__(self, "canonical_basis", basis)
        object.__setattr__(self, "_diagonal", diagonal)
        object.__setattr__(self, "_transform", transform)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.ambient == other.ambient and self.canonical_basis == other.canonical_basis

    def __hash__(self) -> int:
        return hash((self.ambient, self.canonical_basis))

    def _koordinat(self, v: Sequence[int]) -> Tuple[int, ...]:
        r = self.ambient.rank
        return tuple(
            sum(int(v[i]) * self._transform[i][j] for i in range(r)) % self._diagonal[j] for j in range(r)
        )

    def contains(self, v: Sequence[int]) -> bool:
        vektor = self.ambient.check_vector(v)
        return not any(self._koordinat(vektor))

    def index(self) -> int:
        return prod(self._diagonal)

    def order(self) -> int:
        return self.ambient.order() // self.index()

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def elements(self, guards: SizeGuards = default_guards) -> List[Elemen]:
        return [v for v in self.ambient.elements(guards) if self.contains(v)]

    def to_payload(self) -> dict:
        return {
            "generators": [list(g) for g in self.generators],
            "canonical_basis": [list(b) for b in self.canonical_basis],
            "index": self.index(),
        }


@dataclass(frozen=True)
class Quotient:
    """G/S with coordinates read off the Smith decomposition of S."""

    ambient: FiniteAbelianGroup
    kernel: Subgroup
    group: FiniteAbelianGroup
    components: Tuple[int, ...]

    def project(self, v: Sequence[int]) -> Elemen:
        koordinat = self.kernel._koordinat(self.ambient.check_vector(v))
        return tuple(koordinat[j] for j in self.components)


def subgroup(ambient: FiniteAbelianGroup, generators: Sequence[Sequence[int]]) -> Subgroup:
    return Subgroup(ambient, tuple(tuple(int(x) for x in g) for g in generators))


def trivial_subgroup(ambient: FiniteAbelianGroup) -> Subgroup:
    return subgroup(ambient, [])


def full_subgroup(ambient: FiniteAbelianGroup) -> Subgroup:
    return subgroup(ambient, [[1 if i == j else 0 for j in range(ambient.rank)] for i in range(ambient.rank)])


def join(first: Subgroup, second: Subgroup) -> Subgroup:
    if first.ambient != second.ambient:
        raise InputError(
            "subgroups live in different groups",
            {"left": list(first.ambient.cyclic_orders), "right": list(second.ambient.cyclic_orders)},
        )
    return Subgroup(first.ambient, first.generators + second.generators)


def quotient(ambient: FiniteAbelianGroup, s: Subgroup) -> Quotient:
    if s.ambient != ambient:
        raise InputError("subgroup does not belong to this group", {"cyclic_orders": list(ambient.cyclic_orders)})
    komponen = tuple(j for j, d in enumerate(s._diagonal) if d > 1)
    grup = FiniteAbelianGroup(tuple(s._diagonal[j] for j in komponen))
    return Quotient(ambient=ambient, kernel=s, group=grup, components=komponen)


def image(s: Subgroup, q: Quotient) -> Subgroup:
    if s.ambient != q.ambient:
        raise InputError("subgroup does not live in the quotient's ambient group", {})
    return subgroup(q.group, [q.project(g) for g in s.generators])


def power_subgroup(ambient: FiniteAbelianGroup, m: int) -> Subgroup:
    if m < 1:
        raise InputError("power must be a positive integer", {"m": m})
    generator = []
    for i, d in enumerate(ambient.cyclic_orders):
        generator.append([(m % d) if i == j else 0 for j in range(ambient.rank)])
    return subgroup(ambient, generator)


def exponent(group: FiniteAbelianGroup) -> int:
    return group.exponent()


def character_kernel(ambient: FiniteAbelianGroup, p: int, coefficients: Sequence[int]) -> Subgroup:
    """Kernel of v -> sum a_i v_i mod p, read only on the components with p | d_i."""
    if len(coefficients) != ambient.rank:
        raise OutOfRangeVector(
            "one coefficient per cyclic component is required",
            {"coefficients": list(coefficients), "rank": ambient.rank},
        )
    aktif = [
        i for i, (a, d) in enumerate(zip(coefficients, ambient.cyclic_orders)) if d % p == 0 and int(a) % p
    ]
    if not aktif:
        raise InputError(
            "character is trivial; its kernel is the whole group",
            {"p": p, "coefficients": list(coefficients), "cyclic_orders": list(ambient.cyclic_orders)},
        )
    i0 = aktif[0]
    invers = pow(int(coefficients[i0]), -1, p)
    r = ambient.rank

    def basis(i: int, m: int = 1) -> List[int]:
        return [m if j == i else 0 for j in range(r)]

    generator: List[Sequence[int]] = [ambient.normalize(basis(i0, p))]
    for i in range(r):
        if i == i0:
            continue
        if i not in aktif:
            generator.append(basis(i))
            continue
        c = (int(coefficients[i]) * invers) % p
        vektor = basis(i)
        vektor[i0] = -c
        generator.append(ambient.normalize(vektor))
    return subgroup(ambient, generator)


def find_index_p_subgroups(ambient: FiniteAbelianGroup, p: int) -> List[Subgroup]:
    """Every index-p subgroup, one per character up to scaling (first nonzero coefficient 1)."""
    aktif = [i for i, d in enumerate(ambient.cyclic_orders) if d % p == 0]
    hasil: List[Subgroup] = []
    for koef in product(range(p), repeat=len(aktif)):
        pertama: Optional[int] = next((a for a in koef if a), None)
        if pertama != 1:
            continue
        semua = [0] * ambient.rank
        for i, a in zip(aktif, koef):
            semua[i] = a
        hasil.append(character_kernel(ambient, p, semua))
    return hasil
