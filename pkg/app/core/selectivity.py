"""Selectivity of a genus of maximal orders, decided inside a finite class-group model.

All idelic groups are replaced by their images in the supplied class group Cl:
U_O for the norms of normalizers (with F^x), U_K for the norm group of K. The
type set is Cl/U_O, and K is selective exactly when K is abelian, unramified
everywhere and U_O lies in U_K.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import prod
from typing import Any, Dict, List, Optional, Tuple

from sympy import isprime

from .abelian_groups import (
    Elemen,
    FiniteAbelianGroup,
    Quotient,
    Subgroup,
    check_group_order,
    full_subgroup,
    image,
    join,
    power_subgroup,
    quotient,
    subgroup,
)
from .config import SizeGuards, default_guards
from .errors import InconsistentInstance, InputError, MissingFrobenius
from .observability import logger

MAXIMAL_ORDER_NOTE = (
    "F^x Nr(K^x) Nr(N(O)) = F^x Nr(E) is applied under the maximal-order hypothesis"
)
OPTIMAL_READING_NOTE = "type counts refer to optimal embeddings"


class Frobenius(str, Enum):
    SPLIT = "split"
    INERT = "inert"
    NOT_APPLICABLE = "not_applicable"


class AmbientKind(str, Enum):
    WIDE = "wide"
    NARROW = "narrow"


class SandwichRole(str, Enum):
    LEFT = "left"
    MIDDLE = "middle"
    RIGHT = "right"


@dataclass(frozen=True)
class RamifiedPrime:
    class_vector: Elemen
    frobenius_in_K: Optional[Frobenius] = None


@dataclass(frozen=True)
class ExtensionData:
    galois: bool
    abelian: bool
    unramified_finite: bool
    unramified_real: bool
    norm_subgroup: Optional[Subgroup] = None

    @property
    def everywhere_unramified(self) -> bool:
        return self.unramified_finite and self.unramified_real


@dataclass(frozen=True)
class GlobalInstance:
    degree_p: int
    class_group: FiniteAbelianGroup
    ramified_primes: Tuple[RamifiedPrime, ...]
    K: ExtensionData
    local_embedding_numbers: Tuple[int, ...] = ()
    ambient: AmbientKind = AmbientKind.WIDE

    def __post_init__(self):
        p = self.degree_p
        if not isinstance(p, int) or not isprime(p):
            raise InputError("degree_p must be a prime", {"degree_p": p})
        if p == 2 and self.ambient != AmbientKind.NARROW:
            raise InputError("degree 2 is only modelled over a narrow class group", {"degree_p": p})
        object.__setattr__(self, "ramified_primes", tuple(self.ramified_primes))
        object.__setattr__(self, "local_embedding_numbers", tuple(int(m) for m in self.local_embedding_numbers))
        for prima in self.ramified_primes:
            self.class_group.check_vector(prima.class_vector)
        if any(m < 0 for m in self.local_embedding_numbers):
            raise InputError("local embedding numbers are non-negative", {"values": list(self.local_embedding_numbers)})
        if self.K.galois != self.K.abelian:
            raise InconsistentInstance(
                "a degree-p extension is Galois exactly when it is abelian",
                {"galois": self.K.galois, "abelian": self.K.abelian},
            )
        u_k = self.K.norm_subgroup
        if u_k is not None:
            if u_k.ambient != self.class_group:
                raise InconsistentInstance("norm_subgroup must live in the class group", {})
            if u_k.index() != p:
                raise InconsistentInstance(
                    "norm_subgroup must have index p in the class group",
                    {"index": u_k.index(), "degree_p": p},
                )


@dataclass(frozen=True)
class NormImageSubgroup:
    role: SandwichRole
    subgroup: Subgroup

    def to_payload(self) -> Dict[str, Any]:
        return {"role": self.role.value, **self.subgroup.to_payload()}


@dataclass(frozen=True)
class SandwichReport:
    groups: Tuple[NormImageSubgroup, NormImageSubgroup, NormImageSubgroup]
    indices: Tuple[int, int, int]
    model: str
    notes: Tuple[str, ...] = ()

    @property
    def strict_steps(self) -> int:
        return sum(1 for i in self.indices if i > 1)

    def to_payload(self) -> Dict[str, Any]:
        return {
            "indices": list(self.indices),
            "model": self.model,
            "groups": [g.to_payload() for g in self.groups],
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class TypeGroupResult:
    quotient: Quotient
    u_o: Subgroup
    derivation: Tuple[str, ...] = ()

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.quotient.group

    @property
    def type_number(self) -> int:
        return self.quotient.group.order()

    def to_payload(self) -> Dict[str, Any]:
        return {
            "type_group": self.group.to_payload(),
            "type_number": self.type_number,
            "u_o": self.u_o.to_payload(),
            "derivation": list(self.derivation),
        }


@dataclass(frozen=True)
class SelectivityReport:
    can_embed: bool
    type_group: FiniteAbelianGroup
    type_number: int
    selective: bool
    h_subgroup: Subgroup
    admitting_types: Optional[Subgroup]
    admitting_label: str
    admitting_count: int
    proportion: Fraction
    sandwich: SandwichReport
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def to_payload(self) -> Dict[str, Any]:
        diterima: Any = self.admitting_label if self.admitting_types is None else self.admitting_count
        return {
            "can_embed": self.can_embed,
            "selective": self.selective,
            "admitting": diterima,
            "of": self.type_number,
            "proportion": f"{self.proportion.numerator}/{self.proportion.denominator}",
            "type_group": self.type_group.to_payload(),
            "h_subgroup": self.h_subgroup.to_payload(),
            "admitting_types": self.admitting_types.to_payload() if self.admitting_types is not None else None,
            "sandwich_indices": list(self.sandwich.indices),
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class TypeEntry:
    type_vector: Elemen
    admits: bool


@dataclass(frozen=True)
class EmbeddingCount:
    value: int
    factors: Tuple[int, ...]
    hypothesis_ok: bool
    note: str = ""

    def to_payload(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "factors": list(self.factors),
            "hypothesis_ok": self.hypothesis_ok,
            "note": self.note,
        }


def can_embed_globally(inst: GlobalInstance) -> bool:
    """No prime ramified in B may split in K."""
    for posisi, prima in enumerate(inst.ramified_primes):
        if prima.frobenius_in_K is None:
            raise MissingFrobenius(
                "frobenius_in_K is required for every ramified prime",
                {"index": posisi, "class": list(prima.class_vector)},
            )
    return not any(prima.frobenius_in_K == Frobenius.SPLIT for prima in inst.ramified_primes)


def _norm_subgroup_wajib(inst: GlobalInstance) -> Subgroup:
    if inst.K.norm_subgroup is None:
        raise InconsistentInstance(
            "K is abelian and unramified but norm_subgroup is missing",
            {"galois": inst.K.galois, "unramified_finite": inst.K.unramified_finite},
        )
    return inst.K.norm_subgroup


def check_consistency(inst: GlobalInstance) -> None:
    """For K abelian and unramified, Frobenius at a prime is trivial iff its class is a norm."""
    if not (inst.K.galois and inst.K.everywhere_unramified):
        return
    u_k = _norm_subgroup_wajib(inst)
    for posisi, prima in enumerate(inst.ramified_primes):
        frob = prima.frobenius_in_K.value if prima.frobenius_in_K else None
        detail = {"index": posisi, "class": list(prima.class_vector), "frobenius": frob}
        if prima.frobenius_in_K is None:
            continue
        if prima.frobenius_in_K == Frobenius.NOT_APPLICABLE:
            raise InconsistentInstance("K is unramified, so every prime has a Frobenius", detail)
        harus_split = u_k.contains(prima.class_vector)
        if harus_split != (prima.frobenius_in_K == Frobenius.SPLIT):
            raise InconsistentInstance(
                "Frobenius disagrees with membership of the prime's class in norm_subgroup",
                detail,
            )


def u_o_subgroup(inst: GlobalInstance) -> Subgroup:
    cl = inst.class_group
    kelas = subgroup(cl, [prima.class_vector for prima in inst.ramified_primes])
    return join(power_subgroup(cl, inst.degree_p), kelas)


def type_group(inst: GlobalInstance) -> TypeGroupResult:
    cl = inst.class_group
    u_o = u_o_subgroup(inst)
    derivation = (
        "unramified primes: norms of normalizers contain p-th powers times local units",
        "ramified primes: the normalizer is all of B_p^x, so every local element is a norm",
        "global elements F^x absorb sign conditions; the quotient collapses onto Cl/U_O",
    )
    return TypeGroupResult(quotient=quotient(cl, u_o), u_o=u_o, derivation=derivation)


def _indeks_relatif(kecil: Subgroup, besar: Subgroup) -> int:
    return kecil.index() // besar.index()


def _rakit_sandwich(left: Subgroup, middle: Subgroup, right: Subgroup, model: str, notes: Tuple[str, ...]) -> SandwichReport:
    indeks = (_indeks_relatif(left, middle), _indeks_relatif(middle, right), right.index())
    return SandwichReport(
        groups=(
            NormImageSubgroup(SandwichRole.LEFT, left),
            NormImageSubgroup(SandwichRole.MIDDLE, middle),
            NormImageSubgroup(SandwichRole.RIGHT, right),
        ),
        indices=indeks,
        model=model,
        notes=notes,
    )


def sandwich_report(inst: GlobalInstance) -> SandwichReport:
    cl = inst.class_group
    p = inst.degree_p
    if not inst.K.galois:
        penuh = full_subgroup(cl)
        return _rakit_sandwich(
            penuh, penuh, penuh, "non_galois", ("K is not Galois; its maximal abelian subextension is F",)
        )

    u_o = u_o_subgroup(inst)
    if inst.K.everywhere_unramified:
        u_k = _norm_subgroup_wajib(inst)
        tengah = join(u_k, u_o)
        return _rakit_sandwich(u_k, tengah, tengah, "class_group", (MAXIMAL_ORDER_NOTE,))

    # Formal model: an extra Z/p stands for local units at primes ramified in K.
    r = cl.rank
    formal = FiniteAbelianGroup(cl.cyclic_orders + (p,))
    kiri = subgroup(formal, [[1 if i == j else 0 for j in range(r + 1)] for i in range(r)])
    angkat = [list(g) + [0] for g in u_o.generators] + [[0] * r + [1]]
    tengah = join(kiri, subgroup(formal, angkat))
    return _rakit_sandwich(kiri, tengah, tengah, "formal", (MAXIMAL_ORDER_NOTE, "K is ramified; Cl + Z/p model"))


def _selektif(inst: GlobalInstance, u_o: Subgroup) -> bool:
    k = inst.K
    if not (k.galois and k.abelian and k.everywhere_unramified):
        return False
    return u_o.is_subgroup_of(_norm_subgroup_wajib(inst))


def decide_selectivity(inst: GlobalInstance, guards: SizeGuards = default_guards) -> SelectivityReport:
    check_group_order(inst.class_group, guards)
    check_consistency(inst)
    tg = type_group(inst)
    sandwich = sandwich_report(inst)
    t = tg.group
    notes = (OPTIMAL_READING_NOTE, MAXIMAL_ORDER_NOTE)

    if not can_embed_globally(inst):
        logger.info("Order does not embed in any type", extra={"degree_p": inst.degree_p})
        return SelectivityReport(
            can_embed=False,
            type_group=t,
            type_number=tg.type_number,
            selective=False,
            h_subgroup=tg.u_o,
            admitting_types=None,
            admitting_label="none",
            admitting_count=0,
            proportion=Fraction(0),
            sandwich=sandwich,
            notes=notes + ("a prime ramified in B splits in K",),
        )

    if not _selektif(inst, tg.u_o):
        return SelectivityReport(
            can_embed=True,
            type_group=t,
            type_number=tg.type_number,
            selective=False,
            h_subgroup=tg.u_o,
            admitting_types=None,
            admitting_label="all",
            admitting_count=tg.type_number,
            proportion=Fraction(1),
            sandwich=sandwich,
            notes=notes,
        )

    if inst.ramified_primes:
        raise InconsistentInstance(
            "selective instance with primes ramified in B",
            {"ramified": [list(pr.class_vector) for pr in inst.ramified_primes]},
        )
    u_k = _norm_subgroup_wajib(inst)
    diterima = image(u_k, tg.quotient)
    jumlah = diterima.order()
    if jumlah * inst.degree_p != tg.type_number:
        raise InconsistentInstance(
            "admitting types are not exactly 1/p of the types",
            {"admitting": jumlah, "types": tg.type_number, "degree_p": inst.degree_p},
        )
    return SelectivityReport(
        can_embed=True,
        type_group=t,
        type_number=tg.type_number,
        selective=True,
        h_subgroup=tg.u_o,
        admitting_types=diterima,
        admitting_label="subgroup",
        admitting_count=jumlah,
        proportion=Fraction(jumlah, tg.type_number),
        sandwich=sandwich,
        notes=notes,
    )


def type_distribution(inst: GlobalInstance, guards: SizeGuards = default_guards) -> List[TypeEntry]:
    laporan = decide_selectivity(inst, guards)
    hasil: List[TypeEntry] = []
    for t in laporan.type_group.elements(guards):
        if not laporan.can_embed:
            menerima = False
        elif laporan.admitting_types is None:
            menerima = True
        else:
            menerima = laporan.admitting_types.contains(t)
        hasil.append(TypeEntry(type_vector=tuple(t), admits=menerima))
    return hasil


def global_embedding_count(inst: GlobalInstance) -> EmbeddingCount:
    faktor = inst.local_embedding_numbers
    nilai = prod(faktor)
    ok = all(m == 1 for m in faktor)
    catatan = ""
    if not ok:
        catatan = "local factors differ from 1; maximal-order hypotheses are violated"
        if nilai == 0:
            catatan = "some local embedding is impossible"
        logger.warning("Local factor differs from 1", extra={"factors": list(faktor)})
    return EmbeddingCount(value=nilai, factors=faktor, hypothesis_ok=ok, note=catatan)
