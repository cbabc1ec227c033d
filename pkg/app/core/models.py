from enum import Enum
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .abelian_groups import FiniteAbelianGroup, Subgroup, subgroup
from .errors import EXIT_OK, InputError
from .local_arith import LocalMatrix, LocalRing
from .optimal_embed import LocalEmbedding
from .orders import OrderPresentation, from_monic_poly, from_structure_constants
from .selectivity import AmbientKind, ExtensionData, Frobenius, GlobalInstance, RamifiedPrime

SCHEMA_VERSION = "v1"


class _Dokumen(BaseModel):
    schema_version: Literal["v1"] = SCHEMA_VERSION


# Order and embedding documents
class OrderSpec(BaseModel):
    monic_poly: Optional[List[int]] = None
    structure_constants: Optional[List[List[List[int]]]] = None

    @model_validator(mode="after")
    def _satu_bentuk(self):
        if (self.monic_poly is None) == (self.structure_constants is None):
            raise ValueError("order needs exactly one of monic_poly or structure_constants")
        return self


class OrderInput(_Dokumen):
    q: int
    k: int = 1
    n: Optional[int] = None
    precision: int = 1
    order: OrderSpec

    def ring(self) -> LocalRing:
        return LocalRing(self.q, self.k)

    def to_order(self) -> OrderPresentation:
        ring = self.ring()
        if self.order.monic_poly is not None:
            hasil = from_monic_poly(ring, self.order.monic_poly)
        else:
            hasil = from_structure_constants(ring, self.order.structure_constants or [])
        if self.n is not None and self.n != hasil.n:
            raise InputError("n does not match the order presentation", {"n": self.n, "presented": hasil.n})
        return hasil


class EmbeddingInput(OrderInput):
    matrices: List[List[List[int]]]

    def to_embedding(self) -> LocalEmbedding:
        order = self.to_order()
        ring = order.ring
        return LocalEmbedding(order, tuple(LocalMatrix.from_rows(ring, m) for m in self.matrices))


# Group and instance documents
class GroupInput(BaseModel):
    cyclic_orders: List[int] = Field(default_factory=list)

    def to_group(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(tuple(self.cyclic_orders))


class SubgroupInput(BaseModel):
    generators: List[List[int]] = Field(default_factory=list)

    def to_subgroup(self, ambient: FiniteAbelianGroup) -> Subgroup:
        return subgroup(ambient, self.generators)


class RamifiedPrimeInput(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    class_vector: List[int] = Field(alias="class")
    frobenius_in_K: Optional[Frobenius] = None


class ExtensionInput(BaseModel):
    galois: bool
    abelian: Optional[bool] = None
    unramified_finite: bool = True
    unramified_real: bool = True
    norm_subgroup: Optional[SubgroupInput] = None


class InstanceInput(_Dokumen):
    model_config = ConfigDict(populate_by_name=True)

    degree_p: int
    class_group: GroupInput
    ramified_primes: List[RamifiedPrimeInput] = Field(default_factory=list)
    K: ExtensionInput = Field(alias="K")
    local_embedding_numbers: List[int] = Field(default_factory=list)
    ambient: AmbientKind = AmbientKind.WIDE

    def to_instance(self) -> GlobalInstance:
        cl = self.class_group.to_group()
        u_k = self.K.norm_subgroup.to_subgroup(cl) if self.K.norm_subgroup is not None else None
        abelian = self.K.galois if self.K.abelian is None else self.K.abelian
        return GlobalInstance(
            degree_p=self.degree_p,
            class_group=cl,
            ramified_primes=tuple(
                RamifiedPrime(class_vector=tuple(pr.class_vector), frobenius_in_K=pr.frobenius_in_K)
                for pr in self.ramified_primes
            ),
            K=ExtensionData(
                galois=self.K.galois,
                abelian=abelian,
                unramified_finite=self.K.unramified_finite,
                unramified_real=self.K.unramified_real,
                norm_subgroup=u_k,
            ),
            local_embedding_numbers=tuple(self.local_embedding_numbers),
            ambient=self.ambient,
        )


# Run models
class Command(str, Enum):
    OPTIMAL = "optimal"
    REGREP = "regrep"
    COUNT = "count"
    CLASSIFY = "classify"
    LOCAL = "local"
    DECIDE = "decide"
    SANDWICH = "sandwich"
    TYPES = "types"
    VERIFY = "verify"


class RunConfig(BaseModel):
    command: Command
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    seed: int
    max_q: int
    max_n: int
    max_k: int
    max_group_order: int
    json_indent: int = 2
    inject_mutant: bool = False
    division: bool = False
    integrally_closed: bool = False


class RunResult(BaseModel):
    success: bool
    output: Optional[Dict[str, Any]] = None
    error: Optional[Dict[str, Any]] = None
    exit_code: int = EXIT_OK
    duration_ms: Optional[int] = None
