"""Optimal embeddings of a local order into M_n(Z/q^k).

Optimality of phi: S -> M_n(R) is decided four ways that must agree: residue
independence of the images, a nonvanishing residue minor, a brute-force scan
for elements (sum c_i e_i)/q that land back in M_n(R), and for n = 2 the
closed form "b, c or d - a is a unit".
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations, product
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .config import SizeGuards, default_guards
from .errors import DimensionMismatch, InvalidOrder, NotAHomomorphism, SizeGuardExceeded, WrongDimension
from .local_arith import (
    LocalMatrix,
    LocalRing,
    LocalScalar,
    ResidueMatrix,
    general_linear_group,
    iter_matrices,
    kernel_vector_mod_prime,
    mat_inverse,
    mat_mul,
    residue_rank,
)
from .observability import logger
from .orders import (
    OrderPresentation,
    ResidueAlgebraTag,
    classify_residue_algebra,
    from_monic_poly,
    validate,
)


@dataclass(frozen=True)
class LocalEmbedding:
    order: OrderPresentation
    matrices: Tuple[LocalMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "matrices", tuple(self.matrices))
        if len(self.matrices) != self.order.n:
            raise DimensionMismatch(
                "need one matrix per basis element",
                {"n": self.order.n, "matrices": len(self.matrices)},
            )
        for indeks, a in enumerate(self.matrices):
            if a.ring != self.order.ring or a.n != self.order.n:
                raise DimensionMismatch(
                    f"matrix A_{indeks + 1} does not match the order's ring or rank",
                    {"index": indeks + 1, "n": a.n, "q": a.ring.q, "k": a.ring.k},
                )

    @property
    def ring(self) -> LocalRing:
        return self.order.ring

    @property
    def n(self) -> int:
        return self.order.n

    def residues(self) -> Tuple[ResidueMatrix, ...]:
        return tuple(a.residue() for a in self.matrices)

    def conjugated_by(self, u: LocalMatrix) -> "LocalEmbedding":
        invers = mat_inverse(u)
        return LocalEmbedding(self.order, tuple(mat_mul(mat_mul(invers, a), u) for a in self.matrices))

    def key(self) -> Tuple[int, ...]:
        return tuple(x for a in self.matrices[1:] for x in a.flatten())

    def to_payload(self) -> Dict[str, Any]:
        return {"matrices": [a.to_lists() for a in self.matrices]}


class WitnessKind(str, Enum):
    MINOR = "minor"
    DEPENDENCE = "dependence"


@dataclass(frozen=True)
class OptimalityWitness:
    kind: WitnessKind
    selection: Optional[Tuple[Tuple[int, int], ...]] = None
    dependence: Optional[Tuple[int, ...]] = None

    def to_payload(self) -> Dict[str, Any]:
        if self.kind == WitnessKind.MINOR:
            return {"minor": [list(pos) for pos in self.selection or ()]}
        return {"dependence": list(self.dependence or ())}

    def verify(self, emb: "LocalEmbedding") -> bool:
        """Re-check the witness against the residues of the embedding."""
        q = emb.ring.q
        residu = emb.residues()
        if self.kind == WitnessKind.MINOR:
            posisi = [(s - 1, t - 1) for s, t in self.selection or ()]
            return _det_minor(residu, posisi, q) != 0
        koef = self.dependence or ()
        if not any(c % q for c in koef):
            return False
        gabungan = [0] * (emb.n * emb.n)
        for c, m in zip(koef, residu):
            gabungan = [(g + c * x) % q for g, x in zip(gabungan, m.flatten())]
        return not any(gabungan)


@dataclass(frozen=True)
class EnumeratedEmbedding:
    embedding: LocalEmbedding
    optimal: bool
    injective: bool


@dataclass(frozen=True)
class OrbitCount:
    total_embeddings: int
    optimal_embeddings: int
    m: int
    representatives: Tuple[LocalEmbedding, ...]
    precision: int = 1

    def to_payload(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "total_embeddings": self.total_embeddings,
            "optimal_embeddings": self.optimal_embeddings,
            "precision": self.precision,
            "representatives": [rep.to_payload() for rep in self.representatives],
        }


class AlgebraKind(str, Enum):
    MATRIX = "matrix"
    DIVISION = "division"


@dataclass(frozen=True)
class LocalEmbeddingNumber:
    value: int
    algebra_kind: AlgebraKind
    theorem_applies: bool
    residue_class: ResidueAlgebraTag
    precision: int = 1
    consistent: bool = True
    caveat: str = ""

    def to_payload(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "algebra_kind": self.algebra_kind.value,
            "theorem_applies": self.theorem_applies,
            "residue_class": self.residue_class.value,
            "precision": self.precision,
            "consistent": self.consistent,
            "caveat": self.caveat,
        }


def check_homomorphism(emb: LocalEmbedding) -> None:
    """Raise NotAHomomorphism at the first (i, j) with A_i A_j != sum_l c[i][j][l] A_l."""
    n = emb.n
    ring = emb.ring
    if emb.matrices[0] != ring.identity(n):
        raise NotAHomomorphism("A_1 must be the identity matrix", {"index": [1]})
    mod = ring.modulus
    c = emb.order.constants
    for i in range(1, n):
        for j in range(i, n):
            kiri = mat_mul(emb.matrices[i], emb.matrices[j]).flatten()
            kanan = [0] * (n * n)
            for l in range(n):
                if c[i][j][l]:
                    kanan = [x + c[i][j][l] * y for x, y in zip(kanan, emb.matrices[l].flatten())]
            if any((a - b) % mod for a, b in zip(kiri, kanan)):
                raise NotAHomomorphism(
                    f"A_{i + 1} A_{j + 1} does not match the structure constants",
                    {"index": [i + 1, j + 1]},
                )


def regular_representation(order: OrderPresentation) -> LocalEmbedding:
    """(A_i)_{l,j} = c[i][j][l]: column j of A_i holds the coordinates of e_i e_j."""
    laporan = validate(order)
    if not laporan.ok:
        raise InvalidOrder(laporan.message, laporan.to_payload())
    n = order.n
    matriks = []
    for i in range(n):
        baris = tuple(tuple(order.c(i, j, l) for j in range(n)) for l in range(n))
        matriks.append(LocalMatrix(order.ring, baris))
    return LocalEmbedding(order, tuple(matriks))


def embedding_from_matrix(order: OrderPresentation, a: LocalMatrix) -> LocalEmbedding:
    """For a monogenic order, e_i -> A^{i-1}."""
    if not order.is_monogenic:
        raise InvalidOrder("embedding_from_matrix needs a monogenic order", {})
    pangkat = [order.ring.identity(order.n)]
    for _ in range(1, order.n):
        pangkat.append(mat_mul(pangkat[-1], a))
    return LocalEmbedding(order, tuple(pangkat))


def _det_minor(residu: Sequence[ResidueMatrix], posisi: Sequence[Tuple[int, int]], q: int) -> int:
    baris = tuple(tuple(m.entries[s][t] for m in residu) for s, t in posisi)
    return ResidueMatrix(q, baris).det()


def is_optimal_independence(emb: LocalEmbedding) -> bool:
    check_homomorphism(emb)
    return residue_rank(emb.residues()) == emb.n


def is_optimal_minor(emb: LocalEmbedding) -> Tuple[bool, OptimalityWitness]:
    """First selection of n positions, in lexicographic order, with a nonzero residue minor."""
    check_homomorphism(emb)
    n = emb.n
    q = emb.ring.q
    residu = emb.residues()
    semua_posisi = [(s, t) for s in range(n) for t in range(n)]
    for pilihan in combinations(semua_posisi, n):
        if _det_minor(residu, pilihan, q) != 0:
            return True, OptimalityWitness(
                kind=WitnessKind.MINOR,
                selection=tuple((s + 1, t + 1) for s, t in pilihan),
            )
    vektor = kernel_vector_mod_prime([m.flatten() for m in residu], q)
    return False, OptimalityWitness(kind=WitnessKind.DEPENDENCE, dependence=vektor)


def is_optimal_oracle(emb: LocalEmbedding) -> bool:
    """Scan every nonzero residue vector c for sum c_i A~_i = 0."""
    check_homomorphism(emb)
    q = emb.ring.q
    datar = [m.flatten() for m in emb.residues()]
    for koef in product(range(q), repeat=emb.n):
        if not any(koef):
            continue
        nol = True
        for posisi in range(len(datar[0])):
            if sum(c * d[posisi] for c, d in zip(koef, datar)) % q:
                nol = False
                break
        if nol:
            return False
    return True


def quadratic_criterion(emb: LocalEmbedding) -> bool:
    if emb.n != 2:
        raise WrongDimension("the closed form only covers n = 2", {"n": emb.n})
    a2 = emb.matrices[1]
    a, b = a2.entry(0, 0), a2.entry(0, 1)
    c, d = a2.entry(1, 0), a2.entry(1, 1)
    return b.is_unit() or c.is_unit() or (d - a).is_unit()


def _nilai_vektor(emb: LocalEmbedding, alpha: Sequence[Union[int, LocalScalar]]) -> Tuple[int, ...]:
    if len(alpha) != emb.n:
        raise DimensionMismatch("alpha must have length n", {"n": emb.n, "len": len(alpha)})
    return tuple(a.value if isinstance(a, LocalScalar) else int(a) for a in alpha)


def assemble_V(emb: LocalEmbedding, alpha: Sequence[Union[int, LocalScalar]]) -> LocalMatrix:
    """The matrix with columns A_1 alpha, ..., A_n alpha."""
    vektor = _nilai_vektor(emb, alpha)
    return LocalMatrix.from_columns(emb.ring, [a.apply(vektor) for a in emb.matrices])


def det_v_expansion(emb: LocalEmbedding, alpha: Sequence[Union[int, LocalScalar]]) -> LocalScalar:
    """sum over (t_1..t_n) of det X_{(1,t_1),...,(n,t_n)} * prod alpha_{t_s}."""
    vektor = _nilai_vektor(emb, alpha)
    n = emb.n
    ring = emb.ring
    hasil = LocalScalar(ring, 0)
    for kolom in product(range(n), repeat=n):
        bobot = 1
        for t in kolom:
            bobot *= vektor[t]
        if bobot % ring.modulus == 0:
            continue
        x = LocalMatrix(ring, tuple(tuple(a.entries[s][kolom[s]] for a in emb.matrices) for s in range(n)))
        hasil = hasil + x.det() * bobot
    return hasil


def cyclic_conjugator(emb: LocalEmbedding) -> Optional[Tuple[Tuple[int, ...], LocalMatrix]]:
    """First residue vector alpha (lexicographic) whose V is invertible, with that V.

    With such V, V^{-1} A_i V is the regular representation of e_i.
    """
    check_homomorphism(emb)
    for alpha in product(range(emb.ring.q), repeat=emb.n):
        if not any(alpha):
            continue
        v = assemble_V(emb, alpha)
        if v.is_invertible():
            return alpha, v
    return None


def conjugates_to_regular(emb: LocalEmbedding, v: LocalMatrix) -> bool:
    reguler = regular_representation(emb.order)
    return emb.conjugated_by(v).matrices == reguler.matrices


def _cek_batas_lokal(q: int, n: int, precision: int, guards: SizeGuards) -> None:
    if q > guards.max_q or n > guards.max_n or precision > guards.max_k:
        raise SizeGuardExceeded(
            "local enumeration outside the configured size guards",
            {
                "q": q,
                "n": n,
                "k": precision,
                "max_q": guards.max_q,
                "max_n": guards.max_n,
                "max_k": guards.max_k,
            },
        )


def enumerate_residue_embeddings(
    order: OrderPresentation,
    precision: int = 1,
    guards: SizeGuards = default_guards,
) -> List[EnumeratedEmbedding]:
    """Every hom e_2 -> A with f(A) = 0 modulo q^precision, flagged optimal or not."""
    if not order.is_monogenic:
        raise InvalidOrder("enumeration needs a monogenic order", {})
    n = order.n
    q = order.ring.q
    _cek_batas_lokal(q, n, precision, guards)
    ring = LocalRing(q, precision)
    urutan = from_monic_poly(ring, order.defining_poly or ())
    koef = urutan.defining_poly or ()
    mod = ring.modulus

    hasil: List[EnumeratedEmbedding] = []
    for a in iter_matrices(ring, n, guards):
        pangkat = [ring.identity(n), a]
        for _ in range(2, n + 1):
            pangkat.append(mat_mul(pangkat[-1], a))
        nilai = list(pangkat[n].flatten())
        for i, c in enumerate(koef):
            if c:
                nilai = [x + c * y for x, y in zip(nilai, pangkat[i].flatten())]
        if any(x % mod for x in nilai):
            continue
        emb = LocalEmbedding(urutan, tuple(pangkat[:n]))
        optimal = residue_rank(emb.residues()) == n
        # For monogenic residue maps injectivity and optimality coincide.
        hasil.append(EnumeratedEmbedding(embedding=emb, optimal=optimal, injective=optimal))
    return hasil


def _orbit(emb: LocalEmbedding, pasangan_gl: Sequence[Tuple[LocalMatrix, LocalMatrix]]) -> set:
    orbit = set()
    for u, u_inv in pasangan_gl:
        kunci = []
        for a in emb.matrices[1:]:
            kunci.extend(mat_mul(mat_mul(u_inv, a), u).flatten())
        orbit.add(tuple(kunci))
    return orbit


@lru_cache(maxsize=16)
def _pasangan_gl(ring: LocalRing, n: int, guards: SizeGuards) -> Tuple[Tuple[LocalMatrix, LocalMatrix], ...]:
    return tuple((u, mat_inverse(u)) for u in general_linear_group(ring, n, guards))


def count_orbits(
    embeddings: Sequence[EnumeratedEmbedding],
    q: int,
    n: int,
    precision: int = 1,
    guards: SizeGuards = default_guards,
) -> OrbitCount:
    """Partition the optimal embeddings into GL_n(Z/q^precision)-conjugacy orbits."""
    _cek_batas_lokal(q, n, precision, guards)
    optimal = {e.embedding.key(): e.embedding for e in embeddings if e.optimal}
    if not optimal:
        return OrbitCount(len(embeddings), 0, 0, (), precision)

    pasangan = _pasangan_gl(LocalRing(q, precision), n, guards)
    belum = set(optimal)
    wakil: List[LocalEmbedding] = []
    for kunci in sorted(optimal):
        if kunci not in belum:
            continue
        emb = optimal[kunci]
        wakil.append(emb)
        belum -= _orbit(emb, pasangan)
    logger.debug(
        "Orbit sweep finished",
        extra={"q": q, "n": n, "k": precision, "optimal": len(optimal), "orbits": len(wakil)},
    )
    return OrbitCount(
        total_embeddings=len(embeddings),
        optimal_embeddings=len(optimal),
        m=len(wakil),
        representatives=tuple(wakil),
        precision=precision,
    )


def are_conjugate(first: LocalEmbedding, second: LocalEmbedding, guards: SizeGuards = default_guards) -> bool:
    if first.ring != second.ring or first.n != second.n:
        return False
    pasangan = _pasangan_gl(first.ring, first.n, guards)
    return second.key() in _orbit(first, pasangan)


def local_embedding_number(
    order: OrderPresentation,
    algebra_kind: AlgebraKind,
    integrally_closed: bool = False,
    precision: int = 1,
    guards: SizeGuards = default_guards,
) -> LocalEmbeddingNumber:
    kelas = classify_residue_algebra(order)
    if algebra_kind == AlgebraKind.DIVISION:
        nilai = 1 if kelas.tag == ResidueAlgebraTag.UNRAMIFIED_FIELD and integrally_closed else 0
        return LocalEmbeddingNumber(
            value=nilai,
            algebra_kind=algebra_kind,
            theorem_applies=True,
            residue_class=kelas.tag,
            precision=precision,
            caveat="" if nilai else "K_p is not a field or S_p is not integrally closed",
        )

    hitung = count_orbits(
        enumerate_residue_embeddings(order, precision=precision, guards=guards),
        order.ring.q,
        order.n,
        precision=precision,
        guards=guards,
    )
    berlaku = kelas.tag in (ResidueAlgebraTag.SPLIT_ETALE, ResidueAlgebraTag.UNRAMIFIED_FIELD)
    konsisten = not berlaku or hitung.m == 1
    if not konsisten:
        logger.error(
            "Local uniqueness violated",
            extra={"q": order.ring.q, "n": order.n, "k": precision, "m": hitung.m},
        )
    return LocalEmbeddingNumber(
        value=hitung.m,
        algebra_kind=algebra_kind,
        theorem_applies=berlaku,
        residue_class=kelas.tag,
        precision=precision,
        consistent=konsisten,
        caveat=f"orbit count computed modulo {order.ring.q}^{precision}",
    )
