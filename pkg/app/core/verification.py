"""Seeded cross-check suite behind `selectis verify`.

Every family draws from its own random.Random seeded with "<seed>:<family>",
so a family's outcome does not depend on which thread runs it or when.
"""

import asyncio
import random
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

from .abelian_groups import FiniteAbelianGroup, find_index_p_subgroups, power_subgroup, quotient
from .config import Settings, SizeGuards, default_guards, settings
from .errors import InputError, SizeGuardExceeded
from .local_arith import LocalMatrix, LocalRing, char_poly, iter_matrices, mat_det
from .observability import logger, metrics_collector
from .optimal_embed import (
    AlgebraKind,
    LocalEmbedding,
    are_conjugate,
    assemble_V,
    check_homomorphism,
    conjugates_to_regular,
    count_orbits,
    cyclic_conjugator,
    det_v_expansion,
    embedding_from_matrix,
    enumerate_residue_embeddings,
    is_optimal_independence,
    is_optimal_minor,
    is_optimal_oracle,
    local_embedding_number,
    quadratic_criterion,
    regular_representation,
)
from .orders import (
    OrderPresentation,
    ResidueAlgebraTag,
    classify_residue_algebra,
    from_monic_poly,
    from_structure_constants,
)
from .selectivity import (
    ExtensionData,
    Frobenius,
    GlobalInstance,
    RamifiedPrime,
    decide_selectivity,
    global_embedding_count,
    sandwich_report,
    type_distribution,
    type_group,
)

FAMILIES = (
    "criterion_equivalence",
    "quadratic_closed_form",
    "regular_representation",
    "local_uniqueness",
    "det_v_expansion",
    "cyclic_conjugator",
    "type_group_structure",
    "selectivity_proportions",
    "sandwich_arithmetic",
    "emergent_consistency",
    "ramification_monotonicity",
    "product_formula",
)

_TEORI = (ResidueAlgebraTag.SPLIT_ETALE, ResidueAlgebraTag.UNRAMIFIED_FIELD)


@dataclass(frozen=True)
class SuiteSizes:
    random_n3: int = 1000
    orders: int = 500
    instances: int = 200

    @classmethod
    def from_settings(cls, source: Optional[Settings] = None) -> "SuiteSizes":
        sumber = source or settings
        return cls(
            random_n3=sumber.VERIFY_RANDOM_N3,
            orders=sumber.VERIFY_ORDERS,
            instances=sumber.VERIFY_INSTANCES,
        )


@dataclass
class FamilyResult:
    name: str
    checks: int = 0
    failures: int = 0
    counterexample: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, counterexample: Callable[[], Dict[str, Any]]) -> None:
        self.checks += 1
        if ok:
            return
        self.failures += 1
        if self.counterexample is None:
            self.counterexample = counterexample()

    def to_payload(self) -> Dict[str, Any]:
        return {
            "family": self.name,
            "checks": self.checks,
            "failures": self.failures,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


@dataclass
class SuiteReport:
    seed: int
    families: List[FamilyResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.families)

    @property
    def first_failure(self) -> Optional[FamilyResult]:
        return next((f for f in self.families if not f.passed), None)

    def to_payload(self) -> Dict[str, Any]:
        gagal = self.first_failure
        return {
            "seed": self.seed,
            "passed": self.passed,
            "families": [f.to_payload() for f in self.families],
            "first_failure": gagal.to_payload() if gagal else None,
        }


@dataclass(frozen=True)
class _Konteks:
    seed: int
    guards: SizeGuards
    sizes: SuiteSizes
    inject_mutant: bool = False

    def rng(self, family: str) -> random.Random:
        return random.Random(f"{self.seed}:{family}")

    def boleh(self, q: int, n: int, k: int) -> bool:
        return q <= self.guards.max_q and n <= self.guards.max_n and k <= self.guards.max_k

    def bisa_sapu(self, q: int, n: int, k: int) -> bool:
        """Whether an exhaustive sweep over n x n matrices mod q^k fits the guards."""
        return self.boleh(q, n, k) and (q**k) ** (n * n) <= self.guards.max_sweep

    def primes(self, pilihan: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(q for q in pilihan if q <= self.guards.max_q)

    def presisi(self) -> Tuple[int, ...]:
        return tuple(k for k in (1, 2) if k <= self.guards.max_k)


def _emb_payload(emb: LocalEmbedding) -> Dict[str, Any]:
    return {
        "q": emb.ring.q,
        "k": emb.ring.k,
        "n": emb.n,
        "structure_constants": emb.order.to_lists(),
        **emb.to_payload(),
    }


def _dari_matriks(a: LocalMatrix) -> LocalEmbedding:
    """Cayley-Hamilton: A is a root of its own characteristic polynomial."""
    order = from_monic_poly(a.ring, char_poly(a))
    return embedding_from_matrix(order, a)


def _matriks_acak(rng: random.Random, ring: LocalRing, n: int) -> LocalMatrix:
    return LocalMatrix(ring, tuple(tuple(rng.randrange(ring.modulus) for _ in range(n)) for _ in range(n)))


def _embedding_acak(rng: random.Random, ring: LocalRing, n: int) -> LocalEmbedding:
    c = _matriks_acak(rng, ring, n)
    if rng.random() < 0.3:
        # lambda I + q C reduces to a scalar matrix, so it is never optimal
        c = ring.identity(n).scale(rng.randrange(ring.modulus)) + c.scale(ring.q)
    return _dari_matriks(c)


def _ruang_n2(q: int, k: int, guards: SizeGuards) -> Iterator[LocalEmbedding]:
    ring = LocalRing(q, k)
    for a in iter_matrices(ring, 2, guards):
        yield _dari_matriks(a)


def _mutasi(emb: LocalEmbedding) -> LocalEmbedding:
    konstanta = [[list(row) for row in plane] for plane in emb.order.to_lists()]
    konstanta[1][1][0] = (konstanta[1][1][0] + 1) % emb.ring.modulus
    return LocalEmbedding(from_structure_constants(emb.ring, konstanta), emb.matrices)


def _cek_kriteria(hasil: FamilyResult, emb: LocalEmbedding) -> None:
    try:
        nilai = {"independence": is_optimal_independence(emb)}
        minor, saksi = is_optimal_minor(emb)
        nilai["minor"] = minor
        nilai["oracle"] = is_optimal_oracle(emb)
        if emb.n == 2:
            nilai["quadratic"] = quadratic_criterion(emb)
    except InputError as exc:
        hasil.record(False, lambda: {"error": exc.to_payload(), "embedding": _emb_payload(emb)})
        return
    ok = len(set(nilai.values())) == 1 and saksi.verify(emb)
    hasil.record(ok, lambda: {"verdicts": nilai, "witness": saksi.to_payload(), "embedding": _emb_payload(emb)})


def family_criterion_equivalence(ctx: _Konteks) -> FamilyResult:
    hasil = FamilyResult("criterion_equivalence")
    rng = ctx.rng(hasil.name)
    pertama = True
    for q in ctx.primes((2, 3)):
        for k in ctx.presisi():
            if not ctx.bisa_sapu(q, 2, k):
                continue
            for emb in _ruang_n2(q, k, ctx.guards):
                if pertama and ctx.inject_mutant:
                    emb = _mutasi(emb)
                pertama = False
                _cek_kriteria(hasil, emb)

    kandidat = [(q, k) for q in ctx.primes((2, 3, 5)) for k in ctx.presisi() if ctx.boleh(q, 3, k)]
    if kandidat:
        for _ in range(ctx.sizes.random_n3):
            q, k = rng.choice(kandidat)
            _cek_kriteria(hasil, _embedding_acak(rng, LocalRing(q, k), 3))
    return hasil


def family_quadratic_closed_form(ctx: _Konteks) -> FamilyResult:
    hasil = FamilyResult("quadratic_closed_form")
    for q in ctx.primes((2, 3)):
        for k in ctx.presisi():
            if not ctx.bisa_sapu(q, 2, k):
                continue
            for emb in _ruang_n2(q, k, ctx.guards):
                a2 = emb.matrices[1]
                a, b, c, d = (a2.entry(i, j) for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)))
                tabel = b.residue() != 0 or c.residue() != 0 or (d - a).residue() != 0
                hasil.record(
                    quadratic_criterion(emb) == tabel == is_optimal_independence(emb),
                    lambda: {"A_2": a2.to_lists(), "q": q, "k": k},
                )
    return hasil


def _companion_cocok(order: OrderPresentation, a2: LocalMatrix) -> bool:
    n = order.n
    mod = order.ring.modulus
    koef = order.defining_poly or ()
    for l in range(n):
        for j in range(n):
            harap = (-koef[l]) % mod if j == n - 1 else (1 if l == j + 1 else 0)
            if a2.entries[l][j] != harap:
                return False
    return True


def family_regular_representation(ctx: _Konteks) -> FamilyResult:
    hasil = FamilyResult("regular_representation")
    rng = ctx.rng(hasil.name)
    kandidat = [
        (n, q, k) for n in (2, 3) for q in ctx.primes((2, 3, 5)) for k in ctx.presisi() if ctx.boleh(q, n, k)
    ]
    for _ in range(ctx.sizes.orders if kandidat else 0):
        n, q, k = rng.choice(kandidat)
        ring = LocalRing(q, k)
        order = from_monic_poly(ring, [rng.randrange(ring.modulus) for _ in range(n)])
        emb = regular_representation(order)
        try:
            check_homomorphism(emb)
            ok = (
                is_optimal_independence(emb)
                and is_optimal_minor(emb)[0]
                and is_optimal_oracle(emb)
                and _companion_cocok(order, emb.matrices[1])
                and all(a.column(0) == tuple(1 if l == i else 0 for l in range(n)) for i, a in enumerate(emb.matrices))
            )
        except InputError:
            ok = False
        hasil.record(ok, lambda: {"order": order.to_lists(), **emb.to_payload()})
    return hasil


def family_local_uniqueness(ctx: _Konteks) -> FamilyResult:
    hasil = FamilyResult("local_uniqueness")
    rng = ctx.rng(hasil.name)
    kasus = [(2, 2, 1), (2, 3, 1), (3, 2, 1), (2, 2, 2), (2, 3, 2)]
    for n, q, k in kasus:
        if not ctx.bisa_sapu(q, n, k):
            continue
        residu = LocalRing(q, 1)
        for koef in product(range(q), repeat=n):
            kelas = classify_residue_algebra(from_monic_poly(residu, koef))
            if kelas.tag not in _TEORI:
                continue
            ring = LocalRing(q, k)
            daftar = [list(koef)]
            if k > 1:
                daftar.append([a + q * rng.randrange(q ** (k - 1)) for a in koef])
            for angkat in daftar:
                order = from_monic_poly(ring, angkat)
                hitung = count_orbits(
                    enumerate_residue_embeddings(order, precision=k, guards=ctx.guards),
                    q,
                    n,
                    precision=k,
                    guards=ctx.guards,
                )
                wakil = hitung.representatives
                terpisah = all(
                    not are_conjugate(wakil[i], wakil[j], ctx.guards)
                    for i in range(len(wakil))
                    for j in range(i + 1, len(wakil))
                )
                hasil.record(
                    hitung.m == 1 and terpisah,
                    lambda: {"q": q, "n": n, "k": k, "poly": list(angkat), "class": kelas.tag.value, **hitung.to_payload()},
                )
    return hasil


def family_det_v_expansion(ctx: _Konteks) -> FamilyResult:
    hasil = FamilyResult("det_v_expansion")
    rng = ctx.rng(hasil.name)
    for q in ctx.primes((2, 3)):
        if not ctx.bisa_sapu(q, 2, 1):
            continue
        for emb in _ruang_n2(q, 1, ctx.guards):
            for alpha in product(range(q), repeat=2):
                kiri = det_v_expansion(emb, alpha)
                kanan = mat_det(assemble_V(emb, alpha))
                hasil.record(kiri == kanan, lambda: {"alpha": list(alpha), "expansion": kiri.value, "direct": kanan.value, **emb.to_payload()})

    kandidat = [(q, k) for q in ctx.primes((2, 3, 5)) for k in ctx.presisi() if ctx.boleh(q, 3, k)]
    for _ in range(ctx.sizes.orders // 5 if kandidat else 0):
        q, k = rng.choice(kandidat)
        emb = _embedding_acak(rng, LocalRing(q, k), 3)
        alpha = [rng.randrange(q**k) for _ in range(3)]
        kiri = det_v_expansion(emb, alpha)
        kanan = mat_det(assemble_V(emb, alpha))
        hasil.record(kiri == kanan, lambda: {"alpha": alpha, "expansion": kiri.value, "direct": kanan.value, **emb.to_payload()})
    return hasil


def family_cyclic_conjugator(ctx: _Konteks) -> FamilyResult:
    hasil = FamilyResult("cyclic_conjugator")
    rng = ctx.rng(hasil.name)
    kandidat = [
        (n, q, k) for n in (2, 3) for q in ctx.primes((2, 3, 5)) for k in ctx.presisi() if ctx.boleh(q, n, k)
    ]
    for _ in range(ctx.sizes.orders if kandidat else 0):
        n, q, k = rng.choice(kandidat)
        emb = _embedding_acak(rng, LocalRing(q, k), n)
        optimal = is_optimal_independence(emb)
        temuan = cyclic_conjugator(emb)
        if optimal:
            ok = temuan is not None and conjugates_to_regular(emb, temuan[1])
        else:
            ok = temuan is None
        hasil.record(ok, lambda: {"optimal": optimal, "found": temuan is not None, **_emb_payload(emb)})
    return hasil


def random_instance(rng: random.Random, p: int) -> GlobalInstance:
    """A random class-group model; Frobenius data is consistent with U_K when K is unramified."""
    orde = [rng.randint(2, 27) for _ in range(rng.randint(0, 3))]
    if orde and rng.random() < 0.6:
        orde[rng.randrange(len(orde))] = p * rng.randint(1, 27 // p)
    cl = FiniteAbelianGroup(tuple(orde))

    jenis = rng.choice(("non_galois", "unramified", "unramified", "ramified"))
    calon = find_index_p_subgroups(cl, p) if jenis == "unramified" else []
    if jenis == "unramified" and not calon:
        jenis = "non_galois"
    u_k = rng.choice(calon) if calon else None

    jumlah = 0 if jenis == "unramified" and rng.random() < 0.5 else rng.randint(0, 2)
    primes = [random_ramified_prime(rng, cl, u_k, jenis == "ramified") for _ in range(jumlah)]
    galois = jenis != "non_galois"
    return GlobalInstance(
        degree_p=p,
        class_group=cl,
        ramified_primes=tuple(primes),
        K=ExtensionData(
            galois=galois,
            abelian=galois,
            unramified_finite=jenis != "ramified",
            unramified_real=True,
            norm_subgroup=u_k,
        ),
    )


def random_ramified_prime(rng: random.Random, cl: FiniteAbelianGroup, u_k, allow_na: bool) -> RamifiedPrime:
    kelas = tuple(rng.randrange(d) for d in cl.cyclic_orders)
    if u_k is not None:
        frob = Frobenius.SPLIT if u_k.contains(kelas) else Frobenius.INERT
    else:
        pilihan = [Frobenius.INERT, Frobenius.INERT, Frobenius.SPLIT]
        if allow_na:
            pilihan.append(Frobenius.NOT_APPLICABLE)
        frob = rng.choice(pilihan)
    return RamifiedPrime(class_vector=kelas, frobenius_in_K=frob)


def _instans(ctx: _Konteks, family: str) -> Iterator[GlobalInstance]:
    rng = ctx.rng(family)
    for _ in range(ctx.sizes.instances):
        yield random_instance(rng, rng.choice((3, 5)))


def _inst_payload(inst: GlobalInstance) -> Dict[str, Any]:
    return {
        "degree_p": inst.degree_p,
        "class_group": list(inst.class_group.cyclic_orders),
        "ramified_primes": [
            {"class": list(pr.class_vector), "frobenius_in_K": pr.frobenius_in_K.value if pr.frobenius_in_K else None}
            for pr in inst.ramified_primes
        ],
        "K": {
            "galois": inst.K.galois,
            "unramified_finite": inst.K.unramified_finite,
            "norm_subgroup": [list(g) for g in inst.K.norm_subgroup.generators] if inst.K.norm_subgroup else None,
        },
    }


def family_type_group_structure(ctx: _Konteks) -> FamilyResult:
    hasil = FamilyResult("type_group_structure")
    for inst in _instans(ctx, hasil.name):
        tg = type_group(inst)
        p = inst.degree_p
        batas = quotient(inst.class_group, power_subgroup(inst.class_group, p)).group.order()
        ok = p % tg.group.exponent() == 0 and batas % tg.type_number == 0
        hasil.record(ok, lambda: {"instance": _inst_payload(inst), **tg.to_payload()})
    return hasil


def family_selectivity_proportions(ctx: _Konteks) -> FamilyResult:
    hasil = FamilyResult("selectivity_proportions")
    for inst in _instans(ctx, hasil.name):
        laporan = decide_selectivity(inst, ctx.guards)
        if not laporan.can_embed:
            continue
        if laporan.selective:
            diterima = laporan.admitting_types
            ok = (
                diterima is not None
                and laporan.admitting_count * inst.degree_p == laporan.type_number
                and diterima.index() == inst.degree_p
            )
        else:
            ok = laporan.admitting_types is None and laporan.admitting_label == "all"
        if ok and laporan.type_number <= 729:
            sebaran = type_distribution(inst, ctx.guards)
            ok = sum(1 for t in sebaran if t.admits) == laporan.admitting_count
        hasil.record(ok, lambda: {"instance": _inst_payload(inst), **laporan.to_payload()})
    return hasil


def family_sandwich_arithmetic(ctx: _Konteks) -> FamilyResult:
    hasil = FamilyResult("sandwich_arithmetic")
    for inst in _instans(ctx, hasil.name):
        s = sandwich_report(inst)
        kiri, tengah, kanan = (g.subgroup for g in s.groups)
        urut = kiri.is_subgroup_of(tengah) and tengah.is_subgroup_of(kanan)
        i1, i2, i3 = s.indices
        if inst.K.galois:
            ok = i1 * i2 * i3 == inst.degree_p and s.strict_steps <= 1
        else:
            ok = s.indices == (1, 1, 1)
        hasil.record(ok and urut, lambda: {"instance": _inst_payload(inst), **s.to_payload()})
    return hasil


def family_emergent_consistency(ctx: _Konteks) -> FamilyResult:
    hasil = FamilyResult("emergent_consistency")
    for inst in _instans(ctx, hasil.name):
        try:
            laporan = decide_selectivity(inst, ctx.guards)
            ok = not (laporan.selective and inst.ramified_primes)
        except InputError:
            ok = False
        hasil.record(ok, lambda: {"instance": _inst_payload(inst)})
    return hasil


def family_ramification_monotonicity(ctx: _Konteks) -> FamilyResult:
    hasil = FamilyResult("ramification_monotonicity")
    rng = ctx.rng(f"{hasil.name}:extra")
    for inst in _instans(ctx, hasil.name):
        sebelum = decide_selectivity(inst, ctx.guards).selective
        tambahan = random_ramified_prime(rng, inst.class_group, inst.K.norm_subgroup, not inst.K.unramified_finite)
        diperbesar = replace(inst, ramified_primes=inst.ramified_primes + (tambahan,))
        sesudah = decide_selectivity(diperbesar, ctx.guards).selective
        hasil.record(sebelum or not sesudah, lambda: {"instance": _inst_payload(diperbesar)})
    return hasil


def family_product_formula(ctx: _Konteks) -> FamilyResult:
    hasil = FamilyResult("product_formula")
    faktor: List[int] = []
    for q in ctx.primes((2, 3)):
        if not ctx.bisa_sapu(q, 2, 1):
            continue
        ring = LocalRing(q, 1)
        for koef in product(range(q), repeat=2):
            order = from_monic_poly(ring, koef)
            kelas = classify_residue_algebra(order)
            if kelas.tag not in _TEORI:
                continue
            matriks = local_embedding_number(order, AlgebraKind.MATRIX, guards=ctx.guards)
            hasil.record(matriks.value == 1 and matriks.consistent, lambda: {"poly": list(koef), **matriks.to_payload()})
            faktor.append(matriks.value)
            if kelas.tag == ResidueAlgebraTag.UNRAMIFIED_FIELD:
                divisi = local_embedding_number(order, AlgebraKind.DIVISION, integrally_closed=True, guards=ctx.guards)
                hasil.record(divisi.value == 1, lambda: {"poly": list(koef), **divisi.to_payload()})
                faktor.append(divisi.value)

    dasar = GlobalInstance(
        degree_p=3,
        class_group=FiniteAbelianGroup(()),
        ramified_primes=(),
        K=ExtensionData(galois=False, abelian=False, unramified_finite=True, unramified_real=True),
    )
    hitung = global_embedding_count(replace(dasar, local_embedding_numbers=tuple(faktor)))
    hasil.record(hitung.value == 1 and hitung.hypothesis_ok, hitung.to_payload)
    kosong = global_embedding_count(dasar)
    hasil.record(kosong.value == 1, kosong.to_payload)
    nol = global_embedding_count(replace(dasar, local_embedding_numbers=(1, 0)))
    hasil.record(nol.value == 0 and not nol.hypothesis_ok, nol.to_payload)
    return hasil


_RUNNERS: Dict[str, Callable[[_Konteks], FamilyResult]] = {
    "criterion_equivalence": family_criterion_equivalence,
    "quadratic_closed_form": family_quadratic_closed_form,
    "regular_representation": family_regular_representation,
    "local_uniqueness": family_local_uniqueness,
    "det_v_expansion": family_det_v_expansion,
    "cyclic_conjugator": family_cyclic_conjugator,
    "type_group_structure": family_type_group_structure,
    "selectivity_proportions": family_selectivity_proportions,
    "sandwich_arithmetic": family_sandwich_arithmetic,
    "emergent_consistency": family_emergent_consistency,
    "ramification_monotonicity": family_ramification_monotonicity,
    "product_formula": family_product_formula,
}


def check_suite_guards(guards: SizeGuards) -> None:
    if guards.max_n < 2 or guards.max_q < 2 or guards.max_k < 1:
        raise SizeGuardExceeded(
            "the verify suite needs at least n = 2, q = 2 and k = 1",
            {"max_n": guards.max_n, "max_q": guards.max_q, "max_k": guards.max_k},
        )


async def run_suite(
    seed: int,
    guards: SizeGuards = default_guards,
    sizes: Optional[SuiteSizes] = None,
    inject_mutant: bool = False,
    families: Tuple[str, ...] = FAMILIES,
) -> SuiteReport:
    check_suite_guards(guards)
    ctx = _Konteks(seed=seed, guards=guards, sizes=sizes or SuiteSizes.from_settings(), inject_mutant=inject_mutant)
    dipilih = [nama for nama in FAMILIES if nama in families]
    hasil = await asyncio.gather(*(asyncio.to_thread(_RUNNERS[nama], ctx) for nama in dipilih))

    laporan = SuiteReport(seed=seed, families=list(hasil))
    for keluarga in laporan.families:
        status = "pass" if keluarga.passed else "fail"
        metrics_collector.increment(
            "property_checks_total", {"family": keluarga.name, "status": status}, amount=keluarga.checks
        )
        if not keluarga.passed:
            logger.warning(
                "Property family failed",
                extra={"family": keluarga.name, "failures": keluarga.failures, "checks": keluarga.checks},
            )
    logger.info("Verify suite finished", extra={"seed": seed, "passed": laporan.passed})
    return laporan
