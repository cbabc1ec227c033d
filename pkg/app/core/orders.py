"""Rank-n commutative local orders presented by structure constants."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from sympy import Poly, discriminant, symbols

from .errors import InvalidOrder
from .local_arith import LocalRing, LocalScalar, capped_valuation
from .observability import logger

# Exhaustive factor search stays trivial up to this degree.
BATAS_DERAJAT_KLASIFIKASI = 4

_x = symbols("x")

Konstanta = Tuple[Tuple[Tuple[int, ...], ...], ...]


class ResidueAlgebraTag(str, Enum):
    SPLIT_ETALE = "split_etale"
    UNRAMIFIED_FIELD = "unramified_field"
    OTHER = "other"


@dataclass(frozen=True)
class OrderPresentation:
    """e_i * e_j = sum_l c[i][j][l] e_l on a basis with e_1 = 1 (indices are 0-based here)."""

    ring: LocalRing
    n: int
    constants: Konstanta
    defining_poly: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        mod = self.ring.modulus
        try:
            konstanta = tuple(
                tuple(tuple(int(v) % mod for v in self.constants[i][j]) for j in range(self.n))
                for i in range(self.n)
            )
        except (IndexError, TypeError, ValueError) as exc:
            raise InvalidOrder(f"structure constants do not form an n x n x n array: {exc}", {"n": self.n})
        if len(self.constants) != self.n or any(
            len(self.constants[i]) != self.n or any(len(self.constants[i][j]) != self.n for j in range(self.n))
            for i in range(self.n)
        ):
            raise InvalidOrder("structure constants do not form an n x n x n array", {"n": self.n})
        object.__setattr__(self, "constants", konstanta)
        if self.defining_poly is not None:
            object.__setattr__(self, "defining_poly", tuple(int(a) % mod for a in self.defining_poly))

    @property
    def is_monogenic(self) -> bool:
        return self.defining_poly is not None

    def c(self, i: int, j: int, l: int) -> int:
        return self.constants[i][j][l]

    def multiply(self, u: Sequence[int], v: Sequence[int]) -> Tuple[int, ...]:
        """Product of two elements given by coordinates on the basis."""
        mod = self.ring.modulus
        hasil = [0] * self.n
        for i, ui in enumerate(u):
            if ui % mod == 0:
                continue
            for j, vj in enumerate(v):
                if vj % mod == 0:
                    continue
                for l in range(self.n):
                    hasil[l] += ui * vj * self.constants[i][j][l]
        return tuple(x % mod for x in hasil)

    def to_lists(self) -> List[List[List[int]]]:
        return [[list(self.constants[i][j]) for j in range(self.n)] for i in range(self.n)]


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: Optional[str] = None
    indices: Optional[Tuple[int, ...]] = None
    message: str = ""

    def to_payload(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "violation": self.violation,
            "indices": list(self.indices) if self.indices else None,
            "message": self.message,
        }


@dataclass(frozen=True)
class ResidueAlgebraClass:
    tag: ResidueAlgebraTag
    certificate: Dict[str, Any] = field(default_factory=dict)
    precision_sensitive: bool = False
    note: str = ""

    def to_payload(self) -> Dict[str, Any]:
        return {
            "tag": self.tag.value,
            "certificate": self.certificate,
            "precision_sensitive": self.precision_sensitive,
            "note": self.note,
        }


def from_monic_poly(ring: LocalRing, coeffs: Sequence[Union[int, LocalScalar]]) -> OrderPresentation:
    """R[x]/(f) on the basis 1, x, ..., x^{n-1}, with f = x^n + a_{n-1}x^{n-1} + ... + a_0."""
    n = len(coeffs)
    if n < 2:
        raise InvalidOrder("a monogenic order needs degree n >= 2", {"n": n})
    mod = ring.modulus
    daftar_koef = [c.value if isinstance(c, LocalScalar) else int(c) % mod for c in coeffs]

    # x^m as coordinates for m = 0 .. 2n-2, reduced with x^n = -sum a_i x^i
    pangkat: List[List[int]] = []
    for m in range(n):
        pangkat.append([1 if t == m else 0 for t in range(n)])
    for _ in range(n, 2 * n - 1):
        sebelum = pangkat[-1]
        teratas = sebelum[n - 1]
        geser = [0] + sebelum[: n - 1]
        pangkat.append([(geser[t] - teratas * daftar_koef[t]) % mod for t in range(n)])

    konstanta = tuple(tuple(tuple(pangkat[i + j]) for j in range(n)) for i in range(n))
    return OrderPresentation(ring=ring, n=n, constants=konstanta, defining_poly=tuple(daftar_koef))


def from_structure_constants(ring: LocalRing, constants: Sequence[Sequence[Sequence[int]]]) -> OrderPresentation:
    return OrderPresentation(ring=ring, n=len(constants), constants=tuple(
        tuple(tuple(row) for row in plane) for plane in constants
    ))


def validate(order: OrderPresentation) -> ValidationReport:
    """Exhaustive check of the identity, commutativity and associativity identities."""
    n = order.n
    c = order.constants
    mod = order.ring.modulus

    for i in range(n):
        for l in range(n):
            delta = 1 if i == l else 0
            if c[0][i][l] != delta:
                return ValidationReport(
                    ok=False,
                    violation="identity",
                    indices=(1, i + 1, l + 1),
                    message=f"e_1 * e_{i + 1} has coordinate {c[0][i][l]} on e_{l + 1}, expected {delta}",
                )
            if c[i][0][l] != delta:
                return ValidationReport(
                    ok=False,
                    violation="identity",
                    indices=(i + 1, 1, l + 1),
                    message=f"e_{i + 1} * e_1 has coordinate {c[i][0][l]} on e_{l + 1}, expected {delta}",
                )

    for i in range(n):
        for j in range(i + 1, n):
            if c[i][j] != c[j][i]:
                return ValidationReport(
                    ok=False,
                    violation="commutativity",
                    indices=(i + 1, j + 1),
                    message=f"e_{i + 1} * e_{j + 1} != e_{j + 1} * e_{i + 1}",
                )

    for i in range(n):
        for j in range(n):
            for m in range(n):
                for r in range(n):
                    kiri = sum(c[i][j][l] * c[l][m][r] for l in range(n)) % mod
                    kanan = sum(c[j][m][l] * c[i][l][r] for l in range(n)) % mod
                    if kiri != kanan:
                        return ValidationReport(
                            ok=False,
                            violation="associativity",
                            indices=(i + 1, j + 1, m + 1),
                            message=(
                                f"(e_{i + 1} e_{j + 1}) e_{m + 1} and e_{i + 1} (e_{j + 1} e_{m + 1}) "
                                f"differ on e_{r + 1}"
                            ),
                        )

    return ValidationReport(ok=True)


def rescale_monic_poly(ring: LocalRing, coeffs: Sequence[int], u: int) -> Tuple[int, ...]:
    """Coefficients of u^n f(x/u), the defining polynomial of u*x."""
    n = len(coeffs)
    mod = ring.modulus
    return tuple((int(a) * pow(u, n - i, mod)) % mod for i, a in enumerate(coeffs))


def _nilai_poly_mod(coeffs: Sequence[int], r: int, q: int) -> int:
    hasil = 1
    for a in reversed(coeffs):
        hasil = (hasil * r + a) % q
    return hasil


def _faktorisasi_residu(coeffs: Sequence[int], q: int) -> List[Dict[str, Any]]:
    koef_tinggi_ke_rendah = [1] + [int(a) % q for a in reversed(coeffs)]
    _, daftar_faktor = Poly(koef_tinggi_ke_rendah, _x, modulus=q).factor_list()
    hasil = []
    for faktor, kelipatan in daftar_faktor:
        hasil.append(
            {
                "coeffs": [int(a) % q for a in faktor.all_coeffs()],
                "degree": int(faktor.degree()),
                "multiplicity": int(kelipatan),
            }
        )
    hasil.sort(key=lambda row: (row["degree"], row["coeffs"], row["multiplicity"]))
    return hasil


def _valuasi_diskriminan(ring: LocalRing, coeffs: Sequence[int]) -> int:
    koef_tinggi_ke_rendah = [1] + [int(a) for a in reversed(coeffs)]
    disk = int(discriminant(Poly(koef_tinggi_ke_rendah, _x)))
    return capped_valuation(disk, ring.q, ring.k)


def classify_residue_algebra(order: OrderPresentation) -> ResidueAlgebraClass:
    """Split etale, unramified field, or other, read off f mod q."""
    if not order.is_monogenic:
        return ResidueAlgebraClass(
            tag=ResidueAlgebraTag.OTHER,
            note="order is not monogenic; residue classification needs a defining polynomial",
        )
    if order.n > BATAS_DERAJAT_KLASIFIKASI:
        return ResidueAlgebraClass(
            tag=ResidueAlgebraTag.OTHER,
            note=f"degree {order.n} exceeds the classification bound {BATAS_DERAJAT_KLASIFIKASI}",
        )

    q = order.ring.q
    koef = order.defining_poly or ()
    akar = [r for r in range(q) if _nilai_poly_mod(koef, r, q) == 0]
    faktor = _faktorisasi_residu(koef, q)
    v_disk = _valuasi_diskriminan(order.ring, koef)
    sertifikat = {
        "residue_poly": [int(a) % q for a in koef] + [1],
        "roots": akar,
        "factors": faktor,
        "discriminant_valuation": v_disk,
    }

    if len(akar) == order.n:
        tag = ResidueAlgebraTag.SPLIT_ETALE
    elif order.n <= 3 and not akar:
        tag = ResidueAlgebraTag.UNRAMIFIED_FIELD
    elif len(faktor) == 1 and faktor[0]["multiplicity"] == 1 and faktor[0]["degree"] == order.n:
        tag = ResidueAlgebraTag.UNRAMIFIED_FIELD
    else:
        tag = ResidueAlgebraTag.OTHER

    sensitif = tag == ResidueAlgebraTag.OTHER and v_disk >= order.ring.k
    catatan = ""
    if sensitif:
        catatan = (
            f"discriminant vanishes modulo {q}^{order.ring.k}; the exact-ring class "
            "cannot be read at this precision"
        )
        logger.warning(
            "Precision-sensitive residue classification",
            extra={"q": q, "k": order.ring.k, "poly": list(koef)},
        )
    return ResidueAlgebraClass(tag=tag, certificate=sertifikat, precision_sensitive=sensitif, note=catatan)
