"""Exact arithmetic in Z/q^k and in square matrices over it.

Z/q^k stands in for the completed local ring R_p at finite precision; the
uniformizer is q itself. Every value carries its ring, and mixing rings is an
error rather than a silent truncation.
"""

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from sympy import GF, isprime
from sympy.polys.matrices import DomainMatrix

from .config import SizeGuards, default_guards
from .errors import (
    DimensionMismatch,
    InputError,
    NonInvertibleConjugator,
    NonUnitInverse,
    RingMismatch,
    SizeGuardExceeded,
)

Baris = Tuple[int, ...]
Entri = Tuple[Baris, ...]

# Cofactor expansion up to this size, elimination above it.
BATAS_KOFAKTOR = 4


def capped_valuation(value: int, q: int, k: int) -> int:
    """q-adic valuation of an integer residue, capped at k (so valuation(0) = k)."""
    nilai = value % (q**k)
    if nilai == 0:
        return k
    hasil = 0
    while nilai % q == 0 and hasil < k:
        nilai //= q
        hasil += 1
    return hasil


@dataclass(frozen=True)
class LocalRing:
    q: int
    k: int = 1

    def __post_init__(self):
        if not isinstance(self.q, int) or not isprime(self.q):
            raise InputError(f"q must be a prime integer, got {self.q!r}", {"q": self.q})
        if not isinstance(self.k, int) or self.k < 1:
            raise InputError(f"precision k must be a positive integer, got {self.k!r}", {"k": self.k})

    @property
    def modulus(self) -> int:
        return self.q**self.k

    def scalar(self, value: int) -> "LocalScalar":
        return LocalScalar(self, value)

    def matrix(self, rows: Sequence[Sequence[Union[int, "LocalScalar"]]]) -> "LocalMatrix":
        return LocalMatrix.from_rows(self, rows)

    def identity(self, n: int) -> "LocalMatrix":
        return LocalMatrix(self, _identitas(n))


@dataclass(frozen=True)
class LocalScalar:
    ring: LocalRing
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.ring.modulus)

    def _nilai_lain(self, other) -> int:
        if isinstance(other, LocalScalar):
            if other.ring != self.ring:
                raise RingMismatch(
                    "scalars live in different rings",
                    {"left": [self.ring.q, self.ring.k], "right": [other.ring.q, other.ring.k]},
                )
            return other.value
        if isinstance(other, int):
            return other
        raise TypeError(f"unsupported operand {type(other).__name__}")

    def __add__(self, other) -> "LocalScalar":
        return LocalScalar(self.ring, self.value + self._nilai_lain(other))

    __radd__ = __add__

    def __sub__(self, other) -> "LocalScalar":
        return LocalScalar(self.ring, self.value - self._nilai_lain(other))

    def __rsub__(self, other) -> "LocalScalar":
        return LocalScalar(self.ring, self._nilai_lain(other) - self.value)

    def __mul__(self, other) -> "LocalScalar":
        return LocalScalar(self.ring, self.value * self._nilai_lain(other))

    __rmul__ = __mul__

    def __neg__(self) -> "LocalScalar":
        return LocalScalar(self.ring, -self.value)

    def __int__(self) -> int:
        return self.value

    def valuation(self) -> int:
        return capped_valuation(self.value, self.ring.q, self.ring.k)

    def is_unit(self) -> bool:
        return self.value % self.ring.q != 0

    def is_zero(self) -> bool:
        return self.value == 0

    def inverse(self) -> "LocalScalar":
        if not self.is_unit():
            raise NonUnitInverse(
                f"{self.value} is not a unit modulo {self.ring.modulus}",
                {"value": self.value, "q": self.ring.q, "k": self.ring.k},
            )
        return LocalScalar(self.ring, pow(self.value, -1, self.ring.modulus))

    def residue(self) -> int:
        return self.value % self.ring.q


@dataclass(frozen=True)
class ResidueMatrix:
    q: int
    entries: Entri

    def __post_init__(self):
        baris = tuple(tuple(int(x) % self.q for x in row) for row in self.entries)
        _cek_persegi(baris)
        object.__setattr__(self, "entries", baris)

    @property
    def n(self) -> int:
        return len(self.entries)

    def flatten(self) -> Baris:
        return tuple(x for row in self.entries for x in row)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.flatten())

    def to_local(self) -> "LocalMatrix":
        return LocalMatrix(LocalRing(self.q, 1), self.entries)

    def det(self) -> int:
        return _det(self.entries, self.q, 1)

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class LocalMatrix:
    ring: LocalRing
    entries: Entri

    def __post_init__(self):
        mod = self.ring.modulus
        baris = tuple(tuple(int(x) % mod for x in row) for row in self.entries)
        _cek_persegi(baris)
        object.__setattr__(self, "entries", baris)

    @classmethod
    def from_rows(cls, ring: LocalRing, rows: Sequence[Sequence[Union[int, LocalScalar]]]) -> "LocalMatrix":
        daftar_baris = []
        for row in rows:
            baris = []
            for x in row:
                if isinstance(x, LocalScalar):
                    if x.ring != ring:
                        raise RingMismatch("matrix entry from a different ring", {"q": x.ring.q, "k": x.ring.k})
                    baris.append(x.value)
                else:
                    baris.append(int(x))
            daftar_baris.append(tuple(baris))
        return cls(ring, tuple(daftar_baris))

    @classmethod
    def from_columns(cls, ring: LocalRing, columns: Sequence[Sequence[int]]) -> "LocalMatrix":
        n = len(columns)
        return cls(ring, tuple(tuple(columns[j][i] for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> LocalScalar:
        return LocalScalar(self.ring, self.entries[i][j])

    def column(self, j: int) -> Baris:
        return tuple(row[j] for row in self.entries)

    def flatten(self) -> Baris:
        return tuple(x for row in self.entries for x in row)

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.entries]

    def __matmul__(self, other: "LocalMatrix") -> "LocalMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "LocalMatrix") -> "LocalMatrix":
        _cek_kompatibel(self, other)
        return LocalMatrix(
            self.ring,
            tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)),
        )

    def scale(self, c: Union[int, LocalScalar]) -> "LocalMatrix":
        faktor = c.value if isinstance(c, LocalScalar) else int(c)
        return LocalMatrix(self.ring, tuple(tuple(faktor * x for x in row) for row in self.entries))

    def apply(self, vector: Sequence[int]) -> Baris:
        if len(vector) != self.n:
            raise DimensionMismatch("vector length does not match matrix size", {"n": self.n, "len": len(vector)})
        mod = self.ring.modulus
        return tuple(sum(a * int(v) for a, v in zip(row, vector)) % mod for row in self.entries)

    def det(self) -> LocalScalar:
        return mat_det(self)

    def is_invertible(self) -> bool:
        return self.det().is_unit()

    def inverse(self) -> "LocalMatrix":
        return mat_inverse(self)

    def residue(self) -> ResidueMatrix:
        return residue(self)


def _identitas(n: int) -> Entri:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _cek_persegi(baris: Entri) -> None:
    n = len(baris)
    if n == 0 or any(len(row) != n for row in baris):
        raise DimensionMismatch("matrix must be square and non-empty", {"shape": [len(row) for row in baris]})


def _cek_kompatibel(a: LocalMatrix, b: LocalMatrix) -> None:
    if a.ring != b.ring:
        raise RingMismatch(
            "matrices live over different rings",
            {"left": [a.ring.q, a.ring.k], "right": [b.ring.q, b.ring.k]},
        )
    if a.n != b.n:
        raise DimensionMismatch("matrix sizes differ", {"left": a.n, "right": b.n})


def _kali(a: Entri, b: Entri, mod: int) -> Entri:
    n = len(a)
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(n)) % mod for j in range(n)) for i in range(n))


def _det_kofaktor(a: Entri, mod: int) -> int:
    n = len(a)
    if n == 1:
        return a[0][0] % mod
    if n == 2:
        return (a[0][0] * a[1][1] - a[0][1] * a[1][0]) % mod
    hasil = 0
    for j in range(n):
        if a[0][j] == 0:
            continue
        minor = tuple(row[:j] + row[j + 1:] for row in a[1:])
        tanda = -1 if j % 2 else 1
        hasil += tanda * a[0][j] * _det_kofaktor(minor, mod)
    return hasil % mod


def _det_eliminasi(a: Entri, q: int, k: int) -> int:
    # Pivot on a unit; when a column has none, pull the common power of q
    # out of the trailing column (det is linear in it) and continue.
    mod = q**k
    kerja = [list(row) for row in a]
    n = len(kerja)
    hasil = 1
    for j in range(n):
        valuasi = [(capped_valuation(kerja[i][j], q, k), i) for i in range(j, n)]
        v_min, pilih = min(valuasi)
        if v_min >= k:
            return 0
        if v_min > 0:
            faktor = q**v_min
            hasil = (hasil * faktor) % mod
            for i in range(j, n):
                kerja[i][j] //= faktor
            pilih = next(i for i in range(j, n) if kerja[i][j] % q != 0)
        if pilih != j:
            kerja[j], kerja[pilih] = kerja[pilih], kerja[j]
            hasil = -hasil
        pivot = kerja[j][j]
        invers = pow(pivot, -1, mod)
        for i in range(j + 1, n):
            if kerja[i][j] % mod == 0:
                continue
            f = (kerja[i][j] * invers) % mod
            kerja[i] = [(x - f * y) % mod for x, y in zip(kerja[i], kerja[j])]
        hasil = (hasil * pivot) % mod
    return hasil % mod


def _det(a: Entri, q: int, k: int) -> int:
    if len(a) <= BATAS_KOFAKTOR:
        return _det_kofaktor(a, q**k)
    return _det_eliminasi(a, q, k)


def mat_mul(a: LocalMatrix, b: LocalMatrix) -> LocalMatrix:
    _cek_kompatibel(a, b)
    return LocalMatrix(a.ring, _kali(a.entries, b.entries, a.ring.modulus))


def mat_det(a: LocalMatrix) -> LocalScalar:
    return LocalScalar(a.ring, _det(a.entries, a.ring.q, a.ring.k))


def mat_inverse(a: LocalMatrix) -> LocalMatrix:
    """Adjugate times the inverse of a unit determinant."""
    d = mat_det(a)
    if not d.is_unit():
        raise NonInvertibleConjugator(
            "matrix determinant is not a unit",
            {"det": d.value, "valuation": d.valuation(), "matrix": a.to_lists()},
        )
    n = a.n
    mod = a.ring.modulus
    invers_det = d.inverse().value
    if n == 1:
        return LocalMatrix(a.ring, ((invers_det,),))
    hasil = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(row[:j] + row[j + 1:] for r, row in enumerate(a.entries) if r != i)
            kofaktor = _det(minor, a.ring.q, a.ring.k)
            if (i + j) % 2:
                kofaktor = -kofaktor
            hasil[j][i] = (kofaktor * invers_det) % mod
    return LocalMatrix(a.ring, tuple(tuple(row) for row in hasil))


def conjugate(u: Union[LocalMatrix, ResidueMatrix], m: Union[LocalMatrix, ResidueMatrix]):
    """U^{-1} M U. Residue matrices are conjugated over the residue field."""
    if isinstance(u, ResidueMatrix) and isinstance(m, ResidueMatrix):
        hasil = conjugate(u.to_local(), m.to_local())
        return ResidueMatrix(u.q, hasil.entries)
    _cek_kompatibel(u, m)
    if not u.is_invertible():
        raise NonInvertibleConjugator("conjugator is not invertible", {"det": u.det().value})
    return mat_mul(mat_mul(mat_inverse(u), m), u)


def residue(m: LocalMatrix) -> ResidueMatrix:
    return ResidueMatrix(m.ring.q, m.entries)


def residue_rank(matrices: Sequence[ResidueMatrix]) -> int:
    """Rank over F_q of the matrix whose rows are the flattened inputs."""
    if not matrices:
        return 0
    q = matrices[0].q
    return rank_mod_prime([m.flatten() for m in matrices], q)


def reduced_norm_preimage(f: LocalScalar, n: int) -> LocalMatrix:
    """diag(f, 1, ..., 1), whose determinant is f."""
    if n < 1:
        raise DimensionMismatch("dimension must be positive", {"n": n})
    baris = [[0] * n for _ in range(n)]
    baris[0][0] = f.value
    for i in range(1, n):
        baris[i][i] = 1
    return LocalMatrix(f.ring, tuple(tuple(row) for row in baris))


def char_poly(a: LocalMatrix) -> Tuple[LocalScalar, ...]:
    """Coefficients a_0..a_{n-1} of det(xI - A), computed without division."""
    n = a.n
    koefisien = [0] * n
    for r in range(1, n + 1):
        jumlah_minor = 0
        for indeks in combinations(range(n), r):
            minor = tuple(tuple(a.entries[i][j] for j in indeks) for i in indeks)
            jumlah_minor += _det(minor, a.ring.q, a.ring.k)
        koefisien[n - r] = (-1) ** r * jumlah_minor
    return tuple(LocalScalar(a.ring, c) for c in koefisien)


def _rref_mod_prime(rows: Sequence[Sequence[int]], q: int) -> Tuple[List[List[int]], List[int]]:
    if not rows or not rows[0]:
        return [list(row) for row in rows], []
    bentuk, pivot_kolom = DomainMatrix.from_list([[x % q for x in row] for row in rows], GF(q)).rref()
    # GF(q) elements convert to symmetric residues.
    kerja = [[int(x) % q for x in row] for row in bentuk.to_list()]
    return kerja, list(pivot_kolom)


def rank_mod_prime(rows: Sequence[Sequence[int]], q: int) -> int:
    return len(_rref_mod_prime(rows, q)[1])


def kernel_vector_mod_prime(columns: Sequence[Sequence[int]], q: int) -> Optional[Baris]:
    """A nonzero x with sum x_i * columns[i] = 0 over F_q, or None.

    The first free column gets coefficient 1 and entries are reported in [0, q).
    """
    if not columns:
        return None
    panjang = len(columns[0])
    baris = [[columns[j][i] for j in range(len(columns))] for i in range(panjang)]
    rref, pivot_kolom = _rref_mod_prime(baris, q)
    bebas = next((c for c in range(len(columns)) if c not in pivot_kolom), None)
    if bebas is None:
        return None
    hasil = [0] * len(columns)
    hasil[bebas] = 1
    for indeks, p in enumerate(pivot_kolom):
        hasil[p] = (-rref[indeks][bebas]) % q
    return tuple(hasil)


def _cek_sweep(ring: LocalRing, n: int, guards: SizeGuards) -> None:
    ukuran = ring.modulus ** (n * n)
    if ukuran > guards.max_sweep:
        raise SizeGuardExceeded(
            f"sweep over {ukuran} matrices exceeds max_sweep={guards.max_sweep}",
            {"q": ring.q, "k": ring.k, "n": n, "candidates": ukuran, "max_sweep": guards.max_sweep},
        )


def iter_matrices(ring: LocalRing, n: int, guards: SizeGuards = default_guards) -> Iterator[LocalMatrix]:
    """All n x n matrices over Z/q^k in lexicographic order of their flattened entries."""
    _cek_sweep(ring, n, guards)
    for flat in product(range(ring.modulus), repeat=n * n):
        yield LocalMatrix(ring, tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n)))


def general_linear_group(ring: LocalRing, n: int, guards: SizeGuards = default_guards) -> List[LocalMatrix]:
    return [m for m in iter_matrices(ring, n, guards) if m.is_invertible()]
