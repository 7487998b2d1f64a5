"""Bit-exact linear algebra over GF(2) and extractor matrix families.

Bit vectors are tuples of 0/1 ints in display order: the string "101"
parses to (1, 0, 1) and component i of a vector is ``bits[i]``.  Matrices
are dense numpy uint8 arrays with entries in {0, 1}; all arithmetic is
carried out exactly (XOR / mod-2), never in floating point.

A matrix family is a set A_1..A_m of n x n GF(2) matrices whose nonzero
XOR-combinations A_s = sum_i s_i A_i all have rank >= n - r.  The
rank-deficiency parameter r stored on a family is always the exact
maximum deficiency, verified by exhaustive enumeration over s.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

Bits = tuple[int, ...]

MAX_DIM = 64            # dense GF(2) algebra is desk scale only
MAX_ENUM_M = 20         # 2^m - 1 selector enumeration guard


def parse_bits(s: str) -> Bits:
    """Parse a 0/1 string such as "101" into a bit tuple."""
    if not s or any(c not in "01" for c in s):
        raise ValueError(f"not a 0/1 string: {s!r}")
    return tuple(int(c) for c in s)


def format_bits(bits: Bits) -> str:
    return "".join(str(b) for b in bits)


def index_to_bits(index: int, n: int) -> Bits:
    """Inverse of bits_to_index: big-endian binary, left-padded to n bits."""
    if not 0 <= index < (1 << n):
        raise ValueError(f"index {index} out of range for {n} bits")
    return tuple((index >> (n - 1 - i)) & 1 for i in range(n))


def bits_to_index(bits: Bits) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | (b & 1)
    return out


def all_bit_vectors(n: int):
    """All n-bit vectors in ascending index order."""
    return [index_to_bits(i, n) for i in range(1 << n)]


def as_gf2_matrix(entries) -> np.ndarray:
    """Coerce to a validated GF(2) matrix (2-D uint8 array of 0/1)."""
    m = np.asarray(entries, dtype=np.uint8)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM or m.shape[1] > MAX_DIM:
        raise ValueError(f"matrix larger than {MAX_DIM}x{MAX_DIM} not supported")
    if np.any(m > 1):
        raise ValueError("matrix entries must be in {0, 1}")
    return m


def _pack_rows(m: np.ndarray) -> list[int]:
    # Row j packed into an int with bit k = entry (j, k).
    return [int(sum(int(b) << k for k, b in enumerate(row))) for row in m]


def gf2_rank(m) -> int:
    """GF(2) rank by Gaussian elimination on bit-packed rows."""
    mat = as_gf2_matrix(m)
    pivots: dict[int, int] = {}
    rank = 0
    for packed in _pack_rows(mat):
        cur = packed
        while cur:
            lead = cur.bit_length() - 1
            if lead in pivots:
                cur ^= pivots[lead]
            else:
                pivots[lead] = cur
                rank += 1
                break
    return rank


def gf2_matvec(m, x: Bits) -> Bits:
    """Matrix-vector product over GF(2): (M x) mod 2."""
    mat = as_gf2_matrix(m)
    if mat.shape[1] != len(x):
        raise ValueError(f"dimension mismatch: {mat.shape[1]} columns, {len(x)}-bit vector")
    xs = np.asarray(x, dtype=np.uint8)
    return tuple(int(v) for v in (mat.astype(np.int64) @ xs) & 1)


def gf2_matmul(a, b) -> np.ndarray:
    am = as_gf2_matrix(a)
    bm = as_gf2_matrix(b)
    if am.shape[1] != bm.shape[0]:
        raise ValueError("dimension mismatch in GF(2) matrix product")
    return ((am.astype(np.int64) @ bm.astype(np.int64)) & 1).astype(np.uint8)


@dataclass(frozen=True)
class MatrixFamily:
    """A family A_1..A_m of n x n GF(2) matrices with exact deficiency r.

    ``poly`` is the defining polynomial (coefficient bitmask, bit i =
    coefficient of x^i) for families built from field multiplication,
    None otherwise.
    """

    n: int
    m: int
    matrices: tuple[np.ndarray, ...] = field(repr=False)
    r: int
    poly: int | None = None

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("need n >= 1 and m >= 1")
        if self.n <= 30 and self.m > (1 << self.n) - 1:
            raise ValueError(f"m={self.m} too large: at most 2^n - 1 distinct nonzero combinations")
        if len(self.matrices) != self.m:
            raise ValueError("family must contain exactly m matrices")
        for a in self.matrices:
            if a.shape != (self.n, self.n):
                raise ValueError(f"every family matrix must be {self.n}x{self.n}")
        if not 0 <= self.r < self.n:
            raise ValueError("rank deficiency r must satisfy 0 <= r < n")


def a_s(family: MatrixFamily, s: Bits) -> np.ndarray:
    """XOR-combination A_s = sum_i s_i A_i of the family matrices."""
    if len(s) != family.m:
        raise ValueError(f"selector length {len(s)} != m={family.m}")
    out = np.zeros((family.n, family.n), dtype=np.uint8)
    for bit, mat in zip(s, family.matrices):
        if bit:
            out ^= mat
    return out


def family_rank_parameter(family: MatrixFamily) -> int:
    """Exact max over s != 0 of n - rank(A_s), by exhaustive enumeration."""
    if family.m > MAX_ENUM_M:
        raise ValueError(f"m={family.m} too large for exhaustive selector enumeration")
    worst = 0
    for idx in range(1, 1 << family.m):
        s = index_to_bits(idx, family.m)
        mat = a_s(family, s)
        if not mat.any():
            raise ValueError(f"degenerate family: A_s is the zero matrix for s={format_bits(s)}")
        worst = max(worst, family.n - gf2_rank(mat))
    return worst


def _verified_family(n: int, m: int, matrices: list[np.ndarray], poly: int | None) -> MatrixFamily:
    candidate = MatrixFamily(n=n, m=m, matrices=tuple(matrices), r=0 if n == 1 else n - 1, poly=poly)
    # r on the candidate is a placeholder; compute the exact value now.
    r = family_rank_parameter(candidate)
    return MatrixFamily(n=n, m=m, matrices=tuple(matrices), r=r, poly=poly)


# ---------------------------------------------------------------------------
# GF(2)[x] polynomial helpers (coefficient bitmasks, bit i = coeff of x^i)
# ---------------------------------------------------------------------------

def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, mod: int) -> int:
    d = poly_degree(mod)
    while poly_degree(a) >= d and a:
        a ^= mod << (poly_degree(a) - d)
    return a


def poly_mulmod(a: int, b: int, mod: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        a = poly_mod(a, mod)
    return poly_mod(out, mod)


def poly_is_irreducible(p: int) -> bool:
    """Brute-force irreducibility over GF(2): trial division up to degree n/2."""
    n = poly_degree(p)
    if n < 1:
        return False
    if n == 1:
        return True
    if not (p & 1):                       # divisible by x
        return False
    for d in range(1, n // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if poly_mod(p, q) == 0:
                return False
    return True


@functools.lru_cache(maxsize=None)
def default_polynomial(n: int) -> int:
    """Smallest (by integer value) irreducible polynomial of degree n."""
    if not 1 <= n <= 16:
        raise ValueError("built-in polynomial table covers degrees 1..16")
    for p in range(1 << n | 1, 1 << (n + 1), 2):
        if poly_is_irreducible(p):
            return p
    raise RuntimeError(f"no irreducible polynomial of degree {n} found")  # pragma: no cover


def format_poly(p: int) -> str:
    """Coefficient string, highest degree first ("1011" = x^3 + x + 1)."""
    return format(p, "b")


def parse_poly(s: str) -> int:
    if not s or any(c not in "01" for c in s) or s[0] != "1":
        raise ValueError(f"not a valid polynomial coefficient string: {s!r}")
    return int(s, 2)


# ---------------------------------------------------------------------------
# Family builders
# ---------------------------------------------------------------------------

def _mult_matrix(elem: int, poly: int, n: int) -> np.ndarray:
    # Column j = coordinates of elem * x^j in the basis (1, x, .., x^{n-1}).
    cols = []
    for j in range(n):
        img = poly_mulmod(elem, 1 << j, poly)
        cols.append([(img >> row) & 1 for row in range(n)])
    return np.array(cols, dtype=np.uint8).T


def build_field_family(n: int, m: int, poly: int | None = None) -> MatrixFamily:
    """Family A_i = multiplication by x^{i-1} in GF(2^n).

    Every nonzero combination A_s is multiplication by a nonzero field
    element, hence invertible, so r = 0; this is re-verified exhaustively.
    """
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got n={n}, m={m}")
    if poly is None:
        poly = default_polynomial(n)
    if poly_degree(poly) != n:
        raise ValueError(f"polynomial degree {poly_degree(poly)} != n={n}")
    if not poly_is_irreducible(poly):
        raise ValueError(f"polynomial {format_poly(poly)} is reducible")
    matrices = [_mult_matrix(1 << (i - 1), poly, n) for i in range(1, m + 1)]
    fam = _verified_family(n, m, matrices, poly)
    if fam.r != 0:
        raise RuntimeError("field family failed invertibility verification")  # pragma: no cover
    return fam


def build_shift_family(n: int, m: int) -> MatrixFamily:
    """Family A_i = (i-1)-th power of the shift matrix; exercises r = m - 1."""
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got n={n}, m={m}")
    shift = np.zeros((n, n), dtype=np.uint8)
    for i in range(n - 1):
        shift[i + 1, i] = 1
    matrices = []
    cur = np.eye(n, dtype=np.uint8)
    for _ in range(m):
        matrices.append(cur)
        cur = gf2_matmul(shift, cur)
    fam = _verified_family(n, m, matrices, None)
    if fam.r > m - 1:
        raise RuntimeError("shift family deficiency exceeded m - 1")  # pragma: no cover
    return fam


def transpose_family(family: MatrixFamily) -> MatrixFamily:
    """Family of transposed matrices; r is preserved since rank(A) = rank(A^T)."""
    mats = tuple(np.ascontiguousarray(a.T) for a in family.matrices)
    return MatrixFamily(n=family.n, m=family.m, matrices=mats, r=family.r, poly=None)


# ---------------------------------------------------------------------------
# Textual family format: header "n m r poly", then one matrix per block
# (rows as 0/1 strings), blocks separated by blank lines.
# ---------------------------------------------------------------------------

def dump_family(family: MatrixFamily) -> str:
    poly = format_poly(family.poly) if family.poly is not None else "-"
    lines = [f"{family.n} {family.m} {family.r} {poly}"]
    for mat in family.matrices:
        lines.append("")
        lines.extend("".join(str(int(v)) for v in row) for row in mat)
    return "\n".join(lines) + "\n"


def load_family(text: str) -> MatrixFamily:
    lines = [ln.strip() for ln in text.splitlines()]
    body = [ln for ln in lines if ln]
    if not body:
        raise ValueError("empty family file")
    header = body[0].split()
    if len(header) != 4:
        raise ValueError(f"bad family header: {body[0]!r}")
    n, m, r = (int(v) for v in header[:3])
    poly = None if header[3] == "-" else parse_poly(header[3])
    rows = body[1:]
    if len(rows) != m * n:
        raise ValueError(f"expected {m * n} matrix rows, found {len(rows)}")
    matrices = []
    for i in range(m):
        block = rows[i * n : (i + 1) * n]
        matrices.append(as_gf2_matrix([parse_bits(row) for row in block]))
    fam = MatrixFamily(n=n, m=m, matrices=tuple(matrices), r=r, poly=poly)
    actual = family_rank_parameter(fam)
    if actual != r:
        raise ValueError(f"declared r={r} but exhaustive check gives r={actual}")
    return fam


def save_family(family: MatrixFamily, path) -> None:
    with open(path, "w") as fh:
        fh.write(dump_family(family))


def read_family(path) -> MatrixFamily:
    with open(path) as fh:
        return load_family(fh.read())
