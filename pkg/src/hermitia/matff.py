"""Dense exact linear algebra over finite fields, plus the constructive
splitting of an invertible Hermitian matrix A into t(B) B^(q).

Matrices are small (4x4 up to ~21x21) and exact, so everything is plain
Gaussian elimination and division-free Laplace expansion; no floating point
anywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import gf
from .gf import Field


class MatError(ValueError):
    pass


class Mat:
    """Row-major matrix over a single Field; entries are packed ints."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data):
        self.field = field
        self.data = [list(r) for r in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(r) != self.cols for r in self.data):
            raise MatError("ragged rows")

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Mat":
        return cls(field, [[0] * cols for _ in range(rows)])

    @classmethod
    def diagonal(cls, field: Field, entries) -> "Mat":
        entries = list(entries)
        n = len(entries)
        m = cls.zeros(field, n, n)
        for i, e in enumerate(entries):
            m.data[i][i] = e
        return m

    def copy(self) -> "Mat":
        return Mat(self.field, self.data)

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.field is other.field
                and self.data == other.data)

    def __hash__(self):
        return hash((id(self.field), tuple(tuple(r) for r in self.data)))

    def __getitem__(self, rc):
        return self.data[rc[0]][rc[1]]

    def __repr__(self):
        body = "; ".join(" ".join(str(e) for e in r) for r in self.data)
        return f"Mat({self.field}, [{body}])"

    def key(self):
        return tuple(tuple(r) for r in self.data)

    # -- arithmetic ------------------------------------------------------------

    def mul(self, other: "Mat") -> "Mat":
        if self.field is not other.field:
            raise MatError("field mismatch")
        if self.cols != other.rows:
            raise MatError("shape mismatch")
        f = self.field
        fmul, fadd = f.mul, f.add
        bt = list(zip(*other.data))
        out = []
        for row in self.data:
            orow = []
            for col in bt:
                acc = 0
                for a, b in zip(row, col):
                    if a and b:
                        acc = fadd(acc, fmul(a, b))
                orow.append(acc)
            out.append(orow)
        return Mat(f, out)

    def __matmul__(self, other):
        return self.mul(other)

    def add(self, other: "Mat") -> "Mat":
        f = self.field
        return Mat(f, [[f.add(a, b) for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.data, other.data)])

    def sub(self, other: "Mat") -> "Mat":
        f = self.field
        return Mat(f, [[f.sub(a, b) for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.data, other.data)])

    def scalar(self, c: int) -> "Mat":
        f = self.field
        return Mat(f, [[f.mul(c, a) for a in r] for r in self.data])

    def transpose(self) -> "Mat":
        return Mat(self.field, list(zip(*self.data)))

    def entrywise_frobenius(self, e: int) -> "Mat":
        f = self.field
        return Mat(f, [[f.frobenius(a, e) for a in r] for r in self.data])

    def powq(self, q: int) -> "Mat":
        """Entrywise x -> x^q (the matrix A^(q))."""
        f = self.field
        return Mat(f, [[f.pow(a, q) for a in r] for r in self.data])

    # -- determinant, rank, inverse ----------------------------------------------

    def det(self) -> int:
        if self.rows != self.cols:
            raise MatError("det of non-square matrix")
        n = self.rows
        if n <= 4:
            return self._det_laplace(list(range(n)), list(range(n)))
        return self._det_eliminate()

    def _det_laplace(self, rows, cols) -> int:
        # division-free cofactor expansion, fine for n <= 4
        f = self.field
        if len(rows) == 1:
            return self.data[rows[0]][cols[0]]
        total = 0
        r0 = rows[0]
        sub_rows = rows[1:]
        for k, c in enumerate(cols):
            a = self.data[r0][c]
            if not a:
                continue
            minor = self._det_laplace(sub_rows, cols[:k] + cols[k + 1:])
            term = f.mul(a, minor)
            total = f.add(total, term if k % 2 == 0 else f.neg(term))
        return total

    def _det_eliminate(self) -> int:
        f = self.field
        a = [row[:] for row in self.data]
        n = self.rows
        det = 1
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col]), None)
            if piv is None:
                return 0
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = f.neg(det)
            det = f.mul(det, a[col][col])
            inv = f.inv(a[col][col])
            for r in range(col + 1, n):
                if a[r][col]:
                    factor = f.mul(a[r][col], inv)
                    a[r] = [f.sub(x, f.mul(factor, y)) for x, y in zip(a[r], a[col])]
        return det

    def rank(self) -> int:
        f = self.field
        a = [row[:] for row in self.data]
        rank = 0
        row = 0
        for col in range(self.cols):
            piv = next((r for r in range(row, self.rows) if a[r][col]), None)
            if piv is None:
                continue
            a[row], a[piv] = a[piv], a[row]
            inv = f.inv(a[row][col])
            a[row] = [f.mul(inv, x) for x in a[row]]
            for r in range(self.rows):
                if r != row and a[r][col]:
                    c = a[r][col]
                    a[r] = [f.sub(x, f.mul(c, y)) for x, y in zip(a[r], a[row])]
            rank += 1
            row += 1
            if row == self.rows:
                break
        return rank

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.det() != 0

    def inverse(self) -> "Mat":
        if self.rows != self.cols:
            raise MatError("inverse of non-square matrix")
        f = self.field
        n = self.rows
        a = [row[:] + [1 if i == j else 0 for j in range(n)]
             for i, row in enumerate(self.data)]
        row = 0
        for col in range(n):
            piv = next((r for r in range(row, n) if a[r][col]), None)
            if piv is None:
                raise MatError("matrix is singular")
            a[row], a[piv] = a[piv], a[row]
            inv = f.inv(a[row][col])
            a[row] = [f.mul(inv, x) for x in a[row]]
            for r in range(n):
                if r != row and a[r][col]:
                    c = a[r][col]
                    a[r] = [f.sub(x, f.mul(c, y)) for x, y in zip(a[r], a[row])]
            row += 1
        return Mat(f, [r[n:] for r in a])

    # -- field changes --------------------------------------------------------------

    def map_entries(self, emb: gf.Embedding) -> "Mat":
        return Mat(emb.dst, [[emb(x) for x in r] for r in self.data])

    def lift_to(self, field: Field) -> "Mat":
        if field is self.field:
            return self
        return self.map_entries(gf.make_embedding(self.field, field))

    # -- JSON ------------------------------------------------------------------------

    def to_json(self) -> dict:
        f = self.field
        return {"field": gf.field_to_json(f), "rows": self.rows, "cols": self.cols,
                "entries": [f.coeffs(x) for row in self.data for x in row]}

    @classmethod
    def from_json(cls, obj) -> "Mat":
        field = gf.field_from_json(obj["field"])
        rows, cols = obj["rows"], obj["cols"]
        flat = [field.element(c) for c in obj["entries"]]
        if len(flat) != rows * cols:
            raise MatError("entry count does not match shape")
        return cls(field, [flat[r * cols:(r + 1) * cols] for r in range(rows)])


def mat_from_ints(field: Field, rows) -> Mat:
    """Build a matrix from integer literals; negatives map through field.neg."""
    out = []
    for row in rows:
        orow = []
        for v in row:
            orow.append(field.neg((-v) % field.p) if v < 0 else v % field.p)
        out.append(orow)
    return Mat(field, out)


# ---------------------------------------------------------------------------
# twisted congruence and Hermitian structure
# ---------------------------------------------------------------------------

def twisted_gram(F: Mat, A: Mat, q: int) -> Mat:
    """t(F) A F^(q), the form matrix of the pullback along F."""
    if F.field is not A.field:
        raise MatError("field mismatch (lift first)")
    return F.transpose().mul(A).mul(F.powq(q))


def is_hermitian(A: Mat, q: int) -> bool:
    """Whether t(A) = A^(q).  A must be square over an extension of GF(q)."""
    if A.rows != A.cols:
        return False
    p, _ = gf.prime_power_split(q)
    if A.field.p != p:
        raise MatError("characteristic mismatch")
    f = A.field
    return all(A.data[j][i] == f.pow(A.data[i][j], q)
               for i in range(A.rows) for j in range(A.cols))


def _form_value(A: Mat, x, y, q: int) -> int:
    # h(x, y) = t(x) A y^(q)
    f = A.field
    acc = 0
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = A.data[i]
        s = 0
        for j, yj in enumerate(y):
            if yj and row[j]:
                s = f.add(s, f.mul(row[j], f.pow(yj, q)))
        acc = f.add(acc, f.mul(xi, s))
    return acc


def hermitian_decompose(A: Mat, q: int) -> Mat:
    """B over GF(q^2) with t(B) B^(q) = A, for invertible Hermitian A.

    Sesquilinear Gram-Schmidt: pick an anisotropic vector (basis vectors
    first, then e_i + c e_j in packed order; nondegeneracy guarantees one),
    split off its orthogonal complement, recurse to a diagonal form with
    entries in GF(q)*, then scale by norm-equation solutions.
    """
    n = A.rows
    f = A.field
    if not is_hermitian(A, q):
        raise MatError("matrix is not Hermitian for this q")
    if A.det() == 0:
        raise MatError("matrix is singular")

    basis = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    ortho = []
    while basis:
        pivot = None
        for v in basis:
            if _form_value(A, v, v, q):
                pivot = v
                break
        if pivot is None:
            for a_idx in range(len(basis)):
                for b_idx in range(a_idx + 1, len(basis)):
                    for c in range(1, f.order):
                        v = [f.add(x, f.mul(c, y))
                             for x, y in zip(basis[a_idx], basis[b_idx])]
                        if _form_value(A, v, v, q):
                            pivot = v
                            break
                    if pivot:
                        break
                if pivot:
                    break
        if pivot is None:
            raise MatError("no anisotropic vector found (degenerate form)")
        d = _form_value(A, pivot, pivot, q)
        ortho.append((pivot, d))
        d_inv = f.inv(d)
        new_basis = []
        for v in basis:
            c = f.mul(_form_value(A, v, pivot, q), d_inv)
            w = [f.sub(x, f.mul(c, y)) for x, y in zip(v, pivot)]
            if any(w):
                new_basis.append(w)
        # keep a maximal independent subset of the projected vectors
        basis = _independent_subset(f, new_basis, n - len(ortho))

    P = Mat(f, list(zip(*[v for v, _ in ortho])))  # columns are the new basis
    diag = [d for _, d in ortho]
    lam = [gf.solve_norm(f, d, q) for d in diag]
    B = Mat.diagonal(f, lam).mul(P.inverse())
    check = twisted_gram(B, Mat.identity(f, n), q)
    if check != A:
        raise MatError("internal: decomposition round trip failed")
    return B


def _independent_subset(f: Field, vectors, want: int):
    picked = []
    m = []
    for v in vectors:
        trial = m + [v]
        if Mat(f, trial).rank() == len(trial):
            picked.append(v)
            m = trial
            if len(picked) == want:
                break
    return picked


# ---------------------------------------------------------------------------
# seeded random matrices (test data)
# ---------------------------------------------------------------------------

def random_mat(field: Field, rows: int, cols: int, rng: random.Random) -> Mat:
    return Mat(field, [[rng.randrange(field.order) for _ in range(cols)]
                       for _ in range(rows)])


def random_invertible(field: Field, n: int, seed: int) -> Mat:
    rng = random.Random(seed)
    while True:
        m = random_mat(field, n, n, rng)
        if m.det() != 0:
            return m


def random_hermitian_invertible(q: int, n: int, seed: int) -> Mat:
    """t(C) C^(q) for a seeded random invertible C over GF(q^2); always
    Hermitian and invertible."""
    field = gf.gfq2(q)
    C = random_invertible(field, n, seed)
    A = twisted_gram(C, Mat.identity(field, n), q)
    assert is_hermitian(A, q)
    return A


# ---------------------------------------------------------------------------
# surfaces
# ---------------------------------------------------------------------------

@dataclass
class SurfaceSpec:
    """A degree-(q+1) surface x -> t(x) A x^(q) = 0 given by its 4x4 Gram
    matrix over GF(q^2).  Smoothness and the Hermitian property are derived,
    never stored."""
    q: int
    gram: Mat

    def __post_init__(self):
        if self.gram.rows != 4 or self.gram.cols != 4:
            raise MatError("surface Gram matrix must be 4x4")

    @property
    def smooth(self) -> bool:
        return self.gram.det() != 0

    @property
    def hermitian(self) -> bool:
        return is_hermitian(self.gram, self.q)

    def to_json(self) -> dict:
        return {"q": self.q, "gram": self.gram.to_json()}

    @classmethod
    def from_json(cls, obj) -> "SurfaceSpec":
        return cls(obj["q"], Mat.from_json(obj["gram"]))


def fermat_surface(q: int) -> SurfaceSpec:
    """The surface with identity Gram matrix."""
    return SurfaceSpec(q, Mat.identity(gf.gfq2(q), 4))
