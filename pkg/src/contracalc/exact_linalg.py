"""Dense exact matrices, field linear algebra and Smith normal form.

A ``Mat`` carries the ring its entries live in: a ``Field``, ``ZZ``, a
``PolynomialRing`` or an ``AdicQuotientRing``.  Entries are combined with
the Python operators and passed through ``ring.reduce`` (which is ``% p``
for prime fields and the identity elsewhere), so the inner loops stay cheap.

Kernels, images and cokernels are only defined over fields; Smith normal
form is defined over the Euclidean-type rings.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, InvalidArgument
from .scalars import Field


class Mat:
    __slots__ = ("ring", "rows", "nrows", "ncols")

    def __init__(self, ring, rows, ncols: int | None = None):
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows)
        if ncols is None:
            if not rows:
                raise InvalidArgument("empty matrix needs an explicit column count")
            ncols = len(rows[0])
        self.ncols = ncols

    # -- construction -------------------------------------------------------

    @classmethod
    def of(cls, ring, rows, ncols: int | None = None) -> "Mat":
        """Build a matrix coercing every entry into ``ring``."""
        rows = [[ring.reduce(ring(x)) for x in r] for r in rows]
        if ncols is None and rows:
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged matrix")
        return cls(ring, rows, ncols if ncols is not None else 0)

    @classmethod
    def zeros(cls, ring, r: int, c: int) -> "Mat":
        z = ring.zero
        return cls(ring, [[z] * c for _ in range(r)], c)

    @classmethod
    def identity(cls, ring, n: int) -> "Mat":
        M = cls.zeros(ring, n, n)
        for i in range(n):
            M.rows[i][i] = ring.one
        return M

    @classmethod
    def from_cols(cls, ring, cols, nrows: int) -> "Mat":
        cols = list(cols)
        rows = [[c[i] for c in cols] for i in range(nrows)]
        return cls(ring, rows, len(cols))

    @classmethod
    def diag(cls, ring, entries) -> "Mat":
        entries = list(entries)
        M = cls.zeros(ring, len(entries), len(entries))
        for i, a in enumerate(entries):
            M.rows[i][i] = a
        return M

    @classmethod
    def sparse(cls, ring, r: int, c: int, triples) -> "Mat":
        M = cls.zeros(ring, r, c)
        for i, j, a in triples:
            if not (0 <= i < r and 0 <= j < c):
                raise DimensionMismatch(f"entry ({i},{j}) outside a {r}x{c} matrix")
            M.rows[i][j] = ring.reduce(ring(a))
        return M

    def copy(self) -> "Mat":
        return Mat(self.ring, [r[:] for r in self.rows], self.ncols)

    # -- access -------------------------------------------------------------

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def cols(self) -> list:
        return [self.col(j) for j in range(self.ncols)]

    def submatrix(self, rows=None, cols=None) -> "Mat":
        rows = range(self.nrows) if rows is None else list(rows)
        cols = range(self.ncols) if cols is None else list(cols)
        return Mat(self.ring, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def row_block(self, b: int, size: int) -> "Mat":
        return self.submatrix(range(b * size, (b + 1) * size), None)

    def col_block(self, b: int, size: int) -> "Mat":
        return self.submatrix(None, range(b * size, (b + 1) * size))

    def entries(self):
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                yield i, j, a

    def nonzero_entries(self):
        return [(i, j, a) for i, j, a in self.entries() if a != 0]

    def first_nonzero(self):
        for i, j, a in self.entries():
            if a != 0:
                return i, j, a
        return None

    # -- arithmetic ---------------------------------------------------------

    def _check_same(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        red = self.ring.reduce
        return Mat(self.ring, [[red(a + b) for a, b in zip(r, s)]
                               for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        red = self.ring.reduce
        return Mat(self.ring, [[red(a - b) for a, b in zip(r, s)]
                               for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> "Mat":
        red = self.ring.reduce
        return Mat(self.ring, [[red(-a) for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Mat":
        red = self.ring.reduce
        return Mat(self.ring, [[red(c * a) for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        R = self.ring
        red = R.reduce
        n = other.ncols
        B = other.rows
        zero = R.zero
        out = []
        for row in self.rows:
            acc = [zero] * n
            for k, a in enumerate(row):
                if a != 0:
                    acc = [x + a * y for x, y in zip(acc, B[k])]
            out.append([red(x) for x in acc])
        return Mat(R, out, n)

    def apply(self, v: list) -> list:
        if len(v) != self.ncols:
            raise DimensionMismatch("vector length")
        red = self.ring.reduce
        zero = self.ring.zero
        out = []
        for row in self.rows:
            s = zero
            for a, b in zip(row, v):
                if a != 0 and b != 0:
                    s = s + a * b
            out.append(red(s))
        return out

    @property
    def T(self) -> "Mat":
        if self.nrows == 0:
            return Mat(self.ring, [[] for _ in range(self.ncols)], 0)
        return Mat(self.ring, [list(c) for c in zip(*self.rows)], self.nrows)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, tuple(tuple(r) for r in self.rows)))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def __repr__(self):
        body = "; ".join(" ".join(str(a) for a in r) for r in self.rows)
        return f"Mat<{self.ring!r} {self.nrows}x{self.ncols}>[{body}]"

    def to_json(self) -> dict:
        return {"rows": self.nrows, "cols": self.ncols,
                "entries": [[i, j, str(a)] for i, j, a in self.nonzero_entries()]}

    # -- field linear algebra (methods delegate to module functions) ---------

    def rank(self) -> int:
        return rank(self)

    def kernel(self) -> "Mat":
        return kernel(self)


def hstack(*mats: Mat) -> Mat:
    mats = [m for m in mats]
    ring = mats[0].ring
    n = mats[0].nrows
    if any(m.nrows != n for m in mats):
        raise DimensionMismatch("hstack needs equal row counts")
    rows = [sum((m.rows[i] for m in mats), []) for i in range(n)]
    return Mat(ring, rows, sum(m.ncols for m in mats))


def vstack(*mats: Mat) -> Mat:
    ring = mats[0].ring
    c = mats[0].ncols
    if any(m.ncols != c for m in mats):
        raise DimensionMismatch("vstack needs equal column counts")
    return Mat(ring, [r[:] for m in mats for r in m.rows], c)


def block_diag(*mats: Mat) -> Mat:
    ring = mats[0].ring
    R = sum(m.nrows for m in mats)
    C = sum(m.ncols for m in mats)
    out = Mat.zeros(ring, R, C)
    r0 = c0 = 0
    for m in mats:
        for i, row in enumerate(m.rows):
            out.rows[r0 + i][c0:c0 + m.ncols] = row
        r0 += m.nrows
        c0 += m.ncols
    return out


def kron(A: Mat, B: Mat) -> Mat:
    """Kronecker product; row (i, k) -> i*B.nrows + k, column likewise."""
    red = A.ring.reduce
    zero = A.ring.zero
    rows = []
    for ra in A.rows:
        for rb in B.rows:
            row = []
            for a in ra:
                if a == 0:
                    row.extend([zero] * B.ncols)
                else:
                    row.extend(red(a * b) for b in rb)
            rows.append(row)
    return Mat(A.ring, rows, A.ncols * B.ncols)


# ---------------------------------------------------------------------------
# Field linear algebra

def _require_field(A: Mat) -> Field:
    if not isinstance(A.ring, Field):
        raise InvalidArgument(f"operation needs a field, got {A.ring!r}")
    return A.ring


def _echelon(F: Field, rows):
    """Incremental sparse elimination.

    ``rows`` is an iterable of dicts col -> value.  Returns a dict pivot col ->
    reduced row (dict) where every row has a 1 at its pivot and 0 at every
    other pivot column.  A new row takes its smallest surviving column as
    pivot, so a row whose pivot lies in some trailing block has no entries
    before that block.
    """
    p = F.p
    piv: dict = {}
    for row in rows:
        r = {c: (v % p if p else v) for c, v in row.items()}
        r = {c: v for c, v in r.items() if v != 0}
        for c in [c for c in r if c in piv]:
            f = r.get(c)
            if not f:
                continue
            for k, v in piv[c].items():
                x = r.get(k, 0) - f * v
                if p:
                    x %= p
                if x:
                    r[k] = x
                else:
                    r.pop(k, None)
        if not r:
            continue
        c0 = min(r)
        inv = F.inv(r[c0])
        if inv != 1:
            r = {k: (v * inv % p if p else v * inv) for k, v in r.items()}
        for c, prow in piv.items():
            f = prow.get(c0)
            if f:
                for k, v in r.items():
                    x = prow.get(k, 0) - f * v
                    if p:
                        x %= p
                    if x:
                        prow[k] = x
                    else:
                        prow.pop(k, None)
        piv[c0] = r
    return piv


def sparse_rows(A: Mat):
    return ({j: v for j, v in enumerate(row) if v != 0} for row in A.rows)


def rref(A: Mat):
    """Row echelon form with unit pivots cleared above and below:
    (dense rows ordered by pivot column, pivot columns)."""
    F = _require_field(A)
    piv = _echelon(F, sparse_rows(A))
    cols = sorted(piv)
    n = A.ncols
    out = []
    for c in cols:
        row = [F.zero] * n
        for k, v in piv[c].items():
            row[k] = v
        out.append(row)
    return out, cols


def sparse_kernel(F: Field, rows, n: int) -> Mat:
    """Kernel basis (as columns) of the n-column system given by sparse rows."""
    piv = _echelon(F, rows)
    free = [c for c in range(n) if c not in piv]
    index = {f: t for t, f in enumerate(free)}
    K = Mat.zeros(F, n, len(free))
    for t, f in enumerate(free):
        K.rows[f][t] = F.one
    for c, r in piv.items():
        for k, v in r.items():
            if k != c:
                K.rows[c][index[k]] = F.reduce(-v)
    return K


def rank(A: Mat) -> int:
    return len(rref(A)[1])


def kernel(A: Mat) -> Mat:
    """Columns form a basis of {v : A v = 0}."""
    F = _require_field(A)
    return sparse_kernel(F, sparse_rows(A), A.ncols)


def image(A: Mat) -> Mat:
    """Columns form a basis of the column span of A (chosen among A's columns)."""
    _, piv = rref(A)
    return A.submatrix(None, piv)


def cokernel(A: Mat):
    """Return (Q, k): Q is k x rows(A), surjective, with ker Q = column span of A."""
    K = kernel(A.T)
    return K.T, K.ncols


def solve(A: Mat, B: Mat) -> Mat | None:
    """Some X with A X = B, or None when the system is inconsistent."""
    F = _require_field(A)
    if A.nrows != B.nrows:
        raise DimensionMismatch("solve: row counts differ")
    n = A.ncols
    aug = hstack(A, B) if A.ncols else B.copy()
    rows, piv = rref(aug)
    if any(c >= n for c in piv):
        return None
    X = Mat.zeros(F, n, B.ncols)
    for i, c in enumerate(piv):
        X.rows[c] = rows[i][n:]
    return X


def inverse(A: Mat) -> Mat:
    if A.nrows != A.ncols:
        raise DimensionMismatch("inverse of a non-square matrix")
    X = solve(A, Mat.identity(A.ring, A.nrows))
    if X is None or A @ X != Mat.identity(A.ring, A.nrows):
        raise InvalidArgument("matrix is singular")
    return X


def left_inverse(A: Mat) -> Mat:
    """X with X A = I for A of full column rank."""
    X = solve(A.T, Mat.identity(A.ring, A.ncols))
    if X is None:
        raise InvalidArgument("matrix does not have full column rank")
    return X.T


def right_inverse(A: Mat) -> Mat:
    """S with A S = I for A of full row rank."""
    S = solve(A, Mat.identity(A.ring, A.nrows))
    if S is None:
        raise InvalidArgument("matrix does not have full row rank")
    return S


def in_span(A: Mat, v: list) -> bool:
    return solve(A, Mat(A.ring, [[x] for x in v], 1)) is not None


def is_injective(A: Mat) -> bool:
    return rank(A) == A.ncols


def is_surjective(A: Mat) -> bool:
    return rank(A) == A.nrows


def is_bijective(A: Mat) -> bool:
    return A.nrows == A.ncols and rank(A) == A.nrows


def same_span(A: Mat, B: Mat) -> bool:
    """Column spans agree."""
    if A.nrows != B.nrows:
        return False
    ra, rb = rank(A), rank(B)
    return ra == rb and rank(hstack(A, B)) == ra


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass(frozen=True)
class SNFResult:
    U: Mat
    V: Mat
    D: Mat
    invariant_factors: tuple   # nonzero diagonal entries d_1 | d_2 | ...

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(A: Mat) -> SNFResult:
    """U A V = D with D diagonal and d_1 | d_2 | ... .

    Pivot choice: among the remaining entries take the one of least norm
    (absolute value, degree, or valuation), ties broken by smallest row and
    then smallest column.  Invariant factors come out nonnegative over Z,
    monic over k[z], and as powers of the uniformizer over R/m^N.
    """
    R = A.ring
    if isinstance(R, Field):
        raise InvalidArgument("SNF is computed over Z, k[z] or R/m^N, not a field")
    m, n = A.shape
    D = [r[:] for r in A.rows]
    U = Mat.identity(R, m).rows
    V = Mat.identity(R, n).rows
    norm, dm = R.norm, R.divmod

    def nz(x):
        return not R.is_zero(x)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        D[dst] = [a - q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in D:
            row[dst] = row[dst] - q * row[src]
        for row in V:
            row[dst] = row[dst] - q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = D[i][j]
                if nz(x):
                    key = (norm(x), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, i0, j0 = best
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            changed = False
            for i in range(t + 1, m):
                if nz(D[i][t]):
                    q, r = dm(D[i][t], D[t][t])
                    add_row(i, t, q)
                    if nz(D[i][t]):
                        swap_rows(i, t)
                        changed = True
            for j in range(t + 1, n):
                if nz(D[t][j]):
                    q, r = dm(D[t][j], D[t][t])
                    add_col(j, t, q)
                    if nz(D[t][j]):
                        swap_cols(j, t)
                        changed = True
            if changed:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if nz(D[i][j]) and not R.divides(D[t][t], D[i][j]):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # row_t += row_bad brings a non-multiple into the pivot row
            add_row(t, bad, -R.one)
        u = R.normalize(D[t][t])
        if u != R.one:
            D[t] = [u * a for a in D[t]]
            U[t] = [u * a for a in U[t]]
        t += 1

    red = R.reduce
    Dm = Mat(R, [[red(a) for a in r] for r in D], n)
    factors = tuple(D[i][i] for i in range(min(m, n)) if nz(D[i][i]))
    return SNFResult(Mat(R, [[red(a) for a in r] for r in U], m),
                     Mat(R, [[red(a) for a in r] for r in V], n), Dm, factors)


def snf_check(A: Mat, res: SNFResult) -> bool:
    """U A V = D, D diagonal, and the divisibility chain."""
    R = A.ring
    if res.U @ A @ res.V != res.D:
        return False
    for i, j, a in res.D.entries():
        if i != j and a != 0:
            return False
    d = res.invariant_factors
    return all(R.divides(d[i], d[i + 1]) for i in range(len(d) - 1))
