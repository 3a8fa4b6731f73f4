"""Finite-dimensional coalgebras over a field.

Conventions used throughout the package:

* The comultiplication is stored as a (d*d) x d matrix ``mu``; column i is
  mu(e_i) in C (x) C, with e_j (x) e_k at row j*d + k.  So mu[j*d+k, i] is the
  coefficient called mu[i][j][k] elsewhere.
* Tensor products are ordered with the first factor major:
  (x) index (a, b) -> a*dim(B) + b.
* The dual algebra C* has basis f_0..f_{d-1} dual to e_0..e_{d-1} and the
  product <fg, c> = <f, c_(2)> <g, c_(1)>, i.e.
  f_a f_b = sum_c mu[c][b][a] f_c.
  With this product a left C-comodule is a left C*-module via
  f.m = <f, m_(-1)> m_(0), and a left contramodule is a left C*-module via
  f.p = pi(f (x) p).  This is the only place the choice is made.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .errors import AxiomFailure, DimensionMismatch, ParseError
from .exact_linalg import Mat, kron, rank
from .scalars import Field


@dataclass(frozen=True)
class Certificate:
    """Outcome of an axiom check.

    ``checks`` lists the identities that were verified.  On failure ``axiom``
    names the first violated identity and ``entry`` the first nonzero entry of
    the difference, as an index tuple.
    """

    passed: bool
    checks: tuple = ()
    axiom: str | None = None
    entry: tuple | None = None
    failures: tuple = dc_field(default=())

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        out = {"passed": self.passed, "checks": list(self.checks)}
        if not self.passed:
            out["axiom"] = self.axiom
            out["entry"] = list(self.entry) if self.entry is not None else None
            out["failures"] = list(self.failures)
        return out


def certify(checks) -> Certificate:
    """Build a certificate from (name, difference matrix, index decoder) triples."""
    names, fails = [], []
    first = None
    for name, diff, decode in checks:
        names.append(name)
        hit = diff.first_nonzero()
        if hit is not None:
            fails.append(name)
            if first is None:
                first = (name, decode(hit[0], hit[1]))
    if first is None:
        return Certificate(True, tuple(names))
    return Certificate(False, tuple(names), first[0], first[1], tuple(fails))


class Coalgebra:
    def __init__(self, field: Field, dim: int, mu: Mat, eps: list, name: str | None = None):
        if mu.shape != (dim * dim, dim):
            raise DimensionMismatch(f"comultiplication must be {dim*dim}x{dim}, got {mu.shape}")
        if len(eps) != dim:
            raise DimensionMismatch(f"counit must have length {dim}")
        self.field = field
        self.dim = dim
        self.mu = mu
        self.eps = [field.reduce(field(x)) for x in eps]
        self.name = name or f"C(dim={dim})"

    @classmethod
    def from_tensor(cls, field: Field, dim: int, entries, counit, name=None) -> "Coalgebra":
        """``entries`` are (i, j, k, coeff): coefficient of e_j (x) e_k in mu(e_i)."""
        mu = Mat.zeros(field, dim * dim, dim)
        for i, j, k, a in entries:
            if not all(0 <= t < dim for t in (i, j, k)):
                raise DimensionMismatch(f"index ({i},{j},{k}) out of range for dim {dim}")
            mu.rows[j * dim + k][i] = field.reduce(mu.rows[j * dim + k][i] + field(a))
        return cls(field, dim, mu, list(counit), name)

    def comult(self, i: int, j: int, k: int):
        return self.mu.rows[j * self.dim + k][i]

    @cached_property
    def eps_row(self) -> Mat:
        return Mat(self.field, [list(self.eps)], self.dim)

    @cached_property
    def eps_col(self) -> Mat:
        return self.eps_row.T

    @cached_property
    def dual(self) -> "DualAlgebra":
        return DualAlgebra.of(self)

    @cached_property
    def generators(self) -> list:
        """Coefficient vectors of elements generating C* as a unital algebra."""
        return self.dual.generators()

    def __eq__(self, other):
        return (isinstance(other, Coalgebra) and other.field == self.field
                and other.dim == self.dim and other.mu == self.mu and other.eps == self.eps)

    def __hash__(self):
        return hash((self.field, self.dim, tuple(self.eps)))

    def __repr__(self):
        return f"<Coalgebra {self.name} over {self.field!r}>"

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        d = self.dim
        comult = [[i, j, k, str(self.comult(i, j, k))]
                  for i in range(d) for j in range(d) for k in range(d) if self.comult(i, j, k) != 0]
        return {"field": self.field.to_json(), "dim": d, "comult": comult,
                "counit": [str(x) for x in self.eps]}

    @classmethod
    def from_json(cls, obj) -> "Coalgebra":
        if isinstance(obj, (str, bytes)):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise ParseError("coalgebra must be a JSON object")
        try:
            F = Field.from_json(obj["field"])
            d = int(obj["dim"])
            entries = [(int(i), int(j), int(k), F.parse(str(a))) for i, j, k, a in obj["comult"]]
            counit = [F.parse(str(a)) for a in obj["counit"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed coalgebra: {exc}") from exc
        if d < 0:
            raise ParseError("negative dimension")
        return cls.from_tensor(F, d, entries, counit)


def check_coalgebra(C: Coalgebra) -> Certificate:
    """Coassociativity and both counit identities, evaluated on the structure tensor."""
    d = C.dim
    F = C.field
    if C.mu.shape != (d * d, d) or len(C.eps) != d:
        raise DimensionMismatch("structure tensor does not match the dimension")
    I = Mat.identity(F, d)
    left = kron(C.mu, I) @ C.mu
    right = kron(I, C.mu) @ C.mu

    def triple(r, i):
        a, rest = divmod(r, d * d)
        b, c = divmod(rest, d)
        return (i, a, b, c)

    def pair(r, i):
        return (i, r)

    return certify([
        ("coassociativity", left - right, triple),
        ("left counit", kron(C.eps_row, I) @ C.mu - I, pair),
        ("right counit", kron(I, C.eps_row) @ C.mu - I, pair),
    ])


class DualAlgebra:
    """C* with structure constants ``m[c][a][b]`` = coefficient of f_c in f_a f_b."""

    def __init__(self, field: Field, dim: int, m, unit: list):
        self.field = field
        self.dim = dim
        self.m = m
        self.unit = unit

    @classmethod
    def of(cls, C: Coalgebra) -> "DualAlgebra":
        d = C.dim
        m = [[[C.comult(c, b, a) for b in range(d)] for a in range(d)] for c in range(d)]
        return cls(C.field, d, m, list(C.eps))

    def mul(self, x: list, y: list) -> list:
        F = self.field
        d = self.dim
        out = []
        for c in range(d) if d else []:
            s = F.zero
            mc = self.m[c]
            for a in range(d):
                if x[a] == 0:
                    continue
                row = mc[a]
                for b in range(d):
                    if y[b] != 0 and row[b] != 0:
                        s += x[a] * row[b] * y[b]
            out.append(F.reduce(s))
        return out

    def basis(self, a: int) -> list:
        v = [self.field.zero] * self.dim
        v[a] = self.field.one
        return v

    def check(self) -> Certificate:
        d = self.dim
        F = self.field
        # associativity tensor: (f_a f_b) f_c - f_a (f_b f_c)
        rows = []
        for a in range(d):
            for b in range(d):
                ab = self.mul(self.basis(a), self.basis(b))
                for c in range(d):
                    lhs = self.mul(ab, self.basis(c))
                    rhs = self.mul(self.basis(a), self.mul(self.basis(b), self.basis(c)))
                    rows.append([F.reduce(x - y) for x, y in zip(lhs, rhs)])
        assoc = Mat(F, rows, d) if rows else Mat.zeros(F, 0, d)
        lu = Mat(F, [[F.reduce(x - y) for x, y in zip(self.mul(self.unit, self.basis(a)), self.basis(a))]
                     for a in range(d)], d) if d else Mat.zeros(F, 0, 0)
        ru = Mat(F, [[F.reduce(x - y) for x, y in zip(self.mul(self.basis(a), self.unit), self.basis(a))]
                     for a in range(d)], d) if d else Mat.zeros(F, 0, 0)

        def abc(r, c):
            a, rest = divmod(r, d * d)
            b, cc = divmod(rest, d)
            return (a, b, cc, c)

        return certify([("associativity", assoc, abc),
                        ("left unit", lu, lambda r, c: (r, c)),
                        ("right unit", ru, lambda r, c: (r, c))])

    def generators(self) -> list:
        """Greedy generating set of the algebra (the unit is implicit)."""
        F = self.field
        d = self.dim
        gens: list = []
        span = [list(self.unit)] if any(x != 0 for x in self.unit) else []

        def closure(gens):
            basis = [list(self.unit)]
            frontier = [list(self.unit)]
            while frontier:
                new = []
                for x in frontier:
                    for g in gens:
                        y = self.mul(x, g)
                        if rank(Mat(F, basis + [y], d)) > len(basis):
                            basis.append(y)
                            new.append(y)
                frontier = new
            return basis

        span = closure(gens)
        for a in range(d):
            v = self.basis(a)
            if rank(Mat(F, span + [v], d)) > len(span):
                gens.append(v)
                span = closure(gens)
                if len(span) == d:
                    break
        return gens


def dual_algebra(C: Coalgebra) -> DualAlgebra:
    cert = check_coalgebra(C)
    if not cert.passed:
        raise AxiomFailure(f"not a coalgebra: {cert.axiom} fails at {cert.entry}")
    return C.dual


def pairing_matrix(C: Coalgebra) -> Mat:
    """Gram matrix of <f_a, e_c>; nondegenerate means C is the full dual of C*."""
    return Mat.identity(C.field, C.dim)


def check_double_dual(C: Coalgebra) -> bool:
    """The pairing identifies C with the dual of C*: nondegenerate, and it turns
    the product of C* into the transpose-reversed comultiplication."""
    A = C.dual
    if rank(pairing_matrix(C)) != C.dim:
        return False
    d = C.dim
    for a in range(d):
        for b in range(d):
            prod = A.mul(A.basis(a), A.basis(b))
            for c in range(d):
                if prod[c] != C.comult(c, b, a):
                    return False
    return True


# ---------------------------------------------------------------------------
# Fixture zoo

def divided_power_coalgebra(N: int, field: Field) -> Coalgebra:
    """Basis z^n* (n < N) with mu(z^n*) = sum_{i+j=n} z^i* (x) z^j*; dual to k[z]/z^N."""
    if N < 1:
        from .errors import InvalidArgument
        raise InvalidArgument("divided power coalgebra needs N >= 1")
    entries = [(n, i, n - i, 1) for n in range(N) for i in range(n + 1)]
    eps = [1] + [0] * (N - 1)
    return Coalgebra.from_tensor(field, N, entries, eps, name=f"C_{N}")


def grouplike_coalgebra(n: int, field: Field) -> Coalgebra:
    """k^X with every basis vector group-like; its dual is the product ring."""
    return Coalgebra.from_tensor(field, n, [(i, i, i, 1) for i in range(n)], [1] * n,
                                 name=f"k^{n}")


def matrix_coalgebra(n: int, field: Field) -> Coalgebra:
    """Dual basis e_ij of n x n matrix units: mu(e_ij) = sum_k e_ik (x) e_kj."""
    idx = lambda i, j: i * n + j
    entries = [(idx(i, j), idx(i, k), idx(k, j), 1)
               for i in range(n) for j in range(n) for k in range(n)]
    eps = [1 if i == j else 0 for i in range(n) for j in range(n)]
    return Coalgebra.from_tensor(field, n * n, entries, eps, name=f"M_{n}*")


def pointed_coalgebra(field: Field) -> Coalgebra:
    """Group-likes g, h and a (g,h)-skew-primitive x: mu(x) = g(x)x + x(x)h.

    Basis order (g, h, x).  Not cosemisimple; its dual is the path algebra of
    the quiver with one arrow.
    """
    entries = [(0, 0, 0, 1), (1, 1, 1, 1), (2, 0, 2, 1), (2, 2, 1, 1)]
    return Coalgebra.from_tensor(field, 3, entries, [1, 1, 0], name="pointed")


def fixtures(field: Field, max_divided: int = 8, max_grouplike: int = 4,
             max_matrix: int = 3) -> list:
    out = [divided_power_coalgebra(N, field) for N in range(1, max_divided + 1)]
    out += [grouplike_coalgebra(n, field) for n in range(1, max_grouplike + 1)]
    out += [matrix_coalgebra(n, field) for n in range(2, max_matrix + 1)]
    out.append(pointed_coalgebra(field))
    return out
