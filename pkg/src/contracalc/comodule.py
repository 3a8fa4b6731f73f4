"""Finite-dimensional comodules over a finite-dimensional coalgebra.

A left comodule M of dimension m has coaction nu: M -> C (x) M stored as a
(d*m) x m matrix with row c*m + i (coalgebra index major).  A right comodule
N has nu: N -> N (x) C stored as (m*d) x m with row i*d + c.

Block c of the coaction is the action matrix of the dual basis vector f_c
(see ``coalgebra``); most computations go through these action matrices,
since comodule morphisms are exactly the maps intertwining them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .coalgebra import Certificate, Coalgebra, certify
from .errors import CoalgebraMismatch, DimensionMismatch, InvalidArgument, NotNilpotent, ParseError
from .exact_linalg import Mat, cokernel, hstack, sparse_kernel, kron, left_inverse, rank, right_inverse, solve
from .scalars import Field


class Comodule:
    def __init__(self, C: Coalgebra, side: str, dim: int, coaction: Mat, name: str | None = None):
        if side not in ("left", "right"):
            raise InvalidArgument(f"side must be left or right, got {side!r}")
        if coaction.shape != (C.dim * dim, dim):
            raise DimensionMismatch(f"coaction must be {C.dim*dim}x{dim}, got {coaction.shape}")
        self.C = C
        self.side = side
        self.dim = dim
        self.coaction = coaction
        self.name = name

    @property
    def field(self) -> Field:
        return self.C.field

    def action(self, c: int) -> Mat:
        """Matrix of the dual basis vector f_c acting on M."""
        m, d = self.dim, self.C.dim
        if self.side == "left":
            return self.coaction.row_block(c, m)
        return self.coaction.submatrix([i * d + c for i in range(m)], None)

    @cached_property
    def actions(self) -> list:
        return [self.action(c) for c in range(self.C.dim)]

    def act(self, f: list) -> Mat:
        """Action matrix of an arbitrary element f of C*."""
        F = self.field
        out = Mat.zeros(F, self.dim, self.dim)
        for c, a in enumerate(f):
            if a != 0:
                out = out + self.actions[c].scale(a)
        return out

    @cached_property
    def generator_actions(self) -> list:
        return [self.act(g) for g in self.C.generators]

    @classmethod
    def from_actions(cls, C: Coalgebra, side: str, mats: list, name=None) -> "Comodule":
        d = C.dim
        m = mats[0].nrows if mats else 0
        if len(mats) != d:
            raise DimensionMismatch("need one action matrix per basis vector of C")
        if side == "left":
            rows = [r[:] for A in mats for r in A.rows]
        else:
            rows = [mats[c].rows[i][:] for i in range(m) for c in range(d)]
        nu = Mat(C.field, rows, m) if rows else Mat.zeros(C.field, 0, m)
        return cls(C, side, m, nu, name)

    def __repr__(self):
        return f"<{self.side} comodule dim {self.dim} over {self.C.name}{' ' + self.name if self.name else ''}>"

    def __eq__(self, other):
        return (isinstance(other, Comodule) and other.C == self.C and other.side == self.side
                and other.coaction == self.coaction)

    def __hash__(self):
        return hash((self.side, self.dim))

    # -- serialization ------------------------------------------------------

    def to_json(self, coalgebra_ref: str = "coalgebra.json") -> dict:
        return {"coalgebra": coalgebra_ref, "side": self.side, "dim": self.dim,
                "coaction": [[i, j, str(a)] for i, j, a in self.coaction.nonzero_entries()]}

    @classmethod
    def from_json(cls, obj, C: Coalgebra) -> "Comodule":
        try:
            side = obj["side"]
            m = int(obj["dim"])
            triples = [(int(i), int(j), C.field.parse(str(a))) for i, j, a in obj["coaction"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed comodule: {exc}") from exc
        if side not in ("left", "right"):
            raise ParseError(f"side must be left or right, got {side!r}")
        return cls(C, side, m, Mat.sparse(C.field, C.dim * m, m, triples))


def load_json_file(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise ParseError(f"{path} is empty")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc


def load_coalgebra_ref(obj: dict, base: Path) -> Coalgebra:
    ref = obj.get("coalgebra")
    if isinstance(ref, dict):
        return Coalgebra.from_json(ref)
    if not isinstance(ref, str):
        raise ParseError("missing coalgebra reference")
    return Coalgebra.from_json(load_json_file(base / ref))


def _same_coalgebra(*objs):
    C = objs[0].C
    for o in objs[1:]:
        if o.C is not C and o.C != C:
            raise CoalgebraMismatch(f"{o!r} and {objs[0]!r} live over different coalgebras")
    return C


# ---------------------------------------------------------------------------
# Axioms and basic objects

def assoc_defect(C: Coalgebra, actions: list, reverse: bool = False) -> Mat:
    """Blocks sum_c mu[c][a][b] A_c - A_b A_a, stacked with row (a*d + b)*m + i.

    For a left comodule with A_c the blocks of nu this is exactly the tensor
    (mu (x) id) nu - (id (x) nu) nu at row (a, b, i); for a left contramodule
    it is the transpose-free rearrangement of pi Hom(mu, P) - pi Hom(C, pi).
    ``reverse`` uses A_a A_b instead (right comodules).
    """
    d = C.dim
    F = C.field
    m = actions[0].nrows if actions else 0
    rows = []
    for a in range(d):
        for b in range(d):
            lhs = Mat.zeros(F, m, m)
            for c in range(d):
                x = C.comult(c, a, b)
                if x != 0:
                    lhs = lhs + actions[c].scale(x)
            rhs = actions[a] @ actions[b] if reverse else actions[b] @ actions[a]
            rows.extend((lhs - rhs).rows)
    return Mat(F, rows, m) if rows else Mat.zeros(F, 0, m)


def counit_defect(C: Coalgebra, actions: list) -> Mat:
    F = C.field
    m = actions[0].nrows if actions else 0
    out = Mat.zeros(F, m, m) - Mat.identity(F, m)
    for c, e in enumerate(C.eps):
        if e != 0:
            out = out + actions[c].scale(e)
    return out


def check_comodule(M: Comodule) -> Certificate:
    """Coassociativity and counitality, evaluated block by block.

    Failures report (column j, a, b, i) for the left tensor entry at
    e_a (x) e_b (x) m_i, and (j, i, a, b) on the right.
    """
    C = M.C
    d, m = C.dim, M.dim
    if M.coaction.shape != (d * m, m):
        raise DimensionMismatch("coaction does not match dimensions")
    acts = M.actions
    left = M.side == "left"
    diff = assoc_defect(C, acts, reverse=not left)

    def decode(r, j):
        ab, i = divmod(r, m)
        a, b = divmod(ab, d)
        return (j, a, b, i) if left else (j, i, a, b)

    return certify([("coassociativity", diff, decode),
                    ("counitality", counit_defect(C, acts), lambda r, c: (r, c))])


def check_comodule_tensor(M: Comodule) -> Certificate:
    """Same verdict from the literal Kronecker-product identities (slow)."""
    C = M.C
    d, m = C.dim, M.dim
    F = C.field
    Im = Mat.identity(F, m)
    Id = Mat.identity(F, d)
    nu = M.coaction
    if M.side == "left":
        lhs = kron(C.mu, Im) @ nu
        rhs = kron(Id, nu) @ nu
        counit = kron(C.eps_row, Im) @ nu - Im
    else:
        lhs = kron(nu, Id) @ nu
        rhs = kron(Im, C.mu) @ nu
        counit = kron(Im, C.eps_row) @ nu - Im
    return certify([("coassociativity", lhs - rhs, lambda r, c: (r, c)),
                    ("counitality", counit, lambda r, c: (r, c))])


def regular(C: Coalgebra, side: str = "left") -> Comodule:
    """C as a comodule over itself, with coaction mu."""
    return Comodule(C, side, C.dim, C.mu, name="regular")


def cofree(C: Coalgebra, V: int) -> Comodule:
    """Left comodule C (x) V with coaction mu (x) id."""
    if V < 0:
        raise InvalidArgument("negative dimension")
    F = C.field
    if V == 0:
        return Comodule(C, "left", 0, Mat.zeros(F, 0, 0), name="cofree(0)")
    return Comodule(C, "left", C.dim * V, kron(C.mu, Mat.identity(F, V)), name=f"cofree({V})")


def cofree_right(C: Coalgebra, V: int) -> Comodule:
    """Right comodule V (x) C with coaction id (x) mu."""
    F = C.field
    if V == 0:
        return Comodule(C, "right", 0, Mat.zeros(F, 0, 0), name="cofree(0)")
    return Comodule(C, "right", V * C.dim, kron(Mat.identity(F, V), C.mu), name=f"cofree({V})")


def zero_comodule(C: Coalgebra, side: str = "left") -> Comodule:
    return Comodule(C, side, 0, Mat.zeros(C.field, 0, 0), name="0")


def from_grouplike(C: Coalgebra, g: int, dim: int = 1, side: str = "left") -> Comodule:
    """nu(m) = e_g (x) m; a comodule exactly when e_g is group-like."""
    F = C.field
    mats = [Mat.identity(F, dim) if c == g else Mat.zeros(F, dim, dim) for c in range(C.dim)]
    return Comodule.from_actions(C, side, mats, name=f"trivial@{g}")


def trivial(C: Coalgebra, side: str = "left") -> Comodule:
    """The 1-dimensional comodule on the first group-like basis vector."""
    for g in range(C.dim):
        if C.eps[g] == 1 and all(C.comult(g, j, k) == (1 if j == k == g else 0)
                                 for j in range(C.dim) for k in range(C.dim)):
            return from_grouplike(C, g, 1, side)
    raise InvalidArgument(f"{C.name} has no group-like basis vector")


def direct_sum(*Ms: Comodule) -> Comodule:
    C = _same_coalgebra(*Ms)
    side = Ms[0].side
    F = C.field
    mats = []
    for c in range(C.dim):
        blocks = [M.actions[c] for M in Ms]
        total = sum(M.dim for M in Ms)
        A = Mat.zeros(F, total, total)
        o = 0
        for B in blocks:
            for i, row in enumerate(B.rows):
                A.rows[o + i][o:o + B.ncols] = row
            o += B.nrows
        mats.append(A)
    if not Ms or sum(M.dim for M in Ms) == 0:
        return zero_comodule(C, side)
    return Comodule.from_actions(C, side, mats, name="sum")


def transport(M: Comodule, T: Mat) -> Comodule:
    """The isomorphic comodule obtained by the base change v -> T v."""
    from .exact_linalg import inverse
    Ti = inverse(T)
    return Comodule.from_actions(M.C, M.side, [T @ A @ Ti for A in M.actions], name=M.name)


# ---------------------------------------------------------------------------
# Morphisms

def intertwiner_space(src_actions: list, tgt_actions: list, m_src: int, m_tgt: int, F: Field) -> list:
    """Basis of {f : f A_c = B_c f for all c} as m_tgt x m_src matrices.

    The unknown f[r][s] sits at r*m_src + s; equations are fed to the sparse
    eliminator one at a time.
    """
    if m_src == 0 or m_tgt == 0:
        return []
    m, n = m_src, m_tgt

    def equations():
        for A, B in zip(src_actions, tgt_actions):
            acols = [[(t, A.rows[t][s]) for t in range(m) if A.rows[t][s] != 0] for s in range(m)]
            brows = [[(u, v) for u, v in enumerate(B.rows[r]) if v != 0] for r in range(n)]
            for r in range(n):
                for s in range(m):
                    eq = {}
                    for t, v in acols[s]:
                        eq[r * m + t] = v
                    for u, v in brows[r]:
                        k = u * m + s
                        eq[k] = eq.get(k, 0) - v
                    if eq:
                        yield eq

    K = sparse_kernel(F, equations(), m * n)
    out = []
    for v in K.cols():
        out.append(Mat(F, [v[r * m:(r + 1) * m] for r in range(n)], m))
    return out


def hom_comodules(L: Comodule, M: Comodule) -> list:
    """Basis of Hom_C(L, M) as dim M x dim L matrices."""
    _same_coalgebra(L, M)
    if L.side != M.side:
        raise InvalidArgument("comodules on different sides")
    return intertwiner_space(L.generator_actions, M.generator_actions, L.dim, M.dim, L.field)


def is_morphism(f: Mat, L: Comodule, M: Comodule) -> bool:
    if f.shape != (M.dim, L.dim):
        return False
    # nu_M f = (id (x) f) nu_L, compared block by block: B_c f = f A_c
    return all(B @ f == f @ A for A, B in zip(L.actions, M.actions))


def coaction_embedding(M: Comodule) -> Mat:
    """nu: M -> cofree(C, dim M), an injective comodule morphism."""
    if M.side != "left":
        raise InvalidArgument("coaction embedding implemented for left comodules")
    return M.coaction


# ---------------------------------------------------------------------------
# Sub- and quotient comodules

def invariant_closure(actions: list, vectors: Mat) -> Mat:
    """Smallest subspace containing the columns of ``vectors`` and stable
    under all the given matrices; returned as a basis matrix."""
    F = vectors.ring
    n = vectors.nrows
    from .exact_linalg import image
    cur = image(vectors) if vectors.ncols else Mat.zeros(F, n, 0)
    while True:
        if cur.ncols == 0:
            return cur
        grown = hstack(cur, *[A @ cur for A in actions])
        nxt = image(grown)
        if nxt.ncols == cur.ncols:
            return cur
        cur = nxt


@dataclass(frozen=True)
class Sub:
    obj: object          # the sub-object
    inclusion: Mat       # ambient x dim


@dataclass(frozen=True)
class Quot:
    obj: object
    projection: Mat      # dim x ambient
    section: Mat         # ambient x dim, projection @ section = I


def subcomodule(M: Comodule, vectors: Mat) -> Sub:
    """The subcomodule generated by the columns of ``vectors``."""
    S = invariant_closure(M.generator_actions, vectors)
    if S.ncols == 0:
        return Sub(zero_comodule(M.C, M.side), Mat.zeros(M.field, M.dim, 0))
    Linv = left_inverse(S)
    mats = [Linv @ A @ S for A in M.actions]
    return Sub(Comodule.from_actions(M.C, M.side, mats, name="sub"), S)


def quotient(M: Comodule, incl: Mat) -> Quot:
    """M / (column span of incl); the span must be a subcomodule."""
    Q, k = cokernel(incl)
    F = M.field
    if k == 0:
        return Quot(zero_comodule(M.C, M.side), Mat.zeros(F, 0, M.dim), Mat.zeros(F, M.dim, 0))
    S = right_inverse(Q)
    mats = [Q @ A @ S for A in M.actions]
    return Quot(Comodule.from_actions(M.C, M.side, mats, name="quotient"), Q, S)


def is_invariant(actions, incl: Mat) -> bool:
    if incl.ncols == 0:
        return True
    return all(rank(hstack(incl, A @ incl)) == rank(incl) for A in actions)


# ---------------------------------------------------------------------------
# Injectivity

@dataclass(frozen=True)
class SplitCertificate:
    split: bool
    i: Mat | None = None
    p: Mat | None = None


def is_injective(M: Comodule) -> SplitCertificate:
    """M is injective iff nu: M -> cofree(C, dim M) admits a comodule retraction."""
    C = M.C
    F = C.field
    if M.dim == 0:
        Z = Mat.zeros(F, 0, 0)
        return SplitCertificate(True, Z, Z)
    if M.side == "left":
        hull = cofree(C, M.dim)
        i = M.coaction
    else:
        hull = cofree_right(C, M.dim)
        # nu lands in M (x) C = M.dim (x) C, which is the ordering of cofree_right
        i = M.coaction
    basis = hom_comodules(hull, M)
    if not basis:
        return SplitCertificate(False)
    # solve sum_k x_k p_k i = I
    m = M.dim
    cols = []
    for p in basis:
        prod = p @ i
        cols.append([a for r in prod.rows for a in r])
    A = Mat.from_cols(F, cols, m * m)
    target = Mat.identity(F, m)
    b = Mat(F, [[a] for r in target.rows for a in r], 1)
    x = solve(A, b)
    if x is None:
        return SplitCertificate(False)
    p = Mat.zeros(F, m, hull.dim)
    for k, q in enumerate(basis):
        if x.rows[k][0] != 0:
            p = p + q.scale(x.rows[k][0])
    return SplitCertificate(True, i, p)


# ---------------------------------------------------------------------------
# Divided powers and nilpotent operators

def from_nilpotent_operator(z: Mat, N: int) -> Comodule:
    """Left comodule over C_N with nu(m) = sum_{n<N} z^n* (x) z^n(m)."""
    from .coalgebra import divided_power_coalgebra
    F = z.ring
    m = z.nrows
    if z.nrows != z.ncols:
        raise DimensionMismatch("operator must be square")
    powers = [Mat.identity(F, m)]
    for _ in range(N):
        powers.append(powers[-1] @ z)
    if not powers[N].is_zero():
        raise NotNilpotent(f"z^{N} != 0: the operator is not nilpotent of order {N}")
    C = divided_power_coalgebra(N, F)
    return Comodule.from_actions(C, "left", powers[:N], name="nilpotent")


def to_operator(M: Comodule) -> Mat:
    """Recover z as the action of the dual basis vector of z*."""
    if M.C.dim < 2:
        return Mat.zeros(M.field, M.dim, M.dim)
    return M.action(1)


def jordan_block(F: Field, n: int, lam=0) -> Mat:
    J = Mat.zeros(F, n, n)
    for i in range(n):
        J.rows[i][i] = F.reduce(F(lam))
        if i + 1 < n:
            J.rows[i][i + 1] = F.one
    return J


# ---------------------------------------------------------------------------
# Products of comodules over k[[z]]: the failure of exactness

def _laurent_reduce(poly: dict, n: int) -> dict:
    """Normalize a finite Laurent polynomial modulo z^{-n} k[[z]]."""
    return {e: a for e, a in poly.items() if e < -n and a != 0}


def _laurent_shift(poly: dict, e: int) -> dict:
    return {k + e: a for k, a in poly.items()}


def ab4star_failure_certificate(m: int, field: Field | None = None, corrections=None) -> dict:
    """Scripted certificate that infinite products of comodules over the
    power series coalgebra are not exact.

    Works with the torsion modules k((z))/z^{-n}k[[z]] through finite Laurent
    polynomials.  The family w_n = z^{-n-1} (n = 1..m) is killed by z, so it
    lies in the comodule product of the quotients.  A preimage (y_n) in the
    product of copies of k((z))/k[[z]] would have to be killed by one common
    power z^e; for every e <= m the trace exhibits n = e with z^e y_n != 0,
    whatever corrections of pole order <= n are added to y_n.
    ``corrections`` optionally maps n to such a correction (dict exponent ->
    coefficient) to show the witness does not depend on the lift.
    """
    from .scalars import QQ
    if m < 2:
        raise InvalidArgument("depth must be at least 2")
    F = field or QQ
    corrections = corrections or {}
    family = {n: {-n - 1: F.one} for n in range(1, m + 1)}
    annihilated = all(not _laurent_reduce(_laurent_shift(w, 1), n) for n, w in family.items())
    trace = []
    for e in range(1, m + 1):
        n = e
        y = dict(family[n])
        for k, a in corrections.get(n, {}).items():
            if not -n <= k <= -1:
                raise InvalidArgument("corrections must lie in z^{-n}k[[z]]/k[[z]]")
            y[k] = F.reduce(y.get(k, F.zero) + a)
        lifts = _laurent_reduce(y, n) == _laurent_reduce(family[n], n)
        killed = _laurent_reduce(_laurent_shift(y, e), 0)
        trace.append({"exponent": e, "index": n, "lift_ok": lifts,
                      "residual": {str(k): str(v) for k, v in sorted(killed.items())},
                      "contradiction": lifts and bool(killed)})
    return {"depth": m, "family_annihilated_by_z": annihilated, "trace": trace,
            "passed": annihilated and all(t["contradiction"] for t in trace)}
