"""Finite-dimensional contramodules over a finite-dimensional coalgebra.

A contramodule P of dimension q has contraaction pi: Hom_k(C, P) -> P.  We
identify Hom_k(C, P) with C* (x) P, f_c (x) p_i at index c*q + i, so pi is a
q x (d*q) matrix and its column block c is the action of f_c on P.

Contraassociativity needs an identification of Hom_k(C (x) C, P) with
Hom_k(C, Hom_k(C, P)).  We use the left rule: a map h on C (x) C goes to the
map c'' -> (c' -> h(c' (x) c'')), so the outer Hom eats the second tensor
factor.  In coordinates the element f_a (x) f_b (x) p_i of Hom(C (x) C, P)
becomes f_b (x) (f_a (x) p_i), and Hom(C, pi) sends that to f_b (x) pi(f_a (x) p_i).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .coalgebra import Certificate, Coalgebra, DualAlgebra, certify
from .comodule import (Comodule, Quot, Sub, SplitCertificate, _same_coalgebra,
                       intertwiner_space, invariant_closure)
from .errors import DimensionMismatch, InvalidArgument, ParseError
from .exact_linalg import Mat, cokernel, hstack, kron, left_inverse, right_inverse, solve
from .scalars import Field


class ContramoduleFD:
    def __init__(self, C: Coalgebra, dim: int, contraaction: Mat, name: str | None = None):
        if contraaction.shape != (dim, C.dim * dim):
            raise DimensionMismatch(f"contraaction must be {dim}x{C.dim*dim}, got {contraaction.shape}")
        self.C = C
        self.dim = dim
        self.contraaction = contraaction
        self.name = name

    side = "left"

    @property
    def field(self) -> Field:
        return self.C.field

    def action(self, c: int) -> Mat:
        return self.contraaction.col_block(c, self.dim)

    @cached_property
    def actions(self) -> list:
        return [self.action(c) for c in range(self.C.dim)]

    def act(self, f: list) -> Mat:
        out = Mat.zeros(self.field, self.dim, self.dim)
        for c, a in enumerate(f):
            if a != 0:
                out = out + self.actions[c].scale(a)
        return out

    @cached_property
    def generator_actions(self) -> list:
        return [self.act(g) for g in self.C.generators]

    @classmethod
    def from_actions(cls, C: Coalgebra, mats: list, name=None) -> "ContramoduleFD":
        if len(mats) != C.dim:
            raise DimensionMismatch("need one action matrix per basis vector of C")
        q = mats[0].nrows if mats else 0
        if q == 0:
            return cls(C, 0, Mat.zeros(C.field, 0, 0), name)
        return cls(C, q, hstack(*mats), name)

    def __repr__(self):
        return f"<contramodule dim {self.dim} over {self.C.name}{' ' + self.name if self.name else ''}>"

    def __eq__(self, other):
        return isinstance(other, ContramoduleFD) and other.C == self.C and other.contraaction == self.contraaction

    def __hash__(self):
        return hash(self.dim)

    def to_json(self, coalgebra_ref: str = "coalgebra.json") -> dict:
        return {"coalgebra": coalgebra_ref, "dim": self.dim,
                "contraaction": [[i, j, str(a)] for i, j, a in self.contraaction.nonzero_entries()]}

    @classmethod
    def from_json(cls, obj, C: Coalgebra) -> "ContramoduleFD":
        try:
            q = int(obj["dim"])
            triples = [(int(i), int(j), C.field.parse(str(a))) for i, j, a in obj["contraaction"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed contramodule: {exc}") from exc
        return cls(C, q, Mat.sparse(C.field, q, C.dim * q, triples))


# ---------------------------------------------------------------------------
# The two identifications of Hom(C (x) C, P)

def left_rule_matrix(P: ContramoduleFD) -> Mat:
    """Hom(C, pi) composed with the left identification, as a
    (d*q) x (d*d*q) matrix.  Column (a*d + b)*q + i goes to row b*q + i'
    with coefficient pi[i', a*q + i]."""
    d, q = P.C.dim, P.dim
    F = P.field
    H = Mat.zeros(F, d * q, d * d * q)
    pi = P.contraaction
    for a in range(d):
        for b in range(d):
            for i in range(q):
                col = (a * d + b) * q + i
                for ip in range(q):
                    v = pi.rows[ip][a * q + i]
                    if v != 0:
                        H.rows[b * q + ip][col] = v
    return H


def right_rule_matrix(P: ContramoduleFD) -> Mat:
    """The same with the tensor factors swapped: the outer Hom eats the
    first factor.  Kept only to show it is the wrong convention."""
    d, q = P.C.dim, P.dim
    F = P.field
    H = Mat.zeros(F, d * q, d * d * q)
    pi = P.contraaction
    for a in range(d):
        for b in range(d):
            for i in range(q):
                col = (a * d + b) * q + i
                for ip in range(q):
                    v = pi.rows[ip][b * q + i]
                    if v != 0:
                        H.rows[a * q + ip][col] = v
    return H


def check_contramodule(P: ContramoduleFD, rule: str = "left") -> Certificate:
    """Contraassociativity and contraunitality.

    Entry (i', a, b, i) of pi Hom(mu, P) - pi Hom(C, pi) is the (i', i) entry
    of sum_c mu[c][a][b] A_c - A_b A_a under the left rule; the right rule
    gives A_a A_b in the second term.  Computed block by block.
    """
    from .comodule import assoc_defect, counit_defect
    C = P.C
    d, q = C.dim, P.dim
    if P.contraaction.shape != (q, d * q):
        raise DimensionMismatch("contraaction does not match dimensions")
    if rule not in ("left", "right"):
        raise InvalidArgument("rule must be left or right")
    acts = P.actions
    diff = assoc_defect(C, acts, reverse=(rule == "right"))

    def decode(r, i):
        ab, ip = divmod(r, q)
        a, b = divmod(ab, d)
        return (ip, a, b, i)

    return certify([("contraassociativity", diff, decode),
                    ("contraunitality", counit_defect(C, acts), lambda r, c: (r, c))])


def check_contramodule_tensor(P: ContramoduleFD, rule: str = "left") -> Certificate:
    """The literal matrix identities pi Hom(mu,P) = pi Hom(C,pi) Id and
    pi Hom(eps,P) = id, with the chosen identification (slow)."""
    C = P.C
    q = P.dim
    F = C.field
    pi = P.contraaction
    Iq = Mat.identity(F, q)
    H = left_rule_matrix(P) if rule == "left" else right_rule_matrix(P)
    return certify([("contraassociativity", pi @ kron(C.mu.T, Iq) - pi @ H, lambda r, c: (r, c)),
                    ("contraunitality", pi @ kron(C.eps_col, Iq) - Iq, lambda r, c: (r, c))])


# ---------------------------------------------------------------------------
# Constructions

def zero_contramodule(C: Coalgebra) -> ContramoduleFD:
    return ContramoduleFD(C, 0, Mat.zeros(C.field, 0, 0), name="0")


def from_dual_of_comodule(N: Comodule, V: int) -> ContramoduleFD:
    """Hom_k(N, V) for a right comodule N, coordinate (j, t) at j*V + t.

    pi(f_c (x) g)(n) = <f_c, n_(1)> g(n_(0)), which in coordinates reads
    pi[(j, t), c*q + (i, t)] = nu_N[(i, c), j].
    """
    if N.side != "right":
        raise InvalidArgument("Hom_k(N, V) is a left contramodule for a right comodule N")
    C = N.C
    F = C.field
    n = N.dim
    q = n * V
    if q == 0:
        return zero_contramodule(C)
    mats = [kron(N.action(c).T, Mat.identity(F, V)) for c in range(C.dim)]
    return ContramoduleFD.from_actions(C, mats, name=f"Hom(N,{V})")


def free(C: Coalgebra, V: int) -> ContramoduleFD:
    """Hom_k(C, V) = C* (x) V, the free contramodule on V."""
    from .comodule import cofree_right
    if V < 0:
        raise InvalidArgument("negative dimension")
    if V == 0:
        return zero_contramodule(C)
    # the right regular comodule is cofree_right(C, 1) = C with nu = mu
    P = from_dual_of_comodule(cofree_right(C, 1), V)
    P.name = f"free({V})"
    return P


def direct_sum(*Ps: ContramoduleFD) -> ContramoduleFD:
    C = _same_coalgebra(*Ps)
    F = C.field
    total = sum(P.dim for P in Ps)
    if total == 0:
        return zero_contramodule(C)
    mats = []
    for c in range(C.dim):
        A = Mat.zeros(F, total, total)
        o = 0
        for P in Ps:
            B = P.actions[c]
            for i, row in enumerate(B.rows):
                A.rows[o + i][o:o + B.ncols] = row
            o += P.dim
        mats.append(A)
    return ContramoduleFD.from_actions(C, mats, name="sum")


def transport(P: ContramoduleFD, T: Mat) -> ContramoduleFD:
    from .exact_linalg import inverse
    Ti = inverse(T)
    return ContramoduleFD.from_actions(P.C, [T @ A @ Ti for A in P.actions], name=P.name)


# ---------------------------------------------------------------------------
# Morphisms, sub- and quotient objects

def hom_contra(P: ContramoduleFD, Q: ContramoduleFD) -> list:
    """Basis of Hom^C(P, Q) as dim Q x dim P matrices."""
    _same_coalgebra(P, Q)
    return intertwiner_space(P.generator_actions, Q.generator_actions, P.dim, Q.dim, P.field)


def is_morphism(g: Mat, P: ContramoduleFD, Q: ContramoduleFD) -> bool:
    if g.shape != (Q.dim, P.dim):
        return False
    # g pi_P = pi_Q (id (x) g), compared block by block: g A^P_c = A^Q_c g
    return all(g @ A == B @ g for A, B in zip(P.actions, Q.actions))


def subcontramodule(P: ContramoduleFD, vectors: Mat) -> Sub:
    S = invariant_closure(P.generator_actions, vectors)
    if S.ncols == 0:
        return Sub(zero_contramodule(P.C), Mat.zeros(P.field, P.dim, 0))
    Linv = left_inverse(S)
    return Sub(ContramoduleFD.from_actions(P.C, [Linv @ A @ S for A in P.actions], name="sub"), S)


def quotient(P: ContramoduleFD, incl: Mat) -> Quot:
    Q, k = cokernel(incl)
    F = P.field
    if k == 0:
        return Quot(zero_contramodule(P.C), Mat.zeros(F, 0, P.dim), Mat.zeros(F, P.dim, 0))
    S = right_inverse(Q)
    return Quot(ContramoduleFD.from_actions(P.C, [Q @ A @ S for A in P.actions], name="quotient"), Q, S)


def presentation_map(P: ContramoduleFD) -> Mat:
    """pi itself, viewed as the surjection free(C, dim P) -> P."""
    return P.contraaction


def is_projective(P: ContramoduleFD) -> SplitCertificate:
    """True iff pi: free(C, q) -> P has a contramodule section s."""
    F = P.field
    q = P.dim
    if q == 0:
        Z = Mat.zeros(F, 0, 0)
        return SplitCertificate(True, Z, Z)
    hull = free(P.C, q)
    basis = hom_contra(P, hull)
    if not basis:
        return SplitCertificate(False)
    pi = P.contraaction
    cols = [[a for r in (pi @ s).rows for a in r] for s in basis]
    A = Mat.from_cols(F, cols, q * q)
    b = Mat(F, [[a] for r in Mat.identity(F, q).rows for a in r], 1)
    x = solve(A, b)
    if x is None:
        return SplitCertificate(False)
    s = Mat.zeros(F, hull.dim, q)
    for k, g in enumerate(basis):
        if x.rows[k][0] != 0:
            s = s + g.scale(x.rows[k][0])
    # report as (i, p) = (section, pi) so that p i = id
    return SplitCertificate(True, s, pi)


# ---------------------------------------------------------------------------
# Comparison with modules over the dual algebra

@dataclass
class DualModule:
    """A left module over C*, given by the action matrices of f_0..f_{d-1}."""

    algebra: DualAlgebra
    dim: int
    actions: list

    def check(self) -> bool:
        A = self.algebra
        F = A.field
        d = A.dim
        unit = Mat.zeros(F, self.dim, self.dim)
        for c, u in enumerate(A.unit):
            if u != 0:
                unit = unit + self.actions[c].scale(u)
        if unit != Mat.identity(F, self.dim):
            return False
        for a in range(d):
            for b in range(d):
                prod = A.mul(A.basis(a), A.basis(b))
                lhs = Mat.zeros(F, self.dim, self.dim)
                for c, x in enumerate(prod):
                    if x != 0:
                        lhs = lhs + self.actions[c].scale(x)
                if lhs != self.actions[a] @ self.actions[b]:
                    return False
        return True

    def __eq__(self, other):
        return isinstance(other, DualModule) and self.dim == other.dim and self.actions == other.actions


def dualalg_module_comparison(P) -> DualModule:
    """The C*-module underlying a contramodule (f.p = pi(f (x) p)) or a left
    comodule (f.m = <f, m_(-1)> m_(0))."""
    if isinstance(P, Comodule) and P.side != "left":
        raise InvalidArgument("only left comodules are left C*-modules")
    return DualModule(P.C.dual, P.dim, list(P.actions))


def contramodule_from_dual_module(C: Coalgebra, M: DualModule) -> ContramoduleFD:
    if M.dim == 0:
        return zero_contramodule(C)
    return ContramoduleFD.from_actions(C, list(M.actions))


def comodule_from_dual_module(C: Coalgebra, M: DualModule) -> Comodule:
    """Inverse comparison for comodules; for finite-dimensional C every
    C*-module is rational."""
    if M.dim == 0:
        from .comodule import zero_comodule
        return zero_comodule(C)
    return Comodule.from_actions(C, "left", list(M.actions))


def dual_module_homs(M: DualModule, N: DualModule) -> list:
    return intertwiner_space(M.actions, N.actions, M.dim, N.dim, M.algebra.field)
