"""Comodule-contramodule correspondence.

Psi(M) = Hom_C(C, M) and Phi(P) = C (.)_C P, both computed with C as a
bicomodule over itself.  The comparison maps are the adjunction counit
Phi Psi M -> M (c (x) g -> g(c)) and unit P -> Psi Phi P (p -> (c -> [c (x) p])).

Coordinates: Hom_k(C, M) has (c, t) at c*m + t; C (x) P has (c, i) at c*q + i.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .coalgebra import Coalgebra
from .cofunctors import contratensor_as_left_comodule, hom_as_contramodule, regular_bicomodule
from .comodule import Comodule, cofree, is_injective, is_morphism as comodule_morphism
from .contramodule_fd import ContramoduleFD, free, is_morphism as contra_morphism, is_projective
from .errors import InvalidArgument
from .exact_linalg import Mat, is_bijective, smith_normal_form, solve
from .scalars import ZZ, AdicRing


def psi(M: Comodule) -> ContramoduleFD:
    return psi_with_inclusion(M)[0]


def psi_with_inclusion(M: Comodule):
    """Psi(M) and its inclusion into Hom_k(C, M)."""
    if M.side != "left":
        raise InvalidArgument("Psi takes a left comodule")
    P, incl = hom_as_contramodule(regular_bicomodule(M.C), M)
    P.name = "Psi(M)"
    return P, incl


def phi(P: ContramoduleFD) -> Comodule:
    return phi_with_projection(P)[0]


def phi_with_projection(P: ContramoduleFD):
    """Phi(P) and the contratensor data (projection from C (x) P)."""
    M, R = contratensor_as_left_comodule(regular_bicomodule(P.C), P)
    M.name = "Phi(P)"
    return M, R


# ---------------------------------------------------------------------------
# Unit and counit

def counit(M: Comodule):
    """Phi(Psi(M)) -> M; returns (Phi Psi M, matrix, well_defined)."""
    F = M.field
    d, m = M.C.dim, M.dim
    H, incl = psi_with_inclusion(M)
    W, R = phi_with_projection(H)
    h = H.dim
    # e_c (x) g_k -> g_k(e_c) = sum_t incl[(c, t), k] e_t
    T = Mat.zeros(F, m, d * h)
    for c in range(d):
        for k in range(h):
            for t in range(m):
                T.rows[t][c * h + k] = incl.rows[c * m + t][k]
    if R.dim == 0:
        return W, Mat.zeros(F, m, 0), all(a == 0 for r in T.rows for a in r)
    X = T @ R.section
    return W, X, X @ R.projection == T


def unit(P: ContramoduleFD):
    """P -> Psi(Phi(P)); returns (Psi Phi P, matrix, well_defined)."""
    F = P.field
    d, q = P.C.dim, P.dim
    W, R = phi_with_projection(P)
    w = W.dim
    H, incl = psi_with_inclusion(W)
    # p_i -> (e_c -> [e_c (x) p_i]) with coordinates (c, s) at c*w + s
    U = Mat.zeros(F, d * w, q)
    for c in range(d):
        for s in range(w):
            for i in range(q):
                U.rows[c * w + s][i] = R.projection.rows[s][c * q + i]
    if H.dim == 0:
        ok = all(a == 0 for r in U.rows for a in r)
        return H, Mat.zeros(F, 0, q), ok
    X = solve(incl, U)
    if X is None:
        return H, None, False
    return H, X, True


@dataclass
class CorrespondenceCertificate:
    object: str
    direction: str                # "comodule" (counit) or "contramodule" (unit)
    image: object
    comparison: Mat | None
    well_defined: bool
    morphism: bool
    bijective: bool
    required: bool                # the object is injective / projective
    dims: dict = dc_field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "isomorphism" if self.bijective else "non-iso"

    @property
    def passed(self) -> bool:
        return self.well_defined and self.morphism and (self.bijective or not self.required)

    def to_json(self, witness: bool = False) -> dict:
        out = {"object": self.object, "functor": "Phi.Psi" if self.direction == "comodule" else "Psi.Phi",
               "verdict": self.verdict, "required": self.required,
               "well_defined": self.well_defined, "morphism": self.morphism,
               "dims": self.dims, "passed": self.passed}
        if witness and self.comparison is not None:
            out["comparison"] = self.comparison.to_json()
        return out


def roundtrip(obj, direction: str | None = None) -> CorrespondenceCertificate:
    if direction is None:
        direction = "contramodule" if isinstance(obj, ContramoduleFD) else "comodule"
    if direction == "comodule":
        if not isinstance(obj, Comodule):
            raise InvalidArgument("the counit direction takes a left comodule")
        W, X, ok = counit(obj)
        mor = ok and comodule_morphism(X, W, obj)
        req = is_injective(obj).split
        src, tgt = W.dim, obj.dim
    elif direction == "contramodule":
        if not isinstance(obj, ContramoduleFD):
            raise InvalidArgument("the unit direction takes a contramodule")
        W, X, ok = unit(obj)
        mor = ok and contra_morphism(X, obj, W)
        req = is_projective(obj).split
        src, tgt = obj.dim, W.dim
    else:
        raise InvalidArgument(f"unknown direction {direction!r}")
    bij = bool(ok) and src == tgt and is_bijective(X)
    return CorrespondenceCertificate(obj.name or repr(obj), direction, W, X, bool(ok), bool(mor),
                                     bij, req, {"source": src, "target": tgt})


# ---------------------------------------------------------------------------
# Explicit isomorphisms on cofree and free objects

def psi_cofree(C: Coalgebra, V: int):
    """free(C, V) -> Psi(cofree(C, V)), h -> (id (x) h) mu.

    Returns (matrix, is_isomorphism_of_contramodules)."""
    F = C.field
    d = C.dim
    M = cofree(C, V)
    H, incl = psi_with_inclusion(M)
    Fr = free(C, V)
    # column (c', t): e_c -> sum_a mu[c][a][c'] e_a (x) e_t
    T = Mat.zeros(F, d * d * V, d * V)
    for c in range(d):
        for a in range(d):
            for cp in range(d):
                v = C.comult(c, a, cp)
                if v != 0:
                    for t in range(V):
                        T.rows[c * d * V + a * V + t][cp * V + t] = v
    X = solve(incl, T)
    if X is None:
        return None, False
    return X, is_bijective(X) and contra_morphism(X, Fr, H)


def phi_free(C: Coalgebra, V: int):
    """Phi(free(C, V)) -> cofree(C, V), e_c (x) (f_c' (x) e_t) -> sum_a mu[c][a][c'] e_a (x) e_t."""
    F = C.field
    d = C.dim
    Fr = free(C, V)
    W, R = phi_with_projection(Fr)
    T = Mat.zeros(F, d * V, d * d * V)
    for c in range(d):
        for a in range(d):
            for cp in range(d):
                v = C.comult(c, a, cp)
                if v != 0:
                    for t in range(V):
                        T.rows[a * V + t][c * d * V + cp * V + t] = v
    X = T @ R.section
    ok = X @ R.projection == T
    return X, ok and is_bijective(X) and comodule_morphism(X, W, cofree(C, V))


# ---------------------------------------------------------------------------
# Harrison correspondence at finite levels

def _frac_mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass
class HarrisonLevel:
    level: int
    hom_summands: list          # cyclic orders of Hom(p^-N Z/Z, (Q_p/Z_p)^n), as exponents
    free_summands: list         # level-N module of Z_p[[X]]
    transition_identity: bool   # multiplication by p matches reduction on generators
    random_agree: bool          # ... and on random elements
    tensor_summands: list       # (p^-N Z/Z) (x) Z_p[[X]] at level N

    @property
    def passed(self) -> bool:
        N = self.level
        return (self.hom_summands == self.free_summands and self.transition_identity
                and self.random_agree and self.tensor_summands == self.hom_summands
                and all(e == N for e in self.hom_summands))

    def to_json(self) -> dict:
        return {"level": self.level, "hom": self.hom_summands, "free": self.free_summands,
                "tensor": self.tensor_summands, "transition": self.transition_identity,
                "random": self.random_agree, "passed": self.passed}


@dataclass
class HarrisonReport:
    p: int
    set_size: int
    precision: int
    levels: list

    @property
    def passed(self) -> bool:
        return all(L.passed for L in self.levels)

    def to_json(self) -> dict:
        return {"p": self.p, "set_size": self.set_size, "precision": self.precision,
                "levels": [L.to_json() for L in self.levels], "passed": self.passed}


def _vp(m: int, p: int) -> int:
    v = 0
    while m % p == 0 and m:
        m //= p
        v += 1
    return v


def _torsion_generators(p: int, n: int, N: int) -> list:
    """Generators of the p^N-torsion of (Q_p/Z_p)^n, found among the
    elements (a/p^(N+1)) e_x by testing p^N y = 0 (mod 1)."""
    gens = []
    for x in range(n):
        cands = [Fraction(a, p ** (N + 1)) for a in range(1, p ** 2)]
        killed = [y for y in cands if _frac_mod1(p ** N * y) == 0]
        # the killed candidate of largest order generates the cyclic torsion
        g = max(killed, key=lambda y: y.denominator)
        vec = [Fraction(0)] * n
        vec[x] = g
        gens.append(vec)
    return gens


def harrison_truncated(n: int, N: int, p: int, seed: int = 0) -> HarrisonReport:
    """Compare {Hom(p^-k Z/Z, (Q_p/Z_p)^n)}_k (transition: multiplication by p)
    with the tower of Z_p[[n]] (transition: reduction) for k <= N."""
    from .adic import PresentedContra, reduction
    from .adic.free import check_level
    if n < 0 or N < 1:
        raise InvalidArgument("need n >= 0 and N >= 1")
    check_level(N + 1)
    R = AdicRing.zp(p)
    Pfree = PresentedContra.free(R, n)
    rng = random.Random(seed)
    levels = []
    prev = None
    for k in range(1, N + 1):
        gens = _torsion_generators(p, n, k)
        hom = sorted(_vp(max(y.denominator for y in g), p) for g in gens)
        free_k = reduction(Pfree, k).summands
        # (p^-k Z/Z) (x) (Z/p^k)^n presented over Z by p^k (x) I and 1 (x) p^k I
        if n:
            rows = [[p ** k if i == j else 0 for j in range(n)] for i in range(n)] * 2
            facs = smith_normal_form(Mat(ZZ, rows, n)).invariant_factors
            tensor = sorted(_vp(f, p) for f in facs)
        else:
            tensor = []
        trans = rand = True
        if prev is not None:
            # restriction to p^-(k-1) Z/Z sends a map with value y to p*y
            for x, g in enumerate(gens):
                img = [_frac_mod1(p * c) for c in g]
                coords = [int(c * p ** (k - 1)) % p ** (k - 1) for c in img]
                if coords != [1 if i == x else 0 for i in range(n)]:
                    trans = False
            for _ in range(5):
                a = [rng.randrange(p ** k) for _ in range(n)]
                y = [_frac_mod1(Fraction(ai, p ** k)) for ai in a]
                down = [int(_frac_mod1(p * c) * p ** (k - 1)) % p ** (k - 1) for c in y]
                el = Pfree.E.from_values(a)
                red = el.level(k - 1)
                if down != [red.get(i, 0) for i in range(n)]:
                    rand = False
        levels.append(HarrisonLevel(k, hom, free_k, trans, rand, tensor))
        prev = gens
    return HarrisonReport(p, n, N, levels)
