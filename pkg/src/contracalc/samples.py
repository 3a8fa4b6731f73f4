"""Seeded random objects for property checks.

Everything is built as sub- or quotient objects of cofree comodules and free
contramodules, then moved by a random unimodular integer base change so the
coordinates are not aligned with the construction.  Integer matrices with
determinant 1 keep entries over Q integral.
"""

from __future__ import annotations

import random

from .coalgebra import Coalgebra
from .comodule import Comodule, cofree, cofree_right, quotient, subcomodule, transport, hom_comodules
from .contramodule_fd import (ContramoduleFD, free, from_dual_of_comodule, hom_contra,
                              quotient as contra_quotient, subcontramodule,
                              transport as contra_transport)
from .exact_linalg import Mat, hstack
from .scalars import Field


def unimodular(F: Field, n: int, rng: random.Random, steps: int | None = None) -> Mat:
    T = Mat.identity(F, n)
    if n < 2:
        return T
    for _ in range(steps if steps is not None else 2 * n):
        i, j = rng.sample(range(n), 2)
        a = F.reduce(F(rng.choice([-1, 1, 2])))
        # row_i += a * row_j
        T.rows[i] = [F.reduce(x + a * y) for x, y in zip(T.rows[i], T.rows[j])]
    perm = list(range(n))
    rng.shuffle(perm)
    return Mat(F, [T.rows[p] for p in perm], n)


def random_vector(F: Field, n: int, rng: random.Random, density: float = 0.5) -> Mat:
    col = [F.reduce(F(rng.randint(-2, 2))) if rng.random() < density else F.zero for _ in range(n)]
    if all(x == 0 for x in col) and n:
        col[rng.randrange(n)] = F.one
    return Mat(F, [[x] for x in col], 1)


def random_comodule(C: Coalgebra, side: str = "left", rng: random.Random | None = None,
                    max_dim: int = 6, scramble: bool = True) -> Comodule:
    """A nonzero comodule of dimension <= max_dim (when C allows it)."""
    rng = rng or random.Random(0)
    F = C.field
    for _ in range(30):
        V = rng.randint(1, 2)
        amb = cofree(C, V) if side == "left" else cofree_right(C, V)
        gens = hstack(*[random_vector(F, amb.dim, rng, rng.choice([0.2, 0.5])) for _ in range(rng.randint(1, 2))])
        S = subcomodule(amb, gens)
        M = S.obj
        if M.dim > max_dim:
            continue
        if M.dim > 1 and rng.random() < 0.4:
            T = subcomodule(M, random_vector(F, M.dim, rng, 0.3))
            if 0 < T.obj.dim < M.dim:
                M = quotient(M, T.inclusion).obj
        if M.dim == 0:
            continue
        if scramble:
            M = transport(M, unimodular(F, M.dim, rng))
        return M
    # fall back to a cyclic subcomodule of the regular comodule
    amb = cofree(C, 1) if side == "left" else cofree_right(C, 1)
    return subcomodule(amb, Mat(F, [[F.one]] + [[F.zero]] * (C.dim - 1), 1)).obj


def random_contramodule(C: Coalgebra, rng: random.Random | None = None, max_dim: int = 6,
                        scramble: bool = True) -> ContramoduleFD:
    rng = rng or random.Random(0)
    F = C.field
    for _ in range(30):
        kind = rng.random()
        if kind < 0.35:
            N = random_comodule(C, "right", rng, max_dim, scramble=False)
            P = from_dual_of_comodule(N, 1)
        else:
            V = rng.randint(1, 2)
            amb = free(C, V)
            gens = hstack(*[random_vector(F, amb.dim, rng, rng.choice([0.2, 0.5])) for _ in range(rng.randint(1, 2))])
            P = subcontramodule(amb, gens).obj
            if P.dim > 1 and rng.random() < 0.5:
                T = subcontramodule(P, random_vector(F, P.dim, rng, 0.3))
                if 0 < T.obj.dim < P.dim:
                    P = contra_quotient(P, T.inclusion).obj
        if P.dim == 0 or P.dim > max_dim:
            continue
        if scramble:
            P = contra_transport(P, unimodular(F, P.dim, rng))
        return P
    return free(C, 1)


def random_ses_comodule(C: Coalgebra, side: str, rng: random.Random, max_dim: int = 6):
    from .cofunctors import SES
    F = C.field
    L = random_comodule(C, side, rng, max_dim)
    for _ in range(10):
        S = subcomodule(L, random_vector(F, L.dim, rng, 0.4))
        if S.obj.dim < L.dim or L.dim == 1:
            break
    Q = quotient(L, S.inclusion)
    return SES(S.obj, L, Q.obj, S.inclusion, Q.projection)


def random_ses_contra(C: Coalgebra, rng: random.Random, max_dim: int = 6):
    from .cofunctors import SES
    F = C.field
    L = random_contramodule(C, rng, max_dim)
    for _ in range(10):
        S = subcontramodule(L, random_vector(F, L.dim, rng, 0.4))
        if S.obj.dim < L.dim or L.dim == 1:
            break
    Q = contra_quotient(L, S.inclusion)
    return SES(S.obj, L, Q.obj, S.inclusion, Q.projection)


def random_combination(F: Field, basis: list, rng: random.Random, shape) -> Mat:
    out = Mat.zeros(F, *shape)
    for b in basis:
        c = F.reduce(F(rng.randint(-2, 2)))
        if c != 0:
            out = out + b.scale(c)
    return out


def random_comodule_morphism(L: Comodule, M: Comodule, rng: random.Random) -> Mat:
    return random_combination(L.field, hom_comodules(L, M), rng, (M.dim, L.dim))


def random_contra_morphism(P: ContramoduleFD, Q: ContramoduleFD, rng: random.Random) -> Mat:
    return random_combination(P.field, hom_contra(P, Q), rng, (Q.dim, P.dim))
