"""Free contramodules R[[X]] over R = Z_p or k[[z]], handled as towers.

An element of R[[X]] is a family (r_x) converging to zero.  At level N only
the finitely many x with r_x != 0 mod m^N matter, so the level-N content is
an ordinary finite combination in (R/m^N)[X].
"""

from __future__ import annotations

import os

from ..errors import InvalidArgument
from ..scalars import AdicRing, CoefficientFamily, ExactFamily, LazyFamily

DEFAULT_MAX_LEVEL = 64


def max_level() -> int:
    """Tower depth cap, overridable through CONTRACALC_MAX_LEVEL."""
    raw = os.environ.get("CONTRACALC_MAX_LEVEL")
    if raw is None:
        return DEFAULT_MAX_LEVEL
    try:
        v = int(raw)
    except ValueError as exc:
        raise InvalidArgument(f"CONTRACALC_MAX_LEVEL must be an integer, got {raw!r}") from exc
    if v < 1:
        raise InvalidArgument("CONTRACALC_MAX_LEVEL must be positive")
    return v


def check_level(N: int) -> int:
    if N < 0:
        raise InvalidArgument("level must be nonnegative")
    cap = max_level()
    if N > cap:
        raise InvalidArgument(f"level {N} exceeds the evaluation cap {cap} (CONTRACALC_MAX_LEVEL)")
    return N


class FreeContra:
    """R[[X]] with X = range(size), or the naturals when size is None."""

    def __init__(self, ring: AdicRing, size: int | None = None):
        if size is not None and size < 0:
            raise InvalidArgument("index set size must be nonnegative")
        self.ring = ring
        self.size = size

    def element(self, family: CoefficientFamily) -> "FreeContraElement":
        return FreeContraElement(self, family)

    def from_values(self, values, tail=None) -> "FreeContraElement":
        """Exact element with a finite list of leading coefficients (zeros after,
        or the geometric tail (c, slope, offset) on the naturals)."""
        if self.size is not None:
            vals = list(values)
            if len(vals) > self.size:
                raise InvalidArgument("more coefficients than generators")
            return self.element(ExactFamily(self.ring, vals, self.size))
        return self.element(ExactFamily(self.ring, values, None, tail))

    def basis(self, x: int) -> "FreeContraElement":
        self._check_index(x)
        return self.element(ExactFamily.basis(self.ring, x, self.size))

    def zero(self) -> "FreeContraElement":
        return self.from_values([])

    def _check_index(self, x):
        if x < 0 or (self.size is not None and x >= self.size):
            raise IndexError(x)

    def __eq__(self, other):
        return isinstance(other, FreeContra) and other.ring == self.ring and other.size == self.size

    def __hash__(self):
        return hash((self.ring, self.size))

    def __repr__(self):
        X = "N" if self.size is None else str(self.size)
        return f"{self.ring!r}[[{X}]]"


class FreeContraElement:
    def __init__(self, parent: FreeContra, family: CoefficientFamily):
        if family.ring != parent.ring or family.size != parent.size:
            raise InvalidArgument("coefficient family does not match the free contramodule")
        self.parent = parent
        self.family = family

    @property
    def ring(self) -> AdicRing:
        return self.parent.ring

    def level(self, N: int) -> dict:
        """{x: residue mod m^N} over the nonzero coefficients."""
        check_level(N)
        return self.family.level(N)

    def is_exact(self) -> bool:
        return isinstance(self.family, ExactFamily)

    def compatible(self, N: int) -> bool:
        """reduce_N of the level-(N+1) form equals the level-N form."""
        hi = self.level(N + 1)
        lo = self.level(N)
        red = {}
        for x, r in hi.items():
            v = self.ring.residue(r, N)
            if not _is_zero(self.ring, v):
                red[x] = v
        return red == lo

    def _lazy_combine(self, terms):
        """Sum of c_i * e_i for exact scalars c_i and elements e_i, level by level."""
        R = self.ring

        def fn(x, N):
            acc = R.element(0, N)
            for c, e in terms:
                acc = acc + R.element(c, N) * e.family.coeff(x, N)
            return acc

        def support(N):
            out = set()
            for _, e in terms:
                out.update(e.family.support(N))
            return out

        return FreeContraElement(self.parent, LazyFamily(R, fn, support, self.parent.size))

    def __add__(self, other):
        return combine(self.parent, [(1, self), (1, other)])

    def __sub__(self, other):
        return combine(self.parent, [(1, self), (-1, other)])

    def __neg__(self):
        return combine(self.parent, [(-1, self)])

    def scale(self, c):
        return combine(self.parent, [(c, self)])

    def __rmul__(self, c):
        return self.scale(c)

    def equal_at(self, other, N: int) -> bool:
        return (self - other).level(N) == {}

    def __repr__(self):
        return f"<element of {self.parent!r}: {self.family!r}>"


def _is_zero(ring, r) -> bool:
    return r == 0 if ring.kind == "zp" else r.is_zero()


def combine(parent: FreeContra, terms) -> FreeContraElement:
    """Finite R-linear combination sum c_i e_i; exact when every e_i is exact."""
    terms = [(parent.ring.coerce_exact(c), e) for c, e in terms]
    for _, e in terms:
        if e.parent != parent:
            raise InvalidArgument("elements of different free contramodules")
    if all(e.is_exact() for _, e in terms):
        fam = ExactFamily(parent.ring, [], parent.size) if parent.size is not None \
            else ExactFamily(parent.ring, [])
        for c, e in terms:
            fam = fam + e.family.scale(c)
        if isinstance(fam, ExactFamily):
            return FreeContraElement(parent, fam)
    if not terms:
        return parent.zero()
    return terms[0][1]._lazy_combine(terms)


def monad_mult(outer: FreeContraElement, inner: list) -> FreeContraElement:
    """Open the parentheses: sum_i outer_i * inner_i.

    ``outer`` lives in R[[range(k)]] and indexes the finite list ``inner`` of
    elements of one free contramodule.  Level N of the result only needs the
    level-N data of both, which is how the lazy branch evaluates it.
    """
    if outer.parent.size is None or outer.parent.size != len(inner):
        raise InvalidArgument("outer combination must be indexed by the finite list of inner elements")
    if not inner:
        raise InvalidArgument("empty inner list has no target contramodule")
    parent = inner[0].parent
    if any(e.parent != parent for e in inner):
        raise InvalidArgument("inner elements live in different free contramodules")
    R = parent.ring
    if outer.is_exact():
        return combine(parent, [(outer.family.value(i), e) for i, e in enumerate(inner)])

    def fn(x, N):
        acc = R.element(0, N)
        for i in outer.family.support(N):
            acc = acc + outer.family.coeff(i, N) * inner[i].family.coeff(x, N)
        return acc

    def support(N):
        out = set()
        for i in outer.family.support(N):
            out.update(inner[i].family.support(N))
        return out

    return FreeContraElement(parent, LazyFamily(R, fn, support, parent.size))


def monad_unit(parent: FreeContra, x: int) -> FreeContraElement:
    """epsilon: X -> R[[X]], x -> e_x."""
    return parent.basis(x)


def level_mult(outer_level: dict, inner_levels: list, ring: AdicRing, N: int) -> dict:
    """Opening of parentheses computed directly in (R/m^N)[X] from level-N data."""
    out: dict = {}
    for i, a in outer_level.items():
        for x, b in inner_levels[i].items():
            out[x] = ring.residue(out.get(x, 0 if ring.kind == "zp" else ring.exact_zero()) + a * b, N)
    return {x: r for x, r in out.items() if not _is_zero(ring, r)}
