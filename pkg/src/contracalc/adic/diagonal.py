"""Contramodules presented by diagonal maps.

A presentation is an exponent function dgn on an index set; P is the
cokernel of R[[I]] -> R[[I]], f_n -> pi^dgn(n) e_n (dgn(n) = inf means no
relation, so e_n is a free generator).  A family a lies in the image exactly
when every a_n is divisible by pi^dgn(n) and the quotients still converge,
i.e. val(a_n) - dgn(n) -> inf.  With exponent profiles (finite prefix plus an
affine tail) this is decidable, which is what makes equality in P decidable.

The exponent function is stored as a list of parts: finite parts are laid
out one after another, infinite parts are interleaved round robin after
them.  Direct sums, tensor products and Hom then stay inside the class.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from ..errors import IncompatibleSequence, InfiniteSource, InvalidArgument, ParseError
from ..exact_linalg import Mat, smith_normal_form
from ..scalars import AdicRing, CoefficientFamily, ExactFamily, ExponentProfile, LazyFamily
from .free import FreeContra, FreeContraElement, check_level, max_level, monad_mult


# ---------------------------------------------------------------------------
# Exponent profiles

def restrict_profile(prof: ExponentProfile, first: int, step: int, count: int | None = None) -> ExponentProfile:
    """j -> prof(first + step*j), for j < count (or all j when count is None)."""
    if count is not None:
        return ExponentProfile.finite(prof(first + step * j) for j in range(count))
    if prof.size is not None:
        raise InvalidArgument("cannot restrict a finite profile to an infinite progression")
    j0 = max(0, -(-(prof.start - first) // step))
    prefix = [prof(first + step * j) for j in range(j0)]
    if prof.tail is None:
        return ExponentProfile(prefix, None, None)
    s, o = prof.tail
    return ExponentProfile(prefix, None, (s * step, s * first + o))


def cap_profile(prof: ExponentProfile, a: int | None, inf_value: int | None = "cap") -> ExponentProfile:
    """Pointwise v -> min(a, v), with inf sent to ``inf_value`` (default: a)."""
    if inf_value == "cap":
        inf_value = a

    def f(v):
        if v is None:
            return inf_value
        return v if a is None else min(a, v)

    if prof.size is not None:
        return ExponentProfile.finite(f(prof(j)) for j in range(prof.size))
    prefix = [f(v) for v in prof.prefix]
    if prof.tail is None:
        tail = None if inf_value is None else (0, inf_value)
        return ExponentProfile(prefix, None, tail)
    s, o = prof.tail
    if a is None:
        return ExponentProfile(prefix, None, (s, o))
    if s == 0:
        return ExponentProfile(prefix, None, (0, min(a, o)))
    j = prof.start
    while s * j + o < a:
        prefix.append(s * j + o)
        j += 1
    return ExponentProfile(prefix, None, (0, a))


def _tensor_exp(a, b):
    if a is None:
        return b
    return a if b is None else min(a, b)


def _hom_exp(a, b):
    """Exponent of Hom_R(R/pi^a, R/pi^b) (inf meaning R)."""
    if a is None:
        return b
    return 0 if b is None else min(a, b)


# ---------------------------------------------------------------------------
# Presentations

class DiagonalPresentation:
    def __init__(self, ring: AdicRing, parts):
        parts = [p if isinstance(p, ExponentProfile) else ExponentProfile.finite(p) for p in parts]
        self.ring = ring
        self.parts = parts
        self._finite = [i for i, p in enumerate(parts) if p.size is not None]
        self._infinite = [i for i, p in enumerate(parts) if p.size is None]
        self._offsets = {}
        off = 0
        for i in self._finite:
            self._offsets[i] = off
            off += parts[i].size
        self.finite_count = off
        self.size = off if not self._infinite else None

    # -- constructors --
    @classmethod
    def from_profile(cls, ring, prof: ExponentProfile):
        return cls(ring, [prof])

    @classmethod
    def from_list(cls, ring, values):
        return cls(ring, [ExponentProfile.finite(values)])

    @classmethod
    def from_formula(cls, ring, expr: str):
        return cls(ring, [ExponentProfile.parse_formula(expr)])

    @classmethod
    def from_json(cls, obj) -> "DiagonalPresentation":
        if not isinstance(obj, dict) or "ring" not in obj or "diag" not in obj:
            raise ParseError("presentation needs 'ring' and 'diag'")
        ring = AdicRing.from_json(obj["ring"])
        diag = obj["diag"]
        kind = diag.get("type") if isinstance(diag, dict) else None
        if kind == "formula":
            return cls.from_formula(ring, diag.get("expr", ""))
        if kind == "list":
            vals = diag.get("values")
            if not isinstance(vals, list):
                raise ParseError("list presentation needs 'values'")
            try:
                return cls.from_list(ring, [None if v is None or v == "inf" else int(v) for v in vals])
            except (TypeError, ValueError) as exc:
                raise ParseError(f"bad exponent list {vals!r}") from exc
        raise ParseError(f"unknown diag type {kind!r}")

    def to_json(self) -> dict:
        if len(self.parts) == 1:
            p = self.parts[0]
            if p.size is not None:
                return {"ring": self.ring.to_json(), "diag": {"type": "list", "values": list(p.prefix)}}
            if not p.prefix and p.tail is not None:
                s, o = p.tail
                return {"ring": self.ring.to_json(), "diag": {"type": "formula", "expr": f"{s}*n+{o}"}}
        return {"ring": self.ring.to_json(), "parts": [repr(p) for p in self.parts]}

    # -- index layout --
    def locate(self, n: int) -> tuple:
        if n < 0:
            raise IndexError(n)
        if n < self.finite_count:
            for i in self._finite:
                off = self._offsets[i]
                if off <= n < off + self.parts[i].size:
                    return i, n - off
        if not self._infinite:
            raise IndexError(n)
        k = len(self._infinite)
        r, j = (n - self.finite_count) % k, (n - self.finite_count) // k
        return self._infinite[r], j

    def index(self, part: int, j: int) -> int:
        if part in self._offsets:
            return self._offsets[part] + j
        k = len(self._infinite)
        return self.finite_count + self._infinite.index(part) + k * j

    def dgn(self, n: int) -> int | None:
        i, j = self.locate(n)
        return self.parts[i](j)

    def restrict(self, prof: ExponentProfile) -> list:
        """Split a profile on the whole index set into per-part profiles."""
        out = []
        k = len(self._infinite)
        for i, p in enumerate(self.parts):
            if p.size is not None:
                out.append(restrict_profile(prof, self._offsets[i], 1, p.size))
            else:
                out.append(restrict_profile(prof, self.finite_count + self._infinite.index(i), k))
        return out

    def evaluated_support(self, level: int) -> list:
        """A finite window of indices: everything in the finite parts and, per
        infinite part, the listed prefix, every index with exponent < level
        (or ``level`` indices when there are infinitely many) and one more."""
        out = list(range(self.finite_count))
        for i in self._infinite:
            p = self.parts[i]
            try:
                below = p.indices_below(level)
                jb = (max(below) + 1) if below else 0
            except InvalidArgument:
                jb = level
            J = max(p.start, jb) + 1
            out.extend(self.index(i, j) for j in range(J))
        return sorted(out)

    def relations_trivial(self) -> bool:
        """Every exponent is 0 or inf."""
        for p in self.parts:
            if any(v not in (None, 0) for v in p.prefix):
                return False
            if p.tail is not None and p.tail != (0, 0):
                return False
        return True

    def __eq__(self, other):
        return isinstance(other, DiagonalPresentation) and other.ring == self.ring and other.parts == self.parts

    def __hash__(self):
        return hash((self.ring, tuple(self.parts)))

    def __repr__(self):
        return f"DiagonalPresentation({self.ring!r}, {self.parts})"


# ---------------------------------------------------------------------------
# Image membership

@dataclass
class Membership:
    member: bool
    index: int | None = None      # first failing index
    reason: str = ""

    def __bool__(self):
        return self.member


def _compare(ap: ExponentProfile, dp: ExponentProfile):
    """First j where a fails to be divisible by the relations, or where the
    quotient fails to converge; None when a lies in the image."""
    def pointwise(j):
        a, d = ap(j), dp(j)
        if a is None:
            return None
        if d is None:
            return (j, "nonzero coefficient on a free generator")
        if a < d:
            return (j, "valuation below the relation exponent")
        return None

    if dp.size is not None:
        for j in range(dp.size):
            bad = pointwise(j)
            if bad:
                return bad
        return None
    L = max(ap.start, dp.start)
    for j in range(L):
        bad = pointwise(j)
        if bad:
            return bad
    if ap.tail is None:
        return None
    if dp.tail is None:
        return (L, "nonzero coefficients on infinitely many free generators")
    (sa, oa), (sd, od) = ap.tail, dp.tail
    if sa * L + oa < sd * L + od:
        return (L, "valuation below the relation exponent")
    if sa <= sd:
        return (L, "val(a_n) - dgn(n) does not tend to infinity")
    return None


def membership(pres: DiagonalPresentation, a) -> Membership:
    fam = a.family if isinstance(a, FreeContraElement) else a
    if fam.size != pres.size:
        raise InvalidArgument("element and presentation have different index sets")
    prof = fam.profile()          # ProfileUnavailable for lazy families
    worst = None
    for i, (ap, dp) in enumerate(zip(pres.restrict(prof), pres.parts)):
        bad = _compare(ap, dp)
        if bad:
            n = pres.index(i, bad[0])
            if worst is None or n < worst[0]:
                worst = (n, bad[1])
    if worst is None:
        return Membership(True)
    return Membership(False, worst[0], worst[1])


def image_membership(pres: DiagonalPresentation, a) -> bool:
    return membership(pres, a).member


# ---------------------------------------------------------------------------
# Presented contramodules and their elements

class PresentedContra:
    def __init__(self, pres: DiagonalPresentation):
        self.pres = pres
        self.ring = pres.ring
        self.E = FreeContra(pres.ring, pres.size)

    @classmethod
    def free(cls, ring, size: int | None):
        prof = ExponentProfile.finite([None] * size) if size is not None else ExponentProfile((), None, None)
        return cls(DiagonalPresentation(ring, [prof]))

    @classmethod
    def from_list(cls, ring, values):
        return cls(DiagonalPresentation.from_list(ring, values))

    @classmethod
    def from_formula(cls, ring, expr):
        return cls(DiagonalPresentation.from_formula(ring, expr))

    def element(self, rep) -> "PresentedElement":
        if not isinstance(rep, FreeContraElement):
            rep = self.E.element(rep)
        return PresentedElement(self, rep)

    def generator(self, n: int) -> "PresentedElement":
        return PresentedElement(self, self.E.basis(n))

    def generators(self) -> "GeneratorFamily":
        return GeneratorFamily(self)

    def zero(self) -> "PresentedElement":
        return PresentedElement(self, self.E.zero())

    def __eq__(self, other):
        return isinstance(other, PresentedContra) and other.pres == self.pres

    def __hash__(self):
        return hash(self.pres)

    def __repr__(self):
        return f"<contramodule {self.pres!r}>"


class PresentedElement:
    def __init__(self, parent: PresentedContra, rep: FreeContraElement):
        if rep.parent != parent.E:
            raise InvalidArgument("representative does not live in the presenting free contramodule")
        self.parent = parent
        self.rep = rep

    def is_zero(self) -> bool:
        return image_membership(self.parent.pres, self.rep)

    def __add__(self, other):
        return PresentedElement(self.parent, self.rep + other.rep)

    def __sub__(self, other):
        return PresentedElement(self.parent, self.rep - other.rep)

    def __neg__(self):
        return PresentedElement(self.parent, -self.rep)

    def scale(self, c):
        return PresentedElement(self.parent, self.rep.scale(c))

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, PresentedElement) or other.parent != self.parent:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"<class of {self.rep.family!r}>"


class GeneratorFamily:
    """The family n -> p_n of generator classes."""

    def __init__(self, P: PresentedContra):
        self.P = P

    def __call__(self, n):
        return self.P.generator(n)


def contra_sum(coeffs: CoefficientFamily, elems, P: PresentedContra) -> PresentedElement:
    """sum_n a_n x_n in P: the class of the level-wise finite sum of representatives.

    ``elems`` is a finite list, the generator family of P, or any callable
    n -> element (evaluated level by level, so the result then has no exact
    valuation profile).
    """
    R = P.ring
    if coeffs.ring != R:
        raise InvalidArgument("coefficients over a different ring")
    if isinstance(elems, GeneratorFamily):
        if elems.P != P:
            raise InvalidArgument("generators of a different contramodule")
        if coeffs.size != P.E.size:
            raise InvalidArgument("coefficient family and generators have different index sets")
        return PresentedElement(P, P.E.element(coeffs))
    if isinstance(elems, (list, tuple)):
        if coeffs.size != len(elems):
            raise InvalidArgument("coefficient family and elements have different index sets")
        if not elems:
            return P.zero()
        outer = FreeContra(R, len(elems)).element(coeffs)
        return PresentedElement(P, monad_mult(outer, [e.rep for e in elems]))

    def fn(x, N):
        acc = R.element(0, N)
        for n in coeffs.support(N):
            acc = acc + coeffs.coeff(n, N) * elems(n).rep.family.coeff(x, N)
        return acc

    def support(N):
        out = set()
        for n in coeffs.support(N):
            out.update(elems(n).rep.family.support(N))
        return out

    return PresentedElement(P, P.E.element(LazyFamily(R, fn, support, P.E.size)))


# ---------------------------------------------------------------------------
# The non-separated example

@dataclass
class CounterexampleCertificate:
    ring: str
    depth: int
    partial_sums_zero: list
    divisible: list
    p_nonzero: bool
    failure: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.partial_sums_zero) and all(self.divisible) and self.p_nonzero

    def to_json(self) -> dict:
        return {"ring": self.ring, "depth": self.depth,
                "partial_sums_zero": all(self.partial_sums_zero),
                "p_in_m^n_P": all(self.divisible),
                "p_nonzero": self.p_nonzero,
                "checked_partial_sums": len(self.partial_sums_zero),
                "checked_divisibility": len(self.divisible),
                "nonzero_witness": self.failure,
                "passed": self.passed}


def counterexample_contramodule(ring: AdicRing):
    """P with dgn(n) = n, and p = sum pi^n p_n."""
    P = PresentedContra(DiagonalPresentation.from_profile(ring, ExponentProfile.affine(1, 0)))
    p = contra_sum(ExactFamily.geometric(ring), P.generators(), P)
    return P, p


def counterexample(ring: AdicRing, depth: int) -> CounterexampleCertificate:
    if depth < 2:
        raise InvalidArgument("depth must be at least 2")
    check_level(depth)
    P, p = counterexample_contramodule(ring)
    gens = P.generators()
    partial = []
    for n in range(depth):
        coeffs = ExactFamily(ring, [ring.pi_pow(k) for k in range(n + 1)])
        partial.append(contra_sum(coeffs, gens, P).is_zero())
    divisible = []
    for n in range(1, depth):
        # tail_n = sum_{k >= n} pi^(k-n) p_k, and p = pi^n tail_n
        tail = contra_sum(ExactFamily(ring, [0] * n, None, (1, 1, -n)), gens, P)
        divisible.append(tail.scale(ring.pi_pow(n)) == p)
    m = membership(P.pres, p.rep)
    return CounterexampleCertificate(repr(ring), depth, partial, divisible, not m.member,
                                     {"index": m.index, "reason": m.reason})


# ---------------------------------------------------------------------------
# Reductions

@dataclass
class ReducedModule:
    """P/m^n P on a finite window of indices, as a module over R/m^n."""
    ring: AdicRing
    level: int
    indices: list
    exponents: list           # min(dgn, level) per index
    summands: list            # exponents of the cyclic summands after SNF, zeros dropped

    def is_zero(self) -> bool:
        return not self.summands

    def is_free(self) -> bool:
        return all(e == self.level for e in self.summands)

    @property
    def length(self) -> int:
        return sum(self.summands)

    def to_json(self) -> dict:
        return {"level": self.level, "indices": self.indices, "summands": self.summands}


def snf_exponents(ring: AdicRing, level: int, A: Mat, ngens: int) -> list:
    """Cyclic summand exponents of (R/m^level)^ngens / rows of A, via Smith form."""
    if ngens == 0:
        return []
    if A.nrows == 0:
        return [level] * ngens
    res = smith_normal_form(A)
    Q = ring.quotient(level)
    vals = [Q.valuation(d) for d in res.invariant_factors]
    free = ngens - len(vals)
    return sorted([v for v in vals if v > 0] + [level] * free)


def reduction(P: PresentedContra, level: int, window=None) -> ReducedModule:
    check_level(level)
    pres = P.pres
    idx = sorted(window) if window is not None else pres.evaluated_support(level)
    exps = []
    for n in idx:
        d = pres.dgn(n)
        exps.append(level if d is None else min(d, level))
    Q = P.ring.quotient(level)
    rows = [[Q(P.ring.pi_pow(e)) if k == i else Q.zero for k in range(len(idx))]
            for i, e in enumerate(exps) if e < level]
    A = Mat(Q, rows, len(idx))
    return ReducedModule(P.ring, level, idx, exps, snf_exponents(P.ring, level, A, len(idx)))


def reduce_element(x: PresentedElement, level: int) -> dict:
    """Image of x in P/m^level P: {index: residue mod pi^min(dgn, level)}, zeros dropped."""
    P = x.parent
    out = {}
    for n, r in x.rep.level(level).items():
        d = P.pres.dgn(n)
        e = level if d is None else min(d, level)
        v = P.ring.residue(r, e)
        if v != 0:
            out[n] = v
    return out


@dataclass
class NakayamaVerdict:
    reduction_zero: bool
    presented_zero: bool
    witness: int | None

    @property
    def holds(self) -> bool:
        return self.presented_zero or not self.reduction_zero

    def to_json(self) -> dict:
        return {"P/mP_zero": self.reduction_zero, "P_zero": self.presented_zero,
                "witness": self.witness, "holds": self.holds}


def _first_nonunit_relation(pres: DiagonalPresentation):
    best = None
    for i, p in enumerate(pres.parts):
        j = None
        if p.size is not None:
            j = next((t for t in range(p.size) if p(t) != 0), None)
        else:
            j = next((t for t, v in enumerate(p.prefix) if v != 0), None)
            if j is None:
                if p.tail is None:
                    j = p.start
                else:
                    s, o = p.tail
                    if s * p.start + o > 0:
                        j = p.start
                    elif s > 0:
                        j = p.start + 1
        if j is not None:
            n = pres.index(i, j)
            best = n if best is None else min(best, n)
    return best


def nakayama_check(P: PresentedContra) -> NakayamaVerdict:
    w = _first_nonunit_relation(P.pres)
    window = P.pres.evaluated_support(1)
    if w is not None and w not in window:
        window = sorted(set(window) | {w})
    red = reduction(P, 1, window)
    return NakayamaVerdict(red.is_zero(), w is None, w)


def limit_surjectivity(P: PresentedContra, q_seq: list) -> PresentedElement:
    """Lift a compatible sequence (q_seq[i] a class at level i+1) to one element.

    The lift is q_0 + sum_i pi^i p_i where pi^i p_i is the successive difference
    q_{i} - q_{i-1} with its relation part dropped.  Terms must be finite exact
    combinations.
    """
    R = P.ring
    reps = [q.rep if isinstance(q, PresentedElement) else q for q in q_seq]
    if not reps:
        return P.zero()
    for r in reps:
        if not r.is_exact() or r.family.tail is not None:
            raise InvalidArgument("sequence terms must be finite exact combinations")
    for i in range(1, len(reps)):
        diff = PresentedElement(P, reps[i] - reps[i - 1])
        if reduce_element(diff, i):
            raise IncompatibleSequence(f"terms {i-1} and {i} disagree modulo m^{i}")
    lift = reps[0]
    for i in range(1, len(reps)):
        d = (reps[i] - reps[i - 1]).family
        vals = []
        for n in range(len(d.prefix)):
            a = d.value(n)
            v = R.exact_val(a)
            if v is not None and v >= i:
                vals.append(_divide_pi(R, a, i))
            else:
                vals.append(R.exact_zero())      # zero, or a relation: drop it
        p_i = P.E.from_values(vals) if P.E.size is None else P.E.from_values(vals[:P.E.size])
        lift = lift + p_i.scale(R.pi_pow(i))
    out = PresentedElement(P, lift)
    for n, q in enumerate(reps, start=1):
        if reduce_element(out - PresentedElement(P, q), n):
            raise AssertionError("lift does not reduce to the given class")   # pragma: no cover
    return out


def _divide_pi(R: AdicRing, a, i: int):
    if R.kind == "kz":
        return a // R.pi_pow(i)
    return a / R.pi_pow(i) if not isinstance(a, int) else a // R.pi_pow(i)


# ---------------------------------------------------------------------------
# Direct sums, tensor and Hom

def direct_sum(*Ps: PresentedContra) -> PresentedContra:
    if not Ps:
        raise InvalidArgument("empty direct sum needs a ring")
    ring = Ps[0].ring
    if any(P.ring != ring for P in Ps):
        raise InvalidArgument("presentations over different rings")
    return PresentedContra(DiagonalPresentation(ring, [p for P in Ps for p in P.pres.parts]))


def contra_tensor(P: PresentedContra, Q: PresentedContra) -> PresentedContra:
    """R/pi^a (x) R/pi^b = R/pi^min(a,b), summed over pairs of generators.

    Free (x) free is free on the product set.  Pairs of two infinite parts are
    outside the representable class.
    """
    if P.ring != Q.ring:
        raise InvalidArgument("presentations over different rings")
    parts = []
    for a in P.pres.parts:
        for b in Q.pres.parts:
            if a.size is not None and b.size is not None:
                parts.append(ExponentProfile.finite(_tensor_exp(a(i), b(j))
                                                    for i in range(a.size) for j in range(b.size)))
            elif a.size is not None:
                parts.extend(cap_profile(b, a(i)) for i in range(a.size))
            elif b.size is not None:
                parts.extend(cap_profile(a, b(j)) for j in range(b.size))
            else:
                raise InvalidArgument("tensor of two infinitely generated parts is not representable")
    return PresentedContra(DiagonalPresentation(P.ring, parts))


def hom_contra_adic(P: PresentedContra, Q: PresentedContra) -> PresentedContra:
    """Hom_R(P, Q) for finitely generated P, with pointwise operations:
    the product over the generators of P of the pi^a-torsion of Q."""
    if P.ring != Q.ring:
        raise InvalidArgument("presentations over different rings")
    if P.pres.size is None:
        raise InfiniteSource("Hom is only computed out of finitely generated contramodules")
    parts = []
    for n in range(P.pres.size):
        a = P.pres.dgn(n)
        for b in Q.pres.parts:
            if b.size is not None:
                parts.append(ExponentProfile.finite(_hom_exp(a, b(j)) for j in range(b.size)))
            elif a is None:
                parts.append(b)
            else:
                parts.append(cap_profile(b, a, 0))
    return PresentedContra(DiagonalPresentation(P.ring, parts))


def exponent_multiset(P: PresentedContra) -> list:
    """Sorted nonzero exponents (inf as None last) of a finitely generated P."""
    if P.pres.size is None:
        raise InfiniteSource("only finitely generated presentations have a finite exponent list")
    vals = [P.pres.dgn(n) for n in range(P.pres.size)]
    fin = sorted(v for v in vals if v is not None and v > 0)
    return fin + [None] * sum(v is None for v in vals)


# ---------------------------------------------------------------------------
# Flatness and projectivity

@dataclass
class FlatVerdict:
    flat: bool
    levels_checked: int
    failure_level: int | None = None
    witness: int | None = None

    def to_json(self) -> dict:
        return {"flat": self.flat, "levels_checked": self.levels_checked,
                "failure_level": self.failure_level, "witness": self.witness}


def is_flat_contra(P: PresentedContra, maxlevel: int) -> FlatVerdict:
    """P/m^n P free over R/m^n for n <= maxlevel (decided by Smith form)."""
    check_level(maxlevel)
    for n in range(1, maxlevel + 1):
        red = reduction(P, n)
        if not red.is_free():
            w = next(i for i, e in zip(red.indices, red.exponents) if 0 < e < n)
            return FlatVerdict(False, n, n, w)
    return FlatVerdict(True, maxlevel)


def is_separated(P: PresentedContra) -> bool:
    """P -> lim P/m^n P is injective iff the finite exponents are bounded."""
    for p in P.pres.parts:
        if p.size is None and p.tail is not None and p.tail[0] > 0:
            return False
    return True


@dataclass
class ProjectiveVerdict:
    projective: bool
    flat: FlatVerdict
    separated: bool
    relations_trivial: bool

    @property
    def consistent(self) -> bool:
        return self.projective == self.relations_trivial

    def to_json(self) -> dict:
        return {"projective": self.projective, "flat": self.flat.to_json(),
                "separated": self.separated, "relations_trivial": self.relations_trivial,
                "consistent": self.consistent}


def _largest_exponent(P: PresentedContra) -> int:
    """Largest finite exponent when they are bounded, else 0."""
    top = 0
    for p in P.pres.parts:
        top = max([top] + [v for v in p.prefix if v is not None])
        if p.size is None and p.tail is not None and p.tail[0] == 0:
            top = max(top, p.tail[1])
    return top


def is_projective_contra(P: PresentedContra, maxlevel: int) -> ProjectiveVerdict:
    """Flat and separated.  A relation pi^e with e >= maxlevel is invisible below
    level e + 1, so when the exponents are bounded the flatness check runs that far."""
    flat = is_flat_contra(P, max(maxlevel, min(_largest_exponent(P) + 1, max_level())))
    sep = is_separated(P)
    return ProjectiveVerdict(flat.flat and sep, flat, sep, P.pres.relations_trivial())
