"""The telescope system q_n = p_n + s q_{n+1} and its use as an Ext oracle.

For a module M with an endomorphism s, solutions of the homogeneous system
are compatible sequences q_n = s q_{n+1}; these exist (nonzero) exactly when
the eventual image of s is nonzero.  When s is nilpotent every right hand
side has the unique solution q_n = sum_i s^i p_{n+i}.

M = Z or k[z] itself is not finite; there the homogeneous system only has
the zero solution, and a right hand side forces q_0 to be the value of
sum s^i p_i in the completion, which is then tested for membership in M.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from ..errors import InvalidArgument, NonUnique, NoSolution
from ..exact_linalg import Mat, image, rank, smith_normal_form, solve
from ..scalars import ZZ, Field, IntegerRing, Poly, PolynomialRing


# ---------------------------------------------------------------------------
# Module types

class LinearOperatorModule:
    """A finite-dimensional vector space with an endomorphism s."""

    def __init__(self, s: Mat):
        if s.nrows != s.ncols:
            raise InvalidArgument("s must be square")
        self.s = s
        self.field = s.ring
        self.dim = s.nrows

    def zero(self):
        return [self.field.zero] * self.dim

    def apply(self, v):
        return [row[0] for row in (self.s @ _col(self.field, v)).rows]

    def add(self, u, v):
        return [self.field.reduce(a + b) for a, b in zip(u, v)]

    def is_zero(self, v) -> bool:
        return all(a == 0 for a in v)

    def eventual_image(self) -> Mat:
        """Basis of the intersection of the images of s^k."""
        P = Mat.identity(self.field, self.dim)
        r = self.dim
        while True:
            P2 = self.s @ P
            r2 = rank(P2)
            if r2 == r:
                return image(P)
            P, r = P2, r2

    def nilpotency_index(self) -> int:
        P = Mat.identity(self.field, self.dim)
        e = 0
        while not all(a == 0 for row in P.rows for a in row):
            P = self.s @ P
            e += 1
            if e > self.dim:
                raise InvalidArgument("s is not nilpotent")
        return e

    def homogeneous_witness(self, E: Mat, terms: int = 4) -> list:
        """q_0 in the eventual image and q_{n+1} = (s|_E)^(-1) q_n."""
        q = [row[0] for row in E.rows]
        out = [q]
        sE = self.s @ E
        for _ in range(terms - 1):
            c = solve(sE, _col(self.field, out[-1]))
            out.append([row[0] for row in (E @ c).rows])
        return out


class TorsionGroup:
    """Z/d_1 + ... + Z/d_r with s = multiplication by the prime p."""

    def __init__(self, invariants, p: int):
        if any(d < 1 for d in invariants):
            raise InvalidArgument("invariant factors must be positive")
        self.ds = [int(d) for d in invariants]
        self.p = p

    def zero(self):
        return [0] * len(self.ds)

    def apply(self, v):
        return [self.p * a % d for a, d in zip(v, self.ds)]

    def add(self, u, v):
        return [(a + b) % d for a, b, d in zip(u, v, self.ds)]

    def is_zero(self, v) -> bool:
        return all(a % d == 0 for a, d in zip(v, self.ds))

    def _split(self, d):
        v = 0
        while d % self.p == 0:
            d //= self.p
            v += 1
        return v, d

    def eventual_image_orders(self) -> list:
        """Order of the eventual image in each cyclic factor (its prime-to-p part)."""
        return [self._split(d)[1] for d in self.ds]

    def nilpotency_index(self) -> int:
        return max((self._split(d)[0] for d in self.ds), default=0)

    def homogeneous_witness(self, terms: int = 4) -> list:
        for i, d in enumerate(self.ds):
            v, m = self._split(d)
            if m > 1:
                inv = pow(self.p, -1, m)
                out, t = [], 1
                for _ in range(terms):
                    q = self.zero()
                    q[i] = self.p ** v * t % d
                    out.append(q)
                    t = t * inv % m
                return out
        return []


class FreeCyclic:
    """R = Z or k[z] itself, with s = p or z."""

    def __init__(self, ring, s):
        self.ring = ring
        self.s = s


def _col(F, v):
    return Mat(F, [[a] for a in v], 1)


# ---------------------------------------------------------------------------
# Right hand sides

def _rhs(p_seq, period, n, zero):
    if n < len(p_seq):
        return p_seq[n]
    if period:
        return period[(n - len(p_seq)) % len(period)]
    return zero


def telescope_solve(M, p_seq, period=None):
    """q_0 of the unique solution of q_n = p_n + s q_{n+1}.

    ``p_seq`` lists p_0, p_1, ...; afterwards the sequence is zero, or repeats
    ``period``.  Raises NonUnique with a homogeneous witness when the
    eventual image of s is nonzero, and NoSolution (for M = R) when the forced
    value is not in M.
    """
    period = list(period or [])
    if isinstance(M, FreeCyclic):
        return _free_solve(M, p_seq, period)
    if isinstance(M, LinearOperatorModule):
        E = M.eventual_image()
        if E.ncols:
            raise NonUnique("s has a nonzero eventual image", M.homogeneous_witness(E))
    elif isinstance(M, TorsionGroup):
        if any(m > 1 for m in M.eventual_image_orders()):
            raise NonUnique("multiplication by p is invertible on a nonzero summand",
                            M.homogeneous_witness())
    else:
        raise InvalidArgument(f"unsupported module {M!r}")
    e = M.nilpotency_index()
    # q_0 = sum_{i<e} s^i p_i
    q = M.zero()
    for i in reversed(range(e)):
        q = M.add(_rhs(p_seq, period, i, M.zero()), M.apply(q))
    return q


def _free_solve(M: FreeCyclic, p_seq, period):
    """Over R = Z (s = p) or k[z] (s = z).  The only candidate is the value of
    sum s^i p_i in the completion, a rational number or rational function."""
    L, T = len(p_seq), len(period)
    terms = []
    for n in range(L + max(T, 1)):
        num, den = _forced_value(M, [_rhs(p_seq, period, k, 0 if M.ring == ZZ else M.ring.zero)
                                     for k in range(n, L)], period, n, L)
        ok, q = _in_ring(M, num, den)
        if not ok:
            raise NoSolution("the forced solution is not an element of the module",
                             {"index": n, "forced_value": _fmt_ratio(M, num, den)})
        terms.append(q)
    return terms[0]


def _forced_value(M, head, period, n, L):
    """sum_{i<len(head)} s^i head_i + s^len(head)/(1 - s^T) * sum_t s^t c_{t'}
    where the periodic part starts at index max(n, L) with phase (n - L) mod T."""
    s = M.s
    if M.ring == ZZ:
        val = Fraction(0)
        for i, a in enumerate(head):
            val += Fraction(a) * s ** i
        if period:
            T = len(period)
            phase = max(n - L, 0) % T
            block = sum(Fraction(period[(phase + t) % T]) * s ** t for t in range(T))
            val += Fraction(s ** len(head)) * block / (1 - Fraction(s) ** T)
        return val.numerator, val.denominator
    R = M.ring
    one = R.one
    num, den = R.zero, one
    for i, a in enumerate(head):
        num = num + R(a) * s ** i
    if period:
        T = len(period)
        phase = max(n - L, 0) % T
        block = R.zero
        for t in range(T):
            block = block + R(period[(phase + t) % T]) * s ** t
        den = one - s ** T
        num = num * den + s ** len(head) * block
    return num, den


def _in_ring(M, num, den):
    if M.ring == ZZ:
        return den == 1, num
    q, r = divmod(num, den)
    return r.is_zero(), q


def _fmt_ratio(M, num, den):
    if M.ring == ZZ:
        return str(Fraction(num, den))
    return f"({num!r})/({den!r})"


# ---------------------------------------------------------------------------
# The decision for finitely generated modules

@dataclass
class FactorReport:
    factor: str
    kind: str                   # "zero", "torsion" or "free"
    unique: bool                # homogeneous system has only the zero solution
    surjective: bool            # every right hand side has a solution
    certificate: dict = dc_field(default_factory=dict)

    @property
    def admits(self) -> bool:
        return self.unique and self.surjective

    def to_json(self) -> dict:
        return {"factor": self.factor, "kind": self.kind, "unique": self.unique,
                "surjective": self.surjective, "admits": self.admits,
                "certificate": self.certificate}


@dataclass
class StructureReport:
    admits: bool
    ring: str
    s: str
    factors: list
    closed_form: str

    def to_json(self) -> dict:
        return {"admits": self.admits, "ring": self.ring, "s": self.s,
                "factors": [f.to_json() for f in self.factors], "closed_form": self.closed_form}


def _companion(F: Field, d: Poly) -> Mat:
    """Multiplication by z on k[z]/(d) in the basis 1, z, ..., z^(n-1)."""
    lc, m = d.monic()
    n = m.deg
    S = Mat.zeros(F, n, n)
    for i in range(n - 1):
        S.rows[i + 1][i] = F.one
    for i in range(n):
        S.rows[i][n - 1] = F.reduce(-m.coeff(i))
    return S


def _probe_targets(M):
    """Right hand sides used to show surjectivity fails on a free factor."""
    one = 1 if M.ring == ZZ else M.ring.one
    zero = 0 if M.ring == ZZ else M.ring.zero
    return [([], [one]), ([], [one, zero]), ([], [one, zero, zero])]


def _factor_report(ring, d, s) -> FactorReport:
    if ring == ZZ:
        label = str(d)
        if d == 0:
            return _free_report(FreeCyclic(ZZ, s), label)
        if abs(d) == 1:
            return FactorReport(label, "zero", True, True)
        M = TorsionGroup([abs(d)], s)
        cert = {"eventual_image_order": M.eventual_image_orders()[0]}
    else:
        label = repr(d)
        if d.is_zero():
            return _free_report(FreeCyclic(ring, s), label)
        if d.deg == 0:
            return FactorReport(label, "zero", True, True)
        if s != Poly.z(ring.field):
            raise InvalidArgument("over k[z] the element s must be z")
        M = LinearOperatorModule(_companion(ring.field, d))
        cert = {"eventual_image_dim": M.eventual_image().ncols}
    try:
        telescope_solve(M, [M.zero()])
    except NonUnique as exc:
        cert["homogeneous_witness"] = [[str(a) for a in q] for q in exc.witness]
        # on the eventual image s is invertible, so every right hand side is solvable
        return FactorReport(label, "torsion", False, True, cert)
    cert["nilpotency_index"] = M.nilpotency_index()
    return FactorReport(label, "torsion", True, True, cert)


def _free_report(M: FreeCyclic, label) -> FactorReport:
    cert = {"homogeneous": "intersection of s^k R is zero"}
    for head, period in _probe_targets(M):
        try:
            telescope_solve(M, head, period)
        except NoSolution as exc:
            cert["target_period"] = [str(a) for a in period]
            cert.update(exc.certificate)
            return FactorReport(label, "free", True, False, cert)
    raise AssertionError("no obstruction found for a free factor")     # pragma: no cover


def admits_contra_structure(A: Mat, s) -> StructureReport:
    """Does M = R^g / (rows of A) carry a (necessarily unique) contramodule
    structure, i.e. is the telescope map on M bijective?  R = Z with s a
    prime, or R = k[z] with s = z.  Decided factor by factor after Smith form."""
    ring = A.ring
    if isinstance(ring, IntegerRing):
        s = int(s)
        from ..scalars import is_prime
        if not is_prime(s):
            raise InvalidArgument("over Z the element s must be a prime")
    elif not isinstance(ring, PolynomialRing):
        raise InvalidArgument("modules over Z or k[z] only")
    g = A.ncols
    facs = list(smith_normal_form(A).invariant_factors) if A.nrows and g else []
    zero = 0 if ring == ZZ else ring.zero
    facs = facs + [zero] * (g - len(facs))
    reports = [_factor_report(ring, d, s) for d in facs]
    admits = all(r.admits for r in reports)
    closed = "every invariant factor is a unit times a power of s"
    return StructureReport(admits, repr(ring), repr(s), reports, closed)


def closed_form_rule(A: Mat, s) -> bool:
    """The rule the oracle reproduces: no free part and only s-primary torsion."""
    ring = A.ring
    g = A.ncols
    facs = list(smith_normal_form(A).invariant_factors) if A.nrows and g else []
    if len(facs) < g:
        return False
    for d in facs:
        if ring == ZZ:
            m = abs(d)
            while m % s == 0:
                m //= s
            if m != 1:
                return False
        else:
            if d.val() != d.deg:
                return False
    return True
