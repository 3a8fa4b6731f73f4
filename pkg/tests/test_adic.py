import pytest
from hypothesis import given, settings, strategies as st

from contracalc.adic import (FreeContra, FreeCyclic, LinearOperatorModule, PresentedContra, TorsionGroup,
                             admits_contra_structure, closed_form_rule, combine, contra_sum, contra_tensor,
                             counterexample, counterexample_contramodule, direct_sum, exponent_multiset,
                             hom_contra_adic, is_flat_contra, is_projective_contra, is_separated, level_mult,
                             limit_surjectivity, max_level, membership, monad_mult, monad_unit,
                             nakayama_check, reduce_element, reduction, telescope_solve)
from contracalc.adic.diagonal import DiagonalPresentation
from contracalc.comodule import jordan_block
from contracalc.errors import (IncompatibleSequence, InfiniteSource, InvalidArgument, NonUnique, NoSolution,
                               ParseError)
from contracalc.exact_linalg import Mat
from contracalc.scalars import (QQ, ZZ, AdicRing, ExactFamily, ExponentProfile, Field, LazyFamily, Poly,
                                PolynomialRing)

F5 = Field.Fp(5)
Z2 = AdicRing.zp(2)
Z5 = AdicRing.zp(5)
KZ = AdicRing.kz(F5)
RINGS = [Z2, Z5, KZ]


def coeff(R, a):
    return a if R.kind == "zp" else Poly(R.field, [a % 5, (a // 5) % 5])


def elements(R, size):
    return st.lists(st.integers(-40, 40), min_size=size, max_size=size).map(
        lambda vals: FreeContra(R, size).from_values([coeff(R, a) for a in vals]))


def lazy(e):
    """The same element with its exactness forgotten."""
    fam = e.family
    return FreeContra(e.ring, e.parent.size).element(
        LazyFamily(e.ring, lambda x, N: fam.coeff(x, N), fam.support, fam.size))


# -- the free-contramodule monad ---------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.sampled_from(RINGS), st.data())
def test_monad_unit_laws(R, data):
    k, m = 3, 4
    inner = [data.draw(elements(R, m)) for _ in range(k)]
    for i in range(k):
        out = monad_mult(monad_unit(FreeContra(R, k), i), inner)
        assert out.equal_at(inner[i], 6)
    a = data.draw(elements(R, m))
    basis = [monad_unit(FreeContra(R, m), x) for x in range(m)]
    assert monad_mult(a, basis).equal_at(a, 6)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(RINGS), st.data())
def test_monad_associativity(R, data):
    a = data.draw(elements(R, 2))
    B = [data.draw(elements(R, 3)) for _ in range(2)]
    C = [data.draw(elements(R, 2)) for _ in range(3)]
    left = monad_mult(monad_mult(a, B), C)
    right = monad_mult(a, [monad_mult(b, C) for b in B])
    assert left.equal_at(right, 7)
    # the lazy branch computes the same levels
    lazy_left = monad_mult(lazy(monad_mult(lazy(a), B)), C)
    for N in (1, 4, 7):
        assert lazy_left.level(N) == left.level(N)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(RINGS), st.data(), st.integers(1, 8))
def test_level_mult_matches_monad_mult(R, data, N):
    a = data.draw(elements(R, 3))
    B = [data.draw(elements(R, 2)) for _ in range(3)]
    got = level_mult(a.level(N), [b.level(N) for b in B], R, N)
    assert got == monad_mult(a, B).level(N)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(RINGS), st.data())
def test_linear_combinations(R, data):
    a, b = data.draw(elements(R, 3)), data.draw(elements(R, 3))
    assert (a + b - b).equal_at(a, 6)
    assert combine(a.parent, [(2, a), (-1, a)]).equal_at(a, 6)
    assert (a - a).level(9) == {}
    assert a.compatible(3)


def test_level_cap(monkeypatch):
    assert max_level() == 64
    monkeypatch.setenv("CONTRACALC_MAX_LEVEL", "5")
    e = FreeContra(Z2, 2).from_values([1, 2])
    e.level(5)
    with pytest.raises(InvalidArgument):
        e.level(6)
    monkeypatch.setenv("CONTRACALC_MAX_LEVEL", "five")
    with pytest.raises(InvalidArgument):
        max_level()


def test_monad_argument_checks():
    E = FreeContra(Z2, 2)
    with pytest.raises(InvalidArgument):
        monad_mult(E.basis(0), [FreeContra(Z2, 3).basis(0)])
    with pytest.raises(InvalidArgument):
        monad_mult(E.basis(0), [FreeContra(Z2, 3).basis(0), FreeContra(Z2, 4).basis(0)])
    with pytest.raises(IndexError):
        E.basis(2)


# -- presentations, membership and sums --------------------------------------

def test_membership_examples():
    R = Z2
    P = PresentedContra.from_list(R, [2, None, 0])
    E = P.E
    assert membership(P.pres, E.from_values([4, 0, 7])).member
    m = membership(P.pres, E.from_values([2, 0, 0]))
    assert not m.member and m.index == 0
    m = membership(P.pres, E.from_values([0, 1, 0]))
    assert not m.member and m.index == 1 and "free" in m.reason
    # dgn(n) = n: a_n = pi^(2n) is in the image; for pi^n and pi^(n+1) the
    # quotients 1 and pi do not tend to zero
    Q = PresentedContra.from_formula(R, "n")
    assert membership(Q.pres, Q.E.from_values([], tail=(1, 2, 0))).member
    assert not membership(Q.pres, Q.E.from_values([], tail=(1, 1, 0))).member
    assert not membership(Q.pres, Q.E.from_values([], tail=(1, 1, 1))).member


def test_contra_sum_with_generators_and_lists():
    R = Z5
    P = PresentedContra.from_list(R, [1, 3])
    g0, g1 = P.generator(0), P.generator(1)
    # 5 g0 is a relation, 5 g1 is not
    assert contra_sum(ExactFamily.finite(R, [5, 0]), P.generators(), P).is_zero()
    assert not contra_sum(ExactFamily.finite(R, [0, 5]), P.generators(), P).is_zero()
    x = contra_sum(ExactFamily.finite(R, [2, 3]), [g1, g0], P)
    assert x == g1.scale(2) + g0.scale(3)
    assert contra_sum(ExactFamily.finite(R, []), [], P).is_zero()
    with pytest.raises(InvalidArgument):
        contra_sum(ExactFamily.finite(R, [1]), [g0, g1], P)


def test_contra_sum_over_a_callable_family():
    R = Z2
    P = PresentedContra.free(R, None)
    x = contra_sum(ExactFamily.geometric(R), lambda n: P.generator(n), P)
    y = contra_sum(ExactFamily.geometric(R), P.generators(), P)
    for N in (1, 5, 9):
        assert x.rep.level(N) == y.rep.level(N)


@pytest.mark.parametrize("R", RINGS, ids=repr)
def test_counterexample(R):
    cert = counterexample(R, 8)
    assert cert.passed and cert.p_nonzero
    assert cert.failure["index"] == 0
    P, p = counterexample_contramodule(R)
    assert not p.is_zero() and not is_separated(P)
    # p maps to zero in every reduction
    for N in (1, 4, 8):
        assert reduce_element(p, N) == {}
    with pytest.raises(InvalidArgument):
        counterexample(R, 1)


def test_limit_surjectivity():
    R = Z2
    P = PresentedContra.from_list(R, [None, 3])
    E = P.E
    seq = [E.from_values([1, 1]), E.from_values([3, 1]), E.from_values([7, 5])]
    lift = limit_surjectivity(P, seq)
    for n, q in enumerate(seq, start=1):
        assert reduce_element(lift - P.element(q), n) == {}
    with pytest.raises(IncompatibleSequence):
        limit_surjectivity(P, [E.from_values([1, 0]), E.from_values([2, 0])])


# -- reductions, tensor, Hom, flatness ------------------------------------------

def test_reduction_and_nakayama():
    R = Z2
    P = PresentedContra.from_list(R, [0, 1, 3, None])
    red = reduction(P, 2)
    assert red.summands == [1, 2, 2] and not red.is_free()
    assert reduction(P, 1).summands == [1, 1, 1]
    assert nakayama_check(P).holds and not nakayama_check(P).reduction_zero
    Z = PresentedContra.from_list(R, [0, 0])
    v = nakayama_check(Z)
    assert v.reduction_zero and v.presented_zero and v.holds
    # the counterexample has P/mP = 0 at every generator of exponent 0 only
    C, _ = counterexample_contramodule(R)
    v = nakayama_check(C)
    assert not v.presented_zero and not v.reduction_zero and v.witness == 1


def test_tensor_and_hom_exponents():
    R = KZ
    P = PresentedContra.from_list(R, [1, 3, None])
    Q = PresentedContra.from_list(R, [2, None])
    T = contra_tensor(P, Q)
    assert exponent_multiset(T) == [1, 1, 2, 2, 3, None]
    H = hom_contra_adic(P, Q)
    # Hom(R/z^a, R/z^b) = R/z^min(a,b); Hom(R/z^a, R) = 0; Hom(R, -) = identity
    assert exponent_multiset(H) == [1, 2, 2, None]
    inf = PresentedContra.from_formula(R, "n")
    assert contra_tensor(P, inf).pres.size is None
    with pytest.raises(InvalidArgument):
        contra_tensor(inf, inf)
    with pytest.raises(InfiniteSource):
        hom_contra_adic(inf, P)
    assert direct_sum(P, Q).pres.size == 5


@pytest.mark.parametrize("vals,flat", [([None, 0, None], True), ([0, 0], True),
                                       ([None, 4], False), ([9], False), ([None, 8], False)])
def test_flat_and_projective_finite(vals, flat):
    P = PresentedContra.from_list(Z2, vals)
    pv = is_projective_contra(P, 8)
    assert pv.projective == flat and pv.consistent
    if vals[-1] != 8 and vals != [9]:
        assert is_flat_contra(P, 8).flat == flat


def test_flatness_of_infinite_presentations():
    C, _ = counterexample_contramodule(Z2)
    v = is_flat_contra(C, 6)
    assert not v.flat and v.failure_level == 2 and v.witness == 1
    free = PresentedContra.free(Z2, None)
    assert is_flat_contra(free, 6).flat and is_projective_contra(free, 6).projective
    assert is_separated(PresentedContra.from_formula(Z2, "3"))


def test_presentation_json():
    obj = {"ring": {"kind": "Zp", "p": 3}, "diag": {"type": "list", "values": [1, "inf", 2]}}
    D = DiagonalPresentation.from_json(obj)
    assert D.dgn(1) is None and D.size == 3
    assert DiagonalPresentation.from_json(D.to_json()) == D
    F = DiagonalPresentation.from_json({"ring": {"kind": "Zp", "p": 3},
                                        "diag": {"type": "formula", "expr": "2*n+1"}})
    assert F.dgn(4) == 9
    with pytest.raises(ParseError):
        DiagonalPresentation.from_json({"diag": []})
    with pytest.raises(ParseError):
        DiagonalPresentation.from_json({"ring": {"kind": "Zp", "p": 3}, "diag": {"type": "list", "values": ["x"]}})


def test_interleaved_parts():
    D = DiagonalPresentation(Z2, [ExponentProfile.finite([1, 2]), ExponentProfile.affine(1, 0),
                                  ExponentProfile.affine(0, 3)])
    # finite part first, then the infinite parts alternate
    assert [D.dgn(n) for n in range(7)] == [1, 2, 0, 3, 1, 3, 2]
    assert D.locate(5) == (2, 1)


# -- the telescope --------------------------------------------------------------

def test_telescope_nilpotent_jordan_block():
    M = LinearOperatorModule(jordan_block(QQ, 2))
    # p_n = (0, 1) for all n: q_0 = p_0 + s p_1 = (1, 1)
    assert telescope_solve(M, [], [[0, 1]]) == [1, 1]
    assert telescope_solve(M, [[3, 4]]) == [3, 4]


def test_telescope_non_unique():
    M = LinearOperatorModule(jordan_block(QQ, 2, lam=1))
    with pytest.raises(NonUnique) as exc:
        telescope_solve(M, [[0, 0]])
    w = exc.value.witness
    # q_n = s q_{n+1}
    assert all(M.apply(w[i + 1]) == w[i] for i in range(len(w) - 1))
    with pytest.raises(NonUnique):
        telescope_solve(TorsionGroup([12], 2), [[0]])


def test_telescope_torsion_group():
    G = TorsionGroup([8, 4], 2)
    assert telescope_solve(G, [[1, 1], [1, 0], [1, 0]]) == [(1 + 2 + 4) % 8, 1]


def test_telescope_over_free_rings():
    with pytest.raises(NoSolution) as exc:
        telescope_solve(FreeCyclic(ZZ, 2), [], [1, 0])
    assert exc.value.certificate["forced_value"] == "-1/3"
    # a finite right hand side is always fine
    assert telescope_solve(FreeCyclic(ZZ, 3), [1, 1]) == 4


@pytest.mark.parametrize("rows,s,admits", [([[8]], 2, True), ([[12]], 2, False), ([[0]], 2, False),
                                           ([[9, 0], [0, 27]], 3, True), ([[1]], 5, True),
                                           ([[4, 2], [2, 4]], 2, False)])
def test_admits_over_z(rows, s, admits):
    A = Mat.of(ZZ, rows)
    rep = admits_contra_structure(A, s)
    assert rep.admits == admits == closed_form_rule(A, s)


def test_admits_over_polynomials():
    R = PolynomialRing(F5)
    z = Poly.z(F5)
    one = Poly(F5, [1])
    for f, ok in ((z ** 3, True), (z - one, False), (z * (z - one), False), (Poly(F5, [0]), False)):
        A = Mat(R, [[f]], 1)
        assert admits_contra_structure(A, z).admits == ok == closed_form_rule(A, z)
    with pytest.raises(InvalidArgument):
        admits_contra_structure(Mat(R, [[z]], 1), z + one)
    with pytest.raises(InvalidArgument):
        admits_contra_structure(Mat.of(ZZ, [[4]]), 4)
