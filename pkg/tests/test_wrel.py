import random
from fractions import Fraction as F
from itertools import product as iproduct

import pytest

from oracles import oracle_bipolar
from mullsem.errors import (BudgetExceeded, DimensionCap, EmptyGenerators,
                            FileFormatError, IndexMismatch, PreconditionFailed)
from mullsem.relmodel import Carrier, Relation, compose_rel
from mullsem.semiring import (BOOL, INF, NINF, RFLOAT, RINF,
                              check_semiring_laws)
from mullsem.wrel import (ChainCounterexample, DownsetClosed, FunExpr,
                          KleeneResult, PoleSpec, SAdd, SConst, SCoord, SMul,
                          SemiringMatrix, Verdict, bipolar_member,
                          bipolar_member_matrix, check_uniformity, compose,
                          identity_matrix, is_admissible_pole, kleene_fixpoint,
                          matrix_to_relation, nat_pole, orthogonal_pair,
                          parse_funexpr, parse_matrix, parse_vector, pcoh_pole,
                          relation_to_matrix, render_matrix, totality_pole,
                          vector)


class TestSemirings:
    def test_laws_spot_checked(self):
        for sr in (BOOL, NINF, RINF, RFLOAT):
            assert check_semiring_laws(sr)

    def test_infinity_conventions(self):
        assert NINF.mul(0, INF) == 0
        assert NINF.mul(2, INF) is INF
        assert NINF.add(3, INF) is INF
        assert RINF.mul(F(0), INF) == F(0)
        assert RINF.le(F(5), INF) and not RINF.le(INF, F(5))


class TestCompose:
    def test_identity_neutral(self):
        m = SemiringMatrix(NINF, ("a", "b"), ("c",),
                           {("a", "c"): 2, ("b", "c"): INF})
        assert compose(identity_matrix(NINF, ("a", "b")), m) == m
        assert compose(m, identity_matrix(NINF, ("c",))) == m

    def test_ninf_example_with_absorption(self):
        f = SemiringMatrix(NINF, ("a",), ("b1", "b2"),
                           {("a", "b1"): 1, ("a", "b2"): 2})
        g = SemiringMatrix(NINF, ("b1", "b2"), ("c",),
                           {("b1", "c"): 3, ("b2", "c"): INF})
        assert compose(f, g).get("a", "c") is INF

    def test_zero_times_inf_column(self):
        f = SemiringMatrix(NINF, ("a",), ("b",), {})
        g = SemiringMatrix(NINF, ("b",), ("c",), {("b", "c"): INF})
        assert compose(f, g).get("a", "c") == 0

    def test_mismatch(self):
        f = SemiringMatrix(BOOL, ("a",), ("b",), {})
        g = SemiringMatrix(BOOL, ("c",), ("d",), {})
        with pytest.raises(IndexMismatch):
            compose(f, g)

    def test_associativity_bool_exhaustive_2(self):
        idx = ("0", "1")
        cells = list(iproduct(idx, idx))
        mats = []
        for mask in range(1 << len(cells)):
            entries = {c: True for i, c in enumerate(cells) if mask >> i & 1}
            mats.append(SemiringMatrix(BOOL, idx, idx, entries))
        sample = mats[:: max(1, len(mats) // 8)]
        for a in sample:
            for b in sample:
                for c in sample:
                    assert compose(compose(a, b), c) == \
                        compose(a, compose(b, c))

    def test_associativity_sampled_numeric(self):
        rng = random.Random(8)
        idx = ("i", "j", "k")
        for sr, pool in ((NINF, [0, 1, 2, INF]),
                         (RINF, [F(0), F(1, 2), F(2), INF])):
            for _ in range(25):
                def rand_mat():
                    return SemiringMatrix(
                        sr, idx, idx,
                        {(r, c): rng.choice(pool)
                         for r in idx for c in idx if rng.random() < 0.6})
                a, b, c = rand_mat(), rand_mat(), rand_mat()
                assert compose(compose(a, b), c) == compose(a, compose(b, c))

    def test_agrees_with_relational_composition(self):
        elems = ("x", "y")
        a = Carrier(elems)
        cells = list(iproduct(elems, elems))
        rels = []
        for mask in range(1 << len(cells)):
            rels.append(Relation(a, a, frozenset(
                c for i, c in enumerate(cells) if mask >> i & 1)))
        for r1 in rels:
            for r2 in rels:
                direct = relation_to_matrix(compose_rel(r1, r2))
                viaw = compose(relation_to_matrix(r1), relation_to_matrix(r2))
                assert direct == viaw
                assert matrix_to_relation(viaw) == compose_rel(r1, r2)


class TestOrthogonalPair:
    def test_examples(self):
        pole = pcoh_pole()
        cols = ("i", "j")
        half = vector(RINF, cols, [F(1, 2), F(1, 2)])
        ones = vector(RINF, cols, [F(1), F(1)])
        zero = vector(RINF, cols, [F(0), F(0)])
        assert orthogonal_pair(half, ones, pole)
        assert orthogonal_pair(zero, ones, pole)
        assert not orthogonal_pair(ones, ones, pole)

    def test_mismatch(self):
        pole = pcoh_pole()
        with pytest.raises(IndexMismatch):
            orthogonal_pair(vector(RINF, ("i",), [F(1)]),
                            vector(RINF, ("j",), [F(1)]), pole)


class TestBipolarMember:
    def test_worked_examples(self):
        assert bipolar_member([(F(1), F(0)), (F(0), F(1))], (F(1, 2), F(1, 2)))
        assert not bipolar_member([(F(1), F(0))], (F(0), F(1)))
        g = (F(2), F(3))
        assert bipolar_member([g], g)

    def test_self_membership(self):
        rng = random.Random(13)
        for _ in range(50):
            dim = rng.randint(1, 3)
            x = tuple(F(rng.randint(0, 6), rng.randint(1, 6))
                      for _ in range(dim))
            assert bipolar_member([x], x)

    def test_monotone_in_generators(self):
        rng = random.Random(14)
        for _ in range(50):
            dim = rng.randint(1, 3)

            def rand_vec():
                return tuple(F(rng.randint(0, 5), rng.randint(1, 4))
                             for _ in range(dim))
            g1, g2, x = rand_vec(), rand_vec(), rand_vec()
            if bipolar_member([g1], x):
                assert bipolar_member([g1, g2], x)

    def test_against_vertex_oracle(self):
        rng = random.Random(15)
        for _ in range(100):
            dim = rng.randint(1, 3)

            def rand_vec():
                return tuple(F(rng.randint(0, 8), rng.randint(1, 5))
                             for _ in range(dim))
            gens = [rand_vec() for _ in range(rng.randint(1, 4))]
            x = rand_vec()
            assert bipolar_member(gens, x) == oracle_bipolar(gens, x)

    def test_errors(self):
        with pytest.raises(EmptyGenerators):
            bipolar_member([], (F(1),))
        with pytest.raises(DimensionCap):
            bipolar_member([tuple(F(1) for _ in range(9))],
                           tuple(F(1) for _ in range(9)))
        with pytest.raises(ValueError):
            bipolar_member([(F(-1),)], (F(1),))
        with pytest.raises(IndexMismatch):
            bipolar_member([(F(1), F(2))], (F(1),))

    def test_matrix_wrapper(self):
        gens = parse_matrix("rows g1 g2\ncols i j\ng1 i 1\ng2 j 1\n")
        pt = parse_vector("rows v\ncols i j\nv i 1/2\nv j 1/2\n")
        assert bipolar_member_matrix(gens, pt)


def linear_map(coeff, const, name="x"):
    return FunExpr.from_exprs(
        [(name, SAdd(SConst(F(const)), SMul(SConst(F(coeff)), SCoord(name))))])


class TestKleene:
    def test_identity_stays_at_zero(self):
        f = FunExpr.from_exprs([("x", SCoord("x"))])
        out = kleene_fixpoint(f, 1e-9)
        assert out.values["x"] == 0.0
        assert out.iterations == 1
        assert out.stabilized

    def test_halving_walk(self):
        out = kleene_fixpoint(linear_map(F(1, 2), F(1, 2)), 1e-9)
        assert abs(out.values["x"] - 1.0) <= 1e-9
        assert out.residual <= 1e-9
        assert out.iterations <= 10000

    def test_quadratic_walk(self):
        f = FunExpr.from_exprs([("x", SAdd(
            SConst(F(1, 4)), SMul(SConst(F(3, 4)),
                                  SMul(SCoord("x"), SCoord("x")))))])
        out = kleene_fixpoint(f, 1e-9)
        assert abs(out.values["x"] - 1 / 3) <= 1e-9

    def test_exact_mode_linear(self):
        out = kleene_fixpoint(linear_map(F(1, 2), F(1, 2)),
                              F(1, 10 ** 9), mode="exact")
        assert out.mode == "exact"
        assert isinstance(out.values["x"], F)
        assert abs(out.values["x"] - 1) <= F(1, 10 ** 9)

    def test_budget_exceeded_carries_last(self):
        f = linear_map(F(1, 2), F(1, 2))
        with pytest.raises(BudgetExceeded) as info:
            kleene_fixpoint(f, 1e-9, max_iter=3)
        res = info.value.result
        assert isinstance(res, KleeneResult)
        assert not res.stabilized
        assert res.residual > 1e-9

    def test_multi_coordinate_system(self):
        f = FunExpr.from_exprs([
            ("u", SAdd(SConst(F(1, 4)), SMul(SConst(F(1, 2)), SCoord("v")))),
            ("v", SMul(SCoord("u"), SCoord("u"))),
        ])
        out = kleene_fixpoint(f, 1e-12)
        u = out.values["u"]
        assert abs(u - (F(1, 4) + F(1, 2) * u * u)) <= 1e-9

    def test_divergent_reports_infinite_growth(self):
        f = FunExpr.from_exprs([("x", SAdd(SConst(F(1)), SCoord("x")))])
        with pytest.raises(BudgetExceeded):
            kleene_fixpoint(f, 1e-9, max_iter=50)


class TestUniformity:
    def test_doubling_example(self):
        h = FunExpr(("x",), (("y", SMul(SConst(F(2)), SCoord("x"))),))
        f = linear_map(F(1, 2), F(1, 4), "x")
        g = linear_map(F(1, 2), F(1, 2), "y")
        assert check_uniformity(h, f, g, 1e-9)

    def test_identity_square(self):
        h = FunExpr(("x",), (("x", SCoord("x")),))
        f = linear_map(F(1, 2), F(1, 3))
        assert check_uniformity(h, f, f, 1e-9)

    def test_zero_fixpoints(self):
        h = FunExpr(("x",), (("y", SMul(SConst(F(2)), SCoord("x"))),))
        f = FunExpr.from_exprs([("x", SMul(SConst(F(1, 2)), SCoord("x")))])
        g = FunExpr.from_exprs([("y", SMul(SConst(F(1, 2)), SCoord("y")))])
        assert check_uniformity(h, f, g, 1e-9)

    def test_precondition_failure(self):
        h = FunExpr(("x",), (("y", SMul(SConst(F(3)), SCoord("x"))),))
        f = linear_map(F(1, 2), F(1, 4), "x")
        g = linear_map(F(1, 2), F(1, 2), "y")
        with pytest.raises(PreconditionFailed):
            check_uniformity(h, f, g, 1e-9)


class TestAdmissibility:
    def test_pcoh_admissible(self):
        report = is_admissible_pole(pcoh_pole())
        assert report.verdict is Verdict.ADMISSIBLE

    def test_totality_not_admissible_no_bottom(self):
        report = is_admissible_pole(totality_pole())
        assert report.verdict is Verdict.NOT_ADMISSIBLE
        assert report.witness_sup is False

    def test_naturals_not_admissible_with_witness(self):
        report = is_admissible_pole(nat_pole())
        assert report.verdict is Verdict.NOT_ADMISSIBLE
        assert report.witness_chain == (0, 1, 2, 3, 4, 5)
        assert report.witness_sup is INF

    def test_undeclared_evidence_is_inconclusive(self):
        pole = PoleSpec("mystery", RINF, lambda v: v is not INF, None)
        report = is_admissible_pole(pole)
        assert report.verdict is Verdict.INCONCLUSIVE

    def test_bad_declarations_rejected(self):
        with pytest.raises(ValueError):
            is_admissible_pole(PoleSpec(
                "bad", NINF, lambda v: v is not INF,
                ChainCounterexample((3, 1, 2), INF)))
        with pytest.raises(ValueError):
            is_admissible_pole(PoleSpec(
                "bad2", RINF, lambda v: v is not INF and v <= 2,
                DownsetClosed(F(1))))


class TestFileFormats:
    def test_matrix_round_trip(self):
        mat = SemiringMatrix(RINF, ("a", "b"), ("c",),
                             {("a", "c"): F(1, 2), ("b", "c"): INF})
        again = parse_matrix(render_matrix(mat))
        assert again == mat

    def test_vector_requires_single_row(self):
        with pytest.raises(FileFormatError):
            parse_vector("rows a b\ncols c\n")

    def test_unknown_index_rejected(self):
        with pytest.raises(FileFormatError):
            parse_matrix("rows a\ncols b\nz b 1\n")

    def test_negative_value_rejected(self):
        with pytest.raises(FileFormatError):
            parse_matrix("rows a\ncols b\na b -1\n")

    def test_funexpr_parsing(self):
        f = parse_funexpr("x: 1/4 + 3/4 * x * x\n")
        assert f.is_endo()
        out = f.eval({"x": 1.0}, RFLOAT)
        assert out["x"] == 1.0

    def test_funexpr_errors(self):
        with pytest.raises(FileFormatError):
            parse_funexpr("x: 1 +\n")
        with pytest.raises(FileFormatError):
            parse_funexpr("x: y + 1\n")
        with pytest.raises(FileFormatError):
            parse_funexpr("")
        with pytest.raises(FileFormatError):
            parse_funexpr("x: 1/0\n")

    def test_funexpr_multiline_system(self):
        f = parse_funexpr("u: 1/2 * v\nv: u + 1/4\n")
        assert set(f.inputs) == {"u", "v"}
        assert f.is_endo()


class TestSimplexDirect:
    def test_unbounded_detected(self):
        from mullsem.simplex import UNBOUNDED, simplex_maximize
        # maximize y1 with no constraint touching it
        status, _, _ = simplex_maximize([[F(0), F(1)]], [F(1)], [F(1), F(0)])
        assert status == UNBOUNDED

    def test_degenerate_zero_objective(self):
        from mullsem.simplex import OPTIMAL, simplex_maximize
        status, value, y = simplex_maximize([[F(1)]], [F(1)], [F(0)])
        assert status == OPTIMAL and value == 0

    def test_known_optimum(self):
        from mullsem.simplex import OPTIMAL, simplex_maximize
        # max x + y s.t. x + 2y <= 4, 3x + y <= 6; optimum at (8/5, 6/5)
        status, value, y = simplex_maximize(
            [[F(1), F(2)], [F(3), F(1)]], [F(4), F(6)], [F(1), F(1)])
        assert status == OPTIMAL
        assert value == F(14, 5)
        assert y == [F(8, 5), F(6, 5)]

    def test_requires_nonnegative_rhs(self):
        from mullsem.simplex import simplex_maximize
        with pytest.raises(ValueError):
            simplex_maximize([[F(1)]], [F(-1)], [F(1)])
