import random
from fractions import Fraction

import pytest

from oracles import det_cofactor
from qbip import qmatrices, treecore
from qbip.exactla import (
    KIND_L,
    KIND_R,
    KIND_VERTEX,
    DimensionMismatch,
    IndexKindMismatch,
    Matrix,
    SingularMatrix,
    Vector,
    annihilates,
    charpoly_exact,
    conjecture_evidence,
    count_real_roots,
    det_bareiss,
    inverse_gauss,
    adjugate_int,
    mat_mul,
    rank_int,
    squarefree_part,
)
from qbip.polyalg import ONE, Poly, RatFun, ZERO, Q


def poly_m(rows, rk=KIND_VERTEX, ck=KIND_VERTEX):
    return Matrix([[Poly((c,)) if isinstance(c, int) else c for c in row] for row in rows], rk, ck)


# -- products -------------------------------------------------------------------


def test_product_qL_qB(p4_attach):
    got = mat_mul(qmatrices.build_qL(p4_attach), qmatrices.build_qB(p4_attach))
    want = Matrix(
        [[Poly((0, -1, -1)), ZERO], [Poly((1, 1)), Poly((1, 0, -1))]],
        KIND_R,
        KIND_R,
    )
    assert got == want


def test_product_with_identity(p4_attach):
    qB = qmatrices.build_qB(p4_attach)
    eye = Matrix.identity(2, KIND_L, KIND_L)
    assert mat_mul(eye, qB) == qB


def test_product_E_qL_is_scalar_identity(p4_attach):
    got = mat_mul(qmatrices.build_E(p4_attach), qmatrices.build_qL(p4_attach))
    scalar = Poly((0, 1, 0, -1))  # q(1-q^2)
    assert got == Matrix.identity(2, KIND_L, KIND_L).scale(scalar)


def test_product_checks_kinds(p4_attach):
    qB = qmatrices.build_qB(p4_attach)
    with pytest.raises(IndexKindMismatch):
        mat_mul(qB, qB)
    with pytest.raises(DimensionMismatch):
        mat_mul(qB, Matrix.identity(3, KIND_R, KIND_L))


def test_vector_kind_checks(p4_attach):
    qB = qmatrices.build_qB(p4_attach)
    with pytest.raises(IndexKindMismatch):
        qB @ Vector((ONE, ONE), KIND_L)


# -- determinants ------------------------------------------------------------------


def test_det_qB_p4(p4_attach):
    assert det_bareiss(qmatrices.build_qB(p4_attach)) == Poly((0, -1, -1))


def test_det_qL_p2(p2):
    assert det_bareiss(qmatrices.build_qL(p2)) == Poly((1, 0, -1))


def test_det_E_p4(p4_attach):
    assert det_bareiss(qmatrices.build_E(p4_attach)) == Poly((0, 0, 1, 0, -1))


def test_det_zero_matrix():
    assert det_bareiss(poly_m([[0, 0], [0, 0]])) == ZERO


def test_det_agrees_with_cofactor_expansion():
    rng = random.Random(11)
    for n in (1, 2, 3, 4):
        for _ in range(8):
            rows = [
                [
                    Poly([rng.randint(-3, 3) for _ in range(rng.randint(0, 3))])
                    for _ in range(n)
                ]
                for _ in range(n)
            ]
            m = Matrix(rows, KIND_VERTEX, KIND_VERTEX)
            assert det_bareiss(m) == det_cofactor([list(r) for r in rows])


# -- inverses ----------------------------------------------------------------------


def test_inverse_gauss_p2(p2):
    inv = inverse_gauss(qmatrices.build_qB(p2))
    assert inv.entries == ((RatFun(ONE),),)
    assert (inv.row_kind, inv.col_kind) == (KIND_R, KIND_L)


def test_inverse_gauss_matches_formula_inverse(p4_attach):
    assert inverse_gauss(qmatrices.build_E(p4_attach)) == qmatrices.inverse_E_formula(
        p4_attach
    )


def test_inverse_gauss_singular():
    with pytest.raises(SingularMatrix):
        inverse_gauss(poly_m([[1, 1], [0, 0]]))


def test_inverse_gauss_times_matrix_is_identity():
    for p in (1, 2, 3):
        for mt in treecore.enumerate_nonsingular(p):
            qB = qmatrices.build_qB(mt)
            inv = inverse_gauss(qB)
            eye = Matrix.identity(p, KIND_L, KIND_L, one=RatFun(ONE), zero=RatFun(ZERO))
            assert mat_mul(qB, inv) == eye
            assert det_bareiss(qB)  # sanity: raised SingularMatrix otherwise


# -- adjugate and rank -----------------------------------------------------------------


def test_adjugate_of_q1_laplacian(p4_attach):
    lap = Matrix([[1, -1], [-1, 1]], KIND_R, KIND_L)
    adj = adjugate_int(lap)
    assert adj.entries == ((1, 1), (1, 1))


def test_rank_of_q1_laplacian():
    lap = Matrix([[1, -1], [-1, 1]], KIND_R, KIND_L)
    assert rank_int(lap) == 1


def test_adjugate_identity():
    eye = Matrix([[1, 0], [0, 1]], KIND_R, KIND_L)
    assert adjugate_int(eye).entries == ((1, 0), (0, 1))


def test_adjugate_times_matrix_is_det_identity():
    rng = random.Random(23)
    for n in (1, 2, 3, 4):
        for _ in range(6):
            rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
            m = Matrix(rows, KIND_R, KIND_L)
            adj = adjugate_int(m)
            det = det_bareiss(m)
            d = det[0] if det else 0
            prod = mat_mul(adj, m)
            assert prod.entries == tuple(
                tuple(d if i == j else 0 for j in range(n)) for i in range(n)
            )


# -- characteristic polynomials -----------------------------------------------------------


def test_charpoly_of_zero_matrix():
    assert charpoly_exact(Matrix([[0]], KIND_R, KIND_L)) == Q


def test_charpoly_of_q1_laplacian():
    lap = Matrix([[1, -1], [-1, 1]], KIND_R, KIND_L)
    assert charpoly_exact(lap) == Poly((0, -2, 1))


def test_charpoly_of_identity():
    eye = Matrix([[1, 0], [0, 1]], KIND_R, KIND_L)
    assert charpoly_exact(eye) == Poly((1, -2, 1))


def test_charpoly_at_zero_is_signed_det():
    rng = random.Random(31)
    for n in (1, 2, 3, 4):
        rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        m = Matrix(rows, KIND_R, KIND_L)
        cp = charpoly_exact(m)
        det = det_bareiss(m)
        d = det[0] if det else 0
        assert cp.eval_at(0) == (-1) ** n * d


# -- squarefree parts and annihilation ----------------------------------------------------


def test_squarefree_part_examples():
    assert squarefree_part(Poly((1, -2, 1))) == Poly((-1, 1))
    assert squarefree_part(Poly((0, -2, 1))) == Poly((0, -2, 1))


def test_annihilates_identity():
    eye = Matrix([[1, 0], [0, 1]], KIND_R, KIND_L)
    assert annihilates(eye, Poly((-1, 1)))
    assert not annihilates(eye, Q)


def test_annihilates_q1_laplacian_squarefree_charpoly():
    lap = Matrix([[1, -1], [-1, 1]], KIND_R, KIND_L)
    assert annihilates(lap, squarefree_part(charpoly_exact(lap)))


# -- Sturm counting ---------------------------------------------------------------------------


def test_count_examples():
    p = Poly((0, -2, 1))  # x^2 - 2x, roots 0 and 2
    assert count_real_roots(p, hi=0, include_hi=False) == 0
    assert count_real_roots(p, lo=0, include_lo=True) == 2
    assert count_real_roots(Poly((1, 0, 1))) == 0
    assert count_real_roots(Poly((-1, 1)), lo=0, hi=2) == 1


def test_count_half_open_convention():
    p = Poly((0, -2, 1))
    assert count_real_roots(p, hi=0) == 1          # (-oo, 0] catches the root 0
    assert count_real_roots(p, lo=0) == 1          # (0, +oo) catches only 2
    assert count_real_roots(p, lo=0, hi=2) == 1
    assert count_real_roots(p, lo=0, hi=2, include_lo=True) == 2
    assert count_real_roots(p, lo=0, hi=2, include_hi=False) == 0
    assert count_real_roots(p, lo=Fraction(-1, 2), hi=Fraction(1, 2)) == 1


def test_count_invariant_under_positive_scaling():
    p = Poly((-6, 1, 1))  # (x+3)(x-2)
    for s in (1, 2, 7):
        scaled = Poly(s * c for c in p.coeffs)
        assert count_real_roots(scaled) == 2
        assert count_real_roots(scaled, hi=0) == 1


def test_count_rejects_zero():
    with pytest.raises(ValueError):
        count_real_roots(ZERO)


# -- conjecture evidence ------------------------------------------------------------------------


def test_evidence_p2():
    got = conjecture_evidence(Matrix([[0]], KIND_R, KIND_L))
    assert got == {
        "diagonalizable": True,
        "all_eigen_nonneg": True,
        "real_root_count": 1,
    }


def test_evidence_p4():
    lap = Matrix([[1, -1], [-1, 1]], KIND_R, KIND_L)
    got = conjecture_evidence(lap)
    assert got == {
        "diagonalizable": True,
        "all_eigen_nonneg": True,
        "real_root_count": 2,
    }


def test_evidence_flags_negative_eigenvalue():
    got = conjecture_evidence(Matrix([[-1, 0], [0, 2]], KIND_R, KIND_L))
    assert got["diagonalizable"]
    assert not got["all_eigen_nonneg"]


def test_evidence_flags_non_diagonalizable():
    got = conjecture_evidence(Matrix([[0, 1], [0, 0]], KIND_R, KIND_L))
    assert not got["diagonalizable"]
    assert got["real_root_count"] == 1
