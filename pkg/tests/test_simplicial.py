import numpy as np
import pytest

from fintop import linalg as L
from fintop import metric as M
from fintop import simplicial as S


def triangle_boundary():
    cx = S.SimplicialComplex([(0, 1), (1, 2), (0, 2)])
    return cx


def test_complex_closure_and_fvector():
    cx = S.SimplicialComplex([(2, 0, 1)])
    assert cx.f_vector() == [3, 3, 1]
    assert (0, 1) in cx and (1,) in cx and (0, 1, 2) in cx
    assert cx.euler_characteristic() == 1


def test_boundary_squares_to_zero():
    cx = S.SimplicialComplex([(0, 1, 2, 3)])
    for d in range(1, cx.dimension + 1):
        prod = cx.boundary_matrix(d - 1) @ cx.boundary_matrix(d) if d >= 2 else None
        if prod is not None:
            assert not prod.any()


def test_rips_circle_levels_2_and_3():
    s2 = M.circle_sample(2)
    cx2 = S.vietoris_rips(s2.pairwise(), 4 * s2.epsilon, max_dim=3, strict=True)
    # 4*eps_2 = 2*pi exceeds every geodesic distance: full simplex on 4 points
    assert cx2.f_vector() == [4, 6, 4, 1]
    s3 = M.circle_sample(3)
    cx3 = S.vietoris_rips(s3.pairwise(), 4 * s3.epsilon, max_dim=3, strict=True)
    # 4*eps_3 spans 4 grid gaps: windows of <= 4 consecutive points
    assert cx3.f_vector() == [32, 32 * 3, 32 * 3, 32]
    n0, n1, n2 = (len(cx3.simplices(d)) for d in range(3))
    d1, d2 = cx3.boundary_matrix(1), cx3.boundary_matrix(2)
    r1, r2 = L.rank_q(d1), L.rank_q(d2)
    assert (n0 - r1, n1 - r1 - r2) == (1, 1)   # a circle


def test_rips_strict_vs_closed_threshold():
    pw = np.array([[0.0, 1.0], [1.0, 0.0]])
    strict = S.vietoris_rips(pw, 1.0, max_dim=1, strict=True)
    closed = S.vietoris_rips(pw, 1.0, max_dim=1, strict=False)
    assert strict.f_vector() == [2]
    assert closed.f_vector() == [2, 1]


def test_rips_full_simplex():
    pw = np.zeros((4, 4)) + 1.0
    np.fill_diagonal(pw, 0.0)
    cx = S.vietoris_rips(pw, 2.0, max_dim=3)
    assert cx.f_vector() == [4, 6, 4, 1]


def test_rips_cap():
    pw = np.zeros((8, 8)) + 1.0
    np.fill_diagonal(pw, 0.0)
    with pytest.raises(S.SimplicialError):
        S.vietoris_rips(pw, 2.0, max_dim=7, max_simplices=20)


def test_connected_components():
    adj = S.rips_graph(np.array([[0, 1, 9], [1, 0, 9], [9, 9, 0]], dtype=float), 2.0)
    assert S.connected_components(3, adj) == 2


def test_barycentric_subdivision_counts():
    # subdividing a single triangle: 7 vertices, 12 edges, 6 triangles
    cx = S.SimplicialComplex([(0, 1, 2)])
    sd = S.barycentric_subdivision(cx)
    assert sd.f_vector() == [7, 12, 6]
    assert sd.euler_characteristic() == cx.euler_characteristic()


def test_barycentric_subdivision_hollow_triangle():
    sd = S.barycentric_subdivision(triangle_boundary())
    assert sd.f_vector() == [6, 6]
    assert sd.euler_characteristic() == 0


def test_elementary_collapse_cone():
    # a filled triangle collapses to a point
    cx = S.SimplicialComplex([(0, 1, 2)])
    out = S.elementary_collapse(cx)
    assert len(out) == 1 and out.dimension == 0


def test_collapse_preserves_hollow_square_homology():
    cx = S.SimplicialComplex([(0, 1), (1, 2), (2, 3), (0, 3), (0, 1, 4)])
    out = S.elementary_collapse(cx)
    # the dangling cone collapses away; the loop cannot
    assert out.euler_characteristic() == 0
    d1 = out.boundary_matrix(1)
    n0, n1 = len(out.simplices(0)), len(out.simplices(1))
    b0 = n0 - L.rank_q(d1)
    b1 = n1 - L.rank_q(d1)
    assert (b0, b1) == (1, 1)


def test_rank_q_known():
    assert L.rank_q(np.array([[1, 2], [2, 4]])) == 1
    assert L.rank_q(np.array([[1, 0], [0, 1]])) == 2
    assert L.rank_q(np.zeros((3, 2), dtype=int)) == 0


def test_rank_gfp_vs_q_differ_on_torsion_like_matrix():
    mat = np.array([[2]])
    assert L.rank_q(mat) == 1
    assert L.rank_gfp(mat, 2) == 0
    assert L.rank_gfp(mat, 3) == 1


def test_smith_normal_form_klein_bottle_style():
    # d1 of RP^2-like presentation: invariant factor 2 appears
    assert L.smith_normal_form(np.array([[2, 0], [0, 3]])) == [1, 6]
    assert L.smith_normal_form(np.array([[2]])) == [2]
    assert L.smith_normal_form(np.zeros((2, 2), dtype=int)) == []


def test_nullspace_and_span():
    ns = L.nullspace(np.array([[1, 1, 0], [0, 0, 1]]))
    assert len(ns) == 1
    from fractions import Fraction
    v = ns[0]
    assert v[0] + v[1] == 0 and v[2] == 0
    assert L.solve_in_span([[Fraction(1), Fraction(0)]], [Fraction(3), Fraction(0)]) == [3]
    assert L.solve_in_span([[Fraction(1), Fraction(0)]], [Fraction(0), Fraction(1)]) is None


def test_homology_basis_circle_complex():
    cx = triangle_boundary()
    d1 = cx.boundary_matrix(1)
    d2 = cx.boundary_matrix(2)  # empty
    basis = L.homology_basis(d1, d2)
    assert len(basis) == 1


def test_induced_map_rank_identity_circle():
    cx = triangle_boundary()
    d1 = L.to_sparse_columns(cx.boundary_matrix(1))
    n1 = len(cx.simplices(1))
    ident = [{j: 1} for j in range(n1)]
    d2: list = []
    rank = L.induced_map_rank(d2, ident, d1, rows_y_k=n1)
    assert rank == 1


def test_induced_map_rank_zero_map():
    cx = triangle_boundary()
    d1 = L.to_sparse_columns(cx.boundary_matrix(1))
    n1 = len(cx.simplices(1))
    zero = [dict() for _ in range(n1)]
    assert L.induced_map_rank([], zero, d1, rows_y_k=n1) == 0
