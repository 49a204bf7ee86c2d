import random

import pytest
from hypothesis import given, settings, strategies as st

from hermitia import gf
from hermitia.matff import Mat, MatError, fermat_surface, random_mat
from hermitia.orbit import hermitian_case1_rep, twisted_congruence_solve
from hermitia.tetra import (CASE_C1, CASE_C2, CASE_C3, CurveSpec, Signature,
                            SignatureError, canonical_signature, case_signature,
                            defining_equations, eval_equation, evaluate_form,
                            expand_form, exponent_matrix, is_identically_zero,
                            jacobian_matrix, jacobian_rank, normalize_point,
                            on_surface, projective_line, smoothness_scan)


# -- signatures -----------------------------------------------------------------

def test_canonical_signature_examples():
    assert canonical_signature(6, 2, 4).astuple() == (3, 1, 2)
    assert canonical_signature(7, 4, 5).astuple() == (7, 2, 3)
    for q in (2, 3, 4, 5):
        sig = (q + 1, 1, q)
        assert canonical_signature(*sig).astuple() == sig  # self-flipped


def test_signature_validation():
    with pytest.raises(SignatureError):
        Signature(4, 3, 3)
    with pytest.raises(SignatureError):
        Signature(4, 0, 2)
    with pytest.raises(SignatureError):
        Signature(4, 1, 4)


@st.composite
def raw_signatures(draw):
    d = draw(st.integers(3, 40))
    i = draw(st.integers(1, d - 2))
    j = draw(st.integers(i + 1, d - 1))
    return d, i, j


@settings(max_examples=150, deadline=None)
@given(sig=raw_signatures(), n=st.integers(1, 3), flip=st.booleans())
def test_canonical_signature_idempotent_and_invariant(sig, n, flip):
    d, i, j = sig
    canon = canonical_signature(d, i, j)
    assert canonical_signature(*canon.astuple()) == canon
    moved = (d * n, i * n, j * n)
    if flip:
        moved = (moved[0], moved[0] - moved[2], moved[0] - moved[1])
    assert canonical_signature(*moved) == canon


def test_case_signatures():
    assert case_signature(CASE_C1, 3).astuple() == (4, 1, 3)
    assert case_signature(CASE_C2, 4).astuple() == (20, 5, 17)
    assert case_signature(CASE_C3, 3).astuple() == (6, 2, 5)
    with pytest.raises(SignatureError):
        case_signature(CASE_C2, 3)
    with pytest.raises(SignatureError):
        case_signature(CASE_C3, 4)


# -- exponent matrix and expansion ----------------------------------------------

def test_exponent_matrix_frozen_values():
    assert exponent_matrix(Signature(3, 1, 2), 2) == [
        [0, 2, 4, 6], [1, 3, 5, 7], [2, 4, 6, 8], [3, 5, 7, 9]]
    assert exponent_matrix(Signature(4, 1, 3), 3) == [
        [0, 3, 9, 12], [1, 4, 10, 13], [3, 6, 12, 15], [4, 7, 13, 16]]


@settings(max_examples=60, deadline=None)
@given(sig=raw_signatures(), q=st.sampled_from([2, 3, 4]))
def test_exponent_matrix_corners(sig, q):
    E = exponent_matrix(Signature(*sig), q)
    assert E[0][0] == 0
    assert E[3][3] == (q + 1) * sig[0]


def test_expansion_groups_colliding_cells():
    # q=2, (3,1,2): cells (0,1) and (2,0) share exponent 2
    f = gf.gfq2(2)
    B = random_mat(f, 4, 4, random.Random(3))
    sf = expand_form(Signature(3, 1, 2), 2, B)
    expected = f.add(B.data[0][1], B.data[2][0])
    assert sf.coeffs.get(2, 0) == expected


def test_identity_form_is_not_zero():
    f = gf.gfq2(3)
    assert not is_identically_zero(Signature(4, 1, 3), 3, Mat.identity(f, 4))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_case1_hermitian_rep_vanishes(q):
    B = hermitian_case1_rep(q)
    assert is_identically_zero(case_signature(CASE_C1, q), q, B)


@pytest.mark.parametrize("q", [2, 3])
def test_expansion_agrees_with_point_evaluation(q):
    """Vanishing at more projective points than the degree is equivalent to
    vanishing identically, so evaluation over a large enough field is an
    exact independent oracle."""
    sig = case_signature(CASE_C1, q)
    deg = (q + 1) * sig.d
    ext = 2
    while gf.gf_ext(q, ext).order + 1 <= deg:
        ext += 1
    big = gf.gf_ext(q, ext)
    rng = random.Random(17)
    f2 = gf.gfq2(q)
    emb = gf.make_embedding(f2, big)
    for trial in range(12):
        B = random_mat(f2, 4, 4, rng)
        Bb = B.map_entries(emb)
        vanishes = all(evaluate_form(sig, q, Bb, s, t) == 0
                       for s, t in projective_line(big))
        assert vanishes == is_identically_zero(sig, q, B)


# -- curves and containment -------------------------------------------------------

def test_on_surface_symbolic():
    q = 3
    surf = fermat_surface(q)
    F = twisted_congruence_solve(surf.gram, hermitian_case1_rep(q), q)
    curve = CurveSpec(q, case_signature(CASE_C1, q), F)
    assert on_surface(curve, surf)
    ident = CurveSpec(q, Signature(4, 1, 3), Mat.identity(surf.gram.field, 4))
    assert not on_surface(ident, surf)


def test_on_surface_scale_invariance():
    q = 3
    surf = fermat_surface(q)
    F = twisted_congruence_solve(surf.gram, hermitian_case1_rep(q), q)
    fld = F.field
    for c in (2, 5):
        scaled = CurveSpec(q, case_signature(CASE_C1, q), F.scalar(c % fld.order or 2))
        assert on_surface(scaled, surf)
    surf_scaled = fermat_surface(q)
    surf_scaled.gram = surf_scaled.gram.scalar(2)
    curve = CurveSpec(q, case_signature(CASE_C1, q), F)
    assert on_surface(curve, surf_scaled)


def test_curve_json_roundtrip():
    q = 2
    surf = fermat_surface(q)
    F = twisted_congruence_solve(surf.gram, hermitian_case1_rep(q), q)
    curve = CurveSpec(q, case_signature(CASE_C1, q), F)
    doc = curve.to_json()
    back = CurveSpec.from_json(doc)
    assert back.sig == curve.sig and back.frame == curve.frame


# -- defining equations, Jacobians, scans ------------------------------------------

def test_parametrized_points_satisfy_equations():
    for case, q in ((CASE_C1, 2), (CASE_C1, 3), (CASE_C2, 2), (CASE_C2, 4),
                    (CASE_C3, 3), (CASE_C3, 5)):
        fld = gf.gfq2(q)
        sig = case_signature(case, q)
        eqs = defining_equations(case, q)
        curve = CurveSpec(q, sig, Mat.identity(fld, 4))
        for s, t in projective_line(fld):
            pt = curve.point(s, t)
            assert all(eval_equation(eq, pt, fld) == 0 for eq in eqs)


def test_single_equation_jacobian_entry():
    f = gf.gf_ext(3, 2)
    eq = {(0, 1, 1, 0): 1, (1, 0, 0, 1): -1}   # x1 x2 - x0 x3
    J = jacobian_matrix([eq], (1, 0, 0, 0), f)
    assert J.data == [[0, 0, 0, f.neg(1)]]


def test_jacobian_rank_paper_points():
    f81 = gf.gf_ext(3, 2)
    assert jacobian_rank(defining_equations(CASE_C3, 3), (0, 0, 0, 1), f81) == 1
    assert jacobian_rank(defining_equations(CASE_C1, 3), (1, 0, 0, 0), f81) == 2
    f256 = gf.gf_ext(4, 2)
    assert jacobian_rank(defining_equations(CASE_C2, 4), (0, 0, 0, 1), f256) == 1
    with pytest.raises(MatError):
        jacobian_rank(defining_equations(CASE_C1, 3), (0, 0, 0, 0), f81)


def test_jacobian_rank_q2_endpoints():
    # the q=2 standard degree-6 curve is rank-deficient at (1,0,0,0), and
    # regular at (0,0,0,1) where the q >= 3 members are deficient
    f16 = gf.gf_ext(2, 2)
    eqs = defining_equations(CASE_C2, 2)
    assert jacobian_rank(eqs, (1, 0, 0, 0), f16) == 1
    assert jacobian_rank(eqs, (0, 0, 0, 1), f16) == 2


def test_normalize_point():
    f = gf.gfq2(3)
    assert normalize_point(f, (0, 2, 1, 0)) == (0, 1, f.mul(f.inv(2), 1), 0)
    with pytest.raises(MatError):
        normalize_point(f, (0, 0, 0, 0))


@pytest.mark.parametrize("q", [2, 3])
def test_smoothness_scan_c1_clean(q):
    rep = smoothness_scan(CASE_C1, q, gf.gf_ext(q, 2))
    assert rep.containment_ok
    assert rep.singular == []
    assert rep.points_scanned == gf.gf_ext(q, 2).order + 1


def test_smoothness_scan_c3_q3():
    rep = smoothness_scan(CASE_C3, 3, gf.gf_ext(3, 2))
    assert rep.containment_ok
    assert [pt for pt, _ in rep.singular] == [(0, 0, 0, 1), (1, 0, 0, 0)]
    assert all(rank == 1 for _, rank in rep.singular)


def test_smoothness_scan_c2_q2_singular_at_one_zero():
    rep = smoothness_scan(CASE_C2, 2, gf.gf_ext(2, 2))
    assert rep.containment_ok
    assert [pt for pt, _ in rep.singular] == [(1, 0, 0, 0)]
    assert rep.singular[0][1] == 1


def test_smoothness_scan_thread_count_stable():
    one = smoothness_scan(CASE_C3, 3, gf.gf_ext(3, 2), threads=1)
    four = smoothness_scan(CASE_C3, 3, gf.gf_ext(3, 2), threads=4)
    assert one.singular == four.singular
    assert one.to_json() == four.to_json()


def test_smoothness_scan_field_validation():
    with pytest.raises(MatError):
        smoothness_scan(CASE_C1, 3, gf.make_field(3, 3))  # no GF(9) inside
