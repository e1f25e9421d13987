"""Coset transversals, dual points, falling factorials, evaluation sets."""

import cmath

import numpy as np
import pytest

from expsub import (
    DilationMatrix,
    LatticeError,
    coset_reps,
    dual_coset_points,
    param_points,
    q_eval,
    same_coset,
    transversals_equivalent,
    v_sets,
)

SHEAR = [[2, 1], [0, 2]]
SQRT3 = [[1, 2], [-2, -1]]


def adj2_solve(mat, vec):
    """Independent 2x2 integer lattice membership test via the adjugate."""
    (a, b), (c, d) = mat
    det = a * d - b * c
    y0 = d * vec[0] - b * vec[1]
    y1 = -c * vec[0] + a * vec[1]
    return y0 % det == 0 and y1 % det == 0


def test_rejects_bad_matrices():
    with pytest.raises(LatticeError):
        DilationMatrix([[1, 0], [0, 0]])  # singular
    with pytest.raises(LatticeError):
        DilationMatrix(1)  # |det| < 2
    with pytest.raises(LatticeError):
        DilationMatrix([[1, 1], [0, 2]])  # eigenvalue 1
    with pytest.raises(LatticeError):
        DilationMatrix([[2, 0], [0, 1]])  # eigenvalue 1 despite det 2
    with pytest.raises(LatticeError):
        DilationMatrix([[2.5, 0], [0, 2]])  # non-integer entry


def test_coset_reps_univariate():
    assert coset_reps(DilationMatrix(2)) == [(0,), (1,)]
    assert coset_reps(DilationMatrix(3)) == [(0,), (1,), (2,)]


def test_coset_reps_twodim_examples():
    M = DilationMatrix([[2, 0], [0, 2]])
    assert coset_reps(M) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    Ms = DilationMatrix(SHEAR)
    got = coset_reps(Ms)
    assert got == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert transversals_equivalent(Ms, got, [(0, 0), (1, 0), (0, 1), (1, 1)])
    # the staircase transversal used by the sheared scheme is equivalent too
    assert transversals_equivalent(Ms, got, [(0, 0), (1, 0), (1, 1), (2, 1)])
    assert not transversals_equivalent(Ms, got, [(0, 0), (1, 0), (0, 1), (2, 1)])


def test_coset_reps_pairwise_inequivalent_bruteforce():
    for mat in (SHEAR, SQRT3, [[2, 0], [0, 2]], [[1, 1], [-1, 1]]):
        M = DilationMatrix(mat)
        reps = coset_reps(M)
        assert len(reps) == M.m
        for i, a in enumerate(reps):
            for b in reps[i + 1 :]:
                diff = (a[0] - b[0], a[1] - b[1])
                assert not adj2_solve(mat, diff)
        # every residue is hit: reduce a sweep of small vectors
        seen = {M.coset_of((i, j)) for i in range(-4, 5) for j in range(-4, 5)}
        assert seen == set(reps)


def test_coset_of_consistency():
    M = DilationMatrix(SQRT3)
    for alpha in [(0, 0), (5, -3), (-7, 2), (1, 1)]:
        rep = M.coset_of(alpha)
        assert rep in coset_reps(M)
        assert same_coset(M, alpha, rep)


def test_dual_points_univariate_roots_of_unity():
    xi = dual_coset_points(DilationMatrix(2))
    assert xi[0] == ((1 + 0j),)
    assert abs(xi[1][0] + 1) < 1e-12
    xi3 = dual_coset_points(DilationMatrix(3))
    vals = sorted((z[0].real, z[0].imag) for z in xi3)
    want = sorted(
        (cmath.exp(2j * cmath.pi * e / 3).real, cmath.exp(2j * cmath.pi * e / 3).imag)
        for e in range(3)
    )
    assert np.allclose(vals, want, atol=1e-12)


def close_sets(got, want, tol=1e-10):
    """Set equality of complex-vector collections up to tolerance."""
    got = list(got)
    for w in want:
        hit = None
        for i, g in enumerate(got):
            if max(abs(a - b) for a, b in zip(g, w)) < tol:
                hit = i
                break
        if hit is None:
            return False
        got.pop(hit)
    return not got


def test_dual_points_twodim_examples():
    M = DilationMatrix([[2, 0], [0, 2]])
    assert close_sets(
        dual_coset_points(M), [(1, 1), (-1, 1), (1, -1), (-1, -1)]
    )
    Ms = DilationMatrix(SHEAR)
    assert close_sets(
        dual_coset_points(Ms), [(1, 1), (1, -1), (-1, 1j), (-1, -1j)]
    )
    assert dual_coset_points(Ms)[0] == (1 + 0j, 1 + 0j)


def test_dual_points_character_sum_identity():
    # sum over E of eps^e is m at the all-ones point and 0 elsewhere
    for mat in (2, 3, [[2, 0], [0, 2]], SHEAR, SQRT3):
        M = DilationMatrix(mat)
        E = coset_reps(M)
        for i, eps in enumerate(dual_coset_points(M)):
            total = 0j
            for e in E:
                term = 1 + 0j
                for z, p in zip(eps, e):
                    term *= z**p
                total += term
            want = M.m if i == 0 else 0.0
            assert abs(total - want) < 1e-10


def test_dual_points_power_identity():
    for mat in (3, SHEAR, SQRT3):
        M = DilationMatrix(mat)
        for eps in dual_coset_points(M):
            for beta in [(1,) * M.s, (0,) * (M.s - 1) + (2,), (-1,) + (1,) * (M.s - 1)]:
                mb = M.apply(beta)
                val = 1 + 0j
                for z, p in zip(eps, mb):
                    val *= z**p
                assert abs(val - 1) < 1e-12


def test_q_eval():
    assert q_eval(0, 3.7) == 1
    assert q_eval((0, 0), (2, 5)) == 1
    assert q_eval(2, 5) == 20
    assert q_eval((1, 2), (3, 4)) == 36
    assert q_eval((2,), (0,)) == 0
    assert q_eval((1, 1), (0.0, 9.0)) == 0


def test_q_eval_total_degree():
    # q_gamma is a polynomial of total degree |gamma|: leading behavior t^-|g| q(t z) -> z^g
    rng = np.random.default_rng(7)
    g = (2, 1)
    z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    t = 1e6
    lead = q_eval(g, tuple(t * z)) / t ** sum(g)
    want = z[0] ** 2 * z[1]
    assert abs(lead - want) / abs(want) < 1e-4


def test_v_sets_trivial_and_conic():
    M = DilationMatrix(2)
    full, prime = v_sets(M, [(0.0,)], k=0)
    assert close_sets([p.v for p in full], [(1,), (-1,)], tol=1e-12)
    assert close_sets([p.v for p in prime], [(-1,)], tol=1e-12)
    assert full[0].v == ((1 + 0j),)
    assert full[0].eps_is_one and not full[1].eps_is_one

    lam = 0.8
    k = 2
    _, prime = v_sets(M, [(0.0,), (lam,), (-lam,)], k=k)
    want = [
        (-1.0,),
        (-cmath.exp(-lam * 2 ** -(k + 1)),),
        (-cmath.exp(lam * 2 ** -(k + 1)),),
    ]
    assert close_sets([p.v for p in prime], want, tol=1e-14)


def test_v_sets_butterfly_points():
    M = DilationMatrix([[2, 0], [0, 2]])
    lam = (0.3, 1.1)
    k = 1
    r = [cmath.exp(z * 2 ** -(k + 1)) for z in lam]
    _, prime = v_sets(M, [lam], k=k)
    want = [
        (-1 / r[0], 1 / r[1]),
        (1 / r[0], -1 / r[1]),
        (-1 / r[0], -1 / r[1]),
    ]
    assert close_sets([p.v for p in prime], want, tol=1e-14)
    for p in prime:
        assert all(z != 0 for z in p.v)


def test_v_sets_lambda_zero_exactness():
    M = DilationMatrix(SQRT3)
    full, _ = v_sets(M, [(0.0, 0.0)], k=5)
    for p in full:
        assert p.v == p.eps


def test_param_points():
    M1 = DilationMatrix(2)
    assert param_points(M1, (0.0,), 0, [(3,)]) == [(3.0,)]
    assert param_points(M1, (-0.5,), 1, [(3,)]) == [(1.25,)]
    M2 = DilationMatrix([[2, 0], [0, 2]])
    (pt,) = param_points(M2, (1.0, 1.0), 2, [(3, 7)])
    assert pt == (1.0, 2.0)


def test_inv_power_cap():
    M = DilationMatrix(2)
    M.inv_power(60)
    with pytest.raises(LatticeError):
        M.inv_power(100)
    assert np.allclose(M.inv_power(3), [[0.125]])
