import numpy as np
import pytest

from e8lie.algebra import (
    modp_rank,
    verify_chirality_consistency,
    verify_clifford_pairs,
    verify_so16_on_spinors,
)
from e8lie.clifford import (
    GammaSystem,
    _octonion_left_mults,
    signed_permutation_arrays,
)
from e8lie.halfint import HalfIntMatrix, commutator, mat_mul


def test_octonion_left_mults_are_clifford():
    ls = _octonion_left_mults()
    assert len(ls) == 7
    eye = np.eye(8, dtype=np.int64)
    for i, a in enumerate(ls):
        assert np.array_equal(a.T, -a)
        assert np.array_equal(a @ a, -eye)
        for b in ls[i + 1:]:
            assert np.array_equal(a @ b + b @ a, np.zeros((8, 8), dtype=np.int64))


def test_sigma_orthogonality(gammas):
    eye = HalfIntMatrix.identity(128)
    for s in gammas.sigma:
        assert mat_mul(s, s.T) == eye


def test_sigma_anticommutation_example(gammas):
    s1, s2 = gammas.sigma[0], gammas.sigma[1]
    assert (s1 @ s2.T) + (s2 @ s1.T) == HalfIntMatrix.zeros(128, 128)


def test_clifford_suites(gammas):
    for r in verify_clifford_pairs(gammas):
        assert r.passed, r.to_dict()


def test_sigma_columns_single_nonzero(gammas):
    for s in gammas.sigma:
        d = np.abs(s.doubled)
        assert (d.sum(axis=0) == 2).all()
        assert (d.sum(axis=1) == 2).all()
        assert np.isin(s.doubled, (-2, 0, 2)).all()


def test_delta_antisymmetric_half_entries(spinors):
    d12 = spinors.delta[(1, 2)]
    assert d12.T == -d12
    assert np.isin(d12.doubled, (-1, 0, 1)).all()
    assert len(spinors.delta) == 120


def test_delta_commutator_examples(spinors):
    zero = HalfIntMatrix.zeros(128, 128)
    assert commutator(spinors.delta[(1, 2)], spinors.delta[(3, 4)]) == zero
    assert commutator(spinors.delta[(1, 2)], spinors.delta[(2, 3)]) == spinors.delta[(1, 3)]


def test_delta_so16_exhaustive(tensor):
    r = verify_so16_on_spinors(tensor)
    assert r.passed and r.checked == 14400


def _eq1_rhs(spinors, i, j, k, l):
    acc = HalfIntMatrix.zeros(128, 128)

    def dmat(p, q):
        if p == q:
            return None
        return spinors.delta[(p, q)] if p < q else -spinors.delta[(q, p)]

    if j == k and dmat(i, l) is not None:
        acc = acc + dmat(i, l)
    if j == l and dmat(i, k) is not None:
        acc = acc - dmat(i, k)
    if i == k and dmat(j, l) is not None:
        acc = acc - dmat(j, l)
    if i == l and dmat(j, k) is not None:
        acc = acc + dmat(j, k)
    return acc


def test_so16_fast_path_matches_dense(spinors):
    # the exhaustive suite runs on the signed-permutation encoding; spot
    # check random pairs against dense exact commutators
    rng = np.random.default_rng(3)
    pairs = sorted(spinors.delta)
    for _ in range(25):
        i, j = pairs[rng.integers(120)]
        k, l = pairs[rng.integers(120)]
        lhs = commutator(spinors.delta[(i, j)], spinors.delta[(k, l)])
        assert lhs == _eq1_rhs(spinors, i, j, k, l)


def test_chirality_consistency(gammas):
    r = verify_chirality_consistency(gammas)
    assert r.passed and r.checked == 14400


def test_delta_linear_independence(spinors):
    flat = np.stack([spinors.delta[p].doubled.ravel() for p in sorted(spinors.delta)])
    assert modp_rank(flat) == 120


def test_signed_permutation_arrays_roundtrip(spinors):
    d = spinors.delta[(3, 7)]
    pi, sg = signed_permutation_arrays(d)
    rebuilt = np.zeros((128, 128), dtype=np.int64)
    rebuilt[np.arange(128), pi] = sg
    assert np.array_equal(rebuilt, d.doubled)


def test_fault_injection_names_pair(gammas):
    # corrupting one block must fail the pair checks with a named counterexample
    sigma = list(gammas.sigma)
    bad = sigma[2].doubled.copy()
    bad[0, :] = -bad[0, :]
    sigma[2] = HalfIntMatrix(bad)
    broken = GammaSystem(sigma=tuple(sigma))
    reports = verify_clifford_pairs(broken)
    anti = reports[0]
    assert not anti.passed
    assert "Sigma_3" in anti.first_counterexample


def test_construction_self_check_catches_bad_permutation():
    from e8lie.clifford import _is_signed_permutation

    good = np.eye(4, dtype=np.int64)
    assert _is_signed_permutation(good)
    good[0, 0] = 2
    assert not _is_signed_permutation(good)
