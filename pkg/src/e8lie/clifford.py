"""Gamma blocks of the Majorana-Weyl representation of Spin(16).

The sixteen 128x128 chirality blocks Sigma_i are built by tensoring two
copies of the octonionic Hurwitz family: octonion left multiplications give
seven anticommuting antisymmetric complex structures on R^8, those extend
to the eight symmetric 16x16 gamma matrices of the 8-dimensional Clifford
algebra, and two such systems combine into sixteen symmetric 256x256 gamma
matrices whose chirality splitting is diagonal in the tensor basis.  All
factors are signed permutation matrices, so the blocks stay exact.

Correctness is defined by the machine-checked invariants (signed
permutation shape and the two anticommutation families), not by any
particular convention; `build_gamma_system` verifies them and aborts with
the first failing pair on any violation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .halfint import HalfIntMatrix

N_VECTOR = 16
SPINOR_DIM = 128

# Fano-plane triples (a,b,c): e_a e_b = e_c cyclically, anticommuting otherwise.
_FANO_TRIPLES = ((1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3))


class GammaConstructionError(Exception):
    """A construction self-check failed; the message names the first bad pair."""


def _octonion_left_mults() -> list[np.ndarray]:
    """Left-multiplication matrices of the seven imaginary octonion units."""
    mats = [np.zeros((8, 8), dtype=np.int64) for _ in range(8)]
    for i in range(1, 8):
        mats[i][i, 0] = 1   # e_i * 1 = e_i
        mats[i][0, i] = -1  # e_i * e_i = -1
    for (a, b, c) in _FANO_TRIPLES:
        for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
            mats[x][z, y] = 1   # e_x e_y = +e_z
            mats[y][z, x] = -1  # e_y e_x = -e_z
    return mats[1:]


def _cl8_gammas() -> list[np.ndarray]:
    """Eight symmetric anticommuting 16x16 signed permutations squaring to I."""
    ls = _octonion_left_mults()
    blocks = ls + [np.eye(8, dtype=np.int64)]
    gammas = []
    for b in blocks:
        g = np.zeros((16, 16), dtype=np.int64)
        g[:8, 8:] = b
        g[8:, :8] = b.T
        gammas.append(g)
    return gammas


@dataclass(frozen=True)
class GammaSystem:
    """The sixteen chirality blocks mapping the positive to the negative spinors."""

    sigma: tuple[HalfIntMatrix, ...]

    def __post_init__(self):
        if len(self.sigma) != N_VECTOR:
            raise GammaConstructionError("expected 16 blocks")


@dataclass(frozen=True)
class SpinorGenerators:
    """Antisymmetric so(16) generators on the positive-chirality spinors.

    delta maps (i, j) with 1 <= i < j <= 16 to the 128x128 matrix
    (1/4)(Sigma_i Sigma_j^T - Sigma_j Sigma_i^T), whose entries are 0, +-1/2.
    """

    delta: dict[tuple[int, int], HalfIntMatrix]


def _is_signed_permutation(m: np.ndarray) -> bool:
    if not np.isin(m, (-1, 0, 1)).all():
        return False
    return (np.abs(m).sum(axis=0) == 1).all() and (np.abs(m).sum(axis=1) == 1).all()


def build_gamma_system(self_check: bool = True) -> GammaSystem:
    """Construct the sixteen blocks and verify both anticommutation families."""
    alphas = _cl8_gammas()
    omega8 = alphas[0]
    for a in alphas[1:]:
        omega8 = omega8 @ a

    eye16 = np.eye(16, dtype=np.int64)
    gammas = [np.kron(a, eye16) for a in alphas]
    gammas += [np.kron(omega8, b) for b in alphas]

    omega16 = np.kron(omega8, omega8)
    if not np.array_equal(omega16, np.diag(np.diagonal(omega16))):
        raise GammaConstructionError("chirality element is not diagonal")
    diag = np.diagonal(omega16)
    pos = np.flatnonzero(diag == 1)
    neg = np.flatnonzero(diag == -1)
    if len(pos) != SPINOR_DIM or len(neg) != SPINOR_DIM:
        raise GammaConstructionError("chirality eigenspaces are not 128 + 128")

    sigma_raw = [g[np.ix_(pos, neg)] for g in gammas]

    if self_check:
        for i, g in enumerate(gammas, start=1):
            if g[np.ix_(pos, pos)].any() or g[np.ix_(neg, neg)].any():
                raise GammaConstructionError(f"gamma_{i} does not exchange chiralities")
        for i, s in enumerate(sigma_raw, start=1):
            if not _is_signed_permutation(s):
                raise GammaConstructionError(f"Sigma_{i} is not a signed permutation")
        for i in range(N_VECTOR):
            for j in range(i, N_VECTOR):
                want = 2 * np.eye(SPINOR_DIM, dtype=np.int64) if i == j else 0
                lhs = sigma_raw[i] @ sigma_raw[j].T + sigma_raw[j] @ sigma_raw[i].T
                if not np.array_equal(lhs, np.broadcast_to(want, lhs.shape)):
                    raise GammaConstructionError(
                        f"Sigma_{i + 1} Sigma_{j + 1}^T anticommutation failed"
                    )
                lhs = sigma_raw[i].T @ sigma_raw[j] + sigma_raw[j].T @ sigma_raw[i]
                if not np.array_equal(lhs, np.broadcast_to(want, lhs.shape)):
                    raise GammaConstructionError(
                        f"Sigma_{i + 1}^T Sigma_{j + 1} anticommutation failed"
                    )

    return GammaSystem(sigma=tuple(HalfIntMatrix.from_true_ints(s) for s in sigma_raw))


def spinor_generators(g: GammaSystem) -> SpinorGenerators:
    """Delta_ij = (1/4)(Sigma_i Sigma_j^T - Sigma_j Sigma_i^T) for i < j."""
    delta = {}
    for i in range(N_VECTOR):
        si = g.sigma[i]
        for j in range(i + 1, N_VECTOR):
            sj = g.sigma[j]
            d = ((si @ sj.T) - (sj @ si.T)).scale_half().scale_half()
            delta[(i + 1, j + 1)] = d
    return SpinorGenerators(delta=delta)


def signed_permutation_arrays(m: HalfIntMatrix) -> tuple[np.ndarray, np.ndarray]:
    """(targets, signs) for a matrix that is 1/2 * signed permutation.

    Row r of the doubled storage has exactly one nonzero entry +-1 at column
    targets[r] with sign signs[r].  Used as the exact fast path for the
    exhaustive relation checks; validated against dense arithmetic in tests.
    """
    d = m.doubled
    if not np.isin(d, (-1, 0, 1)).all():
        raise ValueError("not a half-signed-permutation matrix")
    ad = np.abs(d)
    if (ad.sum(axis=1) != 1).any() or (ad.sum(axis=0) != 1).any():
        raise ValueError("rows/columns are not 1-sparse")
    targets = np.argmax(ad, axis=1)
    signs = d[np.arange(d.shape[0]), targets]
    return targets.astype(np.int64), signs.astype(np.int64)
