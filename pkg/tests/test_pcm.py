import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blindpsim.pcm import (
    ColorMatrix,
    build_pcm,
    color_matrix,
    direct_sum_color,
    edge_structure,
    pcm_from_symbols,
    pcm_index,
    shift_and_translate,
)
from blindpsim.symbols import DimensionError, is_diag_distinct, substitute

# 9x9 PCM of J + 9I + 2J, transcribed from the worked example (blanks are 0)
J3_PCM = np.array([
    [12, 1, 1, 2, 0, 0, 2, 0, 0],
    [1, 3, 1, 0, 2, 0, 0, 2, 0],
    [1, 1, 3, 0, 0, 2, 0, 0, 2],
    [2, 0, 0, 3, 1, 1, 2, 0, 0],
    [0, 2, 0, 1, 12, 1, 0, 2, 0],
    [0, 0, 2, 1, 1, 3, 0, 0, 2],
    [2, 0, 0, 2, 0, 0, 3, 1, 1],
    [0, 2, 0, 0, 2, 0, 1, 3, 1],
    [0, 0, 2, 0, 0, 2, 1, 1, 12],
])


def pcm_by_definition(C, row_weight=2):
    """Rook's-graph adjacency written out location by location."""
    m = C.shape[0]
    out = np.zeros((m * m, m * m), dtype=np.int64)
    for c in range(m):
        for r in range(m):
            for c2 in range(m):
                for r2 in range(m):
                    a, b = c * m + r, c2 * m + r2
                    if a == b:
                        out[a, b] = C[r, c]
                    elif c == c2:
                        out[a, b] = 1
                    elif r == r2:
                        out[a, b] = row_weight
    return out


def symbol_matrices(max_m=5):
    return st.integers(1, max_m).flatmap(
        lambda m: st.lists(st.integers(1, m * m), min_size=m * m, max_size=m * m).map(
            lambda v: np.array(v, dtype=np.int64).reshape(m, m)
        )
    )


class TestShiftAndTranslate:
    def test_j3(self):
        out = shift_and_translate(np.ones((3, 3), dtype=int), 9, 2)
        assert set(np.diag(out)) == {12}
        assert set(out[~np.eye(3, dtype=bool)]) == {3}

    def test_identity_transform(self, rng):
        M = rng.integers(1, 5, (4, 4))
        assert np.array_equal(shift_and_translate(M, 0, 0), M)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            shift_and_translate(np.ones((2, 2)), -1, 0)

    @given(symbol_matrices())
    def test_shift_separates_diagonal(self, M):
        m = M.shape[0]
        assert is_diag_distinct(shift_and_translate(M, m * m, 0))


class TestColorMatrix:
    def test_j3(self):
        C = color_matrix(np.ones((3, 3), dtype=int))
        expect = np.ones((3, 3)) + 9 * np.eye(3) + 2 * np.ones((3, 3))
        assert np.array_equal(C.entries, expect)
        assert (C.beta, C.gamma) == (9, 2)

    def test_one_by_one(self):
        assert color_matrix([[1]]).entries.tolist() == [[4]]

    def test_random_diag_distinct(self, rng):
        for _ in range(20):
            (M,) = substitute(rng.integers(0, 7, (4, 4)))
            C = color_matrix(M)
            assert is_diag_distinct(C.entries)
            assert C.entries.min() >= 3
            assert np.diag(C.entries).min() > C.entries[~np.eye(4, dtype=bool)].max()

    def test_too_many_symbols(self):
        with pytest.raises(ValueError):
            color_matrix(np.array([[1, 2], [3, 5]]))

    def test_larger_beta_allowed(self):
        C = color_matrix(np.array([[1, 2], [3, 5]]), beta=5)
        assert np.diag(C.entries).tolist() == [8, 12]


class TestBuildPcm:
    def test_worked_example(self):
        C = color_matrix(np.ones((3, 3), dtype=int))
        assert np.array_equal(build_pcm(C), J3_PCM)

    def test_one_by_one(self):
        assert build_pcm(np.array([[7]])).tolist() == [[7]]

    @given(symbol_matrices())
    def test_matches_definition(self, M):
        C = color_matrix(M)
        assert np.array_equal(build_pcm(C), pcm_by_definition(C.entries))
        assert np.array_equal(build_pcm(C, equal_edge_weights=True),
                              pcm_by_definition(C.entries, row_weight=1))

    def test_offdiagonal_shared(self, rng):
        m = 4
        pcms = [build_pcm(color_matrix(substitute(rng.integers(0, 5, (m, m)))[0])) for _ in range(5)]
        off = ~np.eye(m * m, dtype=bool)
        for P in pcms[1:]:
            assert np.array_equal(P[off], pcms[0][off])
        assert np.array_equal(pcms[0][off], edge_structure(m)[off])

    def test_block_layout(self, rng):
        (M,) = substitute(rng.integers(0, 4, (4, 4)))
        C = color_matrix(M).entries
        P = build_pcm(C)
        m = 4
        I, J = np.eye(m, dtype=int), np.ones((m, m), dtype=int)
        for k in range(m):
            for l in range(m):
                block = P[k * m:(k + 1) * m, l * m:(l + 1) * m]
                expect = np.diag(C[:, k]) + (J - I) if k == l else 2 * I
                assert np.array_equal(block, expect)

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_lifted_permutation_diagonal(self, m, rng):
        (M,) = substitute(rng.integers(0, 4, (m, m)))
        p = rng.permutation(m)
        C = color_matrix(M).entries
        d = np.diag(build_pcm(C))
        d_perm = np.diag(build_pcm(C[np.ix_(p, p)]))
        q = np.array([p[c] * m + p[r] for c in range(m) for r in range(m)])
        assert np.array_equal(d_perm, d[q])

    def test_pcm_index_column_major(self):
        C = np.arange(9).reshape(3, 3) + 10
        d = np.diag(build_pcm(C))
        for r in range(3):
            for c in range(3):
                assert d[pcm_index(r, c, 3)] == C[r, c]

    def test_from_symbols_is_diag_distinct(self):
        P = pcm_from_symbols(np.array([[1, 2], [2, 1]]))
        assert is_diag_distinct(P)


class TestDirectSum:
    def test_j3_pair(self):
        C = color_matrix(np.ones((3, 3), dtype=int))
        D = direct_sum_color(C, C).entries
        assert D.shape == (6, 6)
        assert (D[:3, 3:] == 3).all() and (D[3:, :3] == 3).all()
        assert np.array_equal(D[:3, :3], C.entries)

    def test_one_by_one(self):
        assert direct_sum_color(np.array([[5]]), np.array([[8]])).entries.tolist() == [[5, 3], [3, 8]]

    def test_mismatch(self):
        with pytest.raises(DimensionError):
            direct_sum_color(np.ones((2, 2), dtype=int), np.ones((3, 3), dtype=int))

    def test_upper_left_blocks(self, rng):
        m = 3
        A = color_matrix(substitute(rng.integers(0, 3, (m, m)))[0])
        B = color_matrix(substitute(rng.integers(0, 3, (m, m)))[0])
        D = direct_sum_color(A, B)
        assert isinstance(D, ColorMatrix)
        P = build_pcm(D)
        n = 2 * m
        I, J = np.eye(n, dtype=int), np.ones((n, n), dtype=int)
        for k in range(m):
            block = P[k * n:(k + 1) * n, k * n:(k + 1) * n]
            assert np.array_equal(block, np.diag(D.entries[:, k]) + (J - I))
            assert np.array_equal(np.diag(block)[:m], A.entries[:, k])
