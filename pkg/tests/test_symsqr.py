from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blindpsim.bpsay import pcm_pair
from blindpsim.corpus import petersen_graph, random_graph
from blindpsim.oracle import automorphisms, orbit_partition, pcm_orbits
from blindpsim.pcm import build_pcm, color_matrix
from blindpsim.symbols import (
    DimensionError,
    pattern_of,
    refines,
    substitute,
    sym_sub,
)
from blindpsim.symsqr import (
    CanonicalString,
    canonical_string,
    refine,
    stable_pattern,
    string_ranks,
    sym_mult,
    sym_sqr,
)


@st.composite
def diag_distinct_symmetric(draw, max_n=5, off_symbols=3, diag_symbols=3):
    n = draw(st.integers(1, max_n))
    vals = draw(st.lists(st.integers(1, off_symbols), min_size=n * n, max_size=n * n))
    M = np.array(vals, dtype=np.int64).reshape(n, n)
    M = np.triu(M) + np.triu(M, 1).T
    diag = draw(st.lists(st.integers(1, diag_symbols), min_size=n, max_size=n))
    np.fill_diagonal(M, np.array(diag) + off_symbols)
    return M


def squared(M):
    """Reference path: explicit strings, then ordered substitution."""
    return sym_sub(sym_sqr(M), "spd")


class TestCanonicalString:
    def test_term_order_matters(self):
        a, b = 1, 2
        s1 = canonical_string([a, b], [b, a])
        s2 = canonical_string([a, a], [b, b])
        assert s1.offdiag_part == ((a, b), (b, a))
        assert s2.offdiag_part == ((a, b), (a, b))
        assert s1 != s2

    def test_single_diagonal(self):
        s = canonical_string([7], [7], 0, 0)
        assert s.diag_part == ((7, 7),) and s.offdiag_part == ()

    def test_off_diagonal_layout(self):
        row = [10, 1, 2]
        col = [1, 11, 3]
        s = canonical_string(row, col, 0, 1)
        assert s.diag_part == ((10, 1), (1, 11))
        assert s.offdiag_part == ((2, 3),)
        assert len(s) == 3

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            canonical_string([1, 2], [1])

    def test_order_compares_diag_part_first(self):
        assert CanonicalString(((1, 1),), ((9, 9),)) < CanonicalString(((1, 2),), ((0, 0),))

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_first_squaring_column_edge_profile(self, m):
        """Strings of a fresh PCM at a column edge location."""
        (M,) = substitute(np.ones((m, m), dtype=int))
        P = build_pcm(color_matrix(M))
        one, two, zero = 1, 2, 0
        # locations (r, c) = (0, 0) and (1, 0) share column 0: a column edge
        a, b = 0, 1
        s = canonical_string(P[a, :], P[:, b], a, b)
        assert s.diag_part == ((P[a, a], one), (one, P[b, b]))
        expect = Counter({
            (one, one): m - 2,
            (two, zero): m - 1,
            (zero, two): m - 1,
            (zero, zero): (m - 1) * (m - 2),
        })
        assert Counter(s.offdiag_part) == expect


class TestSymSqr:
    def test_one_by_one(self):
        out = sym_sqr(np.array([[4]]))
        assert out[0, 0] == CanonicalString(((4, 4),), ())

    def test_requires_symmetric(self):
        with pytest.raises(ValueError):
            sym_sqr(np.array([[3, 1], [2, 3]]))

    def test_requires_diag_distinct(self):
        with pytest.raises(ValueError):
            sym_sqr(np.array([[1, 1], [1, 1]]))

    def test_output_symmetric_and_separated(self, rng):
        S = sym_sqr(build_pcm(color_matrix(substitute(random_graph(3, rng))[0])))
        n = S.shape[0]
        assert all(S[i, j] == S[j, i] for i in range(n) for j in range(n))
        diag = {S[i, i] for i in range(n)}
        off = {S[i, j] for i in range(n) for j in range(n) if i != j}
        assert not diag & off
        assert {len(s.diag_part) for s in diag} == {1}
        assert {len(s.diag_part) for s in off} == {2}

    @settings(max_examples=40)
    @given(diag_distinct_symmetric(4), st.randoms())
    def test_permutation_equivariant(self, M, rnd):
        p = np.array(rnd.sample(range(M.shape[0]), M.shape[0]))
        lhs = sym_sqr(M[np.ix_(p, p)])
        rhs = sym_sqr(M)[np.ix_(p, p)]
        assert (lhs == rhs).all()

    @settings(max_examples=60)
    @given(diag_distinct_symmetric())
    def test_monotone(self, M):
        out = squared(M)
        assert refines(pattern_of(out), pattern_of(M))

    @settings(max_examples=60)
    @given(diag_distinct_symmetric())
    def test_distinct_symbols_never_merge(self, M):
        S = sym_sqr(M)
        n = M.shape[0]
        for i in range(n):
            for j in range(n):
                for r in range(n):
                    for s in range(n):
                        if M[i, j] != M[r, s]:
                            assert S[i, j] != S[r, s]

    def test_orbits_get_equal_strings(self, rng):
        for _ in range(10):
            G = random_graph(4, rng)
            (M,) = substitute(build_pcm(color_matrix(substitute(G)[0])))
            S = sym_sqr(M)
            for cell in pcm_orbits(G).cells():
                assert len({S[i, j] for i, j in cell}) == 1

    def test_every_cell_is_a_union_of_orbits(self, rng):
        for _ in range(10):
            M = np.triu(rng.integers(1, 3, (5, 5)))
            M = M + np.triu(M, 1).T
            np.fill_diagonal(M, rng.integers(3, 5, 5))
            orb = orbit_partition(5, automorphisms(M))
            assert refines(orb, pattern_of(squared(M)))


class TestFastPath:
    @settings(max_examples=100)
    @given(diag_distinct_symmetric(6, 4, 4))
    def test_matches_reference(self, M):
        (fast,) = refine(M)
        (ref,) = substitute(sym_sqr(M))
        assert np.array_equal(fast, ref)

    def test_joint_matches_reference(self, rng):
        for _ in range(20):
            A, B = (np.asarray(x) for x in pcm_pair(random_graph(3, rng), random_graph(3, rng)))
            fa, fb = refine(A, B)
            ra, rb = substitute(sym_sqr(A), sym_sqr(B))
            assert np.array_equal(fa, ra) and np.array_equal(fb, rb)

    def test_ranks_order_strings(self, rng):
        M = np.triu(rng.integers(1, 4, (5, 5)))
        M = M + np.triu(M, 1).T
        np.fill_diagonal(M, rng.integers(4, 6, 5))
        (R,) = string_ranks([M])
        strings = [[canonical_string(M[i], M[:, j], i, j) for j in range(5)] for i in range(5)]
        flat = [(strings[i][j], R[i, j]) for i in range(5) for j in range(5)]
        for s1, r1 in flat:
            for s2, r2 in flat:
                assert (s1 < s2) == (r1 < r2)


class TestStability:
    @settings(max_examples=40, deadline=None)
    @given(diag_distinct_symmetric(7, 3, 3))
    def test_within_dimension(self, M):
        _, counts = stable_pattern(M)
        assert len(counts) <= M.shape[0]

    def test_counts_non_decreasing(self, rng):
        S, _ = pcm_pair(random_graph(4, rng), random_graph(4, rng))
        _, counts = stable_pattern(S)
        assert counts == sorted(counts)
        if len(counts) > 1:
            assert counts[-1] == counts[-2]

    def test_j3_first_squaring_has_nine_symbols(self):
        (S,) = substitute(build_pcm(color_matrix(np.ones((3, 3), dtype=int))))
        assert np.unique(S).size == 5
        (X,) = refine(S)
        assert np.unique(X).size == 9

    def test_j3_stable_pattern_equals_symmetrized_orbits(self):
        J = np.ones((3, 3), dtype=int)
        (S,) = substitute(build_pcm(color_matrix(J)))
        stable, counts = stable_pattern(S)
        assert pattern_of(stable) == pcm_orbits(J, symmetric=True)
        assert counts[-1] == pcm_orbits(J, symmetric=True).num_cells

    def test_cap_raises(self):
        (S,) = substitute(build_pcm(color_matrix(np.ones((3, 3), dtype=int))))
        with pytest.raises(RuntimeError):
            stable_pattern(S, max_iters=1)

    def test_petersen_first_count(self):
        S, _ = pcm_pair(petersen_graph(), petersen_graph())
        assert np.unique(S).size == 6


class TestSymMult:
    def test_worked_two_by_two(self):
        M = np.array([[11, 1], [1, 12]])
        out = sym_mult(np.array([[21, 0], [0, 22]]), M, np.array([[31, 0], [0, 32]]))
        assert out.tolist() == [[(21, 11, 31), (21, 1, 32)], [(22, 1, 31), (22, 12, 32)]]

    def test_vector_diagonals(self):
        out = sym_mult([1, 2], np.array([[5, 6], [7, 8]]), [3, 4])
        assert out[1, 0] == (2, 7, 3)

    def test_constant_outer_factors(self, rng):
        M = rng.integers(0, 4, (4, 4))
        out = sym_mult(np.full(4, 9), M, np.full(4, 9))
        assert pattern_of(out) == pattern_of(M)

    def test_rejects_non_diagonal(self):
        with pytest.raises(ValueError):
            sym_mult(np.ones((2, 2)), np.eye(2), np.eye(2))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            sym_mult([1, 2, 3], np.eye(2), [1, 2])

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_first_squaring_of_pcm(self, m, rng):
        for _ in range(5):
            (S,) = substitute(build_pcm(color_matrix(substitute(random_graph(m, rng))[0])))
            d = np.diag(S)
            # the sandwich is not symmetric; take the lessor as squaring does
            X = sym_mult(d, S, d)
            n = X.shape[0]
            L = np.empty_like(X)
            for i in range(n):
                for j in range(n):
                    L[i, j] = min(X[i, j], X[j, i])
            lhs = pattern_of(sym_sub(L))
            rhs = pattern_of(sym_sub(sym_sqr(S)))
            assert lhs == rhs
