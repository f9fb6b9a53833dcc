import itertools
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spermat.errors import (
    BlockViolation,
    ColumnSecondComponentNotPermutation,
    ColumnViolation,
    DimensionNotSquareOfSquare,
    FamilyNotPairwiseDisjoint,
    FamilySizeWrong,
    InvalidPermutation,
    InvalidPiMatrix,
    InvalidSudoku,
    RowFirstComponentNotPermutation,
    RowViolation,
    SizeMismatch,
)
from spermat.matrix import (
    BinaryMatrix,
    Permutation,
    PiMatrix,
    SPermMatrix,
    SudokuMatrix,
    coincidence_matrix,
    compose_sudoku,
    decompose_sudoku,
    disjoint_pi,
    disjoint_sigma,
    pi_to_sigma,
    random_pi,
    random_pi_batch,
    sigma_to_pi,
    validate_pi,
    validate_s_permutation,
)

from conftest import brute_sigma


def grid_from_ones(m, ones):
    return [[int((r, c) in ones) for c in range(1, m + 1)] for r in range(1, m + 1)]


def block_coords(grid):
    """Within-block coordinates by arithmetic on global positions."""
    m = len(grid)
    n = int(m ** 0.5)
    out = [[None] * n for _ in range(n)]
    for r in range(m):
        for c in range(m):
            if grid[r][c]:
                out[r // n][c // n] = (r % n + 1, c % n + 1)
    return out


SIGMA4 = brute_sigma(2)


def test_brute_force_sigma_sizes():
    assert len(SIGMA4) == 16
    assert len(brute_sigma(1)) == 1


def test_permutation():
    p = Permutation((2, 3, 1))
    assert p.n == 3 and p(1) == 2 and p(3) == 1
    with pytest.raises(InvalidPermutation):
        Permutation((1, 1, 2))


def test_binary_matrix_basics():
    m = BinaryMatrix.from_rows(["010", "110", "000"])
    assert m.n == 3 and m.k == 3
    assert m.row_sums() == (1, 2, 0) and m.col_sums() == (1, 2, 0)
    assert BinaryMatrix.from_int(3, m.to_int()) == m
    assert m.to_strings() == ["010", "110", "000"]


def test_validate_s_permutation_example():
    grid = grid_from_ones(4, {(1, 1), (2, 3), (3, 4), (4, 2)})
    a = validate_s_permutation(grid)
    assert a.n == 2
    assert [list(r) for r in a.block_ones] == block_coords(grid)
    # frozen from the arithmetic oracle above
    assert a.block_ones == (((1, 1), (2, 1)), ((2, 2), (1, 2)))
    assert a.to_grid() == tuple(map(tuple, grid))


def test_validate_s_permutation_errors():
    identity = [[int(i == j) for j in range(4)] for i in range(4)]
    with pytest.raises(BlockViolation) as exc:
        validate_s_permutation(identity)
    assert exc.value.index == (1, 1)
    with pytest.raises(RowViolation) as exc:
        validate_s_permutation([[0] * 4 for _ in range(4)])
    assert exc.value.index == 1
    with pytest.raises(DimensionNotSquareOfSquare):
        validate_s_permutation([[0] * 3 for _ in range(3)])
    bad_col = grid_from_ones(4, {(1, 1), (2, 3), (3, 1), (4, 2)})
    with pytest.raises(ColumnViolation) as exc:
        validate_s_permutation(bad_col)
    assert exc.value.index == 1


def test_sigma_to_pi_example():
    grid = grid_from_ones(4, {(1, 1), (2, 3), (3, 4), (4, 2)})
    p = sigma_to_pi(validate_s_permutation(grid))
    assert p.entries == (((1, 1), (2, 1)), ((2, 2), (1, 2)))
    validate_pi(p.entries)


def test_round_trip_exhaustive_n2():
    seen = set()
    for grid in SIGMA4:
        a = validate_s_permutation(grid)
        p = sigma_to_pi(a)
        assert pi_to_sigma(p) == a
        assert pi_to_sigma(p).to_grid() == grid
        assert sigma_to_pi(pi_to_sigma(p)) == p
        seen.add(p)
    assert len(seen) == 16


@pytest.mark.parametrize("n", [3, 4])
def test_round_trip_random(n):
    for p in random_pi_batch(n, 1000, seed=n):
        a = pi_to_sigma(p)
        assert validate_s_permutation(a.to_grid()) == a
        assert sigma_to_pi(a) == p


def test_example_matrices_valid(pi1, pi2, pi3):
    for p in (pi1, pi2, pi3):
        a = pi_to_sigma(p)
        assert a.size == 9
        assert validate_s_permutation(a.to_grid()) == a


def test_validate_pi_errors(pi1):
    rows = [list(r) for r in pi1.entries]
    rows[0][0] = (3, 2)
    with pytest.raises(RowFirstComponentNotPermutation) as exc:
        validate_pi(rows)
    assert exc.value.index == 1
    with pytest.raises(ColumnSecondComponentNotPermutation) as exc:
        validate_pi([[(1, 1), (2, 1)], [(2, 1), (1, 2)]])
    assert exc.value.index == 1
    with pytest.raises(InvalidPiMatrix):
        validate_pi([[(1, 1), (2, 3)], [(2, 2), (1, 1)]])
    assert validate_pi([[(1, 1)]]).n == 1


def test_pi_to_sigma_rejects_duplicates():
    with pytest.raises(InvalidPiMatrix):
        pi_to_sigma(PiMatrix([[(1, 1), (1, 2)], [(2, 2), (1, 1)]]))


def test_spermmatrix_direct_construction_reports_grid_row():
    with pytest.raises(RowViolation) as exc:
        SPermMatrix([[(1, 1), (1, 2)], [(2, 2), (1, 1)]])
    assert exc.value.index == 1


def test_disjointness_examples(pi1, pi2, pi3):
    assert disjoint_pi(pi1, pi2)
    assert not disjoint_pi(pi2, pi3)
    assert not disjoint_pi(pi1, pi1)
    assert disjoint_sigma(pi_to_sigma(pi1), pi_to_sigma(pi2))
    a = pi_to_sigma(pi1)
    assert not disjoint_sigma(a, a)


def test_coincidence_examples(pi1, pi2, pi3):
    c13 = coincidence_matrix(pi1, pi3)
    assert c13.ones() == [(1, 1), (2, 1), (2, 3), (3, 1)] and c13.k == 4
    c23 = coincidence_matrix(pi2, pi3)
    assert c23.ones() == [(1, 3), (3, 3)] and c23.k == 2
    assert pi2.entries[0][2] == pi3.entries[0][2] == (2, 1)
    assert pi2.entries[2][2] == pi3.entries[2][2] == (2, 3)
    assert coincidence_matrix(pi1, pi2).k == 0


def test_size_mismatch(pi1):
    small = PiMatrix([[(1, 1)]])
    for fn in (disjoint_pi, coincidence_matrix):
        with pytest.raises(SizeMismatch):
            fn(pi1, small)
    with pytest.raises(SizeMismatch):
        disjoint_sigma(pi_to_sigma(pi1), pi_to_sigma(small))


def test_disjoint_transport_all_pairs_n2():
    mats = [validate_s_permutation(g) for g in SIGMA4]
    pairs = list(itertools.combinations(range(16), 2))
    assert len(pairs) == 120
    for i, j in pairs:
        grid_disjoint = not any(
            SIGMA4[i][r][c] and SIGMA4[j][r][c] for r in range(4) for c in range(4)
        )
        assert disjoint_sigma(mats[i], mats[j]) == grid_disjoint
        assert disjoint_pi(sigma_to_pi(mats[i]), sigma_to_pi(mats[j])) == grid_disjoint


def test_disjoint_transport_random_n3():
    ps = random_pi_batch(3, 400, seed=11)
    for p, q in zip(ps[::2], ps[1::2]):
        assert disjoint_sigma(pi_to_sigma(p), pi_to_sigma(q)) == disjoint_pi(p, q)
        assert disjoint_pi(p, q) == (coincidence_matrix(p, q).k == 0)
        assert disjoint_pi(p, q) == disjoint_pi(q, p)


pair_matrices = st.integers(1, 4).flatmap(
    lambda n: st.tuples(
        st.lists(st.permutations(range(1, n + 1)), min_size=n, max_size=n),
        st.lists(st.permutations(range(1, n + 1)), min_size=n, max_size=n),
    ).map(lambda rs: PiMatrix.from_permutations(
        [Permutation(tuple(r)) for r in rs[0]], [Permutation(tuple(s)) for s in rs[1]]
    ))
)


@settings(max_examples=200, deadline=None)
@given(pair_matrices)
def test_round_trip_property(p):
    a = pi_to_sigma(p)
    assert sigma_to_pi(a) == p
    assert validate_s_permutation(a.to_grid()) == a
    for i in range(1, p.n + 1):
        assert p.row_permutation(i).image == tuple(e[0] for e in p.entries[i - 1])


@settings(max_examples=100, deadline=None)
@given(pair_matrices, st.integers(0, 2**64 - 1))
def test_disjoint_symmetric_and_antireflexive(p, seed):
    q = random_pi(p.n, seed)
    assert disjoint_pi(p, q) == disjoint_pi(q, p)
    assert not disjoint_pi(p, p)
    assert disjoint_pi(p, q) == (coincidence_matrix(p, q).k == 0)
    assert disjoint_sigma(pi_to_sigma(p), pi_to_sigma(q)) == disjoint_pi(p, q)


def test_from_permutations_layout():
    rhos = [Permutation((2, 1)), Permutation((1, 2))]
    sigmas = [Permutation((1, 2)), Permutation((2, 1))]
    p = PiMatrix.from_permutations(rhos, sigmas)
    # entry (i,j) = (rho_i(j), sigma_j(i))
    assert p.entries == (((2, 1), (1, 2)), ((1, 2), (2, 1)))


# Sudoku composition

def disjoint_families():
    mats = [validate_s_permutation(g) for g in SIGMA4]
    fams = []
    for combo in itertools.combinations(range(16), 4):
        if all(disjoint_sigma(mats[a], mats[b]) for a, b in itertools.combinations(combo, 2)):
            fams.append([mats[i] for i in combo])
    return fams


def brute_sudoku_4x4():
    grids = []
    for rows in itertools.product(itertools.permutations(range(1, 5)), repeat=4):
        if any(len({rows[r][c] for r in range(4)}) != 4 for c in range(4)):
            continue
        if all(len({rows[br + a][bc + b] for a in range(2) for b in range(2)}) == 4
               for br in (0, 2) for bc in (0, 2)):
            grids.append(tuple(rows))
    return grids


def test_compose_trivial():
    assert compose_sudoku([SPermMatrix([[(1, 1)]])]).cells == ((1,),)


def test_compose_all_families_n2():
    fams = disjoint_families()
    assert len(fams) == 12
    sudokus = set()
    for fam in fams:
        for order in itertools.permutations(fam):
            s = compose_sudoku(order)
            sudokus.add(s.cells)
            back = decompose_sudoku(s)
            assert back == list(order)
            assert compose_sudoku(back) == s
    assert sudokus == set(brute_sudoku_4x4())
    assert len(sudokus) == 288


def test_compose_errors():
    fam = disjoint_families()[0]
    with pytest.raises(FamilyNotPairwiseDisjoint) as exc:
        compose_sudoku([fam[0], fam[0], fam[1], fam[2]])
    assert exc.value.pair == (1, 2)
    with pytest.raises(FamilySizeWrong):
        compose_sudoku(fam[:3])
    with pytest.raises(FamilySizeWrong):
        compose_sudoku([])


def test_sudoku_validation():
    good = brute_sudoku_4x4()[0]
    SudokuMatrix(good)
    bad = [list(r) for r in good]
    bad[0][1] = bad[0][0]
    with pytest.raises(InvalidSudoku):
        decompose_sudoku(bad)
    with pytest.raises(InvalidSudoku):
        SudokuMatrix([[1, 2, 3], [2, 3, 1], [3, 1, 2]])


def test_decompose_random_9x9():
    # build a 9x9 sudoku by the classic shifting pattern and decompose it
    cells = [[(3 * (r % 3) + r // 3 + c) % 9 + 1 for c in range(9)] for r in range(9)]
    s = SudokuMatrix(cells)
    fam = decompose_sudoku(s)
    assert len(fam) == 9
    assert compose_sudoku(fam) == s


# random pair matrices

def test_random_pi_deterministic_and_valid():
    assert random_pi(3, 123) == random_pi(3, 123)
    assert random_pi(3, 123) == random_pi_batch(3, 1, 123)[0]
    assert random_pi(1, 5).entries == (((1, 1),),)
    for p in random_pi_batch(4, 50, 9):
        validate_pi(p.entries)
    with pytest.raises(ValueError):
        random_pi(2, -1)
    with pytest.raises(ValueError):
        random_pi(2, 2**64)


def test_random_pi_uniform_n2():
    draws = 100_000
    counts = Counter(random_pi_batch(2, draws, seed=2024))
    assert len(counts) == 16
    p = 1 / 16
    sigma = (draws * p * (1 - p)) ** 0.5
    for c in counts.values():
        assert abs(c - draws * p) <= 5 * sigma
