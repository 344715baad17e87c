import pytest

from argldpc.construct import TieBreakPolicy
from argldpc.graph import girth
from argldpc.sweep import RATE_HALF_REFERENCE, SweepRow, block_lengths, sweep


def test_block_lengths():
    assert list(block_lengths(1, 2, None, 12, None)) == [4, 6, 8, 10, 12]
    assert list(block_lengths(2, 3, 5, 20, 6)) == [6, 12, 18]
    with pytest.raises(ValueError):
        list(block_lengths(1, 2, None, 20, 3))


def test_girth_four_is_immediate():
    row = sweep(3, 4, n_start=20, n_max=200)
    assert row.found and row.n == 20 and row.attempts == 1


def test_girth_six_small():
    row = sweep(3, 6, n_max=80)
    assert row.found and row.n <= 80 and row.achieved_girth >= 6


def test_first_hit_is_minimal():
    row = sweep(2, 8, n_max=400)
    assert row.found
    for n in range(4, row.n, 2):
        sub = sweep(2, 8, n_start=n, n_max=n)
        assert not sub.found


def test_not_found():
    row = sweep(3, 12, n_max=40)
    assert not row.found and row.n is None
    assert row.achieved_girth is not None and row.achieved_girth < 12
    assert row.to_line().startswith("3 12 not-found")


def test_seeded_retries_count_attempts():
    row = sweep(3, 12, n_max=16, seeds=2)
    assert row.attempts == 7 * 3


def test_row_text():
    assert SweepRow(3, 8, 186, 8, 92).to_line() == "3 8 186 8 92"


def test_reference_table_shape():
    assert all(g in (6, 8, 10) for _, g, _ in RATE_HALF_REFERENCE)
    assert len(RATE_HALF_REFERENCE) == 6
