import pytest

from quartic_iso.utils.workers import iter_chunks, run_chunks, split_range


@pytest.mark.parametrize(
    ("start", "stop", "parts", "expected"),
    [
        (0, 10, 3, [(0, 4), (4, 7), (7, 10)]),
        (5, 5, 3, []),
        (0, 2, 5, [(0, 1), (1, 2)]),
        (1, 8, 1, [(1, 8)]),
        (0, 4, 0, [(0, 4)]),
    ],
)
def test_split_range(start, stop, parts, expected):
    assert split_range(start, stop, parts) == expected


def test_split_range_covers_the_range():
    chunks = split_range(3, 1000, 7)
    assert chunks[0][0] == 3
    assert chunks[-1][1] == 1000
    assert all(a[1] == b[0] for a, b in zip(chunks, chunks[1:], strict=False))


def test_run_chunks_keeps_order_in_process():
    assert run_chunks(sum, [(1, 2), (3, 4), (5,)]) == [3, 7, 5]


def test_run_chunks_keeps_order_with_pool():
    chunks = [tuple(range(k)) for k in range(12)]
    assert run_chunks(sum, chunks, workers=2) == [sum(c) for c in chunks]


def test_iter_chunks_can_stop_early():
    results = iter_chunks(sum, [(k,) for k in range(100)], workers=2)
    assert next(results) == 0
    results.close()
