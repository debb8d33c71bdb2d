import pytest
from hypothesis import given, strategies as st

from qreliab import kernels
from qreliab._purecount import count_containing_any, minimize_masks


def test_backend_reports_choice():
    assert kernels.BACKEND in ("cython", "python")


def test_count_no_masks():
    assert count_containing_any(4, []) == 0


def test_count_empty_mask_matches_everything():
    assert count_containing_any(4, [0]) == 16


def test_count_single_bit():
    # Half of all subsets contain a fixed element.
    assert count_containing_any(5, [0b00100]) == 16


def test_count_union():
    # Inclusion-exclusion: |A| + |B| - |A and B| over 3 bits.
    assert count_containing_any(3, [0b001, 0b010]) == 4 + 4 - 2


def test_minimize_masks_drops_supersets():
    assert set(minimize_masks([0b011, 0b001, 0b111])) == {0b001}
    assert minimize_masks([]) == []


@given(
    st.integers(0, 12),
    st.lists(st.integers(0, 4095), max_size=6),
)
def test_backends_agree(nbits, masks):
    masks = [m & ((1 << nbits) - 1) for m in masks]
    assert kernels.count_containing_any(nbits, masks) == count_containing_any(
        nbits, masks
    )


@given(st.integers(0, 10), st.lists(st.integers(0, 1023), max_size=5))
def test_count_matches_naive(nbits, masks):
    masks = [m & ((1 << nbits) - 1) for m in masks]
    naive = sum(
        1
        for world in range(1 << nbits)
        if any(world & m == m for m in masks)
    )
    assert count_containing_any(nbits, masks) == naive


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="extension not built")
def test_fast_kernel_rejects_oversized():
    from qreliab import _fastcount

    with pytest.raises(ValueError):
        _fastcount.count_containing_any(63, [1])
