import numpy as np
import pytest

from tensorfill.tensor import (
    ObservationMask,
    check_tensor3,
    dct_matrix,
    dct_mode,
    dft_mode,
    flatten,
    fold,
    idct_mode,
    idft_mode,
    mode_product,
    mode_slice_stack,
    mode_slices,
    norms,
    project_mask,
    stack_to_tensor,
    unfold,
    unflatten,
)


def rand(rng, dims):
    return rng.standard_normal(dims)


def test_check_tensor3_rejects_bad_input():
    with pytest.raises(ValueError):
        check_tensor3(np.zeros((2, 2)))
    bad = np.zeros((2, 2, 2))
    bad[0, 0, 0] = np.nan
    with pytest.raises(ValueError):
        check_tensor3(bad)


def test_unfold_zero_case():
    x = np.zeros((2, 3, 4))
    assert unfold(x, 2).shape == (3, 8)
    assert not unfold(x, 2).any()


def test_unfold_layout_order_index_map():
    # Entries 1..8 in layout order: element (i,j,k) = 1 + i + 2j + 4k.
    x = unflatten(np.arange(1.0, 9.0), (2, 2, 2))
    m = unfold(x, 1)
    assert m.shape == (2, 4)
    for r in range(2):
        for c in range(4):
            assert m[r, c] == x[r, c % 2, c // 2]


def test_fold_unfold_roundtrip_bit_exact():
    rng = np.random.default_rng(3)
    for dims in [(4, 5, 6), (2, 2, 2), (7, 3, 5), (1, 4, 3)]:
        x = rand(rng, dims)
        for mode in (1, 2, 3):
            y = fold(unfold(x, mode), mode, dims)
            assert np.array_equal(y, x)


def test_fold_single_entry_index_map():
    dims = (3, 4, 2)
    for mode, r, c in [(1, 2, 5), (2, 1, 4), (3, 0, 7)]:
        rest = [d for i, d in enumerate(dims) if i != mode - 1]
        m = np.zeros((dims[mode - 1], rest[0] * rest[1]))
        m[r, c] = 1.0
        x = fold(m, mode, dims)
        # Column c decomposes as (lower remaining index) + (higher) * size.
        a, b = c % rest[0], c // rest[0]
        idx = {1: (r, a, b), 2: (a, r, b), 3: (a, b, r)}[mode]
        assert x[idx] == 1.0
        assert np.sum(x != 0) == 1


def test_fold_shape_mismatch():
    with pytest.raises(ValueError):
        fold(np.zeros((3, 9)), 1, (3, 4, 2))


def test_mode_product_identity_and_zero():
    rng = np.random.default_rng(4)
    x = rand(rng, (3, 4, 2))
    assert np.allclose(mode_product(x, np.eye(4), 2), x)
    assert not mode_product(np.zeros((3, 4, 2)), rng.standard_normal((5, 4)), 2).any()


def test_mode_product_matches_triple_loop():
    rng = np.random.default_rng(5)
    x = rand(rng, (3, 4, 2))
    a = rng.standard_normal((5, 4))
    got = mode_product(x, a, 2)
    want = np.zeros((3, 5, 2))
    for i in range(3):
        for p in range(5):
            for k in range(2):
                want[i, p, k] = sum(a[p, j] * x[i, j, k] for j in range(4))
    assert np.allclose(got, want, atol=1e-12)


def test_mode_product_dimension_mismatch():
    with pytest.raises(ValueError):
        mode_product(np.zeros((3, 4, 2)), np.zeros((5, 3)), 2)


def test_mode_product_composition():
    rng = np.random.default_rng(6)
    x = rand(rng, (4, 3, 5))
    a = rng.standard_normal((6, 3))
    b = rng.standard_normal((2, 6))
    lhs = mode_product(mode_product(x, a, 2), b, 2)
    rhs = mode_product(x, b @ a, 2)
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_mode_slices_shapes_and_orientation():
    rng = np.random.default_rng(7)
    x = rand(rng, (3, 4, 5))
    for s in mode_slices(x, 2):
        assert s.shape == (5, 3)
    s2 = mode_slices(x, 2)
    assert s2[1][2, 0] == x[0, 1, 2]
    for k, s in enumerate(mode_slices(x, 3)):
        assert np.array_equal(s, x[:, :, k])


def test_mode_slices_reassemble():
    rng = np.random.default_rng(8)
    x = rand(rng, (4, 3, 2))
    for mode in (1, 2, 3):
        batch = mode_slice_stack(x, mode)
        assert np.array_equal(stack_to_tensor(batch, mode), x)


def test_norms_cases():
    assert norms(np.zeros((2, 2, 2))) == (0.0, 0.0, 0.0)
    x = np.zeros((2, 2, 2))
    x[1, 0, 1] = 3.0
    assert norms(x) == (3.0, 3.0, 3.0)
    y = unflatten(np.array([1.0, 2.0, 2.0, 0, 0, 0, 0, 0]), (2, 2, 2))
    n = norms(y)
    assert n.fro == pytest.approx(3.0)
    assert n.l1 == pytest.approx(5.0)
    assert n.linf == pytest.approx(2.0)


def test_project_mask_full_empty_partition():
    rng = np.random.default_rng(9)
    dims = (3, 4, 2)
    x = rand(rng, dims)
    total = 24
    full = ObservationMask(dims, np.arange(total))
    empty = ObservationMask(dims, np.array([], dtype=np.int64))
    assert np.array_equal(project_mask(x, full, "on"), x)
    assert not project_mask(x, full, "off").any()
    assert not project_mask(x, empty, "on").any()
    assert np.array_equal(project_mask(x, empty, "off"), x)
    some = ObservationMask(dims, np.sort(np.random.default_rng(1).choice(total, 10, replace=False)))
    both = project_mask(x, some, "on") + project_mask(x, some, "off")
    assert np.array_equal(both, x)


def test_mask_validation():
    with pytest.raises(ValueError):
        ObservationMask((2, 2, 2), np.array([0, 0, 1]))
    with pytest.raises(ValueError):
        ObservationMask((2, 2, 2), np.array([8]))
    with pytest.raises(ValueError):
        project_mask(np.zeros((2, 2, 3)), ObservationMask((2, 2, 2), np.array([1])), "on")


def test_mask_linear_offset_convention():
    dims = (3, 4, 2)
    mask = ObservationMask(dims, np.array([1 + 2 * 3 + 1 * 12]))
    assert mask.bool_array()[1, 2, 1]
    assert mask.bool_array().sum() == 1


def test_dft_constant_concentrates_in_dc():
    x = np.tile(np.random.default_rng(10).standard_normal((4, 1, 5)), (1, 3, 1))
    xh = dft_mode(x, 2)
    assert np.allclose(xh[:, 1:, :], 0.0, atol=1e-12)


def test_dft_roundtrip_and_parseval():
    rng = np.random.default_rng(11)
    x = rand(rng, (4, 3, 5))
    for mode in (1, 2, 3):
        back = idft_mode(dft_mode(x, mode), mode)
        assert np.max(np.abs(back - x)) < 1e-12 * max(1.0, np.abs(x).max())
        n = x.shape[mode - 1]
        assert np.sum(np.abs(dft_mode(x, mode)) ** 2) / n == pytest.approx(
            np.sum(x * x), rel=1e-12
        )


def test_dct_roundtrip_and_isometry():
    rng = np.random.default_rng(12)
    x = rand(rng, (5, 4, 3))
    for mode in (1, 2, 3):
        back = idct_mode(dct_mode(x, mode), mode)
        assert np.max(np.abs(back - x)) < 1e-12 * max(1.0, np.abs(x).max())
        assert np.linalg.norm(dct_mode(x, mode)) == pytest.approx(
            np.linalg.norm(x), rel=1e-12
        )


def test_dct_matrix_closed_form():
    c = dct_matrix(2)
    want = np.array(
        [
            [np.sqrt(1 / 2) * np.cos(0), np.sqrt(1 / 2) * np.cos(0)],
            [np.cos(np.pi / 4), np.cos(3 * np.pi / 4)],
        ]
    )
    assert np.allclose(c, want, atol=1e-14)
    for n in (2, 3, 7):
        cn = dct_matrix(n)
        assert np.allclose(cn @ cn.T, np.eye(n), atol=1e-12)
        # Matches the transform applied along a mode.
        x = np.random.default_rng(n).standard_normal((n, 2, 2))
        assert np.allclose(dct_mode(x, 1), mode_product(x, cn, 1), atol=1e-12)


def test_orthogonal_mode_product_preserves_norm():
    rng = np.random.default_rng(13)
    x = rand(rng, (6, 5, 4))
    q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
    assert np.linalg.norm(mode_product(x, q, 2)) == pytest.approx(
        np.linalg.norm(x), abs=1e-10
    )


def test_flatten_layout():
    x = unflatten(np.arange(24.0), (2, 3, 4))
    assert np.array_equal(flatten(x), np.arange(24.0))
    assert x[1, 2, 3] == 1 + 2 * 2 + 3 * 6
