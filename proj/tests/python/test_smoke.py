"""Smoke tests for the python bindings; the C++ suites carry the real load."""

import numpy as np
import pytest

import repshift


def random_image(rng, w=32, h=24):
    return rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)


def test_wasserstein_basics():
    assert repshift.wasserstein1([3.0], [3.0]) == 0.0
    assert repshift.wasserstein1([0.0], [5.0]) == 5.0
    assert repshift.wasserstein1([1, 2, 3], [2, 3, 4]) == pytest.approx(1.0)


def test_representation_shift_self_is_zero():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(6, 8)).astype(np.float32)
    report = repshift.representation_shift(m, m)
    assert report["representation_shift"] == 0.0
    assert report["channels"] == 8


def test_image_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    img = random_image(rng)
    path = tmp_path / "img.png"
    repshift.write_image(img, path)
    assert np.array_equal(repshift.read_image(path), img)


def test_feature_dump_round_trip(tmp_path):
    rng = np.random.default_rng(2)
    values = rng.normal(size=(4, 5)).astype(np.float32)
    path = tmp_path / "m.wfd"
    repshift.write_feature_dump(values, "tag", path)
    back, tag = repshift.read_feature_dump(path)
    assert tag == "tag"
    assert np.array_equal(back, values)


def test_filter_bank_deterministic():
    rng = np.random.default_rng(3)
    img = random_image(rng)
    bank_a = repshift.FilterBank(seed=7)
    bank_b = repshift.FilterBank(seed=7)
    assert bank_a.out_channels == 64
    assert bank_a.channel_means(img) == bank_b.channel_means(img)


def test_augment_ops_preserve_shape_and_determinism():
    rng = np.random.default_rng(4)
    img = random_image(rng, 40, 30)
    ref = random_image(rng, 40, 30)

    out = repshift.lowfreq_exchange(img, ref, beta=0.2)
    assert out.shape == img.shape
    assert np.array_equal(repshift.lowfreq_exchange(img, img, beta=0.2), img) or (
        np.abs(repshift.lowfreq_exchange(img, img, beta=0.2).astype(int) - img.astype(int)).max()
        <= 1
    )

    assert np.array_equal(repshift.color_augment(img, 0.0, seed=9), img)
    assert np.array_equal(
        repshift.frosted_glass(img, 3, seed=5), repshift.frosted_glass(img, 3, seed=5)
    )
    quantized = repshift.poster(img, 4)
    assert np.array_equal(repshift.poster(quantized, 4), quantized)
    assert repshift.mural(img, 2, 8).shape == img.shape


def test_weak_label_path():
    mask = np.full((20, 20), 255, dtype=np.uint8)
    mask[2:12, 3:13] = 4
    boxes = repshift.boxes_from_mask(mask, min_area=1)
    assert boxes == [(4, 3, 2, 12, 11)]

    img = np.zeros((24, 24, 3), dtype=np.uint8)
    img[:, :] = (20, 40, 200)
    img[8:16, 8:16] = (210, 30, 35)
    fg = repshift.grabcut_box(img, (0, 5, 5, 18, 18))
    assert fg.shape == (24, 24)
    assert fg[10, 10]
    assert not fg[0, 0]

    pseudo = repshift.pseudo_label(img, [(2, 5, 5, 18, 18)], num_classes=19)
    assert pseudo[10, 10] == 2
    assert pseudo[0, 0] == 255


def test_wasserstein_matches_scipy_at_scale():
    scipy_stats = pytest.importorskip("scipy.stats")
    rng = np.random.default_rng(7)
    for _ in range(10):
        a = rng.normal(size=rng.integers(1, 1200)).tolist()
        b = rng.normal(loc=0.3, size=rng.integers(1, 800)).tolist()
        ours = repshift.wasserstein1(a, b)
        reference = scipy_stats.wasserstein_distance(a, b)
        assert ours == pytest.approx(reference, abs=1e-9)


def test_eval_path():
    gt = np.array([[0, 1]], dtype=np.uint8)
    pred = np.array([[0, 0]], dtype=np.uint8)
    cm = repshift.confusion(gt, pred, num_classes=2)
    assert cm[0, 0] == 1 and cm[1, 0] == 1
    result = repshift.miou(cm)
    assert result["miou"] == pytest.approx(0.25)

    fit = repshift.regress([(0, 0), (1, 2), (2, 4)])
    assert fit["slope"] == pytest.approx(2.0)
    assert fit["pearson_r"] == pytest.approx(1.0)
