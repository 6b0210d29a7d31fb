"""Representation-shift toolkit.

Measures the domain shift between two image datasets as the mean per-channel
Wasserstein-1 distance of feature activation statistics, constructs augmented
dataset pairs with a prescribed shift, and provides weak-label tooling
(mask -> box extraction, box -> pseudo-mask generation) plus the evaluation
statistics (mIoU, Pearson / linear regression) that tie them together.
"""

from ._repshift import (  # noqa: F401
    FilterBank,
    __version__,
    boxes_from_mask,
    color_augment,
    confusion,
    frosted_glass,
    grabcut_box,
    lowfreq_exchange,
    miou,
    mural,
    poster,
    pseudo_label,
    read_feature_dump,
    read_image,
    read_mask,
    regress,
    representation_shift,
    wasserstein1,
    write_feature_dump,
    write_image,
    write_mask,
)

__all__ = [
    "FilterBank",
    "__version__",
    "boxes_from_mask",
    "color_augment",
    "confusion",
    "frosted_glass",
    "grabcut_box",
    "lowfreq_exchange",
    "miou",
    "mural",
    "poster",
    "pseudo_label",
    "read_feature_dump",
    "read_image",
    "read_mask",
    "regress",
    "representation_shift",
    "wasserstein1",
    "write_feature_dump",
    "write_image",
    "write_mask",
]
