"""Projective image warping with selectable interpolation and anti-aliasing."""

from projwarp._core import (
    eval_kernel,
    load_image,
    mip_levels,
    psnr,
    random_composed_triple,
    reference_resample,
    rip_shape,
    save_image,
    support_radius,
    warp,
    warp_chain,
    warp_with_stats,
)

__all__ = [
    "eval_kernel",
    "load_image",
    "mip_levels",
    "psnr",
    "random_composed_triple",
    "reference_resample",
    "rip_shape",
    "save_image",
    "support_radius",
    "warp",
    "warp_chain",
    "warp_with_stats",
]
