"""ResNet50 backbone, truncated at the global-average-pool output.

The classifier head is replaced with an identity so a forward pass maps a
batch of images straight to 2048-wide pooled feature vectors. Weight
policy:

* ``imagenet`` - require the pretrained ImageNet weights (fails offline
  with no cached checkpoint).
* ``random``   - seeded random initialization, fully deterministic.
* ``auto``     - try ImageNet, fall back to seeded random with a warning.

The weights actually used are recorded in the run manifest either way.
"""

from __future__ import annotations

import warnings

import torch
from PIL import Image
from torch import nn
from torchvision import models, transforms

POOLED_FEATURE_DIM = 2048
WEIGHT_POLICIES = ("auto", "imagenet", "random")

_IMAGENET_MEAN = [0.485, 0.456, 0.406]
_IMAGENET_STD = [0.229, 0.224, 0.225]


def load_backbone(weights: str = "auto", seed: int = 0) -> tuple[nn.Module, str]:
    """Build the truncated backbone; returns (model, weights_used)."""
    if weights not in WEIGHT_POLICIES:
        raise ValueError(f"unknown weight policy {weights!r}")
    model = None
    used = ""
    if weights in ("auto", "imagenet"):
        try:
            model = models.resnet50(weights=models.ResNet50_Weights.DEFAULT)
            used = "imagenet"
        except Exception as exc:
            if weights == "imagenet":
                raise RuntimeError(f"pretrained ImageNet weights unavailable: {exc}") from exc
            warnings.warn(
                f"pretrained ImageNet weights unavailable ({exc}); "
                f"falling back to seeded random initialization (seed={seed})",
                RuntimeWarning,
                stacklevel=2,
            )
    if model is None:
        torch.manual_seed(seed)
        model = models.resnet50(weights=None)
        used = f"random(seed={seed})"
    model.fc = nn.Identity()
    model.eval()
    return model, used


def build_preprocess(input_size: int = 224) -> transforms.Compose:
    """Standard backbone eval transform: resize, center crop, normalize."""
    if input_size < 64:
        raise ValueError("input_size must be >= 64")
    return transforms.Compose(
        [
            transforms.Resize(round(input_size * 256 / 224)),
            transforms.CenterCrop(input_size),
            transforms.ToTensor(),
            transforms.Normalize(mean=_IMAGENET_MEAN, std=_IMAGENET_STD),
        ]
    )


def decode_image(path, preprocess) -> torch.Tensor:
    """Decode one image to a preprocessed tensor; grayscale inputs are
    replicated to three channels by the RGB conversion."""
    with Image.open(path) as img:
        return preprocess(img.convert("RGB"))
