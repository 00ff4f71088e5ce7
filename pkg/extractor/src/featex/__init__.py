"""Pooled-feature extraction from image folders (ResNet50 backbone)."""

from .backbone import POOLED_FEATURE_DIM, build_preprocess, load_backbone
from .extract import ExtractorConfig, clamp_epochs, extract_features, finetune_backbone, scan_images
from .formats import write_csv, write_dataset, write_rnf

__version__ = "0.1.0"
