import numpy as np
import pytest
from PIL import Image


def _write_image(path, seed, mode="RGB", size=(48, 48)):
    rng = np.random.default_rng(seed)
    if mode == "L":
        arr = rng.integers(0, 256, size=size, dtype=np.uint8)
    else:
        arr = rng.integers(0, 256, size=(*size, 3), dtype=np.uint8)
    Image.fromarray(arr, mode=mode).save(path)


@pytest.fixture(scope="session")
def toy_images(tmp_path_factory):
    """20 images in two class folders; one grayscale to cover conversion."""
    root = tmp_path_factory.mktemp("toy_images")
    for cls, offset in (("healthy", 0), ("lesion", 100)):
        class_dir = root / cls
        class_dir.mkdir()
        for i in range(10):
            mode = "L" if (cls == "healthy" and i == 0) else "RGB"
            _write_image(class_dir / f"img_{i:02d}.png", seed=offset + i, mode=mode)
    return root


@pytest.fixture()
def corrupt_images(tmp_path):
    """Two class folders where one file is not a decodable image."""
    for cls, offset in (("a", 0), ("b", 50)):
        class_dir = tmp_path / cls
        class_dir.mkdir()
        for i in range(3):
            _write_image(class_dir / f"img_{i}.png", seed=offset + i)
    (tmp_path / "a" / "broken.png").write_bytes(b"this is not an image")
    return tmp_path
