"""Core raster types and file I/O for images and disparity maps.

All pixel processing in this package happens on NumPy float64 arrays in
[0, 1]. The types here are thin immutable wrappers that enforce the range
and shape invariants once, at construction, so downstream code can assume
clean data.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
from PIL import Image as PILImage

PathLike = Union[str, Path]

# PIL modes that carry 16-bit grayscale samples.
_SIXTEEN_BIT_MODES = ("I;16", "I;16L", "I;16B", "I;16N", "I")


class Direction(enum.Enum):
    """Which stereo view a disparity map warps away from."""

    LEFT_TO_RIGHT = "left_to_right"
    RIGHT_TO_LEFT = "right_to_left"


@dataclass(frozen=True)
class Image:
    """H x W raster of RGB pixels, each channel a finite float64 in [0, 1].

    The constructor takes ownership of the array: it is converted to
    float64, validated, and marked read-only.
    """

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"image pixels must have shape (H, W, 3), got {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("image dimensions must be positive")
        if not np.isfinite(px).all():
            raise ValueError("image contains non-finite channel values")
        if px.min() < 0.0 or px.max() > 1.0:
            raise ValueError("image channels must lie in [0, 1]")
        object.__setattr__(self, "pixels", px)
        px.flags.writeable = False

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple:
        return self.pixels.shape

    @staticmethod
    def full(width: int, height: int, rgb=(0.0, 0.0, 0.0)) -> "Image":
        """Constant-color image, mostly useful in tests and demos."""
        px = np.empty((height, width, 3), dtype=np.float64)
        px[:] = np.asarray(rgb, dtype=np.float64)
        return Image(px)


@dataclass(frozen=True)
class DisparityMap:
    """H x W raster of signed horizontal pixel shifts toward the opposite view.

    Values are in pixels at the stored resolution. The `direction` tag says
    which stereo view the shifts originate from; loaders never flip signs.
    """

    values: np.ndarray
    direction: Direction

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 2:
            raise ValueError(f"disparity values must have shape (H, W), got {vals.shape}")
        if vals.shape[0] < 1 or vals.shape[1] < 1:
            raise ValueError("disparity dimensions must be positive")
        if not np.isfinite(vals).all():
            raise ValueError("disparity map contains non-finite values")
        if not isinstance(self.direction, Direction):
            raise TypeError("direction must be a Direction enum member")
        object.__setattr__(self, "values", vals)
        vals.flags.writeable = False

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class Viewpoint:
    """Scalar position on the normalized stereo baseline.

    The left input view sits at 0.0 and the right input view at 1.0;
    values outside [0, 1] denote extrapolated views.
    """

    position: float

    def __post_init__(self):
        pos = float(self.position)
        if not np.isfinite(pos):
            raise ValueError("viewpoint position must be finite")
        object.__setattr__(self, "position", pos)


LEFT_VIEW = Viewpoint(0.0)
RIGHT_VIEW = Viewpoint(1.0)


@dataclass(frozen=True)
class MaskedImage:
    """An image plus a per-pixel validity mask (True = pixel holds real data)."""

    image: Image
    valid: np.ndarray

    def __post_init__(self):
        mask = np.asarray(self.valid, dtype=bool)
        if mask.shape != (self.image.height, self.image.width):
            raise ValueError(
                f"valid mask shape {mask.shape} does not match image "
                f"({self.image.height}, {self.image.width})"
            )
        object.__setattr__(self, "valid", mask)
        mask.flags.writeable = False


def load_image(path: PathLike) -> Image:
    """Load an 8- or 16-bit PNG into an Image.

    Parameters
    ----------
    path : str | Path
        Path to a PNG file (8-bit gray/RGB/RGBA or 16-bit grayscale).

    Returns
    -------
    Image
        Channels are the raw samples divided by the bit-depth maximum
        (255 or 65535), row-major with a top-left origin.
    """
    p = Path(path)
    with PILImage.open(p) as im:
        if im.format != "PNG":
            raise ValueError(f"unsupported image format {im.format!r}: {p}")
        if im.width < 1 or im.height < 1:
            raise ValueError(f"zero-dimension image: {p}")
        if im.mode in _SIXTEEN_BIT_MODES:
            raw = np.asarray(im, dtype=np.int64)
            if raw.ndim != 2:
                raise ValueError(f"16-bit PNG must be single-channel grayscale: {p}")
            px = np.repeat((raw / 65535.0)[:, :, None], 3, axis=2)
        else:
            rgb = im.convert("RGB")
            px = np.asarray(rgb, dtype=np.float64) / 255.0
    return Image(px)


def save_image(image: Image, path: PathLike) -> None:
    """Write an Image as an 8-bit RGB PNG.

    Each channel c is encoded as round(c * 255), rounding half up, clamped
    to [0, 255].
    """
    scaled = np.clip(image.pixels, 0.0, 1.0) * 255.0
    encoded = np.floor(scaled + 0.5).astype(np.uint8)
    PILImage.fromarray(encoded, mode="RGB").save(Path(path), format="PNG")


def load_disparity(
    path: PathLike,
    direction: Direction,
    scale: float | None = None,
    offset: float | None = None,
) -> DisparityMap:
    """Load a disparity map from a PFM file or a 16-bit grayscale PNG.

    Parameters
    ----------
    path : str | Path
        `.pfm` for a single-channel portable float map, `.png` for 16-bit
        grayscale with an explicit unit conversion.
    direction : Direction
        Which stereo view the shifts originate from.
    scale, offset : float, optional
        Required for PNG input: disparity = raw * scale + offset. Ignored
        for PFM (the PFM header's own scale sign selects endianness).

    Raises
    ------
    ValueError
        On unsupported formats, non-finite values, or missing PNG
        scale/offset.
    """
    p = Path(path)
    suffix = p.suffix.lower()
    if suffix == ".pfm":
        values = _read_pfm(p)
    elif suffix == ".png":
        if scale is None or offset is None:
            raise ValueError("PNG disparity requires explicit scale and offset")
        with PILImage.open(p) as im:
            if im.width < 1 or im.height < 1:
                raise ValueError(f"zero-dimension disparity image: {p}")
            raw = np.asarray(im, dtype=np.float64)
            if raw.ndim != 2:
                raise ValueError(f"PNG disparity must be single-channel grayscale: {p}")
        values = raw * float(scale) + float(offset)
    else:
        raise ValueError(f"unsupported disparity format {suffix!r}: {p}")
    return DisparityMap(values, direction)


def _read_token(f) -> bytes:
    """Read one whitespace-delimited header token from a binary stream."""
    tok = b""
    while True:
        c = f.read(1)
        if not c:
            raise ValueError("truncated PFM header")
        if c.isspace():
            if tok:
                return tok
            continue
        tok += c


def _read_pfm(path: Path) -> np.ndarray:
    """Read a single-channel PFM file.

    Honors the header's scale sign for endianness and the format's
    bottom-up row order. The scale magnitude is a unit hint and is not
    applied to the samples, matching common disparity readers.
    """
    with open(path, "rb") as f:
        magic = _read_token(f)
        if magic == b"PF":
            raise ValueError(f"color PFM not supported for disparity: {path}")
        if magic != b"Pf":
            raise ValueError(f"not a PFM file (bad magic {magic!r}): {path}")
        width = int(_read_token(f))
        height = int(_read_token(f))
        if width < 1 or height < 1:
            raise ValueError(f"zero-dimension PFM: {path}")
        scale = float(_read_token(f))
        if scale == 0.0:
            raise ValueError(f"PFM scale must be nonzero: {path}")
        dtype = "<f4" if scale < 0 else ">f4"
        payload = f.read(width * height * 4)
        if len(payload) != width * height * 4:
            raise ValueError(f"truncated PFM payload: {path}")
        data = np.frombuffer(payload, dtype=dtype).reshape(height, width)
    # PFM rows run bottom-up; flip to the top-left origin used everywhere here.
    return data[::-1].astype(np.float64)


def _write_pfm(values: np.ndarray, path: Path) -> None:
    """Write a single-channel little-endian PFM (test/tooling helper)."""
    arr = np.asarray(values, dtype=np.float32)
    h, w = arr.shape
    with open(path, "wb") as f:
        f.write(b"Pf\n")
        f.write(f"{w} {h}\n".encode("ascii"))
        f.write(b"-1.0\n")
        f.write(arr[::-1].astype("<f4").tobytes())
