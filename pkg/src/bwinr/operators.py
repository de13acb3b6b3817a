"""Forward operators binding coordinate networks to imaging tasks.

All tasks share one coordinate convention: pixel centers of an h x w image
map affinely onto [-1, 1]^2 (x along columns, y along rows, both increasing
with index). The operators act on the discretized image the network renders
over that grid and are all linear, so their exact adjoints double as the
backprop rules.

The Radon transform is parallel-beam: for each angle theta in [0, pi) and
each detector offset s in [-sqrt(2), sqrt(2)], the line integral of the
bilinearly interpolated image along the ray through s*(cos t, sin t) with
direction (-sin t, cos t), discretized by a uniform-step quadrature of one
pixel spacing. For desk-scale geometries the sampling pattern is assembled
once into a sparse matrix (making the adjoint exact by construction);
larger geometries evaluate the identical entries angle by angle.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import sparse

from .errors import ConfigurationError, InvalidInputError, ShapeError


@dataclass(frozen=True)
class ImageGrid:
    """Grayscale image with intensities nominally in [0, 1]."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=float)
        if px.ndim != 2:
            raise ShapeError(f"image must be 2-D, got ndim={px.ndim}")
        if not np.all(np.isfinite(px)):
            raise InvalidInputError("image contains non-finite pixels")
        object.__setattr__(self, "pixels", px)

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]


@dataclass(frozen=True)
class Sinogram:
    """Line integrals indexed by (angle, detector offset)."""

    angles: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != angles.size:
            raise ShapeError(
                f"sinogram shape {values.shape} inconsistent with "
                f"{angles.size} angles"
            )
        if angles.size and (
            np.any(np.diff(angles) <= 0)
            or angles[0] < 0
            or angles[-1] >= np.pi
        ):
            raise InvalidInputError(
                "angles must be strictly increasing within [0, pi)"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("sinogram contains non-finite values")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "values", values)

    @property
    def detectors(self):
        return self.values.shape[1]


def grid_coords(h, w):
    """Pixel-center coordinates in [-1, 1]^2, row-major, as an (h*w, 2) batch."""
    if h < 1 or w < 1:
        raise ShapeError(f"grid dims must be >= 1, got {h}x{w}")
    xs = -1.0 + (2.0 * np.arange(w) + 1.0) / w
    ys = -1.0 + (2.0 * np.arange(h) + 1.0) / h
    xx, yy = np.meshgrid(xs, ys)
    return np.column_stack([xx.ravel(), yy.ravel()])


def downsample(img, f):
    """f x f block averaging."""
    px = img.pixels
    h, w = px.shape
    if h % f or w % f:
        raise ShapeError(f"{h}x{w} image not divisible by factor {f}")
    blocks = px.reshape(h // f, f, w // f, f)
    return ImageGrid(blocks.mean(axis=(1, 3)))


def downsample_vjp(cotangent, f):
    """Adjoint of ``downsample``: spread each block mean's weight back out."""
    cot = np.asarray(cotangent, dtype=float)
    return np.kron(cot, np.full((f, f), 1.0 / (f * f)))


class RadonTransform:
    """Parallel-beam Radon operator for a fixed geometry.

    ``apply`` integrates the bilinearly interpolated image along every
    (angle, offset) ray; ``adjoint`` is the exact transpose of that linear
    map. Geometries small enough to store are compiled to one CSR matrix.
    """

    # Cap on stored sparse entries (~1 GB working set); larger geometries
    # are evaluated angle by angle from the same entry generator.
    MAX_STORED_NNZ = 60_000_000

    def __init__(self, h, w, angles, detectors):
        if detectors < 1:
            raise ConfigurationError(f"detectors must be >= 1, got {detectors}")
        angles = np.asarray(angles, dtype=float)
        self.h, self.w = int(h), int(w)
        self.angles = angles
        self.detectors = int(detectors)
        half = np.sqrt(2.0)
        self.offsets = -half + (2.0 * np.arange(detectors) + 1.0) * half / detectors
        step = 2.0 / max(self.h, self.w)  # one pixel spacing
        n_steps = int(np.ceil(2.0 * half / step))
        self.dt = 2.0 * half / n_steps
        self.t = -half + (np.arange(n_steps) + 0.5) * self.dt
        nnz_estimate = angles.size * detectors * n_steps * 4
        self.matrix = None
        if nnz_estimate <= self.MAX_STORED_NNZ:
            blocks = [self._angle_matrix(i) for i in range(angles.size)]
            self.matrix = sparse.vstack(blocks, format="csr")

    def _angle_entries(self, idx):
        """Sparse entries of one angle's block: (detector row, pixel col, weight)."""
        h, w = self.h, self.w
        theta = self.angles[idx]
        cos, sin = np.cos(theta), np.sin(theta)
        s = self.offsets[:, None]
        t = self.t[None, :]
        # Ray point: s * normal + t * direction, normal = (cos, sin),
        # direction = (-sin, cos).
        x = s * cos - t * sin
        y = s * sin + t * cos
        inside = (np.abs(x) <= 1.0) & (np.abs(y) <= 1.0)
        rows = np.broadcast_to(
            np.arange(self.detectors)[:, None], x.shape
        )[inside]
        x = x[inside]
        y = y[inside]
        # Fractional pixel index; image values extend constantly from the
        # outermost pixel centers to the square boundary.
        u = (x + 1.0) * (w / 2.0) - 0.5
        v = (y + 1.0) * (h / 2.0) - 0.5
        j0 = np.clip(np.floor(u), 0, max(w - 2, 0)).astype(np.int64)
        i0 = np.clip(np.floor(v), 0, max(h - 2, 0)).astype(np.int64)
        fu = np.clip(u - j0, 0.0, 1.0) if w > 1 else np.zeros_like(u)
        fv = np.clip(v - i0, 0.0, 1.0) if h > 1 else np.zeros_like(v)
        j1 = np.minimum(j0 + 1, w - 1)
        i1 = np.minimum(i0 + 1, h - 1)
        cols = np.concatenate([
            i0 * w + j0, i0 * w + j1, i1 * w + j0, i1 * w + j1,
        ])
        weights = self.dt * np.concatenate([
            (1 - fv) * (1 - fu), (1 - fv) * fu, fv * (1 - fu), fv * fu,
        ])
        return np.tile(rows, 4), cols, weights

    def _angle_matrix(self, idx):
        rows, cols, weights = self._angle_entries(idx)
        return sparse.coo_matrix(
            (weights, (rows, cols)),
            shape=(self.detectors, self.h * self.w),
        ).tocsr()

    def apply(self, pixels):
        flat = np.asarray(pixels, dtype=float).ravel()
        if flat.size != self.h * self.w:
            raise ShapeError(
                f"image size {flat.size} != {self.h}x{self.w} geometry"
            )
        if self.matrix is not None:
            out = self.matrix @ flat
            return out.reshape(self.angles.size, self.detectors)
        out = np.empty((self.angles.size, self.detectors))
        for idx in range(self.angles.size):
            rows, cols, weights = self._angle_entries(idx)
            out[idx] = np.bincount(
                rows, weights=weights * flat[cols], minlength=self.detectors
            )
        return out

    def adjoint(self, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (self.angles.size, self.detectors):
            raise ShapeError(
                f"sinogram shape {values.shape} != "
                f"({self.angles.size}, {self.detectors})"
            )
        if self.matrix is not None:
            out = self.matrix.T @ values.ravel()
            return out.reshape(self.h, self.w)
        out = np.zeros(self.h * self.w)
        for idx in range(self.angles.size):
            rows, cols, weights = self._angle_entries(idx)
            np.add.at(out, cols, weights * values[idx, rows])
        return out.reshape(self.h, self.w)


@lru_cache(maxsize=8)
def _cached_radon(h, w, angles_key, detectors):
    return RadonTransform(h, w, np.array(angles_key), detectors)


def radon_operator(h, w, angles, detectors):
    """Shared (cached) RadonTransform for a geometry."""
    angles = np.asarray(angles, dtype=float)
    return _cached_radon(int(h), int(w), tuple(angles.tolist()), int(detectors))


def radon(img, angles, detectors):
    """Parallel-beam sinogram of ``img``."""
    op = radon_operator(img.height, img.width, angles, detectors)
    return Sinogram(angles=op.angles, values=op.apply(img.pixels))


def radon_vjp(cotangent, angles, detectors, h, w):
    """Exact adjoint of ``radon`` applied to a sinogram-shaped cotangent."""
    op = radon_operator(h, w, angles, detectors)
    return op.adjoint(cotangent)


class _IdentityOp:
    def __init__(self, shape):
        self.out_shape = shape

    def apply(self, rendered):
        return rendered

    def vjp(self, cotangent):
        return cotangent


class _DownsampleOp:
    def __init__(self, h, w, f):
        self.f = f
        self.out_shape = (h // f, w // f)

    def apply(self, rendered):
        return downsample(ImageGrid(rendered), self.f).pixels

    def vjp(self, cotangent):
        return downsample_vjp(cotangent, self.f)


class _RadonOp:
    def __init__(self, h, w, angles, detectors):
        self.op = radon_operator(h, w, angles, detectors)
        self.out_shape = (len(angles), detectors)

    def apply(self, rendered):
        return self.op.apply(rendered)

    def vjp(self, cotangent):
        return self.op.adjoint(cotangent)


@dataclass
class ForwardTask:
    """Everything the training loop needs to fit one signal.

    ``coords`` feed the network; its outputs are reshaped to
    ``render_shape`` and pushed through ``operator`` before the MSE
    against ``target``. ``reference`` (when present) is the ground-truth
    image used for PSNR logging.
    """

    name: str
    coords: np.ndarray
    target: np.ndarray
    operator: object
    render_shape: tuple
    reference: ImageGrid | None = None
    meta: dict = field(default_factory=dict)


def ct_angles(count=100):
    """``count`` equally spaced projection angles in [0, pi)."""
    return np.arange(count) * np.pi / count


def default_detectors(h, w):
    """Detector count: the image diagonal in pixels, rounded up."""
    return int(np.ceil(np.hypot(h, w)))


def make_task(name, image, factor=4, n_angles=100, detectors=None):
    """Bind an image to one of the three benchmark tasks.

    sigrep   -- fit the image directly on its own grid;
    superres -- fit block-downsampled measurements (factor ``f``);
    ct       -- fit ``n_angles`` equally spaced parallel-beam projections.
    """
    h, w = image.height, image.width
    coords = grid_coords(h, w)
    if name == "sigrep":
        return ForwardTask(
            name=name,
            coords=coords,
            target=image.pixels.copy(),
            operator=_IdentityOp((h, w)),
            render_shape=(h, w),
            reference=image,
        )
    if name == "superres":
        low = downsample(image, factor)
        return ForwardTask(
            name=name,
            coords=coords,
            target=low.pixels,
            operator=_DownsampleOp(h, w, factor),
            render_shape=(h, w),
            reference=image,
            meta={"factor": factor, "low_res": low},
        )
    if name == "ct":
        angles = ct_angles(n_angles)
        if detectors is None:
            detectors = default_detectors(h, w)
        sino = radon(image, angles, detectors)
        return ForwardTask(
            name=name,
            coords=coords,
            target=sino.values,
            operator=_RadonOp(h, w, angles, detectors),
            render_shape=(h, w),
            reference=image,
            meta={"angles": angles, "detectors": detectors, "sinogram": sino},
        )
    raise ConfigurationError(f"unknown task {name!r}")


def make_signal_task(x, y, name="signal1d"):
    """1-D regression task (used by the univariate conditioning benchmark)."""
    x = np.asarray(x, dtype=float).reshape(-1, 1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.shape[0] != y.shape[0]:
        raise ShapeError("x and y lengths differ")
    return ForwardTask(
        name=name,
        coords=x,
        target=y,
        operator=_IdentityOp((y.size,)),
        render_shape=(y.size,),
        reference=None,
    )
