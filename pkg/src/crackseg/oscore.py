"""Multi-orientation lift of a 2D image and its approximate inverse.

The lift correlates the image with a stack of complex oriented wavelets whose
Fourier supports tile the frequency plane like cake slices: an angular
B-spline partition of unity times a radial profile that vanishes near DC.
Summing the real parts over orientations (times the angular step) recovers
the band-pass content of the image; a stored low-pass of the input carries
the residual below the cutoff.

Orientation convention: slice k responds to line structures running along
n(theta_k) = (cos theta_k, sin theta_k) with theta_k = 2*pi*k / n_theta,
measured from the +x axis toward +y (row) axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft
import scipy.ndimage
from scipy.interpolate import BSpline

from .images import GrayImage


class PartitionError(ValueError):
    """Wavelet stack fails the Fourier partition property beyond tolerance."""


def _bspline(order: int, x: np.ndarray) -> np.ndarray:
    """Centered cardinal B-spline of the given degree."""
    if order == 0:
        return 1.0 * ((-0.5 <= x) & (x < 0.5))
    if order == 1:
        return np.clip(1.0 - np.abs(x), 0.0, None)
    knots = np.arange(order + 2, dtype=np.float64) - (order + 1) / 2.0
    b = BSpline.basis_element(knots, extrapolate=False)(x)
    return np.nan_to_num(b, nan=0.0)


def _radial_ramp(rho: np.ndarray, dc_cutoff: float, width: float) -> np.ndarray:
    """Raised-cosine step: 0 below dc_cutoff, 1 above dc_cutoff + width."""
    t = np.clip((rho - dc_cutoff) / width, 0.0, 1.0)
    return 0.5 - 0.5 * np.cos(np.pi * t)


@dataclass(frozen=True)
class CakeWaveletStack:
    n_theta: int
    kernel_size: int
    spline_order: int
    spatial_sigma: float
    dc_cutoff: float
    kernels: np.ndarray  # (n_theta, kernel_size, kernel_size) complex
    transition: float
    flatness_deviation: float
    retained_annulus: tuple[float, float]

    @property
    def theta_spacing(self) -> float:
        return 2.0 * np.pi / self.n_theta

    @property
    def thetas(self) -> np.ndarray:
        return np.arange(self.n_theta) * self.theta_spacing


def build_cake_wavelets(
    n_theta: int = 32,
    kernel_size: int = 15,
    spline_order: int = 3,
    spatial_sigma: float | None = None,
    dc_cutoff: float = 0.01,
    flatness_tol: float = 0.01,
) -> CakeWaveletStack:
    """Construct the oriented wavelet stack in the Fourier domain.

    Each slice is B_spline((phi - theta_k - pi/2) / dtheta) * ramp(rho) / dtheta
    on the kernel's centered DFT grid; the inverse transform gives a complex
    kernel whose real part is line-sensitive (even) and imaginary part
    edge-sensitive (odd). A Gaussian window tapers the spatial tails and the
    mean is removed so constants produce exactly zero response.

    Raises PartitionError when the summed Fourier magnitudes deviate from
    flat by more than flatness_tol on the retained annulus.
    """
    if n_theta < 8 or n_theta % 2 != 0:
        raise ValueError("n_theta must be even and at least 8")
    if kernel_size < 9 or kernel_size % 2 == 0:
        raise ValueError("kernel_size must be odd and at least 9")
    if spatial_sigma is None:
        spatial_sigma = (kernel_size - 1) / 4.0

    ks = kernel_size
    dtheta = 2.0 * np.pi / n_theta
    transition = 1.0 / ks

    freqs = scipy.fft.fftshift(scipy.fft.fftfreq(ks))
    fy, fx = np.meshgrid(freqs, freqs, indexing="ij")
    rho = np.hypot(fx, fy)
    phi = np.arctan2(fy, fx)
    ramp = _radial_ramp(rho, dc_cutoff, transition)

    wy, wx = np.meshgrid(np.arange(ks) - ks // 2, np.arange(ks) - ks // 2, indexing="ij")
    window = np.exp(-(wx**2 + wy**2) / (2.0 * spatial_sigma**2))

    kernels = np.empty((n_theta, ks, ks), dtype=np.complex128)
    for k in range(n_theta):
        ang = np.mod(phi - (k * dtheta + np.pi / 2.0) + np.pi, 2.0 * np.pi) - np.pi
        profile = _bspline(spline_order, ang / dtheta) * ramp / dtheta
        psi = scipy.fft.fftshift(scipy.fft.ifft2(scipy.fft.ifftshift(profile)))
        psi = psi * window
        psi -= psi.mean()
        kernels[k] = psi

    # Fourier smearing caused by the spatial window; the partition is only
    # guaranteed flat beyond this margin from the ramp shoulder.
    sigma_f = 1.0 / (2.0 * np.pi * spatial_sigma)
    annulus_lo = dc_cutoff + transition + 3.0 * sigma_f
    annulus = (annulus_lo, 0.5)

    mags = np.zeros((ks, ks))
    for k in range(n_theta):
        mags += np.abs(scipy.fft.fftshift(scipy.fft.fft2(scipy.fft.ifftshift(kernels[k]))))
    sel = (rho > annulus_lo) & (rho <= 0.5)
    if not np.any(sel):
        raise PartitionError(
            f"retained annulus ({annulus_lo:.3f}, 0.5] holds no frequency samples "
            f"at kernel size {ks}; lower dc_cutoff or enlarge the kernel"
        )
    vals = mags[sel]
    deviation = float(np.max(np.abs(vals - vals.mean())) / vals.mean())
    if deviation > flatness_tol:
        raise PartitionError(
            f"orientation partition deviates {deviation:.2%} from flat on the "
            f"annulus ({annulus_lo:.3f}, 0.5]; tolerance {flatness_tol:.2%}"
        )

    return CakeWaveletStack(
        n_theta=n_theta,
        kernel_size=ks,
        spline_order=spline_order,
        spatial_sigma=float(spatial_sigma),
        dc_cutoff=float(dc_cutoff),
        kernels=kernels,
        transition=transition,
        flatness_deviation=deviation,
        retained_annulus=annulus,
    )


@dataclass
class OrientationScore:
    """Complex response volume over (y, x, theta_k) plus the low-pass residual."""

    data: np.ndarray  # (height, width, n_theta) complex
    lowpass: np.ndarray  # (height, width) float
    theta_spacing: float

    def __post_init__(self):
        if self.data.ndim != 3:
            raise ValueError("orientation score data must be 3D")

    @property
    def n_theta(self) -> int:
        return self.data.shape[2]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def thetas(self) -> np.ndarray:
        return np.arange(self.n_theta) * self.theta_spacing

    def __mul__(self, alpha: float) -> "OrientationScore":
        return OrientationScore(self.data * alpha, self.lowpass * alpha, self.theta_spacing)

    __rmul__ = __mul__


# Above this, per-orientation correlation goes through the FFT.
_FFT_THRESHOLD = 4096


def lift(img: GrayImage, stack: CakeWaveletStack) -> OrientationScore:
    """Correlate the image with every rotated wavelet (reflection padding)."""
    ks = stack.kernel_size
    if ks > min(img.height, img.width):
        raise ValueError(f"kernel size {ks} exceeds image {img.width}x{img.height}")
    if ks * ks * stack.n_theta > _FFT_THRESHOLD:
        data = _lift_fft(img.data, stack.kernels)
    else:
        data = _lift_spatial(img.data, stack.kernels)
    lowpass = _lowpass_residual(img.data, stack)
    return OrientationScore(data, lowpass, stack.theta_spacing)


def _lift_spatial(f: np.ndarray, kernels: np.ndarray) -> np.ndarray:
    n_theta = kernels.shape[0]
    out = np.empty(f.shape + (n_theta,), dtype=np.complex128)
    for k in range(n_theta):
        w = np.conj(kernels[k])
        re = scipy.ndimage.correlate(f, w.real, mode="reflect")
        im = scipy.ndimage.correlate(f, w.imag, mode="reflect")
        out[:, :, k] = re + 1j * im
    return out


def _padded_spectra(f: np.ndarray, ks: int):
    """Reflect-pad the image and return its FFT plus grid metadata.

    'symmetric' padding repeats the edge sample, matching ndimage's
    'reflect' so the spatial and FFT paths agree to machine precision.
    """
    c = ks // 2
    fpad = np.pad(f, c, mode="symmetric")
    hp, wp = fpad.shape
    fh = scipy.fft.next_fast_len(hp + ks)
    fw = scipy.fft.next_fast_len(wp + ks)
    F = scipy.fft.fft2(fpad, s=(fh, fw))
    return F, (hp, wp), (fh, fw), c


def _kernel_transfer(kernel: np.ndarray, fast_shape: tuple[int, int]) -> np.ndarray:
    ks = kernel.shape[0]
    c = ks // 2
    full = np.zeros(fast_shape, dtype=np.complex128)
    full[:ks, :ks] = kernel
    full = np.roll(full, (-c, -c), axis=(0, 1))
    return scipy.fft.fft2(full)


def _lift_fft(f: np.ndarray, kernels: np.ndarray) -> np.ndarray:
    n_theta, ks, _ = kernels.shape
    F, (hp, wp), fast, c = _padded_spectra(f, ks)
    out = np.empty(f.shape + (n_theta,), dtype=np.complex128)
    h, w = f.shape
    for k in range(n_theta):
        K = _kernel_transfer(kernels[k], fast)
        u = scipy.fft.ifft2(F * np.conj(K))
        out[:, :, k] = u[c : c + h, c : c + w]
    return out


def _wavelet_sum_radial(stack: CakeWaveletStack, fast_shape: tuple[int, int]):
    """Azimuthally averaged transfer of the summed wavelet stack."""
    total = np.zeros(fast_shape)
    for k in range(stack.n_theta):
        total += np.real(_kernel_transfer(stack.kernels[k], fast_shape))
    total *= stack.theta_spacing

    gy = scipy.fft.fftfreq(fast_shape[0])
    gx = scipy.fft.fftfreq(fast_shape[1])
    rho = np.hypot(*np.meshgrid(gy, gx, indexing="ij"))
    nbins = 256
    edges = np.linspace(0.0, rho.max() + 1e-9, nbins + 1)
    idx = np.digitize(rho.ravel(), edges) - 1
    sums = np.bincount(idx, weights=total.ravel(), minlength=nbins)
    counts = np.bincount(idx, minlength=nbins)
    centers = 0.5 * (edges[:-1] + edges[1:])
    good = counts > 0
    profile = np.interp(centers, centers[good], sums[good] / counts[good])
    return rho, centers, profile


def _lowpass_residual(f: np.ndarray, stack: CakeWaveletStack) -> np.ndarray:
    """Low-pass of the input matching what the wavelet stack misses near DC.

    Padded well beyond the kernel half-width: the complement filter's
    impulse response reaches a few wavelengths of the DC transition.
    """
    h, w = f.shape
    knee = stack.dc_cutoff + stack.transition
    pad = min(int(np.ceil(3.0 / knee)), min(h, w))
    fpad = np.pad(f, pad, mode="symmetric")
    fh = scipy.fft.next_fast_len(fpad.shape[0])
    fw = scipy.fft.next_fast_len(fpad.shape[1])
    F = scipy.fft.fft2(fpad, s=(fh, fw))
    rho, centers, profile = _wavelet_sum_radial(stack, (fh, fw))
    transfer = np.clip(1.0 - np.interp(rho, centers, profile), 0.0, 1.0)
    low = np.real(scipy.fft.ifft2(F * transfer))
    return low[pad : pad + h, pad : pad + w]


def reconstruct(score: OrientationScore) -> np.ndarray:
    """Sum real parts over orientations plus the stored low-pass residual.

    Returns the raw scalar field (not clipped to [0, 1]): linearity in the
    score is part of the contract and clipping would break it.
    """
    return np.sum(score.data.real, axis=2) * score.theta_spacing + score.lowpass


def export_contact_sheet(score: OrientationScore, path, columns: int = 8) -> None:
    """Tile per-orientation real parts into one normalized PNG (debug aid)."""
    from PIL import Image

    n = score.n_theta
    rows = (n + columns - 1) // columns
    h, w = score.height, score.width
    sheet = np.zeros((rows * h, columns * w))
    for k in range(n):
        r, cidx = divmod(k, columns)
        sheet[r * h : (r + 1) * h, cidx * w : (cidx + 1) * w] = score.data[:, :, k].real
    lo, hi = sheet.min(), sheet.max()
    scale = (sheet - lo) / (hi - lo) if hi > lo else np.zeros_like(sheet)
    Image.fromarray(np.round(scale * 255).astype(np.uint8), mode="L").save(path, format="PNG")
