"""Semi-automatic crack segmentation toolkit.

Pipeline: lift a grayscale image to an orientation score, track the crack as
a geodesic between two user endpoints in position-orientation space, then
recover the pixel mask by width expansion or edge tracking.
"""

from .images import CrackMask, GrayImage, PlanarTrack, load_image, normalize, rasterize_track

__all__ = [
    "CrackMask",
    "GrayImage",
    "PlanarTrack",
    "load_image",
    "normalize",
    "rasterize_track",
]

__version__ = "0.1.0"
