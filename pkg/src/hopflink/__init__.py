"""Berry curvature, topological invariants and SO(4) harmonics on S2 and S3.

The package evaluates Berry connections and curvatures of ``h . sigma``
Hamiltonians, their Pontrjagin, Chern and Chern-Simons invariants, builds the
SO(4) spherical harmonics exactly, certifies the magnetic spectrum on S3, and
traces the linked flux loops of the Hopf map.
"""

__version__ = "0.1.0"

from .errors import HopflinkError  # noqa: E402
from .hmap import ConstantNorth, HopfS3, PontrjaginS2, parse_map_spec  # noqa: E402
from .manifold import AngleCoordS2, AngleCoordS3, build_grid, build_sphere_grid  # noqa: E402

__all__ = [
    "__version__",
    "HopflinkError",
    "ConstantNorth",
    "HopfS3",
    "PontrjaginS2",
    "parse_map_spec",
    "AngleCoordS2",
    "AngleCoordS3",
    "build_grid",
    "build_sphere_grid",
]
