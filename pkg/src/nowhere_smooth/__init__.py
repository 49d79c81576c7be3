"""Star-shaped curves that bound epsilon-neighbourhoods yet are nowhere C^1.

Modules
-------
rational_enum     exact enumeration of the rationals in [0, 2pi]
radial_profile    jump-function profile S with certified error radii
cantor_profile    Cantor-function augmentation T = S + S_g, box counting
polar_curve       polar sampling, wedge census, CSV/SVG export
neighborhood_lab  raster erosion/dilation verification, projections, reach
cli               command-line front end
"""

from .errors import NowhereSmoothError

__version__ = "0.1.0"
__all__ = ["NowhereSmoothError", "__version__"]
