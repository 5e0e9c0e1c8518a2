from scipy.interpolate import RegularGridInterpolator

__all__ = ["RegularGridInterpolator", "multilinear_interp"]


def multilinear_interp(values, axes, points, *, extrapolate=False):
    """Interpolates nodal ``values`` defined on the tensor grid ``axes`` at ``points``
    using `scipy.interpolate.RegularGridInterpolator`.

    With ``extrapolate=True`` points slightly outside the box are evaluated
    by linear extrapolation instead of raising.

    """
    interpolator = RegularGridInterpolator(
        axes,
        values,
        method="linear",
        bounds_error=not extrapolate,
        fill_value=None,
    )
    return interpolator(points)
