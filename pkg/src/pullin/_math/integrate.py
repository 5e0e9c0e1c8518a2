from scipy.integrate import trapezoid

__all__ = ["trapezoid", "trapezoid_nd"]


def trapezoid_nd(values, spacings):
    """Composite trapezoidal rule over every axis of a nodal array.

    Parameters
    ----------
    values : numpy.ndarray
        Samples including the nodes on the boundary of the box.
    spacings : sequence of float
        Uniform node spacing along each axis.

    """
    result = values
    for dx in spacings:
        result = trapezoid(result, dx=dx, axis=0)
    return float(result)
