from scipy.fft import dstn

__all__ = ["dstn", "sine_coefficients", "sine_synthesis"]


def sine_coefficients(values):
    """Unit-amplitude double sine coefficients of interior nodal samples.

    The samples ``values[i - 1, j - 1]`` at ``(i h, j h)`` with ``h = 1 / (n + 1)``
    are expanded as ``sum c[k - 1, l - 1] sin(k pi x1) sin(l pi x2)``.

    Notes
    -----
    Type-I DST applied twice returns ``(2 (n + 1))**2`` times the input,
    hence the normalizations here and in :func:`sine_synthesis`.

    """
    n1, n2 = values.shape
    return dstn(values, type=1) / ((n1 + 1) * (n2 + 1))


def sine_synthesis(coefficients):
    """Interior nodal samples of a double sine series, inverse of :func:`sine_coefficients`."""
    return dstn(coefficients, type=1) / 4.0
