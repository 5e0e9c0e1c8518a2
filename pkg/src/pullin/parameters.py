"""Model constants of the device."""


class Parameters:
    """Dimensionless constants of the plate and the electrostatic field.

    Parameters
    ----------
    eps : float
        Aspect ratio of the device, ``eps > 0``.
    beta : float
        Bending rigidity, ``beta > 0``.
    tau : float
        Stretching, ``tau >= 0``.
    sigma : float
        Poisson-type torsion constant, ``-1 < sigma < 1``.
    lam : float
        Voltage parameter, proportional to the squared voltage difference,
        ``lam > 0``. ``lam = 0`` is accepted for the uncoupled plate.

    """

    def __init__(self, eps=1.0, beta=1.0, tau=0.0, sigma=0.3, lam=1.0):
        eps, beta, tau, sigma, lam = (
            float(eps),
            float(beta),
            float(tau),
            float(sigma),
            float(lam),
        )
        if not eps > 0:
            raise ValueError(f"eps must be positive, got {eps}")
        if not beta > 0:
            raise ValueError(f"beta must be positive, got {beta}")
        if not tau >= 0:
            raise ValueError(f"tau must be non-negative, got {tau}")
        if not -1 < sigma < 1:
            raise ValueError(f"sigma must be in range (-1, 1), got {sigma}")
        if not lam >= 0:
            raise ValueError(f"lambda must be non-negative, got {lam}")

        self._eps = eps
        self._beta = beta
        self._tau = tau
        self._sigma = sigma
        self._lam = lam

    @property
    def eps(self):
        """Aspect ratio."""
        return self._eps

    @property
    def beta(self):
        """Bending rigidity."""
        return self._beta

    @property
    def tau(self):
        """Stretching."""
        return self._tau

    @property
    def sigma(self):
        """Torsion constant."""
        return self._sigma

    @property
    def lam(self):
        """Voltage parameter."""
        return self._lam

    @property
    def coercivity(self):
        """Constant ``beta (1 + sigma) / 2`` bounding ``2 E_m`` from below by ``||Δu||²``."""
        return self._beta * (1 + self._sigma) / 2

    def replace(self, **changes):
        values = self.to_dict()
        values.update(changes)
        return Parameters(**values)

    def to_dict(self):
        return {
            "eps": self._eps,
            "beta": self._beta,
            "tau": self._tau,
            "sigma": self._sigma,
            "lam": self._lam,
        }

    def __eq__(self, other):
        if not isinstance(other, Parameters):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(tuple(self.to_dict().values()))

    def __repr__(self):
        return (
            f"Parameters(eps={self._eps}, beta={self._beta}, tau={self._tau}, "
            f"sigma={self._sigma}, lam={self._lam})"
        )
