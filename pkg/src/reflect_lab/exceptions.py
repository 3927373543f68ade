"""Exception hierarchy shared by the library and the command line tool."""


class ReflectLabError(Exception):
    """Base class for every error raised by reflect_lab."""


class ModelError(ReflectLabError, ValueError):
    """A gain or SNR model was evaluated outside its physical domain."""


class SaturationError(ModelError):
    """The spherical N-antenna model would collect more than the transmitted power.

    Attributes
    ----------
    n : int
        Requested number of antennas.
    n_max : int
        Largest antenna count for which ``n_max * beta <= 1``.
    """

    def __init__(self, n, n_max):
        self.n = n
        self.n_max = n_max
        super().__init__(
            f"N={n} exceeds the energy-conservation cap N_max={n_max}"
        )


class UnreachableTargetError(ReflectLabError):
    """The breakeven search hit its upper bound without reaching the target rate."""

    def __init__(self, target_rate, supremum_rate, n_cap):
        self.target_rate = target_rate
        self.supremum_rate = supremum_rate
        self.n_cap = n_cap
        super().__init__(
            f"target rate {target_rate:.6g} bpcu not reached; "
            f"best rate {supremum_rate:.6g} bpcu at N={n_cap}"
        )


class ConfigError(ReflectLabError, ValueError):
    """Invalid scenario configuration; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        self.message = message
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
