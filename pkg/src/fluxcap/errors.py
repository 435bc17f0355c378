"""Exception types raised by the fluxcap library."""


class FluxcapError(Exception):
    """Base class for all fluxcap errors."""


class InvalidParameterError(FluxcapError, ValueError):
    """A physical parameter is non-finite or outside its admissible range."""


class InvalidParityError(FluxcapError, ValueError):
    """A parity index was not +1 or -1."""


class InvalidTemperatureError(FluxcapError, ValueError):
    """Thermal energy k_B*T must be strictly positive."""


class InvalidSignalError(FluxcapError, ValueError):
    """A sampled signal violates its sampling contract (non-uniform, too short, odd length)."""


class InvalidLinewidthError(FluxcapError, ValueError):
    """A linewidth must be strictly positive to define a coherence time."""


class FitDegenerateError(FluxcapError, RuntimeError):
    """The spectrum admits no meaningful peak fit; the message names the offending condition."""


class ConfigError(FluxcapError, ValueError):
    """A sweep configuration file or flag set failed validation."""
