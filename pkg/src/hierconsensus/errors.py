"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid parameters, coordinates, dimensions or flags."""


class NumericalError(ArithmeticError):
    """A computation broke down (degenerate spectrum, unfittable data, ...)."""
