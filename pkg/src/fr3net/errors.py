"""Exception types raised by the simulator."""


class Fr3NetError(Exception):
    """Base class for all simulator errors."""


class InvalidParameterError(Fr3NetError, ValueError):
    pass


class PlacementExhaustedError(Fr3NetError, RuntimeError):
    """Rejection sampling gave up before satisfying a geometric constraint."""


class CatalogMissError(Fr3NetError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class ModelDomainError(Fr3NetError, ValueError):
    pass


class ShapeError(Fr3NetError, ValueError):
    pass


class NoCoverageError(Fr3NetError, RuntimeError):
    pass


class ScenarioError(Fr3NetError, ValueError):
    pass
