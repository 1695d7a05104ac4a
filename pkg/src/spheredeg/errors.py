"""Exception hierarchy.

``exit_code`` drives the CLI triage: 1 for rejected input, 2 for a failed
mathematical cross-check.
"""


class SphereDegError(Exception):
    exit_code = 1

    def __init__(self, message, **witness):
        super().__init__(message)
        self.witness = witness

    def to_dict(self):
        return {
            "error": type(self).__name__,
            "message": str(self),
            "witness": _jsonable(self.witness),
        }


class InputError(SphereDegError, ValueError):
    """Malformed or mathematically inadmissible input."""


class DimensionError(InputError):
    pass


class NonInvariantError(InputError):
    """A field's last component does not vanish on the coordinate hyperplane."""


class VanishingFieldError(InputError):
    """The field is (numerically) zero at a point where it must not be."""


class NotAZeroError(InputError):
    pass


class ScenarioError(InputError):
    """A Morse scenario violates one of its admissibility conditions."""


class NumericalError(SphereDegError):
    """A numerical procedure did not converge within its budget."""


class CrossCheckError(SphereDegError):
    """Two independent computations disagree, or a verified identity failed."""

    exit_code = 2


def _jsonable(obj):
    import numpy as np

    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)
