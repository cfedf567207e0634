# utils/errors.py
from __future__ import annotations

from typing import Iterable, Optional

# Exit codes shared by every subcommand.
EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_NUMERICAL = 3


class GraphRangeError(Exception):
    exit_code: int = EXIT_VALIDATION


# ---------- validation (exit 1) ----------

class ValidationError(GraphRangeError, ValueError):
    exit_code = EXIT_VALIDATION


class DimensionError(ValidationError):
    def __init__(self, what: str, expected: int, got: int):
        super().__init__(f"{what}: expected length {expected}, got {got}")
        self.expected = expected
        self.got = got


class IsolatedNodeError(ValidationError):
    def __init__(self, node: int):
        super().__init__(f"node {node} has no incident edge (zero degree)")
        self.node = node


class DisconnectedGraphError(ValidationError):
    def __init__(self, center: int, unreachable: Iterable[int]):
        nodes = sorted(int(v) for v in unreachable)
        head = ", ".join(str(v) for v in nodes[:8])
        more = "" if len(nodes) <= 8 else f", ... ({len(nodes)} total)"
        super().__init__(f"graph is disconnected: from node {center} cannot reach {head}{more}")
        self.center = center
        self.unreachable = nodes


class TwoNodeRangeError(ValidationError):
    def __init__(self, n: int):
        super().__init__(
            f"region computations need n >= 3 nodes (got n={n}); for n = 2 the range "
            "is an ellipse and is not a polygon-sandwich target"
        )
        self.n = n


class NoUncertaintyError(ValidationError):
    """sigma1 >= 1: the gamma bound is vacuous."""

    def __init__(self, sigma1: float):
        super().__init__(f"sigma1 = {sigma1:.12g} >= 1: no uncertainty, gamma bound is vacuous")
        self.sigma1 = sigma1


class FilterError(ValidationError):
    pass


class SpecError(ValidationError):
    """Malformed --graph / --pair / --angles / config value."""


class CheckFailed(ValidationError):
    def __init__(self, failed: Iterable[str]):
        names = list(failed)
        super().__init__("verification failed: " + ", ".join(names))
        self.failed = names


# ---------- i/o (exit 2) ----------

class InputError(GraphRangeError):
    exit_code = EXIT_IO

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message if path is None else f"{path}: {message}")
        self.path = path


# ---------- numerical (exit 3) ----------

class NumericalError(GraphRangeError):
    exit_code = EXIT_NUMERICAL


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, GraphRangeError):
        return exc.exit_code
    if isinstance(exc, OSError):
        return EXIT_IO
    if isinstance(exc, ArithmeticError):
        return EXIT_NUMERICAL
    return EXIT_VALIDATION
