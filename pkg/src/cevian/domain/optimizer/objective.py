"""The 1-D objective f(x) = (x/(1-x))^n (1-nx) of the extremal problem and its derivative."""
import math

from cevian.domain.errors import OutOfDomain, UnsupportedDimension


def _check_domain(x: float, n: int) -> None:
    if n < 2:
        raise UnsupportedDimension(f"n must be >= 2, got {n}")
    if not 0.0 < x < 1.0 / n:
        raise OutOfDomain(f"x = {x!r} is not in (0, 1/{n})")


def f(x: float, n: int) -> float:
    """Return (x/(1-x))^n (1-nx), the value of F at (x, ..., x, 1-nx)."""
    _check_domain(x, n)
    return (x / (1.0 - x)) ** n * (1.0 - n * x)


def log_f(x: float, n: int) -> float:
    """Natural log of f; stays finite when f underflows (n > ~140)."""
    _check_domain(x, n)
    return n * (math.log(x) - math.log1p(-x)) + math.log1p(-n * x)


def f_prime(x: float, n: int) -> float:
    """Return (x/(1-x))^n n(x^2 - (n+1)x + 1) / (x(1-x))."""
    _check_domain(x, n)
    quadratic = x * x - (n + 1) * x + 1.0
    return (x / (1.0 - x)) ** n * n * quadratic / (x * (1.0 - x))


def log_f_prime(x: float, n: int) -> float:
    """Derivative of log f; same sign as f' but free of the underflowing (x/(1-x))^n factor."""
    _check_domain(x, n)
    quadratic = x * x - (n + 1) * x + 1.0
    return n * quadratic / (x * (1.0 - x) * (1.0 - n * x))
