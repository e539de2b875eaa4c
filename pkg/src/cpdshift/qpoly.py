"""The integral kernel polynomials behind conditionally positive definite sequences.

``q_poly(n, x)`` evaluates the degree-(n-2) polynomial whose second difference
in n is x**n; it is the kernel that turns a measure into a moment-like
sequence.
"""

from __future__ import annotations

import math

# Below this distance from the removable singularity at x = 1 the closed form
# loses ~n^2 ulp to cancellation, so the summation form takes over.
CLOSED_FORM_SWITCH = 1e-4


def q_poly_sum(n: int, x: float) -> float:
    """Summation form: sum_{j=0}^{n-2} (n-1-j) x^j, evaluated by Horner."""
    if n < 2:
        return 0.0
    acc = 0.0
    for j in range(n - 2, -1, -1):
        acc = acc * x + (n - 1 - j)
    return acc


def q_poly_closed(n: int, x: float) -> float:
    """Closed form (x^n - 1 - n(x-1)) / (x-1)^2; undefined at x = 1.

    Saturates to +inf when x**n leaves the double range (x > 1).
    """
    if n < 2:
        return 0.0
    d = x - 1.0
    try:
        p = x**n
    except OverflowError:
        return math.inf
    return (p - 1.0 - n * d) / (d * d)


def q_poly(n: int, x: float) -> float:
    """Kernel polynomial value; 0 for n in {0, 1}.

    Uses the closed form away from x = 1 and the summation form inside the
    cancellation window around it.
    """
    if n < 2:
        return 0.0
    if abs(x - 1.0) < CLOSED_FORM_SWITCH:
        return q_poly_sum(n, x)
    return q_poly_closed(n, x)


def q_poly_log(n: int, x: float) -> float:
    """log of q_poly(n, x) for x > 1, stable for n far beyond double overflow."""
    if x <= 1.0:
        raise ValueError("log evaluation requires x > 1")
    if n < 2:
        return -math.inf
    # q = x^n (1 - (1 + n(x-1))/x^n) / (x-1)^2, and the inner ratio is < 1.
    ratio = math.exp(math.log1p(n * (x - 1.0)) - n * math.log(x))
    return n * math.log(x) + math.log1p(-ratio) - 2.0 * math.log(x - 1.0)


def q_recurrence_check(n: int, x: float, tol: float = 1e-10) -> bool:
    """Check the step identity q_poly(n+1, x) == x*q_poly(n, x) + n within tol."""
    lhs = q_poly(n + 1, x)
    rhs = x * q_poly(n, x) + n
    return abs(lhs - rhs) <= tol * (1.0 + abs(lhs))
