"""Extended-real arithmetic on plain floats.

Values are Python floats where ``math.inf`` and ``-math.inf`` stand for the
two infinities. The helpers here are the only places that combine infinite
values, so an indeterminate ``+inf + (-inf)`` is always reported instead of
silently turning into NaN.
"""

import math

from utils.errors import ExtendedArithmeticError

ExtReal = float

POS_INF = math.inf
NEG_INF = -math.inf


def ext_sum(values):
    """
    Sum extended reals.

    +inf is sticky, finite parts are accumulated with math.fsum.

    Args:
        values (iterable of float): Terms, each finite, +inf or -inf

    Returns:
        float: The sum

    Raises:
        ExtendedArithmeticError: If both +inf and -inf occur, or a term is NaN
    """
    finite = []
    has_pos = False
    has_neg = False
    for value in values:
        value = float(value)
        if math.isnan(value):
            raise ExtendedArithmeticError("NaN is not an extended real")
        if value == POS_INF:
            has_pos = True
        elif value == NEG_INF:
            has_neg = True
        else:
            finite.append(value)

    if has_pos and has_neg:
        raise ExtendedArithmeticError("+inf + (-inf) is undefined")
    if has_pos:
        return POS_INF
    if has_neg:
        return NEG_INF
    return math.fsum(finite)


def ext_add(*terms):
    return ext_sum(terms)


def mass_times_slope(mass, slope):
    """
    Product of a finite mass with a possibly infinite slope.

    A zero mass gives zero regardless of the multiplier.

    Args:
        mass (float): Finite signed mass
        slope (float): Asymptotic slope, possibly infinite

    Returns:
        float: mass * slope with 0 * (+-inf) = 0
    """
    if mass == 0.0:
        return 0.0
    return float(mass) * float(slope)


def ext_le(a, b, atol=0.0, rtol=0.0):
    """
    Check a <= b in the extended order with an absolute/relative slack.

    Args:
        a (float): Left-hand side
        b (float): Right-hand side
        atol (float): Absolute tolerance applied when both sides are finite
        rtol (float): Relative tolerance applied when both sides are finite

    Returns:
        bool: True iff a <= b up to tolerance
    """
    if a == NEG_INF or b == POS_INF:
        return True
    if a == POS_INF or b == NEG_INF:
        return False
    return a <= b + atol + rtol * max(abs(a), abs(b))


def ext_close(a, b, atol=0.0, rtol=0.0):
    """Equality of extended reals; equal infinities compare equal."""
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= atol + rtol * max(abs(a), abs(b))


def format_ext(value):
    """
    Render an extended real for structured output.

    Infinities become the strings "+inf" and "-inf" so the output stays valid JSON.
    """
    if value == POS_INF:
        return "+inf"
    if value == NEG_INF:
        return "-inf"
    return float(value)
