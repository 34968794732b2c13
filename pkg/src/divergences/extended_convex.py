"""Convex functions with values in (-inf, +inf].

An ExtendedConvexFunction wraps a real evaluator together with the interval
where it is finite, its asymptotic slopes F'(+inf), F'(-inf) and a supporting
line F(t) >= A*t + B. Builtin generators carry all of these analytically; for
user-supplied functions they are estimated numerically on first use.
"""

import math
from dataclasses import dataclass
from functools import cached_property

from scipy.optimize import minimize_scalar

from divergences.extreal import POS_INF, NEG_INF, mass_times_slope
from utils.errors import ExtendedArithmeticError, InvalidInputError, NonConvergenceError
from utils.logger import setup_logger

logger = setup_logger(name="extended_convex")

# Doubling sequence t = 2**k, k = 0..MAX_DOUBLINGS
MAX_DOUBLINGS = 80
SLOPE_TOL = 1e-9
# Successive doublings that must agree within SLOPE_TOL
SLOPE_AGREEMENTS = 2
INFINITY_THRESHOLD = 1e12

# Slack subtracted from a numerically anchored intercept
SUPPORT_MARGIN = 1e-9

GENERATOR_NAMES = ("kl", "hellinger", "total_variation", "pearson_chi2", "alpha")


@dataclass(frozen=True)
class Domain:
    """Interval on which a convex function is finite."""

    lower: float = NEG_INF
    upper: float = POS_INF
    include_lower: bool = False
    include_upper: bool = False

    @property
    def is_empty(self):
        if self.lower < self.upper:
            return False
        if self.lower == self.upper and math.isfinite(self.lower):
            return not (self.include_lower and self.include_upper)
        return True

    def contains(self, t):
        if math.isnan(t) or t < self.lower or t > self.upper:
            return False
        if t == self.lower:
            return self.include_lower and math.isfinite(t)
        if t == self.upper:
            return self.include_upper and math.isfinite(t)
        return True

    def interior_point(self):
        """
        Pick a point inside the interval.

        Returns:
            float: A point of the interior, or the single point of a degenerate interval

        Raises:
            InvalidInputError: If the interval is empty
        """
        if self.is_empty:
            raise InvalidInputError("the finiteness domain is empty")
        lower_finite = math.isfinite(self.lower)
        upper_finite = math.isfinite(self.upper)
        if lower_finite and upper_finite:
            return 0.5 * (self.lower + self.upper)
        if lower_finite:
            return self.lower + 1.0
        if upper_finite:
            return self.upper - 1.0
        return 0.0


REAL_LINE = Domain()
POSITIVE_HALF_LINE = Domain(lower=0.0)
NONNEGATIVE_HALF_LINE = Domain(lower=0.0, include_lower=True)


class ExtendedConvexFunction:
    """
    A convex function F: R -> R u {+inf}.

    Values outside the domain are +inf. Slopes and the support line are taken
    from the constructor when given, otherwise computed once and cached.
    """

    def __init__(self, evaluator, label, domain=REAL_LINE, slope_pos=None, slope_neg=None, support_line=None):
        """
        Initialize the function.

        Args:
            evaluator (callable): Map float -> float, used only inside the domain
            label (str): Short name
            domain (Domain): Interval of finiteness
            slope_pos (float, optional): Analytic F'(+inf)
            slope_neg (float, optional): Analytic F'(-inf)
            support_line (tuple, optional): Analytic (A, B) with F(t) >= A*t + B
        """
        self.evaluator = evaluator
        self.label = label
        self.domain = domain
        self._analytic_slope_pos = slope_pos
        self._analytic_slope_neg = slope_neg
        self._analytic_support = support_line

    def __call__(self, t):
        return evaluate(self, t)

    def __repr__(self):
        return f"ExtendedConvexFunction({self.label!r})"

    @property
    def has_analytic_slopes(self):
        return self._analytic_slope_pos is not None and self._analytic_slope_neg is not None

    @cached_property
    def slope_pos(self):
        if self._analytic_slope_pos is not None:
            return float(self._analytic_slope_pos)
        return numeric_slope(self, "+")

    @cached_property
    def slope_neg(self):
        if self._analytic_slope_neg is not None:
            return float(self._analytic_slope_neg)
        return numeric_slope(self, "-")

    @cached_property
    def support_line(self):
        if self._analytic_support is not None:
            slope, intercept = self._analytic_support
            return float(slope), float(intercept)
        return _support_from_subgradient(self)


def evaluate(F, t):
    """
    Evaluate F at a real point.

    Args:
        F (ExtendedConvexFunction): The function
        t (float): The point

    Returns:
        float: F(t), +inf outside the finiteness domain

    Raises:
        ExtendedArithmeticError: If the evaluator produces -inf or NaN
    """
    t = float(t)
    if not F.domain.contains(t):
        return POS_INF
    try:
        value = float(F.evaluator(t))
    except OverflowError:
        return POS_INF
    if math.isnan(value) or value == NEG_INF:
        raise ExtendedArithmeticError(f"{F.label}({t}) = {value} is outside (-inf, +inf]")
    return value


def _direction_sign(direction):
    if direction in ("+", 1):
        return 1.0
    if direction in ("-", -1):
        return -1.0
    raise InvalidInputError(f"direction must be '+' or '-', got {direction!r}")


def numeric_slope(F, direction):
    """
    Estimate lim F(t)/t as t -> +-inf along t = +-2**k.

    Ratios above INFINITY_THRESHOLD in magnitude are promoted to +-inf.

    Args:
        F (ExtendedConvexFunction): The function
        direction (str): "+" or "-"

    Returns:
        float: The limit

    Raises:
        NonConvergenceError: If successive ratios never agree within SLOPE_TOL
    """
    sign = _direction_sign(direction)
    previous = None
    agreements = 0
    for k in range(MAX_DOUBLINGS + 1):
        t = sign * 2.0 ** k
        ratio = evaluate(F, t) / t
        if abs(ratio) > INFINITY_THRESHOLD:
            return math.copysign(POS_INF, ratio)
        # -ln(t)/t is equal at t = 2 and t = 4
        if previous is not None and abs(ratio - previous) < SLOPE_TOL:
            agreements += 1
            if agreements == SLOPE_AGREEMENTS:
                logger.debug(f"Slope of {F.label} at {direction}inf converged after {k} doublings: {ratio}")
                return ratio
        else:
            agreements = 0
        previous = ratio

    raise NonConvergenceError(
        f"asymptotic slope of {F.label} at {direction}inf did not stabilize within {MAX_DOUBLINGS} doublings",
        best_value=previous,
        iterations=MAX_DOUBLINGS,
    )


def asymptotic_slope(F, direction):
    """
    Return F'(+inf) or F'(-inf).

    Analytic values are used when the function carries them.
    """
    if _direction_sign(direction) > 0:
        return F.slope_pos
    return F.slope_neg


def perspective(F, s, x):
    """
    Perspective s*F(x/s), extended to s = 0 by the asymptotic slopes.

    Args:
        F (ExtendedConvexFunction): The function
        s (float): Nonnegative scale
        x (float): Real argument

    Returns:
        float: Value in R u {+inf}

    Raises:
        InvalidInputError: If s is negative
    """
    s = float(s)
    x = float(x)
    if not s >= 0.0:
        raise InvalidInputError(f"perspective scale must be nonnegative, got {s}")

    if s == 0.0:
        if x > 0.0:
            return mass_times_slope(x, F.slope_pos)
        if x < 0.0:
            return mass_times_slope(x, F.slope_neg)
        return 0.0

    ratio = x / s
    if not math.isfinite(ratio):
        # x/s overflowed, the slope limit is the value of the perspective
        return perspective(F, 0.0, x)

    value = evaluate(F, ratio)
    if value == POS_INF:
        return POS_INF
    return s * value


def _support_from_subgradient(F):
    domain = F.domain
    t0 = domain.interior_point()
    f0 = evaluate(F, t0)
    if f0 == POS_INF:
        raise InvalidInputError(f"{F.label} is not finite at the interior point {t0}")

    if domain.lower == domain.upper:
        return 0.0, f0

    h = 1e-3 * (1.0 + abs(t0))
    if math.isfinite(domain.lower):
        h = min(h, 0.5 * (t0 - domain.lower))
    if math.isfinite(domain.upper):
        h = min(h, 0.5 * (domain.upper - t0))
    slope = (evaluate(F, t0 + h) - evaluate(F, t0 - h)) / (2.0 * h)

    # The secant slope is a subgradient somewhere in [t0 - h, t0 + h];
    # the intercept is the minimum of F(t) - slope*t over that interval.
    result = minimize_scalar(
        lambda t: evaluate(F, t) - slope * t,
        bounds=(t0 - h, t0 + h),
        method="bounded",
        options={"xatol": 1e-12},
    )
    intercept = min(float(result.fun), f0 - slope * t0)
    intercept -= SUPPORT_MARGIN * (1.0 + abs(intercept))
    logger.debug(f"Support line for {F.label}: A={slope}, B={intercept}")
    return slope, intercept


def superlinear_bounds(F):
    """
    Return a supporting line (A, B) with F(t) >= A*t + B for all t.

    Raises:
        InvalidInputError: If the finiteness domain is empty
    """
    if F.domain.is_empty:
        raise InvalidInputError(f"{F.label} has an empty finiteness domain")
    return F.support_line


def _kl(t):
    return -math.log(t)


def _hellinger(t):
    return 1.0 - math.sqrt(t)


def _total_variation(t):
    return abs(t - 1.0)


def _pearson_chi2(t):
    d = t - 1.0
    return d * d


def _alpha_generator(alpha):
    scale = alpha * alpha - alpha

    def evaluator(t):
        return (t ** alpha - t) / scale

    if alpha > 1.0:
        slope_pos = POS_INF
    else:
        # t**(alpha - 1) -> 0, so F(t)/t -> -1/scale
        slope_pos = -1.0 / scale
    domain = NONNEGATIVE_HALF_LINE if alpha > 0.0 else POSITIVE_HALF_LINE
    return ExtendedConvexFunction(
        evaluator,
        label=f"alpha:{alpha:g}",
        domain=domain,
        slope_pos=slope_pos,
        slope_neg=NEG_INF,
        support_line=(1.0 / alpha, -1.0 / alpha),
    )


def make_generator(name, alpha_param=None):
    """
    Build one of the standard divergence generators.

    Args:
        name (str): kl, hellinger, total_variation, pearson_chi2 or alpha
        alpha_param (float, optional): Required iff name == "alpha", not 0 or 1

    Returns:
        ExtendedConvexFunction: The generator with analytic slopes and support line

    Raises:
        InvalidInputError: Unknown name or invalid alpha_param
    """
    if name not in GENERATOR_NAMES:
        raise InvalidInputError(f"unknown generator {name!r}, expected one of {', '.join(GENERATOR_NAMES)}")

    if name == "alpha":
        if alpha_param is None:
            raise InvalidInputError("the alpha generator needs alpha_param")
        alpha = float(alpha_param)
        if not math.isfinite(alpha) or alpha in (0.0, 1.0):
            raise InvalidInputError(f"alpha_param must be finite and not 0 or 1, got {alpha_param}")
        return _alpha_generator(alpha)

    if alpha_param is not None:
        raise InvalidInputError(f"alpha_param is only accepted by the alpha generator, not {name}")

    if name == "kl":
        return ExtendedConvexFunction(
            _kl, "kl", domain=POSITIVE_HALF_LINE,
            slope_pos=0.0, slope_neg=NEG_INF, support_line=(-1.0, 1.0),
        )
    if name == "hellinger":
        # Tangent at t = 1: 1 - sqrt(t) >= (1 - t)/2
        return ExtendedConvexFunction(
            _hellinger, "hellinger", domain=NONNEGATIVE_HALF_LINE,
            slope_pos=0.0, slope_neg=NEG_INF, support_line=(-0.5, 0.5),
        )
    if name == "total_variation":
        return ExtendedConvexFunction(
            _total_variation, "total_variation",
            slope_pos=1.0, slope_neg=-1.0, support_line=(1.0, -1.0),
        )
    return ExtendedConvexFunction(
        _pearson_chi2, "pearson_chi2",
        slope_pos=POS_INF, slope_neg=NEG_INF, support_line=(0.0, 0.0),
    )


def parse_generator(name, alpha_param=None):
    """
    Build a generator from its CLI/config name.

    Accepts "kl", "hellinger", "total_variation", "pearson_chi2", "alpha:<value>",
    or "alpha" together with alpha_param.
    """
    name = name.strip()
    if name.startswith("alpha:"):
        if alpha_param is not None:
            raise InvalidInputError("give alpha either as alpha:<value> or separately, not both")
        raw = name.split(":", 1)[1]
        try:
            alpha_param = float(raw)
        except ValueError:
            raise InvalidInputError(f"invalid alpha value {raw!r}") from None
        return make_generator("alpha", alpha_param)
    return make_generator(name, alpha_param)


def builtin_generators():
    """One instance of every builtin family, with a few alpha values."""
    return [
        make_generator("kl"),
        make_generator("hellinger"),
        make_generator("total_variation"),
        make_generator("pearson_chi2"),
        make_generator("alpha", 2.0),
        make_generator("alpha", 0.25),
        make_generator("alpha", -1.0),
    ]


def check_convexity(F, grid, tol):
    """
    Check convexity of F on consecutive triples of a sorted grid.

    Triples with an infinite endpoint value hold vacuously.

    Args:
        F (ExtendedConvexFunction): The function
        grid (iterable of float): Sorted points
        tol (float): Positive slack

    Returns:
        bool: True iff F(t2) <= interpolation of F(t1), F(t3) + tol on every triple
    """
    if not tol > 0:
        raise InvalidInputError(f"tol must be positive, got {tol}")
    points = [float(t) for t in grid]
    if any(b < a for a, b in zip(points, points[1:])):
        raise InvalidInputError("grid must be sorted")

    values = [evaluate(F, t) for t in points]
    for i in range(len(points) - 2):
        t1, t2, t3 = points[i], points[i + 1], points[i + 2]
        f1, f2, f3 = values[i], values[i + 1], values[i + 2]
        if t1 == t3 or f1 == POS_INF or f3 == POS_INF:
            continue
        if f2 == POS_INF:
            return False
        w = (t3 - t2) / (t3 - t1)
        if f2 > w * f1 + (1.0 - w) * f3 + tol:
            return False
    return True
