"""
Closed-form estimate of the core count that reaches a target communication efficiency.

Assuming perfectly scalable work, a maximum communication time independent of the
core count, and t_e ~ max(t_w) + max(t_c), running n cores at efficiency CE gives

    n* = n (1 - 1/CE*) / (1 - 1/CE)

and, inverted, the efficiency expected on n* cores:

    CE* = [1 - (n*/n)(1 - 1/CE)]^-1
"""
import logging
import math

from models import ClampPolicy, TargetRange
from .errors import InvalidInputError, OutOfModelError, SingularityError

logger = logging.getLogger(__name__)

CE_CEILING = 1.0 - 1e-9


def target_ce(target_range: TargetRange) -> float:
    return 0.5 * (target_range.ce_min + target_range.ce_max)


def _check_efficiency(ce, name):
    if ce <= 0:
        raise InvalidInputError(f"{name} must be positive, got {ce}")
    if ce >= 1:
        raise SingularityError(f"{name} must be below 1, got {ce}: the factor 1 - 1/CE vanishes")


def sanitize_measured_ce(ce: float):
    """
    Keep a measured CE inside the estimator's domain.

    Returns:
        tuple: (usable_ce, was_clamped)
    """
    if ce >= 1.0:
        logger.warning(f"Measured CE {ce!r} is not below 1; clamping to {CE_CEILING!r}")
        return CE_CEILING, True
    return ce, False


def estimate_cores(n: int, ce_measured: float, ce_target: float) -> float:
    if n < 1:
        raise InvalidInputError(f"Core count must be >= 1, got {n}")
    _check_efficiency(ce_measured, "Measured CE")
    _check_efficiency(ce_target, "Target CE")
    if ce_measured == ce_target:
        return float(n)
    return n * (1.0 - 1.0 / ce_target) / (1.0 - 1.0 / ce_measured)


def predict_ce(n: int, ce_measured: float, n_star: float) -> float:
    if n < 1 or n_star < 1:
        raise InvalidInputError(f"Core counts must be >= 1, got n={n}, n*={n_star}")
    _check_efficiency(ce_measured, "Measured CE")
    if n_star == n:
        return ce_measured
    denominator = 1.0 - (n_star / n) * (1.0 - 1.0 / ce_measured)
    if denominator <= 0:
        raise OutOfModelError(f"No meaningful efficiency for n={n}, CE={ce_measured}, n*={n_star}")
    return 1.0 / denominator


def round_half_away(value: float) -> int:
    return int(math.floor(abs(value) + 0.5)) * (1 if value >= 0 else -1)


def clamp_and_round(n_estimated: float, n_current: int, policy: ClampPolicy) -> int:
    """
    Turn a raw estimate into a core count the controller may request.

    The rounded estimate is first held within a factor r of the current count
    (bounds rounded outward), then within [min_cores, max_cores], then optionally
    snapped down to whole nodes.
    """
    if n_estimated <= 0:
        raise InvalidInputError(f"Estimated core count must be positive, got {n_estimated}")

    cores = round_half_away(n_estimated)

    rate_floor = math.floor(n_current / policy.rate_of_change)
    rate_ceiling = math.ceil(n_current * policy.rate_of_change)
    cores = min(max(cores, rate_floor), rate_ceiling)

    cores = min(max(cores, policy.min_cores), policy.max_cores)

    if policy.snap_to_nodes:
        cores = _snap_to_nodes(cores, policy)

    return max(cores, 1)


def _snap_to_nodes(cores, policy):
    granularity = policy.node_granularity
    snapped = (cores // granularity) * granularity
    if snapped < policy.min_cores:
        snapped = math.ceil(policy.min_cores / granularity) * granularity
    if snapped > policy.max_cores or snapped < 1:
        logger.debug(f"No multiple of {granularity} fits [{policy.min_cores}, {policy.max_cores}]; keeping {cores}")
        return cores
    return snapped
