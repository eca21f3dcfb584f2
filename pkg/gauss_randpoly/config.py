"""Package-wide defaults and the working-precision policy."""
import logging
import os

from gauss_randpoly.errors import DomainError

logger = logging.getLogger(__name__)

PRECISION_ENV_VAR = "SEL_PRECISION_BITS"
MIN_PRECISION_BITS = 53
MAX_PRECISION_BITS = 1 << 16

DEFAULT_N_MAX = 1000
MC_N_SOFT_CAP = 16
MAX_ISSERLIS_ORDER = 8

CSV_SCHEMA_VERSION = 1
SIGNIFICANT_DIGITS = 17
CSV_COLUMNS = [
    "N", "parity", "z2_re", "z2_im", "sigma2", "value", "nth_root",
    "ref_limit", "abs_err", "branch", "sign", "bits", "seed",
]


def default_precision_bits(N):
    """
    Working precision for evaluating E_N in floating point.

    The built-in default is 64 + 4N bits. The environment variable
    ``SEL_PRECISION_BITS`` replaces it when set; an explicit ``bits`` argument
    given to an evaluator always wins over both.

    Args:
        N(int): degree of the polynomial to be evaluated

    Returns:
        int: number of bits
    """
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw:
        try:
            bits = int(raw)
        except ValueError:
            raise DomainError(f"{PRECISION_ENV_VAR} must be an integer, got {raw!r}")
        if bits < MIN_PRECISION_BITS:
            raise DomainError(f"{PRECISION_ENV_VAR} must be >= {MIN_PRECISION_BITS}, got {bits}")
        logger.debug("precision from %s: %d bits", PRECISION_ENV_VAR, bits)
        return bits
    return 64 + 4 * N


def resolve_precision_bits(N, bits=None):
    """Explicit bits if given (validated), otherwise the default policy."""
    if bits is None:
        return default_precision_bits(N)
    bits = int(bits)
    if bits < MIN_PRECISION_BITS:
        raise DomainError(f"precision_bits must be >= {MIN_PRECISION_BITS}, got {bits}")
    return bits


def escalate_bits(bits):
    """Next precision to try after a PrecisionInsufficientError, or None at the cap."""
    if bits >= MAX_PRECISION_BITS:
        return None
    return min(2 * bits, MAX_PRECISION_BITS)
