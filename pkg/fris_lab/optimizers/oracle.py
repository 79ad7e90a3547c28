"""Exhaustive search over every (subset, phase pattern) pair of a small instance.

Subsets are visited in lexicographic order and phase patterns in lexicographic level order,
and a later candidate only replaces the incumbent when strictly better, so ties resolve to the
lowest lexicographic (subset, phase) pair.
"""

import itertools
import logging
import math

import numpy as np

from models.link import ChannelRealization, RadioParams
from models.solution import OracleResult, PhaseVector
from physics.channel import cascaded_coefficients
from physics.rate import batch_rates
from utils.errors import BudgetExceededError, InvalidInputError
from utils.telemetry import tracer, Status, StatusCode

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 1_000_000


def search_size(m: int, m_hat: int, bits: int) -> int:
    return math.comb(m, m_hat) * (2 ** bits) ** m_hat


def exhaustive_search(
    ch: ChannelRealization,
    radio: RadioParams,
    m_hat: int,
    bits: int,
    budget: int = DEFAULT_BUDGET,
) -> OracleResult:
    """Maximize the rate over all C(M, m_hat) * V**m_hat candidates.

    Raises:
        BudgetExceededError: the instance needs more than ``budget`` evaluations.
    """
    m = ch.m
    if not 1 <= m_hat <= m:
        raise InvalidInputError(f"m_hat={m_hat} must lie in 1..{m}")
    size = search_size(m, m_hat, bits)
    if size > budget:
        raise BudgetExceededError(
            f"exhaustive search needs C({m},{m_hat}) * {2 ** bits}^{m_hat} = {size} evaluations, "
            f"budget is {budget}"
        )

    with tracer.start_as_current_span("exhaustive_search") as span:
        try:
            span.set_attribute("oracle.m", m)
            span.set_attribute("oracle.m_hat", m_hat)
            span.set_attribute("oracle.bits", bits)
            span.set_attribute("oracle.evaluations", size)

            patterns = np.array(
                list(itertools.product(range(1, 2 ** bits + 1), repeat=m_hat)), dtype=np.int64
            )
            best_rate = -np.inf
            best_subset = None
            best_levels = None
            for subset in itertools.combinations(range(m), m_hat):
                c = cascaded_coefficients(ch, subset)
                rates = batch_rates(np.broadcast_to(c, patterns.shape), patterns, bits, radio)
                top = int(np.argmax(rates))
                if rates[top] > best_rate:
                    best_rate = float(rates[top])
                    best_subset = subset
                    best_levels = patterns[top]

            xi = np.zeros(m, dtype=np.int8)
            xi[list(best_subset)] = 1
            logger.debug("Exhaustive search over %d candidates: best rate %.6f", size, best_rate)
            span.set_attribute("oracle.best_rate", best_rate)
            return OracleResult(
                best_xi=xi,
                best_phi=PhaseVector(levels=best_levels.copy(), bits=bits),
                best_rate=best_rate,
                evaluations=size,
            )

        except Exception as e:
            span.set_status(Status(StatusCode.ERROR))
            span.record_exception(e)
            raise
