"""Conventional-RIS benchmark: a uniform sub-lattice of active elements with discrete phases.

The benchmark activates an r x c sub-lattice spread evenly over the whole aperture, edges
included. Its phases come either from quantized co-phasing or from the cross-entropy loop with
the selection frozen to the sub-lattice.
"""

import logging
from typing import List, Tuple

import numpy as np

from models.link import ChannelRealization, RadioParams
from models.solution import Candidate, CeoConfig, PhaseVector, RisBaselineResult, SubgridPlan
from models.surface import SurfaceGrid
from optimizers.ceo import optimize
from physics.channel import cascaded_coefficients
from physics.rate import achievable_rate
from utils.errors import InvalidInputError
from utils.telemetry import tracer, Status, StatusCode

logger = logging.getLogger(__name__)


def spread_indices(k: int, n: int) -> List[int]:
    """k of the indices 0..n-1, evenly spaced with both ends included.

    Uses round(i * (n - 1) / (k - 1)); a single index sits at round((n - 1) / 2).
    """
    if not 1 <= k <= n:
        raise InvalidInputError(f"cannot place {k} indices on {n} positions")
    if k == 1:
        return [round((n - 1) / 2)]
    return [round(i * (n - 1) / (k - 1)) for i in range(k)]


def plan_subgrid(grid: SurfaceGrid, m_hat: int) -> SubgridPlan:
    """Pick the sub-lattice shape and its row/column positions.

    Exact factorizations r x c = m_hat that fit (r <= mz rows, c <= my columns) are preferred,
    the most square first. Otherwise the most square r x c >= m_hat is used and the surplus
    positions with the highest element index are dropped later.
    """
    if not 1 <= m_hat <= grid.m:
        raise InvalidInputError(f"m_hat={m_hat} must lie in 1..{grid.m}")

    exact = [
        (r, m_hat // r)
        for r in range(1, grid.mz + 1)
        if m_hat % r == 0 and m_hat // r <= grid.my
    ]
    if exact:
        r, c = min(exact, key=lambda rc: (abs(rc[0] - rc[1]), rc[0]))
        fallback = False
    else:
        shapes = [
            (r, c)
            for r in range(1, grid.mz + 1)
            for c in range(1, grid.my + 1)
            if r * c >= m_hat
        ]
        r, c = min(shapes, key=lambda rc: (abs(rc[0] - rc[1]), rc[0] * rc[1], rc[0]))
        fallback = True
        logger.warning(
            "⚠️ m_hat=%d has no r x c factorization on a %dx%d surface, using %dx%d and dropping %d",
            m_hat, grid.mz, grid.my, r, c, r * c - m_hat,
        )

    return SubgridPlan(
        rows=tuple(spread_indices(r, grid.mz)),
        cols=tuple(spread_indices(c, grid.my)),
        fallback=fallback,
        dropped=r * c - m_hat,
    )


def subgrid_selection(grid: SurfaceGrid, plan: SubgridPlan) -> np.ndarray:
    index = sorted(row * grid.my + col for row in plan.rows for col in plan.cols)
    if plan.dropped:
        index = index[:-plan.dropped]
    xi = np.zeros(grid.m, dtype=np.int8)
    xi[index] = 1
    return xi


def uniform_subgrid_selection(grid: SurfaceGrid, m_hat: int) -> np.ndarray:
    """Binary M-vector with exactly m_hat ones laid out as an even sub-lattice."""
    return subgrid_selection(grid, plan_subgrid(grid, m_hat))


def quantized_alignment_phases(c: np.ndarray, bits: int) -> PhaseVector:
    """Per coefficient, the level whose angle is circularly closest to -arg(c_k).

    Ties go to the lower level and zero coefficients get level V.
    """
    c = np.asarray(c, dtype=complex)
    if c.ndim != 1:
        raise InvalidInputError("coefficients must be a vector")
    v = 2 ** bits
    angles = np.arange(1, v + 1) * (2.0 * np.pi / v)
    target = np.mod(-np.angle(c), 2.0 * np.pi)
    gap = np.mod(np.abs(angles[np.newaxis, :] - target[:, np.newaxis]), 2.0 * np.pi)
    distance = np.minimum(gap, 2.0 * np.pi - gap)
    levels = np.argmin(distance, axis=1) + 1
    levels[c == 0] = v
    return PhaseVector(levels=levels, bits=bits)


def aligned_baseline(
    ch: ChannelRealization,
    radio: RadioParams,
    grid: SurfaceGrid,
    m_hat: int,
    bits: int,
) -> Tuple[Candidate, SubgridPlan]:
    plan = plan_subgrid(grid, m_hat)
    xi = subgrid_selection(grid, plan)
    c = cascaded_coefficients(ch, np.flatnonzero(xi))
    phi = quantized_alignment_phases(c, bits)
    return Candidate(xi=xi, phi=phi, rate=achievable_rate(c, phi, radio)), plan


def ris_baseline(
    ch: ChannelRealization,
    radio: RadioParams,
    grid: SurfaceGrid,
    m_hat: int,
    bits: int,
    config: CeoConfig,
    rng: np.random.Generator,
) -> RisBaselineResult:
    """Benchmark RIS: sub-lattice selection, phases learned by the phase-only CE loop.

    The quantized co-phasing candidate on the same sub-lattice is returned alongside as a
    reference point.
    """
    with tracer.start_as_current_span("ris_baseline") as span:
        try:
            aligned, plan = aligned_baseline(ch, radio, grid, m_hat, bits)
            span.set_attribute("ris.m_hat", m_hat)
            span.set_attribute("ris.bits", bits)
            span.set_attribute("ris.fallback", plan.fallback)

            best, trace = optimize(ch, radio, m_hat, bits, config, rng, fixed_selection=aligned.xi)

            span.set_attribute("ris.rate", best.rate)
            span.set_attribute("ris.aligned_rate", aligned.rate)
            logger.debug("RIS baseline rate %.6f, co-phasing reference %.6f", best.rate, aligned.rate)
            return RisBaselineResult(best=best, trace=trace, aligned=aligned, fallback=plan.fallback)

        except Exception as e:
            span.set_status(Status(StatusCode.ERROR))
            span.record_exception(e)
            raise
