"""Cross-entropy optimization of joint on-off selection and discrete phase shifts.

Each iteration samples A candidates from the tilting parameters (P, g): a Bernoulli(g)
selection repaired to exactly M_hat ones, and per-slot phase levels drawn by inverse CDF
from the rows of P. Slot k is paired with the k-th smallest selected element. Draws that
repeat a candidate already scored in the run are drawn again (up to ``max_redraws`` rounds).
The top ceil(zeta * A) candidates form the elite set whose empirical frequencies, blended
with the previous parameters, become the next (P, g).
"""

import logging
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np

from models.link import ChannelRealization, RadioParams
from models.solution import Candidate, CeoConfig, CeoTrace, PhaseVector, TiltingParams, elite_count
from physics.channel import cascaded_matrix, selected_indices
from physics.rate import batch_rates
from utils.errors import InvalidInputError
from utils.telemetry import tracer, Status, StatusCode

logger = logging.getLogger(__name__)


def init_params(m: int, m_hat: int, v: int) -> TiltingParams:
    """Uniform phase rows (1/V) and selection probabilities M_hat/M."""
    if not 1 <= m_hat <= m:
        raise InvalidInputError(f"need 1 <= m_hat <= M, got m_hat={m_hat}, M={m}")
    if v < 2:
        raise InvalidInputError(f"need at least 2 phase levels, got {v}")
    return TiltingParams(p=np.full((m_hat, v), 1.0 / v), g=np.full(m, m_hat / m))


def inverse_cdf_level(row: np.ndarray, z: float) -> int:
    """Level n (1-based) with sum_{v<n} row[v] < z <= sum_{v<=n} row[v]."""
    cdf = np.cumsum(row)
    return int(min(np.count_nonzero(cdf < z) + 1, len(row)))


def sample_phase_levels(params: TiltingParams, rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw ``count`` phase-level vectors, shape (count, M_hat), entries in 1..V."""
    cdf = np.cumsum(params.p, axis=1)
    # z in (0, 1] so a zero-probability first level is never chosen
    z = 1.0 - rng.random((count, params.m_hat))
    levels = np.count_nonzero(cdf[np.newaxis, :, :] < z[:, :, np.newaxis], axis=2) + 1
    return np.minimum(levels, params.v_count)


def sample_phases(params: TiltingParams, rng: np.random.Generator) -> PhaseVector:
    v = params.v_count
    if v & (v - 1):
        raise InvalidInputError(f"phase level count {v} is not a power of two")
    return PhaseVector(levels=sample_phase_levels(params, rng, 1)[0], bits=v.bit_length() - 1)


def sample_selections(params: TiltingParams, rng: np.random.Generator, count: int) -> np.ndarray:
    """Raw Bernoulli(g) selection rows, shape (count, M); not yet feasible."""
    return (rng.random((count, params.m)) < params.g).astype(np.int8)


def sample_selection(params: TiltingParams, rng: np.random.Generator) -> np.ndarray:
    return sample_selections(params, rng, 1)[0]


def repair_selections(xi: np.ndarray, g: np.ndarray, m_hat: int) -> np.ndarray:
    """Force every row to exactly m_hat ones.

    Rows with too many ones lose the active entries with the lowest g first; rows with too
    few gain the inactive entries with the highest g first. Equal g values go to the lower
    element index first.
    """
    xi = np.array(xi, dtype=np.int8, ndmin=2, copy=True)
    g = np.asarray(g, dtype=float)
    index = np.arange(g.size)
    excess = xi.sum(axis=1, dtype=np.int64) - m_hat

    over = excess > 0
    if over.any():
        drop_order = np.lexsort((index, g))
        rows = xi[over][:, drop_order]
        rank = np.cumsum(rows, axis=1)
        rows[(rows == 1) & (rank <= excess[over][:, np.newaxis])] = 0
        repaired = xi[over]
        repaired[:, drop_order] = rows
        xi[over] = repaired

    under = excess < 0
    if under.any():
        raise_order = np.lexsort((index, -g))
        rows = xi[under][:, raise_order]
        inactive = rows == 0
        rank = np.cumsum(inactive, axis=1)
        rows[inactive & (rank <= -excess[under][:, np.newaxis])] = 1
        repaired = xi[under]
        repaired[:, raise_order] = rows
        xi[under] = repaired

    return xi


def repair_selection(xi: np.ndarray, params: TiltingParams, m_hat: int) -> np.ndarray:
    xi = np.asarray(xi)
    if xi.shape != (params.m,) or not np.isin(xi, (0, 1)).all():
        raise InvalidInputError(f"selection must be a binary vector of length {params.m}")
    return repair_selections(xi, params.g, m_hat)[0]


def draw_candidates(
    params: TiltingParams, rng: np.random.Generator, count: int, m_hat: int
) -> Tuple[np.ndarray, np.ndarray]:
    """``count`` repaired selections and their phase levels."""
    xi = repair_selections(sample_selections(params, rng, count), params.g, m_hat)
    return xi, sample_phase_levels(params, rng, count)


def candidate_keys(xi: np.ndarray, levels: np.ndarray, v: int) -> List[bytes]:
    """Identity of each (selection, phase levels) row up to a common phase rotation.

    Adding the same level offset to every active phase leaves |sum_k c_k exp(j phi_k)|, and
    with it the rate, unchanged.
    """
    levels = np.asarray(levels, dtype=np.int64)
    relative = ((levels - levels[:, :1]) % v).astype(np.uint16)
    packed = np.packbits(np.asarray(xi, dtype=np.uint8), axis=1)
    return [selection.tobytes() + phases.tobytes() for selection, phases in zip(packed, relative)]


def _repeated_rows(keys: Sequence[bytes], seen: Set[bytes]) -> np.ndarray:
    repeated = np.zeros(len(keys), dtype=bool)
    batch: Set[bytes] = set()
    for a, key in enumerate(keys):
        repeated[a] = key in seen or key in batch
        batch.add(key)
    return repeated


def draw_unseen(
    params: TiltingParams,
    rng: np.random.Generator,
    count: int,
    m_hat: int,
    seen: Set[bytes],
    max_redraws: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """Draw a batch whose rows are new to ``seen`` as far as ``max_redraws`` rounds allow.

    Each round redraws only the rows that repeat an earlier row or a key in ``seen``. Rows
    still repeating after the last round are kept. ``seen`` is extended with the batch.
    """
    xi, levels = draw_candidates(params, rng, count, m_hat)
    keys = candidate_keys(xi, levels, params.v_count)
    repeated = _repeated_rows(keys, seen)
    for _ in range(max_redraws):
        if not repeated.any():
            break
        xi[repeated], levels[repeated] = draw_candidates(params, rng, int(repeated.sum()), m_hat)
        keys = candidate_keys(xi, levels, params.v_count)
        repeated = _repeated_rows(keys, seen)
    seen.update(keys)
    return xi, levels


def rank_elite(rates: np.ndarray, count: int) -> np.ndarray:
    """Indices of the ``count`` highest rates, best first; equal rates keep sampling order."""
    return np.argsort(-np.asarray(rates, dtype=float), kind="stable")[:count]


def select_elite(candidates: Sequence[Candidate], elite_frac: float) -> List[Candidate]:
    """Top ceil(zeta * A) candidates by rate."""
    if not candidates:
        raise InvalidInputError("cannot select an elite set from no candidates")
    rates = np.array([member.rate for member in candidates], dtype=float)
    return [candidates[a] for a in rank_elite(rates, elite_count(len(candidates), elite_frac))]


def elite_frequencies(xi: np.ndarray, levels: np.ndarray, v: int) -> TiltingParams:
    """Share of elite rows with each slot at each level, and with each element switched on."""
    n_elite = xi.shape[0]
    counts = np.stack([np.count_nonzero(levels == level, axis=0) for level in range(1, v + 1)], axis=1)
    return TiltingParams(p=counts / n_elite, g=xi.sum(axis=0) / n_elite)


def update_parameters(elite: Sequence[Candidate], m: int, m_hat: int, v: int) -> TiltingParams:
    """Closed-form cross-entropy update: empirical level and selection frequencies of the elite."""
    if not elite:
        raise InvalidInputError("elite set is empty")
    for member in elite:
        if member.xi.size != m or len(member.phi) != m_hat or member.phi.v_count != v:
            raise InvalidInputError("elite member does not match the problem dimensions")
    xi = np.stack([member.xi for member in elite])
    levels = np.stack([member.phi.levels for member in elite])
    return elite_frequencies(xi, levels, v)


def smooth(new: TiltingParams, old: TiltingParams, omega: float) -> TiltingParams:
    """Blend omega * new + (1 - omega) * old entrywise."""
    if new.p.shape != old.p.shape or new.g.shape != old.g.shape:
        raise InvalidInputError("cannot smooth parameters of different shapes")
    return TiltingParams(
        p=omega * new.p + (1.0 - omega) * old.p,
        g=omega * new.g + (1.0 - omega) * old.g,
    )


def apply_floor(params: TiltingParams, floor: float) -> TiltingParams:
    """Keep every probability at least ``floor`` away from 0 (and g away from 1)."""
    if floor <= 0:
        return params
    p = np.maximum(params.p, floor)
    return TiltingParams(p=p / p.sum(axis=1, keepdims=True), g=np.clip(params.g, floor, 1.0 - floor))


def _check_fixed_selection(fixed_selection: np.ndarray, m: int, m_hat: int) -> np.ndarray:
    fixed = np.asarray(fixed_selection)
    if fixed.shape != (m,) or not np.isin(fixed, (0, 1)).all() or int(fixed.sum()) != m_hat:
        raise InvalidInputError(f"fixed selection must be binary of length {m} with {m_hat} ones")
    return fixed.astype(float)


def optimize(
    channel: ChannelRealization,
    radio: RadioParams,
    m_hat: int,
    bits: int,
    config: CeoConfig,
    rng: np.random.Generator,
    fixed_selection: Optional[np.ndarray] = None,
    initial: Optional[TiltingParams] = None,
) -> Tuple[Candidate, CeoTrace]:
    """Run the cross-entropy loop on one channel realization.

    Stops once the per-iteration best sampled rate moves by at most ``config.tol`` for
    ``config.patience`` consecutive iterations, or after ``config.max_iter`` iterations.
    With ``fixed_selection`` the selection probabilities are frozen to that vector and only
    the phase distribution is learned. ``initial`` replaces the uniform starting parameters.

    Returns:
        The best candidate seen in any iteration and the iteration trace.
    """
    m = channel.m
    v = 2 ** bits
    with tracer.start_as_current_span("ceo.optimize") as span:
        try:
            params = init_params(m, m_hat, v)
            if initial is not None:
                if initial.p.shape != params.p.shape or initial.g.shape != params.g.shape:
                    raise InvalidInputError("initial parameters do not match the problem dimensions")
                params = initial
            if fixed_selection is not None:
                params = TiltingParams(p=params.p, g=_check_fixed_selection(fixed_selection, m, m_hat))
            a = config.sample_count_a
            trace = CeoTrace(elite_size=config.elite_count)
            span.set_attribute("ceo.m", m)
            span.set_attribute("ceo.m_hat", m_hat)
            span.set_attribute("ceo.bits", bits)
            span.set_attribute("ceo.samples", a)
            span.set_attribute("ceo.phase_only", fixed_selection is not None)

            best: Optional[Candidate] = None
            previous: Optional[float] = None
            streak = 0
            seen: Set[bytes] = set()
            for iteration in range(1, config.max_iter + 1):
                xi, levels = draw_unseen(params, rng, a, m_hat, seen, config.max_redraws)
                assert (xi.sum(axis=1) == m_hat).all(), "infeasible selection after repair"
                assert ((levels >= 1) & (levels <= v)).all(), "phase level outside 1..V"

                rates = batch_rates(cascaded_matrix(channel, selected_indices(xi, m_hat)), levels, bits, radio)
                elite = rank_elite(rates, trace.elite_size)
                top = int(elite[0])
                sampled_best = float(rates[top])

                if best is None or sampled_best > best.rate:
                    best = Candidate(xi=xi[top].copy(), phi=PhaseVector(levels[top], bits), rate=sampled_best)

                trace.best_rates.append(best.rate)
                trace.sampled_best.append(sampled_best)
                trace.mean_elite_rates.append(float(rates[elite].mean()))
                trace.elite_thresholds.append(float(rates[elite[-1]]))

                updated = elite_frequencies(xi[elite], levels[elite], v)
                if fixed_selection is not None:
                    updated = TiltingParams(p=updated.p, g=params.g)
                params = apply_floor(smooth(updated, params, config.smoothing), config.prob_floor)

                logger.debug(
                    "CEO iteration %d: sampled best %.6f, elite mean %.6f, best so far %.6f",
                    iteration, sampled_best, trace.mean_elite_rates[-1], best.rate,
                )

                if previous is not None and abs(sampled_best - previous) <= config.tol:
                    streak += 1
                else:
                    streak = 0
                previous = sampled_best
                if streak >= config.patience:
                    trace.converged = True
                    break

            if not trace.converged:
                logger.warning("⚠️ CEO stopped at max_iter=%d without meeting tol=%g", config.max_iter, config.tol)

            span.set_attribute("ceo.iterations", trace.iterations)
            span.set_attribute("ceo.converged", trace.converged)
            span.set_attribute("ceo.best_rate", best.rate)
            span.set_attribute("ceo.distinct_candidates", len(seen))
            return best, trace

        except Exception as e:
            span.set_status(Status(StatusCode.ERROR))
            span.record_exception(e)
            raise
