"""Seeded Monte-Carlo trials comparing the surface schemes on shared channel draws.

Every trial draws one channel realization from its own seed and hands the same realization to
each requested scheme, so scheme results within a trial are paired. All randomness derives from
``master_seed``: trial t gets a seed spawned from (master_seed, t), its channel uses the stream
[seed, 0] and each scheme the stream [seed, key] with a fixed per-scheme key.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from time import perf_counter
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from models.experiment import SCHEME_STREAM_KEYS, ExperimentConfig, ResultRecord, Scheme
from models.link import ChannelRealization, LinkParams, RadioParams
from models.solution import Candidate, CeoConfig
from models.surface import CorrelationModel, SurfaceGrid
from optimizers.baselines import aligned_baseline, ris_baseline
from optimizers.ceo import optimize
from optimizers.oracle import exhaustive_search
from physics.channel import draw_realization
from physics.geometry import build_correlation
from utils.errors import BudgetExceededError, ConfigError
from utils.telemetry import tracer, Status, StatusCode
from utils.units import db_to_linear, dbm_to_watt, wavelength_m

logger = logging.getLogger(__name__)

CHANNEL_STREAM_KEY = 0


def derive_grid(config: ExperimentConfig) -> SurfaceGrid:
    """Square lattice spanning surface_side_lambda wavelengths edge to edge."""
    if config.my != config.mz:
        raise ConfigError(f"only square surfaces are supported, got my={config.my}, mz={config.mz}")
    if config.my < 2:
        raise ConfigError("a surface spanning its edges needs at least 2 elements per side")
    lam = wavelength_m(config.fc_hz)
    return SurfaceGrid(
        my=config.my,
        mz=config.mz,
        spacing_m=config.surface_side_lambda * lam / (config.my - 1),
        wavelength_m=lam,
    )


def trial_seed(master_seed: int, trial: int) -> int:
    """63-bit seed of trial ``trial``, independent of how many trials run."""
    state = np.random.SeedSequence(master_seed, spawn_key=(trial,)).generate_state(1, np.uint64)
    return int(state[0]) >> 1


def scheme_rng(seed: int, scheme: Scheme) -> np.random.Generator:
    return np.random.default_rng([seed, SCHEME_STREAM_KEYS[scheme]])


@dataclass(frozen=True)
class ExperimentContext:
    """Everything a trial needs that does not change between trials."""

    config: ExperimentConfig
    grid: SurfaceGrid
    correlation: CorrelationModel
    radio: RadioParams
    link_br: LinkParams
    link_ru: LinkParams

    def ceo_config(self, m_hat: int) -> CeoConfig:
        return CeoConfig(
            sample_count_a=int(round(self.config.sample_factor * (self.grid.m + m_hat))),
            elite_frac=self.config.elite_frac,
            smoothing=self.config.smoothing,
            tol=self.config.tol,
            max_iter=self.config.max_iter,
            patience=self.config.patience,
            prob_floor=self.config.prob_floor,
            max_redraws=self.config.max_redraws,
        )

    def draw_channel(self, seed: int) -> ChannelRealization:
        rng = np.random.default_rng([seed, CHANNEL_STREAM_KEY])
        return draw_realization(
            rng, self.correlation, self.link_br, self.link_ru, correlate_both=self.config.correlate_both
        )


def build_context(config: ExperimentConfig) -> ExperimentContext:
    grid = derive_grid(config)
    rho = db_to_linear(config.rho_db)
    return ExperimentContext(
        config=config,
        grid=grid,
        correlation=build_correlation(grid, eigen_floor=config.eigen_floor),
        radio=RadioParams(power_w=dbm_to_watt(config.power_dbm), noise_w=dbm_to_watt(config.noise_dbm)),
        link_br=LinkParams(rho=rho, alpha=config.alpha, distance_m=config.d_br_m),
        link_ru=LinkParams(rho=rho, alpha=config.alpha, distance_m=config.d_ru_m),
    )


@dataclass
class SchemeOutcome:
    scheme: Scheme
    m_hat: int
    bits: int
    candidate: Optional[Candidate]
    iterations: int
    converged: bool
    wall_ms: float = 0.0
    failure: Optional[str] = None
    subgrid_fallback: bool = False

    @property
    def rate(self) -> float:
        return self.candidate.rate if self.candidate is not None else 0.0


def run_scheme(
    context: ExperimentContext, scheme: Scheme, channel: ChannelRealization, seed: int
) -> SchemeOutcome:
    """Run one scheme on one channel; only the optimizer call itself is timed."""
    config = context.config
    rng = scheme_rng(seed, scheme)
    m_hat, bits = config.m_hat, config.bits
    if scheme in (Scheme.RIS, Scheme.ALIGNED):
        m_hat, bits = config.benchmark_m_hat, config.benchmark_bits

    start = perf_counter()
    if scheme is Scheme.FRIS:
        best, trace = optimize(channel, context.radio, m_hat, bits, context.ceo_config(m_hat), rng)
        outcome = SchemeOutcome(scheme, m_hat, bits, best, trace.iterations, trace.converged)
    elif scheme is Scheme.RIS:
        result = ris_baseline(
            channel, context.radio, context.grid, m_hat, bits, context.ceo_config(m_hat), rng
        )
        outcome = SchemeOutcome(
            scheme, m_hat, bits, result.best, result.trace.iterations, result.trace.converged,
            subgrid_fallback=result.fallback,
        )
    elif scheme is Scheme.ALIGNED:
        aligned, plan = aligned_baseline(channel, context.radio, context.grid, m_hat, bits)
        outcome = SchemeOutcome(scheme, m_hat, bits, aligned, 0, True, subgrid_fallback=plan.fallback)
    else:
        try:
            found = exhaustive_search(channel, context.radio, m_hat, bits, budget=config.oracle_budget)
            outcome = SchemeOutcome(scheme, m_hat, bits, found.as_candidate(), 0, True)
        except BudgetExceededError as e:
            logger.warning("⚠️ Oracle skipped: %s", e)
            outcome = SchemeOutcome(scheme, m_hat, bits, None, -1, False, failure=str(e))
    elapsed_ms = (perf_counter() - start) * 1000.0

    if config.record_wall_time:
        outcome.wall_ms = elapsed_ms
    return outcome


def solve_trial(
    context: ExperimentContext, trial: int, schemes: Optional[Sequence[Scheme]] = None
) -> Tuple[int, ChannelRealization, Dict[Scheme, SchemeOutcome]]:
    """Draw trial ``trial``'s channel and run every scheme on it."""
    seed = trial_seed(context.config.master_seed, trial)
    channel = context.draw_channel(seed)
    outcomes = {
        scheme: run_scheme(context, scheme, channel, seed)
        for scheme in (schemes or context.config.schemes)
    }
    return seed, channel, outcomes


def run_trial(context: ExperimentContext, trial: int) -> List[ResultRecord]:
    config = context.config
    with tracer.start_as_current_span("run_trial") as span:
        try:
            span.set_attribute("trial.index", trial)
            seed, channel, outcomes = solve_trial(context, trial)
            digest = channel.digest()
            records = [
                ResultRecord(
                    trial=trial,
                    scheme=scheme,
                    my=config.my,
                    mz=config.mz,
                    m_hat=outcome.m_hat,
                    bits=outcome.bits,
                    seed=seed,
                    iterations=outcome.iterations,
                    converged=outcome.converged,
                    rate_bps_hz=outcome.rate,
                    wall_ms=outcome.wall_ms,
                    failure=outcome.failure,
                    subgrid_fallback=outcome.subgrid_fallback,
                    channel_digest=digest,
                )
                for scheme, outcome in outcomes.items()
            ]
            for record in records:
                span.set_attribute(f"trial.rate.{record.scheme.value}", record.rate_bps_hz)
            logger.debug(
                "Trial %d: %s", trial,
                ", ".join(f"{r.scheme.value}={r.rate_bps_hz:.4f}" for r in records),
            )
            return records

        except Exception as e:
            span.set_status(Status(StatusCode.ERROR))
            span.record_exception(e)
            raise


def run_experiment(config: ExperimentConfig) -> List[ResultRecord]:
    """All trials of one configuration, sorted by (trial, scheme)."""
    with tracer.start_as_current_span("run_experiment") as span:
        try:
            logger.info(
                "🚀 Running %d trials of %s on a %dx%d surface (m_hat=%d, b=%d)",
                config.trials, ",".join(s.value for s in config.schemes),
                config.my, config.mz, config.m_hat, config.bits,
            )
            span.set_attribute("experiment.trials", config.trials)
            span.set_attribute("experiment.m", config.m)
            span.set_attribute("experiment.m_hat", config.m_hat)
            span.set_attribute("experiment.bits", config.bits)
            span.set_attribute("experiment.samples", config.sample_count)

            context = build_context(config)
            if config.workers > 1:
                with ThreadPoolExecutor(max_workers=config.workers) as pool:
                    batches = list(pool.map(partial(run_trial, context), range(config.trials)))
            else:
                batches = [run_trial(context, trial) for trial in range(config.trials)]

            records = sorted(
                (record for batch in batches for record in batch),
                key=lambda r: (r.trial, r.scheme.value),
            )
            failed = sum(record.failed for record in records)
            if failed:
                logger.warning("⚠️ %d records failed and carry rate 0", failed)
            trimmed = sum(record.subgrid_fallback for record in records)
            if trimmed:
                logger.info("📐 %d benchmark records used a trimmed sub-lattice", trimmed)
            logger.info("✅ Experiment finished with %d records", len(records))
            return records

        except Exception as e:
            logger.error("❌ Experiment failed: %s", e, exc_info=True)
            span.set_status(Status(StatusCode.ERROR))
            span.record_exception(e)
            raise


def run_sweep(configs: Sequence[ExperimentConfig]) -> List[ResultRecord]:
    """Run each sweep point in order and concatenate the records."""
    records: List[ResultRecord] = []
    for index, config in enumerate(configs, start=1):
        logger.info("📂 Sweep point %d/%d", index, len(configs))
        records.extend(run_experiment(config))
    return records
