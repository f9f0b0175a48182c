"""Monte Carlo twin of the three-fold coincidence logic.

Every laser slot (12.5 ns at 80 MHz) is a valid trigger. Per slot the herald
detector fires with probability p_herald; given a herald the retrieved photon
reaches the signal detector with probability eta_h * eta_fc * decay, and an
unconverted input photon leaks through with probability leak_efficiency.
Independently, a noise photon is detected in every slot with probability
p_noise. Each detector registers at most one click per slot.

Slots are simulated in fixed blocks of ``cfg.block_slots``. Block ``b`` of
stream ``s`` draws from a Philox generator keyed by (seed, s, b), so any
partition of the blocks over worker threads merges to the same counts.
Only the slots that fire are materialized.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import ExperimentConfig
from .dispersion import DIAMOND, SellmeierModel, conversion_efficiency
from .exceptions import ConfigError, ShapeError
from .memory_model import storage_decay
from .spectral_core import PulseSpec
from .validation import ErrorChecker

logger = logging.getLogger(__name__)

DEFAULT_OFFSETS = (-2, -1, 0, 1, 2)

# above this probability a block draws one uniform per slot instead of
# sampling the firing slots directly
DENSE_LIMIT = 0.02


@dataclass(frozen=True)
class TrialOutcome:
    slot_index: int
    herald_fired: bool
    signal_fired: bool
    signal_is_noise: bool

    def __post_init__(self):
        if self.signal_is_noise and not self.signal_fired:
            raise ValueError(f'Slot {self.slot_index}: a noise click needs the signal detector to fire')


@dataclass(frozen=True)
class CountRecord:
    n_slots: int
    n_herald: int
    n_signal: int
    n_coincidence: int

    def __post_init__(self):
        ErrorChecker.check_count(self.n_slots, 'n_slots')
        ErrorChecker.check_count(self.n_herald, 'n_herald')
        ErrorChecker.check_count(self.n_signal, 'n_signal')
        ErrorChecker.check_count(self.n_coincidence, 'n_coincidence')
        if not self.n_coincidence <= min(self.n_herald, self.n_signal) <= self.n_slots:
            raise ValueError(f'Inconsistent counts: {self}')

    def __add__(self, other: CountRecord) -> CountRecord:
        return CountRecord(
            self.n_slots + other.n_slots,
            self.n_herald + other.n_herald,
            self.n_signal + other.n_signal,
            self.n_coincidence + other.n_coincidence,
        )


@dataclass(frozen=True)
class CoincidenceHistogram:
    bin_offsets: Tuple[int, ...]
    counts: Tuple[int, ...]
    slot_period_ns: float = 12.5

    def __post_init__(self):
        if len(self.bin_offsets) != len(self.counts):
            raise ShapeError(f'{len(self.bin_offsets)} bin offsets but {len(self.counts)} counts')
        if len(set(self.bin_offsets)) != len(self.bin_offsets):
            raise ShapeError(f'Duplicate bin offsets in {self.bin_offsets}')
        for count in self.counts:
            ErrorChecker.check_count(count, 'histogram count')

    @property
    def offsets_ns(self) -> List[float]:
        return [offset * self.slot_period_ns for offset in self.bin_offsets]

    def count(self, offset: int) -> int:
        try:
            return self.counts[self.bin_offsets.index(offset)]
        except ValueError:
            raise ShapeError(f'Histogram has no bin at offset {offset}') from None


@dataclass(frozen=True)
class SlotProbabilities:
    """Per-slot detection probabilities of one experimental setting."""
    p_herald: float
    p_converted: float  # given a herald
    p_leak: float  # given a herald
    p_noise: float

    def __post_init__(self):
        for name in ('p_herald', 'p_converted', 'p_leak', 'p_noise'):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0 or value > 1:
                raise ConfigError(f'derived probability {value} outside [0, 1]', field=name)

    @property
    def p_photon(self) -> float:
        """Probability that a heralded slot carries a photon to the signal detector."""
        return 1.0 - (1.0 - self.p_converted) * (1.0 - self.p_leak)

    @property
    def p_coincidence(self) -> float:
        return self.p_herald * (1.0 - (1.0 - self.p_photon) * (1.0 - self.p_noise))

    @property
    def p_signal(self) -> float:
        return self.p_coincidence + (1.0 - self.p_herald) * self.p_noise

    @property
    def p_accidental(self) -> float:
        """Coincidence probability between a signal and a herald in different slots."""
        return self.p_signal * self.p_herald


def slot_probabilities(cfg: ExperimentConfig, read: PulseSpec, delay: float, model: SellmeierModel = DIAMOND,
                       controls_on: bool = True, eta_fc: Optional[float] = None) -> SlotProbabilities:
    """
    Detection probabilities for a read setting.

    :param eta_fc: overrides the phase-matched conversion efficiency
    :param controls_on: False models the background run without read/write
        fields: no conversion and only the dark part of the noise floor
    """
    if not controls_on:
        return SlotProbabilities(cfg.p_herald, 0.0, cfg.leak_efficiency, cfg.p_dark)
    if eta_fc is None:
        eta_fc = conversion_efficiency(model, read.center, cfg)
    return SlotProbabilities(
        p_herald=cfg.p_herald,
        p_converted=cfg.eta_h * eta_fc * storage_decay(delay, cfg),
        p_leak=cfg.leak_efficiency,
        p_noise=cfg.p_noise,
    )


def block_rng(seed: int, stream: int, block_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream, block_index))))


def _bernoulli_slots(rng: np.random.Generator, size: int, p: float) -> np.ndarray:
    """Sorted indices of the slots in [0, size) that fire with probability p."""
    if p <= 0:
        return np.empty(0, dtype=np.int64)
    if p >= DENSE_LIMIT:
        return np.flatnonzero(rng.random(size) < p).astype(np.int64)
    n_fired = int(rng.binomial(size, p))
    return np.sort(rng.choice(size, n_fired, replace=False)).astype(np.int64)


@dataclass
class _BlockEvents:
    start: int
    size: int
    heralds: np.ndarray
    signals: np.ndarray
    photons: np.ndarray


def _simulate_block(probs: SlotProbabilities, seed: int, stream: int, block_index: int,
                    block_slots: int, n_slots: int) -> _BlockEvents:
    start = block_index * block_slots
    size = min(block_slots, n_slots - start)
    rng = block_rng(seed, stream, block_index)

    heralds = _bernoulli_slots(rng, size, probs.p_herald)
    draws = rng.random((heralds.size, 2))
    photons = heralds[(draws[:, 0] < probs.p_converted) | (draws[:, 1] < probs.p_leak)]
    noise = _bernoulli_slots(rng, size, probs.p_noise)
    signals = np.union1d(photons, noise)
    return _BlockEvents(start, size, heralds + start, signals + start, photons + start)


def _pair_count(signals: np.ndarray, heralds: np.ndarray, offset: int) -> int:
    """Signals in slot t + offset paired with heralds in slot t."""
    return int(np.intersect1d(signals, heralds + offset, assume_unique=True).size)


@dataclass
class _BlockTally:
    record: CountRecord
    counts: np.ndarray
    edge_heralds: np.ndarray
    edge_signals: np.ndarray


def _tally_block(events: _BlockEvents, offsets: Sequence[int], reach: int) -> _BlockTally:
    counts = np.array([_pair_count(events.signals, events.heralds, d) for d in offsets], dtype=np.int64)
    record = CountRecord(events.size, int(events.heralds.size), int(events.signals.size),
                         _pair_count(events.signals, events.heralds, 0))
    lo, hi = events.start + reach, events.start + events.size - reach
    near_edge_h = (events.heralds < lo) | (events.heralds >= hi)
    near_edge_s = (events.signals < lo) | (events.signals >= hi)
    return _BlockTally(record, counts, events.heralds[near_edge_h], events.signals[near_edge_s])


@dataclass(frozen=True)
class SimulationResult:
    record: CountRecord
    histogram: CoincidenceHistogram
    probabilities: SlotProbabilities


def simulate(cfg: ExperimentConfig, read: PulseSpec, delay: float, n_slots: int, seed: int,
             model: SellmeierModel = DIAMOND, *, stream: int = 0, controls_on: bool = True,
             eta_fc: Optional[float] = None, offsets: Sequence[int] = DEFAULT_OFFSETS,
             workers: int = 1) -> SimulationResult:
    """
    Run the slot simulation once and tally both the count record and the
    coincidence histogram.

    :param n_slots: number of laser slots (trigger opportunities)
    :param seed: 64-bit seed; with ``stream`` it fixes every outcome
    :param stream: independent stream index, e.g. one per scenario point
    :param workers: threads sharing the blocks; never changes the result
    """
    ErrorChecker.check_count(n_slots, 'n_slots', minimum=1)
    ErrorChecker.check_seed(seed)
    ErrorChecker.check_count(stream, 'stream')
    ErrorChecker.check_count(workers, 'workers', minimum=1)
    offsets = tuple(int(d) for d in offsets)
    probs = slot_probabilities(cfg, read, delay, model, controls_on, eta_fc)
    block_slots = cfg.block_slots
    n_blocks = -(-n_slots // block_slots)
    reach = max(abs(d) for d in offsets)

    def run(block_index: int) -> _BlockTally:
        return _tally_block(_simulate_block(probs, seed, stream, block_index, block_slots, n_slots), offsets, reach)

    logger.debug('Simulating %d slots in %d blocks on %d worker(s), seed=%d stream=%d',
                 n_slots, n_blocks, workers, seed, stream)
    if workers == 1:
        tallies = [run(b) for b in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            tallies = list(executor.map(run, range(n_blocks)))

    record = CountRecord(0, 0, 0, 0)
    counts = np.zeros(len(offsets), dtype=np.int64)
    for tally in tallies:
        record = record + tally.record
        counts += tally.counts

    # pairs whose herald and signal fall in different blocks
    if n_blocks > 1:
        edge_h = np.concatenate([t.edge_heralds for t in tallies])
        edge_s = np.concatenate([t.edge_signals for t in tallies])
        for i, d in enumerate(offsets):
            matched = np.intersect1d(edge_s, edge_h + d, assume_unique=True)
            counts[i] += int(np.count_nonzero(matched // block_slots != (matched - d) // block_slots))

    histogram = CoincidenceHistogram(offsets, tuple(int(c) for c in counts), cfg.slot_period_ns)
    return SimulationResult(record, histogram, probs)


def simulate_slots(cfg: ExperimentConfig, read: PulseSpec, delay: float, n_slots: int, seed: int,
                   model: SellmeierModel = DIAMOND, **kwargs) -> CountRecord:
    """Trigger, singles and coincidence counts for one setting."""
    return simulate(cfg, read, delay, n_slots, seed, model, **kwargs).record


def coincidence_histogram(cfg: ExperimentConfig, read: PulseSpec, delay: float, n_slots: int, seed: int,
                          model: SellmeierModel = DIAMOND, **kwargs) -> CoincidenceHistogram:
    """Coincidences per relative slot offset between signal and herald clicks."""
    return simulate(cfg, read, delay, n_slots, seed, model, **kwargs).histogram


def iter_outcomes(cfg: ExperimentConfig, read: PulseSpec, delay: float, n_slots: int, seed: int,
                  model: SellmeierModel = DIAMOND, *, stream: int = 0, controls_on: bool = True,
                  eta_fc: Optional[float] = None) -> Iterator[TrialOutcome]:
    """Yield every slot in which at least one detector fired, in slot order."""
    ErrorChecker.check_count(n_slots, 'n_slots', minimum=1)
    ErrorChecker.check_seed(seed)
    probs = slot_probabilities(cfg, read, delay, model, controls_on, eta_fc)
    n_blocks = -(-n_slots // cfg.block_slots)
    for block_index in range(n_blocks):
        events = _simulate_block(probs, seed, stream, block_index, cfg.block_slots, n_slots)
        fired = np.union1d(events.heralds, events.signals)
        herald = np.isin(fired, events.heralds, assume_unique=True)
        signal = np.isin(fired, events.signals, assume_unique=True)
        photon = np.isin(fired, events.photons, assume_unique=True)
        for slot, h, s, p in zip(fired.tolist(), herald.tolist(), signal.tolist(), photon.tolist()):
            yield TrialOutcome(slot, h, s, s and not p)


def accidental_estimate(h: CoincidenceHistogram) -> float:
    """Mean of the +-1 and +-2 slot bins (the +-12.5 ns and +-25 ns time bins)."""
    return float(np.mean([h.count(d) for d in (-2, -1, 1, 2)]))


@dataclass(frozen=True)
class SubtractedCounts:
    value: float
    error: float


def background_subtract(counts_on: float, counts_off: float) -> SubtractedCounts:
    """
    Subtract a control-fields-off measurement from the control-fields-on one.

    Both must cover the same acquisition. The result keeps its sign, with
    Poisson error sqrt(on + off).
    """
    ErrorChecker.check_non_negative(counts_on, 'counts_on')
    ErrorChecker.check_non_negative(counts_off, 'counts_off')
    return SubtractedCounts(float(counts_on - counts_off), math.sqrt(counts_on + counts_off))


def subtract_accidentals(h: CoincidenceHistogram) -> SubtractedCounts:
    """
    Zero-delay coincidences minus the accidental estimate of the same histogram.

    The estimate averages four side bins, so it contributes a quarter of its
    Poisson variance: error = sqrt(center + accidentals / 4).
    """
    center = h.count(0)
    accidentals = accidental_estimate(h)
    return SubtractedCounts(float(center - accidentals), math.sqrt(center + accidentals / 4.0))
