"""Distance-dependent lossy downlink.

The radio is rated for 1.2 km. Loss is zero inside ``clear_fraction`` of the
rated range, certain beyond ``cutoff_fraction`` of it, and ramps linearly in
between. Frames that get through the ramp zone are occasionally corrupted by
one flipped byte.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class Outcome(str, enum.Enum):
    DELIVERED = "DELIVERED"
    LOST = "LOST"
    CORRUPTED = "CORRUPTED"


@dataclass
class LinkModel:
    nominal_range: float = 1200.0  # m
    clear_fraction: float = 0.8
    cutoff_fraction: float = 1.5
    seed: int = 0
    corrupt_probability: float = 0.01
    _rng: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.nominal_range > 0:
            raise ValueError(f"LinkModel.nominal_range must be > 0, got {self.nominal_range}")
        if not 0 < self.clear_fraction < self.cutoff_fraction:
            raise ValueError("LinkModel needs 0 < clear_fraction < cutoff_fraction")
        if not 0 <= self.corrupt_probability <= 1:
            raise ValueError("LinkModel.corrupt_probability must be in [0, 1]")
        self._rng = np.random.default_rng(self.seed)

    @property
    def clear_range(self) -> float:
        return self.clear_fraction * self.nominal_range

    @property
    def cutoff_range(self) -> float:
        return self.cutoff_fraction * self.nominal_range

    def loss_probability(self, distance: float) -> float:
        lo, hi = self.clear_range, self.cutoff_range
        if distance <= lo:
            return 0.0
        if distance >= hi:
            return 1.0
        return (distance - lo) / (hi - lo)

    def transmit(self, line: bytes, distance: float) -> "ChannelEvent":
        return channel_transmit(line, distance, self)


@dataclass(frozen=True)
class ChannelEvent:
    seq: int | None
    outcome: Outcome
    distance: float
    payload: bytes = b""  # what the receiver gets; empty when lost


def _seq_of(line: bytes) -> int | None:
    parts = line.split(b",", 2)
    if len(parts) > 1 and parts[1].isdigit():
        return int(parts[1])
    return None


def channel_transmit(line: bytes, distance: float, link: LinkModel, seq: int | None = None) -> ChannelEvent:
    """Push one encoded line through the channel.

    Random draws per call: one uniform for loss; inside the ramp zone a
    delivered frame takes one more uniform for corruption and, if corrupted,
    a byte index and a non-zero XOR mask.
    """
    if distance < 0:
        raise ValueError(f"distance must be >= 0, got {distance}")
    if seq is None:
        seq = _seq_of(line)
    rng = link._rng
    p_loss = link.loss_probability(distance)
    if rng.random() < p_loss:
        return ChannelEvent(seq, Outcome.LOST, distance)
    if distance > link.clear_range and line and rng.random() < link.corrupt_probability:
        buf = bytearray(line)
        idx = int(rng.integers(len(buf)))
        buf[idx] ^= int(rng.integers(1, 256))
        return ChannelEvent(seq, Outcome.CORRUPTED, distance, bytes(buf))
    return ChannelEvent(seq, Outcome.DELIVERED, distance, line)
