"""Network geometry: O-DUs, their O-RUs, antenna indexing, coverage regions.

The default layout is an indoor rectangle split into equal-width vertical
strips (one per O-DU). Each O-DU places its O-RUs on a regular grid inside
its strip; with the default config (2 O-DUs x 4 O-RUs x 8 antennas) this
yields a 4x2 grid of O-RUs over a 60 m x 30 m area and 64 antennas total.

Global antenna indices are assigned contiguously in O-RU id order, so the
antenna set of any node (O-RU, O-DU, whole network) is a contiguous index
range. All structures are immutable after construction and safe to share
across parallel workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ConfigError, SimConfig

ORU_CATEGORY_A = "A"  # no precoding capability on the radio unit
ORU_CATEGORY_B = "B"  # radio unit can apply precoding locally

LEVEL_ORU = "oru"
LEVEL_ODU = "odu"
LEVEL_GLOBAL = "global"
INTERWORKING_LEVELS = (LEVEL_ORU, LEVEL_ODU, LEVEL_GLOBAL)


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0


@dataclass(frozen=True)
class ORU:
    id: int
    position: tuple[float, float]
    antennas: int
    category: str = ORU_CATEGORY_B


@dataclass(frozen=True)
class ODU:
    id: int
    orus: tuple[ORU, ...]
    coverage_region: Rect


@dataclass(frozen=True)
class Topology:
    odus: tuple[ODU, ...]
    area_width_m: float
    area_height_m: float
    carrier_frequency_hz: float = 2.6e9
    bandwidth_hz: float = 20e6

    @property
    def orus(self) -> tuple[ORU, ...]:
        return tuple(oru for odu in self.odus for oru in odu.orus)

    @property
    def n_orus(self) -> int:
        return sum(len(odu.orus) for odu in self.odus)

    @property
    def total_antennas(self) -> int:
        return sum(oru.antennas for odu in self.odus for oru in odu.orus)

    def oru_positions(self) -> np.ndarray:
        """(n_orus, 2) array of O-RU positions in O-RU id order."""
        return np.array([oru.position for oru in self.orus], dtype=float)

    def oru_antenna_counts(self) -> np.ndarray:
        return np.array([oru.antennas for oru in self.orus], dtype=int)

    def oru_antenna_start(self, oru_id: int) -> int:
        """First global antenna index owned by the given O-RU."""
        counts = self.oru_antenna_counts()
        if not 0 <= oru_id < len(counts):
            raise ValueError(f"unknown O-RU id {oru_id}")
        return int(counts[:oru_id].sum())

    def odu_of_oru(self, oru_id: int) -> int:
        for odu in self.odus:
            if any(oru.id == oru_id for oru in odu.orus):
                return odu.id
        raise ValueError(f"unknown O-RU id {oru_id}")

    def antenna_owner_orus(self) -> np.ndarray:
        """Length-M array mapping each global antenna index to its O-RU id."""
        return np.repeat([oru.id for oru in self.orus], self.oru_antenna_counts())


def _oru_grid(region: Rect, n_orus: int) -> list[tuple[float, float]]:
    """Place n_orus O-RUs on a centered grid inside the region.

    One row for a single O-RU, two rows otherwise; an odd O-RU count > 1
    does not fit the two-row grid and is rejected.
    """
    if n_orus == 1:
        rows, cols = 1, 1
    elif n_orus % 2 == 0:
        rows, cols = 2, n_orus // 2
    else:
        raise ConfigError(
            f"orus_per_odu={n_orus} not placeable on the per-O-DU grid "
            "(must be 1 or even)"
        )
    xs = [region.x0 + region.width * (2 * c + 1) / (2 * cols) for c in range(cols)]
    ys = [region.y0 + region.height * (2 * r + 1) / (2 * rows) for r in range(rows)]
    # column-major so ids increase left-to-right, bottom-to-top within a column
    return [(x, y) for x in xs for y in ys]


def build_topology(config: SimConfig) -> Topology:
    """Construct the network geometry from a validated config.

    O-DU coverage regions are equal-width vertical strips of the area;
    each O-DU's O-RUs sit on a centered grid inside its strip. Global O-RU
    ids and antenna indices are contiguous per O-DU. Deterministic:
    identical config always yields an identical topology.
    """
    if config.area_width_m <= 0 or config.area_height_m <= 0:
        raise ConfigError("area dimensions must be positive")
    if config.n_odus < 1 or config.orus_per_odu < 1 or config.antennas_per_oru < 1:
        raise ConfigError("n_odus, orus_per_odu, antennas_per_oru must all be >= 1")

    strip_w = config.area_width_m / config.n_odus
    odus = []
    oru_id = 0
    for d in range(config.n_odus):
        region = Rect(d * strip_w, 0.0, (d + 1) * strip_w, config.area_height_m)
        positions = _oru_grid(region, config.orus_per_odu)
        orus = []
        for pos in positions:
            orus.append(ORU(id=oru_id, position=pos, antennas=config.antennas_per_oru))
            oru_id += 1
        odus.append(ODU(id=d, orus=tuple(orus), coverage_region=region))

    topo = Topology(
        odus=tuple(odus),
        area_width_m=config.area_width_m,
        area_height_m=config.area_height_m,
        carrier_frequency_hz=config.carrier_frequency_hz,
        bandwidth_hz=config.bandwidth_hz,
    )
    _check_invariants(topo)
    return topo


def _check_invariants(topo: Topology) -> None:
    area = Rect(0.0, 0.0, topo.area_width_m, topo.area_height_m)
    ids = [oru.id for oru in topo.orus]
    if ids != sorted(ids) or len(set(ids)) != len(ids):
        raise ValueError("O-RU ids must be globally unique and contiguous by O-DU")
    for oru in topo.orus:
        if not area.contains(*oru.position):
            raise ValueError(f"O-RU {oru.id} at {oru.position} lies outside the area")
        if oru.antennas < 1:
            raise ValueError(f"O-RU {oru.id} must have at least one antenna")


def antenna_index_set(topology: Topology, level: str, owner_id: int | None = None) -> np.ndarray:
    """Global antenna indices of all antennas under one node.

    level "oru" / "odu" returns the contiguous index range of that O-RU /
    O-DU; "global" returns all M indices (owner_id ignored).
    """
    if level not in INTERWORKING_LEVELS:
        raise ValueError(f"unknown inter-working level {level!r}")
    if level == LEVEL_GLOBAL:
        return np.arange(topology.total_antennas)
    if level == LEVEL_ORU:
        for oru in topology.orus:
            if oru.id == owner_id:
                start = topology.oru_antenna_start(oru.id)
                return np.arange(start, start + oru.antennas)
        raise ValueError(f"unknown O-RU id {owner_id}")
    for odu in topology.odus:
        if odu.id == owner_id:
            parts = [antenna_index_set(topology, LEVEL_ORU, oru.id) for oru in odu.orus]
            return np.concatenate(parts)
    raise ValueError(f"unknown O-DU id {owner_id}")
