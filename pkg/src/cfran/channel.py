"""Synthetic narrowband channel generation and measured-CSI import.

One realization holds the complex gains of a single subcarrier between all
M network antennas and K single-antenna users, plus the large-scale gains
they were drawn from. Large-scale model: log-distance path loss with
lognormal shadowing drawn per (O-RU, user) pair and shared by all antennas
of that O-RU (co-located antennas). Small-scale model: i.i.d. Rayleigh,
h_{m,k} = sqrt(beta_{m,k}) * z with z ~ CN(0, 1).

Generation is a pure function of (topology, k_users, rng_seed): positions,
shadowing, and small-scale fading are drawn in that fixed order from a
single PCG64 stream, so realizations are bit-reproducible and independent
setups can be generated concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ioutil import atomic_write_text
from .topology import Topology

DEFAULT_SHADOWING_SIGMA_DB = 4.0
DEFAULT_TARGET_MEDIAN_SNR_DB = 10.0

# Probe lattice used by calibrate_noise_power (deterministic surrogate for
# the uniform user drop when computing the median nearest-O-RU distance).
_CALIBRATION_GRID = 101


class ChannelFormatError(ValueError):
    """Malformed or inconsistent channel-dump file."""


@dataclass(frozen=True)
class PathLossParams:
    pl0_db: float = 40.0  # loss at the 1 m reference distance
    exponent: float = 3.0
    d_min_m: float = 1.0


@dataclass
class ChannelRealization:
    h: np.ndarray  # (M, K) complex channel gains
    beta_db: np.ndarray  # (M, K) large-scale gain in dB (path loss + shadowing)
    ue_positions: np.ndarray | None  # (K, 2) meters; None for imported CSI
    tx_power: float
    noise_power: float

    def __post_init__(self):
        if self.tx_power <= 0:
            raise ValueError(f"tx_power must be > 0, got {self.tx_power}")
        if self.noise_power <= 0:
            raise ValueError(f"noise_power must be > 0, got {self.noise_power}")
        if self.h.shape != self.beta_db.shape:
            raise ValueError(f"h {self.h.shape} and beta_db {self.beta_db.shape} disagree")
        if self.ue_positions is not None and len(self.ue_positions) != self.h.shape[1]:
            raise ValueError("ue_positions length must equal the user count")

    @property
    def n_antennas(self) -> int:
        return self.h.shape[0]

    @property
    def n_users(self) -> int:
        return self.h.shape[1]

    def beta_linear(self) -> np.ndarray:
        return 10.0 ** (self.beta_db / 10.0)


def path_loss_db(distance_m: float, model: PathLossParams = PathLossParams()) -> float:
    """Log-distance path loss PL0 + 10*n*log10(max(d, d_min) / 1 m) in dB."""
    if distance_m < 0:
        raise ValueError(f"distance must be >= 0, got {distance_m}")
    d = max(distance_m, model.d_min_m)
    return model.pl0_db + 10.0 * model.exponent * math.log10(d)


def setup_seed(master_seed: int, setup_index: int) -> int:
    """Per-setup stream seed: master XOR setup index, reduced to 64 bits."""
    return (int(master_seed) ^ int(setup_index)) % 2**64


def calibrate_noise_power(
    topology: Topology,
    pathloss: PathLossParams = PathLossParams(),
    target_median_snr_db: float = DEFAULT_TARGET_MEDIAN_SNR_DB,
    tx_power: float = 1.0,
) -> float:
    """Noise variance making the median per-antenna SNR to the nearest O-RU
    equal the target.

    The median nearest-O-RU distance is computed over a fixed 101x101 probe
    lattice spanning the area (deterministic; no RNG involved), shadowing
    excluded. The returned value is
    tx_power * 10^(-PL(d_median)/10) / 10^(target/10).
    """
    xs = np.linspace(0.0, topology.area_width_m, _CALIBRATION_GRID)
    ys = np.linspace(0.0, topology.area_height_m, _CALIBRATION_GRID)
    gx, gy = np.meshgrid(xs, ys)
    probes = np.column_stack([gx.ravel(), gy.ravel()])
    oru_pos = topology.oru_positions()
    d = np.linalg.norm(probes[:, None, :] - oru_pos[None, :, :], axis=2)
    d_med = float(np.median(d.min(axis=1)))
    pl = path_loss_db(d_med, pathloss)
    return tx_power * 10.0 ** (-pl / 10.0) / 10.0 ** (target_median_snr_db / 10.0)


def generate_realization(
    topology: Topology,
    k_users: int,
    rng_seed: int,
    pathloss: PathLossParams = PathLossParams(),
    shadowing_sigma_db: float = DEFAULT_SHADOWING_SIGMA_DB,
    tx_power: float = 1.0,
    noise_power: float | None = None,
    target_median_snr_db: float = DEFAULT_TARGET_MEDIAN_SNR_DB,
) -> ChannelRealization:
    """Draw one user drop and channel realization.

    Draw order (fixed, part of the reproducibility contract): user
    positions uniform over the area, then shadowing per (O-RU, user), then
    small-scale fading per (antenna, user). The shadowing of an O-RU is
    shared by all of its antennas. When noise_power is None it is
    calibrated deterministically via :func:`calibrate_noise_power`.
    """
    if k_users < 1:
        raise ValueError(f"k_users must be >= 1, got {k_users}")
    if noise_power is None:
        noise_power = calibrate_noise_power(topology, pathloss, target_median_snr_db, tx_power)

    rng = np.random.default_rng(rng_seed)
    m_total = topology.total_antennas
    n_orus = topology.n_orus

    positions = rng.uniform(
        low=(0.0, 0.0),
        high=(topology.area_width_m, topology.area_height_m),
        size=(k_users, 2),
    )
    shadowing = rng.normal(0.0, 1.0, size=(n_orus, k_users)) * shadowing_sigma_db

    # per-(O-RU, user) distance and large-scale gain, expanded per antenna
    oru_pos = topology.oru_positions()
    dist = np.linalg.norm(oru_pos[:, None, :] - positions[None, :, :], axis=2)
    dist = np.maximum(dist, pathloss.d_min_m)
    pl_db = pathloss.pl0_db + 10.0 * pathloss.exponent * np.log10(dist)
    beta_oru_db = -(pl_db + shadowing)
    counts = topology.oru_antenna_counts()
    beta_db = np.repeat(beta_oru_db, counts, axis=0)

    z = (rng.standard_normal((m_total, k_users)) + 1j * rng.standard_normal((m_total, k_users)))
    z *= math.sqrt(0.5)
    h = np.sqrt(10.0 ** (beta_db / 10.0)) * z

    return ChannelRealization(
        h=h,
        beta_db=beta_db,
        ue_positions=positions,
        tx_power=tx_power,
        noise_power=noise_power,
    )


def export_realization(realization: ChannelRealization, path: str) -> None:
    """Write a channel dump: header ``M K tx_power noise_power`` then one
    ``m k beta_db re im`` line per (antenna, user) pair.

    Values carry 17 significant digits so the round-trip is exact. The file
    is written atomically (temp file + rename).
    """
    m, k = realization.h.shape
    lines = [f"{m} {k} {realization.tx_power:.16e} {realization.noise_power:.16e}"]
    for mi in range(m):
        for ki in range(k):
            hv = realization.h[mi, ki]
            lines.append(
                f"{mi} {ki} {realization.beta_db[mi, ki]:.16e} {hv.real:.16e} {hv.imag:.16e}"
            )
    atomic_write_text(path, "\n".join(lines) + "\n")


def import_realization(path: str) -> ChannelRealization:
    """Load a channel dump, validating dimensions and finiteness.

    The dump does not carry user positions, so ue_positions is None.
    """
    with open(path, encoding="utf-8") as fh:
        raw_lines = [ln.strip() for ln in fh]
    lines = [ln for ln in raw_lines if ln]
    if not lines:
        raise ChannelFormatError(f"{path}: empty channel dump")

    header = lines[0].split()
    if len(header) != 4:
        raise ChannelFormatError(f"{path}: header must be 'M K tx_power noise_power'")
    try:
        m, k = int(header[0]), int(header[1])
        tx_power, noise_power = float(header[2]), float(header[3])
    except ValueError as exc:
        raise ChannelFormatError(f"{path}: malformed header: {lines[0]!r}") from exc
    if m < 1 or k < 1:
        raise ChannelFormatError(f"{path}: header dimensions must be >= 1, got M={m} K={k}")
    if not (math.isfinite(tx_power) and math.isfinite(noise_power)):
        raise ChannelFormatError(f"{path}: non-finite power in header")

    records = lines[1:]
    if len(records) != m * k:
        raise ChannelFormatError(
            f"{path}: dimension mismatch, header says {m}x{k}={m * k} records "
            f"but {len(records)} present"
        )

    h = np.zeros((m, k), dtype=complex)
    beta_db = np.zeros((m, k))
    seen = np.zeros((m, k), dtype=bool)
    for lineno, rec in enumerate(records, start=2):
        parts = rec.split()
        if len(parts) != 5:
            raise ChannelFormatError(f"{path}:{lineno}: expected 'm k beta_db re im', got {rec!r}")
        try:
            mi, ki = int(parts[0]), int(parts[1])
            b, re, im = float(parts[2]), float(parts[3]), float(parts[4])
        except ValueError as exc:
            raise ChannelFormatError(f"{path}:{lineno}: malformed record {rec!r}") from exc
        if not 0 <= mi < m or not 0 <= ki < k:
            raise ChannelFormatError(f"{path}:{lineno}: index ({mi}, {ki}) outside {m}x{k}")
        if seen[mi, ki]:
            raise ChannelFormatError(f"{path}:{lineno}: duplicate entry for ({mi}, {ki})")
        if not (math.isfinite(b) and math.isfinite(re) and math.isfinite(im)):
            raise ChannelFormatError(f"{path}:{lineno}: non-finite value in record {rec!r}")
        seen[mi, ki] = True
        beta_db[mi, ki] = b
        h[mi, ki] = re + 1j * im

    try:
        return ChannelRealization(
            h=h, beta_db=beta_db, ue_positions=None, tx_power=tx_power, noise_power=noise_power
        )
    except ValueError as exc:
        raise ChannelFormatError(f"{path}: {exc}") from exc
