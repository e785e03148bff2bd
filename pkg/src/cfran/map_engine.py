"""Multi-antenna processing: MMSE combining, block-local estimate fusion,
per-deployment-option uplink SINR, and downlink transmit-vector assembly.

Conventions. h is an (antennas x users) complex matrix restricted to
whatever antenna set a function operates on; every user transmits with the
same power p; noise is white with per-antenna variance sigma^2 > 0, which
makes every matrix inverted here Hermitian positive definite. Solves use
Cholesky factorization (scipy ``assume_a="pos"``) and a factorization
failure propagates as an error; no regularization is ever applied.

For a user k on an antenna set A the interference-plus-noise covariance is

    Psi = sum_{i != k} p h_i h_i^H + sigma^2 I,

and the optimal (MMSE) combining SINR over A is p h_k^H Psi^{-1} h_k. When
processing is restricted to disjoint antenna blocks, each block contributes
a scalar estimate whose effective per-user gains feed a second, optimally
weighted combining stage (fusion). Fused SINR never exceeds the joint SINR
over the same antennas, and never falls below any single branch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .clustering import DeploymentOption, UserAssignment, serving_odus
from .channel import ChannelRealization
from .topology import LEVEL_GLOBAL, LEVEL_ODU, LEVEL_ORU, Topology, antenna_index_set


def _solve_hpd(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # Hermitian positive definite solve; scipy raises LinAlgError if the
    # Cholesky factorization fails, which callers treat as fatal.
    return scipy.linalg.solve(matrix, rhs, assume_a="pos")


def mmse_combiner(
    h_block: np.ndarray, tx_power: float, noise_power: float, k: int
) -> np.ndarray:
    """MMSE combining vector v = C^{-1} h_k on one antenna block.

    C = sum_i p h_i h_i^H + sigma^2 I uses the channels of all users on the
    block's antennas. No normalization is applied; the combining SINR is
    invariant to scaling v anyway.
    """
    if noise_power <= 0:
        raise ValueError(f"noise_power must be > 0, got {noise_power}")
    h_block = np.atleast_2d(np.asarray(h_block))
    n_ant = h_block.shape[0]
    cov = tx_power * (h_block @ h_block.conj().T) + noise_power * np.eye(n_ant)
    return _solve_hpd(cov, h_block[:, k])


def combiner_sinr(
    v: np.ndarray, h_set: np.ndarray, tx_power: float, noise_power: float, k: int
) -> float:
    """SINR achieved by an arbitrary combiner v on h_set:
    p |v^H h_k|^2 / (v^H Psi v). Scale-invariant in v."""
    h_set = np.atleast_2d(np.asarray(h_set))
    v = np.asarray(v)
    h_k = h_set[:, k]
    others = np.delete(h_set, k, axis=1)
    signal = tx_power * abs(np.vdot(v, h_k)) ** 2
    cross = others.conj().T @ v
    denom = tx_power * float(np.real(cross.conj() @ cross)) + noise_power * float(
        np.real(np.vdot(v, v))
    )
    return float(signal / denom)


def joint_sinr(h_set: np.ndarray, tx_power: float, noise_power: float, k: int) -> float:
    """Optimal combining SINR over an antenna set: p h_k^H Psi^{-1} h_k."""
    if noise_power <= 0:
        raise ValueError(f"noise_power must be > 0, got {noise_power}")
    h_set = np.atleast_2d(np.asarray(h_set))
    n_ant = h_set.shape[0]
    h_k = h_set[:, k]
    others = np.delete(h_set, k, axis=1)
    psi = tx_power * (others @ others.conj().T) + noise_power * np.eye(n_ant)
    x = _solve_hpd(psi, h_k)
    # the quadratic form is real and >= 0 up to rounding
    return max(float(tx_power * np.real(np.vdot(h_k, x))), 0.0)


@dataclass
class FusionReport:
    """Outcome of one fusion stage for one user.

    gains/noise describe the fused branch itself (effective per-user gain
    row and noise of the combined estimate), so a report can feed the next
    fusion stage; this is exactly the payload exchanged between O-DUs for
    an edge user: signal estimate, gain row, noise scalar.
    """

    branch_gains_k: np.ndarray  # a: (J,) effective gain of user k per branch
    covariance: np.ndarray  # F: (J, J) Hermitian PD interference+noise
    weights: np.ndarray  # w = F^{-1} a
    sinr: float  # p a^H F^{-1} a
    fused_gains: np.ndarray  # (K,) gain row of the fused estimate
    fused_noise: float  # noise variance of the fused estimate


def fuse_estimates(
    branch_gains: np.ndarray, branch_noise: np.ndarray, tx_power: float, k: int
) -> FusionReport:
    """Optimally combine per-branch scalar estimates of user k's symbol.

    branch_gains[j, i] is branch j's effective gain for user i (combining
    vector applied to the channel), branch_noise[j] its noise variance;
    noises are independent across branches because branches use disjoint
    antennas. F_{j,j'} = sum_{i != k} p g_{j,i} conj(g_{j',i}) + delta
    branch_noise_j, w = F^{-1} a, fused SINR = p a^H F^{-1} a.
    """
    gains = np.atleast_2d(np.asarray(branch_gains, dtype=complex))
    noise = np.atleast_1d(np.asarray(branch_noise, dtype=float))
    n_branches = gains.shape[0]
    if n_branches < 1:
        raise ValueError("at least one branch required")
    if noise.shape != (n_branches,):
        raise ValueError(f"branch_noise shape {noise.shape} != ({n_branches},)")
    if np.any(noise <= 0):
        raise ValueError("branch noises must be > 0")

    a = gains[:, k]
    others = np.delete(gains, k, axis=1)
    cov = tx_power * (others @ others.conj().T) + np.diag(noise)
    w = _solve_hpd(cov, a)
    sinr = max(float(tx_power * np.real(np.vdot(a, w))), 0.0)
    fused_gains = w.conj() @ gains
    fused_noise = float(np.real(np.vdot(w, noise * w)))
    return FusionReport(
        branch_gains_k=a,
        covariance=cov,
        weights=w,
        sinr=sinr,
        fused_gains=fused_gains,
        fused_noise=fused_noise,
    )


@dataclass
class BlockPartition:
    """Serving antenna set of one user split into inter-working blocks."""

    serving: np.ndarray  # ordered global antenna indices
    blocks: list[np.ndarray]  # disjoint, union = serving

    def __post_init__(self):
        cat = np.concatenate(self.blocks) if self.blocks else np.array([], dtype=int)
        if len(np.unique(cat)) != len(cat):
            raise ValueError("blocks must be disjoint")
        if set(cat.tolist()) != set(np.asarray(self.serving).tolist()):
            raise ValueError("blocks must cover exactly the serving set")

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)


def block_partition(
    assignment: UserAssignment,
    option: DeploymentOption,
    topology: Topology,
    ue: int,
) -> BlockPartition:
    """Inter-working block structure of one user's serving antennas."""
    involved = serving_odus(assignment, option, ue)
    if option.interworking_level == LEVEL_GLOBAL:
        all_idx = antenna_index_set(topology, LEVEL_GLOBAL)
        return BlockPartition(serving=all_idx, blocks=[all_idx])
    blocks: list[np.ndarray] = []
    for d in involved:
        if option.interworking_level == LEVEL_ODU:
            blocks.append(antenna_index_set(topology, LEVEL_ODU, d))
        else:
            odu = topology.odus[d]
            blocks.extend(antenna_index_set(topology, LEVEL_ORU, oru.id) for oru in odu.orus)
    serving = np.sort(np.concatenate(blocks))
    return BlockPartition(serving=serving, blocks=blocks)


def _block_branch(
    h: np.ndarray, block: np.ndarray, tx_power: float, noise_power: float, ue: int
) -> tuple[np.ndarray, float]:
    """Run the block-local MMSE combiner; return its effective gain row and
    output noise variance."""
    h_block = h[block, :]
    v = mmse_combiner(h_block, tx_power, noise_power, ue)
    gains = v.conj() @ h_block
    noise = noise_power * float(np.real(np.vdot(v, v)))
    return gains, noise


def _odu_stage(
    h: np.ndarray,
    topology: Topology,
    odu_id: int,
    level: str,
    tx_power: float,
    noise_power: float,
    ue: int,
) -> tuple[np.ndarray, float]:
    """Effective gain row and noise of one O-DU's estimate of user ue.

    At O-DU inter-working the estimate comes from the joint combiner over
    the O-DU's antennas; at O-RU inter-working the O-DU first fuses its
    per-O-RU branch estimates.
    """
    if level == LEVEL_ODU:
        block = antenna_index_set(topology, LEVEL_ODU, odu_id)
        return _block_branch(h, block, tx_power, noise_power, ue)
    odu = topology.odus[odu_id]
    rows, noises = [], []
    for oru in odu.orus:
        block = antenna_index_set(topology, LEVEL_ORU, oru.id)
        g, n = _block_branch(h, block, tx_power, noise_power, ue)
        rows.append(g)
        noises.append(n)
    report = fuse_estimates(np.array(rows), np.array(noises), tx_power, ue)
    return report.fused_gains, report.fused_noise


def uplink_sinr(
    option: DeploymentOption,
    channel: ChannelRealization,
    assignment: UserAssignment,
    topology: Topology,
    ue: int,
) -> float:
    """Uplink SINR of one user under a deployment option.

    Option 1/3: serving O-DU only, per-O-RU combining fused at the O-DU /
    joint per-O-DU combining. Option 2/4: same for local users; edge users
    additionally get the cooperating O-DU's estimate fused over the
    inter-O-DU interface (two-stage for option 2: per-O-RU fusion inside
    each O-DU, then across O-DUs). Option 5: joint combining over all
    antennas.
    """
    p = channel.tx_power
    s2 = channel.noise_power
    h = channel.h
    level = option.interworking_level

    if level == LEVEL_GLOBAL:
        return joint_sinr(h, p, s2, ue)

    involved = serving_odus(assignment, option, ue)

    if len(involved) == 1 and level == LEVEL_ODU:
        block = antenna_index_set(topology, LEVEL_ODU, involved[0])
        return joint_sinr(h[block, :], p, s2, ue)

    # one branch per involved O-DU; with a single O-DU at O-RU inter-working
    # this final fusion is a one-branch identity over the per-O-RU stage
    rows, noises = [], []
    for d in involved:
        g, n = _odu_stage(h, topology, d, level, p, s2, ue)
        rows.append(g)
        noises.append(n)
    report = fuse_estimates(np.array(rows), np.array(noises), p, ue)
    return report.sinr


@dataclass
class MapMatrix:
    """Combining/precoding matrix of one inter-working unit: one column per
    user the unit serves."""

    level: str
    unit_id: int
    antenna_indices: np.ndarray
    served_users: tuple[int, ...]
    matrix: np.ndarray  # (unit antennas, len(served_users))


def map_matrices(
    channel: ChannelRealization,
    assignment: UserAssignment,
    option: DeploymentOption,
    topology: Topology,
) -> list[MapMatrix]:
    """Per-unit MAP matrices under a deployment option.

    A unit serves a user when the user's serving antenna set contains the
    unit's antennas; columns are that unit's MMSE vectors for its users.
    """
    p, s2 = channel.tx_power, channel.noise_power
    level = option.interworking_level

    if level == LEVEL_GLOBAL:
        units = [(0, antenna_index_set(topology, LEVEL_GLOBAL))]
    elif level == LEVEL_ODU:
        units = [(odu.id, antenna_index_set(topology, LEVEL_ODU, odu.id)) for odu in topology.odus]
    else:
        units = [
            (oru.id, antenna_index_set(topology, LEVEL_ORU, oru.id)) for oru in topology.orus
        ]

    out: list[MapMatrix] = []
    for unit_id, idx in units:
        if level == LEVEL_GLOBAL:
            served = tuple(range(assignment.n_users))
        else:
            owner = unit_id if level == LEVEL_ODU else topology.odu_of_oru(unit_id)
            served = tuple(
                ue
                for ue in range(assignment.n_users)
                if owner in serving_odus(assignment, option, ue)
            )
        h_unit = channel.h[idx, :]
        cols = [mmse_combiner(h_unit, p, s2, ue) for ue in served]
        matrix = np.column_stack(cols) if cols else np.zeros((len(idx), 0), dtype=complex)
        out.append(
            MapMatrix(
                level=level,
                unit_id=unit_id,
                antenna_indices=idx,
                served_users=served,
                matrix=matrix,
            )
        )
    return out


def assemble_dl_transmit(symbols: np.ndarray, map_matrix: np.ndarray) -> np.ndarray:
    """Downlink transmit vector: each user's symbol times its MAP vector,
    summed over users — a plain matrix-vector product."""
    symbols = np.asarray(symbols)
    map_matrix = np.atleast_2d(np.asarray(map_matrix))
    if map_matrix.shape[1] != symbols.shape[0]:
        raise ValueError(
            f"map_matrix has {map_matrix.shape[1]} columns but {symbols.shape[0]} symbols given"
        )
    return map_matrix @ symbols
