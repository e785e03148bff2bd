"""Monte-Carlo campaign: per-setup SE samples, CDF/outage statistics,
improvement ratios, and signaling-load accounting per deployment option.

Setups are independent (seed-split per setup) and may be evaluated by a
process pool; results are keyed by (option, setup, user) so the output is
byte-identical regardless of worker count or completion order. SE is
computed from the optimal-combining SINR under perfect channel knowledge.
"""

from __future__ import annotations

import glob
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import (
    ChannelRealization,
    PathLossParams,
    calibrate_noise_power,
    generate_realization,
    import_realization,
    setup_seed,
)
from .clustering import (
    UserAssignment,
    categorize_users,
    get_option,
    serving_antenna_set,
    serving_odus,
)
from .config import SimConfig, config_echo
from .ioutil import atomic_write_text
from .map_engine import uplink_sinr
from .topology import LEVEL_GLOBAL, LEVEL_ODU, Topology, build_topology

SINR_MODEL = "optimal MMSE receive combining, perfect CSI (Rayleigh-quotient SINR)"

CSV_HEADER = "option,setup,ue,category,serving_antennas,sinr,se"


def uplink_se(sinr: float) -> float:
    """Per-subcarrier spectral efficiency log2(1 + sinr) in bits/s/Hz."""
    if sinr < 0:
        raise ValueError(f"sinr must be >= 0, got {sinr}")
    return math.log2(1.0 + sinr)


def empirical_cdf(samples) -> np.ndarray:
    """Empirical CDF points of the samples, as an (N, 2) array.

    Row i holds (x_(i+1), (i+1)/N) with x sorted ascending; ties are kept
    as separate points.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    if x.size == 0:
        raise ValueError("empirical_cdf requires at least one sample")
    frac = np.arange(1, x.size + 1) / x.size
    return np.column_stack([x, frac])


def outage_quantile(samples, q: float) -> float:
    """Lower empirical quantile: the ceil(q*N)-th smallest sample.

    No interpolation, so for N = 1000 and q = 0.05 this is exactly the
    50th order statistic. q*N within 1e-9 of an integer is snapped to it
    before the ceiling to keep binary float products like 0.05*1000 exact.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    if x.size == 0:
        raise ValueError("outage_quantile requires at least one sample")
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must be in (0, 1), got {q}")
    m = q * x.size
    nearest = round(m)
    rank = nearest if abs(m - nearest) <= 1e-9 * max(1.0, abs(nearest)) else math.ceil(m)
    rank = max(1, min(int(rank), x.size))
    return float(x[rank - 1])


@dataclass
class LoadReport:
    """Signaling-load accounting of one deployment option for one setup.

    Fronthaul counts scale with the number of user layers an O-RU carries,
    never with its antenna count. The inter-O-DU figures separate the
    per-symbol estimate exchange from the per-setup gain-row exchange (K
    complex values per edge user per extra cooperating O-DU).
    """

    option_id: int
    fronthaul_streams_per_oru: np.ndarray  # (n_orus,) user layers per O-RU per symbol
    inter_odu_scalars_per_symbol: int
    inter_odu_csi_complex_per_setup: int
    map_antenna_set_size_per_ue: np.ndarray  # (K,) inter-working unit size


def signaling_load(option, assignment: UserAssignment, topology: Topology) -> LoadReport:
    """Count fronthaul streams, inter-O-DU exchange, and MAP sizes."""
    k_users = assignment.n_users
    n_orus = topology.n_orus

    if option.interworking_level == LEVEL_GLOBAL:
        # single logical O-DU: every O-RU carries every user, nothing
        # crosses an inter-O-DU interface
        return LoadReport(
            option_id=option.id,
            fronthaul_streams_per_oru=np.full(n_orus, k_users, dtype=int),
            inter_odu_scalars_per_symbol=0,
            inter_odu_csi_complex_per_setup=0,
            map_antenna_set_size_per_ue=np.full(k_users, topology.total_antennas, dtype=int),
        )

    involved = [serving_odus(assignment, option, ue) for ue in range(k_users)]

    streams = np.zeros(n_orus, dtype=int)
    for oru in topology.orus:
        owner = topology.odu_of_oru(oru.id)
        streams[oru.id] = sum(owner in involved[ue] for ue in range(k_users))

    inter_scalars = 0
    inter_csi = 0
    if option.inter_odu_coordination:
        for ue in range(k_users):
            extra = len(involved[ue]) - 1
            inter_scalars += extra
            inter_csi += extra * k_users

    map_sizes = np.zeros(k_users, dtype=int)
    for ue in range(k_users):
        odus = [topology.odus[d] for d in involved[ue]]
        if option.interworking_level == LEVEL_ODU:
            map_sizes[ue] = max(sum(o.antennas for o in odu.orus) for odu in odus)
        else:
            map_sizes[ue] = max(oru.antennas for odu in odus for oru in odu.orus)

    return LoadReport(
        option_id=option.id,
        fronthaul_streams_per_oru=streams,
        inter_odu_scalars_per_symbol=inter_scalars,
        inter_odu_csi_complex_per_setup=inter_csi,
        map_antenna_set_size_per_ue=map_sizes,
    )


@dataclass
class ResultSet:
    """Per-(option, setup, user) SE/SINR samples plus the assignments that
    produced them and the resolved channel parameters."""

    options: tuple[int, ...]
    sinr: np.ndarray  # (n_options, n_setups, K)
    se: np.ndarray  # (n_options, n_setups, K)
    serving_antennas: np.ndarray  # (n_options, n_setups, K) int
    assignments: list[UserAssignment]
    config: SimConfig
    master_seed: int
    tx_power: float
    noise_power: float

    @property
    def n_setups(self) -> int:
        return self.se.shape[1]

    @property
    def k_users(self) -> int:
        return self.se.shape[2]

    def samples(self, option_id: int) -> np.ndarray:
        """Flat SE samples of one option (length n_setups * K)."""
        return self.se[self.options.index(option_id)].ravel()


def improvement_table(resultset: ResultSet, q: float = 0.05) -> dict[int, float]:
    """Outage improvement ratio of every option relative to option 1."""
    if 1 not in resultset.options:
        raise ValueError("improvement_table requires option 1 in the result set")
    base = outage_quantile(resultset.samples(1), q)
    if base <= 0:
        raise ValueError(f"option-1 outage quantile is {base}; ratios undefined")
    ratios = {}
    for opt in resultset.options:
        ratios[opt] = 1.0 if opt == 1 else outage_quantile(resultset.samples(opt), q) / base
    return ratios


@dataclass(frozen=True)
class _SetupTask:
    topology: Topology
    options: tuple[int, ...]
    k_users: int
    edge_threshold_db: float
    pathloss: PathLossParams
    shadowing_sigma_db: float
    tx_power: float
    noise_power: float
    master_seed: int
    setup_index: int
    import_file: str | None


def _evaluate_setup(task: _SetupTask) -> dict:
    """Evaluate one setup: draw (or load) the channel, assign users, and
    compute SINR/SE for every requested option and user. Pure function of
    the task, so execution order and worker count cannot change results."""
    if task.import_file is not None:
        realization = import_realization(task.import_file)
        if realization.n_antennas != task.topology.total_antennas:
            raise ValueError(
                f"{task.import_file}: {realization.n_antennas} antennas, "
                f"topology has {task.topology.total_antennas}"
            )
        if realization.n_users != task.k_users:
            raise ValueError(
                f"{task.import_file}: {realization.n_users} users, config says {task.k_users}"
            )
    else:
        realization = generate_realization(
            task.topology,
            task.k_users,
            setup_seed(task.master_seed, task.setup_index),
            pathloss=task.pathloss,
            shadowing_sigma_db=task.shadowing_sigma_db,
            tx_power=task.tx_power,
            noise_power=task.noise_power,
        )

    assignment = categorize_users(realization, task.topology, task.edge_threshold_db)
    n_opt = len(task.options)
    sinr = np.zeros((n_opt, task.k_users))
    serving = np.zeros((n_opt, task.k_users), dtype=int)
    for oi, option_id in enumerate(task.options):
        option = get_option(option_id)
        for ue in range(task.k_users):
            sinr[oi, ue] = uplink_sinr(option, realization, assignment, task.topology, ue)
            serving[oi, ue] = len(serving_antenna_set(assignment, option, task.topology, ue))
    return {
        "setup": task.setup_index,
        "sinr": sinr,
        "serving": serving,
        "assignment": assignment,
        "tx_power": realization.tx_power,
        "noise_power": realization.noise_power,
    }


def _import_files(path: str, n_setups: int) -> list[str]:
    if os.path.isdir(path):
        files = sorted(glob.glob(os.path.join(path, "channels_setup_*.txt")))
    elif os.path.isfile(path):
        files = [path]
    else:
        raise FileNotFoundError(f"channel import path not found: {path}")
    if len(files) < n_setups:
        raise ValueError(
            f"channel import needs n_setups={n_setups} dump files, found {len(files)} at {path}"
        )
    return files[:n_setups]


def run_campaign(config: SimConfig, topology: Topology | None = None) -> ResultSet:
    """Run the full Monte-Carlo campaign described by the config.

    Per-setup seeds are master_seed XOR setup index, so any subset of
    setups can be reproduced independently. threads = 1 forces in-process
    evaluation; 0 uses all cores. Worker count does not affect results.
    """
    if topology is None:
        topology = build_topology(config)
    pathloss = PathLossParams(config.pl0_db, config.pl_exponent, config.d_min_m)
    noise_power = config.noise_power
    if noise_power is None:
        noise_power = calibrate_noise_power(
            topology, pathloss, config.target_median_snr_db, config.tx_power
        )

    import_files = (
        _import_files(config.channel_import, config.n_setups) if config.channel_import else None
    )

    tasks = [
        _SetupTask(
            topology=topology,
            options=config.options,
            k_users=config.k_users,
            edge_threshold_db=config.edge_threshold_db,
            pathloss=pathloss,
            shadowing_sigma_db=config.shadowing_sigma_db,
            tx_power=config.tx_power,
            noise_power=noise_power,
            master_seed=config.master_seed,
            setup_index=s,
            import_file=import_files[s] if import_files else None,
        )
        for s in range(config.n_setups)
    ]

    workers = config.threads if config.threads > 0 else (os.cpu_count() or 1)
    if workers == 1 or config.n_setups == 1:
        records = [_evaluate_setup(t) for t in tasks]
    else:
        chunk = max(1, config.n_setups // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_evaluate_setup, tasks, chunksize=chunk))

    records.sort(key=lambda r: r["setup"])
    n_opt = len(config.options)
    sinr = np.stack([r["sinr"] for r in records], axis=1).reshape(
        n_opt, config.n_setups, config.k_users
    )
    serving = np.stack([r["serving"] for r in records], axis=1).reshape(
        n_opt, config.n_setups, config.k_users
    )
    se = np.log2(1.0 + sinr)
    return ResultSet(
        options=config.options,
        sinr=sinr,
        se=se,
        serving_antennas=serving,
        assignments=[r["assignment"] for r in records],
        config=config,
        master_seed=config.master_seed,
        tx_power=records[0]["tx_power"],
        noise_power=records[0]["noise_power"],
    )


def results_csv_text(resultset: ResultSet) -> str:
    """Render the per-sample CSV: one row per (option, setup, user), floats
    at 17 significant digits for lossless round-trips."""
    lines = [CSV_HEADER]
    for oi, option_id in enumerate(resultset.options):
        for s in range(resultset.n_setups):
            assignment = resultset.assignments[s]
            for ue in range(resultset.k_users):
                lines.append(
                    f"{option_id},{s},{ue},{assignment.category[ue]},"
                    f"{resultset.serving_antennas[oi, s, ue]},"
                    f"{resultset.sinr[oi, s, ue]:.16e},{resultset.se[oi, s, ue]:.16e}"
                )
    return "\n".join(lines) + "\n"


def write_results_csv(resultset: ResultSet, path: str) -> None:
    atomic_write_text(path, results_csv_text(resultset))


def _load_summary(resultset: ResultSet, topology: Topology, option_id: int) -> dict:
    """Mean signaling load over setups for the JSON summary."""
    option = get_option(option_id)
    reports = [signaling_load(option, a, topology) for a in resultset.assignments]
    return {
        "fronthaul_streams_per_oru_mean": [
            float(x) for x in np.mean([r.fronthaul_streams_per_oru for r in reports], axis=0)
        ],
        "inter_odu_scalars_per_symbol_mean": float(
            np.mean([r.inter_odu_scalars_per_symbol for r in reports])
        ),
        "inter_odu_csi_complex_per_setup_mean": float(
            np.mean([r.inter_odu_csi_complex_per_setup for r in reports])
        ),
        "map_antenna_set_size_max": int(
            max(r.map_antenna_set_size_per_ue.max() for r in reports)
        ),
    }


def summary_dict(resultset: ResultSet, topology: Topology, q: float = 0.05) -> dict:
    """Campaign summary: config echo, per-option outage/improvement/load,
    and the per-setup assignment echo."""
    ratios = (
        improvement_table(resultset, q) if 1 in resultset.options else dict.fromkeys(resultset.options)
    )
    per_option = {}
    for opt in resultset.options:
        samples = resultset.samples(opt)
        per_option[str(opt)] = {
            "outage_5pct": outage_quantile(samples, q),
            "improvement_ratio": ratios[opt],
            "mean_se": float(samples.mean()),
            "load_report": _load_summary(resultset, topology, opt),
        }
    setups = []
    for s, a in enumerate(resultset.assignments):
        setups.append(
            {
                "setup": s,
                "serving_odu": [int(x) for x in a.serving_odu],
                "category": list(a.category),
                "cooperating_odus": [list(c) for c in a.cooperating_odus],
            }
        )
    return {
        "seed": resultset.master_seed,
        "sinr_model": SINR_MODEL,
        "outage_level": q,
        "tx_power": resultset.tx_power,
        "noise_power": resultset.noise_power,
        "config": config_echo(resultset.config),
        "options": per_option,
        "setups": setups,
    }


def write_summary_json(resultset: ResultSet, topology: Topology, path: str, q: float = 0.05) -> None:
    atomic_write_text(path, json.dumps(summary_dict(resultset, topology, q), indent=2) + "\n")
