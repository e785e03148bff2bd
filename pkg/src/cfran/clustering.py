"""User-to-network assignment: serving O-DU selection, local/edge
categorization, and per-deployment-option serving antenna sets.

This is the controller-side step that precedes any combining: it works on
large-scale gains only, so assignments are stable within a setup and
invariant to rescaling a user's channel by a common factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .topology import LEVEL_GLOBAL, LEVEL_ODU, LEVEL_ORU, Topology, antenna_index_set

CATEGORY_LOCAL = "local"
CATEGORY_EDGE = "edge"


@dataclass(frozen=True)
class DeploymentOption:
    """One of the five deployment variants: which antennas inter-work when
    computing combining vectors, and whether O-DUs coordinate for edge users."""

    id: int
    interworking_level: str  # "oru" | "odu" | "global"
    inter_odu_coordination: bool

    def __post_init__(self):
        if self.interworking_level not in (LEVEL_ORU, LEVEL_ODU, LEVEL_GLOBAL):
            raise ValueError(f"unknown inter-working level {self.interworking_level!r}")


# Option 5 performs global processing in a single logical O-DU, so the
# coordination flag is recorded as absent.
DEPLOYMENT_OPTIONS: dict[int, DeploymentOption] = {
    1: DeploymentOption(1, LEVEL_ORU, False),
    2: DeploymentOption(2, LEVEL_ORU, True),
    3: DeploymentOption(3, LEVEL_ODU, False),
    4: DeploymentOption(4, LEVEL_ODU, True),
    5: DeploymentOption(5, LEVEL_GLOBAL, False),
}


def get_option(option_id: int) -> DeploymentOption:
    try:
        return DEPLOYMENT_OPTIONS[option_id]
    except KeyError:
        raise ValueError(f"unknown deployment option {option_id}; valid: 1..5") from None


@dataclass
class UserAssignment:
    serving_odu: np.ndarray  # (K,) O-DU id per user
    category: list[str]  # (K,) "local" | "edge"
    cooperating_odus: list[tuple[int, ...]]  # serving O-DU first

    def __post_init__(self):
        for k, coop in enumerate(self.cooperating_odus):
            if coop[0] != self.serving_odu[k]:
                raise ValueError(f"user {k}: serving O-DU must lead cooperating_odus")
            if self.category[k] == CATEGORY_LOCAL and len(coop) != 1:
                raise ValueError(f"user {k}: local users cooperate with exactly one O-DU")
            if self.category[k] == CATEGORY_EDGE and len(coop) < 2:
                raise ValueError(f"user {k}: edge users cooperate with at least two O-DUs")

    @property
    def n_users(self) -> int:
        return len(self.cooperating_odus)

    def edge_users(self) -> list[int]:
        return [k for k, c in enumerate(self.category) if c == CATEGORY_EDGE]


def odu_aggregate_gains(channel: ChannelRealization, topology: Topology) -> np.ndarray:
    """(n_odus, K) aggregate large-scale gain: per user, the sum of linear
    beta over each O-DU's antennas."""
    beta = channel.beta_linear()
    rows = []
    for odu in topology.odus:
        idx = antenna_index_set(topology, LEVEL_ODU, odu.id)
        rows.append(beta[idx, :].sum(axis=0))
    return np.array(rows)


def categorize_users(
    channel: ChannelRealization, topology: Topology, edge_threshold_db: float
) -> UserAssignment:
    """Pick each user's serving O-DU and label it local or edge.

    Serving O-DU = argmax of the aggregate gain (ties to the lowest id). A
    user is edge when the gain gap between best and second-best O-DU is at
    most edge_threshold_db; its cooperating set is then [best, second].
    Raising the threshold can only turn local users into edge users.
    """
    if edge_threshold_db < 0:
        raise ValueError(f"edge_threshold_db must be >= 0, got {edge_threshold_db}")
    gains = odu_aggregate_gains(channel, topology)
    n_odus, k_users = gains.shape

    serving = gains.argmax(axis=0)  # argmax takes the first (lowest id) on ties
    category: list[str] = []
    cooperating: list[tuple[int, ...]] = []
    for k in range(k_users):
        best = int(serving[k])
        if n_odus == 1:
            category.append(CATEGORY_LOCAL)
            cooperating.append((best,))
            continue
        rest = np.delete(np.arange(n_odus), best)
        second = int(rest[gains[rest, k].argmax()])
        gap_db = 10.0 * np.log10(gains[best, k] / gains[second, k])
        if gap_db <= edge_threshold_db:
            category.append(CATEGORY_EDGE)
            cooperating.append((best, second))
        else:
            category.append(CATEGORY_LOCAL)
            cooperating.append((best,))

    return UserAssignment(serving_odu=serving, category=category, cooperating_odus=cooperating)


def serving_odus(assignment: UserAssignment, option: DeploymentOption, ue: int) -> tuple[int, ...]:
    """O-DUs involved in serving one user: the cooperating set for edge
    users under coordinating options, otherwise just the serving O-DU."""
    if option.inter_odu_coordination and assignment.category[ue] == CATEGORY_EDGE:
        return assignment.cooperating_odus[ue]
    return (int(assignment.serving_odu[ue]),)


def serving_antenna_set(
    assignment: UserAssignment,
    option: DeploymentOption,
    topology: Topology,
    ue: int,
) -> np.ndarray:
    """Global antenna indices serving one user under a deployment option.

    Without inter-O-DU coordination every user is served by its serving
    O-DU's antennas regardless of category; with coordination, edge users
    get the union over their cooperating O-DUs; global processing serves
    everyone with all antennas.
    """
    if not 0 <= ue < assignment.n_users:
        raise ValueError(f"user index {ue} out of range")
    if option.interworking_level == LEVEL_GLOBAL:
        return antenna_index_set(topology, LEVEL_GLOBAL)
    parts = [antenna_index_set(topology, LEVEL_ODU, d) for d in serving_odus(assignment, option, ue)]
    return np.sort(np.concatenate(parts))


@dataclass(frozen=True)
class HybridClusters:
    """Per-user user-centric selection and the network-centric clusters it implies."""

    selected_orus: tuple[int, ...]  # strongest first
    involved_odus: tuple[int, ...]  # ascending; data-distribution targets


def hybrid_cluster_steps(
    channel: ChannelRealization, topology: Topology, n_select: int
) -> list[HybridClusters]:
    """Three-step hybrid clustering for every user.

    1. user-centric: pick the n_select O-RUs with the largest per-O-RU
       aggregate large-scale gain (ties to the lowest O-RU id);
    2. the O-DUs owning them are the serving network-centric clusters;
    3. report that O-DU set as the data-distribution targets.
    """
    if not 1 <= n_select <= topology.n_orus:
        raise ValueError(f"n_select must be in 1..{topology.n_orus}, got {n_select}")
    beta = channel.beta_linear()
    owners = topology.antenna_owner_orus()
    k_users = channel.n_users

    # (n_orus, K) per-O-RU aggregate gain
    gains = np.array(
        [beta[owners == oru.id, :].sum(axis=0) for oru in topology.orus]
    )

    out: list[HybridClusters] = []
    for k in range(k_users):
        order = np.argsort(-gains[:, k], kind="stable")
        chosen = tuple(int(i) for i in order[:n_select])
        odus = tuple(sorted({topology.odu_of_oru(i) for i in chosen}))
        out.append(HybridClusters(selected_orus=chosen, involved_odus=odus))
    return out
