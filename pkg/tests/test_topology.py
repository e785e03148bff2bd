import dataclasses

import numpy as np
import pytest

from cfran.config import ConfigError, SimConfig
from cfran.topology import antenna_index_set, build_topology


def test_default_topology_matches_reference_scenario(default_topology):
    # 2 O-DUs x 4 O-RUs x 8 antennas = 64 antennas
    topo = default_topology
    assert len(topo.odus) == 2
    assert topo.n_orus == 8
    assert all(oru.antennas == 8 for oru in topo.orus)
    assert topo.total_antennas == 64
    assert topo.carrier_frequency_hz == 2.6e9
    assert topo.bandwidth_hz == 20e6


def test_default_oru_grid_positions(default_topology):
    # 4x2 grid over the 60 m x 30 m area: (7.5 + 15 i, 7.5 + 15 j)
    expected = {(7.5 + 15 * i, 7.5 + 15 * j) for i in range(4) for j in range(2)}
    assert {oru.position for oru in default_topology.orus} == expected


def test_minimal_single_antenna_topology():
    cfg = SimConfig(n_odus=1, orus_per_odu=1, antennas_per_oru=1)
    topo = build_topology(cfg)
    assert topo.total_antennas == 1
    (oru,) = topo.orus
    assert oru.position == (30.0, 15.0)  # area center
    region = topo.odus[0].coverage_region
    assert (region.x0, region.y0, region.x1, region.y1) == (0.0, 0.0, 60.0, 30.0)


def test_coverage_regions_bisect_area(default_topology):
    left, right = (odu.coverage_region for odu in default_topology.odus)
    assert (left.x0, left.x1) == (0.0, 30.0)
    assert (right.x0, right.x1) == (30.0, 60.0)
    assert left.height == right.height == 30.0


def test_antenna_index_set_levels(default_topology):
    topo = default_topology
    assert antenna_index_set(topo, "oru", 0).tolist() == list(range(8))
    assert antenna_index_set(topo, "odu", 0).tolist() == list(range(32))
    assert antenna_index_set(topo, "global").tolist() == list(range(64))


@pytest.mark.parametrize(
    "cfg",
    [
        SimConfig(),
        SimConfig(n_odus=3, orus_per_odu=2, antennas_per_oru=4, area_width_m=90.0),
        SimConfig(n_odus=1, orus_per_odu=6, antennas_per_oru=3),
    ],
)
def test_index_sets_partition(cfg):
    topo = build_topology(cfg)
    all_idx = antenna_index_set(topo, "global")
    odu_union = np.concatenate([antenna_index_set(topo, "odu", d.id) for d in topo.odus])
    assert sorted(odu_union.tolist()) == all_idx.tolist()
    for odu in topo.odus:
        oru_union = np.concatenate(
            [antenna_index_set(topo, "oru", oru.id) for oru in odu.orus]
        )
        assert sorted(oru_union.tolist()) == antenna_index_set(topo, "odu", odu.id).tolist()


def test_antenna_indices_contiguous_by_oru(default_topology):
    topo = default_topology
    start = 0
    for oru in topo.orus:
        idx = antenna_index_set(topo, "oru", oru.id)
        assert idx.tolist() == list(range(start, start + oru.antennas))
        start += oru.antennas


def test_build_is_deterministic():
    cfg = SimConfig(n_odus=2, orus_per_odu=4)
    assert build_topology(cfg) == build_topology(cfg)


def test_rejects_bad_dimensions():
    with pytest.raises(ConfigError):
        build_topology(dataclasses.replace(SimConfig(), area_width_m=0.0))
    with pytest.raises(ConfigError):
        build_topology(dataclasses.replace(SimConfig(), area_height_m=-5.0))


def test_rejects_unplaceable_oru_count():
    with pytest.raises(ConfigError, match="not placeable"):
        build_topology(dataclasses.replace(SimConfig(), orus_per_odu=3))


def test_unknown_owner_and_level(default_topology):
    with pytest.raises(ValueError):
        antenna_index_set(default_topology, "odu", 99)
    with pytest.raises(ValueError):
        antenna_index_set(default_topology, "oru", -1)
    with pytest.raises(ValueError):
        antenna_index_set(default_topology, "rack", 0)


def test_positions_inside_area():
    cfg = SimConfig(n_odus=4, orus_per_odu=2, area_width_m=100.0, area_height_m=20.0)
    topo = build_topology(cfg)
    for oru in topo.orus:
        x, y = oru.position
        assert 0.0 <= x <= 100.0 and 0.0 <= y <= 20.0
