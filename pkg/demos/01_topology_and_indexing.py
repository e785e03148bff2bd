"""Tour of the network geometry.

Builds the default deployment (2 O-DUs, 4 O-RUs each, 8 antennas per O-RU
on a 60 m x 30 m floor), shows how coverage regions tile the area, and how
global antenna indices nest: O-RU ranges partition each O-DU's range, and
O-DU ranges partition the full 64-antenna set.
"""

from cfran import SimConfig, antenna_index_set, build_topology

cfg = SimConfig()
topo = build_topology(cfg)

print(f"{len(topo.odus)} O-DUs, {topo.n_orus} O-RUs, {topo.total_antennas} antennas")
print(f"area {topo.area_width_m:.0f} m x {topo.area_height_m:.0f} m, "
      f"{topo.carrier_frequency_hz / 1e9:.1f} GHz carrier\n")

for odu in topo.odus:
    region = odu.coverage_region
    print(f"O-DU {odu.id}: region x in [{region.x0:.1f}, {region.x1:.1f}]")
    for oru in odu.orus:
        idx = antenna_index_set(topo, "oru", oru.id)
        print(f"  O-RU {oru.id} at {oru.position}: antennas {idx[0]}..{idx[-1]}")

print("\nantenna sets by inter-working level for O-DU 0:")
print("  oru 0   ->", antenna_index_set(topo, "oru", 0))
print("  odu 0   ->", antenna_index_set(topo, "odu", 0))
print("  global  ->", len(antenna_index_set(topo, "global")), "indices")

# a skinnier deployment: three O-DUs side by side
wide = build_topology(SimConfig(n_odus=3, orus_per_odu=2, area_width_m=90.0))
print(f"\n3-O-DU variant: {wide.n_orus} O-RUs at", [o.position for o in wide.orus])
