"""The combining math behind the five deployment options, on one drop.

For a single edge user this script computes the uplink SINR five ways:
per-O-RU combining fused at the O-DU (option 1), the same plus the
cooperating O-DU's estimate (option 2), joint per-O-DU combining without
and with cooperation (options 3/4), and global combining (option 5). The
chain 1 <= 2, 1 <= 3 <= 4 <= 5, 2 <= 4 holds realization by realization;
2 vs 3 can go either way.
"""

import numpy as np

from cfran import (
    SimConfig,
    assemble_dl_transmit,
    block_partition,
    build_topology,
    categorize_users,
    fuse_estimates,
    generate_realization,
    get_option,
    joint_sinr,
    map_matrices,
    mmse_combiner,
    uplink_se,
    uplink_sinr,
)

topo = build_topology(SimConfig())
real = generate_realization(topo, k_users=10, rng_seed=7)
assignment = categorize_users(real, topo, edge_threshold_db=6.0)

edge = assignment.edge_users()
ue = edge[0] if edge else 0
print(f"user {ue}: {assignment.category[ue]}, cooperating {assignment.cooperating_odus[ue]}\n")

for opt_id in (1, 2, 3, 4, 5):
    option = get_option(opt_id)
    part = block_partition(assignment, option, topo, ue)
    sinr = uplink_sinr(option, real, assignment, topo, ue)
    print(f"option {opt_id}: {len(part.serving):2d} serving antennas in "
          f"{part.n_blocks} block(s) -> SINR {10 * np.log10(sinr):6.2f} dB, "
          f"SE {uplink_se(sinr):5.2f} bits/s/Hz")

# the same fusion step, by hand: two single-antenna branches, no interference
print("\ntwo interference-free branches with unit gain and unit noise fuse to SINR 2:")
report = fuse_estimates(np.array([[1.0 + 0j], [1.0 + 0j]]), np.array([1.0, 1.0]), 1.0, 0)
print(f"  fused SINR = {report.sinr:.6f}, weights = {np.round(report.weights, 3)}")

# block-constrained combining never beats joint combining on the same set
h_odu = real.h[:32, :]
v = mmse_combiner(h_odu[:8, :], real.tx_power, real.noise_power, ue)
print("\nper-O-RU MMSE vector has", len(v), "entries; joint SINR over the O-DU is an upper bound:")
print(f"  joint over 32 antennas: {joint_sinr(h_odu, real.tx_power, real.noise_power, ue):.2f}")

# downlink side: per-unit MAP matrices and transmit-vector assembly
mats = map_matrices(real, assignment, get_option(3), topo)
mm = mats[int(assignment.serving_odu[ue])]
symbols = np.zeros(len(mm.served_users), dtype=complex)
symbols[mm.served_users.index(ue)] = 1.0 + 0j
tx = assemble_dl_transmit(symbols, mm.matrix)
print(f"\nDL: O-DU {mm.unit_id} serves users {mm.served_users};")
print(f"    unit-symbol transmit vector has {len(tx)} entries, power {np.linalg.norm(tx)**2:.3e}")
