"""A small Monte-Carlo campaign end to end.

Runs 30 setups of 10 users, prints the empirical CDF tail, the 5% outage
per deployment option with improvement ratios, the signaling-load picture,
and writes the CSV + JSON artifacts a full run would produce. The default
100-setup campaign is the same with n_setups=100 (or `cfran run`).
"""

import tempfile
from pathlib import Path

from cfran import (
    SimConfig,
    build_topology,
    empirical_cdf,
    get_option,
    improvement_table,
    outage_quantile,
    run_campaign,
    signaling_load,
    write_results_csv,
    write_summary_json,
)

cfg = SimConfig(n_setups=30, master_seed=42, threads=0)
topo = build_topology(cfg)
rs = run_campaign(cfg, topo)
print(f"{rs.se.shape[0]} options x {rs.n_setups} setups x {rs.k_users} users "
      f"= {rs.samples(1).size} SE samples per option\n")

ratios = improvement_table(rs)
print("option   5% outage   mean SE   improvement")
for opt in rs.options:
    samples = rs.samples(opt)
    print(f"  {opt}      {outage_quantile(samples, 0.05):7.3f}   {samples.mean():7.3f}"
          f"   x{ratios[opt]:.3f}")

pts = empirical_cdf(rs.samples(5))
print("\nlowest five CDF points for option 5 (SE, fraction):")
for x, f in pts[:5]:
    print(f"  {x:6.3f}  {f:.3f}")

assignment = rs.assignments[0]
print(f"\nsetup 0 has {len(assignment.edge_users())} edge user(s); signaling load:")
for opt in rs.options:
    load = signaling_load(get_option(opt), assignment, topo)
    streams = load.fronthaul_streams_per_oru
    print(f"  option {opt}: streams/O-RU {streams.tolist()}, "
          f"inter-O-DU scalars/symbol {load.inter_odu_scalars_per_symbol}, "
          f"MAP size {load.map_antenna_set_size_per_ue.max()}")

with tempfile.TemporaryDirectory() as tmp:
    csv_path = Path(tmp) / "results.csv"
    write_results_csv(rs, str(csv_path))
    write_summary_json(rs, topo, str(Path(tmp) / "summary.json"))
    lines = csv_path.read_text().splitlines()
    print(f"\nwrote {len(lines) - 1} CSV rows; first row: {lines[1]}")
    print("render the CDF figure from such a CSV with:  plot_cdf --csv results.csv --out cdf.png")
