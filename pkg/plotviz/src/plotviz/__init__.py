"""Render per-deployment-option SE CDF figures from a results CSV.

Deliberately decoupled from the simulator package: the only contract is
the CSV schema (header ``option,setup,ue,category,serving_antennas,sinr,se``).
"""

from .plot_cdf import PlotSpec, empirical_cdf_points, read_se_samples, render_cdf

__all__ = ["PlotSpec", "empirical_cdf_points", "read_se_samples", "render_cdf"]
