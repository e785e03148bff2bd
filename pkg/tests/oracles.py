"""Independent reference computations used by the tests.

Everything here is built from first principles (explicit sums, dense
eigendecompositions, brute-force searches) and shares no code path with
the library: the library solves linear systems, the oracles do not.
"""

import numpy as np
import scipy.linalg


def interference_covariance(h_set, tx_power, noise_power, k):
    """Psi = sum_{i != k} p h_i h_i^H + sigma^2 I, built term by term."""
    h_set = np.atleast_2d(h_set)
    n_ant, n_users = h_set.shape
    psi = noise_power * np.eye(n_ant, dtype=complex)
    for i in range(n_users):
        if i != k:
            psi += tx_power * np.outer(h_set[:, i], h_set[:, i].conj())
    return psi


def rayleigh_quotient(v, h_set, tx_power, noise_power, k):
    """p |v^H h_k|^2 / (v^H Psi v) evaluated directly."""
    psi = interference_covariance(h_set, tx_power, noise_power, k)
    num = tx_power * abs(np.vdot(v, h_set[:, k])) ** 2
    den = float(np.real(v.conj() @ psi @ v))
    return num / den


def max_sinr_eig(h_set, tx_power, noise_power, k):
    """Maximum of the generalized Rayleigh quotient via eigendecomposition
    of (p h_k h_k^H, Psi)."""
    h_set = np.atleast_2d(h_set)
    a = tx_power * np.outer(h_set[:, k], h_set[:, k].conj())
    psi = interference_covariance(h_set, tx_power, noise_power, k)
    eigvals = scipy.linalg.eigh(a, psi, eigvals_only=True)
    return float(eigvals[-1])


def fused_quotient(w, branch_gains, branch_noise, tx_power, k):
    """Fused SINR at fixed weights, from the branch signal model alone."""
    comb = w.conj() @ branch_gains
    signal = tx_power * abs(comb[k]) ** 2
    interference = tx_power * sum(
        abs(comb[i]) ** 2 for i in range(branch_gains.shape[1]) if i != k
    )
    noise = float(np.sum(np.abs(w) ** 2 * branch_noise))
    return signal / (interference + noise)


def brute_force_fused_sinr(
    branch_gains,
    branch_noise,
    tx_power,
    k,
    rng,
    n_coarse=3000,
    n_refine=120,
    n_local=40,
):
    """Maximize the fused SINR by random weight-direction search plus a
    shrinking local refinement around the best direction found."""
    branch_gains = np.atleast_2d(branch_gains)
    n_branches = branch_gains.shape[0]
    candidates = rng.standard_normal((n_coarse, n_branches)) + 1j * rng.standard_normal(
        (n_coarse, n_branches)
    )
    best_val, best = -1.0, None
    for w in candidates:
        val = fused_quotient(w, branch_gains, branch_noise, tx_power, k)
        if val > best_val:
            best_val, best = val, w
    radius = 1.0
    scale = float(np.abs(best).mean())
    for _ in range(n_refine):
        perturbed = best[None, :] + radius * scale * (
            rng.standard_normal((n_local, n_branches))
            + 1j * rng.standard_normal((n_local, n_branches))
        )
        improved = False
        for w in perturbed:
            val = fused_quotient(w, branch_gains, branch_noise, tx_power, k)
            if val > best_val:
                best_val, best = val, w
                improved = True
        if not improved:
            radius *= 0.7
        if radius < 1e-7:
            break
    return best_val


def log_distance_path_loss(distance_m, pl0_db=40.0, exponent=3.0, d_min_m=1.0):
    import math

    return pl0_db + 10.0 * exponent * math.log10(max(distance_m, d_min_m))
