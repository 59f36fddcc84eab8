"""Analytic Gaussian-trace correlators on frequency towers.

For a diagonal Gaussian weight e^{-sum_k lambda_k n_k} the only
nonvanishing pair value is <a†_k a_l> = delta_{kl}/(e^{lambda_k} - 1).
The slab action weight corresponds to lambda = -i tau (w - E + i e_i)
per frequency mode, with a small imaginary part e_i > 0 securing
convergence.  Summing a full frequency tower against these per-mode
values resums *exactly* into geometric closed forms:

    <a(t) a†(t')>  = (1/N) sum_w e^{-i w dt} (1 + corr(w))
                   = w_E^{(t-t') mod N} / (1 - w_E^N),
    w_E = e^{-i tau (E - i e_i)},

which converges to the time-ordered theta(t-t') e^{-iE(t-t')} as the
grid is refined (image terms die like e^{-e_i T}).  The Feynman
propagator is assembled from two such mode terms via the partial
fraction i/(p0-E) - i/(p0+E) = 2E i/(p0^2-E^2).

Signs of tau and e_i are not restricted here: flipping e_i (and tau)
produces the anti-time-ordered branch, which is exactly the complex
conjugate — the hermiticity-flip property tests rely on evaluating
that branch.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .grids import ModeGrid, tower_slices


class PoleError(ZeroDivisionError):
    """Gaussian pair value requested at the lambda = 0 pole."""


@dataclass(frozen=True)
class GaussianWeight:
    """Diagonal Gaussian weight exponents lambda_k (Re lambda > 0)."""

    lambdas: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(complex(z) for z in self.lambdas))
        if any(z.real <= 0 for z in self.lambdas):
            raise ValueError("every exponent needs Re(lambda) > 0 for trace convergence")


def gaussian_pair_correlator(w: GaussianWeight, k: int, l: int) -> complex:
    """<a†_k a_l> = delta_{kl} / (exp(lambda_k) - 1)."""
    if k != l:
        return 0.0 + 0.0j
    lam = w.lambdas[k]
    if abs(lam) < 1e-12:
        raise PoleError(f"pair correlator pole at lambda = {lam}")
    return 1.0 / (cmath.exp(lam) - 1.0)


def _mode_corr(tau: float, gap: float, eps_i: float) -> complex:
    """1 / (exp(-i tau (gap + i eps_i)) - 1) — the <a†a>-type mode value."""
    den = cmath.exp(-1j * tau * (gap + 1j * eps_i)) - 1.0
    if den == 0:
        raise PoleError("mode correlator pole: tau*(gap + i eps_i) = 0 mod 2 pi")
    return 1.0 / den


def tau_mode_correlator(grid: ModeGrid, tau: float, eps_i: float, p: int, k: int) -> complex:
    """delta_{pk} / (exp(-i tau (w_p - E_p + i eps_i)) - 1).

    The Kronecker delta stands in for the continuum delta normalization.
    Off shell, tau * value -> i/(w - E + i eps_i) as tau -> 0 with O(tau)
    error; on shell the value is 1/(e^{tau eps_i} - 1) ~ 1/(tau eps_i).
    """
    if p != k:
        return 0.0 + 0.0j
    return _mode_corr(tau, grid.gap(p), eps_i)


def _tower(grid: ModeGrid, sp) -> tuple[list[int], int]:
    groups = tower_slices(grid)
    key = (sp,) if isinstance(sp, int) else tuple(sp)
    if key not in groups:
        raise ValueError(f"grid has no frequency tower at spatial index {key}")
    idxs = groups[key]
    return idxs, len(idxs)


def two_time_contraction(
    grid: ModeGrid, tau: float, eps_i: float, t: int, tp: int, sp=()
) -> complex:
    """<a(t,p) a†(t',p)> on the tower: (1/N) sum_w e^{-i w tau (t-t')}(1 + corr(w)).

    t, t' are slice labels (physical times tau*t).  Equal time follows
    the t -> t'^+ convention (annihilator right), giving 1 up to
    e^{-eps_i T} corrections; t < t' is the anti-ordered side and is
    suppressed to 0 at the same rate.
    """
    idxs, N = _tower(grid, sp)
    dt = tau * (t - tp)
    total = 0.0 + 0.0j
    for k in idxs:
        w = grid.omega(k)
        total += cmath.exp(-1j * w * dt) * (1.0 + _mode_corr(tau, grid.gap(k), eps_i))
    return total / N


def two_time_closed_form(
    N: int, tau: float, eps_i: float, E: float, dt_slices: int
) -> complex:
    """Exact geometric resummation w^{dt mod N}/(1 - w^N), w = e^{-i tau(E - i eps_i)}.

    Equals two_time_contraction on a full tower to machine precision;
    kept separate as an independent cross-check and for large-N use.
    """
    w = cmath.exp(-1j * tau * (E - 1j * eps_i))
    return w ** (dt_slices % N) / (1.0 - w**N)


def feynman_kernel(grid: ModeGrid, tau: float, eps_i: float, dt_slices: int, sp=()) -> complex:
    """Single-tower time-ordered kernel: (1/N) sum_w e^{-i w dt} [corr- - corr+].

    corr- is the mode correlator at gap w - E + i eps_i and corr+ the
    one at gap w + E - i eps_i; their difference is the discrete partial
    fraction giving i/(p0^2 - E^2 + i eps_i) * 2E.  The tau -> 0 limit
    at fixed T is theta-ordered e^{-iE|dt|} plus O(e^{-eps_i T}) images;
    the equal-time value is 1 (so the propagator carries 1/(2E) there).
    """
    idxs, N = _tower(grid, sp)
    dt = tau * dt_slices
    E = grid.energy(idxs[0])
    total = 0.0 + 0.0j
    for k in idxs:
        w = grid.omega(k)
        c_minus = _mode_corr(tau, w - E, eps_i)
        c_plus = _mode_corr(tau, w + E, -eps_i)
        total += cmath.exp(-1j * w * dt) * (c_minus - c_plus)
    return total / N


def feynman_kernel_closed(
    N: int, tau: float, eps_i: float, E: float, dt_slices: int
) -> complex:
    """Exact geometric resummation of the tower kernel.

    Equals feynman_kernel on a full N-tower to machine precision (the
    property tests pin this); O(1) instead of O(N), which the
    perturbative lattice sums rely on.  With w = e^{-i tau (E - i e_i)}
    the two mode series resum to (w^{r} + w^{s}) / (1 - w^N) where
    r is the smallest positive representative of dt mod N and
    s = (-dt) mod N.
    """
    w = cmath.exp(-1j * tau * (E - 1j * eps_i))
    r = ((dt_slices - 1) % N) + 1
    s = (-dt_slices) % N
    return (w**r + w**s) / (1.0 - w**N)


def feynman_propagator_grid(
    grid: ModeGrid, tau: float, eps_i: float, x: tuple[int, int], y: tuple[int, int],
    m: float | None = None,
) -> complex:
    """Time-ordered two-point value between spacetime lattice points.

    x and y are (time-slice, site) pairs on the grid's site lattice.
    The value is the spatial mode sum

        (1/M) sum_p e^{i p (x-y)} (1/(2 E_p)) K_p(t_x - t_y)

    with K_p the tower kernel above; it converges to the standard
    oracle <0|T phi(x) phi(y)|0> of the free lattice Hamiltonian.  When
    `m` is given it overrides the grid's dispersion mass for modes
    without explicit energy overrides.
    """
    if grid.M_sites is None:
        raise ValueError("propagator needs a grid with a site lattice (M_sites)")
    work = grid if m is None else ModeGrid(grid.T, grid.modes, m, grid.M_sites,
                                           grid.energy_override)
    (tx, sx), (ty, sy) = x, y
    groups = tower_slices(work)
    M = work.M_sites
    total = 0.0 + 0.0j
    for sp, idxs in groups.items():
        if len(sp) != 1:
            raise ValueError("site-lattice propagator expects 1-d spatial indices")
        p = 2.0 * math.pi * sp[0] / M
        E = work.energy(idxs[0])
        if E <= 0:
            raise ValueError("propagator needs strictly positive mode energies")
        kern = feynman_kernel(work, tau, eps_i, tx - ty, sp)
        total += cmath.exp(1j * p * (sx - sy)) / (2.0 * E) * kern
    return total / M
