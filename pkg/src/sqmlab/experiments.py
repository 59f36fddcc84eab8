"""Registered verification experiments behind the `sqmlab` CLI.

Each experiment is a pure function params -> result dict with

    {"cases": [case, ...], "summary": {...}}

where every case carries its inputs, the computed value, the oracle
value, absolute/relative errors, and a pass flag judged against the
tolerances in params.  All tolerances live in the experiment's
DEFAULTS (overridable via config file or flags), never inline in the
case logic.  Randomness comes only from numpy's default_rng seeded
with params["seed"], so a fixed config reproduces a report exactly.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import clock, constraints, fermions, fock, gaussian, oracles, spacetime, timeslab, wick
from .grids import ModeGrid, frequency_tower
from .linalg import rand_hermitian, rand_ket


def _case(key: str, inputs: dict, value, oracle, tol: float, scale: float = 1.0) -> dict:
    """Uniform case record; pass iff |value - oracle| <= tol * scale."""
    value = complex(value)
    oracle = complex(oracle)
    abs_err = abs(value - oracle)
    rel_err = abs_err / max(abs(oracle), 1e-300)
    return {
        "case": key,
        "inputs": inputs,
        "value": value,
        "oracle": oracle,
        "abs_err": abs_err,
        "rel_err": rel_err,
        "tol": tol * scale,
        "pass": bool(abs_err <= tol * scale),
    }


def _finish(cases: list[dict]) -> dict:
    cases = sorted(cases, key=lambda c: c["case"])
    failures = sum(not c["pass"] for c in cases)
    return {
        "cases": cases,
        "summary": {
            "cases": len(cases),
            "failures": failures,
            "max_abs_err": max((c["abs_err"] for c in cases), default=0.0),
            "all_pass": failures == 0,
        },
    }


# ---------------------------------------------------------------------------
# clock / slice-lattice / spacetime-state experiments


def run_paw_conditioning(params: dict) -> dict:
    rng = np.random.default_rng(params["seed"])
    cases = []
    for i in range(params["cases"]):
        d = int(rng.integers(params["d_min"], params["d_max"] + 1))
        N = int(rng.integers(2, params["n_max_slices"] + 1))
        cs = clock.ClockSystem(N, params["eps"], rand_hermitian(rng, d), rand_ket(rng, d))
        O = rand_hermitian(rng, d)
        t = int(rng.integers(0, N))
        value = clock.conditioned_expectation(cs, O, t)
        oracle = cs.evolved(t).expectation(O)
        cases.append(_case(
            f"conditioning[{i:02d}]", {"d": d, "N": N, "t": t},
            value, oracle, params["tol"],
        ))
    return _finish(cases)


def run_trace_theorem(params: dict) -> dict:
    rng = np.random.default_rng(params["seed"])
    cases = []
    for i in range(params["cases"]):
        d = int(rng.choice(params["dims"]))
        N = int(rng.integers(1, params["n_max_slices"] + 1))
        qa = timeslab.build_action(
            timeslab.SliceLayout(d=d, N=N, eps=params["eps"]), rand_hermitian(rng, d)
        )
        k = int(rng.integers(0, min(params["max_inserts"], N) + 1))
        slots = rng.choice(N, size=k, replace=False)
        inserts = [(rand_hermitian(rng, d), int(t)) for t in slots]
        lhs = timeslab.trace_theorem_lhs(qa, inserts)
        rhs = timeslab.trace_theorem_rhs(qa, inserts)
        cases.append(_case(
            f"trace[{i:02d}]", {"d": d, "N": N, "inserts": k},
            lhs, rhs, params["tol"], scale=max(1.0, abs(rhs)),
        ))
    return _finish(cases)


def run_constraint_theorem(params: dict) -> dict:
    rng = np.random.default_rng(params["seed"])
    cases = []
    for i in range(params["cases"]):
        d = int(rng.choice(params["dims"]))
        N = int(rng.integers(2, params["n_max_slices"] + 1))
        qa = timeslab.build_action(
            timeslab.SliceLayout(d=d, N=N, eps=params["eps"]), rand_hermitian(rng, d)
        )
        O = rand_hermitian(rng, d)
        with_boundary = bool(i % 2)
        if with_boundary:
            t = int(rng.integers(0, N - 1))
            boundary = (rand_ket(rng, d), rand_ket(rng, d))
        else:
            t = int(rng.integers(0, N))
            boundary = None
        value = timeslab.constraint_expectation(qa, O, t, boundary)
        cases.append(_case(
            f"constraint[{i:02d}]", {"d": d, "N": N, "t": t, "boundary": with_boundary},
            value, 0.0, params["tol"],
        ))
    return _finish(cases)


def run_st_state_marginals(params: dict) -> dict:
    rng = np.random.default_rng(params["seed"])
    cases = []
    for i in range(params["cases"]):
        d = int(rng.choice(params["dims"]))
        N = int(rng.integers(2, params["n_max_slices"] + 1))
        st = spacetime.build_R(rand_ket(rng, d), rand_hermitian(rng, d), params["eps"], N)
        t = int(rng.integers(0, N))
        marg = spacetime.marginal(st, t).mat
        proj = st.evolved(t).outer().mat
        cases.append(_case(
            f"marginal[{i:02d}]", {"d": d, "N": N, "t": t},
            np.max(np.abs(marg - proj)), 0.0, params["tol"],
        ))
        for k in range(1, params["k_max"] + 1):
            _, tr = spacetime.power_and_pseudoentropy(st, k)
            cases.append(_case(
                f"trace_power[{i:02d},k={k}]", {"d": d, "N": N, "k": k},
                tr, 1.0, params["tol_trace"],
            ))
        report = spacetime.reduce_to_region(st, [(t, 0)])
        cases.append(_case(
            f"region_state_like[{i:02d}]", {"d": d, "N": N, "t": t},
            1.0 if report.is_state_like else 0.0, 1.0, 0.0,
        ))
    return _finish(cases)


def run_causality_witness(params: dict) -> dict:
    rng = np.random.default_rng(params["seed"])
    cases = []
    for i in range(params["cases"]):
        d = int(rng.choice(params["dims"]))
        N = int(rng.integers(2, params["n_max_slices"] + 1))
        st = spacetime.build_R(rand_ket(rng, d), rand_hermitian(rng, d), params["eps"], N)
        A, B = rand_hermitian(rng, d), rand_hermitian(rng, d)
        t = int(rng.integers(1, N))
        value = spacetime.causality_witness(st, A, B, t)
        oracle = spacetime.causality_witness_oracle(st, A, B, t)
        cases.append(_case(
            f"witness[{i:02d}]", {"d": d, "N": N, "t": t},
            value, oracle, params["tol"], scale=max(1.0, abs(oracle)),
        ))
    return _finish(cases)


def run_pseudo_entropy(params: dict) -> dict:
    rng = np.random.default_rng(params["seed"])
    cases = []
    for i in range(params["cases"]):
        d = int(rng.choice(params["dims"]))
        N = int(rng.integers(2, params["n_max_slices"] + 1))
        st = spacetime.build_R(rand_ket(rng, d), rand_hermitian(rng, d), params["eps"], N)
        for k in range(2, params["k_max"] + 1):
            value = spacetime.renyi_pseudoentropy(st, k)
            cases.append(_case(
                f"renyi[{i:02d},k={k}]", {"d": d, "N": N, "k": k},
                value, 0.0, params["tol"],
            ))
    return _finish(cases)


# ---------------------------------------------------------------------------
# extended-Fock anomaly scan


def run_anomaly_scan(params: dict) -> dict:
    T = params["T"]
    cases = []
    for N in params["slice_counts"]:
        lf = fock.LatticeFock(N=N, M=1, energies=(params["energy"],), eps=T / N)
        rep = fock.anomaly_mismatch(lf, engine="sector")
        cases.append(_case(
            f"normal_ordered[N={N:03d}]", {"N": N, "T": T},
            rep["normal_slab"], rep["normal_standard"], params["tol_normal"],
        ))
        cases.append(_case(
            f"contraction_density[N={N:03d}]", {"N": N, "T": T},
            rep["contraction_density"], N / T, 0.0,
        ))
        lf2 = fock.LatticeFock(N=2 * N, M=1, energies=(params["energy"],), eps=T / (2 * N))
        rep2 = fock.anomaly_mismatch(lf2, engine="sector")
        ratio = rep2["mismatch"] / rep["mismatch"]
        predicted = fock.predicted_mismatch_ratio(N)
        cases.append(_case(
            f"mismatch_ratio[N={N:03d}]", {"N": N, "2N": 2 * N, "T": T},
            ratio, predicted, params["tol_ratio"], scale=abs(predicted),
        ))
    return _finish(cases)


# ---------------------------------------------------------------------------
# constraint classification / Dirac brackets


def run_dirac_nogo(params: dict) -> dict:
    T = params["T"]
    grid = ModeGrid(
        T=T,
        modes=((1, 0), (2, 1), (3, 0), (5, 1)),
        m=params["mass"],
        M_sites=2,
        energy_override=(
            2 * math.pi * 1 / T, 2 * math.pi * 2 / T, None, None,
        ),
    )
    cs = constraints.build_constraints(grid)
    cases = []
    for k, cls in enumerate(constraints.classify(cs)):
        db = constraints.dirac_bracket(
            constraints.mode_a(k), constraints.mode_astar(k), cs
        )
        onshell = cls.kind == "identically-zero"
        oracle = -1j if onshell else 0.0
        cases.append(_case(
            f"bracket[mode={k}]",
            {"mode": list(grid.modes[k]), "gap": cs.gaps[k], "kind": cls.kind},
            db, oracle, params["tol"],
        ))
    onshell_grid = ModeGrid(
        T=T, modes=((1, 0), (2, 1)), m=params["mass"], M_sites=2,
        energy_override=(2 * math.pi * 1 / T, 2 * math.pi * 2 / T),
    )
    for x in range(2):
        for y in range(2):
            val = constraints.equal_time_bracket_reconstruction(onshell_grid, x, y, 0.7, 0.7)
            cases.append(_case(
                f"equal_time[x={x},y={y}]", {"x": x, "y": y},
                val, 1.0 if x == y else 0.0, params["tol"],
            ))
    return _finish(cases)


# ---------------------------------------------------------------------------
# free-propagator limits (scalar)


def run_propagator(params: dict) -> dict:
    eps_i = params["eps_i"]
    cases = []

    # off-shell single mode: tau * correlator -> i/(gap + i eps_i), order tau
    mode_grid = ModeGrid(
        T=2 * math.pi, modes=((params["n_mode"],),),
        energy_override=(params["n_mode"] - params["gap"],),
    )
    gap = mode_grid.gap(0)
    target = 1j / (gap + 1j * eps_i)
    taus = [params["tau"] / 2**k for k in range(params["sweep_points"])]
    errs = []
    for tau in taus:
        value = tau * gaussian.tau_mode_correlator(mode_grid, tau, eps_i, 0, 0)
        errs.append(abs(value - target))
        cases.append(_case(
            f"mode_limit[tau={tau:.6f}]", {"tau": tau, "gap": gap, "eps_i": eps_i},
            value, target, params["tol_limit"], scale=abs(target),
        ))
    for k in range(len(taus) - 1):
        cases.append(_case(
            f"order_ratio[step={k}]", {"tau": taus[k], "eps_i": eps_i},
            errs[k + 1] / errs[k], 0.5, params["tol_order"],
        ))

    # two-site grid propagator against dense Hamiltonian evolution
    T, tau_g, eps_g = params["T"], params["tau_grid"], params["eps_i_grid"]
    N = round(T / tau_g)
    energies = list(params["grid_energies"])
    grid = frequency_tower(T, tau_g, spatial=((0,), (1,)), M_sites=2, energies=energies)
    for dt in params["ed_slices"]:
        value = gaussian.feynman_propagator_grid(grid, tau_g, eps_g, (dt, 0), (0, 0))
        oracle = oracles.timeordered_two_point_ed(
            2, energies, 0, 0, tau_g * dt, n_max=params["ed_n_max"]
        )
        cases.append(_case(
            f"feynman_vs_ed[dt={dt:03d}]", {"dt": dt, "tau": tau_g, "N": N},
            value, oracle, params["tol_ed"], scale=abs(oracle),
        ))
    return _finish(cases)


# ---------------------------------------------------------------------------
# quartic S-matrix


def _smatrix_grid(T: float, M: int, n_a: int, n_b: int) -> ModeGrid:
    """Parity-symmetric 2->2 instance: site classes (0,2) at E_a, (1,3) at E_b."""
    e_a = 2 * math.pi * n_a / T
    e_b = 2 * math.pi * n_b / T
    return ModeGrid(
        T=T,
        modes=((n_b, 1), (n_a, 2), (n_a, 0), (n_b, 3)),
        m=1.0,
        M_sites=M,
        energy_override=(e_b, e_a, e_a, e_b),
    )


def _run_smatrix_order1(params: dict) -> list[dict]:
    T, M = params["T"], params["M_sites"]
    lam, eps_i = params["lam"], params["eps_i"]
    n_a, n_b = params["n_a"], params["n_b"]
    grid = _smatrix_grid(T, M, n_a, n_b)
    cases = []

    taus = [params["tau"] / 2**k for k in range(params["sweep_points"])]
    scaled = []
    for tau in taus:
        amp = wick.smatrix_element(grid, (0, 1), (2, 3), lam, 1, tau, eps_i)
        N = round(T / tau)
        scaled.append(amp / wick.lattice_volume_norm(N, M))
        cases.append(_case(
            f"conserving[tau={tau:.6f}]", {"tau": tau, "N": N, "lam": lam},
            scaled[-1], -1j * lam, params["tol_volume"], scale=lam,
        ))
    extrap = wick.tau_extrapolate(scaled[0], scaled[1], 2)
    cases.append(_case(
        "conserving[extrapolated]", {"taus": taus[:2], "lam": lam},
        extrap, -1j * lam, params["tol_volume"], scale=lam,
    ))

    # independent oracle: -iT<f|V|i> on the dense lattice, mapped to the
    # slab's per-volume units (box-normalized legs carry 1/sqrt(2E) each)
    site_E = [grid.energy(k) for k in (2, 0, 1, 3)]
    a1_d = oracles.dyson_smatrix_oracle(M, site_E, lam, (1, 2), (0, 3), T, order=1, n_max=2)
    lam_dyson = a1_d * M * math.prod(math.sqrt(2 * e) for e in site_E) / (-1j * T)
    cases.append(_case(
        "tdpt[coupling]", {"T": T, "lam": lam},
        extrap / -1j, lam_dyson, params["tol_tdpt"], scale=lam,
    ))

    # energy-violating externals (individually on shell): identically zero
    e_viol = ModeGrid(
        T=T, modes=((n_b, 1), (n_a, 2), (n_a, 0), (n_b + 1, 3)), m=1.0, M_sites=M,
        energy_override=(
            2 * math.pi * n_b / T, 2 * math.pi * n_a / T,
            2 * math.pi * n_a / T, 2 * math.pi * (n_b + 1) / T,
        ),
    )
    v1 = wick.smatrix_element(e_viol, (0, 1), (2, 3), lam, 1, taus[0], eps_i)
    cases.append(_case("violating[energy]", {"tau": taus[0]}, v1, 0.0, 0.0))

    # momentum-violating externals on a five-site lattice: identically zero
    p_viol = ModeGrid(
        T=T, modes=((n_a, 1), (n_b, 2), (n_a, 0), (n_b, 4)), m=1.0, M_sites=5,
        energy_override=(
            2 * math.pi * n_a / T, 2 * math.pi * n_b / T,
            2 * math.pi * n_a / T, 2 * math.pi * n_b / T,
        ),
    )
    v2 = wick.smatrix_element(p_viol, (0, 1), (2, 3), lam, 1, taus[0], eps_i)
    cases.append(_case("violating[momentum]", {"tau": taus[0]}, v2, 0.0, 0.0))
    return cases


def _run_smatrix_order2(params: dict) -> list[dict]:
    T, M = params["T2"], params["M_sites"]
    lam, eps_i = params["lam"], params["eps_i2"]
    tau = params["tau2"]
    grid = _smatrix_grid(T, M, params["n_a2"], params["n_b2"])
    site_E = [grid.energy(k) for k in (2, 0, 1, 3)]
    cases = []

    a1 = wick.smatrix_element(grid, (0, 1), (2, 3), lam, 1, tau, eps_i)
    a2 = wick.smatrix_element(grid, (0, 1), (2, 3), lam, 2, tau, eps_i, channel="s")
    a1_d, a2_d = oracles.dyson_pair_channel_amplitudes(
        M, site_E, lam, (1, 2), (0, 3), T, eta=eps_i
    )
    cases.append(_case(
        "pair_channel[ratio]", {"tau": tau, "T": T, "eps_i": eps_i},
        a2 / a1, a2_d / a1_d, params["tol_pair"], scale=abs(a2_d / a1_d),
    ))
    a1h = wick.smatrix_element(grid, (0, 1), (2, 3), lam, 1, tau / 2, eps_i)
    a2h = wick.smatrix_element(grid, (0, 1), (2, 3), lam, 2, tau / 2, eps_i, channel="s")
    cases.append(_case(
        "pair_channel[tau_stability]", {"taus": [tau, tau / 2]},
        a2h / a1h, a2 / a1, params["tol_stability"], scale=abs(a2 / a1),
    ))
    return cases


def run_smatrix(params: dict) -> dict:
    if params["process"] != "2to2":
        raise ValueError(f"unknown process {params['process']!r}")
    if params["order"] == 1:
        return _finish(_run_smatrix_order1(params))
    if params["order"] == 2:
        return _finish(_run_smatrix_order2(params))
    raise ValueError("order must be 1 or 2")


# ---------------------------------------------------------------------------
# fermion experiments


def run_dirac_propagator(params: dict) -> dict:
    m, eps_i = params["mass"], params["eps_i"]
    cases = []
    p_rest = (params["p0_rest"], 0.0, 0.0, 0.0)
    tau0 = params["tau"]
    prop = fermions.dirac_mode_propagator(p_rest, m, tau0, eps_i)
    m_c = fermions.regulated_mass(m, eps_i)
    g0 = fermions.gamma_set().gamma(0)
    diag = [1.0 / (1.0 - np.exp(1j * tau0 * (p_rest[0] - m_c)))] * 2
    diag += [1.0 / (1.0 - np.exp(1j * tau0 * (p_rest[0] + m_c)))] * 2
    rest_closed = np.diag(diag) @ g0
    cases.append(_case(
        "rest_frame[entrywise]", {"p0": p_rest[0], "tau": tau0},
        np.max(np.abs(prop - rest_closed)), 0.0, params["tol_rest"],
    ))

    p = tuple(params["p_moving"])
    limit = fermions.dirac_propagator_limit(p, m, eps_i)
    scale = float(np.max(np.abs(limit)))
    taus = [tau0 / 2**k for k in range(params["sweep_points"])]
    errs = []
    for tau in taus:
        val = tau * fermions.dirac_mode_propagator(p, m, tau, eps_i)
        err = float(np.max(np.abs(val - limit)))
        errs.append(err)
        cases.append(_case(
            f"limit[tau={tau:.6f}]", {"tau": tau, "p": list(p)},
            err / scale, 0.0, params["tol_limit"],
        ))
    for k in range(len(taus) - 1):
        cases.append(_case(
            f"order_ratio[step={k}]", {"tau": taus[k]},
            errs[k + 1] / errs[k], 0.5, params["tol_order"],
        ))
    return _finish(cases)


def run_fswap_cycle(params: dict) -> dict:
    layout = fermions.FermionLayout(params["N"], params["M"])
    U, signs = fermions.fermionic_cycle(layout)
    cases = []
    L = layout.legs
    for leg in range(L):
        target = (leg + layout.M) % L if layout.N > 1 else leg
        c_leg = fermions.jw_annihilator(layout, leg // layout.M, leg % layout.M).mat
        c_tgt = fermions.jw_annihilator(layout, target // layout.M, target % layout.M).mat
        moved = U.mat @ c_leg @ U.mat.conj().T
        cases.append(_case(
            f"conjugation[leg={leg}]", {"leg": leg, "target": target, "sign": signs[leg]},
            np.max(np.abs(moved - signs[leg] * c_tgt)), 0.0, params["tol"],
        ))
    P = fermions.parity_operator(layout).mat
    cases.append(_case(
        "parity_commutes", {"N": layout.N, "M": layout.M},
        np.max(np.abs(U.mat @ P - P @ U.mat)), 0.0, params["tol"],
    ))
    if layout.N == 2 and layout.M == 1:
        cases.append(_case(
            "equals_fswap", {}, np.max(np.abs(U.mat - fermions.fswap().mat)), 0.0, 0.0,
        ))
    return _finish(cases)


# ---------------------------------------------------------------------------
# registry

DEFAULTS: dict[str, dict] = {
    "paw-conditioning": {
        "cases": 50, "d_min": 2, "d_max": 4, "n_max_slices": 6, "eps": 0.3,
        "seed": 20260816, "tol": 1e-12,
    },
    "trace-theorem": {
        "cases": 50, "dims": (2, 3), "n_max_slices": 5, "max_inserts": 3,
        "eps": 0.41, "seed": 20260816, "tol": 1e-10,
    },
    "constraint-theorem": {
        "cases": 50, "dims": (2, 3), "n_max_slices": 5, "eps": 0.37,
        "seed": 20260816, "tol": 1e-10,
    },
    "st-state-marginals": {
        "cases": 10, "dims": (2, 3), "n_max_slices": 4, "k_max": 6, "eps": 0.29,
        "seed": 20260816, "tol": 1e-12, "tol_trace": 1e-10,
    },
    "causality-witness": {
        "cases": 25, "dims": (2, 3), "n_max_slices": 4, "eps": 0.33,
        "seed": 20260816, "tol": 1e-10,
    },
    "pseudo-entropy": {
        "cases": 10, "dims": (2, 3), "n_max_slices": 4, "k_max": 6, "eps": 0.31,
        "seed": 20260816, "tol": 1e-10,
    },
    "anomaly-scan": {
        "T": 4.0, "energy": 1.5, "slice_counts": (8, 12, 16, 24, 32),
        "seed": 20260816, "tol_normal": 1e-9, "tol_ratio": 0.05,
    },
    "dirac-nogo": {
        "T": 7.0, "mass": 1.0, "seed": 20260816, "tol": 1e-12,
    },
    "propagator": {
        "n_mode": 2, "gap": 0.8, "eps_i": 0.05, "tau": 0.02, "sweep_points": 4,
        "T": 100.0, "tau_grid": 0.05, "eps_i_grid": 0.07,
        "grid_energies": (1.0, 1.7), "ed_slices": (0, 1, 2, 3), "ed_n_max": 4,
        "seed": 20260816, "tol_limit": 0.05, "tol_order": 0.05, "tol_ed": 0.02,
    },
    "smatrix": {
        "process": "2to2", "order": 1, "M_sites": 4, "lam": 0.3,
        "seed": 20260816,
        # first order: short window, tau sweep, exact-zero probes
        "T": 60.0, "n_a": 2, "n_b": 5, "eps_i": 0.05, "tau": 0.05,
        "sweep_points": 3, "tol_volume": 0.01, "tol_tdpt": 0.02,
        # second order: long window so the periodic-window boundary term
        # 1/(2 eps_i T) stays well inside the pair-channel tolerance
        "T2": 1500.0, "n_a2": 50, "n_b2": 125, "eps_i2": 0.02, "tau2": 0.1,
        "tol_pair": 0.05, "tol_stability": 0.005,
    },
    "dirac-propagator": {
        "mass": 1.0, "eps_i": 1e-3, "p0_rest": 0.35,
        "p_moving": (0.9, 0.3, -0.2, 0.1), "tau": 0.01, "sweep_points": 4,
        "seed": 20260816, "tol_rest": 1e-12, "tol_limit": 0.05, "tol_order": 0.05,
    },
    "fswap-cycle": {
        "N": 3, "M": 2, "seed": 20260816, "tol": 1e-12,
    },
}

RUNNERS: dict[str, Callable[[dict], dict]] = {
    "paw-conditioning": run_paw_conditioning,
    "trace-theorem": run_trace_theorem,
    "constraint-theorem": run_constraint_theorem,
    "st-state-marginals": run_st_state_marginals,
    "causality-witness": run_causality_witness,
    "pseudo-entropy": run_pseudo_entropy,
    "anomaly-scan": run_anomaly_scan,
    "dirac-nogo": run_dirac_nogo,
    "propagator": run_propagator,
    "smatrix": run_smatrix,
    "dirac-propagator": run_dirac_propagator,
    "fswap-cycle": run_fswap_cycle,
}


def run_experiment(name: str, params: dict | None = None) -> dict:
    """Execute a registered experiment with defaults overlaid by params."""
    if name not in RUNNERS:
        raise KeyError(f"unknown experiment {name!r}")
    merged = dict(DEFAULTS[name])
    merged.update(params or {})
    result = RUNNERS[name](merged)
    result["params"] = merged
    return result
