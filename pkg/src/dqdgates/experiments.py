"""Named experiments with figure-reproduction presets."""
from dataclasses import dataclass
import math
import time

import numpy as np

from . import ghz, mhz
from .cavity import (
    CoupledSystemParams, U_ENT, dispersive_coupling, dispersive_gate_unitary,
    initial_state, product_index, simulate_dispersive_gate, simulate_resonant_gate,
)
from .charge_qubit import (
    ChargeQubitParams, GeometricGateSpec, dynamical_unitary, gate_dt,
    ideal_geometric_unitary, synthesize_dynamical_gate, synthesize_geometric_gate,
)
from .config import ConfigError, Param
from .invariants import CNOT, CZ, IDENTITY, ISWAP, SWAP, classify_entangler, makhlin_invariants
from .noise import MonteCarloConfig, NoiseSpec, monte_carlo_fidelity
from .report import ResultTable, git_describe

SWEEP_0_075 = (0.0, 0.15, 0.3, 0.45, 0.6, 0.75)
RATIO_GRID = (0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3)

SINGLE_QUBIT = {
    "f_rabi_GHz": Param("float", 2.0, "drive amplitude A_eps/2pi"),
    "t_c_GHz": Param("float", 12.0, "mean tunneling t_c/2pi; drive locked to 2 t_c"),
    "eps_bar_GHz": Param("float", 0.0, "mean detuning eps/2pi"),
}

GATES = {
    "U_ent": U_ENT,
    "cnot": CNOT,
    "swap": SWAP,
    "iswap": ISWAP,
    "cz": CZ,
    "identity": IDENTITY,
}


@dataclass(frozen=True)
class Experiment:
    name: str
    reproduces: str
    summary: str
    schema: dict
    runner: object


def _qubit(params):
    return ChargeQubitParams(ghz(params["eps_bar_GHz"]), ghz(params["t_c_GHz"]))


def _gamma1(t1_ns):
    return 0.0 if math.isinf(t1_ns) else 1.0 / t1_ns


def _not_gates(amplitude):
    geo = synthesize_geometric_gate(GeometricGateSpec(-math.pi / 2, math.pi / 2, 0.0), amplitude)
    dyn = synthesize_dynamical_gate(0.0, math.pi, amplitude)
    u_geo = ideal_geometric_unitary(GeometricGateSpec(-math.pi / 2, math.pi / 2, 0.0))
    u_dyn = dynamical_unitary(0.0, math.pi)
    return (geo, u_geo), (dyn, u_dyn)


def _mc(cfg, p, schedule, ideal, sigma_eps, sigma_tc, gamma1):
    spec = NoiseSpec(ghz(sigma_eps), ghz(sigma_tc))
    mc = MonteCarloConfig(cfg.n_realizations, cfg.seed)
    return monte_carlo_fidelity(p, schedule, spec, mc, gamma1, ideal, dt=cfg.dt_override)


def run_single_gate(cfg):
    prm = cfg.parameters
    p = _qubit(prm)
    a = ghz(prm["f_rabi_GHz"])
    if prm["gate"] == "geometric":
        spec = GeometricGateSpec(prm["gamma_rad"], prm["theta_rad"], prm["phi_rad"])
        sched, ideal = synthesize_geometric_gate(spec, a), ideal_geometric_unitary(spec)
    else:
        sched = synthesize_dynamical_gate(prm["phi_rad"], prm["rotation_angle_rad"], a)
        ideal = dynamical_unitary(prm["phi_rad"], prm["rotation_angle_rad"])
    res = _mc(cfg, p, sched, ideal, prm["sigma_eps_GHz"], prm["sigma_tc_GHz"], _gamma1(prm["t1_ns"]))
    table = ResultTable(["gate_time_ns", "fidelity", "std_error", "n_realizations"])
    table.add(sched.duration, res.mean, res.std_error, cfg.n_realizations)
    table.metadata["dt_ns"] = cfg.dt_override or gate_dt(sched, 2 * p.t_c)
    return {"": table}


def run_fig2(cfg):
    prm = cfg.parameters
    a = ghz(prm["f_rabi_GHz"])
    (geo, u_geo), _ = _not_gates(a)
    table = ResultTable(["t_c_over_2pi_GHz", "sigma_eps_over_2pi_GHz", "sigma_tc_over_2pi_GHz",
                         "F_geometric", "se_geometric"])
    panels = [x.strip() for x in prm["panels"].split(",") if x.strip()]
    for panel in panels:
        if panel not in ("a", "b"):
            raise ConfigError(f"unknown fig2 panel {panel!r}")
    fixed = prm["fixed_sigma_GHz"]
    gamma1 = _gamma1(prm["t1_ns"])
    dts = []
    for tc in prm["t_c_list_GHz"]:
        p = ChargeQubitParams(ghz(prm["eps_bar_GHz"]), ghz(tc))
        dts.append(cfg.dt_override or gate_dt(geo, 2 * p.t_c))
        for panel in panels:
            for s in prm["sweep_GHz"]:
                se, st = (s, fixed) if panel == "a" else (fixed, s)
                r = _mc(cfg, p, geo, u_geo, se, st, gamma1)
                table.add(tc, se, st, r.mean, r.std_error)
    table.metadata["dt_ns"] = min(dts) if dts else ""
    return {"": table}


def run_fig3(cfg):
    prm = cfg.parameters
    p = _qubit(prm)
    (geo, u_geo), (dyn, u_dyn) = _not_gates(ghz(prm["f_rabi_GHz"]))
    table = ResultTable(["T1_ns", "sigma_tc_over_2pi_GHz", "F_geometric", "F_dynamical",
                         "se_geometric", "se_dynamical"])
    for t1 in prm["t1_list_ns"]:
        for s in prm["sigma_tc_GHz"]:
            rg = _mc(cfg, p, geo, u_geo, prm["sigma_eps_GHz"], s, _gamma1(t1))
            rd = _mc(cfg, p, dyn, u_dyn, prm["sigma_eps_GHz"], s, _gamma1(t1))
            table.add(t1, s, rg.mean, rd.mean, rg.std_error, rd.std_error)
    table.metadata["dt_ns"] = cfg.dt_override or gate_dt(geo, 2 * p.t_c)
    return {"": table}


def _parse_initial(label, n_max):
    if len(label) != 3 or not label.isdigit():
        raise ConfigError(f"initial state must look like '001', got {label!r}")
    q1, n, q2 = (int(c) for c in label)
    try:
        return initial_state(q1, n, q2, n_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _trajectory_table(result, n_max):
    labels = [f"{q1}{n}{q2}" for q1 in (0, 1) for n in range(n_max + 1) for q2 in (0, 1)]
    order = [product_index(int(l[0]), int(l[1]), int(l[2]), n_max) for l in labels]
    table = ResultTable(["time_ns"] + [f"P_{l}" for l in labels])
    for t, pops in zip(result.times, result.populations):
        table.add(t, *(pops[i] for i in order))
    table.metadata["fidelity"] = repr(result.fidelity)
    table.metadata["gate_time_ns"] = repr(result.gate_time)
    return table


def run_two_qubit_resonant(cfg):
    prm = cfg.parameters
    g = mhz(prm["g_r_MHz"])
    p = CoupledSystemParams(g, g, 0.0, mhz(prm["kappa_MHz"]), mhz(prm["gamma1_MHz"]),
                            mhz(prm["gamma1_MHz"]), mhz(prm["gamma_phi_MHz"]),
                            mhz(prm["gamma_phi_MHz"]), cfg.fock_cutoff)
    res = simulate_resonant_gate(p, _parse_initial(prm["initial"], p.n_max), dt=cfg.dt_override)
    table = _trajectory_table(res, p.n_max)
    table.metadata["dt_ns"] = repr(float(res.times[1] - res.times[0]))
    return {"": table}


def run_two_qubit_dispersive(cfg):
    prm = cfg.parameters
    g = mhz(prm["g_r_MHz"])
    p = CoupledSystemParams(g, g, mhz(prm["delta_MHz"]), mhz(prm["kappa_MHz"]),
                            mhz(prm["gamma1_MHz"]), mhz(prm["gamma1_MHz"]),
                            mhz(prm["gamma_phi_MHz"]), mhz(prm["gamma_phi_MHz"]), cfg.fock_cutoff)
    res = simulate_dispersive_gate(p, _parse_initial(prm["initial"], p.n_max), dt=cfg.dt_override)
    table = _trajectory_table(res, p.n_max)
    table.metadata["dt_ns"] = repr(float(res.times[1] - res.times[0]))
    table.metadata["lambda_over_2pi_MHz"] = repr(dispersive_coupling(p) / mhz(1.0))
    return {"": table}


def run_fig5(cfg):
    prm = cfg.parameters
    g = mhz(prm["g_r_MHz"])
    rho0 = _parse_initial(prm["initial"], cfg.fock_cutoff)
    table = ResultTable(["kappa_over_g", "gamma1_over_g", "fidelity"])
    for k in prm["kappa_over_g"]:
        for gm in prm["gamma1_over_g"]:
            p = CoupledSystemParams(g, g, 0.0, k * g, gm * g, gm * g, n_max=cfg.fock_cutoff)
            res = simulate_resonant_gate(p, rho0, dt=cfg.dt_override, save_every=None)
            table.add(k, gm, res.fidelity)
    return {"": table}


def run_fig6(cfg):
    prm = cfg.parameters
    n_max = cfg.fock_cutoff
    rho0 = _parse_initial(prm["initial"], n_max)
    panel_c = ResultTable(["g_r_over_2pi_MHz", "F_resonant", "P_100"])
    for gr in prm["g_r_sweep_MHz"]:
        g = mhz(gr)
        p = CoupledSystemParams(g, g, 0.0, mhz(prm["kappa_res_MHz"]), mhz(prm["gamma1_res_MHz"]),
                                mhz(prm["gamma1_res_MHz"]), n_max=n_max)
        res = simulate_resonant_gate(p, rho0, dt=cfg.dt_override, save_every=None)
        i = product_index(1, 0, 0, n_max)
        panel_c.add(gr, res.fidelity, res.final_state[i, i].real)
    panel_d = ResultTable(["delta_over_g", "delta_over_2pi_MHz", "F_dispersive", "P_100"])
    g = mhz(prm["g_r_MHz"])
    for ratio in prm["delta_over_g"]:
        p = CoupledSystemParams(g, g, ratio * g, mhz(prm["kappa_disp_MHz"]),
                                mhz(prm["gamma1_disp_MHz"]), mhz(prm["gamma1_disp_MHz"]), n_max=n_max)
        res = simulate_dispersive_gate(p, rho0, dt=cfg.dt_override, save_every=None)
        i = product_index(1, 0, 0, n_max)
        panel_d.add(ratio, ratio * prm["g_r_MHz"], res.fidelity, res.final_state[i, i].real)
    return {"c": panel_c, "d": panel_d}


def load_matrix_file(path):
    """Square complex matrix from 'dim' followed by rows of 're im' pairs."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.split() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as exc:
        raise ConfigError(f"cannot read matrix file {path}: {exc}") from None
    try:
        d = int(lines[0][0])
        rows = [[float(x) for x in ln] for ln in lines[1:]]
    except (IndexError, ValueError):
        raise ConfigError(f"malformed matrix file {path}") from None
    if len(lines[0]) != 1 or len(rows) != d or any(len(r) != 2 * d for r in rows):
        raise ConfigError(f"matrix file {path} must hold {d} rows of {d} 're im' pairs")
    arr = np.array(rows)
    return arr[:, 0::2] + 1j * arr[:, 1::2]


def resolve_gate(name_or_path, lam_t=None):
    if name_or_path in GATES:
        return GATES[name_or_path]
    if name_or_path == "dispersive":
        return dispersive_gate_unitary(1.0, math.pi / 2 if lam_t is None else lam_t)
    return load_matrix_file(name_or_path)


def invariants_table(u):
    inv = makhlin_invariants(u)
    cls = classify_entangler(inv)
    table = ResultTable(["G1", "G2", "G3", "modulus", "mu_rad", "perfect_entangler", "on_boundary"])
    table.add(inv.g1, inv.g2, inv.g3, inv.modulus, inv.mu, int(cls.perfect), int(cls.on_boundary))
    return table


def run_invariants(cfg):
    prm = cfg.parameters
    try:
        u = resolve_gate(prm["gate"], prm["lambda_t"])
        table = invariants_table(u)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return {"": table}


def _two_qubit_rates(kappa, gamma1):
    return {
        "kappa_MHz": Param("float", kappa, "resonator decay kappa/2pi"),
        "gamma1_MHz": Param("float", gamma1, "qubit relaxation gamma1/2pi (both qubits)"),
        "gamma_phi_MHz": Param("float", 0.0, "pure dephasing gamma_phi/2pi (both qubits)"),
        "initial": Param("str", "001", "initial product state |q1 n q2>"),
    }


EXPERIMENTS = {e.name: e for e in [
    Experiment(
        "single-gate", "Fig. 3 (one point)",
        "one geometric or dynamical single-qubit gate, Monte Carlo averaged",
        dict(SINGLE_QUBIT, **{
            "gate": Param("str", "geometric", "geometric or dynamical", ("geometric", "dynamical")),
            "gamma_rad": Param("float", -math.pi / 2, "geometric phase gamma"),
            "theta_rad": Param("float", math.pi / 2, "rotation axis polar angle"),
            "phi_rad": Param("float", 0.0, "rotation axis azimuth (drive phase for dynamical)"),
            "rotation_angle_rad": Param("float", math.pi, "dynamical rotation angle"),
            "sigma_eps_GHz": Param("float", 0.0, "detuning noise sigma_eps/2pi"),
            "sigma_tc_GHz": Param("float", 0.0, "tunneling noise sigma_tc/2pi"),
            "t1_ns": Param("float", math.inf, "relaxation time T1 (inf disables relaxation)"),
        }), run_single_gate),
    Experiment(
        "fig2-sweep", "Fig. 2",
        "geometric NOT fidelity vs detuning noise (panel a) and tunneling noise (panel b)",
        dict({k: v for k, v in SINGLE_QUBIT.items() if k != "t_c_GHz"}, **{
            "t_c_list_GHz": Param("floats", (2.0, 6.0, 8.0, 12.0), "tunneling values t_c/2pi"),
            "sweep_GHz": Param("floats", SWEEP_0_075, "swept noise strength sigma/2pi"),
            "fixed_sigma_GHz": Param("float", 0.75, "noise strength on the non-swept axis"),
            "panels": Param("str", "a,b", "a: sweep sigma_eps, b: sweep sigma_tc"),
            "t1_ns": Param("float", math.inf, "relaxation time T1"),
        }), run_fig2),
    Experiment(
        "fig3-sweep", "Fig. 3",
        "geometric vs dynamical NOT fidelity vs tunneling noise for six relaxation times",
        dict(SINGLE_QUBIT, **{
            "t1_list_ns": Param("floats", (10.0, 20.0, 40.0, 60.0, 80.0, 100.0), "relaxation times"),
            "sigma_tc_GHz": Param("floats", SWEEP_0_075, "tunneling noise sigma_tc/2pi"),
            "sigma_eps_GHz": Param("float", 0.75, "detuning noise sigma_eps/2pi"),
        }), run_fig3),
    Experiment(
        "two-qubit-resonant", "Fig. 6(a)",
        "population trajectory of the holonomic entangling gate at resonance",
        dict({"g_r_MHz": Param("float", 69.0, "coupling g_r/2pi (both qubits)")},
             **_two_qubit_rates(8.4, 11.0)),
        run_two_qubit_resonant),
    Experiment(
        "fig5-contour", "Fig. 5",
        "holonomic gate fidelity on a grid of kappa/g_r and gamma1/g_r",
        {
            "g_r_MHz": Param("float", 69.0, "coupling g_r/2pi"),
            "kappa_over_g": Param("floats", RATIO_GRID, "resonator decay kappa/g_r"),
            "gamma1_over_g": Param("floats", RATIO_GRID, "qubit relaxation gamma1/g_r"),
            "initial": Param("str", "001", "initial product state |q1 n q2>"),
        }, run_fig5),
    Experiment(
        "fig6-sweep", "Fig. 6(c),(d)",
        "resonant fidelity vs g_r (panel c) and dispersive fidelity vs delta/g_r (panel d)",
        {
            "g_r_sweep_MHz": Param("floats", (20.0, 40.0, 60.0, 69.0, 80.0, 100.0, 120.0, 140.0, 160.0),
                                   "coupling sweep for panel c"),
            "kappa_res_MHz": Param("float", 8.4, "panel c kappa/2pi"),
            "gamma1_res_MHz": Param("float", 11.0, "panel c gamma1/2pi"),
            "g_r_MHz": Param("float", 69.0, "panel d coupling g_r/2pi"),
            "delta_over_g": Param("floats", (2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0, 8.0, 10.0),
                                  "panel d detuning ratios"),
            "kappa_disp_MHz": Param("float", 12.6, "panel d kappa/2pi"),
            "gamma1_disp_MHz": Param("float", 8.0, "panel d gamma1/2pi"),
            "initial": Param("str", "001", "initial product state |q1 n q2>"),
        }, run_fig6),
    Experiment(
        "two-qubit-dispersive", "Fig. 6(b)",
        "population trajectory of the dispersive dynamical entangling gate",
        dict({"g_r_MHz": Param("float", 69.0, "coupling g_r/2pi"),
              "delta_MHz": Param("float", 280.0, "qubit-resonator detuning delta/2pi")},
             **_two_qubit_rates(12.6, 8.0)),
        run_two_qubit_dispersive),
    Experiment(
        "invariants", "Fig. 6 (gate class)",
        "Makhlin invariants and perfect-entangler test of a two-qubit gate",
        {
            "gate": Param("str", "U_ent", "built-in name (U_ent, cnot, swap, iswap, cz, identity, "
                                          "dispersive) or a matrix file path"),
            "lambda_t": Param("float", None, "lambda*t for the dispersive gate (default pi/2)"),
        }, run_invariants),
]}

SCHEMAS = {name: e.schema for name, e in EXPERIMENTS.items()}


def run_experiment(cfg):
    """Execute ``cfg`` and return {suffix: ResultTable} with metadata filled in."""
    exp = EXPERIMENTS[cfg.experiment]
    start = time.perf_counter()
    tables = exp.runner(cfg)
    wall = time.perf_counter() - start
    describe = git_describe()
    for table in tables.values():
        meta = {
            "experiment": cfg.experiment,
            "reproduces": exp.reproduces,
            "git_describe": describe,
            "seed": cfg.seed,
            "n_realizations": cfg.n_realizations,
            "fock_cutoff": cfg.fock_cutoff,
        }
        meta.update(table.metadata)
        meta.setdefault("dt_ns", cfg.dt_override if cfg.dt_override else "default")
        meta["wall_time_s"] = f"{wall:.3f}"
        table.metadata = meta
    return tables


def output_paths(cfg, tables, out=None):
    base = out or cfg.output_path
    if list(tables) == [""]:
        return {"": base}
    stem, ext = base.rsplit(".", 1) if "." in base.rsplit("/", 1)[-1] else (base, "csv")
    return {k: f"{stem}_{k}.{ext}" for k in tables}


def catalog():
    lines = []
    for e in EXPERIMENTS.values():
        lines.append(f"{e.name}  [{e.reproduces}]  {e.summary}")
        for key, p in e.schema.items():
            default = "" if p.default is None else p.default
            if isinstance(default, tuple):
                default = ", ".join(f"{x:g}" for x in default)
            elif isinstance(default, float):
                default = f"{default:g}"
            lines.append(f"    {key} = {default}    # {p.doc}")
    return "\n".join(lines) + "\n"
