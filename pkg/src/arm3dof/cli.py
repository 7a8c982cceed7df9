"""Command-line front end: fk, ik, gain, simulate, compare.

Configs are YAML files; lengths there are centimeters (converted to meters
on load) and angles radians. Trajectories go to CSV, metrics to JSON.
Exit codes: 0 success, 2 validation, 3 unreachable/singular, 4 synthesis
failure, 5 I/O.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from .control import LqrWeights, PidGains, default_lqr_weights, lqr_gain
from .errors import Arm3DofError, ValidationError
from .kinematics import end_effector, inverse_kinematics
from .linearize import linearize_about
from .model import JointState, ManipulatorParams, validate_params
from .sim import Controller, SimConfig, SimResult, default_pid_gains, simulate

CM_PER_M = 100.0

CSV_HEADER = "t,theta1,theta2,theta3,omega1,omega2,omega3,tau1,tau2,tau3"

DEFAULT_CONFIG = {
    "manipulator": {
        "link_lengths_cm": [25.0, 15.0, 15.0],
        "total_mass_kg": 2.5,
        "gravity_m_s2": 9.81,
    },
    "start": {"cartesian_cm": [10.0, 10.0, 10.0]},
    "goal": {"cartesian_cm": [15.0, 25.0, 20.0]},
    "controller": {"type": "lqr"},
    "sim": {"dt_s": 0.001, "duration_s": 5.0},
    "output": {"directory": "out"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    params: ManipulatorParams
    start: JointState
    goal: JointState
    controller: Controller
    lqr_weights: LqrWeights
    pid_gains: PidGains
    dt: float
    duration: float
    torque_limit: Optional[list]
    out_dir: str


def _resolve_endpoint(p: ManipulatorParams, section: dict, name: str) -> JointState:
    if not isinstance(section, dict):
        raise ValidationError(f"{name} must be a mapping")
    has_cart = "cartesian_cm" in section
    has_joint = "joints_rad" in section
    if has_cart == has_joint:
        raise ValidationError(
            f"{name} must give exactly one of cartesian_cm or joints_rad"
        )
    if has_joint:
        theta = np.array(section["joints_rad"], dtype=float).reshape(3)
    else:
        target = np.array(section["cartesian_cm"], dtype=float).reshape(3) / CM_PER_M
        theta = inverse_kinematics(p, target)
    return JointState.at_rest(theta)


def _build_params(section: dict) -> ManipulatorParams:
    lengths = np.array(section.get("link_lengths_cm", [25.0, 15.0, 15.0]),
                       dtype=float).reshape(3) / CM_PER_M
    g = float(section.get("gravity_m_s2", 9.81))
    if "masses_kg" in section:
        masses = np.array(section["masses_kg"], dtype=float).reshape(3)
        p = ManipulatorParams(a1=lengths[0], a2=lengths[1], a3=lengths[2],
                              m1=masses[0], m2=masses[1], m3=masses[2], g=g,
                              m_total=float(section.get("total_mass_kg", masses.sum())))
    else:
        p = ManipulatorParams.from_total_mass(
            lengths[0], lengths[1], lengths[2],
            float(section.get("total_mass_kg", 2.5)), g=g)
    validate_params(p)
    return p


def load_config(path: Optional[str] = None) -> ExperimentConfig:
    """Load an experiment config; missing keys fall back to the defaults."""
    raw = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh) or {}
        if not isinstance(raw, dict):
            raise ValidationError("config root must be a mapping")

    def section(key):
        merged = dict(DEFAULT_CONFIG.get(key, {}))
        merged.update(raw.get(key, {}) or {})
        return merged

    params = _build_params(section("manipulator"))
    start = _resolve_endpoint(params, raw.get("start", DEFAULT_CONFIG["start"]), "start")
    goal = _resolve_endpoint(params, raw.get("goal", DEFAULT_CONFIG["goal"]), "goal")

    ctrl_section = section("controller")
    try:
        controller = Controller(str(ctrl_section.get("type", "lqr")).lower())
    except ValueError as exc:
        raise ValidationError(f"unknown controller type {ctrl_section.get('type')!r}") from exc

    lqr_cfg = ctrl_section.get("lqr") or {}
    defaults = default_lqr_weights()
    if "q" in lqr_cfg or "r" in lqr_cfg:
        weights = LqrWeights(Q=np.array(lqr_cfg.get("q", defaults.Q), dtype=float),
                             R=np.array(lqr_cfg.get("r", defaults.R), dtype=float))
    elif "q_diag" in lqr_cfg or "r_diag" in lqr_cfg:
        weights = LqrWeights.from_diagonals(
            lqr_cfg.get("q_diag", np.diag(defaults.Q)),
            lqr_cfg.get("r_diag", np.diag(defaults.R)))
    else:
        weights = defaults

    pid_cfg = ctrl_section.get("pid") or {}
    pid_defaults = default_pid_gains()
    gains = PidGains(
        kp=pid_cfg.get("kp", pid_defaults.kp),
        ki=pid_cfg.get("ki", pid_defaults.ki),
        kd=pid_cfg.get("kd", pid_defaults.kd),
        integral_limit=pid_cfg.get("integral_limit_nm", pid_defaults.integral_limit),
    )

    sim_cfg = section("sim")
    out_cfg = section("output")
    return ExperimentConfig(
        params=params,
        start=start,
        goal=goal,
        controller=controller,
        lqr_weights=weights,
        pid_gains=gains,
        dt=float(sim_cfg.get("dt_s", 0.001)),
        duration=float(sim_cfg.get("duration_s", 5.0)),
        torque_limit=sim_cfg.get("torque_limit_nm"),
        out_dir=str(out_cfg.get("directory", "out")),
    )


def _fmt(value: float) -> str:
    return np.format_float_positional(value, precision=9, unique=False,
                                      fractional=False)


def write_trajectory_csv(path: Path, result: SimResult) -> None:
    lines = [CSV_HEADER]
    for t, state, tau in zip(result.times, result.states, result.torques):
        row = [t, *state, *tau]
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def metrics_dict(cfg: ExperimentConfig, controller: Controller,
                 result: SimResult) -> dict:
    m = result.metrics
    return {
        "controller": controller.value,
        "dt_s": cfg.dt,
        "duration_s": cfg.duration,
        "start_rad": list(cfg.start.theta),
        "goal_rad": list(cfg.goal.theta),
        "settling_time_s": list(m.settling_time),
        "overshoot_pct": list(m.overshoot_pct),
        "peak_velocity_rad_s": list(m.peak_velocity),
        "steady_state_error_rad": list(m.steady_state_error),
        "cost": m.cost_J,
        "settled": [bool(v) for v in m.settled],
        "zero_step": [bool(v) for v in m.zero_step],
    }


def _write_json(path: Path, obj: dict) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8", newline="\n")


def _run_simulation(cfg: ExperimentConfig, controller: Controller) -> SimResult:
    sim_cfg = SimConfig(
        initial=cfg.start,
        reference=cfg.goal,
        controller=controller,
        dt=cfg.dt,
        duration=cfg.duration,
        torque_limit=cfg.torque_limit,
    )
    return simulate(cfg.params, sim_cfg, lqr_weights=cfg.lqr_weights,
                    pid_gains=cfg.pid_gains)


def cmd_fk(args) -> int:
    cfg = load_config(args.config)
    point = end_effector(cfg.params, np.array(args.angles, dtype=float))
    print(" ".join(f"{v * CM_PER_M:.4f}" for v in (point.x, point.y, point.z)))
    return 0


def cmd_ik(args) -> int:
    cfg = load_config(args.config)
    target_m = np.array(args.point, dtype=float) / CM_PER_M
    theta = inverse_kinematics(cfg.params, target_m)
    print(" ".join(f"{v:.4f}" for v in theta))
    return 0


def cmd_gain(args) -> int:
    from .control import are_residual

    cfg = load_config(args.config)
    model = linearize_about(cfg.params, cfg.goal.theta)
    gain = lqr_gain(model, cfg.lqr_weights)
    poles = np.linalg.eigvals(model.A - model.B @ gain.K)
    residual = are_residual(model.A, model.B, cfg.lqr_weights, gain.S)

    print("K =")
    for row in gain.K:
        print("  " + " ".join(f"{v:12.4f}" for v in row))
    print("closed-loop poles (real parts): "
          + " ".join(f"{v:.4f}" for v in sorted(poles.real)))
    print(f"Riccati residual (scaled max-norm): {residual:.3e}")

    if args.json:
        _write_json(Path(args.json), {
            "K": [list(row) for row in gain.K],
            "S": [list(row) for row in gain.S],
            "poles_real": list(np.sort(poles.real)),
            "residual": residual,
        })
    return 0


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    cfg = _apply_overrides(cfg, args)
    result = _run_simulation(cfg, cfg.controller)
    out_dir = Path(args.out or cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(out_dir / "trajectory.csv", result)
    _write_json(out_dir / "metrics.json", metrics_dict(cfg, cfg.controller, result))
    print(f"wrote {out_dir / 'trajectory.csv'} and {out_dir / 'metrics.json'}")
    return 0


def cmd_compare(args) -> int:
    cfg = load_config(args.config)
    cfg = _apply_overrides(cfg, args, allow_controller=False)
    lqr_result = _run_simulation(cfg, Controller.LQR)
    pid_result = _run_simulation(cfg, Controller.PID)
    lqr_m = metrics_dict(cfg, Controller.LQR, lqr_result)
    pid_m = metrics_dict(cfg, Controller.PID, pid_result)
    delta = {
        key: [pv - lv for pv, lv in zip(pid_m[key], lqr_m[key])]
        for key in ("settling_time_s", "overshoot_pct", "peak_velocity_rad_s")
    }
    delta["cost"] = pid_m["cost"] - lqr_m["cost"]
    out_dir = Path(args.out or cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "compare.json",
                {"lqr": lqr_m, "pid": pid_m, "pid_minus_lqr": delta})
    print(f"wrote {out_dir / 'compare.json'}")
    return 0


def _apply_overrides(cfg: ExperimentConfig, args, allow_controller: bool = True):
    updates = {}
    if getattr(args, "dt", None) is not None:
        updates["dt"] = args.dt
    if getattr(args, "duration", None) is not None:
        updates["duration"] = args.duration
    if allow_controller and getattr(args, "controller", None) is not None:
        updates["controller"] = Controller(args.controller)
    if not updates:
        return cfg
    from dataclasses import replace
    return replace(cfg, **updates)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arm3dof",
        description="3-DoF articulated arm: kinematics, LQR synthesis and closed-loop simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", help="YAML experiment config", default=None)

    sp = sub.add_parser("fk", help="forward kinematics: joint angles (rad) -> end effector (cm)")
    sp.add_argument("angles", nargs=3, type=float, metavar="THETA")
    add_common(sp)
    sp.set_defaults(func=cmd_fk)

    sp = sub.add_parser("ik", help="inverse kinematics: target (cm) -> joint angles (rad)")
    sp.add_argument("point", nargs=3, type=float, metavar="COORD")
    add_common(sp)
    sp.set_defaults(func=cmd_ik)

    sp = sub.add_parser("gain", help="synthesize the regulator gain at the goal pose")
    add_common(sp)
    sp.add_argument("--json", help="also dump K, S and poles to this JSON file", default=None)
    sp.set_defaults(func=cmd_gain)

    sp = sub.add_parser("simulate", help="run one closed-loop simulation")
    add_common(sp)
    sp.add_argument("--out", help="output directory", default=None)
    sp.add_argument("--dt", type=float, default=None)
    sp.add_argument("--duration", type=float, default=None)
    sp.add_argument("--controller", choices=[c.value for c in Controller], default=None)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("compare", help="run LQR and PID and report both metric sets")
    add_common(sp)
    sp.add_argument("--out", help="output directory", default=None)
    sp.add_argument("--dt", type=float, default=None)
    sp.add_argument("--duration", type=float, default=None)
    sp.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Arm3DofError as exc:
        print(f"{exc.category}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"io: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
