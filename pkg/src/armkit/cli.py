"""``armkit`` command line front end.

Exit codes: 0 success, 1 usage/input error, 2 domain error (unreachable
target, non-convergence, response that never settles).
"""

import argparse
import csv
import io
import math
import re
import sys
from pathlib import Path

from . import actuation, kinematics, mobility, oscillation, report, spatial
from .arm_model import load_arm_file, sample_arm
from .errors import DomainError, InvalidParameterError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        prefix = self.prog.removeprefix("armkit").strip()
        raise UsageError(f"{prefix}: {message}" if prefix else message)


def fmt(value):
    """Six significant digits; never prints a negative zero."""
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    text = f"{value:.6g}"
    return "0" if text in ("-0", "0") else text


def _floats(text, count=None, name="value"):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--{name}: expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise UsageError(f"--{name}: expected {count} numbers, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise UsageError(f"--{name}: non-finite value in {text!r}")
    return vals


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _read_text(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write_text(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _arm(args):
    if args.arm is None:
        return sample_arm()
    _read_text(args.arm)  # surfaces unreadable files as usage errors
    return load_arm_file(args.arm)


def _lines(pairs):
    return "".join(f"{k}: {fmt(v) if not isinstance(v, str) else v}\n" for k, v in pairs)


# ----------------------------------------------------------------- commands

def cmd_dof(args, out, err):
    if args.reference:
        topo = mobility.reference_topology()
    elif args.freedoms is not None or args.links is not None:
        if args.links is None or args.freedoms is None:
            raise UsageError("dof: --links and --freedoms go together")
        freedoms = [int(f) for f in _floats(args.freedoms, name="freedoms")] if args.freedoms else []
        topo = mobility.MechanismTopology(args.lam or mobility.SPATIAL, args.links, freedoms)
    else:
        topo = mobility.topology_from_arm(_arm(args), args.lam or mobility.SPATIAL)
    dof = mobility.grubler_dof(topo)
    out.write(f"{dof}\n")
    if topo == mobility.reference_topology():
        out.write(f"note: the reference arm's stated parameters give {dof} by the formula; "
                  f"the stated mobility is ~{mobility.REFERENCE_CLAIMED_DOF}\n")


EXTRACT_TOL = 1e-5


def cmd_euler(args, out, err):
    if (args.compose is None) == (args.extract is None):
        raise UsageError("euler: give exactly one of --compose or --extract")
    if args.compose is not None:
        phi, theta, psi = (math.radians(a) for a in _floats(args.compose, 3, "compose"))
        r = spatial.compose_zyx(phi, theta, psi)
        out.write("".join(",".join(fmt(float(v)) for v in row) + "\n" for row in r))
        return
    text = sys.stdin.read() if args.extract == "-" else args.extract
    vals = _floats(",".join(re.split(r"[,\s]+", text.strip(", \t\n"))), 9, "extract")
    r = [vals[0:3], vals[3:6], vals[6:9]]
    # loose enough for matrices pasted from 6-digit output
    if not spatial.is_rotation(r, tol=EXTRACT_TOL):
        raise InvalidParameterError("extract", "not a rotation matrix (orthonormal, det 1)")
    e = spatial.extract_euler(r)
    out.write(_lines([("phi_deg", math.degrees(e.phi)), ("theta_deg", math.degrees(e.theta)),
                      ("psi_deg", math.degrees(e.psi)), ("gimbal_lock", e.gimbal_lock)]))


def _link_lengths(args):
    if args.lab is not None and args.lbc is not None:
        return args.lab, args.lbc
    if args.lab is not None or args.lbc is not None:
        raise UsageError("give both --lab and --lbc")
    arm = _arm(args)
    if len(arm.joints) < 3:
        raise UsageError("arm needs shoulder and elbow links (joints 2 and 3) for --lab/--lbc")
    return arm.joints[1].link.length, arm.joints[2].link.length


def _read_rows(path, width, name):
    rows = []
    for lineno, line in enumerate(_read_text(path).splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            vals = [float(v) for v in line.split(",")]
        except ValueError:
            if lineno == 1:
                continue  # header
            raise UsageError(f"{name} line {lineno}: expected {width} numbers") from None
        if len(vals) != width or not all(math.isfinite(v) for v in vals):
            raise UsageError(f"{name} line {lineno}: expected {width} finite numbers")
        rows.append(vals)
    return rows


def cmd_ik(args, out, err):
    l_ab, l_bc = _link_lengths(args)
    if (args.target is None) == (args.targets_csv is None):
        raise UsageError("ik: give exactly one of --target or --targets-csv")
    if args.target is not None:
        target = _floats(args.target, 3, "target")
        sol = kinematics.ik(target, l_ab, l_bc, args.branch)
        reached = kinematics.fk(sol, l_ab, l_bc)
        residual = math.dist(reached, target)
        out.write(_lines([("phi_deg", math.degrees(sol.phi)),
                          ("theta_deg", math.degrees(sol.theta)),
                          ("psi_deg", math.degrees(sol.psi)),
                          ("branch", sol.branch), ("fk_residual_m", residual)]))
        return

    rows, failures = [], 0
    for x, y, z in _read_rows(args.targets_csv, 3, "targets"):
        try:
            sol = kinematics.ik((x, y, z), l_ab, l_bc, args.branch)
        except DomainError:
            failures += 1
            rows.append([fmt(x), fmt(y), fmt(z), "", "", "", args.branch, "", "unreachable"])
            continue
        residual = math.dist(kinematics.fk(sol, l_ab, l_bc), (x, y, z))
        rows.append([fmt(x), fmt(y), fmt(z), fmt(math.degrees(sol.phi)),
                     fmt(math.degrees(sol.theta)), fmt(math.degrees(sol.psi)),
                     sol.branch, fmt(residual), "ok"])
    text = _csv_text(["x", "y", "z", "phi_deg", "theta_deg", "psi_deg", "branch",
                      "fk_residual_m", "status"], rows)
    if args.csv:
        _write_text(args.csv, text)
    else:
        out.write(text)
    if failures:
        raise DomainError(f"{failures} of {len(rows)} targets unreachable")


def cmd_fk(args, out, err):
    l_ab, l_bc = _link_lengths(args)
    if (args.angles is None) == (args.angles_csv is None):
        raise UsageError("fk: give exactly one of --angles or --angles-csv")
    if args.angles is not None:
        phi, theta, psi = (math.radians(a) for a in _floats(args.angles, 3, "angles"))
        p = kinematics.fk((phi, theta, psi), l_ab, l_bc)
        out.write(_lines([("x", p.x), ("y", p.y), ("z", p.z)]))
        return
    rows = []
    for angles in _read_rows(args.angles_csv, 3, "angles"):
        p = kinematics.fk([math.radians(a) for a in angles], l_ab, l_bc)
        rows.append([fmt(a) for a in angles] + [fmt(p.x), fmt(p.y), fmt(p.z)])
    text = _csv_text(["phi_deg", "theta_deg", "psi_deg", "x", "y", "z"], rows)
    if args.csv:
        _write_text(args.csv, text)
    else:
        out.write(text)


def cmd_torque(args, out, err):
    coeffs = actuation.FrictionCoeffs(args.bc, args.bv)
    tb = actuation.torque_breakdown(args.mass, args.length, math.radians(args.theta),
                                    args.omega, args.ramp_time, args.gravity,
                                    coeffs, args.theta_dot)
    out.write(_lines([("gravity_torque_nm", tb.gravity), ("friction_torque_nm", tb.friction),
                      ("total_torque_nm", tb.total), ("min_torque_nm", tb.minimum),
                      ("angular_accel_rad_s2", args.omega / args.ramp_time)]))


def _power_notes(arm, budget):
    notes = [("convention", budget.convention.value),
             ("total_power_w", budget.total_power),
             ("total_current_ma", budget.total_current)]
    if actuation.is_reference_arm(arm):
        notes += [("table5_total_power_w", actuation.table5_total_power()),
                  ("claimed_total_power_w", actuation.CLAIMED_TOTAL_POWER_W),
                  ("note", "per-servo printed powers do not follow from rated torque "
                           "and speed under either convention; delta column shows the gap")]
    return notes


def cmd_power(args, out, err):
    arm = _arm(args)
    budget = actuation.arm_power_budget(arm, args.convention)
    ref = actuation.is_reference_arm(arm)
    rows = []
    for s in budget.servos:
        printed = actuation.TABLE5_POWER_W.get(s.name) if ref else None
        rows.append([s.name, fmt(s.torque), fmt(s.rpm), fmt(s.power),
                     fmt(printed) if printed is not None else "",
                     fmt(s.power - printed) if printed is not None else ""])
    total_printed = actuation.table5_total_power() if ref else None
    rows.append(["total", "", "", fmt(budget.total_power),
                 fmt(total_printed) if ref else "",
                 fmt(budget.total_power - total_printed) if ref else ""])
    text = _csv_text(["servo", "torque", "rpm", "power_computed",
                      "power_table5_if_reference_arm", "delta"], rows)
    notes = _lines(_power_notes(arm, budget))
    if args.csv:
        _write_text(args.csv, text)
        out.write(notes)
    else:
        out.write(text)
        err.write(notes)


def cmd_endurance(args, out, err):
    arm = _arm(args)
    budget = actuation.arm_power_budget(arm, args.convention)
    cap, volts = arm.battery.capacity_mah, arm.battery.voltage
    lines = [("convention", budget.convention.value),
             ("battery_energy_wh", cap / 1000.0 * volts),
             ("total_power_w", budget.total_power),
             ("duty", args.duty),
             ("endurance_h", actuation.endurance(cap, volts, budget.total_power, args.duty))]
    if actuation.is_reference_arm(arm):
        table5 = actuation.table5_total_power()
        lines += [("table5_total_power_w", table5),
                  ("endurance_at_table5_power_h", actuation.endurance(cap, volts, table5, args.duty)),
                  ("claimed_total_power_w", actuation.CLAIMED_TOTAL_POWER_W),
                  ("claimed_min_endurance_h", actuation.CLAIMED_MIN_ENDURANCE_H)]
    if arm.platform.operating_time_min is not None:
        lines.append(("spec_sheet_operating_time_h", arm.platform.operating_time_min / 60.0))
    out.write(_lines(lines))


def _parse_sweep(text):
    try:
        a, b, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--zeta-sweep: expected a:b:step, got {text!r}") from None
    if not step > 0 or b < a:
        raise UsageError("--zeta-sweep: need step > 0 and b >= a")
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return [round(a + i * step, 12) for i in range(n)]


_METRIC_HEADER = ["zeta", "zeta_effective", "omega_n", "overshoot_pct",
                  "closed_form_overshoot_pct", "settling_time_s", "zeta_estimate",
                  "per_cycle_decay_pct"]


def _metric_row(zeta_open, resp):
    p = resp.params
    return [fmt(zeta_open), fmt(p.zeta), fmt(p.omega_n), fmt(resp.overshoot_pct),
            fmt(oscillation.closed_form_overshoot(p.zeta)), fmt(resp.settling_time),
            fmt(resp.zeta_estimate), fmt(resp.per_cycle_decay_pct)]


def cmd_damping(args, out, err):
    def params(zeta):
        base = oscillation.SecondOrderParams(args.omega_n, zeta, args.amplitude,
                                             args.dt, args.duration)
        return oscillation.apply_accel_feedback(base, args.feedback_gain)

    if args.zeta_sweep is not None:
        zetas = _parse_sweep(args.zeta_sweep)
        results = oscillation.simulate_sweep([params(z) for z in zetas])
        text = _csv_text(_METRIC_HEADER, [_metric_row(z, r) for z, r in zip(zetas, results)])
        if args.csv:
            _write_text(args.csv, text)
        else:
            out.write(text)
        return

    if args.zeta is None:
        raise UsageError("damping: --zeta or --zeta-sweep is required")
    resp = oscillation.simulate_step(params(args.zeta))
    if args.csv:
        _write_text(args.csv, _csv_text(["t_s", "x"], ([fmt(float(t)), fmt(float(x))]
                                                       for t, x in zip(resp.t, resp.x))))
    out.write(_lines(zip(_METRIC_HEADER, [args.zeta, resp.params.zeta, resp.params.omega_n,
                                          resp.overshoot_pct,
                                          oscillation.closed_form_overshoot(resp.params.zeta),
                                          resp.settling_time, resp.zeta_estimate,
                                          resp.per_cycle_decay_pct])))
    if resp.settling_time is None:
        raise oscillation.NeverSettlesError(
            f"response never settles within the 2% band in {args.duration:.6g} s")


def cmd_report(args, out, err):
    if args.table6 is None:
        pairs = report.sample_pairs()
    else:
        pairs = report.read_pairs(_read_text(args.table6))
    rep = report.error_report(pairs)
    text = _csv_text(["joint", "theoretical_deg", "measured_deg", "rel_error_pct"],
                     [[r.joint, fmt(r.theoretical), fmt(r.measured), f"{r.rel_error_pct:.2f}"]
                      for r in rep.rows])
    if args.csv:
        _write_text(args.csv, text)
    out.write(text)
    lo, hi = report.CLAIMED_TESTING_ERROR_PCT
    out.write(_lines([
        ("mean_error_pct", f"{rep.mean_error_pct:.2f}"),
        ("max_error_pct", f"{rep.max_error_pct:.2f}"),
        ("discrepancy", f"claimed testing error {lo:g}-{hi:g}% is not reproduced by "
                        f"these rows (mean {rep.mean_error_pct:.2f}%)"),
        ("discrepancy", f"claimed final error < {report.CLAIMED_FINAL_ERROR_PCT:g}% is not "
                        f"reproduced by these rows (max {rep.max_error_pct:.2f}%)"),
    ]))


# ------------------------------------------------------------------ parser

def build_parser():
    parser = _Parser(prog="armkit", description="Robot-arm kinematics and actuation analysis.")
    parser.add_argument("--arm", help="arm config JSON (default: bundled reference arm)")
    parser.add_argument("--csv", help="write tabular output to this file")
    parser.add_argument("--convention", choices=["paper", "si"], default="paper",
                        help="power formula convention (default: paper)")

    common = _Parser(add_help=False)
    common.add_argument("--arm", default=argparse.SUPPRESS)
    common.add_argument("--csv", default=argparse.SUPPRESS)
    common.add_argument("--convention", choices=["paper", "si"], default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("dof", parents=[common], help="Grübler/Kutzbach mobility")
    p.add_argument("--lambda", dest="lam", type=int, choices=[3, 6])
    p.add_argument("--links", type=int)
    p.add_argument("--freedoms", help="comma-separated joint freedoms")
    p.add_argument("--reference", action="store_true",
                   help="use the reference arm's stated parameters")
    p.set_defaults(func=cmd_dof)

    p = sub.add_parser("euler", parents=[common], help="ZYX Euler angles <-> rotation matrix")
    p.add_argument("--compose", metavar="PHI,THETA,PSI", help="angles in degrees")
    p.add_argument("--extract", metavar="R11,...,R33",
                   help="nine row-major entries, or '-' to read them from stdin")
    p.set_defaults(func=cmd_euler)

    for name, func in (("ik", cmd_ik), ("fk", cmd_fk)):
        p = sub.add_parser(name, parents=[common],
                           help="inverse kinematics" if name == "ik" else "forward kinematics")
        p.add_argument("--lab", type=float, help="shoulder link length, m")
        p.add_argument("--lbc", type=float, help="elbow link length, m")
        p.add_argument("--branch", choices=["up", "down"], default="up")
        if name == "ik":
            p.add_argument("--target", metavar="X,Y,Z")
            p.add_argument("--targets-csv", metavar="FILE")
        else:
            p.add_argument("--angles", metavar="PHI,THETA,PSI", help="degrees")
            p.add_argument("--angles-csv", metavar="FILE")
        p.set_defaults(func=func)

    p = sub.add_parser("torque", parents=[common], help="joint torque breakdown")
    p.add_argument("--mass", type=float, required=True, help="kg")
    p.add_argument("--length", type=float, required=True, help="m")
    p.add_argument("--theta", type=float, default=0.0, help="joint angle, degrees")
    p.add_argument("--omega", type=float, default=0.0, help="target speed, rad/s")
    p.add_argument("--ramp-time", type=float, default=1.0, help="s")
    p.add_argument("--bc", type=float, default=0.0, help="Coulomb friction, N*m")
    p.add_argument("--bv", type=float, default=0.0, help="viscous friction, N*m*s/rad")
    p.add_argument("--theta-dot", type=float, default=0.0, help="joint rate, rad/s")
    p.add_argument("--gravity", type=float, default=9.80665)
    p.set_defaults(func=cmd_torque)

    p = sub.add_parser("power", parents=[common], help="per-servo power budget (CSV)")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("endurance", parents=[common], help="battery endurance")
    p.add_argument("--duty", type=float, default=1.0)
    p.set_defaults(func=cmd_endurance)

    p = sub.add_parser("damping", parents=[common], help="second-order step response")
    p.add_argument("--zeta", type=float)
    p.add_argument("--omega-n", type=float, default=2 * math.pi)
    p.add_argument("--dt", type=float, default=oscillation.DEFAULT_DT)
    p.add_argument("--duration", type=float, default=10.0)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--feedback-gain", type=float, default=0.0)
    p.add_argument("--zeta-sweep", metavar="A:B:STEP")
    p.set_defaults(func=cmd_damping)

    p = sub.add_parser("report", parents=[common], help="theoretical vs measured rotation errors")
    p.add_argument("--table6", metavar="CSV", help="joint,theoretical_deg,measured_deg")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help
        return exc.code or EXIT_OK
    except UsageError as exc:
        err.write(f"armkit: error: {exc}\n")
        return EXIT_USAGE
    try:
        args.func(args, out, err)
    except UsageError as exc:
        err.write(f"armkit: error: {exc}\n")
        return EXIT_USAGE
    except InvalidParameterError as exc:
        err.write(f"armkit: error: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        err.write(f"armkit: error: {exc}\n")
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
