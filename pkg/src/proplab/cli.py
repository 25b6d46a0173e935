"""Batch front-end: ``proplab <command> --config FILE``.

The config is flat ``key = value`` text; ``#`` starts a comment and
``duration_t`` may hold a comma-separated sweep.  Output is CSV with a
header line and floats at 17 significant digits.  Exit codes: 0 ok,
1 tolerance failure, 2 input error.
"""

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import closed_form as cf
from . import oracles, verification
from . import zeta_reg as zr
from .core import Endpoints, PhysicalConstants, SystemConfig, derive_frequencies
from .errors import ProplabError

__all__ = ["RunConfig", "ExitReport", "parse_config", "run_command", "emit_table", "main"]

COMMANDS = ("propagate", "action", "spectrum", "zeta", "verify", "demo-sine")
SYSTEM_KEYS = ("mass", "charge", "b_field", "e_field_x", "e_field_y",
               "omega_x", "omega_y", "hbar")
ENDPOINT_KEYS = ("x_a", "y_a", "x_b", "y_b")
OPTION_KEYS = ("slices", "basis", "tolerance")
KNOWN_KEYS = SYSTEM_KEYS + ENDPOINT_KEYS + ("duration_t",) + OPTION_KEYS

OK, TOLERANCE_FAILURE, INPUT_ERROR = "ok", "tolerance_failure", "input_error"
EXIT_CODES = {OK: 0, TOLERANCE_FAILURE: 1, INPUT_ERROR: 2}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    system: SystemConfig
    endpoints: Optional[Endpoints] = None
    durations: tuple = ()
    slices: Optional[int] = None
    basis: Optional[int] = None
    tolerance: Optional[float] = None
    output: Optional[str] = None

    def sweep(self):
        """Endpoints for every requested duration."""
        if self.endpoints is None:
            raise ConfigError("this command needs x_a, y_a, x_b, y_b and duration_t")
        return [self.endpoints.with_duration(T) for T in self.durations]


@dataclass
class ExitReport:
    status: str = OK
    messages: list = field(default_factory=list)
    artifacts_written: list = field(default_factory=list)

    @property
    def exit_code(self):
        return EXIT_CODES[self.status]

    def merge(self, other):
        if EXIT_CODES[other.status] > EXIT_CODES[self.status]:
            self.status = other.status
        self.messages.extend(other.messages)
        self.artifacts_written.extend(other.artifacts_written)
        return self


# ------------------------------------------------------------------ config


def _number(key, text, kind=float):
    try:
        value = kind(text)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {text!r} as {kind.__name__}") from None
    if kind is float and not np.isfinite(value):
        raise ConfigError(f"{key}: value must be finite")
    return value


def parse_config(text, slices=None, basis=None, tolerance=None, output=None):
    """Parse config text into a RunConfig; command-line options win over file keys."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value

    sys_kw = {k: _number(k, raw[k]) for k in SYSTEM_KEYS if k in raw}
    hbar = sys_kw.pop("hbar", 1.0)
    e_field = (sys_kw.pop("e_field_x", 0.0), sys_kw.pop("e_field_y", 0.0))
    try:
        system = SystemConfig(e_field=e_field, constants=PhysicalConstants(hbar), **sys_kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    durations = ()
    if "duration_t" in raw:
        durations = tuple(_number("duration_t", t) for t in raw["duration_t"].split(","))
        if any(not T > 0 for T in durations):
            raise ConfigError("duration_t values must be positive")
    endpoints = None
    given = [k for k in ENDPOINT_KEYS if k in raw]
    if given:
        if len(given) != 4 or not durations:
            raise ConfigError("endpoints need all of x_a, y_a, x_b, y_b and duration_t")
        endpoints = Endpoints(*(_number(k, raw[k]) for k in ENDPOINT_KEYS), durations[0])

    def option(name, cli_value, kind):
        if cli_value is not None:
            return cli_value
        return _number(name, raw[name], kind) if name in raw else None

    slices = option("slices", slices, int)
    basis = option("basis", basis, int)
    tolerance = option("tolerance", tolerance, float)
    if slices is not None and slices < 1:
        raise ConfigError("slices must be >= 1")
    if basis is not None and basis < 2:
        raise ConfigError("basis must be >= 2")
    if tolerance is not None and not tolerance > 0:
        raise ConfigError("tolerance must be positive")
    return RunConfig(system, endpoints, durations, slices, basis, tolerance, output)


# ------------------------------------------------------------------ output


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.16e" % v
    return str(v)


def _flatten(header, rows):
    """Expand complex columns into name_re / name_im pairs."""
    complex_cols = {i for row in rows for i, v in enumerate(row)
                    if isinstance(v, (complex, np.complexfloating))}
    out_header = []
    for i, name in enumerate(header):
        out_header += [f"{name}_re", f"{name}_im"] if i in complex_cols else [name]
    out_rows = []
    for row in rows:
        cells = []
        for i, v in enumerate(row):
            if i in complex_cols:
                v = complex(v)
                cells += [v.real, v.imag]
            else:
                cells.append(v)
        out_rows.append(cells)
    return out_header, out_rows


def emit_table(rows, destination=None, header=None):
    """Write CSV; ``rows`` is a ConvergenceTable or a list of tuples with ``header``.

    ``destination=None`` writes to stdout.
    """
    if isinstance(rows, oracles.ConvergenceTable):
        header = [rows.resolution_name, "value", "reference", "rel_error"]
        rows = [list(r) for r in rows.rows]
    header, rows = _flatten(list(header), list(rows))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([_cell(v) for v in r] for r in rows)
    text = buf.getvalue()
    report = ExitReport()
    if destination is None:
        sys.stdout.write(text)
        return report
    try:
        with open(destination, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        return ExitReport(INPUT_ERROR, [f"cannot write {destination}: {exc}"])
    report.artifacts_written.append(str(destination))
    return report


# ------------------------------------------------------------------ commands


def _cmd_propagate(cfg):
    header = ["duration_t", "K", "modulus", "phase", "fluct_modulus", "caustics_crossed"]
    if cfg.slices:
        header += ["K_sliced", "sliced_rel_error"]
    rows, msgs = [], []
    for ep in cfg.sweep():
        try:
            val = cf.propagator(cfg.system, ep)
        except ProplabError as exc:
            msgs.append(f"T={ep.duration_T}: {exc}")
            continue
        k = val.amplitude
        action = cf.general_classical_action(cfg.system, ep)
        row = [ep.duration_T, k, abs(k), float(np.angle(k)),
               abs(k * np.exp(-1j * action / cfg.system.hbar)), val.caustics_crossed]
        if cfg.slices:
            ks = oracles.sliced_propagator(cfg.system, ep, cfg.slices)
            row += [ks, abs(ks - k) / abs(k)]
        rows.append(row)
    return header, rows, msgs, None


def _applicable_actions(system):
    fr = derive_frequencies(system)
    out = {"general": cf.general_classical_action}
    if system.is_isotropic and not system.has_e_field:
        out["iso_B"] = cf.classical_action_iso_B
        if system.omega_x == 0.0:
            out["pure_B"] = cf.classical_action_pure_B
    if not system.has_e_field:
        out["aniso_B"] = cf.classical_action_aniso_B
    if system.is_isotropic and system.has_e_field and system.omega_x > 0:
        out["iso_EB"] = cf.classical_action_iso_EB
    if fr.omega_L == 0.0 and not system.has_e_field and system.omega_x > 0:
        out["1d_ho_x_plus_y"] = lambda c, e: (
            cf.classical_action_1d_ho(c.mass, c.omega_x, e.x_a, e.x_b, e.duration_T)
            + cf.classical_action_1d_ho(c.mass, c.omega_y, e.y_a, e.y_b, e.duration_T))
    return out


def _cmd_action(cfg):
    rows, msgs = [], []
    worst = 0.0
    for ep in cfg.sweep():
        try:
            oracle = oracles.action_from_path(
                cfg.system, oracles.solve_classical_bvp(cfg.system, ep, cfg.slices or 4096))
        except ProplabError as exc:
            msgs.append(f"T={ep.duration_T}: {exc}")
            continue
        rows.append([ep.duration_T, "bvp_oracle", oracle, 0.0])
        for name, fn in _applicable_actions(cfg.system).items():
            try:
                value = fn(cfg.system, ep)
            except ProplabError as exc:
                msgs.append(f"T={ep.duration_T} {name}: {exc}")
                continue
            rel = abs(value - oracle) / max(abs(oracle), 1e-300)
            worst = max(worst, rel)
            rows.append([ep.duration_T, name, value, rel])
    failed = cfg.tolerance is not None and worst > cfg.tolerance
    if failed:
        msgs.append(f"worst closed-form vs oracle rel error {worst:.3e} exceeds {cfg.tolerance:.3e}")
    return ["duration_t", "method", "action", "rel_diff_vs_oracle"], rows, msgs, failed


def _cmd_spectrum(cfg, n_levels=10):
    system = cfg.system
    basis = cfg.basis or 30
    evals = oracles.diagonalize_hamiltonian(system, basis)
    w_eff = derive_frequencies(system).omega_eff_x
    count = min(n_levels, len(evals))
    span = range(count + 1)
    levels = sorted((cf.energy_level(system, (n, m)).value, n, m) for n in span for m in span)[:count]
    window = 1e-4 * system.hbar * w_eff
    _, unmatched = oracles.match_levels(evals[:count], [v for v, _, _ in levels], window)
    rows, worst = [], 0.0
    for k, ((value, n, m), eig) in enumerate(zip(levels, evals[:count])):
        diff = abs(eig - value)
        worst = max(worst, diff / (system.hbar * w_eff))
        rows.append([k, n, m, value, float(eig), diff])
    msgs = [f"unmatched level {v:.16e}" for v in unmatched]
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-6
    failed = bool(unmatched) or worst > tol
    if worst > tol:
        msgs.append(f"max |eig - E| / hbar w_eff = {worst:.3e} exceeds {tol:.3e}")
    return ["k", "n", "m", "closed_form", "eigenvalue", "abs_diff"], rows, msgs, failed


def _cmd_zeta(cfg):
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-4
    table = [
        ("zeta(0)", lambda meth: zr.zeta_nonpositive(0, meth)),
        ("zeta(-1)", lambda meth: zr.zeta_nonpositive(-1, meth)),
        ("zeta(-2)", lambda meth: zr.zeta_nonpositive(-2, meth)),
        ("zeta'(0)", zr.zeta_prime_zero),
        ("eta(0)", lambda meth: zr.eta_value(0, meth)),
        ("eta(-1)", lambda meth: zr.eta_value(-1, meth)),
    ]
    rows, msgs, failed = [], [], False
    for name, fn in table:
        exact = float(np.real(fn("analytic").value))
        abel = fn("abel")
        diff = abs(abel.value - exact)
        failed |= diff > tol
        rows.append([name, exact, float(np.real(abel.value)), diff, abel.extrapolation_error])
    if failed:
        msgs.append(f"an Abel value differs from the analytic one by more than {tol:.3e}")
    return ["quantity", "analytic", "abel", "abs_diff", "extrapolation_error"], rows, msgs, failed


def _cmd_verify(cfg):
    results = verification.run_all(cfg.tolerance)
    rows, msgs = [], []
    for res in results:
        msgs.append(res.summary())
        for c in res.conditions:
            rows.append([res.criterion, c.label, c.value, c.limit if c.numeric else "",
                         c.passed])
    failed = not all(r.passed for r in results)
    return ["criterion", "condition", "value", "limit", "passed"], rows, msgs, failed


def _cmd_demo_sine(cfg):
    n_modes = cfg.basis or 8
    T = cfg.durations[0] if cfg.durations else 1.0
    coupling, report = oracles.sine_mode_coupling(n_modes, T)
    rows = [[n + 1, m + 1, str(Fraction(coupling.exact[n][m])), coupling.entries[n, m]]
            for n in range(n_modes) for m in range(n_modes)]
    msgs = [report.message]
    w_l = cfg.system.omega_L
    if w_l != 0.0 and abs(w_l * T) < np.pi:
        exact = w_l * T / np.sin(w_l * T)
        for k in (n_modes, 4 * n_modes, 16 * n_modes):
            with_c = oracles.sine_mode_fluctuation_ratio(w_l, T, k)
            without = oracles.sine_mode_fluctuation_ratio(w_l, T, k, include_coupling=False)
            msgs.append(f"{k} modes: F_B/F_free with coupling {with_c:.10f}, "
                        f"without {without:.10f}, exact {exact:.10f}")
    return ["n", "m", "exact_times_T2", "value"], rows, msgs, False


HANDLERS = {
    "propagate": _cmd_propagate,
    "action": _cmd_action,
    "spectrum": _cmd_spectrum,
    "zeta": _cmd_zeta,
    "verify": _cmd_verify,
    "demo-sine": _cmd_demo_sine,
}


def run_command(command, cfg):
    if command not in HANDLERS:
        return ExitReport(INPUT_ERROR, [f"unknown command {command!r}"])
    try:
        header, rows, msgs, failed = HANDLERS[command](cfg)
    except (ConfigError, ProplabError) as exc:
        return ExitReport(INPUT_ERROR, [str(exc)])
    report = ExitReport(TOLERANCE_FAILURE if failed else OK, list(msgs))
    return report.merge(emit_table(rows, cfg.output, header))


def main(argv=None):
    parser = argparse.ArgumentParser(prog="proplab", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="key = value config file")
    parser.add_argument("--output", help="CSV destination (default stdout)")
    parser.add_argument("--slices", type=int)
    parser.add_argument("--basis", type=int)
    parser.add_argument("--tolerance", type=float)
    args = parser.parse_args(argv)
    try:
        with open(args.config) as fh:
            text = fh.read()
        cfg = parse_config(text, args.slices, args.basis, args.tolerance, args.output)
    except (OSError, ConfigError) as exc:
        report = ExitReport(INPUT_ERROR, [str(exc)])
    else:
        report = run_command(args.command, cfg)
    for msg in report.messages:
        print(msg, file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
