"""Command-line front end emitting deterministic CSV.

Exit status: 0 success, 1 validation failure, 2 bad configuration, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import algebra, correlations, dynamics
from .couplings import CouplingError, thermal_occupation
from .geometry import DetectorSet, edge_normal_detectors, make_equilateral
from .validation import resolve_couplings, run_checks

MODES = ("validate", "steady", "evolve", "sweep-x", "sweep-nbar", "corr")

DEFAULT_GRIDS = {
    "sweep-x": (0.0, 3.0, 601),
    "sweep-nbar": (0.1, 10.0, 100),
    "evolve": (0.0, 10.0, 11),
}

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    mode: str
    nbar: float | None = None
    omega0_over_kT: float | None = None
    u: float = 2.0
    gamma: float = 1.0
    chi_override: float | None = None
    delta_override: float | None = None
    detectors: list = field(default_factory=list)
    grid: tuple | None = None
    output_path: str = "-"

    def resolved_nbar(self) -> float:
        if self.nbar is not None:
            return float(self.nbar)
        return thermal_occupation(self.omega0_over_kT)

    def validate(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if (self.nbar is None) == (self.omega0_over_kT is None):
            raise ConfigError("give exactly one of nbar and omega0_over_kT")
        try:
            nbar = self.resolved_nbar()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if nbar < 0:
            raise ConfigError("nbar must be nonnegative")
        if self.mode in ("validate", "steady", "corr") and nbar <= 0:
            raise ConfigError(f"mode {self.mode} needs nbar > 0")
        if not self.u > 0:
            raise ConfigError("u must be positive")
        if not self.gamma > 0:
            raise ConfigError("gamma must be positive")
        if self.grid is not None:
            start, stop, count = self.grid
            if int(count) != count or count < 2:
                raise ConfigError("grid count must be an integer >= 2")
            if not stop > start:
                raise ConfigError("grid stop must exceed start")
            if self.mode == "sweep-nbar" and start <= 0:
                raise ConfigError("nbar grid must be positive")
            if self.mode == "evolve" and start < 0:
                raise ConfigError("times must be nonnegative")
        if self.mode == "corr" and not 2 <= len(self.detectors) <= 3:
            raise ConfigError("corr needs 2 or 3 detectors")

    def grid_values(self):
        start, stop, count = self.grid if self.grid is not None else DEFAULT_GRIDS[self.mode]
        return np.linspace(start, stop, int(count))

    def echo(self) -> str:
        d = asdict(self)
        d["nbar_resolved"] = self.resolved_nbar()
        if d["grid"] is not None:
            d["grid"] = list(d["grid"])
        return json.dumps(d, sort_keys=True, default=_json_default)


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(repr(o))


_SQ3 = np.sqrt(3.0)
_ALIASES = {
    "r21": (1.0, 0.0, 0.0),
    "r31": (0.5, _SQ3 / 2, 0.0),
    "r32": (-0.5, _SQ3 / 2, 0.0),
    "normal": (0.0, 0.0, 1.0),
}


def parse_detector(text: str):
    """A detector as ``x,y,z`` or a named direction of the canonical triangle.

    Names: r21, r31, r32, normal, and the edge normals en13, en23, en12.
    A leading '-' flips the direction.
    """
    text = text.strip()
    sign = 1.0
    name = text
    if name.startswith("-") and not name[1:2].isdigit() and name[1:2] != ".":
        sign, name = -1.0, name[1:]
    if name in _ALIASES:
        return tuple(sign * c for c in _ALIASES[name])
    if name in ("en13", "en23", "en12"):
        dets = edge_normal_detectors(make_equilateral(1.0))
        k = ("en13", "en23", "en12").index(name)
        return tuple(float(sign * c) for c in dets[k])
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"cannot parse detector {text!r}") from None
    if len(vals) != 3 or not np.linalg.norm(vals) > 0:
        raise ConfigError(f"detector {text!r} must be a nonzero 3-vector")
    return vals


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, str):
        return v
    return f"{float(v) + 0.0:.15g}"


def _write_csv(cfg: RunConfig, header, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# config: {cfg.echo()}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _couplings(cfg: RunConfig, nbar=None):
    nbar = cfg.resolved_nbar() if nbar is None else nbar
    return resolve_couplings(cfg.u, cfg.gamma, nbar, cfg.chi_override, cfg.delta_override)


def run_validate(cfg: RunConfig):
    checks = run_checks(cfg.u, cfg.gamma, cfg.resolved_nbar(), cfg.chi_override, cfg.delta_override)
    rows = [(c.name, c.passed, c.max_abs_error, c.tolerance, c.note) for c in checks]
    text = _write_csv(cfg, ["check", "passed", "max_abs_error", "tolerance", "note"], rows)
    return text, all(c.passed for c in checks)


def run_steady(cfg: RunConfig):
    nbar = cfg.resolved_nbar()
    _, cs = _couplings(cfg)
    chi, delta = float(cs.chi[0, 1]), float(cs.delta[0, 1])
    gen = dynamics.build_generator_collective(cs.gamma, nbar, chi, delta)
    rho, kdim = dynamics.steady_state(gen)
    if abs(chi - 1.0) < 1e-12:
        analytic = np.zeros(8)
        analytic[[a - 1 for a in algebra.SYMMETRIC]] = dynamics.analytic_steady_dicke(nbar)
    else:
        analytic = dynamics.analytic_steady_extended(nbar)
    rows = []
    for a in range(1, 9):
        p = rho[a - 1, a - 1].real
        rows.append((f"R{a}{a}", p, analytic[a - 1], abs(p - analytic[a - 1])))
    for name, val in (("R32", rho[1, 2]), ("R65", rho[4, 5])):
        rows.append((f"abs_{name}", abs(val), 0.0, abs(val)))
    rows.append(("null_dimension", kdim, "", ""))
    rows.append(("chi", chi, "", ""))
    rows.append(("delta", delta, "", ""))
    return _write_csv(cfg, ["quantity", "numeric", "analytic", "abs_diff"], rows), True


def run_evolve(cfg: RunConfig):
    nbar = cfg.resolved_nbar()
    _, cs = _couplings(cfg)
    gen = dynamics.build_generator_collective(cs.gamma, nbar, float(cs.chi[0, 1]), float(cs.delta[0, 1]))
    rho0 = dynamics.ground_state(8)
    rows = []
    for t in cfg.grid_values():
        rho = dynamics.evolve(gen, rho0, float(t))
        pops = np.diag(rho).real
        rows.append((t, *pops, pops[2] + pops[3] + pops[5] + pops[6]))
    header = ["t"] + [f"p{a}" for a in range(1, 9)] + ["antisymmetric"]
    return _write_csv(cfg, header, rows), True


def run_sweep_x(cfg: RunConfig):
    rows = []
    for xp in cfg.grid_values():
        x = np.pi * xp
        rows.append((xp, correlations.scenario_g2_fig3(x), correlations.scenario_g3_fig3(x)))
    return _write_csv(cfg, ["x_over_pi", "g2", "g3"], rows), True


def run_sweep_nbar(cfg: RunConfig):
    rows = []
    for n in cfg.grid_values():
        g2, g3 = correlations.dicke_g2(n), correlations.dicke_g3(n)
        rows.append((n, g2, g3, correlations.dicke_ratio(n), correlations.dicke_intensity(n)))
    return _write_csv(cfg, ["nbar", "g2_dicke", "g3_dicke", "ratio", "intensity"], rows), True


def run_corr(cfg: RunConfig):
    nbar = cfg.resolved_nbar()
    dets = DetectorSet(tuple(cfg.detectors))
    us = cfg.grid_values() if cfg.grid is not None else [cfg.u]
    rows = []
    for u in us:
        geom, cs = resolve_couplings(float(u), cfg.gamma, nbar, cfg.chi_override, cfg.delta_override)
        rho, _ = dynamics.steady_state(dynamics.build_generator_bare(cs))
        g2 = correlations.g2_general(rho, geom, dets[0], dets[1])
        g2c = correlations.g2_closed_form(geom, dets[0], dets[1])
        row = [u, g2, g2c, abs(g2 - g2c)]
        if len(dets) == 3:
            g3 = correlations.g3_general(rho, geom, *dets)
            g3c = correlations.g3_closed_form(geom, *dets)
            row += [g3, g3c, abs(g3 - g3c)]
        rows.append(row)
    header = ["u", "g2", "g2_closed_form", "g2_abs_diff"]
    if len(dets) == 3:
        header += ["g3", "g3_closed_form", "g3_abs_diff"]
    return _write_csv(cfg, header, rows), True


RUNNERS = {
    "validate": run_validate,
    "steady": run_steady,
    "evolve": run_evolve,
    "sweep-x": run_sweep_x,
    "sweep-nbar": run_sweep_nbar,
    "corr": run_corr,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thermal-trimer", description=__doc__)
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    p.add_argument("--nbar", type=float)
    p.add_argument("--omega0-over-kT", dest="omega0_over_kT", type=float)
    p.add_argument("--u", type=float, help="side length omega0*r/c")
    p.add_argument("--gamma", type=float)
    p.add_argument("--chi", dest="chi_override", type=float)
    p.add_argument("--delta", dest="delta_override", type=float)
    p.add_argument("--detector", dest="detectors", action="append",
                   help="x,y,z or r21/r31/r32/normal/en13/en23/en12; flip a name with "
                        "a '-' prefix written as --detector=-r21")
    p.add_argument("--grid", nargs=3, type=float, metavar=("START", "STOP", "COUNT"))
    p.add_argument("-o", "--output", dest="output_path")
    return p


def resolve_config(args, file_values=None) -> RunConfig:
    values = dict(file_values or {})
    unknown = set(values) - set(RunConfig.__dataclass_fields__) - {"mode"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    flags = {k: v for k, v in vars(args).items() if v is not None and k not in ("mode", "config")}
    if "nbar" in flags or "omega0_over_kT" in flags:
        values.pop("nbar", None)
        values.pop("omega0_over_kT", None)
    values.update(flags)
    values["mode"] = args.mode
    if values.get("nbar") is None and values.get("omega0_over_kT") is None:
        values["nbar"] = 1.0
    if "detectors" in values:
        values["detectors"] = [
            parse_detector(d) if isinstance(d, str) else tuple(float(c) for c in d)
            for d in values["detectors"]
        ]
    if values.get("grid") is not None:
        g = values["grid"]
        if len(g) != 3:
            raise ConfigError("grid needs start, stop, count")
        values["grid"] = (float(g[0]), float(g[1]), int(g[2]) if float(g[2]).is_integer() else g[2])
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    file_values = None
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                file_values = json.load(fh)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        except json.JSONDecodeError as exc:
            print(f"error: bad config file: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    try:
        cfg = resolve_config(args, file_values)
    except (ConfigError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        text, ok = RUNNERS[cfg.mode](cfg)
    except CouplingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if cfg.output_path == "-":
            sys.stdout.write(text)
        else:
            with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if ok else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
