"""Command-line front end.

Subcommands: ``section``, ``tile``, ``overlap``, ``validate``, ``witness``.
Configuration comes from an optional flat TOML file (``--config``) overlaid
with repeatable ``--set KEY=VALUE`` pairs; unknown keys are rejected. Exit
codes: 2 bad configuration, 3 numerical failure, 4 unmet ``--expect-lattice``,
5 failed mandatory validation check.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import analysis, sensitivity, wigner_analytic as wa, wigner_oracle as wo
from .errors import (DegenerateStateError, LatticeNotFoundError, NoBracketError,
                     QuadratureResolutionError, WignerAssemblyError)
from .states import StateParams, bipartite_state, normalize

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_EXPECTATION = 4
EXIT_CONFORMANCE = 5


class ConfigError(ValueError):
    pass


@dataclasses.dataclass
class RunConfig:
    """Every tunable of a run. ``nan`` ranges and ``0`` nodes mean automatic."""

    x0: float = 5.0
    p0: float = 5.0
    delta: float = 1.0
    hbar: float = 1.0
    A_re: float = 1.0 / math.sqrt(2.0)
    A_im: float = 1.0 / math.sqrt(2.0)
    B_re: float = 1.0 / math.sqrt(2.0)
    B_im: float = -1.0 / math.sqrt(2.0)
    plane: str = "X1P1"
    fixed1: float = 0.0
    fixed2: float = 0.0
    range1_min: float = math.nan
    range1_max: float = math.nan
    range2_min: float = math.nan
    range2_max: float = math.nan
    n1: int = 801
    n2: int = 801
    half_width: float = math.nan
    nodes: int = 0
    validate_points: int = 64
    seed: int = 20240601
    out: str = "."
    format: str = "csv"
    model: str = ""
    s: float = math.nan

    def update(self, values):
        types = {f.name: f.default for f in dataclasses.fields(self)}
        for key, value in values.items():
            if key not in types:
                raise ConfigError(f"unknown config key {key!r}")
            default = types[key]
            try:
                if isinstance(default, bool):
                    value = bool(value)
                elif isinstance(default, int):
                    if isinstance(value, float) and not value.is_integer():
                        raise ValueError
                    value = int(value)
                elif isinstance(default, float):
                    if isinstance(value, bool):
                        raise ValueError
                    value = float(value)
                else:
                    value = str(value)
            except (TypeError, ValueError):
                raise ConfigError(f"bad value for {key}: {value!r}") from None
            setattr(self, key, value)
        return self

    def params(self):
        return StateParams(self.x0, self.p0, self.delta, self.hbar,
                           complex(self.A_re, self.A_im), complex(self.B_re, self.B_im))

    def section_spec(self):
        plane = wa.Plane.parse(self.plane)
        p = self.params()
        ranges = []
        for name, lo, hi in zip(plane.axes, (self.range1_min, self.range2_min),
                                (self.range1_max, self.range2_max)):
            if name.startswith("x"):
                half = abs(p.x0) + 3.0 * p.delta
            else:
                half = abs(p.p0) + 3.0 * p.hbar / p.delta
            ranges.append((-half if math.isnan(lo) else lo, half if math.isnan(hi) else hi))
        return wa.SectionSpec(plane, (self.fixed1, self.fixed2), ranges[0], ranges[1],
                              self.n1, self.n2)

    def quadrature(self, max_momentum=0.0):
        p = self.params()
        H = wo.default_half_width(p) if math.isnan(self.half_width) else self.half_width
        if self.nodes == 0:
            return wo.auto_quadrature(p, max_momentum, H)
        return wo.QuadratureSpec(H, self.nodes)

    def validate(self):
        """Check every downstream precondition before any computation."""
        p = self.params()
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.model and self.model not in sensitivity.MODELS:
            raise ConfigError(f"unknown model {self.model!r}")
        if self.validate_points < 1:
            raise ConfigError("validate_points must be positive")
        self.section_spec()
        normalize(p)
        return self


def _parse_value(text):
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def load_config(path=None, sets=(), **overrides):
    cfg = RunConfig()
    if path:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}") from None
        nested = [k for k, v in data.items() if isinstance(v, dict)]
        if nested:
            raise ConfigError(f"config must be flat; found tables {nested}")
        cfg.update(data)
    pairs = {}
    for item in sets:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        pairs[key.strip()] = _parse_value(value.strip())
    cfg.update(pairs)
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    return cfg.validate()


# ---------------------------------------------------------------- output

def _atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def dumps(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def grid_csv(grid):
    lines = ["axis1,axis2,w"]
    for j, b in enumerate(grid.axis2):
        for i, a in enumerate(grid.axis1):
            lines.append(f"{a:.17g},{b:.17g},{grid.values[i, j]:.17g}")
    return "\n".join(lines) + "\n"


def gaussian_centers(spec, params):
    """Projections of the Gaussian lobe centres of W onto the section plane."""
    x0, p0 = params.x0, params.p0
    lobes = []
    for s in (1.0, -1.0):
        lobes.append({"x1": s * x0, "p1": 0.0, "x2": 0.0, "p2": s * p0})
        lobes.append({"x1": s * x0, "p1": 0.0, "x2": 0.0, "p2": -s * p0})
        lobes.append({"x1": 0.0, "p1": s * p0, "x2": s * x0, "p2": 0.0})
        lobes.append({"x1": 0.0, "p1": s * p0, "x2": -s * x0, "p2": 0.0})
    a1, a2 = spec.plane.axes
    points = sorted({(c[a1], c[a2]) for c in lobes})
    return [list(pt) for pt in points]


def section_summary(grid):
    v = grid.values
    imax = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    imin = np.unravel_index(np.argmin(v), v.shape)
    spec = grid.spec
    return {
        "spec": {"plane": spec.plane.name, "axes": list(spec.plane.axes),
                 "fixed": dict(zip(spec.plane.fixed_names, spec.fixed)),
                 "range1": list(spec.range1), "range2": list(spec.range2),
                 "n1": spec.n1, "n2": spec.n2},
        "params": _params_dict(grid.params),
        "peak_abs_w": float(abs(v[imax])),
        "peak_location": [float(grid.axis1[imax[0]]), float(grid.axis2[imax[1]])],
        "min_w": float(v[imin]),
        "min_location": [float(grid.axis1[imin[0]]), float(grid.axis2[imin[1]])],
        "gaussian_centers": gaussian_centers(spec, grid.params),
        "w_at_gaussian_centers": [_nearest_value(grid, c) for c in gaussian_centers(spec, grid.params)],
        "layout": "axis1 fastest; header axis1,axis2,w",
    }


def _nearest_value(grid, point):
    i = int(np.argmin(np.abs(grid.axis1 - point[0])))
    j = int(np.argmin(np.abs(grid.axis2 - point[1])))
    return float(grid.values[i, j])


def _params_dict(p):
    return {"x0": p.x0, "p0": p.p0, "delta": p.delta, "hbar": p.hbar,
            "A_re": p.A.real, "A_im": p.A.imag, "B_re": p.B.real, "B_im": p.B.imag}


# ---------------------------------------------------------------- commands

def cmd_section(cfg, args):
    grid = wa.section(cfg.section_spec(), normalize(cfg.params()))
    out = Path(cfg.out)
    stem = f"section_{grid.spec.plane.name}"
    summary = section_summary(grid)
    if cfg.format == "csv":
        _atomic_write(out / f"{stem}.csv", grid_csv(grid))
        _atomic_write(out / f"{stem}.json", dumps(summary))
    else:
        full = dict(summary, axis1=grid.axis1, axis2=grid.axis2, values=grid.values)
        _atomic_write(out / f"{stem}.json", dumps(full))
    print(dumps(summary), end="")
    return 0


def cmd_tile(cfg, args):
    grid = wa.section(cfg.section_spec(), normalize(cfg.params()))
    try:
        report = dict(analysis.find_zero_lattice(grid).to_dict(), lattice_found=True)
    except LatticeNotFoundError as exc:
        if args.expect_lattice:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_EXPECTATION
        report = {"lattice_found": False, "reason": str(exc), "axis": exc.axis,
                  "predicted_area": analysis.predicted_tile_area(grid.params)}
    report["checkerboard"] = dataclasses.asdict(analysis.checkerboard_detect(grid))
    _write_report(cfg, "tile.json", report)
    return 0


def _write_report(cfg, name, report):
    text = dumps(report)
    if cfg.out:
        _atomic_write(Path(cfg.out) / name, text)
    print(text, end="")


def cmd_overlap(cfg, args):
    state = normalize(cfg.params())
    if not math.isnan(cfg.s):
        model = cfg.model or "entangled"
        value = sensitivity.model_evaluator(model, state)(cfg.s)
        _write_report(cfg, "overlap_point.json", {"model": model, "s": cfg.s, "overlap": value})
        return 0
    models = ["entangled", "compass"]
    if cfg.model and cfg.model not in models:
        models.append(cfg.model)
    shifts = sensitivity.default_shifts(state.params)
    curves = {m: sensitivity.overlap_curve(m, state, shifts) for m in models}
    minima = {m: sensitivity.find_minimum_shift(c) for m, c in curves.items()}
    report = {"s_star": minima["entangled"], "s1_star": minima["compass"],
              "ratio": minima["entangled"] / minima["compass"],
              "minima": minima, "local_minima": {m: c.minima for m, c in curves.items()},
              "samples": len(shifts)}
    out = Path(cfg.out)
    if cfg.format == "csv":
        rows = ["s,overlap,model"]
        for m in models:
            rows.extend(f"{s:.17g},{v:.17g},{m}" for s, v in zip(shifts, curves[m].overlaps))
        _atomic_write(out / "overlap.csv", "\n".join(rows) + "\n")
    else:
        report = dict(report, shifts=shifts, overlaps={m: c.overlaps for m, c in curves.items()})
    _write_report(cfg, "overlap_minima.json", report)
    return 0


def _check(name, tolerance, fn, mandatory=True):
    entry = {"name": name, "tolerance": tolerance, "mandatory": mandatory}
    try:
        measured = fn()
        entry["measured"] = measured
        entry["passed"] = bool(measured <= tolerance) if tolerance is not None else True
    except (QuadratureResolutionError, ArithmeticError, ValueError) as exc:
        entry["measured"] = None
        entry["passed"] = False
        entry["error"] = f"{type(exc).__name__}: {exc}"
    return entry


def conformance_checks(cfg):
    p = cfg.params()
    state = normalize(p)
    rng = np.random.default_rng(cfg.seed)
    m = cfg.validate_points
    pts = wa.PhasePoint(rng.uniform(-p.x0 - 2, p.x0 + 2, m), rng.uniform(-p.p0 - 2, p.p0 + 2, m),
                        rng.uniform(-p.x0 - 2, p.x0 + 2, m), rng.uniform(-p.p0 - 2, p.p0 + 2, m))
    closed = wa.wigner(*pts, state)
    peak = 1.0 / (math.pi * p.hbar) ** 2

    def oracle():
        pmax = float(max(np.max(np.abs(pts.p1)), np.max(np.abs(pts.p2))))
        num = wo.wigner_numeric_2mode(pts, state, quad=cfg.quadrature(pmax))
        return float(np.max(np.abs(num - closed)) / max(np.max(np.abs(closed)), 1e-300))

    def norm4d():
        return abs(wa.normalization(state) - 1.0)

    def bound():
        return float(np.max(np.abs(closed)) - peak)

    def symmetry():
        scale = float(np.max(np.abs(closed)))
        par = wa.wigner(-pts.x1, -pts.p1, -pts.x2, -pts.p2, state)
        ex = wa.wigner(pts.x2, pts.p2, pts.x1, pts.p1, normalize(p.with_weights(p.B, p.A)))
        return float(max(np.max(np.abs(par - closed)), np.max(np.abs(ex - closed))) / scale)

    def marginal():
        xs = np.linspace(-p.x0, p.x0, 5)
        marg = analysis.marginal_position(state, xs, xs)
        ref = np.abs(bipartite_state(xs[:, None], xs[None, :], state)) ** 2
        return float(np.max(np.abs(marg - ref)))

    def printed_diagonal():
        pr = wa.printed_decomposition(pts, state)
        ok = wa.wigner_total(pts, state)
        return float(np.max(np.abs(pr.envelope * (pr.wd1 + pr.wd2) - ok.envelope * (ok.wd1 + ok.wd2)))
                     / np.max(np.abs(closed)))

    def printed_coherence():
        pr = wa.printed_decomposition(pts, state)
        ok = wa.wigner_total(pts, state)
        diff = pr.envelope * pr.damping * (pr.wc1 + pr.wc2) - ok.envelope * ok.damping * (ok.wc1 + ok.wc2)
        return float(np.max(np.abs(diff)) / np.max(np.abs(closed)))

    def printed_general_overlap():
        s = 0.1
        d = sensitivity.equal_shift(s, p)
        printed = sensitivity.printed_general_overlap(state, d)
        zero = sensitivity.printed_general_overlap(state, sensitivity.equal_shift(0.0, p))
        return abs(printed / zero - sensitivity.overlap_displaced_numeric(state, d))

    def compass_at_zero():
        return abs(float(sensitivity.compass_overlap(0.0, p.x0)) - 1.0)

    return [
        _check("oracle_equivalence_rel_peak", 1e-6, oracle),
        _check("normalization_4d_abs_error", 1e-3, norm4d),
        _check("bound_excess_over_inverse_pi_hbar_sq", 1e-9, bound),
        _check("parity_exchange_rel", 1e-12, symmetry),
        _check("position_marginal_abs_error", 1e-5, marginal),
        _check("printed_diagonal_blocks_rel_peak", None, printed_diagonal, mandatory=False),
        _check("printed_coherence_weights_rel_peak", None, printed_coherence, mandatory=False),
        _check("printed_general_overlap_shape_abs", None, printed_general_overlap, mandatory=False),
        _check("printed_compass_overlap_at_zero_minus_one", None, compass_at_zero, mandatory=False),
    ]


def cmd_validate(cfg, args):
    checks = conformance_checks(cfg)
    ok = all(c["passed"] for c in checks if c["mandatory"])
    _write_report(cfg, "validate.json", {"passed": ok, "checks": checks,
                                         "params": _params_dict(cfg.params())})
    return 0 if ok else EXIT_CONFORMANCE


def cmd_witness(cfg, args):
    report = analysis.variance_witness(normalize(cfg.params())).to_dict()
    a, b = complex(cfg.A_re, cfg.A_im), complex(cfg.B_re, cfg.B_im)
    report["weights_input"] = {"A_re": a.real, "A_im": a.imag, "B_re": b.real, "B_im": b.imag}
    report["weights_renormalized"] = not math.isclose(abs(a) ** 2 + abs(b) ** 2, 1.0, rel_tol=1e-12)
    _write_report(cfg, "witness.json", report)
    return 0


COMMANDS = {"section": cmd_section, "tile": cmd_tile, "overlap": cmd_overlap,
            "validate": cmd_validate, "witness": cmd_witness}


def build_parser():
    parser = argparse.ArgumentParser(prog="subplanck", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", metavar="PATH")
    parser.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE")
    parser.add_argument("--plane")
    parser.add_argument("--out", metavar="DIR")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--expect-lattice", action="store_true")
    parser.add_argument("--model", choices=sensitivity.MODELS)
    parser.add_argument("--s", type=float, metavar="VALUE")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.sets, plane=args.plane, out=args.out,
                          format=args.format, model=args.model, s=args.s)
    except (ConfigError, DegenerateStateError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](cfg, args)
    except (WignerAssemblyError, QuadratureResolutionError, NoBracketError,
            ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
