"""Parameter sweeps and order-convergence studies written as CSV.

A sweep evaluates every closure on the moments of a hidden-truth
distribution for a range of one distribution parameter and records the
relative error of the predicted moment ``u_{M+1}``.

Config files are flat ``section.key = value`` text::

    family.kind = bimodal
    family.rho1 = 0.4
    sweep.parameter = v2
    sweep.start = 0.5
    sweep.stop = 4
    sweep.step = 0.05
    closure.orders = 4, 6
    closure.names = gramian_even, extended_even, grad, maxent
    maxent.lo = -4
    maxent.hi = 6
    maxent.points = 1000
    output.path = bimodal_fig2.csv

``sweep.values = 2, 4`` replaces start/stop/step for convergence studies.
"""
import csv
import io
import math
import re
from dataclasses import dataclass, field, fields
from typing import List, Optional, Sequence

from .baselines import Grid
from .closures import ClosureSpec, close
from .distributions import FAMILIES, moments, with_parameter
from .errors import ClosureError, ConfigError, ZeroTruthError
from .hyperbolicity import verdict

CSV_HEADER = ("parameter", "M", "closure", "chi", "u_truth", "u_pred",
              "rel_error", "verdict")


@dataclass(frozen=True)
class SweepConfig:
    family: object
    parameter: str
    orders: Sequence[int]
    closures: Sequence[ClosureSpec]
    start: Optional[float] = None
    stop: Optional[float] = None
    step: Optional[float] = None
    values: Optional[Sequence[float]] = None
    maxent_grid: Optional[Grid] = None
    output_path: Optional[str] = None

    def __post_init__(self):
        if not self.closures:
            raise ConfigError("at least one closure is required")
        if not self.orders:
            raise ConfigError("at least one order M is required")
        names = {f.name for f in fields(self.family)}
        if self.parameter not in names:
            raise ConfigError(f"{type(self.family).__name__} has no parameter {self.parameter!r}")
        if self.values is None:
            if None in (self.start, self.stop, self.step):
                raise ConfigError("sweep needs start, stop and step (or explicit values)")
            if not self.step > 0:
                raise ConfigError("sweep step must be positive")
            if self.stop < self.start:
                raise ConfigError("sweep stop must not be below start")
        for spec in self.closures:
            if not any(spec.accepts_order(M) for M in self.orders):
                raise ConfigError(f"no order in {list(self.orders)} fits closure {spec.kind}")

    def parameter_values(self):
        """Sweep points; ranges include both ends and avoid float drift."""
        if self.values is not None:
            return [float(v) for v in self.values]
        count = int(round((self.stop - self.start) / self.step)) + 1
        return [round(self.start + i * self.step, 12) for i in range(count)]


@dataclass
class ResultRow:
    parameter_value: float
    M: int
    closure_name: str
    chi: Optional[float]
    u_truth: float
    u_pred: float
    rel_error: float
    verdict: str

    def as_csv(self):
        return [fmt(self.parameter_value), str(self.M), self.closure_name,
                "" if self.chi is None else fmt(self.chi), fmt(self.u_truth),
                fmt(self.u_pred), fmt(self.rel_error), self.verdict]


def fmt(x):
    """17 significant digits, round-trip safe; ``nan`` for missing values."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return format(float(x) + 0.0, ".17g")


def rel_error(u_pred, u_truth):
    """``|u_pred - u_truth| / |u_truth|``."""
    if abs(u_truth) <= 1e-14 * abs(u_pred) or u_truth == 0.0:
        raise ZeroTruthError(f"reference value {u_truth!r} is zero")
    return abs(u_pred - u_truth) / abs(u_truth)


def _error_tag(exc):
    name = type(exc).__name__.removesuffix("Error")
    return "error:" + re.sub(r"(?<!^)(?=[A-Z])", "_", name).lower()


def evaluate(u, u_truth, spec, grid=None):
    """One row's numbers: ``(u_pred, rel_error, chi_used, verdict_text)``."""
    M = len(u) - 1
    if spec.kind == "maxent" and spec.grid is None and grid is not None:
        spec = ClosureSpec("maxent", grid=grid)
    chi = spec.resolve_chi(M)
    try:
        res = close(u, spec)
    except ClosureError as exc:
        return math.nan, math.nan, chi, _error_tag(exc)

    if spec.is_gramian:
        try:
            text = verdict(u, spec).status
        except ClosureError as exc:
            text = "verdict_" + _error_tag(exc)
    else:
        text = "ok"
    try:
        err = rel_error(res.u_next, u_truth)
    except ZeroTruthError:
        err = math.nan
        text += ";zero_truth"
    return res.u_next, err, res.chi_used, text


def _rows_for(cfg, value):
    spec = with_parameter(cfg.family, cfg.parameter, value)
    top = max(cfg.orders) + 1
    truth = moments(spec, top)
    rows = []
    for M in cfg.orders:
        u = truth[:M + 1]
        for cs in cfg.closures:
            if not cs.accepts_order(M):
                continue
            pred, err, chi, text = evaluate(u, truth[M + 1], cs, cfg.maxent_grid)
            rows.append(ResultRow(value, M, cs.kind, chi, float(truth[M + 1]),
                                  pred, err, text))
    return rows


def run_sweep(cfg):
    """Rows ordered by parameter value, then order M, then closure."""
    rows = []
    for value in cfg.parameter_values():
        rows.extend(_rows_for(cfg, value))
    return rows


def run_convergence(cfg):
    """Convergence study: fixed parameter values across the order list."""
    if cfg.values is None:
        raise ConfigError("convergence study needs explicit sweep.values")
    return run_sweep(cfg)


def to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.as_csv())
    return buf.getvalue()


def write_csv(rows, path):
    with open(path, "w", newline="") as fh:
        fh.write(to_csv(rows))


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# --------------------------------------------------------------------------
# config files


def parse_config_text(text):
    """Parse flat ``section.key = value`` lines into a dict of strings."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _floats(s):
    return [float(x) for x in s.split(",") if x.strip()]


def config_from_dict(d):
    try:
        kind = d["family.kind"].strip().lower().replace("-", "_")
        if kind not in FAMILIES:
            raise ConfigError(f"unknown family {kind!r}")
        cls = FAMILIES[kind]
        known = {f.name for f in fields(cls)}
        params = {}
        for key, value in d.items():
            if key.startswith("family.") and key != "family.kind":
                name = key.split(".", 1)[1]
                if name not in known:
                    raise ConfigError(f"{kind} has no parameter {name!r}")
                params[name] = float(value)
        family = cls(**params)

        chi = float(d["closure.chi"]) if "closure.chi" in d else None
        closures = []
        for name in d["closure.names"].split(","):
            name = name.strip()
            if name:
                spec = ClosureSpec(name)
                if chi is not None and spec.kind.startswith("extended"):
                    spec = ClosureSpec(spec.kind, chi=chi)
                closures.append(spec)
        orders = [int(x) for x in d["closure.orders"].split(",") if x.strip()]

        grid = None
        if "maxent.lo" in d:
            grid = Grid(float(d["maxent.lo"]), float(d["maxent.hi"]),
                        int(d.get("maxent.points", "1000")))

        values = _floats(d["sweep.values"]) if "sweep.values" in d else None
        get = lambda k: float(d[k]) if k in d else None
        return SweepConfig(
            family=family,
            parameter=d["sweep.parameter"],
            orders=orders,
            closures=closures,
            start=get("sweep.start"),
            stop=get("sweep.stop"),
            step=get("sweep.step"),
            values=values,
            maxent_grid=grid,
            output_path=d.get("output.path"),
        )
    except KeyError as exc:
        raise ConfigError(f"missing config key {exc.args[0]!r}") from None
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load_config(path):
    with open(path) as fh:
        return config_from_dict(parse_config_text(fh.read()))
