"""Scenario files: a sectioned TOML format describing one verification run.

A scenario supplies the chart, the basis fields, the gauge connection,
optional Lorentz / U(1) / coordinate-map data, sampling and numerics
settings, and the list of checks to run.  All expression strings use the
grammar documented in :mod:`cqgeom.fields`.

Section layout (key names frozen at v1)::

    [chart]     names = ["t", "x", "y", "z"]
    [basis]     s0..s3 = [w, e1, e2, e3 expression strings]
    [omega]     coupling = 1.0; w0..w3 = [4 expression strings]
    [lorentz]   generator = [4 expression strings]        (optional)
    [u1]        phi = "expression"                        (optional)
    [map]       forward = [4 exprs]; jacobian = [16 exprs, row-major]
    [sampling]  count = 25; seed = 0; box = [[lo, hi] x 4]; points = [...]
    [numerics]  fd_step = 1e-4; fd_order = 4; tol = {check = value, ...}
    [checks]    names = ["all"] or explicit list
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .algebra import Biquaternion
from .fields import Chart, ExprError, ExprBiquatField, FDConfig, ScalarExprField
from .gauge import GaugeConnection, check_omega_condition
from .geometry import BasisField, DegenerateMetricError, metric_at
from .transform import CoordinateMap, LorentzField, U1Field

__all__ = ["ScenarioError", "Scenario", "load_scenario", "bundled_scenario"]

DEFAULT_COUNT = 25
DEFAULT_BOX = ((-1.0, 1.0),) * 4


class ScenarioError(ValueError):
    """Scenario file is unreadable, malformed, or violates an invariant."""


def bundled_scenario(name: str) -> str:
    """Path of a fixture scenario shipped with the package (e.g. 'flat')."""
    from pathlib import Path

    path = Path(__file__).parent / "scenarios" / f"{name}.scn"
    if not path.is_file():
        raise ScenarioError(f"no bundled scenario named {name!r}")
    return str(path)


@dataclass(frozen=True)
class Scenario:
    path: str
    chart: Chart
    basis: BasisField
    connection: GaugeConnection
    lorentz: LorentzField | None
    u1: U1Field | None
    coord_map: CoordinateMap | None
    points: np.ndarray  # (N, 4) sample points
    seed: int
    fd: FDConfig
    tolerances: dict  # per-check overrides
    check_names: tuple  # requested names, or ("all",)
    box: tuple = DEFAULT_BOX

    def echo(self) -> dict:
        """Stable summary of the inputs, embedded in reports."""
        return {
            "path": self.path,
            "chart": list(self.chart.names),
            "seed": self.seed,
            "points": len(self.points),
            "fd_step": [float(h) for h in self.fd.steps],
            "fd_order": self.fd.order,
            "checks": list(self.check_names),
            "has_lorentz": self.lorentz is not None,
            "has_u1": self.u1 is not None,
            "has_map": self.coord_map is not None,
        }


def _need(table: dict, key: str, section: str):
    if key not in table:
        raise ScenarioError(f"missing key {key!r} in [{section}]")
    return table[key]


def _expr_list(raw, n: int, chart: Chart, where: str) -> list[ScalarExprField]:
    if not isinstance(raw, list) or len(raw) != n or not all(
        isinstance(e, str) for e in raw
    ):
        raise ScenarioError(f"{where} must be a list of {n} expression strings")
    out = []
    for k, text in enumerate(raw):
        try:
            out.append(ScalarExprField(text, chart))
        except ExprError as exc:
            raise ScenarioError(f"{where}[{k}]: {exc}") from None
    return out


def _biquat_field(raw, chart: Chart, where: str) -> ExprBiquatField:
    if not isinstance(raw, list) or len(raw) != 4 or not all(
        isinstance(e, str) for e in raw
    ):
        raise ScenarioError(f"{where} must be a list of 4 expression strings")
    try:
        return ExprBiquatField(raw, chart)
    except ExprError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def _sample_points(table: dict, seed: int, count: int, box) -> np.ndarray:
    explicit = table.get("points", [])
    pts = []
    for k, p in enumerate(explicit):
        arr = np.asarray(p, dtype=float)
        if arr.shape != (4,):
            raise ScenarioError(f"sampling.points[{k}] must have 4 coordinates")
        pts.append(arr)
    if count > 0:
        rng = np.random.default_rng(seed)
        lo = np.array([b[0] for b in box])
        hi = np.array([b[1] for b in box])
        pts.extend(rng.uniform(lo, hi, size=(count, 4)))
    if not pts:
        raise ScenarioError("scenario produces no sample points")
    return np.asarray(pts)


def load_scenario(path: str, *, seed: int | None = None,
                  count: int | None = None, fd_step: float | None = None,
                  fd_order: int | None = None, tol: float | None = None,
                  checks: tuple | None = None,
                  validate_points: int = 5) -> Scenario:
    """Parse, compile and validate a scenario file.

    Keyword overrides mirror the CLI flags.  Validation evaluates the
    module invariants (minus-part basis, nondegenerate metric, omega
    condition, unit Lorentz map, Jacobian consistency) on a handful of
    sample points before any check runs.
    """
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"{path}: TOML parse error: {exc}") from None

    chart_tbl = _need(data, "chart", "scenario")
    names = _need(chart_tbl, "names", "chart")
    try:
        chart = Chart(names=tuple(names))
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"[chart] {exc}") from None

    basis_tbl = _need(data, "basis", "scenario")
    s_fields = tuple(
        _biquat_field(_need(basis_tbl, f"s{mu}", "basis"), chart, f"basis.s{mu}")
        for mu in range(4)
    )
    basis = BasisField(s=s_fields)

    omega_tbl = data.get("omega", {})
    coupling = float(omega_tbl.get("coupling", 1.0))
    w_fields = []
    for mu in range(4):
        raw = omega_tbl.get(f"w{mu}", ["0", "0", "0", "0"])
        w_fields.append(_biquat_field(raw, chart, f"omega.w{mu}"))
    connection = GaugeConnection(omega=tuple(w_fields), coupling=coupling)

    lorentz = None
    if "lorentz" in data:
        gen = _biquat_field(_need(data["lorentz"], "generator", "lorentz"),
                            chart, "lorentz.generator")
        lorentz = LorentzField(generator=gen)

    u1 = None
    if "u1" in data:
        phi_raw = _need(data["u1"], "phi", "u1")
        if not isinstance(phi_raw, str):
            raise ScenarioError("u1.phi must be an expression string")
        try:
            u1 = U1Field(phi=ScalarExprField(phi_raw, chart))
        except ExprError as exc:
            raise ScenarioError(f"u1.phi: {exc}") from None

    coord_map = None
    if "map" in data:
        fwd = _expr_list(_need(data["map"], "forward", "map"), 4, chart,
                         "map.forward")
        jac = _expr_list(_need(data["map"], "jacobian", "map"), 16, chart,
                         "map.jacobian")
        coord_map = CoordinateMap(forward=tuple(fwd), jacobian=tuple(jac))

    sampling = data.get("sampling", {})
    eff_seed = seed if seed is not None else int(sampling.get("seed", 0))
    eff_count = count if count is not None else int(sampling.get("count",
                                                                 DEFAULT_COUNT))
    box_raw = sampling.get("box", [list(b) for b in DEFAULT_BOX])
    if len(box_raw) != 4 or any(len(b) != 2 or b[0] >= b[1] for b in box_raw):
        raise ScenarioError("sampling.box must be 4 [lo, hi] pairs with lo < hi")
    box = tuple((float(b[0]), float(b[1])) for b in box_raw)
    points = _sample_points(sampling, eff_seed, eff_count, box)

    numerics = data.get("numerics", {})
    step = fd_step if fd_step is not None else float(numerics.get("fd_step", 1e-4))
    order = fd_order if fd_order is not None else int(numerics.get("fd_order", 4))
    try:
        fd = FDConfig(step=step, order=order)
    except ValueError as exc:
        raise ScenarioError(f"[numerics] {exc}") from None
    tolerances = {str(k): float(v) for k, v in numerics.get("tol", {}).items()}
    if tol is not None:
        tolerances["*"] = float(tol)

    if checks is not None:
        check_names = tuple(checks)
    else:
        check_names = tuple(data.get("checks", {}).get("names", ["all"]))
    if not check_names:
        check_names = ("all",)

    scenario = Scenario(
        path=path, chart=chart, basis=basis, connection=connection,
        lorentz=lorentz, u1=u1, coord_map=coord_map, points=points,
        seed=eff_seed, fd=fd, tolerances=tolerances, check_names=check_names,
        box=box,
    )
    _validate(scenario, validate_points)
    return scenario


def _validate(sc: Scenario, n_points: int) -> None:
    """Load-time invariant checks at the first few sample points."""
    for p in sc.points[:max(1, n_points)]:
        for mu, f in enumerate(sc.basis.s):
            v = f(p)
            bad = v.plus_part()
            if max(abs(bad.w), abs(bad.x), abs(bad.y), abs(bad.z)) > 1e-10:
                raise ScenarioError(
                    f"basis.s{mu} is not in the minus part at {p.tolist()!r}"
                )
        try:
            metric_at(sc.basis, p)
        except DegenerateMetricError as exc:
            raise ScenarioError(str(exc)) from None
        res = check_omega_condition(sc.connection, p)
        if res > 1e-10:
            raise ScenarioError(
                f"omega violates the scalar-part condition at {p.tolist()!r} "
                f"(residual {res:.3e})"
            )
        if sc.lorentz is not None:
            gen = sc.lorentz.generator(p)
            if abs(gen.w) > 1e-12:
                raise ScenarioError(
                    f"lorentz.generator has a scalar part at {p.tolist()!r}"
                )
            if sc.lorentz.unit_residual(p) > 1e-10:
                raise ScenarioError(f"lorentz map is not unit at {p.tolist()!r}")
        if sc.u1 is not None:
            sc.u1.angle(p)  # raises if not real
        if sc.coord_map is not None:
            sc.coord_map.jacobian_at(p)  # raises if singular
            res = sc.coord_map.fd_jacobian_residual(p, sc.fd)
            if res > 1e-5:
                raise ScenarioError(
                    f"map.jacobian disagrees with finite differences of "
                    f"map.forward at {p.tolist()!r} (residual {res:.3e})"
                )
