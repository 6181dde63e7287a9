"""Named experiments emitting deterministic CSV data plus a JSON sidecar.

Each experiment reproduces one figure-style sweep with documented column
schemas (see README). Outputs are written atomically (temp file + rename)
and are byte-identical across repeated runs with the same configuration on
the same build. The sidecar echoes the configuration and records the
consistency checks the run performed.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
import time
from dataclasses import dataclass

import numpy as np

from elaa import __version__, _kernels, beams, gain, multiplexing, regions
from elaa.exceptions import ConfigError, ElaaError
from elaa.geometry import ArraySpec
from elaa.quadrature import QuadratureConfig
from elaa.utils import power_db

EXPERIMENTS = (
    "gain-sweep",
    "scaling-law",
    "array-gain",
    "focus",
    "multiplex",
    "sum-se",
    "distances",
)

SIDECAR_SCHEMA_VERSION = 1


class ExperimentCheckError(ElaaError, RuntimeError):
    """An embedded sanity assertion of an experiment failed."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat experiment settings; defaults reproduce the reference setups.

    The default array is 10^4 antennas of area (wavelength/4)^2 at a
    0.1 m wavelength, with a broadside source at 20 m where a distance is
    needed. Every field serializes losslessly through to_dict/from_dict.
    """

    experiment: str = "gain-sweep"
    num_antennas: int = 10_000
    antenna_area: float = 0.000625
    wavelength: float = 0.1
    source_distance: float = 20.0
    source_angle_deg: float = 0.0
    users: int = 5
    rho_list: tuple[float, ...] = (0.0, 0.5, 1.0)
    n_max: float = 1e10
    snr_db_start: float = 0.0
    snr_db_stop: float = 50.0
    snr_db_step: float = 2.5
    diagonal_min: float = 0.05
    diagonal_max: float = 12_000.0
    distance_min_df: float = 15.0
    distance_max_df: float = 10_000.0
    points_per_decade: int = 5
    focal_points: tuple[str, ...] = ("inf", "dfa/10", "d_b")
    channel_mode: str = "hybrid"
    quadrature_rtol: float = 1e-9

    def array_spec(self) -> ArraySpec:
        return ArraySpec(self.num_antennas, self.antenna_area, self.wavelength)

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(rtol=self.quadrature_rtol)

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "array": {
                "num_antennas": self.num_antennas,
                "antenna_area": self.antenna_area,
                "wavelength": self.wavelength,
            },
            "source": {
                "distance": self.source_distance,
                "angle_deg": self.source_angle_deg,
            },
            "users": self.users,
            "sweep": {
                "rho_list": list(self.rho_list),
                "n_max": self.n_max,
                "snr_db_start": self.snr_db_start,
                "snr_db_stop": self.snr_db_stop,
                "snr_db_step": self.snr_db_step,
                "diagonal_min": self.diagonal_min,
                "diagonal_max": self.diagonal_max,
                "distance_min_df": self.distance_min_df,
                "distance_max_df": self.distance_max_df,
                "points_per_decade": self.points_per_decade,
                "focal_points": list(self.focal_points),
            },
            "channel_mode": self.channel_mode,
            "quadrature_rtol": self.quadrature_rtol,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        config, problems = _config_from_dict(data)
        if problems:
            raise ConfigError(problems)
        return config


_TOP_KEYS = {
    "experiment",
    "array",
    "source",
    "users",
    "sweep",
    "channel_mode",
    "quadrature_rtol",
}
_ARRAY_KEYS = {"num_antennas", "antenna_area", "wavelength"}
_SOURCE_KEYS = {"distance", "angle_deg"}
_SWEEP_KEYS = {
    "rho_list",
    "n_max",
    "snr_db_start",
    "snr_db_stop",
    "snr_db_step",
    "diagonal_min",
    "diagonal_max",
    "distance_min_df",
    "distance_max_df",
    "points_per_decade",
    "focal_points",
}


def _config_from_dict(data):
    problems = []

    def unknown(keys, allowed, where):
        for key in keys:
            if key not in allowed:
                problems.append(f"{where}{key}: unknown key")

    if not isinstance(data, dict):
        return None, [f"configuration root must be an object, got {type(data).__name__}"]
    unknown(data, _TOP_KEYS, "")
    array = data.get("array", {})
    source = data.get("source", {})
    sweep = data.get("sweep", {})
    for section, allowed, name in (
        (array, _ARRAY_KEYS, "array."),
        (source, _SOURCE_KEYS, "source."),
        (sweep, _SWEEP_KEYS, "sweep."),
    ):
        if not isinstance(section, dict):
            problems.append(f"{name[:-1]}: must be an object")
            return None, problems
        unknown(section, allowed, name)

    defaults = ExperimentConfig()
    values = {
        "experiment": data.get("experiment", defaults.experiment),
        "num_antennas": array.get("num_antennas", defaults.num_antennas),
        "antenna_area": array.get("antenna_area", defaults.antenna_area),
        "wavelength": array.get("wavelength", defaults.wavelength),
        "source_distance": source.get("distance", defaults.source_distance),
        "source_angle_deg": source.get("angle_deg", defaults.source_angle_deg),
        "users": data.get("users", defaults.users),
        "rho_list": tuple(sweep.get("rho_list", defaults.rho_list)),
        "n_max": sweep.get("n_max", defaults.n_max),
        "snr_db_start": sweep.get("snr_db_start", defaults.snr_db_start),
        "snr_db_stop": sweep.get("snr_db_stop", defaults.snr_db_stop),
        "snr_db_step": sweep.get("snr_db_step", defaults.snr_db_step),
        "diagonal_min": sweep.get("diagonal_min", defaults.diagonal_min),
        "diagonal_max": sweep.get("diagonal_max", defaults.diagonal_max),
        "distance_min_df": sweep.get("distance_min_df", defaults.distance_min_df),
        "distance_max_df": sweep.get("distance_max_df", defaults.distance_max_df),
        "points_per_decade": sweep.get("points_per_decade", defaults.points_per_decade),
        "focal_points": tuple(sweep.get("focal_points", defaults.focal_points)),
        "channel_mode": data.get("channel_mode", defaults.channel_mode),
        "quadrature_rtol": data.get("quadrature_rtol", defaults.quadrature_rtol),
    }

    if values["experiment"] not in EXPERIMENTS:
        problems.append(
            f"experiment: {values['experiment']!r} is not one of {', '.join(EXPERIMENTS)}"
        )
    n = values["num_antennas"]
    if not isinstance(n, int) or n < 1:
        problems.append("array.num_antennas: must be a positive integer")
    elif math.isqrt(n) ** 2 != n:
        problems.append(
            f"array.num_antennas: {n} is not a perfect square; the antennas "
            f"must tile a sqrt(N) x sqrt(N) grid"
        )
    for key, label in (
        ("antenna_area", "array.antenna_area"),
        ("wavelength", "array.wavelength"),
        ("source_distance", "source.distance"),
    ):
        if not isinstance(values[key], (int, float)) or not values[key] > 0:
            problems.append(f"{label}: must be > 0")
    angle = values["source_angle_deg"]
    if not isinstance(angle, (int, float)) or not abs(angle) < 90.0:
        problems.append(
            f"source.angle_deg: |angle| must be < 90 degrees strictly "
            f"(|phi| < pi/2), got {angle!r}"
        )
    if not isinstance(values["users"], int) or values["users"] < 1:
        problems.append("users: must be a positive integer")
    if any(r < 0 for r in values["rho_list"]):
        problems.append("sweep.rho_list: exponents must be >= 0")
    if not values["n_max"] >= 1:
        problems.append("sweep.n_max: must be >= 1")
    if not values["snr_db_step"] > 0:
        problems.append("sweep.snr_db_step: must be > 0")
    if not values["snr_db_stop"] >= values["snr_db_start"]:
        problems.append("sweep.snr_db_stop: must be >= snr_db_start")
    for lo_key, hi_key in (
        ("diagonal_min", "diagonal_max"),
        ("distance_min_df", "distance_max_df"),
    ):
        if not 0 < values[lo_key] <= values[hi_key]:
            problems.append(f"sweep.{hi_key}: need 0 < {lo_key} <= {hi_key}")
    if not isinstance(values["points_per_decade"], int) or values["points_per_decade"] < 1:
        problems.append("sweep.points_per_decade: must be a positive integer")
    for label in values["focal_points"]:
        if label not in ("inf", "dfa/10", "d_b") and not _is_number(label):
            problems.append(
                f"sweep.focal_points: {label!r} is not 'inf', 'dfa/10', 'd_b', "
                f"or a focal distance in meters"
            )
    if values["channel_mode"] not in ("hybrid", "integral"):
        problems.append("channel_mode: must be 'hybrid' or 'integral'")
    if not 0 < values["quadrature_rtol"] < 1:
        problems.append("quadrature_rtol: must lie in (0, 1)")
    if problems:
        return None, problems
    return ExperimentConfig(**values), []


def _is_number(value):
    try:
        float(value)
        return True
    except (TypeError, ValueError):
        return False


def validate_config(path=None, experiment=None) -> ExperimentConfig:
    """Load, default-fill, and validate a config file.

    ``path`` may be None or an empty file (all defaults). ``experiment``
    overrides/supplies the experiment name (CLI subcommand). All violations
    are reported at once in :class:`ConfigError`.
    """
    data = {}
    if path is not None:
        with open(path) as fh:
            text = fh.read()
        if text.strip():
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(
                    [f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"]
                ) from exc
    if experiment is not None:
        data = dict(data)
        declared = data.get("experiment")
        if declared is not None and declared != experiment:
            raise ConfigError(
                [
                    f"experiment: config declares {declared!r} but the "
                    f"{experiment!r} command was invoked"
                ]
            )
        data["experiment"] = experiment
    config, problems = _config_from_dict(data)
    if problems:
        raise ConfigError(problems)
    return config


def _write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".elaa-tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _cell(value):
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _require(condition, message):
    if not condition:
        raise ExperimentCheckError(message)


def _log_grid(lo, hi, points_per_decade):
    decades = math.log10(hi / lo)
    count = max(2, int(round(decades * points_per_decade)) + 1)
    return np.geomspace(lo, hi, count)


def _perfect_square_grid(n_lo, n_hi, points_per_decade):
    """Perfect squares m^2 roughly log-spaced between n_lo and n_hi."""
    m_lo = max(1, math.isqrt(int(n_lo)))
    m_hi = max(m_lo, math.isqrt(int(n_hi)))
    raw = _log_grid(m_lo, m_hi, 2 * points_per_decade)
    ms = sorted({int(round(m)) for m in raw})
    return [m * m for m in ms if m >= 1]


# --- experiment runners -----------------------------------------------------


def _run_gain_sweep(config: ExperimentConfig, threads):
    area = config.antenna_area
    d = config.source_distance
    n_list = _perfect_square_grid(
        config.diagonal_min**2 / (2 * area),
        config.diagonal_max**2 / (2 * area),
        config.points_per_decade,
    )
    rows = []
    for n in n_list:
        diag = math.sqrt(2.0 * n * area)
        side = math.sqrt(n * area)
        exact = float(gain.alpha_total(d, n, area))
        p12 = gain.aperture_gain_quadrature(d, side, "pathloss_area", threads=threads)
        p1 = gain.aperture_gain_quadrature(d, side, "pathloss", threads=threads)
        farfield = float(gain.farfield_gain(d, 0.0, n, area))
        _require(
            exact <= p12 * (1 + 1e-12) and p12 <= p1 * (1 + 1e-12),
            f"model ordering violated at N={n}: exact={exact}, p12={p12}, p1={p1}",
        )
        _require(exact < 1.0 / 3.0, f"exact gain {exact} reached the 1/3 limit at N={n}")
        rows.append((n, diag, exact, p12, p1, farfield))
    residuals = []
    for n in (n_list[0], n_list[len(n_list) // 2], n_list[-1]):
        side = math.sqrt(n * area)
        quad_exact = gain.aperture_gain_quadrature(d, side, "all", threads=threads)
        closed = float(gain.alpha_total(d, n, area))
        residuals.append(abs(quad_exact - closed) / closed)
    _require(
        max(residuals) < 1e-8,
        f"closed-form vs quadrature residual too large: {max(residuals):.3e}",
    )
    header = ["N", "diagonal_m", "gain_exact", "gain_p12", "gain_p1", "gain_farfield"]
    checks = {
        "model_ordering": "exact <= p12 <= p1 at every point",
        "closed_form_vs_quadrature_max_relative_residual": max(residuals),
    }
    return header, rows, checks


def _run_scaling_law(config: ExperimentConfig, threads):
    d = config.source_distance
    area = config.antenna_area
    n_list = _perfect_square_grid(1, config.n_max, config.points_per_decade)
    rows = []
    checks = {}
    for rho in config.rho_list:
        curve = gain.scaling_law_sweep(d, area, rho, n_list)
        snr_db = power_db(curve.snr)
        rows.extend(
            (n, s, rho) for n, s in zip(curve.num_antennas.astype(int), snr_db)
        )
        if rho == 0.0:
            limit_db = float(power_db((1.0 / 3.0) / gain.alpha_total(d, 1, area)))
            _require(
                bool(np.all(np.diff(curve.snr) > 0)),
                "constant-power SNR curve must increase with N",
            )
            _require(
                bool(np.all(snr_db < limit_db)),
                "constant-power SNR curve exceeded its saturation level",
            )
            checks["rho0_saturation_db"] = limit_db
        checks[f"rho{rho:g}_reference_power"] = curve.reference_power
    header = ["N", "snr_db", "rho"]
    return header, rows, checks


def _run_array_gain(config: ExperimentConfig, threads):
    spec = config.array_spec()
    report = regions.region_report(spec)
    d_f = report.fraunhofer
    guard_df = 3.0 * spec.wavelength / d_f
    if config.distance_min_df < guard_df:
        raise ConfigError(
            [
                f"sweep.distance_min_df: {config.distance_min_df:g} d_F is inside "
                f"the reactive near-field guard (3 wavelengths = {guard_df:g} d_F)"
            ]
        )
    grid = _log_grid(config.distance_min_df, config.distance_max_df, config.points_per_decade)
    rows = []
    gap_max = 0.0
    for d_over in grid:
        d = d_over * d_f
        g_exact = regions.normalized_array_gain(spec, d, mode="exact", threads=threads)
        g_bound = regions.normalized_array_gain(spec, d, mode="bound")
        _require(
            g_bound >= g_exact - 1e-9,
            f"bound fell below the exact gain at d={d:g} m",
        )
        _require(0.0 <= g_exact <= 1.0 + 1e-12, f"exact gain {g_exact} out of [0, 1]")
        gap_max = max(gap_max, g_bound - g_exact)
        rows.append((d_over, g_exact, g_bound))
    header = ["d_over_dF", "G_exact", "G_bound"]
    checks = {
        "max_bound_minus_exact": gap_max,
        "fraunhofer_m": d_f,
        "fraunhofer_array_m": report.fraunhofer_array,
        "amplitude_distance_m": report.amplitude,
    }
    return header, rows, checks


def _focal_values(config: ExperimentConfig, report):
    values = []
    for label in config.focal_points:
        if label == "inf":
            values.append((math.inf, "inf"))
        elif label == "dfa/10":
            values.append((report.fraunhofer_array / 10.0, "dfa/10"))
        elif label == "d_b":
            values.append((report.amplitude, "d_b"))
        else:
            values.append((float(label), label))
    return values


def _run_focus(config: ExperimentConfig, threads):
    spec = config.array_spec()
    report = regions.region_report(spec)
    d_fa = report.fraunhofer_array
    grid = _log_grid(config.distance_min_df, config.distance_max_df, config.points_per_decade)
    rows = []
    for z, label in _focal_values(config, report):
        profile = beams.focus_profile(z, d_fa, grid * report.fraunhofer)
        rows.extend(
            (d_over, g, label) for d_over, g in zip(grid, profile.gains)
        )
    half = float(beams.focus_gain_factor(1.25))
    _require(0.49 <= half <= 0.51, f"focus factor at 1.25 is {half}, expected ~0.5")
    header = ["d_over_dF", "gain", "focal_label"]
    checks = {"focus_factor_at_1.25": half}
    return header, rows, checks


def _run_multiplex(config: ExperimentConfig, threads):
    spec = config.array_spec()
    report = regions.region_report(spec)
    d_fa = report.fraunhofer_array
    ladder = multiplexing.focal_ladder(d_fa, config.users)
    grid = _log_grid(config.distance_min_df, config.distance_max_df, config.points_per_decade)
    rows = []
    junction_gains = []
    for k, z in enumerate(ladder.distances, start=1):
        label = f"focal_{k}"
        profile = beams.focus_profile(float(z), d_fa, grid * report.fraunhofer)
        rows.extend((d_over, g, label) for d_over, g in zip(grid, profile.gains))
        df_interval = beams.depth_of_focus(float(z), d_fa)
        if math.isfinite(df_interval.upper):
            junction_gains.append(
                beams.gain_off_focus(df_interval.upper, float(z), d_fa)
            )
    for g in junction_gains:
        _require(
            abs(g - 0.5) <= 0.02,
            f"depth-of-focus junction gain {g} deviates from 0.5 by more than 0.02",
        )
    header = ["d_over_dF", "gain", "focal_label"]
    checks = {"junction_gains": junction_gains}
    return header, rows, checks


def _run_sum_se(config: ExperimentConfig, threads):
    spec = config.array_spec()
    report = regions.region_report(spec)
    ladder = multiplexing.focal_ladder(report.fraunhofer_array, config.users)
    channels = multiplexing.ladder_channels(
        spec, ladder, mode=config.channel_mode, quad=config.quadrature(), threads=threads
    )
    precoders = multiplexing.zf_precoders(channels)
    residual = _zf_residual(channels, precoders.vectors)
    _require(residual <= 1e-10, f"ZF orthogonality residual {residual:.2e} > 1e-10")
    snr_grid = np.arange(
        config.snr_db_start, config.snr_db_stop + config.snr_db_step / 2, config.snr_db_step
    )
    rows = []
    for snr_db in snr_grid:
        zf = multiplexing.sum_se(
            spec, ladder, "ZF", float(snr_db), channel_matrix=channels
        )
        sched = multiplexing.sum_se(
            spec, ladder, "scheduling", float(snr_db), channel_matrix=channels
        )
        rows.append(
            (snr_db, zf.sum_se, sched.sum_se, *[float(v) for v in zf.per_user_se])
        )
    header = ["snr_db", "se_zf", "se_sched"] + [
        f"se_user_{k}" for k in range(1, config.users + 1)
    ]
    checks = {
        "zf_orthogonality_residual": residual,
        "channel_gains": [float(v) for v in np.sum(np.abs(channels) ** 2, axis=1)],
    }
    return header, rows, checks


def _zf_residual(channels, vectors):
    cross = channels @ vectors.T
    norms = np.linalg.norm(channels, axis=1)
    off = cross - np.diag(np.diag(cross))
    return float(np.max(np.abs(off) / norms[:, None]))


def _run_distances(config: ExperimentConfig, threads):
    spec = config.array_spec()
    report = regions.region_report(spec)
    payload = {
        "d_F": report.fraunhofer,
        "d_B": report.amplitude,
        "d_FA": report.fraunhofer_array,
        "W": report.array_diagonal,
        "D": report.antenna_diagonal,
        "dof_limit": multiplexing.dof_limit(spec.array_area, spec.wavelength),
    }
    _require(
        abs(payload["d_FA"] - spec.num_antennas * payload["d_F"]) <= 1e-9 * payload["d_FA"],
        "d_FA must equal N * d_F",
    )
    return payload


_RUNNERS = {
    "gain-sweep": _run_gain_sweep,
    "scaling-law": _run_scaling_law,
    "array-gain": _run_array_gain,
    "focus": _run_focus,
    "multiplex": _run_multiplex,
    "sum-se": _run_sum_se,
}


def run_experiment(config: ExperimentConfig, out_dir=".", threads=1) -> dict:
    """Execute one experiment; write outputs; return a summary dict.

    Raises :class:`ExperimentCheckError` (or a numerical error) when an
    embedded sanity assertion fails; in that case no output files are left
    behind in a partially written state (writes are atomic).
    """
    os.makedirs(out_dir, exist_ok=True)
    started = time.monotonic()
    name = config.experiment
    files = []
    if name == "distances":
        payload = _run_distances(config, threads)
        out_path = os.path.join(out_dir, "distances.json")
        _write_atomic(out_path, json.dumps(payload, indent=1, sort_keys=True) + "\n")
        files.append(out_path)
        checks = dict(payload)
    else:
        runner = _RUNNERS[name]
        header, rows, checks = runner(config, threads)
        out_path = os.path.join(out_dir, f"{name}.csv")
        _write_atomic(out_path, _csv_text(header, rows))
        files.append(out_path)
    sidecar = {
        "schema_version": SIDECAR_SCHEMA_VERSION,
        "experiment": name,
        "config": config.to_dict(),
        "library_version": __version__,
        "backend": _kernels.backend_name(),
        "threads": threads,
        "runtime_seconds": time.monotonic() - started,
        "checks": checks,
    }
    sidecar_path = os.path.join(out_dir, f"{name}.meta.json")
    _write_atomic(sidecar_path, json.dumps(sidecar, indent=1, sort_keys=True) + "\n")
    files.append(sidecar_path)
    return {"experiment": name, "files": files, "checks": checks}
