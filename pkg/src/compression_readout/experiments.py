"""Config-driven benchmark harness.

Tasks: ``single``, ``sweep_n``, ``sweep_shots``, ``advantage_map`` and
``crossover``.  A task expands into independent cells (one per system size or
per noise-map lattice point); cells may run on a thread pool and are merged
in cell order, so output bytes never depend on the worker count.

Randomness layout (see :mod:`.sampling`): unseeded random states are redrawn
per repetition from the (master_seed, rep) state stream, which makes
repetitions at equal rep index share states across cells and ladder rungs (a
paired design).  Shot noise uses streams keyed by (cell << 16 | rep), so no
two cells ever share shot randomness.

CSV rows use one fixed schema::

    task,n,state,method,shots,xi,e0,e1,gamma,G_mode,rep_count,mean_E,sem_E,exact_E,seed

with empty fields where a quantity does not apply (xi is empty in asymmetric
mode, exact_E where no exact reference is computable).  Floats are written
with repr, so parsing the file back recovers them exactly.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .circuits import ARCHITECTURES
from .engines import (
    COMPRESSION,
    DIRECT,
    compression_readout_exact,
    compression_readout_sampled,
    compression_readout_sparse_exact,
    direct_readout_exact,
    direct_readout_sampled,
    resolve_gate_count,
)
from .noise import DEVICE_PROFILES, GateNoiseModel, ReadoutErrorModel, device_profile
from .sampling import STREAM_STATE, substream
from .states import (
    DENSE_QUBIT_CAP,
    SparsePopulations,
    StateSpec,
    haar_state,
    make_state,
)

TASKS = ("single", "sweep_n", "sweep_shots", "advantage_map", "crossover")

COLUMNS = [
    "task", "n", "state", "method", "shots", "xi", "e0", "e1", "gamma",
    "G_mode", "rep_count", "mean_E", "sem_E", "exact_E", "seed",
]

_REP_BITS = 16  # cell index and repetition share the 32-bit rep key


@dataclass
class ExperimentConfig:
    task: str
    state: StateSpec
    n_values: list[int]
    shots: list[int] | None = None
    repetitions: int = 1
    seed: int = 0
    profile: str | None = None
    symmetric: bool = True
    xi: float | None = None
    e0: float | None = None
    e1: float | None = None
    gamma: float | None = None
    architecture: str = "fully_connected"
    gates: int | None = None
    method: str | None = None  # single task only
    map_points: int = 20
    map_decades: float = 2.0
    map_scale_readout: bool = False
    threads: int = 1
    dense_cap: int = DENSE_QUBIT_CAP

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r} (known: {', '.join(TASKS)})")
        if self.architecture not in ARCHITECTURES:
            raise ValueError(f"unknown architecture {self.architecture!r}")
        if not self.n_values:
            raise ValueError("empty n range")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.shots is not None:
            if not self.shots:
                raise ValueError("empty shot ladder")
            if any(b <= a for a, b in zip(self.shots, self.shots[1:])):
                raise ValueError("shot ladder must be strictly increasing")

    def noise(self) -> tuple[ReadoutErrorModel, GateNoiseModel]:
        """Resolve rates: profile values first, explicit fields override."""
        xi = e0 = e1 = None
        gamma = 0.0
        if self.profile is not None:
            prof = device_profile(self.profile)
            xi, e0, e1, gamma = prof.xi, prof.e0, prof.e1, prof.gamma
        if self.xi is not None:
            xi = self.xi
        if self.e0 is not None:
            e0 = self.e0
        if self.e1 is not None:
            e1 = self.e1
        if self.gamma is not None:
            gamma = self.gamma
        if self.symmetric:
            readout = ReadoutErrorModel.symmetric(0.0 if xi is None else xi)
        else:
            if e0 is None or e1 is None:
                raise ValueError("asymmetric mode needs e0 and e1 (profile or explicit)")
            readout = ReadoutErrorModel.asymmetric(e0, e1)
        return readout, GateNoiseModel(gamma, self.gates)


def parse_config(raw: dict) -> ExperimentConfig:
    """Build a config from a parsed TOML document."""
    exp = dict(raw.get("experiment", {}))
    adv = dict(raw.get("advantage", {}))
    known = {
        "task", "state", "n", "shots", "repetitions", "seed", "profile",
        "readout", "xi", "e0", "e1", "gamma", "architecture", "gates",
        "method", "threads", "dense_cap",
    }
    unknown = set(exp) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    readout_mode = exp.get("readout", "symmetric")
    if readout_mode not in ("symmetric", "asymmetric"):
        raise ValueError(f"readout must be 'symmetric' or 'asymmetric', got {readout_mode!r}")
    return ExperimentConfig(
        task=exp.get("task", "single"),
        state=StateSpec.parse(exp.get("state", "zeros")),
        n_values=_parse_values(exp.get("n", [1]), integral=True),
        shots=_parse_values(exp["shots"], integral=True) if "shots" in exp else None,
        repetitions=int(exp.get("repetitions", 1)),
        seed=int(exp.get("seed", 0)),
        profile=exp.get("profile"),
        symmetric=readout_mode == "symmetric",
        xi=_opt_float(exp.get("xi")),
        e0=_opt_float(exp.get("e0")),
        e1=_opt_float(exp.get("e1")),
        gamma=_opt_float(exp.get("gamma")),
        architecture=exp.get("architecture", "fully_connected"),
        gates=int(exp["gates"]) if "gates" in exp else None,
        method=exp.get("method"),
        threads=int(exp.get("threads", 1)),
        dense_cap=int(exp.get("dense_cap", DENSE_QUBIT_CAP)),
        map_points=int(adv.get("points", 20)),
        map_decades=float(adv.get("decades", 2.0)),
        map_scale_readout=bool(adv.get("scale_readout", False)),
    )


def _opt_float(v):
    return None if v is None else float(v)


def _parse_values(value, integral: bool) -> list:
    """A range spec: explicit list, or {start, stop[, step]}, or
    {start, stop, points, log=true} for a geometric ladder."""
    if isinstance(value, (int, float)):
        value = [value]
    if isinstance(value, dict):
        start, stop = value["start"], value["stop"]
        if value.get("log"):
            pts = int(value["points"])
            grid = np.geomspace(float(start), float(stop), pts)
            vals = sorted(set(int(round(g)) for g in grid)) if integral else list(grid)
            return vals
        step = int(value.get("step", 1))
        return list(range(int(start), int(stop) + 1, step))
    out = [int(v) if integral else float(v) for v in value]
    return out


def apply_overrides(raw: dict, overrides: list[str]) -> dict:
    """Apply ``section.key=value`` CLI overrides onto a raw TOML document."""
    try:
        import tomllib
    except ModuleNotFoundError:  # Python 3.10
        import tomli as tomllib
    for item in overrides:
        key, sep, text = item.partition("=")
        if not sep:
            raise ValueError(f"override {item!r} is not of the form key=value")
        try:
            value = tomllib.loads(f"v = {text}")["v"]
        except Exception:
            value = text
        node = raw
        *path, last = key.strip().split(".")
        for part in path:
            node = node.setdefault(part, {})
        node[last] = value
    return raw


# ---------------------------------------------------------------------------
# cell execution

def _realize(cfg: ExperimentConfig, n: int, rep: int):
    if cfg.state.kind == "haar" and cfg.state.seed is None:
        return haar_state(n, substream(cfg.seed, rep, STREAM_STATE))
    return make_state(cfg.state, n, dense_cap=cfg.dense_cap)


def _state_is_deterministic(cfg: ExperimentConfig) -> bool:
    return not (cfg.state.kind == "haar" and cfg.state.seed is None)


def _shot_key(cell: int, rep: int) -> int:
    if rep >= (1 << _REP_BITS):
        raise ValueError(f"repetitions are limited to {1 << _REP_BITS}")
    return (cell << _REP_BITS) | rep


def _exact_pair(cfg, state, readout, gate):
    """Exact (direct, compression) errors for one realized state."""
    e_dir = direct_readout_exact(state, readout).tv_error
    if isinstance(state, SparsePopulations):
        e_comp = compression_readout_sparse_exact(
            state, readout, gate, architecture=cfg.architecture, gates=cfg.gates
        ).tv_error
    else:
        e_comp = compression_readout_exact(
            state, readout, gate, architecture=cfg.architecture, gates=cfg.gates
        ).tv_error
    return e_dir, e_comp


def _sampled_pair(cfg, state, readout, gate, shots, cell, rep):
    key = _shot_key(cell, rep)
    e_dir = direct_readout_sampled(state, readout, shots, cfg.seed, key).tv_error
    e_comp = compression_readout_sampled(
        state, readout, gate, shots, cfg.seed, key,
        architecture=cfg.architecture, gates=cfg.gates,
    ).tv_error
    return e_dir, e_comp


def _mean_sem(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    sem = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return mean, sem


def _base_row(cfg, readout, gate, n, G) -> dict:
    return {
        "task": cfg.task,
        "n": n,
        "state": cfg.state.label(),
        "xi": readout.xi if readout.is_symmetric else None,
        "e0": readout.e0,
        "e1": readout.e1,
        "gamma": gate.gamma,
        "G_mode": f"{cfg.architecture}:{G}",
        "seed": cfg.seed,
    }


def _method_rows(cfg, readout, gate, n, cell, shots) -> list[dict]:
    """Mean/SEM rows for both methods at one (n, shots) cell."""
    G = resolve_gate_count(cfg.architecture, n, gate, cfg.gates)
    reps = cfg.repetitions
    exact_d, exact_c, samp_d, samp_c = [], [], [], []
    deterministic = _state_is_deterministic(cfg)
    for rep in range(1 if (deterministic and shots is None) else reps):
        state = _realize(cfg, n, rep)
        ed, ec = _exact_pair(cfg, state, readout, gate)
        exact_d.append(ed)
        exact_c.append(ec)
        if shots is not None:
            sd, sc = _sampled_pair(cfg, state, readout, gate, shots, cell, rep)
            samp_d.append(sd)
            samp_c.append(sc)
    rows = []
    for method, exact_vals, samp_vals in (
        (DIRECT, exact_d, samp_d),
        (COMPRESSION, exact_c, samp_c),
    ):
        row = _base_row(cfg, readout, gate, n, G)
        row["method"] = method
        row["shots"] = shots
        row["exact_E"] = float(np.mean(exact_vals))
        if shots is None:
            row["rep_count"] = len(exact_vals)
            row["mean_E"], row["sem_E"] = _mean_sem(exact_vals)
            row["rep_errors"] = [float(v) for v in exact_vals]
        else:
            row["rep_count"] = len(samp_vals)
            row["mean_E"], row["sem_E"] = _mean_sem(samp_vals)
            row["rep_errors"] = [float(v) for v in samp_vals]
        rows.append(row)
    return rows


def _run_cells(cfg, cells, worker) -> list:
    if cfg.threads == 1:
        return [worker(*cell) for cell in cells]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        return list(pool.map(lambda c: worker(*c), cells))


# ---------------------------------------------------------------------------
# tasks

def run_single(cfg: ExperimentConfig):
    readout, gate = cfg.noise()
    n = cfg.n_values[0]
    shots = cfg.shots[0] if cfg.shots else None
    rows = _method_rows(cfg, readout, gate, n, cell=0, shots=shots)
    if cfg.method in (DIRECT, COMPRESSION):
        rows = [r for r in rows if r["method"] == cfg.method]
    return rows, {"task": "single"}


def run_sweep_n(cfg: ExperimentConfig):
    """Error versus system size, exact and/or sampled."""
    readout, gate = cfg.noise()
    shots = None
    if cfg.shots is not None:
        if len(cfg.shots) != 1:
            raise ValueError("sweep_n takes a single shot budget")
        shots = cfg.shots[0]
    ns = sorted(cfg.n_values)
    for n in ns:
        if shots is not None and n > cfg.dense_cap:
            raise ValueError(f"sampled sweep is capped at n={cfg.dense_cap}, got n={n}")
        if shots is not None and shots < (1 << n) - 1:
            raise ValueError(f"budget {shots} is below one shot per grid point at n={n}")
    cells = [(i, n) for i, n in enumerate(ns)]
    chunks = _run_cells(cfg, cells, lambda i, n: _method_rows(cfg, readout, gate, n, i, shots))
    rows = [row for chunk in chunks for row in chunk]
    meta = {
        "task": "sweep_n",
        "haar_policy": "resample_per_repetition",
        "n_values": ns,
        "shots": shots,
    }
    return rows, meta


def run_sweep_shots(cfg: ExperimentConfig):
    """Error versus total shot budget, with the exact asymptote column."""
    if cfg.shots is None:
        raise ValueError("sweep_shots needs a shot ladder")
    readout, gate = cfg.noise()
    for n in cfg.n_values:
        m = (1 << n) - 1
        if cfg.shots[0] < m:
            raise ValueError(f"ladder entry {cfg.shots[0]} is below one shot per grid point at n={n}")
    cells = [
        (i, n, shots)
        for i, n in enumerate(sorted(cfg.n_values))
        for shots in cfg.shots
    ]
    chunks = _run_cells(
        cfg, cells, lambda i, n, shots: _method_rows(cfg, readout, gate, n, i, shots)
    )
    rows = [row for chunk in chunks for row in chunk]
    meta = {
        "task": "sweep_shots",
        "haar_policy": "resample_per_repetition",
        "ladder": list(cfg.shots),
    }
    return rows, meta


def _map_axes(cfg: ExperimentConfig):
    """Logarithmic (gamma, readout) lattice centered on the configured rates."""
    readout, gate = cfg.noise()
    if gate.gamma <= 0:
        raise ValueError("advantage map needs a positive central gamma")
    half = cfg.map_decades / 2.0
    gammas = gate.gamma * np.logspace(-half, half, cfg.map_points)
    gammas = gammas[gammas < 1.0]
    if cfg.map_scale_readout:
        if readout.is_symmetric:
            raise ValueError("scale_readout mode applies to asymmetric readout")
        scales = np.logspace(-half, half, cfg.map_points)
        top = max(readout.e0, readout.e1)
        scales = scales[scales * top < 0.5]
        return gammas, scales, readout, gate
    if not readout.is_symmetric:
        raise ValueError("symmetric advantage map needs symmetric readout rates")
    if readout.xi <= 0:
        raise ValueError("advantage map needs a positive central xi")
    xis = readout.xi * np.logspace(-half, half, cfg.map_points)
    xis = xis[xis < 0.5]
    return gammas, xis, readout, gate


def run_advantage_map(cfg: ExperimentConfig):
    """Ratio E_direct / E_compression over a noise-rate lattice."""
    if len(cfg.n_values) != 1:
        raise ValueError("advantage map runs at a single n")
    n = cfg.n_values[0]
    shots = cfg.shots[0] if cfg.shots else 10**6
    gammas, readout_axis, base_readout, _ = _map_axes(cfg)
    if len(gammas) < 2 or len(readout_axis) < 2:
        raise ValueError("degenerate advantage-map grid")

    def cell_rows(cell_index, gi, ri):
        gamma = float(gammas[gi])
        if cfg.map_scale_readout:
            k = float(readout_axis[ri])
            readout = ReadoutErrorModel.asymmetric(base_readout.e0 * k, base_readout.e1 * k)
        else:
            readout = ReadoutErrorModel.symmetric(float(readout_axis[ri]))
        gate = GateNoiseModel(gamma, cfg.gates)
        rows = []
        G = resolve_gate_count(cfg.architecture, n, gate, cfg.gates)
        exact_d, exact_c, samp_d, samp_c = [], [], [], []
        for rep in range(cfg.repetitions):
            state = _realize(cfg, n, rep)
            ed, ec = _exact_pair(cfg, state, readout, gate)
            exact_d.append(ed)
            exact_c.append(ec)
            sd, sc = _sampled_pair(cfg, state, readout, gate, shots, cell_index, rep)
            samp_d.append(sd)
            samp_c.append(sc)
        for method, exact_vals, samp_vals in (
            (DIRECT, exact_d, samp_d),
            (COMPRESSION, exact_c, samp_c),
        ):
            row = _base_row(cfg, readout, gate, n, G)
            row.update(
                method=method,
                shots=shots,
                rep_count=len(samp_vals),
                exact_E=float(np.mean(exact_vals)),
                rep_errors=[float(v) for v in samp_vals],
            )
            row["mean_E"], row["sem_E"] = _mean_sem(samp_vals)
            rows.append(row)
        return rows

    cells = [
        (gi * len(readout_axis) + ri, gi, ri)
        for gi in range(len(gammas))
        for ri in range(len(readout_axis))
    ]
    chunks = _run_cells(cfg, cells, cell_rows)
    rows = [row for chunk in chunks for row in chunk]

    ratio = np.empty((len(gammas), len(readout_axis)))
    for idx, chunk in enumerate(chunks):
        gi, ri = divmod(idx, len(readout_axis))
        ratio[gi, ri] = chunk[0]["mean_E"] / chunk[1]["mean_E"]
    if cfg.map_scale_readout:
        # the k axis is defined relative to one device's published rates, so
        # only that device has a well-defined marker (at k = 1)
        prof = device_profile(cfg.profile) if cfg.profile else None
        devices = [{"name": prof.name, "gamma": prof.gamma, "readout": 1.0}] if prof else []
    else:
        devices = []
        for name in sorted(DEVICE_PROFILES):
            prof = device_profile(name)
            devices.append({"name": name, "gamma": prof.gamma, "readout": prof.xi})
    meta = {
        "task": "advantage_map",
        "haar_policy": "resample_per_repetition",
        "n": n,
        "shots": shots,
        "readout_axis_kind": "scale" if cfg.map_scale_readout else "xi",
        "gamma_grid": [float(g) for g in gammas],
        "readout_grid": [float(r) for r in readout_axis],
        "ratio": [[float(v) for v in row] for row in ratio],
        "advantage": [[bool(v >= 1.0) for v in row] for row in ratio],
        "devices": devices,
    }
    return rows, meta


def run_crossover(cfg: ExperimentConfig):
    """Smallest ladder budget where compression's mean error drops to direct's."""
    if cfg.shots is None:
        raise ValueError("crossover needs a shot ladder")
    if cfg.repetitions < 10:
        raise ValueError("crossover needs at least 10 repetitions")
    readout, gate = cfg.noise()

    def cell(cell_index, n):
        m = (1 << n) - 1
        G = resolve_gate_count(cfg.architecture, n, gate, cfg.gates)
        found = None
        for shots in cfg.shots:
            if shots < m:
                continue
            mean_d, mean_c = [], []
            for rep in range(cfg.repetitions):
                state = _realize(cfg, n, rep)
                sd, sc = _sampled_pair(cfg, state, readout, gate, shots, cell_index, rep)
                mean_d.append(sd)
                mean_c.append(sc)
            if np.mean(mean_c) <= np.mean(mean_d):
                found = (shots, float(np.mean(mean_d)), float(np.mean(mean_c)))
                break
        row = _base_row(cfg, readout, gate, n, G)
        row.update(
            method="crossover",
            shots=found[0] if found else None,
            rep_count=cfg.repetitions,
            mean_E=found[2] if found else None,
            sem_E=None,
            exact_E=None,
        )
        return [row]

    cells = [(i, n) for i, n in enumerate(sorted(cfg.n_values))]
    chunks = _run_cells(cfg, cells, cell)
    rows = [row for chunk in chunks for row in chunk]
    found_rows = [r for r in rows if r["shots"] is not None]
    meta: dict = {
        "task": "crossover",
        "haar_policy": "resample_per_repetition",
        "ladder": list(cfg.shots),
        "n_values": sorted(cfg.n_values),
        "crossover_shots": {str(r["n"]): r["shots"] for r in rows},
    }
    if len(found_rows) >= 2:
        ns = np.array([r["n"] for r in found_rows], dtype=float)
        lg = np.log10([r["shots"] for r in found_rows])
        slope, intercept = np.polyfit(ns, lg, 1)
        meta["fit"] = {"slope": float(slope), "intercept": float(intercept)}
    return rows, meta


RUNNERS = {
    "single": run_single,
    "sweep_n": run_sweep_n,
    "sweep_shots": run_sweep_shots,
    "advantage_map": run_advantage_map,
    "crossover": run_crossover,
}


def run_task(cfg: ExperimentConfig):
    return RUNNERS[cfg.task](cfg)


# ---------------------------------------------------------------------------
# output

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_results(rows: list[dict], path, fmt: str = "csv", metadata: dict | None = None) -> None:
    """Write rows in the documented schema; bytes depend only on the content.

    CSV gets a ``<path>.meta.json`` sidecar when metadata is present; JSON
    output embeds the metadata and per-repetition errors directly.
    """
    import pathlib

    if not rows:
        raise ValueError("refusing to write an empty result table")
    path = pathlib.Path(path)
    if fmt == "csv":
        lines = [",".join(COLUMNS)]
        for row in rows:
            lines.append(",".join(_fmt(row.get(col)) for col in COLUMNS))
        path.write_text("\n".join(lines) + "\n")
        if metadata:
            sidecar = path.with_suffix(path.suffix + ".meta.json")
            sidecar.write_text(json.dumps(metadata, sort_keys=True, indent=1) + "\n")
    elif fmt == "json":
        doc = {
            "metadata": metadata or {},
            "rows": [
                {
                    **{col: row.get(col) for col in COLUMNS},
                    **({"rep_errors": row["rep_errors"]} if "rep_errors" in row else {}),
                }
                for row in rows
            ],
        }
        path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    else:
        raise ValueError(f"unknown output format {fmt!r}")


def read_rows(path) -> list[dict]:
    """Parse a results CSV back into typed rows (numbers round-trip exactly)."""
    import csv as _csv
    import pathlib

    text = pathlib.Path(path).read_text()
    reader = _csv.DictReader(text.splitlines())
    if reader.fieldnames != COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    out = []
    for rec in reader:
        row: dict = {}
        for key, val in rec.items():
            if val == "":
                row[key] = None
            elif key in ("n", "shots", "rep_count", "seed"):
                row[key] = int(val)
            elif key in ("xi", "e0", "e1", "gamma", "mean_E", "sem_E", "exact_E"):
                row[key] = float(val)
            else:
                row[key] = val
        out.append(row)
    return out
