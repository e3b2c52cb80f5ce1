"""Command-line entry point: ``geamlab {verify,detect,sweep,geam-check}``.

Exit codes: 0 success, 1 an identity residual exceeded the tolerance (or a
GEAM failed a trace condition), 2 configuration or input error.
Parallelism is bounded by ``--threads`` and the GEAMLAB_THREADS variable.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .coherence import IdentityReport, identity_suite
from .config import DEFAULT
from .entangle import (
    FAMILIES,
    build_reference,
    conjugate_geam,
    criterion_F,
    criterion_G,
)
from .geam import GeamError, build_geam, max_feasible_S, nm_shapes, parse_preset, validate_geam
from .linalg import DensityMatrix, InvalidStateError, load_matrix, sample, spawn_rngs
from .mcf import parse_mcf
from .skewinfo import SkewContext, unitary_average_mc

__all__ = ["RunConfig", "main", "split_list"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one invocation."""

    subcommand: str
    d: tuple[int, ...] = (2,)
    f: tuple[str, ...] = ("sld",)
    preset: tuple[str, ...] = ("mub",)
    tolerance: float = DEFAULT.identity
    seed: int = 0
    states: int = 5
    mc_samples: int = 20000
    monte_carlo: bool = True
    random_signs: bool = False
    realization: str = "auto"
    family: str | None = None
    param: float | None = None
    state_file: str | None = None
    criterion: str = "all"
    partner: str | None = None
    start: float | None = None
    stop: float | None = None
    step: float | None = None
    output: str | None = None
    fmt: str = "json"
    threads: int = 1

    def to_dict(self) -> dict:
        out = asdict(self)
        for k in ("d", "f", "preset"):
            out[k] = list(out[k])
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "RunConfig":
        kw = {f.name: obj[f.name] for f in fields(cls) if f.name in obj}
        for k in ("d", "f", "preset"):
            if k in kw:
                kw[k] = tuple(kw[k])
        return cls(**kw)


def split_list(text: str) -> list[str]:
    """Split on commas, keeping numeric parameters with their item.

    ``"sld,gwyd:0.2,0.5"`` -> ``["sld", "gwyd:0.2,0.5"]``.
    """
    out: list[str] = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        if out and ":" in out[-1] and re.fullmatch(r"[-+0-9.eE]+", tok):
            out[-1] += "," + tok
        else:
            out.append(tok)
    return out


def _thread_count(requested: int | None) -> int:
    env = os.environ.get("GEAMLAB_THREADS")
    cap = int(env) if env and env.isdigit() and int(env) > 0 else None
    n = requested if requested else (cap or 1)
    return max(1, min(n, cap) if cap else n)


def _pmap(fn, items, threads):
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _emit(records: list[dict], cfg: RunConfig, columns: list[str] | None = None) -> None:
    if cfg.fmt == "csv":
        buf = io.StringIO()
        if columns is None:
            columns = list(records[0].keys()) if records else []
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in records:
            w.writerow([_csv_cell(r.get(c)) for c in columns])
        text = buf.getvalue()
    else:
        text = "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_cell(v) -> str:
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


# --------------------------------------------------------------------------
# verify


def _expand_presets(presets, d):
    out = []
    for p in presets:
        if p.strip().lower() == "nm":
            out += [f"nm:{N},{M}" for N, M in nm_shapes(d)]
        else:
            out.append(p)
    return out


def cmd_verify(cfg: RunConfig) -> int:
    try:
        fs = [parse_mcf(f) for f in cfg.f]
        work = []
        for d in cfg.d:
            specs = [parse_preset(p, d) for p in _expand_presets(cfg.preset, d)]
            for spec in specs:
                sign_rng = np.random.default_rng([cfg.seed, d, len(work)])
                signs = tuple(sign_rng.choice([-1, 1], spec.N)) if cfg.random_signs else None
                g = build_geam(spec, realization=cfg.realization, signs=signs)
                work.append((d, spec, g))
    except (GeamError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    threads = _thread_count(cfg.threads)

    haar_cache: dict = {}
    if cfg.monte_carlo:
        keys = sorted({(d, f.label, i) for d, _, _ in work for f in fs for i in range(cfg.states)})
        state_of = {}
        for d in cfg.d:
            rngs = spawn_rngs(cfg.seed, cfg.states)
            for i, r in enumerate(rngs):
                state_of[(d, i)] = sample("ginibre-mixed", d, rng=r, rank=1 + i % d)
        fmap = {f.label: f for f in fs}

        def mc(key):
            d, fl, i = key
            ctx = SkewContext(state_of[(d, i)], fmap[fl])
            return unitary_average_mc(ctx, cfg.mc_samples, cfg.seed + i)

        haar_cache = dict(zip(keys, _pmap(mc, keys, threads)))

    def run(item):
        d, spec, g = item
        rngs = spawn_rngs(cfg.seed, cfg.states)
        states = [sample("ginibre-mixed", d, rng=r, rank=1 + i % d) for i, r in enumerate(rngs)]
        out = []
        val = validate_geam(g)
        for name in val.TRACE_CHECKS:
            c = val.checks[name]
            out.append(IdentityReport.compare(f"geam-{name}", d, "-", g.to_dict(), c.deviation, 0.0, DEFAULT.geam, cfg.seed))
        for f in fs:
            for i, rho in enumerate(states):
                out += identity_suite(
                    rho, g, f,
                    tolerance=cfg.tolerance,
                    include_mc=cfg.monte_carlo,
                    seed=cfg.seed + i,
                    haar_estimate=haar_cache.get((d, f.label, i)),
                )
        return out, val.min_eigenvalue

    results = _pmap(run, work, threads)
    reports = [r for rs, _ in results for r in rs]
    reports.sort(key=lambda r: (r.d, json.dumps(r.spec, sort_keys=True), r.f, r.seed, r.identity))
    _emit([r.to_dict() for r in reports], cfg)

    summary: dict[str, list] = {}
    for r in reports:
        s = summary.setdefault(r.identity, [0, 0, 0.0])
        s[0] += 1
        s[1] += r.passed
        if r.status == "checked":
            s[2] = max(s[2], r.residual)
    err = sys.stderr if cfg.output is None else sys.stdout
    print(f"{'identity':28s} {'pass':>11s} {'max residual':>14s}", file=err)
    for name in sorted(summary):
        n, ok, res = summary[name]
        print(f"{name:28s} {ok:5d}/{n:<5d} {res:14.3e}", file=err)
    for (d, spec, _), (_, lmin) in zip(work, results):
        if lmin < -DEFAULT.positivity:
            print(f"note: d={d} {spec.preset} realization has min eigenvalue {lmin:.3e} (not a POVM)", file=err)
    return 0 if all(r.passed for r in reports) else 1


# --------------------------------------------------------------------------
# detect / sweep


_DEFAULT_CRITERION = {"isotropic": "F", "werner": "G", "werner-qubit": "G"}


def _geam_pair(cfg: RunConfig, d: int, criterion: str):
    g = build_geam(cfg.preset[0], d, realization=cfg.realization)
    partner = cfg.partner or ("conjugate" if criterion.startswith("F") else "same")
    if partner not in ("conjugate", "same"):
        raise ConfigError(f"partner must be 'conjugate' or 'same', got {partner!r}")
    return g, conjugate_geam(g) if partner == "conjugate" else g


def _criteria(cfg: RunConfig, family: str | None) -> list[str]:
    c = cfg.criterion
    if c == "all":
        return ["F", "G", "F-scaled", "G-scaled"]
    if c == "auto":
        return [_DEFAULT_CRITERION.get(family, "G")]
    if c not in ("F", "G", "F-scaled", "G-scaled"):
        raise ConfigError(f"unknown criterion {c!r}")
    return [c]


def _evaluate(state, criterion, gA, gB, f, family, param):
    scaled = criterion.endswith("scaled")
    if criterion.startswith("F"):
        return criterion_F(state, gA, gB, f, scaled, family=family, param=param)
    return criterion_G(state, gA, gB, scaled, family=family, param=param)


def cmd_detect(cfg: RunConfig) -> int:
    d = cfg.d[0]
    try:
        if cfg.state_file:
            state = DensityMatrix(load_matrix(cfg.state_file))
            if state.dim != d * d:
                raise ConfigError(f"state is {state.dim}x{state.dim}, expected {d * d}x{d * d} for d={d}")
            family, param = "file", None
        else:
            if cfg.family not in FAMILIES or cfg.param is None:
                raise ConfigError(f"need --family {{{','.join(FAMILIES)}}} with a parameter, or --state")
            family, param = cfg.family, cfg.param
            state = build_reference(family, d, param).state
        f = parse_mcf(cfg.f[0])
        reports = []
        for crit in _criteria(cfg, family):
            gA, gB = _geam_pair(cfg, d, crit)
            reports.append(_evaluate(state, crit, gA, gB, f, family, param))
    except (GeamError, InvalidStateError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit([r.to_dict() for r in reports], cfg)
    return 0


def sweep_grid(start: float, stop: float, step: float) -> np.ndarray:
    if step is None or step <= 0 or start is None or stop is None or not stop > start:
        raise ConfigError("sweep needs start < stop and step > 0")
    n = int(round((stop - start) / step))
    grid = start + step * np.arange(n + 1)
    return np.clip(grid, min(start, stop), max(start, stop))


def crossing(params, verdicts) -> float | None:
    """Midpoint of the first pair of neighbouring grid points whose verdicts differ."""
    for i in range(1, len(verdicts)):
        if verdicts[i] != verdicts[i - 1]:
            return 0.5 * (params[i] + params[i - 1])
    return None


def cmd_sweep(cfg: RunConfig) -> int:
    d = cfg.d[0]
    try:
        if cfg.family not in FAMILIES:
            raise ConfigError(f"sweep needs --family {{{','.join(FAMILIES)}}}")
        grid = sweep_grid(cfg.start, cfg.stop, cfg.step)
        if cfg.criterion == "all":
            raise ConfigError("sweep takes a single criterion")
        crit = _criteria(cfg, cfg.family)[0]
        gA, gB = _geam_pair(cfg, d, crit)
        f = parse_mcf(cfg.f[0])
        for p in (grid[0], grid[-1]):
            build_reference(cfg.family, d, float(p))
    except (GeamError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    def point(p):
        state = build_reference(cfg.family, d, float(p)).state
        return _evaluate(state, crit, gA, gB, f, cfg.family, float(p))

    reports = _pmap(point, list(grid), _thread_count(cfg.threads))
    records = [{"param": r.param, "value": r.value, "threshold": r.threshold, "verdict": r.verdict} for r in reports]
    cfg_out = cfg if cfg.fmt == "csv" else RunConfig.from_dict({**cfg.to_dict(), "fmt": "csv"})
    _emit(records, cfg_out, ["param", "value", "threshold", "verdict"])
    x = crossing([r.param for r in reports], [r.verdict for r in reports])
    msg = f"critical {cfg.family} parameter: {'none in range' if x is None else format(x, '.6f')} ({crit}, d={d}, step={cfg.step:g})"
    print(msg, file=sys.stderr if cfg.output is None else sys.stdout)
    return 0


# --------------------------------------------------------------------------
# geam-check


def cmd_geam_check(cfg: RunConfig) -> int:
    out = []
    try:
        for d in cfg.d:
            for p in _expand_presets(cfg.preset, d):
                g = build_geam(p, d, realization=cfg.realization)
                rep = validate_geam(g)
                smax = max_feasible_S(g.N, g.spec.M, g.spec.gamma, g.basis, g.signs)
                out.append((g, rep, smax))
    except (GeamError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    records = []
    for g, rep, smax in out:
        rec = {"spec": g.to_dict(), "max_feasible_S": smax, "cap": min(g.spec.caps), "trace_conditions_pass": rep.trace_conditions_passed}
        rec.update(rep.to_dict())
        records.append(rec)
    _emit(records, RunConfig.from_dict({**cfg.to_dict(), "fmt": "json"}))
    return 0 if all(rep.trace_conditions_passed for _, rep, _ in out) else 1


# --------------------------------------------------------------------------
# argument parsing


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="geamlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(p, multi: bool):
        p.add_argument("--d", default="2", help="dimension" + ("s, comma separated" if multi else ""))
        p.add_argument("--f", default="sld", help="monotone function(s): sld, wy, wyd:a, gwyd:a,b")
        p.add_argument("--preset", default="mub", help="mub, mum:b, sic, gsic:b, nm:N,M[,b] or nm")
        p.add_argument("--realization", default="auto", choices=["auto", "gell-mann", "projective"])
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", dest="output", default=None)
        p.add_argument("--format", dest="fmt", default="json", choices=["json", "csv"])
        p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("verify", help="check the closed-form identities on random states")
    common(p, True)
    p.add_argument("--states", type=int, default=5)
    p.add_argument("--tolerance", type=float, default=DEFAULT.identity)
    p.add_argument("--mc-samples", type=int, default=20000)
    p.add_argument("--no-mc", dest="monte_carlo", action="store_false")
    p.add_argument("--random-signs", action="store_true")

    for name, helptext in (("detect", "apply the entanglement criteria to one state"), ("sweep", "scan a reference family")):
        p = sub.add_parser(name, help=helptext)
        common(p, False)
        p.add_argument("--family", choices=FAMILIES)
        p.add_argument("--criterion", default="all" if name == "detect" else "auto")
        p.add_argument("--partner", choices=["conjugate", "same"], default=None)
        if name == "detect":
            for flag in ("q", "x", "p", "param"):
                p.add_argument(f"--{flag}", dest="param", type=float)
            p.add_argument("--state", dest="state_file")
        else:
            p.add_argument("--start", type=float)
            p.add_argument("--stop", type=float)
            p.add_argument("--step", type=float, default=1e-3)

    p = sub.add_parser("geam-check", help="validate presets and find the largest positive S")
    common(p, True)
    return ap


def config_from_args(argv=None) -> RunConfig:
    ns = _parser().parse_args(argv)
    kw = {k: v for k, v in vars(ns).items() if v is not None}
    try:
        kw["d"] = tuple(int(x) for x in split_list(kw.get("d", "2")))
    except ValueError:
        raise ConfigError(f"bad --d {ns.d!r}") from None
    kw["f"] = tuple(split_list(kw.get("f", "sld")))
    kw["preset"] = tuple(split_list(kw.get("preset", "mub")))
    if not kw["d"] or any(d < 2 for d in kw["d"]):
        raise ConfigError("dimensions must be >= 2")
    return RunConfig(**kw)


_COMMANDS = {"verify": cmd_verify, "detect": cmd_detect, "sweep": cmd_sweep, "geam-check": cmd_geam_check}


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[cfg.subcommand](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
