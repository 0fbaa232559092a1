"""
Run Configuration
==================
INI-style run files (configparser), one per comparison:

    [run]
    benchmark      = vdp:0.1
    methods        = all                 # or a comma list of method tags
    seeds          = 5                   # a count (0..k-1) or a list "3,7,11"
    steps          = 100
    cutoff         = 40                  # optional partial-horizon table
    out            = results/vdp_easy
    direction_seed = 0
    jobs           = 1
    dump_sets      = false
    inflow         = 1,4,5               # tank benchmarks only
    measured       = 2,4,5

    [observers]                          # shared overrides for every method
    reduction = pca

    [observer.pDTDI]                     # per-method overrides
    partitions = 5

Budget keys left out default to the benchmark's values.
"""

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Optional, Tuple

from src.benchmarks.registry import build_benchmark, suggest
from src.benchmarks.spec import BenchmarkSpec
from src.config import DEFAULT_JOBS
from src.errors import ConfigError, EstimationError
from src.observers.methods import METHOD_TABLE, ObserverConfig, ObserverMethod

DEFAULT_SEEDS = 5

RUN_KEYS = (
    "benchmark", "methods", "seeds", "steps", "cutoff", "out",
    "direction_seed", "jobs", "dump_sets", "inflow", "measured",
)

# key -> parser for observer override values
OBSERVER_KEYS = {
    "max_order": float,
    "max_constraints": int,
    "partitions": int,
    "reduction": str,
    "max_members": int,
    "dc_vertex_limit_dim": int,
    "inclusion": str,
}


@dataclass(frozen=True)
class RunConfig:
    benchmark: str
    methods: Tuple[ObserverMethod, ...]
    seeds: Tuple[int, ...] = tuple(range(DEFAULT_SEEDS))
    steps: int = 100
    cutoff: Optional[int] = None
    out: Path = Path("results")
    direction_seed: int = 0
    jobs: int = DEFAULT_JOBS
    dump_sets: bool = False
    inflow: Optional[Tuple[int, ...]] = None
    measured: Optional[Tuple[int, ...]] = None
    overrides: Dict[ObserverMethod, Dict[str, object]] = field(default_factory=dict)
    source: str = "<config>"

    def load_benchmark(self) -> BenchmarkSpec:
        return build_benchmark(self.benchmark, self.inflow, self.measured)

    def observer_config(self, method: ObserverMethod, benchmark: Optional[BenchmarkSpec] = None) -> ObserverConfig:
        benchmark = benchmark or self.load_benchmark()
        return ObserverConfig.for_benchmark(method, benchmark, **self.overrides.get(method, {}))

    def with_cli(self, out=None, seeds=None, cutoff=None, jobs=None) -> "RunConfig":
        """Command-line flags win over the file."""
        changes = {}
        if out is not None:
            changes["out"] = Path(out)
        if seeds is not None:
            changes["seeds"] = _parse_seeds(seeds, "--seeds")
        if cutoff is not None:
            changes["cutoff"] = int(cutoff)
        if jobs is not None:
            changes["jobs"] = int(jobs)
        return replace(self, **changes) if changes else self

    def validate(self) -> "RunConfig":
        """Schema and budget checks; builds every observer config once."""
        if self.steps < 1:
            raise ConfigError(f"{self.source}: steps must be >= 1, got {self.steps}")
        if self.cutoff is not None and not 1 <= self.cutoff <= self.steps:
            raise ConfigError(f"{self.source}: cutoff must be in 1..steps, got {self.cutoff}")
        if not self.seeds:
            raise ConfigError(f"{self.source}: at least one seed is required")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError(f"{self.source}: duplicate seeds {list(self.seeds)}")
        if self.jobs < 1:
            raise ConfigError(f"{self.source}: jobs must be >= 1, got {self.jobs}")
        if not self.methods:
            raise ConfigError(f"{self.source}: no observer methods selected")
        try:
            benchmark = self.load_benchmark()
            for method in self.methods:
                self.observer_config(method, benchmark).validate(benchmark.n)
        except ConfigError as exc:
            raise ConfigError(f"{self.source}: {exc}") from exc
        except (EstimationError, TypeError, ValueError) as exc:
            raise ConfigError(f"{self.source}: {exc}") from exc
        return self


# ------------------------------------------------------------------ #
# PARSING                                                            #
# ------------------------------------------------------------------ #

def _int_list(text: str, key: str) -> Tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.replace(" ", "").split(",") if p)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected comma-separated integers, got {text!r}") from exc


def _parse_seeds(text: str, key: str = "seeds") -> Tuple[int, ...]:
    text = str(text).strip()
    if "," not in text:
        try:
            count = int(text)
        except ValueError as exc:
            raise ConfigError(f"{key}: expected a count or a list, got {text!r}") from exc
        if count < 1:
            raise ConfigError(f"{key}: seed count must be >= 1, got {count}")
        return tuple(range(count))
    return _int_list(text, key)


def _parse_methods(text: str) -> Tuple[ObserverMethod, ...]:
    if text.strip().lower() == "all":
        return tuple(METHOD_TABLE)
    return tuple(ObserverMethod.parse(t) for t in text.split(",") if t.strip())


def _check_keys(section: configparser.SectionProxy, allowed, where: str) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigError(f"{where}: unknown key {key!r}" + suggest(key, allowed))


def _observer_overrides(section: configparser.SectionProxy, where: str) -> Dict[str, object]:
    _check_keys(section, OBSERVER_KEYS, where)
    values = {}
    for key, raw in section.items():
        try:
            values[key] = OBSERVER_KEYS[key](raw.strip())
        except ValueError as exc:
            raise ConfigError(f"{where}: {key} = {raw!r} is not a valid {OBSERVER_KEYS[key].__name__}") from exc
    return values


def _getter(section: configparser.SectionProxy, where: str):
    def get(key: str, parse, default):
        if key not in section:
            return default
        try:
            return parse(section[key])
        except ValueError as exc:
            raise ConfigError(f"{where}: {key} = {section[key]!r} ({exc})") from exc
    return get


def parse_run_config(text: str, source: str = "<config>") -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), default_section="__defaults__")
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc

    if "run" not in parser:
        raise ConfigError(f"{source}: missing [run] section")
    run = parser["run"]
    _check_keys(run, RUN_KEYS, f"{source} [run]")
    if "benchmark" not in run:
        raise ConfigError(f"{source} [run]: benchmark is required")
    get = _getter(run, f"{source} [run]")

    shared = _observer_overrides(parser["observers"], f"{source} [observers]") if "observers" in parser else {}
    overrides: Dict[ObserverMethod, Dict[str, object]] = {}
    for name in parser.sections():
        if name in ("run", "observers"):
            continue
        if not name.startswith("observer."):
            raise ConfigError(f"{source}: unknown section [{name}]" + suggest(name, ["run", "observers", "observer.<METHOD>"]))
        method = ObserverMethod.parse(name.split(".", 1)[1])
        overrides[method] = _observer_overrides(parser[name], f"{source} [{name}]")

    methods = _parse_methods(run.get("methods", "all"))
    merged = {m: {**shared, **overrides.get(m, {})} for m in methods}
    return RunConfig(
        benchmark=run["benchmark"].strip(),
        methods=methods,
        seeds=get("seeds", _parse_seeds, tuple(range(DEFAULT_SEEDS))),
        steps=get("steps", int, 100),
        cutoff=get("cutoff", int, None),
        out=Path(run.get("out", "results").strip()),
        direction_seed=get("direction_seed", int, 0),
        jobs=get("jobs", int, DEFAULT_JOBS),
        dump_sets=get("dump_sets", lambda v: run.getboolean("dump_sets"), False),
        inflow=get("inflow", lambda v: _int_list(v, "inflow"), None),
        measured=get("measured", lambda v: _int_list(v, "measured"), None),
        overrides={m: o for m, o in merged.items() if o},
        source=source,
    )


def load_run_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_run_config(path.read_text(encoding="utf-8"), source=str(path))
