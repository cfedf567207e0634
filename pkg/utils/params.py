# utils/params.py
"""
Run configuration shared by every subcommand.

Sources, lowest to highest precedence:
  1. built-in defaults (the sensor-graph experiment setup)
  2. environment (GRANGE_*)
  3. config file (--config, INI-style sections, see docs/CONFIG.md)
  4. command-line flags

Env knobs:
  GRANGE_GRAPH       -> sensor:n,R,seed | fixture:NAME | csv:PATH | edges:PATH | PATH
  GRANGE_RADIUS      -> connection radius for csv point clouds (default 1/6)
  GRANGE_PAIR        -> auto | kind[:key=value,...]
  GRANGE_ANGLES      -> uniform:K | adaptive:tol,Kmax
  GRANGE_THETA       -> radians (default 9*pi/20)
  GRANGE_OUT         -> output directory (default out)
  GRANGE_FORMAT      -> comma list of svg,csv,json
  GRANGE_MC_SAMPLES  -> Monte-Carlo sample count for verify (default 20000)
  GRANGE_SEED        -> seed for Monte-Carlo sampling (default 7)
  GRANGE_WORKERS     -> thread count for support-line evaluation (default 1)
  GRANGE_CACHE_SIZE  -> support-line LRU cache size (default 1024)
"""
from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Optional, Tuple

from utils.errors import InputError, SpecError

DEFAULT_SENSOR = "sensor:253,0.16666666666666666,7"
DEFAULT_THETA = 9.0 * math.pi / 20.0
FORMATS = ("svg", "csv", "json")

# ---------- small parsers ----------

def _env(name: str, default: Optional[str] = None) -> Optional[str]:
    v = os.environ.get(name)
    if v is None or not v.strip():
        return default
    return v.strip()

def _as_int(name: str, raw: Any) -> int:
    try:
        return int(str(raw).strip())
    except Exception:
        raise SpecError(f"{name}: expected an integer, got {raw!r}")

def _as_float(name: str, raw: Any) -> float:
    try:
        v = float(str(raw).strip())
    except Exception:
        raise SpecError(f"{name}: expected a number, got {raw!r}")
    if not math.isfinite(v):
        raise SpecError(f"{name}: must be finite, got {raw!r}")
    return v

def parse_formats(raw: str) -> Tuple[str, ...]:
    out = []
    for part in str(raw).split(","):
        p = part.strip().lower()
        if not p:
            continue
        if p not in FORMATS:
            raise SpecError(f"unknown export format {p!r} (choose from {', '.join(FORMATS)})")
        if p not in out:
            out.append(p)
    if not out:
        raise SpecError("at least one export format is required")
    return tuple(out)


@dataclass(frozen=True)
class AngleSchedule:
    kind: str               # "uniform" | "adaptive"
    K: int = 0
    tol: float = 1e-4
    K_max: int = 512

    def describe(self) -> str:
        if self.kind == "uniform":
            return f"uniform:{self.K}"
        return f"adaptive:{self.tol:g},{self.K_max}"


def parse_angles(raw: str) -> AngleSchedule:
    text = str(raw).strip()
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "uniform":
        K = _as_int("uniform angle count", rest)
        if K < 3:
            raise SpecError(f"uniform angle schedule needs K >= 3, got {K}")
        return AngleSchedule(kind="uniform", K=K)
    if kind == "adaptive":
        parts = [p for p in rest.split(",") if p.strip()] if rest else []
        tol = _as_float("adaptive tol", parts[0]) if parts else 1e-4
        K_max = _as_int("adaptive K_max", parts[1]) if len(parts) > 1 else 512
        if len(parts) > 2:
            raise SpecError(f"adaptive schedule takes tol,Kmax: {raw!r}")
        if tol <= 0:
            raise SpecError(f"adaptive tol must be > 0, got {tol}")
        if K_max < 4:
            raise SpecError(f"adaptive K_max must be >= 4, got {K_max}")
        return AngleSchedule(kind="adaptive", tol=tol, K_max=K_max)
    raise SpecError(f"angle schedule must be uniform:K or adaptive:tol,Kmax, got {raw!r}")


@dataclass(frozen=True)
class GraphSource:
    kind: str                       # "sensor" | "fixture" | "csv" | "edges"
    path: Optional[str] = None
    n: int = 0
    R: float = 0.0
    seed: int = 0
    fixture: Optional[str] = None

    def describe(self) -> str:
        if self.kind == "sensor":
            return f"sensor:{self.n},{self.R!r},{self.seed}"
        if self.kind == "fixture":
            return f"fixture:{self.fixture}"
        return f"{self.kind}:{self.path}"


def parse_graph_source(raw: str) -> GraphSource:
    text = str(raw).strip()
    if not text:
        raise SpecError("empty graph source")
    kind, sep, rest = text.partition(":")
    kind_l = kind.strip().lower()
    if sep and kind_l == "sensor":
        parts = [p.strip() for p in rest.split(",")]
        if len(parts) != 3:
            raise SpecError(f"sensor source must be sensor:n,R,seed, got {raw!r}")
        n = _as_int("sensor n", parts[0])
        R = _as_float("sensor R", parts[1])
        seed = _as_int("sensor seed", parts[2])
        if n < 1:
            raise SpecError(f"sensor n must be >= 1, got {n}")
        if R <= 0:
            raise SpecError(f"sensor R must be > 0, got {R}")
        return GraphSource(kind="sensor", n=n, R=R, seed=seed)
    if sep and kind_l == "fixture":
        name = rest.strip().lower()
        if name not in ("bipartite", "k4", "path4"):
            raise SpecError(f"unknown fixture {rest!r} (bipartite, k4, path4)")
        return GraphSource(kind="fixture", fixture=name)
    if sep and kind_l in ("csv", "edges"):
        if not rest.strip():
            raise SpecError(f"{kind_l} source needs a path")
        return GraphSource(kind=kind_l, path=rest.strip())
    # bare path
    if text.lower().endswith(".csv"):
        return GraphSource(kind="csv", path=text)
    return GraphSource(kind="edges", path=text)


# ---------- config ----------

@dataclass(frozen=True)
class RunConfig:
    graph: str = DEFAULT_SENSOR
    radius: float = 1.0 / 6.0
    pair: str = "auto"
    angles: str = "adaptive:1e-4,512"
    theta: float = DEFAULT_THETA
    out: str = "out"
    formats: Tuple[str, ...] = FORMATS
    samples: int = 20000
    seed: int = 7
    workers: int = 1
    cache_size: int = 1024
    k: int = 1
    operator: str = "S"

    # -- derived views --
    @property
    def graph_source(self) -> GraphSource:
        return parse_graph_source(self.graph)

    @property
    def angle_schedule(self) -> AngleSchedule:
        return parse_angles(self.angles)

    def validate(self) -> "RunConfig":
        parse_graph_source(self.graph)
        parse_angles(self.angles)
        parse_formats(",".join(self.formats))
        if not self.radius > 0:
            raise SpecError(f"radius must be > 0, got {self.radius}")
        if self.samples < 1:
            raise SpecError(f"samples must be >= 1, got {self.samples}")
        if self.workers < 1:
            raise SpecError(f"workers must be >= 1, got {self.workers}")
        if self.cache_size < 1:
            raise SpecError(f"cache_size must be >= 1, got {self.cache_size}")
        if self.operator not in ("S", "R"):
            raise SpecError(f"operator must be S or R, got {self.operator!r}")
        return self

    def with_overrides(self, **kw: Any) -> "RunConfig":
        """Apply non-None overrides, coercing strings the way env/file values are."""
        known = {f.name for f in fields(self)}
        clean: Dict[str, Any] = {}
        for key, value in kw.items():
            if value is None:
                continue
            if key not in known:
                raise SpecError(f"unknown config key {key!r}")
            clean[key] = _coerce(key, value)
        return replace(self, **clean)

    @staticmethod
    def from_env(base: Optional["RunConfig"] = None) -> "RunConfig":
        base = base or RunConfig()
        return base.with_overrides(
            graph=_env("GRANGE_GRAPH"),
            radius=_env("GRANGE_RADIUS"),
            pair=_env("GRANGE_PAIR"),
            angles=_env("GRANGE_ANGLES"),
            theta=_env("GRANGE_THETA"),
            out=_env("GRANGE_OUT"),
            formats=_env("GRANGE_FORMAT"),
            samples=_env("GRANGE_MC_SAMPLES"),
            seed=_env("GRANGE_SEED"),
            workers=_env("GRANGE_WORKERS"),
            cache_size=_env("GRANGE_CACHE_SIZE"),
        )

    @staticmethod
    def from_file(path: str, base: Optional["RunConfig"] = None) -> "RunConfig":
        base = base or RunConfig()
        cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        cp.optionxform = str  # keep "N" distinct from "n"
        try:
            with open(path, "r", encoding="utf-8") as fh:
                cp.read_file(fh)
        except OSError as e:
            raise InputError(f"cannot read config: {e.strerror or e}", path=path)
        except configparser.Error as e:
            raise SpecError(f"{path}: malformed config: {e}")
        for section in cp.sections():
            if section not in _SECTIONS:
                raise SpecError(f"{path}: unknown section [{section}] (allowed: {', '.join(_SECTIONS)})")
        return base.with_overrides(**_file_values(cp))

    @staticmethod
    def resolve(config_path: Optional[str] = None, **cli: Any) -> "RunConfig":
        cfg = RunConfig.from_env()
        if config_path:
            cfg = RunConfig.from_file(config_path, base=cfg)
        return cfg.with_overrides(**cli).validate()


_SECTIONS = ("graph", "pair", "angles", "run")
_RUN_KEYS = ("theta", "out", "format", "samples", "seed", "workers", "cache_size", "k", "operator")


def _file_values(cp: configparser.ConfigParser) -> Dict[str, Any]:
    vals: Dict[str, Any] = {}
    if cp.has_section("graph"):
        sec = cp["graph"]
        unknown = set(sec.keys()) - {"source", "radius"}
        if unknown:
            raise SpecError(f"[graph] unknown keys: {', '.join(sorted(unknown))}")
        vals["graph"] = sec.get("source")
        vals["radius"] = sec.get("radius")
    if cp.has_section("pair"):
        sec = dict(cp["pair"])
        if "spec" in sec:
            if len(sec) > 1:
                raise SpecError("[pair] spec = ... cannot be combined with other keys")
            vals["pair"] = sec["spec"]
        else:
            kind = sec.pop("kind", None)
            if not kind:
                raise SpecError("[pair] needs kind = ... (or spec = ...)")
            params = ",".join(f"{k}={v}" for k, v in sec.items())
            vals["pair"] = f"{kind}:{params}" if params else kind
    if cp.has_section("angles"):
        sec = dict(cp["angles"])
        if "schedule" in sec:
            vals["angles"] = sec["schedule"]
        else:
            kind = (sec.get("kind") or "").strip().lower()
            if kind == "uniform":
                vals["angles"] = f"uniform:{sec.get('K', '')}"
            elif kind == "adaptive":
                vals["angles"] = f"adaptive:{sec.get('tol', '1e-4')},{sec.get('K_max', '512')}"
            else:
                raise SpecError("[angles] needs schedule = ... or kind = uniform|adaptive")
    if cp.has_section("run"):
        sec = cp["run"]
        unknown = set(sec.keys()) - set(_RUN_KEYS)
        if unknown:
            raise SpecError(f"[run] unknown keys: {', '.join(sorted(unknown))}")
        for key in _RUN_KEYS:
            if key in sec:
                vals["formats" if key == "format" else key] = sec.get(key)
    return vals


def _coerce(key: str, value: Any) -> Any:
    if key in ("theta", "radius"):
        return value if isinstance(value, float) else _as_float(key, value)
    if key in ("samples", "seed", "workers", "cache_size", "k"):
        return value if isinstance(value, int) else _as_int(key, value)
    if key == "formats":
        if isinstance(value, (tuple, list)):
            return parse_formats(",".join(value))
        return parse_formats(value)
    if key == "operator":
        return str(value).strip().upper()
    return str(value).strip()
