"""Versioned JSON scenario files.

A scenario is a JSON object with `"version": 1` and the sections `model`, `data`,
`predictor`, `control`, `constraints`, `reference`, `noise`, `monte_carlo` and
`output`. With `"builtin": "<name>"` the named scenario shipped in `builtin/` is
loaded first and every key of the file overrides it.
"""
import dataclasses
import json
import pathlib
import re
import typing

from .._exceptions import ConfigError

VERSION = 1
BUILTIN_DIR = pathlib.Path(__file__).resolve().parent / "builtin"


def builtin_names():
    return sorted(path.stem for path in BUILTIN_DIR.glob("*.json"))


@dataclasses.dataclass
class ModelConfig:
    A: list
    B: list
    C: list
    D: typing.Optional[list] = None
    E: typing.Optional[list] = None


@dataclasses.dataclass
class DataConfig:
    length: int = 500
    construction: str = "hankel"
    input_variance: float = 1.0
    disturbance_variance: float = 1.0


@dataclasses.dataclass
class PredictorConfig:
    design: str = "mmse"


@dataclasses.dataclass
class ControlSection:
    L0: int = 4
    Lp: int = 10
    Q: list = dataclasses.field(default_factory=lambda: [[20.0]])
    R: list = dataclasses.field(default_factory=lambda: [[1.0]])
    p: float = 0.95
    tightening: str = "elementwise"
    distribution_mode: str = "chebyshev"
    variant: str = "s_ddpc"
    filter_mode: str = "paper-literal"
    retry_budget: int = 3


@dataclasses.dataclass
class ConstraintsConfig:
    output_lower: typing.Any = None
    output_upper: typing.Any = None
    input_lower: typing.Any = None
    input_upper: typing.Any = None


@dataclasses.dataclass
class ReferenceConfig:
    kind: str = "alternating"
    low: float = 0.0
    high: float = 1.0
    period: int = 25
    values: typing.Optional[list] = None


@dataclasses.dataclass
class NoiseConfig:
    sigma2: float = 0.01
    Sigma_w: typing.Optional[list] = None
    w_bar: typing.Optional[list] = None
    distribution: str = "gaussian"
    seed: int = 0


@dataclasses.dataclass
class MonteCarloConfig:
    runs: int = 50
    base_seed: int = 0
    steps: int = 100


@dataclasses.dataclass
class OutputConfig:
    directory: str = "sddpc-out"


@dataclasses.dataclass
class ScenarioConfig:
    model: ModelConfig
    data: DataConfig = dataclasses.field(default_factory=DataConfig)
    predictor: PredictorConfig = dataclasses.field(default_factory=PredictorConfig)
    control: ControlSection = dataclasses.field(default_factory=ControlSection)
    constraints: ConstraintsConfig = dataclasses.field(
        default_factory=ConstraintsConfig
    )
    reference: ReferenceConfig = dataclasses.field(default_factory=ReferenceConfig)
    noise: NoiseConfig = dataclasses.field(default_factory=NoiseConfig)
    monte_carlo: MonteCarloConfig = dataclasses.field(
        default_factory=MonteCarloConfig
    )
    output: OutputConfig = dataclasses.field(default_factory=OutputConfig)
    version: int = VERSION

    def to_dict(self):
        """Canonical, fully expanded form."""
        d = dataclasses.asdict(self)
        return {"version": d.pop("version"), **d}

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def replace(self, section, **kwargs):
        """Copy with some fields of one section replaced."""
        new = dataclasses.replace(getattr(self, section), **kwargs)
        return dataclasses.replace(self, **{section: new})


SECTIONS = {
    "model": ModelConfig,
    "data": DataConfig,
    "predictor": PredictorConfig,
    "control": ControlSection,
    "constraints": ConstraintsConfig,
    "reference": ReferenceConfig,
    "noise": NoiseConfig,
    "monte_carlo": MonteCarloConfig,
    "output": OutputConfig,
}

CHOICES = {
    ("data", "construction"): ("hankel", "page", "columns"),
    ("predictor", "design"): ("subspace", "wasserstein", "smm", "mmse"),
    ("control", "tightening"): ("elementwise", "setwise"),
    ("control", "distribution_mode"): ("chebyshev", "gaussian"),
    ("control", "variant"): ("n_ddpc", "kf_ddpc", "s_ddpc"),
    ("control", "filter_mode"): ("paper-literal", "full-kf"),
    ("reference", "kind"): ("alternating", "values"),
    ("noise", "distribution"): ("gaussian", "uniform-scaled"),
}


class _Locator:
    """Line numbers of keys in the raw JSON text."""

    def __init__(self, text, filename):
        self.text = text
        self.filename = filename

    def line(self, *path):
        if self.text is None:
            return None
        pos = 0
        for key in path:
            m = re.compile(r'"%s"\s*:' % re.escape(key)).search(self.text, pos)
            if m is None:
                return None
            pos = m.start()
        return self.text.count("\n", 0, pos) + 1

    def error(self, message, *path):
        return ConfigError(message, self.line(*path), self.filename)


def _matrix(value):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return [[float(value)]]
    rows = [[float(v) for v in row] for row in value]
    if len({len(row) for row in rows}) > 1:
        raise ValueError("ragged matrix")
    return rows


def _vector(value):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return [float(value)]
    return [float(v) for v in value]


def _bound(value):
    if value is None:
        return None
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    return [_bound(v) if isinstance(v, list) else float(v) for v in value]


def _int(value):
    if isinstance(value, bool) or float(value) != int(value):
        raise ValueError(f"{value!r} is not an integer")
    return int(value)


def _str(value):
    if not isinstance(value, str):
        raise ValueError(f"{value!r} is not a string")
    return value


def _float(value):
    if isinstance(value, bool):
        raise ValueError(f"{value!r} is not a number")
    return float(value)


def _optional(convert):
    def wrapped(value):
        return None if value is None else convert(value)

    return wrapped


CONVERTERS = {
    "model": {
        "A": _matrix,
        "B": _matrix,
        "C": _matrix,
        "D": _optional(_matrix),
        "E": _optional(_matrix),
    },
    "data": {
        "length": _int,
        "construction": _str,
        "input_variance": _float,
        "disturbance_variance": _float,
    },
    "predictor": {"design": _str},
    "control": {
        "L0": _int,
        "Lp": _int,
        "Q": _matrix,
        "R": _matrix,
        "p": _float,
        "tightening": _str,
        "distribution_mode": _str,
        "variant": _str,
        "filter_mode": _str,
        "retry_budget": _int,
    },
    "constraints": {
        "output_lower": _bound,
        "output_upper": _bound,
        "input_lower": _bound,
        "input_upper": _bound,
    },
    "reference": {
        "kind": _str,
        "low": _float,
        "high": _float,
        "period": _int,
        "values": _optional(_bound),
    },
    "noise": {
        "sigma2": _float,
        "Sigma_w": _optional(_matrix),
        "w_bar": _optional(_vector),
        "distribution": _str,
        "seed": _int,
    },
    "monte_carlo": {"runs": _int, "base_seed": _int, "steps": _int},
    "output": {"directory": _str},
}

POSITIVE = {
    ("data", "length"),
    ("control", "L0"),
    ("control", "Lp"),
    ("reference", "period"),
    ("monte_carlo", "steps"),
}


def _load_builtin(name):
    path = BUILTIN_DIR / f"{name}.json"
    if not path.is_file():
        raise ConfigError(f"unknown builtin scenario {name!r}")
    return json.loads(path.read_text())


def _merge(base, override):
    out = dict(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = val
    return out


def from_dict(raw, text=None, filename=None):
    loc = _Locator(text, filename)
    if not isinstance(raw, dict):
        raise loc.error("scenario must be a JSON object")
    raw = dict(raw)
    builtin = raw.pop("builtin", None)
    if builtin is not None:
        if not isinstance(builtin, str):
            raise loc.error("builtin must be a string", "builtin")
        raw = _merge(_load_builtin(builtin), raw)

    version = raw.pop("version", None)
    if version != VERSION:
        raise loc.error(
            f"unsupported version {version!r}, expected {VERSION}", "version"
        )
    for key in raw:
        if key not in SECTIONS:
            raise loc.error(f"unknown section {key!r}", key)
    if "model" not in raw:
        raise loc.error("missing section 'model'")

    sections = {}
    for name, cls in SECTIONS.items():
        values = raw.get(name, {})
        if not isinstance(values, dict):
            raise loc.error(f"section {name!r} must be an object", name)
        kwargs = {}
        for key, val in values.items():
            convert = CONVERTERS[name].get(key)
            if convert is None:
                raise loc.error(f"unknown key {key!r} in section {name!r}", name, key)
            try:
                val = convert(val)
            except (TypeError, ValueError) as e:
                raise loc.error(f"invalid value for {name}.{key}: {e}", name, key)
            choices = CHOICES.get((name, key))
            if choices is not None and val not in choices:
                raise loc.error(
                    f"{name}.{key} must be one of {choices}, got {val!r}", name, key
                )
            if (name, key) in POSITIVE and val < 1:
                raise loc.error(f"{name}.{key} must be positive, got {val}", name, key)
            kwargs[key] = val
        try:
            sections[name] = cls(**kwargs)
        except TypeError as e:
            raise loc.error(f"section {name!r}: {e}", name)
    return ScenarioConfig(version=VERSION, **sections)


def loads(text, filename=None):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(e.msg, e.lineno, filename)
    return from_dict(raw, text, filename)


def load(path):
    """Read a scenario file; a bare builtin name (with or without `.json`) that is
    not an existing file selects the shipped scenario.
    """
    path = pathlib.Path(path)
    if not path.is_file():
        name = path.name[: -len(".json")] if path.name.endswith(".json") else path.name
        if name in builtin_names():
            path = BUILTIN_DIR / f"{name}.json"
        else:
            raise ConfigError(f"no such scenario file or builtin: {path}")
    return loads(path.read_text(), str(path))
