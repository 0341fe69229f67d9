"""
Experiment configuration for tubal-solve.
Supports flat key=value files and YAML files describing a parameter grid.
"""

import itertools
import logging
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Optional, Union

import yaml

from .errors import ConfigError
from .seeding import derive_seed

logger = logging.getLogger(__name__)

COMMANDS = ("synth", "recover", "complete", "sweep", "trip-probe")
SENSING_COMMANDS = ("synth", "recover", "sweep")
INITS = ("small", "spectral", "large")
NOISES = ("gaussian", "laplace", "exponential", "none")
M_CONVENTIONS = ("nrk", "2cm", "dof")
SCALINGS = ("raw", "inv_sqrt_m")

INT_GRID_KEYS = ("n", "k", "r", "R", "m", "T", "n1", "n2")
FLOAT_GRID_KEYS = ("m_factor", "eta", "alpha", "sigma", "val_frac", "p", "ratios")
STR_GRID_KEYS = ("init", "noise")
GRID_KEYS = INT_GRID_KEYS + FLOAT_GRID_KEYS + STR_GRID_KEYS
INSTANCE_FIELDS = ("n", "k", "r", "m", "sigma", "noise", "p", "n1", "n2")

INT_KEYS = ("seed", "diag_stride", "repeats", "trials", "workers")
FLOAT_KEYS = ("divergence_guard",)
BOOL_KEYS = ("symmetrize_gradient", "verbose")
STR_KEYS = (
    "command", "m_convention", "scaling", "out", "truth_file", "observed_file", "mask_file",
)

TRUE_WORDS = ("1", "true", "yes", "on")
FALSE_WORDS = ("0", "false", "no", "off")


@dataclass(frozen=True)
class GridPoint:
    """One fully determined parameter combination; unset fields stay None."""

    index: int
    n: Optional[int] = None
    k: Optional[int] = None
    r: Optional[int] = None
    R: Optional[int] = None
    m: Optional[int] = None
    sigma: float = 0.0
    eta: Optional[float] = None
    T: Optional[int] = None
    alpha: Optional[float] = None
    init: str = "small"
    noise: str = "gaussian"
    val_frac: float = 0.05
    p: Optional[float] = None
    n1: Optional[int] = None
    n2: Optional[int] = None
    ratio: Optional[float] = None

    @property
    def instance_key(self) -> tuple:
        """Fields that define the problem instance.

        Solver settings (R, init, eta, T, alpha, val_frac) are left out, so every
        solver variant of one instance and repeat sees the same data.
        """
        return tuple((name, getattr(self, name)) for name in INSTANCE_FIELDS)


@dataclass(frozen=True)
class RunSpec:
    point: GridPoint
    repeat: int
    seed: int


@dataclass
class ExperimentSpec:
    command: str = "recover"
    n: list[int] = field(default_factory=lambda: [30])
    k: list[int] = field(default_factory=lambda: [3])
    r: list[int] = field(default_factory=lambda: [3])
    R: list[int] = field(default_factory=lambda: [3])
    m: list[int] = field(default_factory=list)
    m_factor: list[float] = field(default_factory=lambda: [10.0])
    m_convention: str = "nrk"
    eta: list[float] = field(default_factory=list)
    T: list[int] = field(default_factory=list)
    alpha: list[float] = field(default_factory=list)
    init: list[str] = field(default_factory=lambda: ["small"])
    sigma: list[float] = field(default_factory=lambda: [1e-3])
    noise: list[str] = field(default_factory=lambda: ["gaussian"])
    seed: int = 0
    val_frac: list[float] = field(default_factory=lambda: [0.05])
    diag_stride: int = 1
    repeats: int = 1
    p: list[float] = field(default_factory=lambda: [0.3])
    n1: list[int] = field(default_factory=lambda: [60])
    n2: list[int] = field(default_factory=lambda: [60])
    symmetrize_gradient: bool = False
    divergence_guard: float = 1e6
    trials: int = 50
    ratios: list[float] = field(default_factory=lambda: [2.0, 5.0, 10.0])
    scaling: str = "raw"
    out: str = "out"
    workers: int = 1
    verbose: bool = False
    truth_file: Optional[str] = None
    observed_file: Optional[str] = None
    mask_file: Optional[str] = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; expected one of {COMMANDS}")
        if self.m_convention not in M_CONVENTIONS:
            raise ConfigError(f"m_convention must be one of {M_CONVENTIONS}")
        if self.scaling not in SCALINGS:
            raise ConfigError(f"scaling must be one of {SCALINGS}")
        for value in self.init:
            if value not in INITS:
                raise ConfigError(f"init must be one of {INITS}, got {value!r}")
        for value in self.noise:
            if value not in NOISES:
                raise ConfigError(f"noise must be one of {NOISES}, got {value!r}")
        for name in ("n", "k", "R", "m", "n1", "n2"):
            if any(v < 1 for v in getattr(self, name)):
                raise ConfigError(f"{name} values must be positive")
        # r = 0 is meaningless for every command, including the probe
        if any(v < 1 for v in self.r):
            raise ConfigError("tubal rank r must be at least 1")
        if any(v < 0 for v in self.sigma) or any(v < 0 for v in self.eta):
            raise ConfigError("sigma and eta must be nonnegative")
        if any(not 0.0 < v <= 1.0 for v in self.p):
            raise ConfigError("p values must lie in (0, 1]")
        if any(not 0.0 < v < 1.0 for v in self.val_frac):
            raise ConfigError("val_frac values must lie in (0, 1)")
        if any(v <= 0 for v in self.m_factor) or any(v <= 0 for v in self.ratios):
            raise ConfigError("m_factor and ratios must be positive")
        if self.repeats < 1 or self.workers < 1 or self.trials < 1:
            raise ConfigError("repeats, workers and trials must be at least 1")
        if self.diag_stride < 0:
            raise ConfigError("diag_stride must be nonnegative")
        if (self.observed_file is None) != (self.mask_file is None):
            raise ConfigError("observed_file and mask_file must be given together")
        for name in GRID_KEYS:
            values = getattr(self, name)
            if len(set(values)) != len(values):
                raise ConfigError(f"duplicate values in {name}: {values}")

    def measurement_counts(self, n: int, r: int, k: int) -> list[int]:
        """m given directly, or derived from m_factor under ``m_convention``."""
        if self.m:
            return list(self.m)
        counts = []
        for factor in self.m_factor:
            if self.m_convention == "nrk":
                value = factor * n * r * k
            elif self.m_convention == "2cm":
                value = 2.0 * factor * n * r * k
            else:
                value = factor * k * r * (2 * n - r)
            counts.append(max(1, int(round(value))))
        return counts

    def grid(self) -> list[GridPoint]:
        """Cartesian product of the grid keys relevant to ``command``, in a fixed order."""
        points: list[GridPoint] = []
        if self.command == "synth":
            for n, k, r in itertools.product(self.n, self.k, self.r):
                if r > n:
                    raise ConfigError(f"tubal rank r={r} exceeds n={n}")
                for m, sigma, noise in itertools.product(
                    self.measurement_counts(n, r, k), self.sigma, self.noise
                ):
                    points.append(
                        GridPoint(index=len(points), n=n, k=k, r=r, m=m, sigma=sigma, noise=noise)
                    )
        elif self.command in SENSING_COMMANDS:
            for n, k, r in itertools.product(self.n, self.k, self.r):
                if r > n:
                    raise ConfigError(f"tubal rank r={r} exceeds n={n}")
                for m, R, sigma, noise, init, eta, T, alpha, val_frac in itertools.product(
                    self.measurement_counts(n, r, k),
                    self.R,
                    self.sigma,
                    self.noise,
                    self.init,
                    self.eta or [None],
                    self.T or [None],
                    self.alpha or [None],
                    self.val_frac,
                ):
                    points.append(
                        GridPoint(
                            index=len(points),
                            n=n,
                            k=k,
                            r=r,
                            R=R,
                            m=m,
                            sigma=sigma,
                            noise=noise,
                            init=init,
                            eta=self._eta(eta, init),
                            T=5000 if T is None else T,
                            alpha=alpha,
                            val_frac=val_frac,
                        )
                    )
        elif self.command == "complete":
            # a truth file fixes the sizes and the rank; observed files also fix p and the noise
            sizes = [(None, None, None, None)]
            if self.truth_file is None and self.observed_file is None:
                sizes = list(itertools.product(self.n1, self.n2, self.k, self.r))
            rates, sigmas = (self.p, self.sigma) if self.observed_file is None else ([None], [0.0])
            for (n1, n2, k, r), p, sigma, R, eta, T, alpha, val_frac in itertools.product(
                sizes,
                rates,
                sigmas,
                self.R,
                self.eta or [1e-3],
                self.T or [2000],
                self.alpha or [1e-5],
                self.val_frac,
            ):
                points.append(
                    GridPoint(
                        index=len(points),
                        n1=n1,
                        n2=n2,
                        k=k,
                        r=r,
                        R=R,
                        p=p,
                        sigma=sigma,
                        eta=eta,
                        T=T,
                        alpha=alpha,
                        val_frac=val_frac,
                    )
                )
        else:
            for n, k, r, ratio in itertools.product(self.n, self.k, self.r, self.ratios):
                m = max(1, int(round(ratio * n * r * k)))
                points.append(GridPoint(index=len(points), n=n, k=k, r=r, m=m, ratio=ratio))
        return points

    def runs(self) -> list[RunSpec]:
        """Every grid point times every repeat, each with its own derived seed."""
        return [
            RunSpec(point=point, repeat=repeat, seed=derive_seed(self.seed, point.instance_key, repeat))
            for point in self.grid()
            for repeat in range(self.repeats)
        ]

    @staticmethod
    def _eta(eta: Optional[float], init: str) -> float:
        if eta is not None:
            return eta
        return 1e-3 if init == "large" else 0.1


def _split_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _coerce(name: str, value: Any, kind: type) -> Any:
    try:
        if kind is bool:
            if isinstance(value, bool):
                return value
            word = str(value).strip().lower()
            if word in TRUE_WORDS:
                return True
            if word in FALSE_WORDS:
                return False
            raise ValueError(word)
        if kind is int:
            if isinstance(value, bool):
                raise ValueError(value)
            number = float(value)
            if not number.is_integer():
                raise ValueError(value)
            return int(number)
        if kind is float:
            if isinstance(value, bool):
                raise ValueError(value)
            return float(value)
        return str(value).strip()
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"cannot read {name}={value!r} as {kind.__name__}") from exc


def _grid_kind(name: str) -> type:
    if name in INT_GRID_KEYS:
        return int
    if name in FLOAT_GRID_KEYS:
        return float
    return str


def _scalar_kind(name: str) -> type:
    if name in INT_KEYS:
        return int
    if name in FLOAT_KEYS:
        return float
    if name in BOOL_KEYS:
        return bool
    return str


def parse_text(text: str) -> dict[str, str]:
    """Flat key=value syntax: one key per line, ``#`` comments, blank lines ignored."""
    data: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {number}: expected key=value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {number}: empty key")
        if key in data:
            raise ConfigError(f"line {number}: duplicate key {key!r}")
        data[key] = value
    return data


def parse_spec(data: dict) -> ExperimentSpec:
    known = set(GRID_KEYS + INT_KEYS + FLOAT_KEYS + BOOL_KEYS + STR_KEYS)
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")

    values: dict[str, Any] = {}
    for name, value in data.items():
        if value is None:
            continue
        if name in GRID_KEYS:
            items = value if isinstance(value, list) else _split_list(str(value))
            values[name] = [_coerce(name, item, _grid_kind(name)) for item in items]
        else:
            values[name] = _coerce(name, value, _scalar_kind(name))
    return ExperimentSpec(**values)


def load_spec(path: Union[str, Path]) -> ExperimentSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc

    if path.suffix in (".yaml", ".yml"):
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path} must hold a mapping of keys to values")
    else:
        data = parse_text(text)
    spec = parse_spec(data)
    logger.debug("loaded %s config from %s", spec.command, path)
    return spec


def spec_to_dict(spec: ExperimentSpec) -> dict[str, Any]:
    data = {}
    for f in fields(spec):
        value = getattr(spec, f.name)
        if value is None or value == []:
            continue
        data[f.name] = list(value) if isinstance(value, list) else value
    return data


def save_spec(spec: ExperimentSpec, path: Union[str, Path]) -> None:
    path = Path(path)
    data = spec_to_dict(spec)
    if path.suffix in (".yaml", ".yml"):
        text = yaml.safe_dump(data, default_flow_style=False, sort_keys=False)
    else:
        lines = []
        for name, value in data.items():
            if isinstance(value, list):
                value = ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)
            elif isinstance(value, bool):
                value = "true" if value else "false"
            lines.append(f"{name}={value}")
        text = "\n".join(lines) + "\n"
    path.write_text(text, encoding="utf-8")


SAMPLE_SPEC = """# tubal-solve experiment configuration
# Grid keys take comma separated lists; every combination runs `repeats` times.

command=recover

# problem size
n=30
k=3
r=3
R=3,6,9,12

# measurements: m directly, or m_factor under m_convention (nrk | 2cm | dof)
m_factor=10
m_convention=nrk

# noise: gaussian | laplace | exponential | none (sigma is sigma, b or 1/lambda)
noise=gaussian
sigma=1e-3

# solver: init is small | spectral | large
init=small
eta=0.1
T=5000
alpha=1e-8
val_frac=0.05
diag_stride=10

seed=0
repeats=20
workers=1
out=out
"""


def create_sample_spec(path: Union[str, Path]) -> bool:
    """Write the sample config unless ``path`` already exists; returns whether it wrote."""
    path = Path(path)
    if path.exists():
        return False
    if path.suffix in (".yaml", ".yml"):
        save_spec(parse_spec(parse_text(SAMPLE_SPEC)), path)
    else:
        path.write_text(SAMPLE_SPEC, encoding="utf-8")
    return True
