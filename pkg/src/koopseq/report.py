"""Verification reports and suite configuration."""

from dataclasses import dataclass, field, asdict
import json
import math

from .errors import ConfigError


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return _jsonable(x.item())
    return x


@dataclass
class VerificationReport:
    identity_id: str
    params: dict
    residual: float
    tolerance: float
    passed: bool
    runtime_ms: float = 0.0
    expected_failure: bool = False
    note: str = ""

    @property
    def ok(self):
        """True unless this is an unexpected failure."""
        return self.passed or self.expected_failure

    def to_dict(self, timings=False):
        d = asdict(self)
        d["pass"] = d.pop("passed")
        if not timings:
            d.pop("runtime_ms")
        else:
            d["runtime_ms"] = round(d["runtime_ms"], 3)
        if not d["note"]:
            d.pop("note")
        return _jsonable(d)

    def to_json(self, timings=False):
        return json.dumps(self.to_dict(timings), sort_keys=True)

    def summary_line(self):
        tag = "PASS" if self.passed else ("XFAIL" if self.expected_failure else "FAIL")
        return f"{tag:5s} {self.identity_id}  residual={self.residual:.3e}  tol={self.tolerance:.1e}"


INF = math.inf


@dataclass
class SuiteConfig:
    trunc_len: int = 64
    p_values: list = field(default_factory=lambda: [1.0, 2.0, 4.0, INF])
    t_values: list = field(default_factory=lambda: [0.1, 0.5, 1.0, 2.0])
    tol: float = 1e-8
    quadrature_order: int = 96
    seed: int = 0

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigError("configuration must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown configuration keys: {sorted(extra)}")
        cfg = cls()
        try:
            if "trunc_len" in d:
                cfg.trunc_len = int(d["trunc_len"])
            if "p_values" in d:
                cfg.p_values = [INF if str(p) in ("inf", "Infinity") else float(p) for p in d["p_values"]]
            if "t_values" in d:
                cfg.t_values = [float(t) for t in d["t_values"]]
            if "tol" in d:
                cfg.tol = float(d["tol"])
            if "quadrature_order" in d:
                cfg.quadrature_order = int(d["quadrature_order"])
            if "seed" in d:
                cfg.seed = int(d["seed"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad configuration value: {exc}") from exc
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text):
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"configuration is not valid JSON: {exc}") from exc

    def validate(self):
        if not 8 <= self.trunc_len <= 4096:
            raise ConfigError("trunc_len must lie in [8, 4096]")
        if any(p < 1 for p in self.p_values):
            raise ConfigError("p values must be >= 1")
        if any(t < 0 for t in self.t_values):
            raise ConfigError("t values must be non-negative")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.quadrature_order < 8:
            raise ConfigError("quadrature_order must be at least 8")
        return self
