"""Game parameters, validation and JSON loading."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .errors import AssumptionViolated

# JSON key -> attribute name. ``lambda`` is a keyword in Python.
_KEY_TO_ATTR = {"lambda": "lam"}
_ATTR_TO_KEY = {v: k for k, v in _KEY_TO_ATTR.items()}


@dataclass(frozen=True)
class GameParams:
    """Parameters of the aggregator / validator announcement game.

    Money fields: Z (malicious block value), S (aggregator deposit),
    B (aggregator reward), T (validator reward pool), C (verification cost),
    V (validator deposit). Fractions: delta (challenger share of S),
    f_p / f_n (false positive / false negative penalty rates), lam (share
    of the false-negative penalty paid to the aggregator).
    """

    Z: float
    S: float
    B: float
    T: float
    C: float
    V: float
    delta: float
    f_p: float
    f_n: float
    lam: float = 1.0
    n: int = 1

    @property
    def A(self) -> float:
        return (self.B + self.S) / (self.Z + self.S)

    @property
    def dS(self) -> float:
        return self.delta * self.S

    @property
    def R(self) -> float:
        return (self.T / self.n + self.f_p * self.V) / self.dS

    def with_(self, **changes) -> "GameParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {_ATTR_TO_KEY.get(k, k): v for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, data: dict) -> "GameParams":
        names = {f.name for f in fields(cls)}
        kwargs = {}
        for key, value in data.items():
            attr = _KEY_TO_ATTR.get(key, key)
            if attr not in names:
                raise AssumptionViolated("unknown_key", f"unknown parameter {key!r}")
            kwargs[attr] = value
        missing = names - kwargs.keys() - {"lam", "n"}
        if missing:
            raise AssumptionViolated("missing_key", ", ".join(sorted(missing)))
        if "n" in kwargs:
            n = kwargs["n"]
            if isinstance(n, float) and n.is_integer():
                n = int(n)
            if not isinstance(n, int) or isinstance(n, bool):
                raise AssumptionViolated("n_not_integer", repr(n))
            kwargs["n"] = n
        return cls(**kwargs)


REFERENCE = GameParams(Z=200.0, S=100.0, B=20.0, T=10.0, C=8.0, V=50.0,
                       delta=0.5, f_p=0.1, f_n=0.1, lam=1.0, n=1)

# Region where every loss direction listed in the design suggestions holds
# on 20-point grids (see tests/test_acceptance.py, criterion 10).
SUGGESTION_REGIME = GameParams(Z=1000.0, S=150.0, B=40.0, T=5.0, C=2.0, V=300.0,
                               delta=0.7, f_p=0.6, f_n=0.1, lam=1.0, n=6)


def validate_params(p: GameParams) -> GameParams:
    """Return ``p`` unchanged if every invariant holds, else raise."""
    for name in ("delta", "f_p", "f_n", "lam"):
        v = getattr(p, name)
        if not 0.0 <= v <= 1.0:
            raise AssumptionViolated(f"fraction_out_of_range:{_ATTR_TO_KEY.get(name, name)}",
                                     f"{v} not in [0, 1]")
    for name in ("Z", "S", "B", "T", "V"):
        if getattr(p, name) < 0:
            raise AssumptionViolated(f"negative_money:{name}", str(getattr(p, name)))
    if not p.C > 0:
        raise AssumptionViolated("nonpositive_C", str(p.C))
    if isinstance(p.n, bool) or not isinstance(p.n, int) or p.n < 1:
        raise AssumptionViolated("n_lt_1", repr(p.n))
    if not p.delta * p.S > p.T:
        raise AssumptionViolated(
            "deltaS_le_T",
            f"Assumption 1 requires delta*S > T, got {p.delta * p.S:g} <= {p.T:g}")
    if not p.Z > p.B:
        raise AssumptionViolated(
            "Z_le_B", f"Assumption 2 requires Z > B, got {p.Z:g} <= {p.B:g}")
    return p


def check_assumptions(p: GameParams) -> str | None:
    """Name of the first failing invariant, or None."""
    try:
        validate_params(p)
    except AssumptionViolated as exc:
        return exc.name
    return None


def load_config(path: str | Path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def params_from_config(cfg: dict) -> GameParams:
    """Accepts either a flat parameter object or ``{"params": {...}, ...}``."""
    if "params" in cfg:
        extra = set(cfg) - {"params", "variant", "sweep"}
        if extra:
            raise AssumptionViolated("unknown_key", ", ".join(sorted(extra)))
        cfg = cfg["params"]
    return GameParams.from_dict(cfg)


def load_params(path: str | Path) -> GameParams:
    return validate_params(params_from_config(load_config(path)))
