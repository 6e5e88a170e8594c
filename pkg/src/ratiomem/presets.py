"""Named parameter presets shared by the CLI, server and explorer."""

from __future__ import annotations

from .errors import DomainError
from .model import FunctionalResponse, GrowthLaw, ModelParams

# Two holling predators on a small carrying capacity; the classic worked
# example of this model family.  Its equilibrium, thresholds and
# characteristic polynomials are all rational in r, which makes it the
# backbone of the acceptance suite.
PRESETS: dict[str, dict] = {
    "paper-example": {
        "K": 0.1,
        "predators": [
            {"kind": "holling", "m": 16.0, "a": 4.0, "d": 8.0},
            {"kind": "holling", "m": 18.0, "a": 2.0, "d": 12.0},
        ],
        "default_r": 13.0,
        "default_alpha": 1.0,
    },
}


def load_preset(name: str, r: float | None = None,
                alpha: float | None = None,
                use_default_alpha: bool = True) -> ModelParams:
    if name not in PRESETS:
        raise DomainError(f"unknown preset {name!r} (have: {sorted(PRESETS)})")
    spec = PRESETS[name]
    responses = tuple(FunctionalResponse(kind=p["kind"], m=p["m"], a=p["a"])
                      for p in spec["predators"])
    deaths = tuple(p["d"] for p in spec["predators"])
    if alpha is None and use_default_alpha:
        alpha = spec["default_alpha"]
    return ModelParams(
        r=spec["default_r"] if r is None else float(r),
        growth=GrowthLaw(K=spec["K"]),
        responses=responses,
        d=deaths,
        alpha=alpha,
    )
