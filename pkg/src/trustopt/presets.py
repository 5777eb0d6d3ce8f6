"""Named run configurations shipped with the package.

Five socio-cognitive societies plus the plain island-model baseline, stored
as JSON under ``trustopt/data/presets``.  Each file is a complete, valid
config whose cell fields (objective, dimension, max_steps, seed,
repetitions) act as placeholders that experiment manifests override.
"""

from __future__ import annotations

import json
from importlib import resources

from .config import TboConfig, config_from_dict, validate_config

__all__ = ["PRESET_NAMES", "DISPLAY_NAMES", "load_preset", "preset_json"]

# slug -> human-readable name, in canonical display order
DISPLAY_NAMES = {
    "strong_leadership": "Strong leadership",
    "exploration": "Exploration",
    "small_society": "Small society",
    "large_society": "Large society",
    "high_diversity": "High diversity",
    "island_model": "Island model",
}

PRESET_NAMES = tuple(DISPLAY_NAMES)


def _normalize(name: str) -> str:
    slug = name.strip().lower().replace(" ", "_").replace("-", "_")
    if slug not in DISPLAY_NAMES:
        raise KeyError(f"unknown preset: {name!r} (choose from {', '.join(PRESET_NAMES)})")
    return slug


def preset_json(name: str) -> str:
    """Raw JSON text of a preset (accepts slug or display name)."""
    slug = _normalize(name)
    return resources.files("trustopt").joinpath(f"data/presets/{slug}.json").read_text("utf-8")


def load_preset(name: str) -> TboConfig:
    """Parse and validate one shipped preset."""
    cfg = config_from_dict(json.loads(preset_json(name)))
    validate_config(cfg)
    return cfg
