from __future__ import annotations

from typing import Any

from django.conf import settings


DEFAULTS: dict[str, Any] = {
    'QCUBE_DENSE_LIMIT': 10,
    'QCUBE_EXHAUSTIVE_CUBE_LIMIT': 24,
    'QCUBE_SUP_NORM_SAMPLES': 100_000,
    'QCUBE_BH_BOUNDS': {1: 2.0, 2: 4.0, 3: 8.0},
    'QCUBE_WORKERS': 1,
    'QCUBE_RECORD_RUNS': True,
}


def get_setting(name: str) -> Any:
    """Read a qcube setting, falling back to the built-in default outside Django."""
    if settings.configured:
        return getattr(settings, name, DEFAULTS[name])
    return DEFAULTS[name]


def bh_bound(d: int) -> float:
    """Configured stand-in for the Boolean BH constant of degree ``d``."""
    bounds = get_setting('QCUBE_BH_BOUNDS')
    return float(bounds.get(d, 2.0 ** d))
