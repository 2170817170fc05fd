"""Multiaccess coded caching with private demands.

Thin convenience layer over the compiled core: the *_json entry points are
re-exposed here with the JSON already parsed.
"""

import json

from macc._core import (
    __version__,
    demo,
    mod1,
    omega,
    share_reconstruct,
    share_split,
    tradeoff_csv,
    virtual_demand,
    window,
)
from macc._core import simulate_json as _simulate_json
from macc._core import verify_json as _verify_json

__all__ = [
    "__version__",
    "demo",
    "mod1",
    "omega",
    "share_reconstruct",
    "share_split",
    "simulate",
    "tradeoff_csv",
    "tradeoff_points",
    "verify",
    "virtual_demand",
    "window",
]


def simulate(**kwargs):
    """Run placement, delivery, and decode; returns the report as a dict."""
    return json.loads(_simulate_json(**kwargs))


def verify(check, **kwargs):
    """Run one exhaustive checker; returns the report as a dict."""
    return json.loads(_verify_json(check, **kwargs))


def tradeoff_points(k=3, l=2, n=3, which="both"):
    """Corner points as a list of dicts with exact and float coordinates."""
    lines = tradeoff_csv(k, l, n, which).strip().splitlines()
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        row = dict(zip(header, cells))
        for field in ("M_num", "M_den", "R_num", "R_den"):
            row[field] = int(row[field])
        for field in ("M_float", "R_float"):
            row[field] = float(row[field])
        rows.append(row)
    return rows
