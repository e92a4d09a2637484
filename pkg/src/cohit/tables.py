"""Bundled reference tables and their regeneration.

Each named table is a family of dimensions the library must reproduce:

- ``mdd41``: dim (QP_4)_d at d = 2^{s+1} - 3, s = 1..5
- ``mdd42``: dim of the kernel of the halving map on (QP_4)_d at
  d = 2^{s+1} - 2, s = 1..4
- ``mdd43``: dim (QP_4)_d at d = 2^{s+1} - 1, s = 1..5
- ``md421``: dim (QP_2)_d^{GL_2} for every d <= 34
- ``qp3``: dim (QP_3)_d on the standard degree families

The names are opaque dataset identifiers (stable CLI inputs).  The bundled
copy in ``data/tables.json`` was produced by ``build_table`` and is what the
``table`` CLI subcommand diffs against; ``regenerate`` recomputes a table
from scratch through the library.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Callable

from . import action, hit

TABLE_NAMES = ("mdd41", "mdd42", "mdd43", "md421", "qp3")


def _build_mdd41() -> dict:
    entries = [{"s": s, "degree": 2 ** (s + 1) - 3,
                "dim": hit.qp_dim(4, 2 ** (s + 1) - 3)}
               for s in range(1, 6)]
    return {"name": "mdd41", "k": 4, "kind": "qp", "entries": entries}


def _build_mdd42() -> dict:
    entries = [{"s": s, "degree": 2 ** (s + 1) - 2,
                "dim": len(hit.kameko_kernel(4, 2 ** (s + 1) - 2))}
               for s in range(1, 5)]
    return {"name": "mdd42", "k": 4, "kind": "kameko-kernel",
            "entries": entries}


def _build_mdd43() -> dict:
    entries = [{"s": s, "degree": 2 ** (s + 1) - 1,
                "dim": hit.qp_dim(4, 2 ** (s + 1) - 1)}
               for s in range(1, 6)]
    return {"name": "mdd43", "k": 4, "kind": "qp", "entries": entries}


def _build_md421() -> dict:
    entries = []
    for d in range(0, 35):
        basis = hit.qp_basis(2, d)
        dim = len(action.invariants(basis, action.GL))
        entries.append({"degree": d, "dim": dim})
    return {"name": "md421", "k": 2, "kind": "gl-invariants",
            "entries": entries}


def _qp3_degree_families() -> list[tuple[str, dict[str, int], int]]:
    """(family label, parameters, degree) for the qp3 table rows."""
    rows: list[tuple[str, dict[str, int], int]] = []
    for t in (1, 2, 3, 4):
        rows.append(("2^(t+1)-2", {"t": t}, 2 ** (t + 1) - 2))
    for t in (2, 3, 4):
        rows.append(("2^(t+1)-1", {"t": t}, 2 ** (t + 1) - 1))
    for s in (1, 2, 3):
        rows.append(("2^(s+1)", {"s": s}, 2 ** (s + 1)))
    for t in (2, 3):
        rows.append(("2^(t+1)+2^t-2", {"t": t}, 2 ** (t + 1) + 2 ** t - 2))
    for s, t in ((2, 2), (3, 2)):
        rows.append(("2^(s+t)+2^t-2", {"s": s, "t": t},
                     2 ** (s + t) + 2 ** t - 2))
    return rows


def _build_qp3() -> dict:
    entries = []
    for family, params, d in _qp3_degree_families():
        entry = {"family": family, **params, "degree": d,
                 "dim": hit.qp_dim(3, d)}
        entries.append(entry)
    return {"name": "qp3", "k": 3, "kind": "qp", "entries": entries}


_BUILDERS: dict[str, Callable[[], dict]] = {
    "mdd41": _build_mdd41,
    "mdd42": _build_mdd42,
    "mdd43": _build_mdd43,
    "md421": _build_md421,
    "qp3": _build_qp3,
}


def build_table(name: str) -> dict:
    """Recompute the named table from scratch through the library."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError(
            f"unknown table {name!r}; choose from {', '.join(TABLE_NAMES)}")
    return builder()


def expected_table(name: str) -> dict:
    """The bundled copy of the named table."""
    if name not in _BUILDERS:
        raise ValueError(
            f"unknown table {name!r}; choose from {', '.join(TABLE_NAMES)}")
    text = (resources.files("cohit") / "data" / "tables.json").read_text()
    return json.loads(text)[name]


def diff_table(name: str) -> tuple[dict, list[str]]:
    """Recompute the table and diff it against the bundled copy.  Returns
    the recomputed table and a list of human-readable mismatch lines
    (empty when the build reproduces the bundle)."""
    got = build_table(name)
    want = expected_table(name)
    mismatches = []
    if got["k"] != want["k"] or got["kind"] != want["kind"]:
        mismatches.append(
            f"table header differs: computed (k={got['k']}, "
            f"kind={got['kind']}), bundled (k={want['k']}, "
            f"kind={want['kind']})")
    gw = {tuple(sorted((k, v) for k, v in e.items() if k != "dim")): e["dim"]
          for e in got["entries"]}
    ww = {tuple(sorted((k, v) for k, v in e.items() if k != "dim")): e["dim"]
          for e in want["entries"]}
    for key in sorted(set(gw) | set(ww), key=str):
        label = ", ".join(f"{k}={v}" for k, v in key)
        if key not in gw:
            mismatches.append(f"missing from rebuild: {label} "
                              f"(bundled dim {ww[key]})")
        elif key not in ww:
            mismatches.append(f"extra in rebuild: {label} "
                              f"(computed dim {gw[key]})")
        elif gw[key] != ww[key]:
            mismatches.append(f"{label}: computed dim {gw[key]}, "
                              f"bundled dim {ww[key]}")
    return got, mismatches
