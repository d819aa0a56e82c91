"""Instance files: a graded algebra, an action and tool limits, stored as JSON.

Schema::

    {
      "name": "E4",
      "mode": "affine" | "projective",
      "ring": {"vars": [{"name": "x", "weight": -1}, ...], "relations": ["e^2", ...]},
      "action": {"w": 1, "derivations": [{"x": "y"}, ...]},
      "k_stable_ideal": ["..."],                        optional
      "limits": {"step_budget": 1000000, "pool_degree": 2, "m": 1}   optional
    }

Projective cones may give ``"degree": 1`` per variable; other degrees are rejected.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .action import DerivationSet, FittingLadder
from .errors import ParseError, ValidationError
from .graded import GradedAlgebra
from .kernel import DEFAULT_STEP_BUDGET, PolyRing
from .strata import restrict_derivations

DEFAULT_LIMITS = {"step_budget": DEFAULT_STEP_BUDGET, "pool_degree": 2, "m": 1}


@dataclass
class Instance:
    name: str
    algebra: GradedAlgebra
    D: DerivationSet
    k_stable: list | None = None
    limits: dict = field(default_factory=lambda: dict(DEFAULT_LIMITS))

    @property
    def mode(self):
        return self.algebra.mode

    def to_dict(self):
        alg = self.algebra
        vars_ = []
        for n, w in zip(alg.names, alg.weights):
            v = {"name": n, "weight": w}
            if alg.mode == "projective":
                v["degree"] = 1
            vars_.append(v)
        out = {
            "name": self.name,
            "mode": alg.mode,
            "ring": {"vars": vars_, "relations": [str(g) for g in alg.relations.nonzero_gens()]},
            "action": {"w": self.D.w, "derivations": self.D.rows_as_dicts()},
            "limits": dict(self.limits),
        }
        if self.k_stable:
            out["k_stable_ideal"] = [str(alg.element(g)) for g in self.k_stable]
        return out

    def canonical_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def sha256(self):
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def _require(d, key, kind, where):
    if key not in d:
        raise ValidationError(f"missing field {where}{key}")
    if not isinstance(d[key], kind):
        raise ValidationError(f"field {where}{key} has the wrong type")
    return d[key]


def from_dict(data):
    if not isinstance(data, dict):
        raise ValidationError("instance must be a JSON object")
    name = _require(data, "name", str, "")
    mode = _require(data, "mode", str, "")
    if mode not in ("affine", "projective"):
        raise ValidationError(f"mode must be 'affine' or 'projective', got {mode!r}")
    ring_d = _require(data, "ring", dict, "")
    vars_ = _require(ring_d, "vars", list, "ring.")
    names, weights = [], []
    for v in vars_:
        if not isinstance(v, dict) or "name" not in v or "weight" not in v:
            raise ValidationError("each ring variable needs a name and a weight")
        if not isinstance(v["weight"], int) or isinstance(v["weight"], bool):
            raise ValidationError(f"weight of {v['name']} must be an integer")
        if mode == "projective" and v.get("degree", 1) != 1:
            raise ValidationError("projective cones need every generator in degree 1")
        if mode == "affine" and "degree" in v:
            raise ValidationError("affine instances do not carry projective degrees")
        names.append(v["name"])
        weights.append(v["weight"])
    try:
        ring = PolyRing(names)
        rels = [ring.parse(s) for s in ring_d.get("relations", [])]
    except ParseError as exc:
        raise ValidationError(str(exc)) from exc
    alg = GradedAlgebra(ring, weights, rels, mode=mode)
    act = _require(data, "action", dict, "")
    w = _require(act, "w", int, "action.")
    ders = _require(act, "derivations", list, "action.")
    if "r" in act and act["r"] != len(ders):
        raise ValidationError(f"action.r = {act['r']} but {len(ders)} derivations are given")
    rows = []
    for d in ders:
        if not isinstance(d, dict):
            raise ValidationError("each derivation is a map from generator name to image")
        try:
            rows.append({k: ring.parse(v) for k, v in d.items()})
        except ParseError as exc:
            raise ValidationError(str(exc)) from exc
    D = DerivationSet(alg, w, rows)
    limits = dict(DEFAULT_LIMITS)
    for k, v in data.get("limits", {}).items():
        if k not in DEFAULT_LIMITS:
            raise ValidationError(f"unknown limit {k!r}")
        if not isinstance(v, int) or v < 1:
            raise ValidationError(f"limit {k} must be a positive integer")
        limits[k] = v
    ks = data.get("k_stable_ideal")
    k_stable = None
    if ks is not None:
        try:
            k_stable = [ring.parse(s) for s in ks]
        except ParseError as exc:
            raise ValidationError(str(exc)) from exc
    return Instance(name, alg, D, k_stable, limits)


def load(path):
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ValidationError(f"instance file {path} not found") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"instance file {path} is not valid JSON: {exc}") from exc
    return from_dict(data)


def loads(text):
    try:
        return from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"not valid JSON: {exc}") from exc


def restrict_to_stratum_closure(inst: Instance, delta):
    """Instance on V(Fit_{δ-1}); unchanged if that Fitting ideal vanishes."""
    if not 0 <= delta <= inst.D.r:
        raise ValidationError(f"stratum index {delta} outside 0..{inst.D.r}")
    ladder = FittingLadder(inst.D)
    D2 = restrict_derivations(inst.D, delta, ladder)
    if D2 is inst.D:
        return inst
    return Instance(f"{inst.name}|closure{delta}", D2.algebra, D2, inst.k_stable, dict(inst.limits))
