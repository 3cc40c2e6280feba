"""JSON specifications for offspring laws and near-critical families."""

from __future__ import annotations

import json
from typing import Union

from .errors import ConstraintError
from .laws import (
    FiniteSupport,
    HarrisYule,
    ModifiedLinearFractional,
    MutationStopped,
    OffspringLaw,
    PowerFractional,
    Trifurcation,
    mlf_from_shape,
)


def law_from_spec(spec: dict) -> OffspringLaw:
    """Build a law from a keyed document with a "type" discriminator."""
    if not isinstance(spec, dict):
        raise ConstraintError("law spec must be a mapping")
    kind = spec.get("type")
    try:
        if kind == "finite":
            coeffs = spec.get("p", spec.get("coeffs"))
            if coeffs is None:
                raise ConstraintError("finite law needs a 'p' coefficient list")
            return FiniteSupport(tuple(coeffs), float(spec.get("defect", 0.0)))
        if kind == "mlf":
            if "shape" in spec:
                sh = spec["shape"]
                return mlf_from_shape(
                    float(sh["q"]), float(sh["r"]), float(sh["alpha"]), float(sh["gamma"])
                )
            return ModifiedLinearFractional(
                float(spec["p0"]),
                float(spec["p1"]),
                float(spec.get("p_delta", 0.0)),
                float(spec["p"]),
            )
        if kind == "trifurcation":
            return Trifurcation(float(spec["p0"]), float(spec["p2"]), float(spec["p3"]))
        if kind == "power_fractional":
            return PowerFractional(
                float(spec["q"]), float(spec["r"]), float(spec["a"]), float(spec["theta"])
            )
        if kind == "harris_yule":
            return HarrisYule(int(spec["k"]))
        if kind == "mutation_stopped":
            return MutationStopped(law_from_spec(spec["base"]), float(spec["mu"]))
    except KeyError as exc:
        raise ConstraintError(f"law spec missing field {exc}") from exc
    raise ConstraintError(f"unknown law type {kind!r}")


def law_to_spec(law: OffspringLaw) -> dict:
    if isinstance(law, FiniteSupport):
        return {"type": "finite", "p": list(law.coeffs), "defect": law.defect_mass}
    if isinstance(law, ModifiedLinearFractional):
        return {
            "type": "mlf",
            "p0": law.p0,
            "p1": law.p1,
            "p_delta": law.p_delta,
            "p": law.p,
        }
    if isinstance(law, Trifurcation):
        return {"type": "trifurcation", "p0": law.p0, "p2": law.p2, "p3": law.p3}
    if isinstance(law, PowerFractional):
        return {
            "type": "power_fractional",
            "q": law.q,
            "r": law.r,
            "a": law.a,
            "theta": law.theta,
        }
    if isinstance(law, HarrisYule):
        return {"type": "harris_yule", "k": law.k}
    if isinstance(law, MutationStopped):
        return {"type": "mutation_stopped", "base": law_to_spec(law.base), "mu": law.mu}
    raise ConstraintError(f"cannot serialize {type(law).__name__}")


def load_law(source: Union[str, dict]) -> OffspringLaw:
    """Parse a law from a dict, a JSON string, or a path to a JSON file."""
    if isinstance(source, dict):
        return law_from_spec(source)
    text = source
    if not text.lstrip().startswith("{"):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        return law_from_spec(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ConstraintError(f"invalid law JSON: {exc}") from exc


def family_from_spec(spec: dict):
    from .limits import NearCriticalFamily, mlf_defect_family, scaled_family

    if not isinstance(spec, dict):
        raise ConstraintError("family spec must be a mapping")
    kind = spec.get("family")
    d = spec.get("d")
    if kind == "scaled":
        fam = scaled_family(law_from_spec(spec["base"]))
    elif kind == "mlf_defect":
        fam = mlf_defect_family(float(spec["p0"]), float(spec["p1"]), float(spec["p"]))
    else:
        raise ConstraintError(f"unknown family kind {kind!r}")
    if d is not None:
        fam = NearCriticalFamily(fam.builder, fam.limit_law, float(d))
    return fam


def load_family(source: Union[str, dict]):
    if isinstance(source, dict):
        return family_from_spec(source)
    text = source
    if not text.lstrip().startswith("{"):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        return family_from_spec(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ConstraintError(f"invalid family JSON: {exc}") from exc
