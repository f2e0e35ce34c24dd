"""Model files: JSON loading with schema validation, and derivation documents."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Optional

import jsonschema
import mpmath

from ..algebra import BiPoly, RadicalNumber, as_fraction, radical_value
from ..algebra.numberfield import radical_field
from ..algebra.poly import format_fraction
from ..dfinite import AlgebraicFunction, LinearODE, PRecurrence
from ..risk import ClaimNumberSpec, ClaimSizeSpec, CompoundModel, ModelError, RecurrenceBundle
from ..series import mpf_str
from .parser import ParseError, parse_algebraic_expression

FORMAT_VERSION = 1


@dataclass
class RunOptions:
    digits: int = 30
    mode: str = "double"
    n: int = 1000


@dataclass
class ModelFile:
    model: CompoundModel
    path: str
    options: RunOptions = field(default_factory=RunOptions)


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("aggrec.cli").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def _reject_float(s: str):
    raise ModelError(f"decimal literal {s} is not allowed; use a rational string such as \"1/2\"")


def _reject_constant(s: str):
    raise ModelError(f"non-finite literal {s} is not allowed")


def loads_strict(text: str):
    """json.loads that refuses floats, NaN and Infinity."""
    return json.loads(text, parse_float=_reject_float, parse_constant=_reject_constant)


def _validate(doc, schema: str):
    try:
        jsonschema.validate(doc, load_schema(schema))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ModelError(f"{schema} schema violation at {where}: {exc.message}") from None


def _y0_from_json(v):
    if isinstance(v, str):
        return as_fraction(v)
    return radical_value(as_fraction(v["radicand"]), int(v["index"]), int(v.get("sign", 1)))


def _y0_to_json(y0):
    if isinstance(y0, Fraction):
        return format_fraction(y0)
    if isinstance(y0, RadicalNumber):
        nz = [i for i, c in enumerate(y0.coeffs) if c]
        if len(nz) == 1 and abs(y0.coeffs[nz[0]]) == 1:
            # +-alpha^i = +-(c^i)^(1/t)
            f = y0.field
            return {"radicand": format_fraction(f.radicand ** nz[0]), "index": f.index,
                    "sign": 1 if y0.coeffs[nz[0]] > 0 else -1}
    raise ModelError("branch value cannot be written as a rational or a single radical")


def model_from_json(doc: dict) -> CompoundModel:
    _validate(doc, "model")
    cn_doc, cs_doc = doc["claim_number"], doc["claim_size"]
    try:
        kind = cn_doc["kind"]
        if kind == "custom_ode":
            ode = LinearODE.from_json(cn_doc["ode"])
            cn = ClaimNumberSpec.custom(ode, cn_doc["seeds"])
        else:
            params = {k: as_fraction(v) for k, v in cn_doc.items() if k != "kind"}
            cn = ClaimNumberSpec(kind, params)
        kind = cs_doc["kind"]
        if kind == "pmf":
            cs = ClaimSizeSpec.from_pmf(cs_doc["pmf"])
        elif kind == "algebraic":
            eq = cs_doc["equation"]
            p = parse_algebraic_expression(eq) if isinstance(eq, str) else BiPoly.from_json(eq)
            cs = ClaimSizeSpec.algebraic(AlgebraicFunction(p, _y0_from_json(cs_doc["y0"])))
        else:
            cs = ClaimSizeSpec(kind, {k: as_fraction(v) for k, v in cs_doc.items() if k != "kind"})
    except ModelError:
        raise
    except (ParseError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise ModelError(str(exc)) from None
    return CompoundModel(cn, cs)


def model_to_json(model: CompoundModel) -> dict:
    out = {"format_version": FORMAT_VERSION}
    out.update(model.to_json())
    cs = model.claim_size
    if cs.kind == "algebraic":
        out["claim_size"]["y0"] = _y0_to_json(cs.function.y0)
    return out


def load_model(path: str) -> ModelFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ModelError(f"cannot read model file: {exc}") from None
    try:
        doc = loads_strict(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid JSON: {exc}") from None
    model = model_from_json(doc)
    opts = RunOptions(**doc.get("options", {}))
    return ModelFile(model, path, opts)


def _exact_json(v):
    if isinstance(v, (int, Fraction)):
        return format_fraction(Fraction(v))
    return {"radicand": format_fraction(v.field.radicand), "index": v.field.index,
            "coeffs": [format_fraction(c) for c in v.coeffs]}


def _exact_from_json(v):
    if isinstance(v, str):
        return as_fraction(v)
    return RadicalNumber(radical_field(as_fraction(v["radicand"]), int(v["index"])),
                         [as_fraction(c) for c in v["coeffs"]])


def derivation_to_json(model: CompoundModel, bundle: RecurrenceBundle) -> dict:
    with mpmath.workdps(bundle.digits + 10):
        numeric = [mpf_str(v, bundle.digits + 10) for v in bundle.initial_numeric]
    return {
        "format_version": FORMAT_VERSION,
        "fingerprint": bundle.fingerprint,
        "model": model_to_json(model),
        "ode": bundle.ode.to_json(),
        "recurrence": bundle.recurrence.to_json(),
        "initial_values": {
            "count": bundle.count,
            "digits": bundle.digits,
            "numeric": numeric,
            "exact_normalized": None if bundle.initial_exact is None else [_exact_json(v) for v in bundle.initial_exact],
        },
    }


@dataclass
class Derivation:
    fingerprint: str
    model: Optional[dict]
    ode: LinearODE
    recurrence: PRecurrence
    initial_numeric: list
    initial_exact: Optional[list]
    digits: int


def load_derivation(path: str) -> Derivation:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = loads_strict(fh.read())
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelError(f"cannot read derivation file: {exc}") from None
    _validate(doc, "derivation")
    iv = doc["initial_values"]
    try:
        with mpmath.workdps(int(iv["digits"]) + 10):
            numeric = [mpmath.mpf(s) for s in iv["numeric"]]
        exact = None if iv.get("exact_normalized") is None else [_exact_from_json(v) for v in iv["exact_normalized"]]
        return Derivation(doc["fingerprint"], doc.get("model"), LinearODE.from_json(doc["ode"]),
                          PRecurrence.from_json(doc["recurrence"]), numeric, exact, int(iv["digits"]))
    except (ValueError, TypeError, KeyError) as exc:
        raise ModelError(f"malformed derivation file: {exc}") from None


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"
