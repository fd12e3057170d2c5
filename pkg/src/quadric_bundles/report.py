"""JSON report documents.

Rationals are written as ``{"num": int, "den": int, "decimal": str}``,
never as floats.  Documents are emitted with sorted keys and fixed
indentation, so equal inputs give byte-identical output and re-emitting a
parsed document reproduces it exactly.
"""

from __future__ import annotations

import dataclasses
import json
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from typing import Any, Iterable

from . import __version__, model, params

DECIMAL_PLACES = 6


def decimal_string(x: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 60
        q = (Decimal(x.numerator) / Decimal(x.denominator)).quantize(
            Decimal(1).scaleb(-DECIMAL_PLACES), rounding=ROUND_HALF_EVEN
        )
    s = format(q, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def rational(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator, "decimal": decimal_string(x)}


def parse_rational(obj: dict) -> Fraction:
    return Fraction(obj["num"], obj["den"])


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, params.Provenance):
        return obj.to_dict()
    if isinstance(obj, params.CriticalValue):
        return {"value": rational(obj.value), "provenance": [p.to_dict() for p in obj.provenance]}
    if isinstance(obj, params.Chamber):
        return {
            "kind": obj.kind,
            "lower": None if obj.lower is None else rational(obj.lower),
            "upper": rational(obj.upper),
            **({"note": obj.note} if obj.note else {}),
        }
    if isinstance(obj, model.Subobject):
        return obj.to_dict()
    if isinstance(obj, model.Witness):
        return {
            "subobject": None if obj.subobject is None else obj.subobject.to_dict(),
            "clause": obj.clause,
            "slack": rational(obj.slack),
            "decomposable": obj.decomposable,
        }
    if isinstance(obj, model.StabilityVerdict):
        return {
            "class": obj.cls,
            "witnesses": [to_jsonable(w) for w in obj.witnesses],
            "alpha_independent": obj.alpha_independent,
            "alpha_above_slope": obj.alpha_above_slope,
        }
    if isinstance(obj, params.ModuliParams):
        return {"genus": obj.genus, "rank": obj.rank, "degree": obj.degree, "twist_degree": obj.twist_degree}
    if dataclasses.is_dataclass(obj):
        out = {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        if hasattr(obj, "citations"):
            out["citations"] = obj.citations()
        return out
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def document(command: str, inputs: dict, results: Any, citations: Iterable[str], seed: int) -> dict:
    return {
        "tool_version": __version__,
        "command": command,
        "inputs": to_jsonable(inputs),
        "results": to_jsonable(results),
        "citations": sorted(set(citations)),
        "seed": seed,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def collect_citations(results: Any) -> list[str]:
    """Every citation string found anywhere in a serialised payload."""
    found: set[str] = set()

    def walk(x: Any) -> None:
        if isinstance(x, dict):
            for k, v in x.items():
                if k == "citations" and isinstance(v, dict):
                    found.update(v.values())
                else:
                    walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)

    walk(to_jsonable(results))
    return sorted(found)
