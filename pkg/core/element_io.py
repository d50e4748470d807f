"""
Element I/O
JSON documents for field descriptors, Witt elements and reports.

Element document:
    {"field": {"p": 3, "deg": 2, "modulus": [1, 0, 1]}, "n": 2,
     "terms": [{"alpha": [1, 0], "d": 1, "c": [2, 1]}]}
Terms are sorted by (alpha, d); coefficients are ascending lists in t.
"""

import json
from pathlib import Path
from typing import Any, Dict, Union

from core.errors import ElementFormatError
from core.galois_field import GaloisField
from core.witt_algebra import WittAlgebra, WittElement


def field_from_dict(doc: Dict[str, Any]) -> GaloisField:
    try:
        return GaloisField(int(doc["p"]), int(doc["deg"]), doc.get("modulus"))
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise ElementFormatError(f"bad field descriptor {doc!r}: {e}") from e


def is_json_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def strict_int(value: Any) -> int:
    """Integers only; floats and booleans are not silently coerced."""
    if not is_json_int(value):
        raise TypeError(f"expected an integer, got {value!r}")
    return value


def element_to_dict(X: WittElement) -> Dict[str, Any]:
    F = X.field
    terms = [{"alpha": list(alpha), "d": i, "c": list(F.decode(c))}
             for (alpha, i), c in X.sorted_terms()]
    return {"field": F.to_dict(), "n": X.algebra.n, "terms": terms}


def element_from_dict(doc: Dict[str, Any], algebra: WittAlgebra) -> WittElement:
    """Strict parse: matching field and n, canonical order, no zero or repeated terms."""
    if not isinstance(doc, dict):
        raise ElementFormatError("element document must be a JSON object")
    missing = {"field", "n", "terms"} - set(doc)
    if missing:
        raise ElementFormatError(f"element document lacks {sorted(missing)}")
    if field_from_dict(doc["field"]) != algebra.field:
        raise ElementFormatError(f"element field {doc['field']} does not match {algebra.field}")
    if not is_json_int(doc["n"]) or doc["n"] != algebra.n:
        raise ElementFormatError(f"element has n = {doc['n']}, algebra has n = {algebra.n}")
    if not isinstance(doc["terms"], list):
        raise ElementFormatError("'terms' must be a list")

    F = algebra.field
    terms = {}
    previous = None
    for term in doc["terms"]:
        try:
            alpha = tuple(strict_int(a) for a in term["alpha"])
            d = strict_int(term["d"])
            coeffs = [strict_int(c) for c in term["c"]]
        except (KeyError, TypeError, ValueError) as e:
            raise ElementFormatError(f"malformed term {term!r}") from e
        if len(alpha) != algebra.n or any(not 0 <= a < F.p for a in alpha):
            raise ElementFormatError(f"exponent vector {list(alpha)} is out of range")
        if not 1 <= d <= algebra.n:
            raise ElementFormatError(f"direction {d} outside 1..{algebra.n}")
        if len(coeffs) > F.m or any(not 0 <= c < F.p for c in coeffs):
            raise ElementFormatError(f"coefficient {coeffs} is not a reduced element of {F}")
        value = F.encode(coeffs)
        if value == 0:
            raise ElementFormatError(f"zero coefficient stored for {list(alpha)}, D{d}")
        key = (alpha, d)
        if previous is not None and key <= previous:
            raise ElementFormatError(f"terms out of canonical order at {list(alpha)}, D{d}")
        previous = key
        terms[key] = value
    return WittElement(algebra, terms)


def dumps(doc: Any) -> str:
    """Compact single-line JSON, byte-stable for identical input."""
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)


def dumps_element(X: WittElement) -> str:
    return dumps(element_to_dict(X))


def loads_element(text: str, algebra: WittAlgebra) -> WittElement:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ElementFormatError(f"not valid JSON: {e}") from e
    return element_from_dict(doc, algebra)


def load_document(path: Union[str, Path]) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except OSError as e:
        raise ElementFormatError(f"cannot read {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise ElementFormatError(f"{path} is not UTF-8 text: {e}") from e
    except json.JSONDecodeError as e:
        raise ElementFormatError(f"{path} is not valid JSON: {e}") from e


def read_element(path: Union[str, Path], algebra: WittAlgebra) -> WittElement:
    return element_from_dict(load_document(path), algebra)


def write_document(doc: Any, path: Union[str, Path]):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(json.dumps(doc, indent=2, ensure_ascii=False))
        f.write("\n")
