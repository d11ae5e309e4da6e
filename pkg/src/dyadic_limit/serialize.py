"""JSON forms of the package's objects, plus schema validation.

* dyadics: ``"p/q"`` strings (``"3/8"``, ``"0"``, ``"1"``)
* partitions: breakpoint lists ``["0", "1/2", "1"]``
* matrices: nested ``[re, im]`` pairs, row-major
"""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema
import numpy as np

from .dyadic import DyadicPartition, DyadicRational, parse_dyadic
from .errors import PreconditionError
from .linalg import Isometry
from .thompson import ThompsonElement
from .ttn import ScaleState


def partition_to_json(p: DyadicPartition) -> list[str]:
    return [str(x) for x in p.breakpoints()]


def partition_from_json(points) -> DyadicPartition:
    return DyadicPartition.from_breakpoints([parse_dyadic(str(x)) for x in points])


def thompson_to_json(f: ThompsonElement) -> dict:
    return {
        "domain": partition_to_json(f.domain),
        "range": partition_to_json(f.range),
        "offset": f.offset,
    }


def thompson_from_json(obj: dict) -> ThompsonElement:
    validate(obj, "thompson")
    return ThompsonElement(
        partition_from_json(obj["domain"]), partition_from_json(obj["range"]), int(obj["offset"])
    )


def complex_to_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def vector_to_json(v) -> list[list[float]]:
    return [complex_to_json(z) for z in np.asarray(v).reshape(-1)]


def vector_from_json(items) -> np.ndarray:
    return np.array([complex(re, im) for re, im in items], dtype=complex)


def matrix_to_json(m) -> list:
    return [vector_to_json(row) for row in np.atleast_2d(m)]


def matrix_from_json(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def isometry_to_json(V: Isometry) -> dict:
    return {"d": V.d, "matrix": matrix_to_json(V.matrix)}


def isometry_from_json(obj: dict) -> Isometry:
    validate(obj, "isometry")
    V = Isometry(matrix_from_json(obj["matrix"]))
    if V.d != obj["d"]:
        raise PreconditionError(f"declared d={obj['d']} but matrix has d={V.d}")
    return V


def state_to_json(s: ScaleState) -> dict:
    return {"d": s.d, "partition": partition_to_json(s.partition),
            "amplitudes": vector_to_json(s.vector)}


def state_from_json(obj: dict) -> ScaleState:
    validate(obj, "state")
    return ScaleState(partition_from_json(obj["partition"]),
                      vector_from_json(obj["amplitudes"]), int(obj["d"]))


def dyadic_to_json(x: DyadicRational) -> str:
    return str(x)


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("dyadic_limit").joinpath("schemas", f"{name}.schema.json").read_text("utf-8")
    return json.loads(text)


def validate(obj, name: str) -> None:
    try:
        jsonschema.validate(obj, load_schema(name))
    except jsonschema.ValidationError as exc:
        raise PreconditionError(f"invalid {name} document: {exc.message}") from exc
