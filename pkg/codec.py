"""
JSON encoding for the public value types

encode() turns any result into JSON-ready data; decode() rebuilds a value of
a given type from that data, so decode(type(x), json.loads(dumps(x))) == x.
"""
import json
from enum import Enum
from fractions import Fraction

import cellsurf
import enumeration
import mmp
import pairalg
import piclattice


def _cell_surface_to_dict(cs):
    return {"polygons": [[[label, sign] for label, sign in polygon] for polygon in cs.polygons]}


def _cell_surface_from_dict(data):
    return cellsurf.CellSurface(tuple(tuple((label, int(sign)) for label, sign in polygon)
                                      for polygon in data["polygons"]))


def _curve_to_dict(c):
    return {"cycle": [[label, sign] for label, sign in c.cycle]}


def _curve_from_dict(data):
    return cellsurf.CurveTrace(tuple((label, int(sign)) for label, sign in data["cycle"]))


# Types without their own to_dict/from_dict
_ADAPTERS = {
    pairalg.PairWord: (lambda w: {"word": str(w)}, lambda data: pairalg.parse_word(data["word"])),
    cellsurf.CellSurface: (_cell_surface_to_dict, _cell_surface_from_dict),
    cellsurf.CurveTrace: (_curve_to_dict, _curve_from_dict),
}

DECODABLE = (
    pairalg.ClosedSurface,
    pairalg.TopPair,
    pairalg.PairWord,
    pairalg.CaseLabel,
    piclattice.DivClass,
    piclattice.PicLattice,
    piclattice.Center,
    mmp.Step,
    mmp.EndState,
    mmp.HistoryEntry,
    mmp.MmpState,
    cellsurf.CellSurface,
    cellsurf.CurveTrace,
    enumeration.ParamFamily,
    enumeration.TypeTable,
    enumeration.ConstructionPlan,
    enumeration.Verdict,
)


def encode(obj):
    """
    Convert a result into JSON-ready data

    Args:
        obj: Any public value, or containers of them

    Returns:
        JSON-ready dicts, lists, strings and numbers
    """
    if type(obj) in _ADAPTERS:
        return _ADAPTERS[type(obj)][0](obj)
    if hasattr(obj, "to_dict"):
        return encode(obj.to_dict())
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else str(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(key): encode(value) for key, value in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted((encode(item) for item in obj), key=lambda item: json.dumps(item, sort_keys=True))
    if isinstance(obj, (list, tuple)):
        return [encode(item) for item in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def decode(cls, data):
    if cls in _ADAPTERS:
        return _ADAPTERS[cls][1](data)
    return cls.from_dict(data)


def dumps(obj, indent=None) -> str:
    return json.dumps(encode(obj), indent=indent, ensure_ascii=False, sort_keys=indent is not None)


def loads(cls, text: str):
    return decode(cls, json.loads(text))
