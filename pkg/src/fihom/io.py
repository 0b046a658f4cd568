"""Module files in, reports out.

Module files are JSON presentations.  Reports are JSON with sorted keys so
identical runs produce identical bytes; CSV is a flat projection for
plotting elsewhere.
"""

from __future__ import annotations

import csv
import io
import json

from .modules import Presentation


class InputError(ValueError):
    """A module file that cannot be read; the message says where."""


def _require(cond, where, msg):
    if not cond:
        raise InputError(f"{where}: {msg}")


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _check_schema(data, src):
    _require(isinstance(data, dict), src, "top level must be an object")
    for key in ("field", "generators"):
        _require(key in data, src, f"missing field '{key}'")
    gens = data["generators"]
    _require(isinstance(gens, list) and all(_is_int(d) and d >= 0 for d in gens),
             f"{src}: generators", "must be a list of nonnegative integers")
    if data.get("window") is not None:
        _require(_is_int(data["window"]) and data["window"] >= 0,
                 f"{src}: window", "must be a nonnegative integer")
    rels = data.get("relations", [])
    _require(isinstance(rels, list), f"{src}: relations", "must be a list")
    for k, rel in enumerate(rels):
        where = f"{src}: relations[{k}]"
        _require(isinstance(rel, dict), where, "must be an object")
        _require(_is_int(rel.get("degree")), f"{where}.degree", "must be an integer")
        _require(isinstance(rel.get("terms"), list), f"{where}.terms", "must be a list")
        for j, t in enumerate(rel["terms"]):
            tw = f"{where}.terms[{j}]"
            _require(isinstance(t, dict), tw, "must be an object")
            _require(_is_int(t.get("gen")), f"{tw}.gen", "must be an integer")
            inj = t.get("injection")
            _require(isinstance(inj, list) and all(_is_int(v) for v in inj),
                     f"{tw}.injection", "must be a list of integers")
            if "colors" in t:
                _require(isinstance(t["colors"], list) and all(_is_int(v) for v in t["colors"]),
                         f"{tw}.colors", "must be a list of integers")


def parse_presentation(text, src="<input>"):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{src}:{e.lineno}:{e.colno}: {e.msg}") from None
    _check_schema(data, src)
    try:
        return Presentation.from_json(data)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"{src}: {e}") from None


def load_presentation(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    return parse_presentation(text, str(path))


def save_presentation(P, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(P.to_json()))


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def report(module=None, invariants=None, complex=None, growth=None, verdicts=None, **extra):
    out = {"module": module, "invariants": invariants, "complex": complex,
           "growth": growth, "verdicts": verdicts if verdicts is not None else []}
    out.update(extra)
    return out


def to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()
