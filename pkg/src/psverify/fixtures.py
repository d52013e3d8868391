"""Strict YAML fixtures describing character tuples.

Grammar (every key optional unless marked required; unknown keys are errors):

    field:                      # required
      p: <prime>                # required
      f: <residue degree>       # default 1
    tuples:                     # required, non-empty list
      - name: <text>
        expect: reducible | irreducible | inconclusive
        characters:             # required, at least two entries
          - uniformizer_value: <value>          # text such as "2", "-1/3", "zeta(4)^3"; default "1"
            conductor: <int >= 0>               # default 0
            unit_char: [<int>, ...]             # exponents on the unit-group generators at level conductor
            algebraic_exponents: [<int>, ...]   # one exponent per embedding, default all 0
            norm_power: <int>                   # extra factor |.|^k, default 0

Diagnostics name the offending field path and the source line.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import sympy
import yaml

from .characters import AlgebraicPart, CharDatum, SmoothChar, parse_value
from .padic import UnitChar, unit_group


class FixtureError(ValueError):
    """A fixture that does not follow the grammar."""


@dataclass
class TupleFixture:
    name: str
    characters: list
    expect: str | None = None


@dataclass
class Fixture:
    p: int
    f: int
    tuples: list


def _where(node, path):
    return f"{path} (line {node.start_mark.line + 1})"


def _fail(node, path, msg):
    raise FixtureError(f"{_where(node, path)}: {msg}")


def _mapping(node, path, allowed, required=()):
    if not isinstance(node, yaml.MappingNode):
        _fail(node, path, "expected a mapping")
    out = {}
    for key_node, value_node in node.value:
        if not isinstance(key_node, yaml.ScalarNode):
            _fail(key_node, path, "keys must be plain scalars")
        key = key_node.value
        if key in out:
            _fail(key_node, f"{path}.{key}", "duplicate key")
        if key not in allowed:
            _fail(key_node, f"{path}.{key}", f"unknown key (allowed: {', '.join(sorted(allowed))})")
        out[key] = value_node
    for key in required:
        if key not in out:
            _fail(node, path, f"missing required key '{key}'")
    return out


def _sequence(node, path):
    if not isinstance(node, yaml.SequenceNode):
        _fail(node, path, "expected a list")
    return node.value


def _scalar(node, path):
    if not isinstance(node, yaml.ScalarNode):
        _fail(node, path, "expected a scalar")
    return node.value


def _int(node, path, minimum=None):
    text = _scalar(node, path)
    try:
        value = int(text)
    except ValueError:
        _fail(node, path, f"expected an integer, got {text!r}")
    if minimum is not None and value < minimum:
        _fail(node, path, f"must be >= {minimum}")
    return value


def _int_list(node, path):
    return [_int(x, f"{path}[{i}]") for i, x in enumerate(_sequence(node, path))]


CHAR_KEYS = {"uniformizer_value", "conductor", "unit_char", "algebraic_exponents", "norm_power"}
TUPLE_KEYS = {"name", "expect", "characters"}
VERDICTS = {"reducible", "irreducible", "inconclusive"}


def _character(node, path, p, f) -> CharDatum:
    fields = _mapping(node, path, CHAR_KEYS)
    value = "1"
    if "uniformizer_value" in fields:
        value = _scalar(fields["uniformizer_value"], path + ".uniformizer_value")
    try:
        at_p = parse_value(value)
    except ValueError as exc:
        _fail(fields["uniformizer_value"], path + ".uniformizer_value", str(exc))
    if at_p.is_zero():
        _fail(fields["uniformizer_value"], path + ".uniformizer_value", "must be nonzero")
    conductor = _int(fields["conductor"], path + ".conductor", 0) if "conductor" in fields else 0
    group = unit_group(p, f, conductor)
    exps = _int_list(fields["unit_char"], path + ".unit_char") if "unit_char" in fields else [0] * len(group.gens)
    if len(exps) != len(group.gens):
        where = fields.get("unit_char", node)
        _fail(where, path + ".unit_char", f"expected {len(group.gens)} exponents for level {conductor}, got {len(exps)}")
    unit_char = UnitChar(group, exps)
    if unit_char.conductor() != conductor:
        _fail(fields.get("conductor", node), path + ".conductor",
              f"declared conductor {conductor} but the unit exponents give conductor {unit_char.conductor()}")
    smooth = SmoothChar(at_p, unit_char)
    if "norm_power" in fields:
        smooth = smooth.twist_norm(_int(fields["norm_power"], path + ".norm_power"))
    alg = [0] * f
    if "algebraic_exponents" in fields:
        alg = _int_list(fields["algebraic_exponents"], path + ".algebraic_exponents")
        if len(alg) != f:
            _fail(fields["algebraic_exponents"], path + ".algebraic_exponents", f"expected {f} exponents, got {len(alg)}")
    return CharDatum(smooth, AlgebraicPart(tuple(alg)))


def parse_fixture_text(text: str, source: str = "<fixture>") -> Fixture:
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        raise FixtureError(f"{source}: invalid YAML: {exc}") from exc
    if root is None:
        raise FixtureError(f"{source}: empty fixture")
    top = _mapping(root, "$", {"field", "tuples"}, ("field", "tuples"))
    field_map = _mapping(top["field"], "field", {"p", "f"}, ("p",))
    p = _int(field_map["p"], "field.p", 2)
    if not sympy.isprime(p):
        _fail(field_map["p"], "field.p", f"{p} is not prime")
    f = _int(field_map["f"], "field.f", 1) if "f" in field_map else 1
    tuples = []
    entries = _sequence(top["tuples"], "tuples")
    if not entries:
        _fail(top["tuples"], "tuples", "at least one tuple is required")
    for i, entry in enumerate(entries):
        path = f"tuples[{i}]"
        fields = _mapping(entry, path, TUPLE_KEYS, ("characters",))
        name = _scalar(fields["name"], path + ".name") if "name" in fields else f"tuple {i}"
        expect = None
        if "expect" in fields:
            expect = _scalar(fields["expect"], path + ".expect")
            if expect not in VERDICTS:
                _fail(fields["expect"], path + ".expect", f"must be one of {', '.join(sorted(VERDICTS))}")
        chars = [_character(c, f"{path}.characters[{j}]", p, f)
                 for j, c in enumerate(_sequence(fields["characters"], path + ".characters"))]
        if len(chars) < 2:
            _fail(fields["characters"], path + ".characters", "at least two characters are required")
        tuples.append(TupleFixture(name, chars, expect))
    return Fixture(p, f, tuples)


def load_fixture(path) -> Fixture:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FixtureError(f"{path}: {exc.strerror}") from exc
    return parse_fixture_text(text, str(path))
