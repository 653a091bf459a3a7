from fractions import Fraction as Fr
import json

import pytest

from lacohom.groups import additive_group, validate_group_law, validate_representation
from lacohom.jets import Jet
from lacohom.liealg import heisenberg, sl2
from lacohom.schema import (
    SchemaError,
    dump_algebra,
    dump_cochain,
    dump_group,
    dumps_report,
    jet_from_json,
    jet_to_json,
    load_algebra,
    load_cochain,
    load_document,
    load_group,
    load_rep,
    parse_rational,
)
from lacohom.groups import InhomCochain


def test_rationals():
    assert parse_rational("-3/6") == Fr(-1, 2)
    assert parse_rational(4) == 4
    for bad in ("x", 0.5, True, "1/0"):
        with pytest.raises(SchemaError):
            parse_rational(bad)


def test_jet_roundtrip():
    j = Jet(2, 3, {(1, 0): (1, Fr(2, 3)), (0, 2): (0, -1)}, 2)
    assert jet_from_json(jet_to_json(j), 2, 3, 2) == j
    with pytest.raises(SchemaError):
        jet_from_json([[[1], "1"]], 2, 3)


def test_algebra_roundtrip():
    for g in (sl2(), heisenberg()):
        assert load_algebra(json.loads(json.dumps(dump_algebra(g)))).structure == g.structure
    with pytest.raises(SchemaError):
        load_algebra({"dim": 2, "brackets": [{"i": 0, "j": 5, "coeffs": [1, 0]}]})


def test_group_and_cochain_roundtrip():
    G = additive_group(2, 4)
    G2 = load_group(dump_group(G))
    assert G2.F == G.F and validate_group_law(G2).ok
    f = InhomCochain(1, 2, Jet(2, 4, {(1, 1): Fr(1, 3)}))
    assert load_cochain(dump_cochain(f), 2, 1, 4).value == f.value


def test_data_files_load(data_dir):
    G = load_group(load_document(data_dir / "multiplicative_group.json"))
    rep = load_rep(load_document(data_dir / "multiplicative_unipotent_rep.json"), 1, G.cap)
    assert validate_group_law(G).ok and validate_representation(rep, G).ok
    assert load_algebra(load_document(data_dir / "sl2.json")).structure == sl2().structure


def test_missing_fields():
    with pytest.raises(SchemaError, match="missing"):
        load_group({"n": 1})


def test_report_is_deterministic():
    r = {"b": [1, Fr(1, 2)], "a": "Ψ"}
    assert dumps_report(r) == dumps_report(dict(r))
    assert dumps_report(r).endswith("\n")
