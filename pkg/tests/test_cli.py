import json
from fractions import Fraction as F

import pytest

from hjtoric.chains import CurveChain, blowup_chain
from hjtoric.cli import jsonable, main, parse_command, render_chain_ascii
from hjtoric.errors import UsageError
from hjtoric.exact import parse_sympoly
from hjtoric.kahler import fiber_configuration, fiber_volumes
from hjtoric.surface import ConstructionReport, ParabolicRuledSurface, realize_degree, theoremB_construction
from hjtoric.toric import Fan2D, resolve_fan, wps_fan


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_parse_command_examples():
    req = parse_command(["chain", "2/3"])
    assert (req.verb, req.args["p"], req.args["q"], req.format) == ("chain", 2, 3, "text")
    with pytest.raises(UsageError):
        parse_command(["hj", "expand", "7/3"])
    req = parse_command(["example", "cp2", "--format", "json"])
    assert (req.verb, req.args["name"], req.format) == ("example", "cp2", "json")


@pytest.mark.parametrize("argv", [
    ["hj", "expand", "3/6"], ["hj", "expand", "x"], ["chain", "2/3/4"], ["bogus"],
    ["example", "cp9"], ["construct", "--genus", "1", "-r", "1", "--orders", "3,a"],
    ["classify", "1", "0"], [],
])
def test_usage_errors(argv):
    with pytest.raises(UsageError):
        parse_command(argv)


def test_render_chain_ascii():
    assert render_chain_ascii(CurveChain.from_self_ints([0])) == "(0)[F]"
    assert render_chain_ascii(blowup_chain(1, 2)) == "(-2)[F]--(-1)--(-2)"
    assert render_chain_ascii(blowup_chain(2, 3)) == "(-2)[F]--(-2)--(-1)--(-3)"


def test_jsonable_big_integers():
    assert jsonable(2 ** 70) == str(2 ** 70)
    assert jsonable(-(2 ** 63)) == -(2 ** 63)
    assert jsonable(F(-3, 4)) == "-3/4"


def test_hj_roundtrip(capsys):
    doc = run_json(capsys, "hj", "expand", "5/12")
    assert doc["digits"] == [3, 2, 3]
    back = run_json(capsys, "hj", "evaluate", *map(str, doc["digits"]))
    assert (back["p"], back["q"]) == (5, 12)
    code, out, _ = run(capsys, "hj", "expand", "2/3")
    assert code == 0 and "1/(2 - 1/2)" in out


def test_chain_roundtrip(capsys):
    doc = run_json(capsys, "chain", "3/7")
    assert CurveChain.from_dict(doc) == blowup_chain(3, 7)
    code, out, _ = run(capsys, "chain", "2/3", "--ascii")
    assert out.strip() == "(-2)[F]--(-2)--(-1)--(-3)"


def test_fan_verbs(capsys, tmp_path):
    doc = run_json(capsys, "fan", "wps", "1", "2", "3")
    assert Fan2D.from_dict(doc) == wps_fan(1, 2, 3)
    path = write(tmp_path, "fan.json", doc)
    resolved = run_json(capsys, "fan", "resolve", path)
    assert Fan2D.from_dict(resolved) == resolve_fan(wps_fan(1, 2, 3))
    selfint = run_json(capsys, "fan", "selfint", write(tmp_path, "res.json", resolved))
    assert selfint["sum"] == -6
    code, _, err = run(capsys, "fan", "selfint", path)
    assert code == 4 and "error" in err


def test_classify(capsys):
    doc = run_json(capsys, "classify", "0", "1", "3", "-2")
    assert (doc["type"]["p"], doc["type"]["q"], doc["type"]["smooth"]) == (2, 3, False)
    assert run_json(capsys, "classify", "1", "0", "0", "1")["type"]["smooth"] is True


def test_construct_and_realize_roundtrip(capsys):
    doc = run_json(capsys, "construct", "--genus", "1", "-r", "1", "--orders", "3")
    assert ConstructionReport.from_dict(doc) == theoremB_construction(1, 1, [3])
    assert doc["slopes"] == {"zero": "2/3", "infinity": "-2/3"}
    doc = run_json(capsys, "realize", "--genus", "0", "--degree", "2")
    assert ConstructionReport.from_dict(doc) == realize_degree(0, 2)


def test_stability(capsys, tmp_path):
    m = theoremB_construction(1, 1, [3]).surface
    path = write(tmp_path, "surface.json", m.to_dict())
    doc = run_json(capsys, "stability", path)
    assert doc["destabilizing"] == {"infinity": "-2/3"}
    assert ParabolicRuledSurface.from_dict(json.loads(open(path).read())).marks == m.marks


def test_kahler_solve(capsys, tmp_path):
    config = fiber_configuration(2, 3)
    vols = {k: str(v) for k, v in fiber_volumes(2, 3, 1, F(-2, 3)).items()}
    doc = run_json(capsys, "kahler", "solve", write(tmp_path, "c.json", config.to_dict()),
                   write(tmp_path, "v.json", vols))
    assert doc["residual_zero"] is True and doc["basis"][0] == "S0"
    for text in doc["coefficients"].values():
        assert str(parse_sympoly(text)) == text
    singular = {"nodes": [{"label": "A", "self_int": 0}], "edges": []}
    code, _, _ = run(capsys, "kahler", "solve", write(tmp_path, "s.json", singular),
                     write(tmp_path, "sv.json", {"A": "a"}))
    assert code == 4


def test_examples(capsys):
    doc = run_json(capsys, "example", "cp2")
    assert parse_sympoly(doc["solution"]["coefficients"]["H"]) == parse_sympoly("3*a + eps2*(a3 + 2*a2 + a1)")
    doc = run_json(capsys, "example", "cp1t2")
    assert doc["evaluations"]["S0"] == "2/3*pi*b"
    doc = run_json(capsys, "example", "wps123")
    assert doc["selfint_sum"] == -6
    for name in ("cp2", "cp1t2", "wps123"):
        code, out, _ = run(capsys, "example", name)
        assert code == 0 and out.strip()


@pytest.mark.parametrize("argv,code", [
    (["hj", "expand", "7/3"], 2),
    (["stability", "/nonexistent/file.json"], 2),
    (["construct", "--genus", "1", "-r", "1", "--orders", "2"], 3),
    (["realize", "--genus", "2", "--degree", "3"], 3),
    (["realize", "--genus", "1", "--degree", "0"], 3),
    (["classify", "1", "0", "-1", "0"], 4),
    (["classify", "1", "0", "2", "0"], 2),
    (["hj", "evaluate", "3", "2"], 0),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code
