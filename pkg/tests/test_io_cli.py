"""File formats and command-line behaviour."""

import pytest

from maxcsp.cli import main
from maxcsp.constraints import xor_constraint
from maxcsp.errors import FormatError
from maxcsp.formulas import Application, Formula
from maxcsp.io_formats import (emit_certificate, emit_instance, emit_language,
                               parse_certificate, parse_instance, parse_language,
                               resolve_language_spec)
from maxcsp.languages import builtin_language
from maxcsp.transforms import unsigned_lit

LANG_TEXT = """\
# a toy language
constraint OR2 2
01
10
11
end
constraint T 1
1
end
"""


def test_parse_language_round_trip():
    lang = parse_language(LANG_TEXT, name="toy")
    assert {c.name for c in lang} == {"OR2", "T"}
    assert lang.get("OR2").table == (0, 1, 1, 1)
    again = parse_language(emit_language(lang), name="toy")
    assert again.signatures() == lang.signatures()


def test_parse_language_errors():
    with pytest.raises(FormatError, match="line 2"):
        parse_language("constraint A 2\n011\nend\n")
    with pytest.raises(FormatError, match="arity-0"):
        parse_language("constraint A 0\n-\nend\n")
    # closure artifacts are accepted when explicitly allowed
    lang = parse_language("constraint A 0\n-\nend\n", allow_constants=True)
    assert lang.get("A").table == (1,)
    with pytest.raises(FormatError):
        parse_language("constraint A 2\n01\n")  # missing end


def test_instance_round_trip_and_canonical_order():
    lang = builtin_language("2sat")
    text = ("maxcsp 3 2 N 4\n"
            "OR2 2 3 1\n"
            "OR2 1 1 2\n")
    phi, cert = parse_instance(text, lang)
    assert cert is None and phi.size == 2
    emitted = emit_instance(phi)
    # canonicalized: applications sorted
    assert emitted == ("maxcsp 3 2 N 4\n"
                       "OR2 1 1 2\n"
                       "OR2 2 3 1\n")
    phi2, _ = parse_instance(emitted, lang)
    assert phi2 == phi


def test_instance_weight_range_violation():
    lang = builtin_language("2sat")
    with pytest.raises(FormatError, match="weight range violation"):
        parse_instance("maxcsp 2 1 N 0\nOR2 -1 1 2\n", lang)


def test_instance_header_mismatches():
    lang = builtin_language("2sat")
    with pytest.raises(FormatError, match="line 2"):
        parse_instance("maxcsp 2 1 N 0\nOR2 1 1\n", lang)  # arity mismatch
    with pytest.raises(FormatError, match="declares"):
        parse_instance("maxcsp 2 2 N 0\nOR2 1 1 2\n", lang)


def test_certificate_round_trip():
    xorl = builtin_language("xor")
    phi = Formula(2, (Application(xor_constraint(2), (1, 2), -3),), "Z", -1)
    phi2, cert = unsigned_lit(phi, xorl)
    text = emit_instance(phi2, cert)
    parsed_phi, parsed_cert = parse_instance(text, resolve_language_spec("lit:xor"))
    assert parsed_phi == phi2
    assert parsed_cert.value_map == cert.value_map
    assert parsed_cert.t_out == cert.t_out
    assert parse_certificate(emit_certificate(cert)).label == cert.label


def test_resolve_language_spec_closures(tmp_path):
    lit = resolve_language_spec("lit:or2")
    assert (1, 1, 1, 0) in {c.table for c in lit if c.arity == 2}
    path = tmp_path / "toy.lang"
    path.write_text(LANG_TEXT)
    lang = resolve_language_spec(str(path))
    assert lang.get("T").table == (0, 1)
    with pytest.raises(FormatError):
        resolve_language_spec("nope:xyz")


def test_cli_degree_and_classify(capsys):
    assert main(["degree", "--language", "nae3"]) == 0
    assert capsys.readouterr().out == "2\n"
    assert main(["classify", "--language", "xor"]) == 0
    out = capsys.readouterr().out
    assert "np_hard (not 0-valid, not 1-valid, not 2-monotone)" in out


def test_cli_poly(capsys):
    assert main(["poly", "--constraint", "NAE3"]) == 0
    assert capsys.readouterr().out == ("poly 3 6\n1 1\n1 2\n1 3\n"
                                       "-1 1 2\n-1 1 3\n-1 2 3\n")


def test_cli_decompose_and_verify(tmp_path, capsys):
    out = tmp_path / "combo.txt"
    assert main(["decompose", "--base", "EX3", "--target", "OR2",
                 "-o", str(out)]) == 0
    assert main(["verify", "decomposition", str(out), "--base", "EX3",
                 "--target", "OR2"]) == 0
    assert "PASS" in capsys.readouterr().err


def test_cli_implement_and_verify(tmp_path, capsys):
    out = tmp_path / "impl.txt"
    assert main(["implement", "--language", "nae3", "--target", "XOR",
                 "-o", str(out)]) == 0
    assert main(["verify", "implementation", str(out), "--language", "nae3",
                 "--target", "XOR"]) == 0
    assert "valid=1" in capsys.readouterr().err


def test_cli_transform_verify_and_replay(tmp_path, capsys):
    inst = tmp_path / "in.maxcsp"
    inst.write_text("maxcsp 3 2 Z 1\nXOR -2 1 2\nXOR 3 2 3\n")
    out1, out2 = tmp_path / "a.maxcsp", tmp_path / "b.maxcsp"
    argv = ["transform", "--op", "unsigned-lit", "--language", "xor",
            "--instance", str(inst), "--verify"]
    assert main(argv + ["-o", str(out1)]) == 0
    assert main(argv + ["-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()  # replayable
    assert main(["verify", "transform", str(inst), str(out1),
                 "--language", "xor", "--out-language", "lit:xor"]) == 0
    # corrupt the transformed threshold: verification must fail
    lines = out1.read_text().splitlines()
    head = lines[0].split()
    head[4] = str(int(head[4]) + 1)
    out1.write_text("\n".join([" ".join(head)] + lines[1:]) + "\n")
    assert main(["verify", "transform", str(inst), str(out1),
                 "--language", "xor", "--out-language", "lit:xor"]) == 1


def test_cli_kernelize_verify(tmp_path):
    inst = tmp_path / "in.maxcsp"
    inst.write_text("maxcsp 4 3 N 5\nXOR 3 1 2\nXOR 2 2 3\nXOR 1 1 4\n")
    assert main(["kernelize", "--language", "xor", "--instance", str(inst),
                 "--verify", "-o", str(tmp_path / "k.maxcsp")]) == 0


def test_cli_solve_and_vc_reduce(tmp_path, capsys):
    graph = tmp_path / "g.graph"
    graph.write_text("graph 3 3\n1 2\n2 3\n1 3\n")
    inst = tmp_path / "vc.maxcsp"
    assert main(["vc-reduce", "--graph", str(graph), "--k", "2",
                 "-o", str(inst)]) == 0
    assert main(["solve", "--language", "2sat", "--instance", str(inst)]) == 0
    out = capsys.readouterr().out
    assert "optimum 19" in out and "decision yes" in out


def test_cli_random_deterministic(capsys):
    assert main(["random", "--language", "nae3", "--nvars", "5",
                 "--napps", "6", "--seed", "3"]) == 0
    first = capsys.readouterr().out
    assert main(["random", "--language", "nae3", "--nvars", "5",
                 "--napps", "6", "--seed", "3"]) == 0
    assert capsys.readouterr().out == first


def test_cli_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.maxcsp"
    bad.write_text("maxcsp 2 1 N 0\nOR2 -1 1 2\n")
    assert main(["solve", "--language", "2sat", "--instance", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err
