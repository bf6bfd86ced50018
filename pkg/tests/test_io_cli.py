import io as stdio
import json

import pytest

from conrank import exact as ex
from conrank import io
from conrank.betti import koszul_betti
from conrank.bundles import skew_example_pencil, westwick_pencil
from conrank.cli import main
from conrank.errors import DocumentError
from conrank.graded import GradedFreeModule, free_module_window, truncate


def run(argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", stdio.StringIO(stdin))
    out = stdio.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def test_window_round_trip_is_byte_stable():
    W = truncate(free_module_window(GradedFreeModule(2, [0, 1], ex.GF(101)), 0, 4), 1)
    text = io.dumps(io.window_to_json(W))
    W2 = io.window_from_json(io.loads(text))
    assert W2.dims == W.dims and W2.actions == W.actions
    assert io.dumps(io.window_to_json(W2)) == text


def test_pencil_and_betti_round_trip():
    A = skew_example_pencil()
    text = io.dumps(io.pencil_to_json(A))
    assert "-193/4" in text
    B = io.load_any(io.loads(text))
    assert B == A and io.dumps(io.pencil_to_json(B)) == text
    T = koszul_betti(truncate(free_module_window(GradedFreeModule(2, [0], ex.QQ), 0, 5), 2))
    assert io.betti_from_json(io.loads(io.dumps(io.betti_to_json(T)))) == T


@pytest.mark.parametrize("doc", [
    "not json", '{"format": "conrank.pencil", "format_version": 99}',
    '{"format": "conrank.nothing", "format_version": 1}',
    '{"format": "conrank.pencil", "format_version": 1, "n": 1, "rows": 1, "cols": 1, '
    '"field": "QQ", "coefficients": [[["1"]], [["x"]]]}',
])
def test_bad_documents(doc):
    with pytest.raises(DocumentError):
        io.load_any(io.loads(doc))


def test_hk_and_predict():
    assert run(["hk", "0", "1", "2", "4"]) == (0, "q=24: 3 8 6 1\n")
    code, out = run(["predict", "1", "0", "0", "--k", "10", "--json"])
    doc = json.loads(out)
    assert code == 0 and sorted(map(tuple, doc["entries"])) == [(0, 10, 66), (1, 11, 120), (2, 12, 55)]


def test_catalog_listing():
    code, out = run(["catalog", "--strand", "24", "37", "15", "--m", "3", "--rank", "2"])
    assert code == 0 and "7x(1,3,3,1)" in out and "8x(1,3,3,1)" not in out
    code, out = run(["catalog"])
    assert "betti=[10, 24, 15, 1]" in out


def test_westwick_into_rankcheck(tmp_path, monkeypatch):
    code, doc = run(["westwick", "2", "2"])
    assert code == 0
    code, out = run(["rankcheck", "--samples", "100"], stdin=doc, monkeypatch=monkeypatch)
    assert code == 0 and out.startswith("Certified rank 4")
    p = tmp_path / "w.json"
    p.write_text(doc)
    code, out = run(["rankcheck", str(p), "--rank", "3", "--json"])
    assert code == 2 and json.loads(out)["status"] == "Refuted"


def test_window_commands(tmp_path):
    code, doc = run(["--field", "GF(101)", "construct", "steiner", "--hi", "6"])
    assert code == 0
    p = tmp_path / "e.json"
    p.write_text(doc)
    code, out = run(["truncate", str(p), "--at", "3", "--betti"])
    assert code == 0 and "3: 24 37 15" in out
    code, out = run(["betti", str(p), "--json"])
    assert code == 0 and json.loads(out)["format"] == "conrank.betti"


def test_skew_commands(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(io.dumps(io.pencil_to_json(skew_example_pencil())))
    assert run(["skew", "verify", str(p)])[0] == 0
    q = tmp_path / "w.json"
    q.write_text(io.dumps(io.pencil_to_json(westwick_pencil(2, 2))))
    assert run(["skew", "verify", str(q)]) == (2, "not skew\n")


def test_usage_and_document_errors(tmp_path):
    assert run(["nosuchcommand"])[0] == 64
    assert run(["hk"])[0] == 64
    p = tmp_path / "bad.json"
    p.write_text("{")
    assert run(["betti", str(p)])[0] == 65
    assert run(["betti", str(tmp_path / "missing.json")])[0] == 65


def test_builtin_examples_command():
    code, out = run(["paper-examples", "--samples", "100"])
    assert code == 0
    assert "matches westwick 2 2 up to signs: True; Certified rank 4" in out
    assert "skew True, Certified rank 8" in out
