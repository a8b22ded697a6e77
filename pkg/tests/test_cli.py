import pytest

from webtrace import gallery
from webtrace.cli import main
from webtrace.diagram import TypeSignature, cycle_diagram, strand, vertex_web
from webtrace.formats import parse, serialize
from webtrace.quantum import QuantumWeb, delta
from webtrace.tensors import Representation, Tensor

A = TypeSignature({"a": (1, 1)})


def _rep(mat):
    return Representation(A, len(mat), {"a": Tensor.from_matrix(mat)})


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else serialize(obj))
        return str(path)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_trace_planned_and_naive(files, capsys):
    rep = files("rep.txt", _rep([[1, 2], [3, 4]]))
    web = files("web.txt", cycle_diagram(A, ["a", "a"]))
    assert run(capsys, "trace", "--rep", rep, "--web", web) == (0, "29\n", "")
    assert run(capsys, "trace", "--rep", rep, "--web", web, "--naive")[:2] == (0, "29\n")


def test_hat_trace(files, capsys):
    rep = files("rep.txt", _rep([[1, 2], [3, 4]]))
    code, out, _ = run(capsys, "hat-trace", "--rep", rep, "--web", files("w.txt", vertex_web(A, "a")))
    assert code == 0 and parse("tensor", out) == Tensor.from_matrix([[1, 2], [3, 4]])
    q = QuantumWeb([(2, strand(A)), (-1, vertex_web(A, "a"))])
    code, out, _ = run(capsys, "hat-trace", "--rep", rep, "--qweb", files("q.txt", q))
    assert parse("tensor", out) == Tensor.from_matrix([[1, -2], [-3, -2]])
    closed = QuantumWeb([(1, cycle_diagram(A, ["a"]))])
    code, out, _ = run(capsys, "hat-trace", "--rep", rep, "--qweb", files("c.txt", closed))
    assert parse("tensor", out) == Tensor(0, 0, 2, [5])


def test_validate(files, capsys):
    ok = files("ok.txt", strand(A))
    assert run(capsys, "validate", "--web", ok)[:2] == (0, "valid\n")
    bad = files("bad.txt", "type a in=1 out=1\nweb k=1 l=0 loops=0\nvertex v: a\nedge root 1 -> (v, in 1)\n")
    code, out, _ = run(capsys, "validate", "--web", bad)
    assert code == 1
    assert out.splitlines() == ["out-slot 1 of v unfilled", "invalid (1 violations)"]


def test_glue_and_delta(files, capsys):
    left = files("l.txt", vertex_web(A, "a"))
    code, out, _ = run(capsys, "glue", "--left", left, "--right", files("r.txt", vertex_web(A, "a")))
    assert code == 0 and parse("web", out).num_vertices == 2
    code, out, _ = run(capsys, "delta", "3")
    assert parse("quantum_web", out) == delta(3)


def test_check_delta(files, capsys):
    rep = files("rep.txt", _rep([[1, 2], [3, 4]]))
    assert run(capsys, "check-delta", "--rep", rep)[:2] == (0, "delta k=3 dim=2 hat_zero=true\n")
    assert run(capsys, "check-delta", "--rep", rep, "--k", "2")[:2] == (1, "delta k=2 dim=2 hat_zero=false\n")


def test_check_relations_by_name_and_file(files, capsys):
    code, out, _ = run(capsys, "check-relations", "z2_diagonal")
    assert code == 0 and out.startswith("PASS ") and "FAIL" not in out
    path = files("deg.txt", gallery.degenerate_example())
    code, out, _ = run(capsys, "check-relations", path)
    assert code == 0 and out.split()[-2:] == ["expected=nonzero", "actual=nonzero"]


def test_check_relations_failure(files, capsys):
    pack = gallery.chord_diagrams(2)
    e = gallery.swap_tensor(2).entries()
    e[1] += 1
    bad = files("bad.txt", Representation(pack.sig, 2, {"chord": Tensor(2, 2, 2, e)}))
    code, out, _ = run(capsys, "check-relations", "chord_diagrams", "--rep", bad)
    assert code == 1 and out.count("FAIL") == 2


def test_check_relations_needs_rep(capsys):
    code, _, err = run(capsys, "check-relations", "hopf_template")
    assert code == 2 and "no representation" in err


def test_connmat_and_rank_check(files, capsys):
    rep = files("rep.txt", _rep([[1, 1], [0, 1]]))
    code, out, _ = run(capsys, "connmat", "1", "--rep", rep, "--max-vertices", "1", "--max-loops", "0")
    lines = out.splitlines()
    # enumeration order: strand, strand beside a self-looped vertex, vertex
    assert code == 0 and lines[0] == "connection matrix k=1 size=3"
    assert lines[1:4] == ["2 4 2", "4 8 4", "2 4 2"] and lines[-1] == "rank 1 bound 4"
    code, out, _ = run(capsys, "rank-check", "2", "--rep", rep, "--max-vertices", "2")
    assert code == 0 and out.splitlines() == [
        "PASS k=0 webs=8 rank=1 bound=1",
        "PASS k=1 webs=14 rank=1 bound=4",
        "PASS k=2 webs=44 rank=2 bound=16",
    ]


def test_witness_search(files, capsys):
    rep = files("rep.txt", _rep([[1, 0], [0, 2]]))
    q = files("q.txt", QuantumWeb([(1, vertex_web(A, "a")), (-1, strand(A))]))
    code, out, _ = run(capsys, "witness-search", "--rep", rep, "--qweb", q)
    assert code == 0 and out.startswith("omega: witness found after")
    assert parse("web", out.split("\n", 1)[1]).profile == (1, 1)
    pack = files("pack.txt", gallery.degenerate_example())
    code, out, _ = run(capsys, "witness-search", "--qweb", pack)
    assert code == 0 and out.endswith("exhausted after 28 webs\n")


def test_gallery_commands(capsys):
    code, out, _ = run(capsys, "gallery", "--list")
    assert out.split() == list(gallery.GALLERY)
    code, out, _ = run(capsys, "gallery", "virtual_links")
    assert code == 0 and parse("pack", out).name == "virtual_links"
    assert run(capsys, "gallery", "nope")[0] == 2


def test_input_errors(files, tmp_path, capsys):
    rep = files("rep.txt", _rep([[1]]))
    broken = files("broken.txt", "web k=1 l=1 loops=0\nvertex v: a\nedge floor 1 -> sink 1\n")
    code, _, err = run(capsys, "trace", "--rep", rep, "--web", broken)
    assert code == 2 and err.startswith(f"error: {broken}:3:")
    code, _, err = run(capsys, "trace", "--rep", rep, "--web", str(tmp_path / "missing.txt"))
    assert code == 2 and "missing.txt" in err
    code, _, err = run(capsys, "trace", "--rep", rep, "--web", files("open.txt", strand(A)))
    assert code == 2 and err


def test_budget_flag_and_env(files, capsys, monkeypatch):
    rep = files("rep.txt", _rep([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    web = files("web.txt", cycle_diagram(A, ["a"] * 3))
    code, _, err = run(capsys, "trace", "--rep", rep, "--web", web, "--naive", "--budget", "10")
    assert code == 2 and "budget" in err.lower()
    monkeypatch.setenv("WEBTRACE_BUDGET", "10")
    assert run(capsys, "trace", "--rep", rep, "--web", web, "--naive")[0] == 2
    assert run(capsys, "trace", "--rep", rep, "--web", web, "--naive", "--budget", "100")[:2] == (0, "3\n")
