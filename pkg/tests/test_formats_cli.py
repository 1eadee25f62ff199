import csv
import io
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xq.cli import run_command
from xq.core import Perceptron
from xq.formats import (
    ParseError,
    format_rational,
    parse_dnf,
    parse_graph,
    parse_model,
    parse_rational,
    serialize_dnf,
    serialize_graph,
    serialize_model,
)
from xq.random_models import (
    random_bool_circuit,
    random_dag,
    random_dnf,
    random_fbdd,
    random_maj_circuit,
    random_mlp,
    random_perceptron,
)
from xq.reductions import domdag_to_msr

F1_TEXT = "fbdd dim=2\nnode 1 var 1 lo 2 hi T\nnode 2 var 2 lo F hi T\nroot 1\n"
P1_TEXT = "perceptron dim=3\nw 3 -5 -2\nb 1\n"
DAG6_EDGES = [(1, 6), (1, 3), (2, 1), (2, 6), (4, 2), (4, 1), (5, 1), (5, 3), (5, 4), (6, 3)]


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    (tmp_path / "f1.fbdd").write_text(F1_TEXT)
    (tmp_path / "p1.lin").write_text(P1_TEXT)
    tree, _, _ = domdag_to_msr(DAG6_EDGES, 2)
    (tmp_path / "dag6.tree").write_text(serialize_model(tree))
    (tmp_path / "dag6.dag").write_text(serialize_graph(DAG6_EDGES, True))
    return tmp_path


def test_parse_fixtures(f1, p1):
    assert parse_model(F1_TEXT) == f1
    assert parse_model(P1_TEXT) == p1
    half = parse_model("perceptron dim=1\nw 1/2\nb -1/3\n")
    assert half == Perceptron((Fraction(1, 2),), Fraction(-1, 3))


def test_comments_and_blank_lines(p1):
    text = "# a perceptron\n\nperceptron dim=3   # three inputs\nw 3 -5 -2\n\nb 1\n"
    assert parse_model(text) == p1


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_model("perceptron dim=3\nw 3 x -2\nb 1\n")
    assert info.value.line == 2 and info.value.column == 5


def test_fbdd_violations_reported():
    text = "fbdd dim=2\nnode 1 var 1 lo 2 hi T\nnode 2 var 1 lo F hi T\nroot 1\n"
    with pytest.raises(ValueError, match="1"):
        parse_model(text)


def test_decimal_rationals():
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert format_rational(Fraction(4, 2)) == "2"
    with pytest.raises(ParseError):
        parse_rational("1e3")


@settings(max_examples=200)
@given(st.fractions())
def test_rational_round_trip(v):
    assert parse_rational(format_rational(v)) == v


def test_models_round_trip():
    rng = random.Random(0)
    for _ in range(100):
        n = rng.randint(1, 8)
        for model in (
            random_fbdd(rng, n, rng.randint(0, 3 * n)),
            random_perceptron(rng, n),
            random_mlp(rng, n, hidden=(rng.randint(1, 4),)),
            random_bool_circuit(rng, n, rng.randint(1, 6)),
            random_maj_circuit(rng, n, rng.randint(1, 6)),
        ):
            assert parse_model(serialize_model(model)) == model


def test_graph_and_dnf_round_trip():
    rng = random.Random(1)
    for _ in range(30):
        edges = random_dag(rng, 6)
        assert parse_graph(serialize_graph(edges, True, 6)) == (True, edges, 6)
        dnf = random_dnf(rng, 5, 3)
        assert parse_dnf(serialize_dnf(dnf)) == dnf


def test_cli_examples(files):
    assert run("cc", "--model", files / "f1.fbdd", "--partial", "**")[:2] == (0, "3\n")
    assert run("mcr", "--model", files / "p1.lin", "--instance", "101", "--k", 1)[:2] == (0, "YES witness=111\n")
    assert run("msr", "--model", files / "dag6.tree", "--instance", "111111", "--k", 2)[:2] == \
        (0, "YES witness=*1**1*\n")
    assert run("msr", "--model", files / "dag6.tree", "--instance", "111111", "--k", 1)[1] == "NO\n"


def test_cli_query_and_oracle_agree(files):
    for argv in (["msr", "--instance", "101", "--k", "2"], ["csr", "--instance", "101", "--partial", "10*"]):
        q, rest = argv[0], argv[1:]
        a = run("query", q, "--model", files / "p1.lin", *rest)
        b = run("oracle", q, "--model", files / "p1.lin", *rest)
        assert a[0] == b[0] == 0 and a[1] == b[1]


def test_cli_usage_errors(files):
    assert run("mcr", "--model", files / "p1.lin", "--instance", "101")[0] == 1
    assert run("cc", "--model", files / "missing", "--partial", "*")[0] == 1
    assert run("frobnicate")[0] == 1
    code, _, err = run("cc", "--model", files / "p1.lin", "--partial", "**")
    assert code == 1 and "error" in err


def test_cli_budget_exit_code(files):
    code, _, err = run("cc", "--model", files / "f1.fbdd", "--partial", "**", "--limit", "1")
    assert code == 0  # counting an FBDD needs no enumeration
    code, _, err = run("oracle", "cc", "--model", files / "f1.fbdd", "--partial", "**", "--limit", "3")
    assert code == 2 and "4" in err


def test_cli_reduce_and_compile(files, tmp_path):
    code, out, _ = run("reduce", "domdag", "--input", files / "dag6.dag", "--k", 2)
    assert code == 0 and out.rstrip().endswith("# query=msr instance=111111 k=2")
    (tmp_path / "tree.txt").write_text(out)
    assert run("msr", "--model", tmp_path / "tree.txt", "--instance", "111111", "--k", 2)[1] == "YES witness=*1**1*\n"

    (tmp_path / "maj.txt").write_text("majcircuit vars=3\ngate a input 1\ngate b input 2\ngate c input 3\n"
                                      "gate m maj a:1,b:1,c:1\noutput m\n")
    code, out, _ = run("compile", "majority-to-rmlp", "--input", tmp_path / "maj.txt",
                       "--output", tmp_path / "maj.mlp")
    assert code == 0
    assert run("cc", "--model", tmp_path / "maj.mlp", "--partial", "***")[1] == "4\n"
    assert run("cc", "--model", tmp_path / "maj.txt", "--partial", "***")[1] == "4\n"

    (tmp_path / "and.mlp").write_text("mlp dims=2,1,1\nW 1\nW 1\nb -1\nact relu\nW 1\nb -1\nact step\n")
    code, _, err = run("compile", "relu-to-step", "--input", tmp_path / "and.mlp", "--budget", 1)
    assert code == 2 and "S=" in err
    code, out, _ = run("compile", "relu-to-step", "--input", tmp_path / "and.mlp")
    assert code == 0 and "act relu" not in out


def test_cli_bench_quick(tmp_path):
    code, _, _ = run("bench", "--quick", "--repeats", 1, "--csv", tmp_path / "b.csv", "--plot", tmp_path / "b.png")
    assert code == 0
    with open(tmp_path / "b.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["model", "query", "size", "ns", "result"]
    assert {r["model"] for r in rows} == {"fbdd", "mlp"}
    assert all(int(r["ns"]) > 0 for r in rows)
    assert (tmp_path / "b.png").stat().st_size > 0
