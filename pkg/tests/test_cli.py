import io
import json
import sys

import pytest

from asymtree.cli import main


def run_cli(argv, stdin_text=""):
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdin, sys.stdout, sys.stderr
    sys.stdin = io.StringIO(stdin_text)
    sys.stdout, sys.stderr = out, err
    try:
        code = main(argv)
    finally:
        sys.stdin, sys.stdout, sys.stderr = old
    return code, out.getvalue(), err.getvalue()


def test_count_star():
    code, out, _ = run_cli(["count"], "w(a,b,c)")
    assert code == 0 and out == "count=0\n"


def test_count_unrooted_auto_detect():
    code, out, _ = run_cli(["count"], "tree unrooted\na b\nb c\nc d\n")
    assert code == 0 and out == "count=6\n"


def test_presented_count_t3():
    code, out, _ = run_cli(["presented", "count"], "class r: d*3\nclass d: d*2\n")
    assert code == 0 and out == "count=beth_1 theorem=double-ray\n"


def test_verify():
    code, out, _ = run_cli(["verify", "--set", "a"], "w(a,b)")
    assert code == 0 and out == "verified=true\n"
    code, out, _ = run_cli(["verify", "--set", "a,b"], "w(a,b)")
    assert code == 0 and out == "verified=false\n"


def test_find_exit_codes():
    code, out, _ = run_cli(["find"], "w(a,b)")
    assert code == 0 and out == "set={a} verified=true\n"
    code, out, _ = run_cli(["find"], "w(a,b,c)")
    assert code == 1 and out == "set=none\n"


def test_enumerate_limit():
    code, out, _ = run_cli(["enumerate", "--limit", "1"], "w(a,b)")
    assert code == 0 and out == "set={a}\n"


def test_usage_error_exit_2():
    code, out, err = run_cli(["count"], "w((")
    assert code == 2 and "error" in err


def test_json_lines():
    code, out, _ = run_cli(["count", "--format", "json-lines"], "w(a,b)")
    assert code == 0
    assert json.loads(out) == {"count": 2}


def test_random_tree_deterministic():
    _, out1, _ = run_cli(["random-tree", "--n", "30", "--seed", "5"])
    _, out2, _ = run_cli(["random-tree", "--n", "30", "--seed", "5"])
    assert out1 == out2 and out1.startswith("tree=")


def test_motion_commands():
    code, out, _ = run_cli(["motion"], "tree unrooted\na b\nb c\nc d\n")
    assert out == "motion=4\n"
    code, out, _ = run_cli(["motion"], "w(a(b))")
    assert out == "motion=asymmetric\n"


def test_center_output():
    _, out, _ = run_cli(["center"], "tree unrooted\na b\nb c\n")
    assert out == "center=vertex vertex=b\n"
    _, out, _ = run_cli(["center"], "tree unrooted\na b\nb c\nc d\n")
    assert out == "center=edge u=b v=c halves_isomorphic=true\n"


def test_canon_relabelling_invariant():
    _, out1, _ = run_cli(["canon"], "w(a,b)")
    _, out2, _ = run_cli(["canon"], "r(x,y)")
    assert out1 == out2


def test_oracle_subcommands():
    _, out, _ = run_cli(["oracle", "count"], "w(a,b)")
    assert out == "count=2\n"
    _, out, _ = run_cli(["oracle", "motion"], "tree unrooted\nw a\nw b\nw c\n")
    assert out == "motion=2\n"
    _, out, _ = run_cli(["oracle", "aut"], "w(a(x,y),b)")
    assert out == "order=2\n"


def test_contract_and_lift():
    _, out, _ = run_cli(["contract"], "w(a(b(c(e))))")
    assert out.splitlines()[0] == "tprime=w(b(e))"
    code, out, _ = run_cli(["lift", "--mode", "plain", "--set", "b"], "w(a(b(c(e))))")
    assert code == 0 and out == "set={b} verified=true\n"


def test_treelike_subcommands():
    c4 = "graph root w\nw a\na x\nx b\nb w\n"
    code, out, _ = run_cli(["treelike", "check", "--horizon", "2"], c4)
    assert code == 0 and out.splitlines()[-1] == "interior_pass=false"
    code, out, _ = run_cli(["treelike", "forest"], c4)
    assert "edge=w-a" in out and "contains_root=true" in out
    code, out, _ = run_cli(["treelike", "asymmetrize"], c4)
    assert code == 1 and out == "failure=verification\n"


def test_presented_subcommands():
    ray = "class r: r*1\n"
    _, out, _ = run_cli(["presented", "classify"], ray)
    assert out == "classification=one-ended size=beth_0\n"
    _, out, _ = run_cli(["presented", "motion"], ray)
    assert out == "motion=asymmetric\n"
    _, out, _ = run_cli(["presented", "rank"], "class r: l*w\nclass l:\n")
    assert out == "rank=1\n"
    code, out, _ = run_cli(["presented", "certificate", "--depth", "1"],
                           "class r: q*5\nclass q: q*1\n")
    assert code == 1 and out == "certificate=none\n"
    code, out, _ = run_cli(["presented", "certificate", "--depth", "3"],
                           "class r: q*5\nclass q: q*1\n")
    assert code == 0 and out.startswith("tree=")


def test_similarity_output():
    _, out, _ = run_cli(["similarity"], "w(a,b)")
    assert out == "vertex=w rep=a tau=2 members=a|b\n"


def test_file_input(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("w(a,b)")
    code, out, _ = run_cli(["count", str(path)])
    assert code == 0 and out == "count=2\n"


def test_missing_file_is_input_error():
    code, _, err = run_cli(["count", "/nonexistent/file.txt"])
    assert code == 2
