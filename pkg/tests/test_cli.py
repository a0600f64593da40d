import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from digadget import BitVector, IndexInstance, PropertyTag, build_instance, ground_truth
from digadget.cli import main
from digadget.formats import (
    SWEEP_COLUMNS,
    InstanceFormatError,
    parse_instance,
    read_sweep_csv,
    render_instance,
)
from digadget.stream_model import make_stream

FIGURE_FILE = "digadget acyc m=9 n=3 i=5 s=none\n0 5\n1 4\n1 5\n2 4\n---\n5 1\n"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_figure_example(capsys):
    code, out, _ = run(capsys, "gen", "--property", "acyc", "--m", 9, "--i", 5, "--x", "001011010")
    assert code == 0
    assert out == FIGURE_FILE


def test_gen_reach_degenerate(capsys):
    code, out, _ = run(capsys, "gen", "--property", "reach", "--m", 1, "--i", 0, "--x", "0")
    assert code == 0
    assert out.splitlines() == ["digadget reach m=1 n=1 i=0 s=2", "---", "2 0"]


def test_gen_to_file_round_trips(tmp_path, capsys):
    path = tmp_path / "g.txt"
    code, _, _ = run(capsys, "gen", "--property", "sc", "--m", 20, "--i", 7, "--seed", 3,
                     "--order", "shuffled", "--out", path)
    assert code == 0
    inst = parse_instance(path.read_text())
    x = inst.x()
    assert inst == build_instance(PropertyTag.STRONG_CONNECTIVITY, IndexInstance(x, 7))


@pytest.mark.parametrize(
    "argv",
    [
        ["--x", "00101101"],
        ["--x", "00101101a"],
        ["--x", "001011010", "--i", "9"],
    ],
)
def test_gen_usage_errors(capsys, argv):
    base = ["gen", "--property", "acyc", "--m", "9", "--i", "5"]
    code, _, err = run(capsys, *(base + argv))
    assert code == 2
    assert "digadget gen" in err


@st.composite
def gadgets(draw):
    m = draw(st.integers(1, 40))
    bits = draw(st.lists(st.integers(0, 1), min_size=m, max_size=m))
    i = draw(st.integers(0, m - 1))
    prop = draw(st.sampled_from(list(PropertyTag)))
    return build_instance(prop, IndexInstance(BitVector(tuple(bits)), i))


@settings(max_examples=200)
@given(gadgets(), st.integers(0, 1000))
def test_instance_file_round_trip(inst, seed):
    assert parse_instance(render_instance(inst)) == inst
    stream = make_stream(inst, "shuffled", seed)
    assert parse_instance(render_instance(inst, stream.first, stream.second)) == inst


def test_check_figure_file(tmp_path, capsys):
    path = tmp_path / "fig.txt"
    path.write_text(FIGURE_FILE)
    assert run(capsys, "check", path)[:2] == (0, "acyclic: false\n")


def test_check_empty_e1_strong_connectivity(tmp_path, capsys):
    path = tmp_path / "sc.txt"
    run(capsys, "gen", "--property", "sc", "--m", 4, "--i", 2, "--x", "0000", "--out", path)
    assert path.read_text().splitlines()[1] == "---"
    assert run(capsys, "check", path)[:2] == (0, "strongly_connected: false\n")


def test_check_random_files_match_ground_truth(tmp_path, capsys):
    rng = random.Random(100)
    for t in range(100):
        prop = rng.choice(list(PropertyTag))
        m = rng.randint(1, 50)
        i = rng.randrange(m)
        x = "".join(rng.choice("01") for _ in range(m))
        path = tmp_path / f"{t}.txt"
        run(capsys, "gen", "--property", prop.value, "--m", m, "--i", i, "--x", x,
            "--order", "shuffled", "--seed", t, "--out", path)
        code, out, _ = run(capsys, "check", path)
        expected = ground_truth(prop, IndexInstance(x, i))
        assert code == 0
        assert out == f"{prop.label}: {str(expected).lower()}\n"


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("graph acyc m=9 n=3 i=5 s=none\n---\n", 1),
        ("digadget acyc m=9 n=4 i=5 s=none\n---\n", 1),
        ("digadget reach m=9 n=3 i=5 s=none\n---\n", 1),
        ("digadget acyc m=9 n=3 i=5 s=none\n0 5\n1 x\n---\n", 3),
        ("digadget acyc m=9 n=3 i=5 s=none\n0 5\n---\n9 1\n", 4),
        ("digadget acyc m=9 n=3 i=5 s=none\n0 5\n", 3),
        ("digadget acyc m=9 n=3 i=5 s=none\n---\n---\n", 3),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(InstanceFormatError) as info:
        parse_instance(text)
    assert info.value.lineno == line
    assert str(info.value).startswith(f"line {line}:")


def test_check_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("digadget acyc m=9 n=3 i=5 s=none\n0 5 7\n---\n")
    code, _, err = run(capsys, "check", path)
    assert code == 2
    assert "line 2" in err


@pytest.mark.parametrize("prop", ["acyc", "sc", "reach"])
def test_verify_passes(capsys, prop):
    code, out, _ = run(capsys, "verify", "--property", prop, "--m", 6)
    assert code == 0
    assert out.startswith(f"OK property={prop} m=6 cases=384")


def test_verify_shuffled_and_random(capsys):
    code, out, _ = run(capsys, "verify", "--property", "reach", "--m", 5, "--order", "shuffled",
                       "--orders", 3)
    assert code == 0 and "protocol_runs=480" in out
    code, out, _ = run(capsys, "verify", "--property", "sc", "--m", 200, "--random", 50,
                       "--protocol")
    assert code == 0 and "cases=50" in out


def test_verify_mismatch_exit_code(capsys, monkeypatch):
    import digadget.protocol as protocol

    monkeypatch.setattr(protocol, "ground_truth", lambda prop, inst: False)
    code, out, _ = run(capsys, "verify", "--property", "sc", "--m", 3)
    assert code == 1
    assert out.startswith("FAIL")


def test_verify_rejects_large_exhaustive(capsys):
    assert run(capsys, "verify", "--property", "sc", "--m", 15)[0] == 2


def test_sweep_empty_budgets_is_header_only(tmp_path, capsys):
    path = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--property", "sc", "--m", 64, "--budgets", "",
                     "--trials", 100, "--out", path)
    assert code == 0
    assert path.read_text() == ",".join(SWEEP_COLUMNS) + "\n"


def test_sweep_rows_and_determinism(tmp_path, capsys):
    argv = ["sweep", "--property", "acyc", "--m", 16, "--budgets", "0,8,16", "--trials", 400,
            "--seed", 5]
    code, first, err = run(capsys, *argv)
    assert code == 0
    assert "coins=shared" in err
    second = run(capsys, *argv)[1]
    assert first == second
    rows = read_sweep_csv(first)
    assert [int(r["budget_bits"]) for r in rows] == [0, 8, 16]
    assert [int(r["max_message_bits"]) for r in rows] == [0, 8, 16]
    assert rows[-1]["rate"] == "1.000000"
    assert all(r["seed"] == "5" and r["trials"] == "400" for r in rows)


def test_sweep_private_coins_reported(capsys):
    code, _, err = run(capsys, "sweep", "--property", "sc", "--m", 16, "--budgets", "8",
                       "--trials", 100, "--coins", "private")
    assert code == 0 and "coins=private" in err


@pytest.mark.parametrize("argv", [["--trials", "99"], ["--budgets", "1,x"], ["--budgets", "-1"]])
def test_sweep_usage_errors(capsys, argv):
    base = ["sweep", "--property", "sc", "--m", "16", "--budgets", "4", "--trials", "100"]
    assert run(capsys, *(base + argv))[0] == 2


def test_bad_property_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--property", "planar", "--m", "3"])
    assert info.value.code == 2
