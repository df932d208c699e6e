import json
import math
import re

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sdgkit import cli
from sdgkit.config import VerifyConfig
from sdgkit.documents import InputDocument, parse_input, serialize, write_atomic
from sdgkit.errors import InvalidInput, InvalidSpec, ParseError
from sdgkit.generators import KINDS, generate, random_trajectories
from sdgkit.render import RenderSpec, compute_structures, render_svg
from sdgkit.stable_graph import sdg_euclidean

EQUI = [(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3) / 2)]


# documents

def test_parse_json_and_csv():
    a = parse_input(b'{"points": [[0,0],[1,0],[0,1]]}')
    b = parse_input(b"0,0\n1,0\n0,1")
    assert a.points == b.points == [[0, 0], [1, 0], [0, 1]]


def test_parse_errors_carry_locations():
    with pytest.raises(ParseError, match="line 2, column"):
        parse_input(b'{"points":\n [[0,0],, ]}')
    with pytest.raises(ParseError, match="line 2, column 3"):
        parse_input(b"0,0\n1,x\n")
    with pytest.raises(ParseError, match=r"\['points'\]\[1\]"):
        parse_input(b'{"points": [[0,0],[1]]}')
    with pytest.raises(ParseError):
        parse_input(b'{"points": [], "extra": 1}')


def test_degree_bound():
    doc = {"points": [[0, 0]], "trajectories": [{"x": [0, 1, 2, 3, 4, 5], "y": [0]}]}
    with pytest.raises(ParseError, match="degree 5"):
        parse_input(json.dumps(doc).encode())
    doc["trajectories"][0]["x"] = [0, 1, 2, 3]
    assert parse_input(json.dumps(doc).encode()).trajectories[0]["x"] == [0, 1, 2, 3]


def test_non_finite_rejected():
    with pytest.raises(InvalidInput):
        parse_input(b'{"points": [[0, NaN]]}')
    with pytest.raises(InvalidInput):
        parse_input(b"0,inf\n")


def test_body_schema():
    ok = parse_input(b'{"points": [], "body": {"kind": "regular", "k": 64}}')
    assert ok.body == {"kind": "regular", "k": 64}
    with pytest.raises(ParseError):
        parse_input(b'{"points": [], "body": {"kind": "regular"}}')


@given(st.sampled_from(KINDS), st.integers(4, 30), st.integers(0, 2 ** 31), st.integers(0, 3))
def test_round_trip(kind, n, seed, degree):
    pts = generate(kind, n, seed)
    trajs = random_trajectories(pts, degree, seed) if degree else None
    doc = InputDocument(pts.tolist(), trajs, {"kind": "regular", "k": 16},
                        {"seed": seed, "label": kind})
    back = parse_input(serialize(doc))
    assert back == doc
    assert serialize(back) == serialize(doc)


def test_atomic_write(tmp_path):
    f = tmp_path / "out.json"
    write_atomic(str(f), b"one")
    write_atomic(str(f), b"two")
    assert f.read_bytes() == b"two"
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]


# rendering

def test_equilateral_render_has_three_lines():
    s = compute_structures(EQUI, ("dt",))
    svg = render_svg(EQUI, s, RenderSpec(layers=("dt",))).decode()
    assert svg.count("<line") == 3


def test_empty_layers_rejected():
    with pytest.raises(InvalidSpec):
        RenderSpec(layers=())
    with pytest.raises(InvalidSpec):
        RenderSpec(layers=("nope",))


def test_sdg_render_matches_report():
    pts = np.random.default_rng(3).random((60, 2))
    spec = RenderSpec(layers=("sdg", "dt"))
    s = compute_structures(pts, spec.layers, alpha=math.pi / 8)
    svg = render_svg(pts, s, spec).decode()
    groups = dict(re.findall(r'<g id="(\w+)" fill="none">(.*?)</g>', svg, re.S))
    pair = re.compile(r'data-p="(\d+)" data-q="(\d+)"')
    drawn_sdg = {(int(p), int(q)) for p, q in pair.findall(groups["sdg"])}
    drawn_dt = {(int(p), int(q)) for p, q in pair.findall(groups["dt"])}
    assert drawn_sdg == sdg_euclidean(pts, math.pi / 8).edge_set
    assert drawn_dt == set(s.dt.edges) - drawn_sdg
    assert "stroke-dasharray" in groups["dt"] and "stroke-dasharray" not in groups["sdg"]


def test_render_all_layers_deterministic():
    pts = np.random.default_rng(4).random((25, 2))
    spec = RenderSpec(layers=("dt", "vd", "sdg", "bisector", "skeleton"))
    a = render_svg(pts, compute_structures(pts, spec.layers), spec)
    b = render_svg(pts, compute_structures(pts, spec.layers), spec)
    assert a == b
    nums = re.findall(r'[xy][12]="(-?\d+\.\d+)"', a.decode())
    assert nums and all(len(n.split(".")[1]) == 6 for n in nums)


def test_render_flips_y():
    pts = [(0.0, 0.0), (1.0, 0.0), (0.5, 1.0)]
    svg = render_svg(pts, compute_structures(pts, ("dt",)), RenderSpec()).decode()
    cy = {int(i): float(y) for i, y in re.findall(r'data-i="(\d)" cx="[^"]+" cy="([^"]+)"', svg)}
    assert cy[2] < cy[0]


# command line

def run(capsys, args, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        import sys
        monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(stdin)))
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_pipe_to_sdg_lower_bound(capsys, monkeypatch):
    code, doc, _ = run(capsys, ["gen", "--kind", "grid", "--n", "100", "--seed", "1"])
    assert code == 0
    code, rep, _ = run(capsys, ["sdg", "--alpha", "0.1", "--method", "euclid"],
                       doc.encode(), monkeypatch)
    assert code == 0
    assert json.loads(rep)["edge_count"] >= 100 * (1 - 0.6 / math.pi) - 2


def test_plot_collinear_exits_1(capsys, monkeypatch):
    code, _, err = run(capsys, ["plot"], b"0,0\n1,1\n2,2\n", monkeypatch)
    assert code == 1
    assert json.loads(err)["error"] == "DegenerateInput"


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["sdg", "--bogus"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_missing_required_value_exits_1(capsys, monkeypatch):
    code, _, err = run(capsys, ["sdg"], b"0,0\n1,0\n0,1\n", monkeypatch)
    assert code == 1 and "alpha" in err


def test_config_file_mirrors_flags(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"kind": "uniform", "n": 7, "seed": 3}))
    code, a, _ = run(capsys, ["gen", "--config", str(cfg)])
    code2, b, _ = run(capsys, ["gen", "--kind", "uniform", "--n", "7", "--seed", "3"])
    assert code == code2 == 0 and a == b
    # explicit flags override the file
    code, c, _ = run(capsys, ["gen", "--config", str(cfg), "--seed", "4"])
    assert json.loads(c)["metadata"]["seed"] == 4
    cfg.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(SystemExit) as exc:
        cli.main(["gen", "--config", str(cfg)])
    assert exc.value.code == 2


def test_verify_exit_codes_and_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, ["verify", "--suite", "properties", "--seeds", "2", "--n", "40",
                              "--out", str(out)])
    rep = json.loads(out.read_text())
    assert code == 0 and rep["violations"] == 0 and len(rep["seeds"]) == 2
    code, _, _ = run(capsys, ["verify", "--suite", "lemmas", "--seeds", "2", "--n", "30",
                              "--k", "16", "--out", str(out)])
    assert code == 0


def test_verify_nonzero_on_violation(tmp_path, capsys, monkeypatch):
    import sdgkit.suites as suites

    def fake(pts, cfg):
        return {"planted": [(0, 1)]}

    monkeypatch.setitem(suites.RUNNERS, "properties", fake)
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, ["verify", "--suite", "properties", "--seeds", "1", "--n", "10",
                              "--workers", "1", "--out", str(out)])
    assert code == 1
    assert json.loads(out.read_text())["seeds"][0]["verdicts"]["planted"] == [[0, 1]]


def test_thread_cap(monkeypatch):
    cfg = VerifyConfig(suite="lemmas", seeds=10, workers=8)
    monkeypatch.setenv("SDGKIT_THREADS", "3")
    assert cfg.worker_count() == 3
    monkeypatch.setenv("SDGKIT_THREADS", "x")
    with pytest.raises(InvalidInput):
        cfg.worker_count()


def test_kinetic_command(tmp_path, capsys):
    doc = tmp_path / "g.json"
    code, _, _ = run(capsys, ["gen", "--kind", "uniform", "--n", "12", "--seed", "5",
                              "--degree", "1", "--out", str(doc)])
    log, summ = tmp_path / "log.json", tmp_path / "s.csv"
    code, _, _ = run(capsys, ["kinetic", "--input", str(doc), "--alpha", "0.1",
                              "--out", str(log), "--summary", str(summ)])
    assert code == 0
    data = json.loads(log.read_text())
    assert sum(data["counters"].values()) == len(data["events"])
    header, row = summ.read_text().splitlines()
    assert header.startswith("n,t0,t1,alpha,flip") and row.startswith("12,")
