import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from plexspread.cli import main
from conftest import write_tsv

SEM = [
    ("alpha", "bravo"), ("bravo", "carol"), ("carol", "delta"),
    ("delta", "echo"), ("echo", "alpha"), ("alpha", "carol"),
    ("foxtrot", "alpha"), ("golf", "delta"), ("hotel", "echo"),
]
PHON = [
    ("alpha", "carol"), ("carol", "echo"), ("echo", "bravo"),
    ("bravo", "delta"), ("delta", "alpha"), ("foxtrot", "bravo"),
    ("golf", "carol"), ("hotel", "delta"),
]

CONFIG = """\
[network]
layers = [["semantic", "semantic.tsv"], ["phonological", "phonological.tsv"]]
attributes = "attributes.tsv"

[simulation]
horizon = 12
retention = [0.2, 0.8]
coupling = [0.5, 2.0]
seed_modes = ["semantic", "ALL"]

[[items]]
id = "it-easy-1"
seeds = ["alpha", "bravo"]
target = "carol"
group = "easy"
frequency = 3.0

[[items]]
id = "it-easy-2"
seeds = ["bravo", "carol"]
target = "delta"
group = "easy"
frequency = 5.0

[[items]]
id = "it-hard-1"
seeds = ["foxtrot", "golf"]
target = "hotel"
group = "hard"
frequency = 1.0

[[items]]
id = "it-hard-2"
seeds = ["golf", "hotel"]
target = "foxtrot"
group = "hard"
frequency = 2.0

[[items]]
id = "it-missing"
seeds = ["alpha", "zebra"]
target = "carol"
group = "hard"
"""


@pytest.fixture
def exp_dir(tmp_path):
    write_tsv(tmp_path / "semantic.tsv", SEM)
    write_tsv(tmp_path / "phonological.tsv", PHON)
    write_tsv(tmp_path / "attributes.tsv", [
        ("alpha", "valence", "positive"),
        ("hotel", "valence", "negative"),
        ("carol", "frequency", "10.5"),
    ])
    (tmp_path / "config.toml").write_text(CONFIG, encoding="utf-8")
    return tmp_path


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


class TestRun:
    def test_smoke(self, exp_dir, capsys):
        out = exp_dir / "out"
        code = main(["run", "--config", str(exp_dir / "config.toml"), "--out-dir", str(out)])
        assert code == 0
        rows = read_csv(out / "metrics.csv")
        # 2 modes x 2 dx x 2 R = 8 cells, 4 resolvable items, 3 measure layers
        assert len(rows) == 8 * 4 * 3
        assert set(rows[0]) == {
            "item", "group", "seed_mode", "dx", "r", "target", "layer",
            "alpha_m", "t_m", "frequency",
        }
        report = json.loads((out / "report.json").read_text())
        assert report["items_total"] == 5
        assert report["items_run"] == 4
        assert report["dropped"] == [{"id": "it-missing", "missing": ["zebra"]}]
        assert report["rows"] == len(rows)
        # drops are also surfaced as warnings
        assert any("it-missing" in w for w in report["warnings"])

    def test_rerun_is_byte_identical(self, exp_dir):
        out1, out2 = exp_dir / "o1", exp_dir / "o2"
        assert main(["run", "--config", str(exp_dir / "config.toml"), "--out-dir", str(out1)]) == 0
        assert main(["run", "--config", str(exp_dir / "config.toml"), "--out-dir", str(out2)]) == 0
        assert (out1 / "metrics.csv").read_bytes() == (out2 / "metrics.csv").read_bytes()
        assert (out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes()

    def test_jobs_do_not_change_output(self, exp_dir):
        out1, out2 = exp_dir / "j1", exp_dir / "j4"
        main(["run", "--config", str(exp_dir / "config.toml"), "--out-dir", str(out1)])
        main(["run", "--config", str(exp_dir / "config.toml"), "--out-dir", str(out2),
              "--jobs", "4"])
        assert (out1 / "metrics.csv").read_bytes() == (out2 / "metrics.csv").read_bytes()

    def test_flag_overrides(self, exp_dir):
        out = exp_dir / "ov"
        main(["run", "--config", str(exp_dir / "config.toml"), "--out-dir", str(out),
              "--retention", "0.5", "--coupling", "1.0", "--seed-modes", "ALL"])
        rows = read_csv(out / "metrics.csv")
        assert len(rows) == 1 * 1 * 1 * 4 * 3
        assert {r["r"] for r in rows} == {"0.5"}

    def test_traces_written(self, exp_dir):
        out = exp_dir / "tr"
        main(["run", "--config", str(exp_dir / "config.toml"), "--out-dir", str(out),
              "--traces", "--retention", "0.2", "--coupling", "0.5",
              "--seed-modes", "semantic"])
        traces = sorted((out / "traces").glob("*.csv"))
        assert len(traces) == 4  # one file per (cell, item)
        first = traces[0].read_text().splitlines()
        assert first[0] == "node,layer,t,energy"

    def test_unresolvable_spec_machine_readable_error(self, exp_dir, capsys):
        bad = exp_dir / "bad.toml"
        bad.write_text(CONFIG.replace('horizon = 12', ''), encoding="utf-8")
        code = main(["run", "--config", str(bad), "--out-dir", str(exp_dir / "x")])
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "SpecError"
        assert "horizon" in err["message"]

    def test_single_layer_config(self, exp_dir):
        config = """\
[network]
layers = [["semantic", "semantic.tsv"]]

[simulation]
horizon = 10
retention = [0.5]
seed_modes = ["semantic"]

[[items]]
id = "one"
seeds = ["alpha"]
target = "carol"
group = "g"
"""
        (exp_dir / "single.toml").write_text(config, encoding="utf-8")
        out = exp_dir / "single"
        assert main(["run", "--config", str(exp_dir / "single.toml"),
                     "--out-dir", str(out)]) == 0
        rows = read_csv(out / "metrics.csv")
        assert len(rows) == 1
        assert rows[0]["dx"] == ""
        assert rows[0]["layer"] == "semantic"


class TestLvc:
    def test_four_node_example(self, tmp_path, capsys):
        write_tsv(tmp_path / "a.tsv", [("w1", "w2"), ("w2", "w3")])
        write_tsv(tmp_path / "b.tsv", [("w2", "w3"), ("w3", "w4")])
        out = tmp_path / "lvc"
        code = main(["lvc", "--layer", f"a={tmp_path/'a.tsv'}",
                     "--layer", f"b={tmp_path/'b.tsv'}", "--out-dir", str(out)])
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["nodes"] == 2
        assert summary["edges_per_layer"] == {"a": 1, "b": 1}
        report = json.loads((out / "report.json").read_text())
        assert report["nodes"] == 2
        assert (out / "a.tsv").read_text() == "w2\tw3\t1.0\n"

    def test_identical_layers_unchanged(self, tmp_path, capsys):
        edges = [("x", "y"), ("y", "z")]
        write_tsv(tmp_path / "a.tsv", edges)
        write_tsv(tmp_path / "b.tsv", edges)
        out = tmp_path / "lvc"
        main(["lvc", "--layer", f"a={tmp_path/'a.tsv'}",
              "--layer", f"b={tmp_path/'b.tsv'}", "--out-dir", str(out)])
        summary = json.loads(capsys.readouterr().out)
        assert summary["nodes"] == 3
        assert summary["edges_per_layer"] == {"a": 2, "b": 2}

    def test_single_layer_rejected(self, tmp_path, capsys):
        write_tsv(tmp_path / "a.tsv", [("x", "y")])
        code = main(["lvc", "--layer", f"a={tmp_path/'a.tsv'}",
                     "--out-dir", str(tmp_path / "out")])
        assert code == 1
        assert json.loads(capsys.readouterr().err)["error"] == "ValueError"


class TestSpectrum:
    HEADER = "dx,lambda2_layer1,lambda2_layer2,lambda2_supra,lambda2_superposition,regime"

    def test_identical_layers_never_superdiffuse(self, tmp_path):
        edges = [("x", "y"), ("y", "z")]
        write_tsv(tmp_path / "a.tsv", edges)
        write_tsv(tmp_path / "b.tsv", edges)
        out = tmp_path / "spec.csv"
        code = main(["spectrum", "--layer", f"a={tmp_path/'a.tsv'}",
                     "--layer", f"b={tmp_path/'b.tsv'}",
                     "--dx-log", "0.01,100,20", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == self.HEADER
        assert len(lines) == 21
        assert all("SUPERDIFFUSION" not in line for line in lines)

    def test_single_grid_point(self, tmp_path):
        edges = [("x", "y"), ("y", "z")]
        write_tsv(tmp_path / "a.tsv", edges)
        write_tsv(tmp_path / "b.tsv", edges)
        out = tmp_path / "one.csv"
        main(["spectrum", "--layer", f"a={tmp_path/'a.tsv'}",
              "--layer", f"b={tmp_path/'b.tsv'}", "--dx-grid", "1.0",
              "--out", str(out)])
        assert len(out.read_text().splitlines()) == 2

    def test_wrong_layer_count_rejected(self, tmp_path, capsys):
        write_tsv(tmp_path / "a.tsv", [("x", "y")])
        code = main(["spectrum", "--layer", f"a={tmp_path/'a.tsv'}",
                     "--dx-grid", "1.0", "--out", str(tmp_path / "s.csv")])
        assert code == 1
        assert "2 layers" in json.loads(capsys.readouterr().err)["message"]

    def test_complementary_layers_reach_superdiffusion(self, tmp_path):
        n = 12
        ring = [(f"w{i:02d}", f"w{(i+1)%n:02d}") for i in range(n)]
        chords = [(f"w{i:02d}", f"w{(i+5)%n:02d}") for i in range(n)]
        chords += [("w00", "w06"), ("w03", "w09")]
        write_tsv(tmp_path / "ring.tsv", ring)
        write_tsv(tmp_path / "chords.tsv", chords)
        out = tmp_path / "sweep.csv"
        main(["spectrum", "--layer", f"ring={tmp_path/'ring.tsv'}",
              "--layer", f"chords={tmp_path/'chords.tsv'}",
              "--dx-log", "0.01,100,30", "--out", str(out)])
        body = out.read_text()
        assert "SUB_MULTIPLEX" in body
        assert "MULTIPLEX" in body
        assert "SUPERDIFFUSION" in body


class TestCompare:
    def run_experiment(self, exp_dir):
        out = exp_dir / "out"
        main(["run", "--config", str(exp_dir / "config.toml"), "--out-dir", str(out)])
        return out

    def test_pairwise_tables(self, exp_dir):
        out = self.run_experiment(exp_dir)
        stem = exp_dir / "stats" / "cmp"
        code = main(["compare", "--metrics", str(out / "metrics.csv"),
                     "--out", str(stem)])
        assert code == 0
        # one file per (seed_mode, layer): 2 modes x 3 layers
        files = sorted((exp_dir / "stats").glob("cmp__*.csv"))
        assert len(files) == 6
        rows = read_csv(files[0])
        assert list(rows[0]) == ["dx", "groups", "measure", "R", "value", "significant"]
        assert {r["groups"] for r in rows} == {"easy vs hard"}
        # 2 dx x 2 measures x 2 R
        assert len(rows) == 8
        assert all(r["significant"] in ("true", "false") for r in rows)

    def test_kendall_rows(self, exp_dir):
        out = self.run_experiment(exp_dir)
        stem = exp_dir / "stats" / "tau"
        main(["compare", "--metrics", str(out / "metrics.csv"),
              "--out", str(stem), "--kendall-col", "frequency"])
        files = sorted((exp_dir / "stats").glob("tau__*.csv"))
        rows = read_csv(files[0])
        tau_rows = [r for r in rows if "~frequency" in r["measure"]]
        assert tau_rows, "expected tau rows"
        assert {r["groups"] for r in tau_rows} == {"easy", "hard"}
        assert all(r["significant"] == "" for r in tau_rows)
        assert all(-1.0 <= float(r["value"]) <= 1.0 for r in tau_rows)

    def test_three_groups_give_three_pairwise_rows(self, tmp_path):
        lines = ["item,group,dx,r,alpha_m,t_m"]
        values = {"easy": (9.0, 2.0), "medium": (5.0, 5.0), "hard": (1.0, 9.0)}
        for group, (alpha, t) in values.items():
            for k in range(3):
                lines.append(f"i{group}{k},{group},1,0.2,{alpha + k},{t + k}")
        csv_path = tmp_path / "m.csv"
        csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        stem = tmp_path / "cmp"
        assert main(["compare", "--metrics", str(csv_path), "--out", str(stem)]) == 0
        rows = read_csv(tmp_path / "cmp.csv")
        pairs = {r["groups"] for r in rows}
        assert pairs == {"easy vs hard", "easy vs medium", "hard vs medium"}
        assert len(rows) == 3 * 2  # pairs x measures, single (dx, r) cell

    def test_constant_measure_in_both_groups(self, tmp_path):
        lines = ["item,group,dx,r,alpha_m,t_m"]
        for group in ("a", "b"):
            for k in range(3):
                lines.append(f"i{group}{k},{group},1,0.2,2.0,{k}")
        csv_path = tmp_path / "m.csv"
        csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        stem = tmp_path / "cmp"
        assert main(["compare", "--metrics", str(csv_path), "--out", str(stem)]) == 0
        rows = read_csv(tmp_path / "cmp.csv")
        alpha_rows = [r for r in rows if r["measure"] == "alpha_m"]
        assert alpha_rows[0]["value"] == "0"
        assert alpha_rows[0]["significant"] == "false"

    def test_degenerate_cells_reported_not_fatal(self, exp_dir, tmp_path):
        csv_path = tmp_path / "m.csv"
        csv_path.write_text(
            "item,group,seed_mode,dx,r,target,layer,alpha_m,t_m\n"
            "i1,easy,sem,1,0.2,t,L,0.5,3\n"
            "i2,easy,sem,1,0.2,t,L,0.6,4\n"
            "i3,hard,sem,1,0.2,t,L,0.4,5\n",  # hard has only 1 sample
            encoding="utf-8",
        )
        stem = tmp_path / "cmp"
        assert main(["compare", "--metrics", str(csv_path), "--out", str(stem)]) == 0
        report = json.loads((tmp_path / "cmp.report.json").read_text())
        assert report["degenerate_cells"]

    def test_missing_group_column(self, exp_dir, capsys):
        out = self.run_experiment(exp_dir)
        code = main(["compare", "--metrics", str(out / "metrics.csv"),
                     "--out", str(exp_dir / "x"), "--group-col", "nope"])
        assert code == 1
        assert json.loads(capsys.readouterr().err)["error"] == "SpecError"


class TestStream:
    def test_direct_connection(self, tmp_path, capsys):
        write_tsv(tmp_path / "l.tsv", [("maths", "anxiety"), ("maths", "fun"), ("fun", "anxiety")])
        write_tsv(tmp_path / "attrs.tsv", [("anxiety", "valence", "negative")])
        prefix = tmp_path / "ms"
        code = main(["stream", "--layer", f"l={tmp_path/'l.tsv'}",
                     "--attributes", str(tmp_path / "attrs.tsv"),
                     "--in-layer", "l", "--source", "maths", "--target", "anxiety",
                     "--out", str(prefix)])
        assert code == 0
        assert capsys.readouterr().out.strip() == "path_length=1"
        edges = Path(f"{prefix}.edges.tsv").read_text().splitlines()
        assert edges == ["anxiety\tmaths\t1.0"]
        nodes = Path(f"{prefix}.nodes.csv").read_text().splitlines()
        assert nodes[0] == "node,valence"
        assert "anxiety,negative" in nodes

    def test_no_path(self, tmp_path, capsys):
        write_tsv(tmp_path / "l.tsv", [("a", "b"), ("c", "d")])
        prefix = tmp_path / "ms"
        code = main(["stream", "--layer", f"l={tmp_path/'l.tsv'}",
                     "--in-layer", "l", "--source", "a", "--target", "c",
                     "--out", str(prefix)])
        assert code == 0
        assert capsys.readouterr().out.strip() == "no_path"
        assert Path(f"{prefix}.edges.tsv").read_text() == ""


class TestConsoleScript:
    def test_entry_point_runs(self, tmp_path):
        write_tsv(tmp_path / "a.tsv", [("x", "y"), ("y", "z")])
        write_tsv(tmp_path / "b.tsv", [("x", "y"), ("y", "z")])
        out = tmp_path / "spec.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "plexspread.cli", "spectrum",
             "--layer", f"a={tmp_path/'a.tsv'}", "--layer", f"b={tmp_path/'b.tsv'}",
             "--dx-grid", "1.0", "--out", str(out)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert out.exists()
