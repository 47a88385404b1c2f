import json
from pathlib import Path

import numpy as np
import pytest

from chainpair import Chain, make_reduction_instance, save_chain
from chainpair.bench import BenchRow, load_reference_tables, rows_to_csv, rows_to_json, run_row
from chainpair.cli import main

from test_pdb_io import atom_line

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture
def fixture_files(tmp_path):
    a = Chain([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)])
    b = Chain([(0.0, 1.0), (3.0, 1.0)])
    pa = tmp_path / "a.csv"
    pb = tmp_path / "b.csv"
    save_chain(a, pa)
    save_chain(b, pb)
    return str(pa), str(pb)


class TestFrechetCommand:
    def test_identical_files_print_zero(self, fixture_files, capsys):
        pa, _ = fixture_files
        assert main(["frechet", pa, pa]) == 0
        assert capsys.readouterr().out.splitlines()[0] == "0"

    def test_two_single_points_distance_five(self, tmp_path, capsys):
        pa = tmp_path / "p.csv"
        pb = tmp_path / "q.csv"
        pa.write_text("0,0\n")
        pb.write_text("3,4\n")
        assert main(["frechet", str(pa), str(pb)]) == 0
        assert capsys.readouterr().out.splitlines()[0] == "5"

    def test_matches_library_exactly(self, rng, tmp_path, capsys):
        from chainpair import discrete_frechet

        a = Chain(rng.random((8, 3)))
        b = Chain(rng.random((5, 3)))
        pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
        save_chain(a, pa)
        save_chain(b, pb)
        assert main(["frechet", str(pa), str(pb), "--witness"]) == 0
        out = capsys.readouterr().out.splitlines()
        res = discrete_frechet(a, b)
        assert float(out[0]) == res.value
        pairs = tuple(tuple(map(int, tok.split(","))) for tok in out[1].split())
        assert pairs == res.coupling

    def test_pdb_selector_input(self, tmp_path, capsys):
        pdb = tmp_path / "mini.pdb"
        pdb.write_text("\n".join([
            atom_line(1, 1, 0.0, 0.0, 0.0),
            atom_line(2, 2, 3.0, 4.0, 0.0),
        ]))
        single = tmp_path / "s.csv"
        single.write_text("0,0,0\n")
        assert main(["frechet", f"{pdb}:A", str(single)]) == 0
        assert capsys.readouterr().out.splitlines()[0] == "5"

    def test_pdb_without_selector_is_usage_error(self, tmp_path, capsys):
        pdb = tmp_path / "mini.pdb"
        pdb.write_text(atom_line(1, 1, 0.0, 0.0, 0.0))
        assert main(["frechet", str(pdb), str(pdb)]) == 2


class TestCps3fCommand:
    def test_basic_and_decision(self, fixture_files, capsys):
        pa, pb = fixture_files
        assert main(["cps3f", pa, pb, "--d1", "1", "--d2", "0", "--d3", "1.5",
                     "--k", "2"]) == 0
        out = capsys.readouterr().out
        assert "yes" in out and "k_star=2" in out

    def test_k_zero_is_usage_error(self, fixture_files, capsys):
        pa, pb = fixture_files
        assert main(["cps3f", pa, pb, "--d1", "1", "--d2", "1", "--d3", "1",
                     "--k", "0"]) == 2

    def test_no_solution_exit_code(self, tmp_path, capsys):
        pa = tmp_path / "p.csv"
        pb = tmp_path / "q.csv"
        pa.write_text("0,0\n")
        pb.write_text("9,9\n")
        assert main(["cps3f", str(pa), str(pb),
                     "--d1", "0", "--d2", "0", "--d3", "1"]) == 1

    def test_golden_json_report(self, fixture_files, tmp_path, capsys):
        pa, pb = fixture_files
        out_path = tmp_path / "report.json"
        assert main(["cps3f", pa, pb, "--d1", "1", "--d2", "0", "--d3", "1.5",
                     "--reconstruct", "--json", str(out_path)]) == 0
        got = json.loads(out_path.read_text())
        got["stats"].pop("elapsed_seconds")
        want = json.loads((GOLDEN_DIR / "cps3f.json").read_text())
        assert got == want

    def test_warm_cap_agrees(self, fixture_files, capsys):
        pa, pb = fixture_files
        assert main(["cps3f", pa, pb, "--d1", "1", "--d2", "0", "--d3", "1.5",
                     "--warm-cap"]) == 0
        assert "k_star=2" in capsys.readouterr().out


class TestWcps3fCommand:
    def test_reduction_fixture_decision(self, tmp_path, capsys):
        pa = tmp_path / "ra.json"
        pb = tmp_path / "rb.json"
        # the base gadget uses zero weights, which plain chain files reject;
        # feed the solver the positive variant through the CLI instead
        inst = make_reduction_instance((1, 2, 3), positive_variant=True)
        save_chain(inst.chain_a, pa)
        save_chain(inst.chain_b, pb)
        assert main(["wcps3f", str(pa), str(pb),
                     "--d1", str(inst.params.delta1),
                     "--d2", str(inst.params.delta2),
                     "--d3", str(inst.params.delta3),
                     "--k", str(inst.budget)]) == 0
        assert capsys.readouterr().out.strip() == "yes"

    def test_optimum_output(self, tmp_path, capsys):
        inst = make_reduction_instance((1, 2, 3), positive_variant=True)
        pa = tmp_path / "ra.json"
        pb = tmp_path / "rb.json"
        save_chain(inst.chain_a, pa)
        save_chain(inst.chain_b, pb)
        assert main(["wcps3f", str(pa), str(pb), "--d1", "1", "--d2", "1",
                     "--d3", "5"]) == 0
        assert "k_star_weight=6" in capsys.readouterr().out


class TestOneSidedCommands:
    def test_one_sided(self, fixture_files, capsys):
        pa, pb = fixture_files
        assert main(["one-sided", pa, pb, "--d1", "1", "--d3", "1.5"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("k_star=")

    def test_simplify_min_k_zero_delta_identity(self, tmp_path, capsys):
        chain = Chain([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)])
        pa = tmp_path / "c.csv"
        save_chain(chain, pa)
        assert main(["simplify-min-k", str(pa), str(pa), "--delta", "0"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "length=3"
        assert out[1] == "a_indices=1,2,3"

    def test_simplify_min_delta_single_vertex(self, fixture_files, capsys):
        from chainpair import simplify_min_delta, load_chain

        pa, pb = fixture_files
        assert main(["simplify-min-delta", pa, pb, "--k", "1"]) == 0
        out = capsys.readouterr().out.splitlines()
        want, _ = simplify_min_delta(load_chain(pa), load_chain(pb), 1)
        assert float(out[0].split("=")[1]) == want

    def test_library_equivalence(self, rng, tmp_path, capsys):
        from chainpair import one_sided_cps3f_min

        a = Chain(rng.random((6, 2)))
        b = Chain(rng.random((5, 2)))
        pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
        save_chain(a, pa)
        save_chain(b, pb)
        assert main(["one-sided", str(pa), str(pb), "--d1", "2", "--d3", "2"]) == 0
        out = capsys.readouterr().out.splitlines()
        k, idx = one_sided_cps3f_min(a, b, 2.0, 2.0)
        assert out[0] == f"k_star={k}"
        assert out[1] == "a_indices=" + ",".join(map(str, idx))


def synthetic_backbone(path, coords):
    lines = [atom_line(i + 1, i + 1, *xyz) for i, xyz in enumerate(coords)]
    Path(path).write_text("\n".join(lines) + "\n")


class TestBench:
    def test_reference_tables_shape(self):
        data = load_reference_tables()
        assert set(data["tables"]) == {"1", "2", "3"}
        for rows in data["tables"].values():
            assert len(rows) == 7
            for row in rows:
                assert row["expected_k"] >= 1
                assert row["delta1"] > 0 and row["delta2"] > 0 and row["delta3"] > 0

    def test_missing_data_without_fetch(self, tmp_path, capsys):
        assert main(["bench", "--table", "2", "--rows", "1hfj.c",
                     "--cache-dir", str(tmp_path)]) == 2
        assert "missing PDB data" in capsys.readouterr().err

    def test_unknown_row_label(self, tmp_path):
        assert main(["bench", "--table", "2", "--rows", "nope",
                     "--cache-dir", str(tmp_path)]) == 2

    def _stub_specs(self, cache):
        synthetic_backbone(cache / "9aaa.pdb",
                           [(0.0, 0.0, 0.0), (50.0, 0.0, 0.0)])
        synthetic_backbone(cache / "9bbb.pdb",
                           [(0.0, 1.0, 0.0), (50.0, 1.0, 0.0)])
        anchor = {"label": "9aaa.a", "pdb_id": "9aaa", "chain": "A", "length": 2}
        spec = {"label": "9bbb.a", "pdb_id": "9bbb", "chain": "A", "length": 2,
                "delta1": 0.0, "delta2": 0.0, "delta3": 1.0, "expected_k": 2}
        return anchor, spec

    def test_row_pass_and_fail(self, tmp_path):
        anchor, spec = self._stub_specs(tmp_path)
        row = run_row(spec, anchor, cache_dir=tmp_path)
        assert row.status == "PASS" and row.k_star == 2
        spec_bad = dict(spec, expected_k=1)
        row = run_row(spec_bad, anchor, cache_dir=tmp_path)
        assert row.status == "FAIL"

    def test_row_gate_failure(self, tmp_path):
        anchor, spec = self._stub_specs(tmp_path)
        spec_gate = dict(spec, length=99)
        row = run_row(spec_gate, anchor, cache_dir=tmp_path)
        assert row.status == "GATE_FAIL"
        assert row.k_star is None

    def test_row_timeout(self, tmp_path):
        # large enough that the child cannot finish before the poll expires
        n = 48
        coords = [(float(i), 0.0, 0.0) for i in range(n)]
        synthetic_backbone(tmp_path / "9ccc.pdb", coords)
        anchor = {"label": "9ccc.a", "pdb_id": "9ccc", "chain": "A", "length": n}
        spec = {"label": "9ccc.a", "pdb_id": "9ccc", "chain": "A", "length": n,
                "delta1": 1e9, "delta2": 1e9, "delta3": 1e9, "expected_k": 1}
        row = run_row(spec, anchor, cache_dir=tmp_path, timeout=0.02)
        assert row.status == "TIMEOUT"
        assert "aborted" in row.message

    def test_serializers(self, tmp_path):
        anchor, spec = self._stub_specs(tmp_path)
        row = run_row(spec, anchor, cache_dir=tmp_path)
        csv_text = rows_to_csv([row])
        assert csv_text.splitlines()[0].startswith("chain_a_id,")
        assert "9bbb.a" in csv_text
        payload = json.loads(rows_to_json([row]))
        assert payload["schema_version"] == 1
        assert payload["rows"][0]["status"] == "PASS"
