"""End-to-end CLI behaviour: exit codes, formats, determinism, figures."""

import json
import math

import numpy as np
import pytest

from shiftapprox import BSpline, SampledFunction, write_sampled_csv
from shiftapprox.cli import main, parse_kernel, parse_range

BSPLINE_TABLE = {k: BSpline(3, 1).coeff(k) for k in range(-64, 65)}


class TestParsing:
    def test_kernel_strings(self):
        assert parse_kernel("dirichlet:deg=7").label() == "dirichlet(deg=7)"
        assert parse_kernel("bspline:n=8,mu=3").label() == "bspline(n=8,mu=3)"
        assert parse_kernel("shifted_bspline:n=4,mu=1").label() == \
            "shifted-bspline(n=4,mu=1)"
        k = parse_kernel("weighted:n=4,mu=2,family=poisson,alpha=0.5")
        assert "poisson" in k.label()

    def test_ranges(self):
        assert parse_range("1..4") == [1, 2, 3, 4]
        assert parse_range("2,5,7") == [2, 5, 7]

    def test_bad_kernel_exits_64(self, capsys):
        assert main(["certify", "--kernel", "nosuch:a=1", "--check", "odd"]) == 64

    def test_bad_flag_exits_64(self):
        assert main(["certify", "--no-such-flag"]) == 64


class TestCertify:
    def test_passing_configuration(self, tmp_path):
        out = tmp_path / "report.csv"
        rc = main(["certify", "--kernel", "bspline:n=8,mu=3", "--check", "odd",
                   "--m", "7", "--r", "2", "--K", "1024", "--out", str(out)])
        assert rc == 0
        text = out.read_text()
        assert text.splitlines()[0] == "check,condition,l,margin,slack,verdict"
        assert "fail" not in text
        assert (tmp_path / "report.png").exists()

    def test_failing_configuration(self):
        rc = main(["certify", "--kernel", "bspline:n=8,mu=0", "--check", "uniform",
                   "--m", "8", "--r", "3", "--K", "512", "--out", "-"])
        assert rc == 2

    def test_quarter_dirichlet(self):
        rc = main(["certify", "--kernel", "dirichlet:deg=7", "--check", "quarter",
                   "--n", "8", "--m", "3", "--r", "1", "--out", "-"])
        assert rc == 0

    def test_samples_add_bound_rows(self, tmp_path):
        out = tmp_path / "rows.csv"
        rc = main(["certify", "--kernel", "bspline:n=4,mu=2", "--check", "odd",
                   "--m", "3", "--r", "1", "--K", "256", "--samples", "5",
                   "--seed", "7", "--out", str(out), "--no-plot"])
        assert rc == 0
        assert "jackson,bound" in out.read_text()

    def test_json_mirrors_csv(self, tmp_path):
        out = tmp_path / "rows.json"
        rc = main(["certify", "--kernel", "dirichlet:deg=3", "--check", "even",
                   "--m", "4", "--r", "1", "--out", str(out), "--format", "json",
                   "--no-plot"])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["meta"]["overall"] == "pass"
        assert all({"check", "condition", "l", "margin", "slack", "verdict"}
                   <= set(row) for row in payload["rows"])

    def test_custom_kernel_via_config(self, tmp_path):
        config = {"kernel": {"type": "custom", "name": "three-harmonics",
                             "coeffs": {"0": [1, 0], "1": [0.5, 0], "-1": [0.5, 0],
                                        "2": [0.1, 0], "-2": [0.1, 0]},
                             "decay": [1.0, 2.0], "finite": 2},
                  "n": 3, "m": 2, "r": 1, "K": 64, "check": "even"}
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps(config))
        assert main(["certify", "--config", str(cfg), "--out", "-"]) == 0

    def test_unknown_config_key_exits_64(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        assert main(["certify", "--config", str(cfg)]) == 64

    def test_all_checks_with_samples(self, tmp_path):
        out = tmp_path / "all.csv"
        rc = main(["certify", "--kernel", "bspline:n=6,mu=2", "--check", "all",
                   "--r", "2", "--K", "768", "--samples", "10", "--seed", "3",
                   "--out", str(out), "--no-plot"])
        assert rc == 0
        text = out.read_text()
        for name in ("uniform-bound", "zero-mean-bound", "odd-bound",
                     "even-bound", "quarter-bound", "domination", "jackson"):
            assert name in text

    def test_tiny_shift_count_skips_vacuous_sampling(self):
        # quarter default m is 0 at n=2: the vacuous conditions still report
        rc = main(["certify", "--kernel", "bspline:n=2,mu=1", "--check", "all",
                   "--r", "1", "--samples", "5", "--out", "-"])
        assert rc == 0

    def test_inconclusive_exits_3(self, tmp_path):
        # coefficient table without finite-support metadata: the reflection
        # identity beyond the cutoff cannot be settled at this K
        config = {"kernel": {"type": "custom", "name": "opaque-table",
                             "coeffs": {str(k): [BSPLINE_TABLE[k].real,
                                                 BSPLINE_TABLE[k].imag]
                                        for k in BSPLINE_TABLE},
                             "decay": [6.0, 2.0], "shift_count": 3},
                  "m": 2, "r": 1, "K": 64, "check": "odd"}
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps(config))
        assert main(["certify", "--config", str(cfg), "--out", "-"]) == 3


class TestWidths:
    def test_table_and_exit(self, tmp_path):
        out = tmp_path / "widths.csv"
        rc = main(["widths", "--class", "even", "--r-list", "1..2",
                   "--n-list", "1..3", "--K", "1024", "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "class,r,n,semiaxis_width,ratio_width,abs_diff"
        assert len(lines) == 7
        row = lines[1].split(",")
        assert float(row[3]) == pytest.approx(1.0)  # even class, r=1, n=1
        assert (tmp_path / "widths.png").exists()

    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["widths", "--class", "odd", "--r-list", "1", "--n-list", "1..4",
                "--K", "512", "--no-plot"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestProject:
    def test_end_to_end(self, tmp_path):
        grid = np.linspace(0, math.pi, 129)
        vals = np.sin(grid) + 0.25 * np.sin(2 * grid)
        sample = tmp_path / "sample.csv"
        write_sampled_csv(SampledFunction(grid, vals.astype(complex)), str(sample))
        out = tmp_path / "proj.csv"
        rc = main(["project", "--input", str(sample), "--family", "0",
                   "--kernel", "bspline:n=6,mu=2", "--m", "5", "--r", "1",
                   "--out", str(out)])
        assert rc == 0
        import csv
        with open(out) as fh:
            values = next(csv.DictReader(fh))
        assert float(values["periodic_error"]) <= float(values["bound_rhs"])
        assert float(values["segment_error"]) == pytest.approx(
            float(values["periodic_error"]) / math.sqrt(2))
        assert (tmp_path / "proj.png").exists()

    def test_requires_input(self):
        assert main(["project", "--family", "0",
                     "--kernel", "bspline:n=4,mu=1"]) == 64


class TestSplines:
    def test_matched_case(self, tmp_path):
        out = tmp_path / "spl.csv"
        rc = main(["splines", "--family", "2", "--d", "4", "--n", "3",
                   "--out", str(out)])
        assert rc == 0
        text = out.read_text()
        assert "true" in text
        assert (tmp_path / "spl.png").exists()

    def test_explicit_parity(self):
        assert main(["splines", "--family", "1", "--d", "2", "--n", "3",
                     "--parity", "integer", "--out", "-"]) == 0


class TestKernels:
    def test_catalog(self, capsys):
        assert main(["kernels"]) == 0
        text = capsys.readouterr().out
        assert "dirichlet" in text and "bspline" in text and "custom" in text
