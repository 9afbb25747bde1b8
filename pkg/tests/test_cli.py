import json

import numpy as np
import pytest

from troppencil.cli import canonical_text, load_spec, main, parse_spec, spec_to_doc
from troppencil.theorem1 import PencilSpec

from conftest import example_spec, machine


@pytest.fixture
def example_file(reference_example, spec_file):
    return spec_file(reference_example)


class TestSpecFiles:
    def test_round_trip_idempotent(self, reference_example, spec_file):
        path = spec_file(reference_example)
        doc1 = spec_to_doc(load_spec(path))
        assert canonical_text(doc1) == open(path).read()

    def test_rational_exponents_survive(self, tmp_path):
        spec = PencilSpec.build(
            [np.eye(2) + 1j], [[["1/3", None], [None, "-5/7"]]]
        )
        doc = spec_to_doc(spec)
        assert doc["terms"][0]["exponent"][0][0] == "1/3"
        back = parse_spec(json.loads(canonical_text(doc)))
        assert back.exponent_layers == spec.exponent_layers

    def test_missing_fields_rejected(self, tmp_path):
        from troppencil.errors import TropPencilError

        with pytest.raises(TropPencilError):
            parse_spec({"n": 2, "d": 1, "terms": [{"coeff": [[0, 0], [0, 0]]}]})
        with pytest.raises(TropPencilError):
            parse_spec({"n": 2})

    def test_duplicate_degree_rejected(self):
        from troppencil.errors import TropPencilError

        term = {"degree": 0, "coeff": [[1]], "exponent": [[0]]}
        with pytest.raises(TropPencilError):
            parse_spec({"n": 1, "d": 0, "terms": [term, dict(term)]})


class TestCorners:
    def test_machine_output(self, example_file):
        code, doc = machine(["corners", example_file])
        assert code == 0
        assert doc["corners"] == [["0", 2], ["1", 1]]
        assert doc["val_perm"] == 0 and doc["deg_perm"] == 3


class TestPredict:
    def test_branch_listing(self, example_file):
        code, doc = machine(["predict", example_file])
        assert code == 0
        gammas = sorted(b["gamma"] for b in doc["branches"])
        assert gammas == ["0", "0", "1"]
        assert doc["unresolved_count"] == 0
        assert doc["consistency"] is True

    def test_nongeneric_exit_code(self, spec_file):
        from conftest import EXAMPLE_E0, EXAMPLE_E1

        rng = np.random.default_rng(7)
        b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        b[0, 1] = b[1, 0] = b[0, 2] = b[2, 0] = 0
        with pytest.warns(UserWarning):
            spec = PencilSpec.build([b, np.eye(3)], [EXAMPLE_E0, EXAMPLE_E1])
        code, doc = machine(["predict", spec_file(spec)])
        assert code == 2
        assert doc["unresolved_count"] > 0


class TestVerify:
    def test_small_errors_on_example(self, example_file):
        code, doc = machine(["verify", example_file, "--eps", "1e-2,1e-3,1e-4"])
        assert code == 0
        assert doc["max_coeff_error"] < 5e-2
        assert doc["max_exponent_error"] < 1e-2
        assert doc["unmatched"] == []


class TestAssignment:
    def test_pair_and_graphs_at_corner(self, example_file):
        code, doc = machine(["assignment", example_file, "--gamma", "1"])
        assert code == 0
        assert doc["U"] == ["0", "1", "1"]
        assert doc["V"] == ["-1", "0", "0"]
        assert [tuple(a) for a in doc["opt_arcs"]] == sorted(
            {(0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)}
        )

    def test_non_corner_gamma_is_an_error(self, example_file, capsys):
        assert main(["assignment", example_file, "--gamma", "1/2"]) == 1
        assert "not a corner" in capsys.readouterr().err


class TestNajman:
    def test_block_data_run(self, tmp_path):
        doc = {
            "lambdas": [[1.5, -0.5]],
            "zero_blocks": [3],
            "inf_blocks": [2],
            "m": "random:17",
        }
        path = tmp_path / "w.json"
        path.write_text(json.dumps(doc))
        code, out = machine(["najman", str(path)])
        assert code == 0
        assert out["ok"] is True
        assert out["zero_floor"] == 2


class TestErrors:
    def test_missing_file(self, capsys):
        assert main(["corners", "/does/not/exist.json"]) == 1
        assert "error[io]" in capsys.readouterr().err
