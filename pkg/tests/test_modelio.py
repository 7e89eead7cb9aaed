import json
import math

import numpy as np
import pytest

from gainlab import (
    Constant,
    DelayPredictorSystem,
    DelayState,
    NotHurwitzError,
    StateSpaceSystem,
    delay_bounds,
    gain_report,
    l1_impulse_gain,
    simulate,
    simulate_predictor,
    vcurve,
    verify_gain_equality,
)
from gainlab.modelio import (
    bound_document,
    csv_lines,
    delay_bounds_document,
    delay_trajectory_csv,
    dumps_document,
    gain_report_document,
    parse_certificate_bound_input,
    parse_system,
    sweep_csv,
    trajectory_csv,
    vcurve_csv,
    verification_document,
)


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload) if not isinstance(payload, str) else payload)
    return path


class TestParseSystem:
    def test_standard(self, tmp_path):
        path = write(
            tmp_path,
            "sys.json",
            {"A": [[-1.0]], "B": [[1.0]], "C": [[1.0]], "tol": 1e-6, "seed": 3},
        )
        system, extras = parse_system(path)
        assert isinstance(system, StateSpaceSystem)
        assert extras == {"tol": 1e-6, "seed": 3}

    def test_extras_default_none(self, tmp_path):
        path = write(tmp_path, "sys.json", {"A": [[-1.0]], "B": [[1.0]], "C": [[1.0]]})
        _, extras = parse_system(path)
        assert extras == {"tol": None, "seed": None}

    def test_delay_format(self, tmp_path):
        path = write(
            tmp_path,
            "delay.json",
            {
                "A": [[-1.0]],
                "B": [[1.0]],
                "G": [[1.0]],
                "K": [[-0.5]],
                "tau": 0.5,
                "mu": 2.0,
            },
        )
        system, _ = parse_system(path)
        assert isinstance(system, DelayPredictorSystem)
        assert system.tau == 0.5

    def test_partial_delay_keys_rejected(self, tmp_path):
        path = write(
            tmp_path,
            "bad.json",
            {"A": [[-1.0]], "B": [[1.0]], "G": [[1.0]], "K": [[-0.5]], "tau": 0.5},
        )
        with pytest.raises(ValueError, match="mu"):
            parse_system(path)

    def test_missing_matrix(self, tmp_path):
        path = write(tmp_path, "bad.json", {"A": [[-1.0]], "B": [[1.0]]})
        with pytest.raises(ValueError, match="C"):
            parse_system(path)

    def test_ragged_matrix(self, tmp_path):
        path = write(
            tmp_path, "bad.json", {"A": [[-1.0, 0.0], [1.0]], "B": [[1.0]], "C": [[1.0]]}
        )
        with pytest.raises(ValueError, match="ragged or non-numeric"):
            parse_system(path)

    def test_flat_vector_rejected(self, tmp_path):
        path = write(tmp_path, "bad.json", {"A": [-1.0], "B": [[1.0]], "C": [[1.0]]})
        with pytest.raises(ValueError, match="2-d"):
            parse_system(path)

    def test_non_finite_rejected(self, tmp_path):
        path = write(
            tmp_path, "bad.json", '{"A": [[NaN]], "B": [[1.0]], "C": [[1.0]]}'
        )
        with pytest.raises(ValueError, match="non-finite"):
            parse_system(path)

    def test_top_level_list_rejected(self, tmp_path):
        path = write(tmp_path, "bad.json", "[1, 2]")
        with pytest.raises(ValueError, match="object"):
            parse_system(path)

    def test_unstable_diagnostic_names_file(self, tmp_path):
        path = write(
            tmp_path,
            "unstable.json",
            {"A": [[0.0, 1.0], [-1.0, 0.0]], "B": [[0.0], [1.0]], "C": [[1.0, 0.0]]},
        )
        with pytest.raises(NotHurwitzError, match="A is not Hurwitz") as info:
            parse_system(path)
        assert "unstable.json" in str(info.value)

    def test_unstable_delay_diagnostic(self, tmp_path):
        path = write(
            tmp_path,
            "unstable.json",
            {
                "A": [[1.0]],
                "B": [[1.0]],
                "G": [[1.0]],
                "K": [[-0.5]],
                "tau": 0.5,
                "mu": 2.0,
            },
        )
        with pytest.raises(NotHurwitzError, match="A \\+ B K is not Hurwitz"):
            parse_system(path)

    def test_boolean_scalar_rejected(self, tmp_path):
        path = write(
            tmp_path,
            "bad.json",
            {
                "A": [[-1.0]],
                "B": [[1.0]],
                "G": [[1.0]],
                "K": [[-0.5]],
                "tau": True,
                "mu": 2.0,
            },
        )
        with pytest.raises(ValueError, match="tau"):
            parse_system(path)


class TestParseCertificateBoundInput:
    def test_round_trip(self, tmp_path):
        path = write(
            tmp_path,
            "b41.json",
            {
                "certificates": [[2.0, 1.0]],
                "b_samples": [[0.0, 1.0], [1.0, 2.0]],
                "T_grid": [2.0, 4.0],
            },
        )
        data = parse_certificate_bound_input(path)
        assert data.certificates == ((2.0, 1.0),)
        np.testing.assert_array_equal(data.t_grid, [2.0, 4.0])

    def test_missing_key(self, tmp_path):
        path = write(tmp_path, "b41.json", {"certificates": [[2.0, 1.0]]})
        with pytest.raises(ValueError, match="b_samples"):
            parse_certificate_bound_input(path)


class TestDeterministicSerialization:
    def test_fmt_17_digits(self):
        text = dumps_document({"x": 0.1, "n": 3, "flag": True, "none": None})
        assert '"x": 0.10000000000000001' in text
        assert '"n": 3' in text
        assert '"flag": true' in text
        assert '"none": null' in text

    def test_json_round_trip(self, scalar_system):
        rep = gain_report(scalar_system, tol=1e-9)
        doc = gain_report_document(rep)
        text = dumps_document(doc)
        parsed = json.loads(text)
        assert parsed["exact"]["value"] == pytest.approx(1.0, abs=1e-8)
        assert parsed["schema_version"] == 1
        assert parsed["dims"] == {"n": 1, "m": 1, "p": 1}

    def test_byte_determinism(self, oscillator):
        docs = []
        for _ in range(2):
            rep = gain_report(oscillator, tol=1e-8)
            docs.append(dumps_document(gain_report_document(rep)))
        assert docs[0] == docs[1]

    def test_nested_arrays_serialized(self):
        text = dumps_document({"m": np.array([[1.0, 2.0], [3.0, 4.0]])})
        parsed = json.loads(text)
        assert parsed["m"] == [[1.0, 2.0], [3.0, 4.0]]

    def test_verification_document(self, scalar_system):
        record = verify_gain_equality(scalar_system, accuracy=0.05)
        doc = verification_document(record)
        parsed = json.loads(dumps_document(doc))
        assert parsed["passed"] is True
        assert parsed["gamma"] == pytest.approx(1.0, abs=1e-7)

    def test_bound_document(self):
        from gainlab import CertificateBoundInput, certificate_gain_bound

        est = certificate_gain_bound(
            CertificateBoundInput(
                certificates=[(2.0, 1.0)], b_samples=[[0.0, 1.0]], t_grid=[4.0]
            )
        )
        parsed = json.loads(dumps_document(bound_document(est)))
        assert parsed["method"] == "theorem41"
        assert parsed["value"] == pytest.approx(1.0)
        assert len(parsed["details"]["cells"]) == 1

    def test_delay_bounds_document(self, scalar_delay):
        doc = delay_bounds_document(delay_bounds(scalar_delay))
        parsed = json.loads(dumps_document(doc))
        assert parsed["oag_bound"] == pytest.approx(1.0 - math.exp(-0.5) / 6.0, abs=1e-8)
        assert parsed["oag_bound"] < parsed["ios_bound"]


class TestCsv:
    def test_csv_lines_shape(self):
        text = csv_lines(["a", "b"], [[1, 2.5], [3, 4.0]])
        lines = text.strip().split("\n")
        assert lines[0] == "a,b"
        assert lines[1] == "1,2.5"
        assert len(lines) == 3

    def test_trajectory_csv(self, oscillator):
        traj = simulate(oscillator, Constant(u0=[1.0]), np.zeros(2), 1.0, 0.5)
        text = trajectory_csv(traj)
        lines = text.strip().split("\n")
        assert lines[0] == "t,x_1,x_2,y_1"
        assert len(lines) == 1 + traj.times.size

    def test_delay_trajectory_csv(self, scalar_delay):
        from gainlab import Zero, predictor_error_series

        steps = 8
        state = DelayState.resting(scalar_delay, steps)
        traj = simulate_predictor(
            scalar_delay, Zero(dim=1), state, 1.0, scalar_delay.tau / steps
        )
        xi, xi_ref = predictor_error_series(traj, scalar_delay)
        text = delay_trajectory_csv(traj, xi, xi_ref)
        lines = text.strip().split("\n")
        assert lines[0] == "t,y_1,z_1,pred_err_1,pred_err_ref_1"
        assert len(lines) == 1 + traj.times.size

    def test_vcurve_csv(self, scalar_system):
        curve = vcurve(scalar_system, [1.0, 2.0])
        lines = vcurve_csv(curve).strip().split("\n")
        assert lines[0] == "T,V"
        assert len(lines) == 3

    def test_sweep_csv(self):
        lines = sweep_csv([0.1, 1.0], [0.9, 0.7]).strip().split("\n")
        assert lines[0] == "omega,Psi"
        assert lines[1].startswith("0.1")
