"""Tests for scenario validation, report serialization, settings and chunking helpers."""

import math
from fractions import Fraction

import numpy as np
import orjson
import polars as pl
import pytest
from pydantic import ValidationError

from weyltube.config.settings import WeylTubeSettings, get_settings
from weyltube.exceptions import WeylTubeConfigurationError, WeylTubeDataError, WeylTubeValidationError
from weyltube.models import (
    DomainSpec,
    MonteCarloEstimate,
    Scenario,
    TubeReport,
    VerificationSummary,
    VolumeSeries,
)
from weyltube.models.reports import CheckResult
from weyltube.utils.sample_slicer import map_chunks, sample_chunks, slice_sample_range
from weyltube.utils.serialization import (
    dumps,
    format_fraction,
    parse_fraction,
    read_json,
    to_jsonable,
    write_csv,
    write_json,
)


def sphere_scenario(**overrides):
    payload = {
        "manifold": {"name": "sphere", "params": {"R": 2.0}},
        "domain": {"kind": "interval"},
        "radii": [0.1, 0.2],
    }
    payload.update(overrides)
    return payload


def small_report(**overrides):
    fields = dict(
        manifold="sphere",
        domain="interval",
        domain_kind="ball",
        n=2,
        m=1,
        radii=[0.1, 0.2],
        domain_volume=2.0,
        extrinsic=VolumeSeries(path="extrinsic", volumes=[1.0, 2.0]),
        intrinsic=VolumeSeries(path="intrinsic", volumes=[1.0, 2.002]),
    )
    fields.update(overrides)
    return TubeReport(**fields)


class TestScenario:
    def test_builds_embedding_and_domain(self):
        scenario = Scenario.model_validate(sphere_scenario())
        assert scenario.embedding.name == "sphere"
        assert (scenario.embedding.n, scenario.embedding.m) == (2, 1)
        assert scenario.domain_object.m == 1
        assert scenario.paths == ["extrinsic", "intrinsic"]

    @pytest.mark.parametrize("radii", [[-0.1], [0.1, 0.0]])
    def test_rejects_non_positive_radii(self, radii):
        with pytest.raises(ValidationError) as exc_info:
            Scenario.model_validate(sphere_scenario(radii=radii))
        assert exc_info.value.errors()[0]["loc"] == ("radii",)

    def test_rejects_empty_radii(self):
        with pytest.raises(ValidationError):
            Scenario.model_validate(sphere_scenario(radii=[]))

    def test_domain_must_match_codimension(self):
        with pytest.raises(ValidationError) as exc_info:
            Scenario.model_validate(sphere_scenario(domain={"kind": "cube", "m": 2}))
        assert "codimension" in str(exc_info.value)

    def test_monte_carlo_path_needs_block(self):
        with pytest.raises(ValidationError) as exc_info:
            Scenario.model_validate(sphere_scenario(paths=["extrinsic", "monte_carlo"]))
        assert "mc block" in str(exc_info.value)

    def test_monte_carlo_block(self):
        scenario = Scenario.model_validate(
            sphere_scenario(paths=["monte_carlo"], mc={"samples": 10_000, "seed": 3})
        )
        assert scenario.mc.seed == 3
        assert scenario.mc.chunk_size is None

    def test_lorentzian_signature_applied(self):
        scenario = Scenario.model_validate(
            {
                "manifold": {"name": "graph2d", "params": {}},
                "domain": {"kind": "interval"},
                "signature": "lorentzian",
                "radii": [0.05],
            }
        )
        assert scenario.embedding.signature.is_lorentzian

    def test_unknown_domain_kind(self):
        with pytest.raises(ValidationError):
            Scenario.model_validate(sphere_scenario(domain={"kind": "torus"}))


class TestDomainSpec:
    @pytest.mark.parametrize(
        "spec, m, label_kind",
        [
            ({"kind": "interval"}, 1, "ball"),
            ({"kind": "ball", "m": 3}, 3, "ball"),
            ({"kind": "cube", "m": 2}, 2, "cube"),
            ({"kind": "diamond", "m": 3}, 3, "diamond"),
            ({"kind": "regular_polygon", "k": 6}, 2, "regular_polygon"),
            ({"kind": "cone_ball", "m": 3, "b": 0.5}, 3, "cone_ball"),
            ({"kind": "radial2d", "constant": 1.0, "modes": [[4, 0.1, 0.0]]}, 2, "radial2d"),
            ({"kind": "radial2d", "n": 2, "p": 3, "q": 16}, 2, "radial2d"),
        ],
    )
    def test_build(self, spec, m, label_kind):
        model = DomainSpec(**spec)
        domain = model.build()
        assert domain.m == m == model.dimension
        assert domain.kind == label_kind

    @pytest.mark.parametrize(
        "spec, field",
        [
            ({"kind": "regular_polygon"}, "domain.k"),
            ({"kind": "cube"}, "domain.m"),
            ({"kind": "cone_ball", "m": 2}, "domain.b"),
            ({"kind": "radial2d", "p": 3}, "domain.n"),
        ],
    )
    def test_missing_parameters(self, spec, field):
        with pytest.raises(WeylTubeValidationError) as exc_info:
            DomainSpec(**spec).build()
        assert exc_info.value.field == field

    def test_rejects_monte_carlo_kind(self):
        with pytest.raises(ValidationError):
            DomainSpec(kind="monte_carlo")


class TestReports:
    def test_path_discrepancy(self):
        report = small_report()
        assert report.path_discrepancy() == pytest.approx(0.002 / 2.002)
        assert small_report(intrinsic=None).path_discrepancy() is None

    def test_csv_rows(self):
        estimate = MonteCarloEstimate(
            radius=0.2, estimate=2.01, stderr=0.01, samples=1000, hits=100, seed=1, box_volume=20.0
        )
        rows = small_report(monte_carlo=[estimate]).csv_rows()
        assert rows[0] == {"radius": 0.1, "V_extrinsic": 1.0, "V_intrinsic": 1.0, "V_mc": None, "stderr": None}
        assert rows[1]["V_mc"] == 2.01
        assert rows[1]["stderr"] == 0.01

    def test_json_is_sorted_and_deterministic(self):
        report = small_report()
        data = report.to_json_bytes()
        assert data == small_report().to_json_bytes()
        keys = list(orjson.loads(data).keys())
        assert keys == sorted(keys)
        assert orjson.loads(data)["domain_kind"] == "ball"

    def test_monte_carlo_estimate_bounds(self):
        with pytest.raises(ValidationError):
            MonteCarloEstimate(radius=-1.0, estimate=0.0, stderr=0.0, samples=1, hits=0, seed=0, box_volume=1.0)

    def test_verification_summary(self):
        summary = VerificationSummary(
            checks=[
                CheckResult(name="a", category="x", status="pass", expected="1", actual="1"),
                CheckResult(name="b", category="x", status="fail", expected="1", actual="2"),
            ]
        )
        assert (summary.passed, summary.failed, summary.all_passed) == (1, 1, False)
        table = summary.table()
        assert "1 passed, 1 failed" in table
        assert "b" in table.splitlines()[2]


class TestSerialization:
    @pytest.mark.parametrize(
        "value, expected",
        [(Fraction(1, 3), "1/3"), (Fraction(-4, 2), "-2"), (Fraction(0), "0")],
    )
    def test_format_fraction(self, value, expected):
        assert format_fraction(value) == expected

    def test_parse_fraction(self):
        assert parse_fraction("4/15") == Fraction(4, 15)
        with pytest.raises(WeylTubeDataError):
            parse_fraction("four fifteenths")

    def test_to_jsonable(self):
        payload = {
            "ratio": Fraction(2, 15),
            "array": np.array([1.5, 2.0]),
            "scalar": np.float64(0.25),
            "bound": math.inf,
            1: (1, 2),
        }
        assert to_jsonable(payload) == {
            "ratio": "2/15",
            "array": [1.5, 2.0],
            "scalar": 0.25,
            "bound": "inf",
            "1": [1, 2],
        }

    def test_dumps_sorts_keys(self):
        assert dumps({"b": 1, "a": 2}).index(b'"a"') < dumps({"b": 1, "a": 2}).index(b'"b"')

    def test_json_file_round(self, tmp_path):
        path = write_json(small_report(), tmp_path / "out" / "report.json")
        payload = read_json(path)
        assert TubeReport.model_validate(payload) == small_report()

    def test_read_json_errors(self, tmp_path):
        with pytest.raises(WeylTubeDataError):
            read_json(tmp_path / "missing.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(WeylTubeDataError):
            read_json(bad)
        array = tmp_path / "array.json"
        array.write_text("[1, 2]")
        with pytest.raises(WeylTubeDataError):
            read_json(array)

    def test_write_csv(self, tmp_path):
        rows = small_report().csv_rows()
        path = write_csv(rows, tmp_path / "volumes.csv", ["radius", "V_extrinsic", "V_intrinsic", "V_mc", "stderr"])
        frame = pl.read_csv(path)
        assert frame.columns == ["radius", "V_extrinsic", "V_intrinsic", "V_mc", "stderr"]
        assert frame["V_extrinsic"].to_list() == [1.0, 2.0]
        assert frame["V_mc"].null_count() == 2


class TestSettings:
    def test_defaults(self):
        settings = get_settings()
        assert settings.threads == 1
        assert settings.log_format in ("json", "human")

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("WEYLTUBE_THREADS", "4")
        monkeypatch.setenv("WEYLTUBE_TRAPEZOID_NODES", "33")
        settings = WeylTubeSettings()
        assert settings.threads == 4
        assert settings.trapezoid_nodes == 34

    def test_unknown_log_format_falls_back(self):
        assert WeylTubeSettings(log_format="xml").log_format == "json"

    def test_rejects_bad_level(self):
        with pytest.raises(ValidationError):
            WeylTubeSettings(log_level="LOUD")

    def test_invalid_environment_is_a_configuration_error(self, monkeypatch):
        monkeypatch.setenv("WEYLTUBE_THREADS", "0")
        get_settings.cache_clear()
        with pytest.raises(WeylTubeConfigurationError) as exc_info:
            get_settings()
        assert exc_info.value.config_key == "threads"


class TestSampleSlicer:
    def test_slice_sample_range(self):
        assert slice_sample_range(10, 4) == [(0, 4), (4, 8), (8, 10)]

    @pytest.mark.parametrize("total, chunk", [(0, 4), (10, 0)])
    def test_slice_rejects_non_positive(self, total, chunk):
        with pytest.raises(ValueError):
            slice_sample_range(total, chunk)

    def test_chunks_are_reproducible(self):
        first = [c.generator().random(3) for c in sample_chunks(25, seed=9, max_chunk=10)]
        second = [c.generator().random(3) for c in sample_chunks(25, seed=9, max_chunk=10)]
        assert all(np.array_equal(a, b) for a, b in zip(first, second))
        assert not np.array_equal(first[0], first[1])

    @pytest.mark.parametrize("threads", [None, 1, 3])
    def test_map_chunks_preserves_order(self, threads):
        assert map_chunks(lambda x: x * x, list(range(7)), threads) == [0, 1, 4, 9, 16, 25, 36]
