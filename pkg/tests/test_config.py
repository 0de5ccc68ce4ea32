"""Configuration parsing and validation."""

import json

import pytest

from oamgrav import ExperimentConfig, config_from_dict, load_config
from oamgrav.config import (
    EvolveSection,
    LsymbolsSection,
    ModesSection,
    MonteCarloSection,
    QuadratureSection,
    SweepSection,
)
from oamgrav.errors import InvalidParameterError


class TestDefaults:
    def test_empty_dict_gives_defaults(self):
        assert config_from_dict({}) == ExperimentConfig()

    def test_partial_sections_keep_other_defaults(self):
        cfg = config_from_dict({"beam": {"w0": 0.002}})
        assert cfg.beam.w0 == 0.002
        assert cfg.beam.k == ExperimentConfig().beam.k
        assert cfg.dimensions == (3, 5, 7, 11, 19)

    def test_canonical_json_is_sorted_and_stable(self):
        cfg = ExperimentConfig()
        text = cfg.canonical_json()
        assert json.loads(text) == cfg.to_dict()
        assert text == json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"))
        assert " " not in text.split('"output_dir"')[0][:40]


class TestUnknownKeys:
    def test_top_level(self):
        with pytest.raises(InvalidParameterError):
            config_from_dict({"beams": {}})

    def test_inside_a_section(self):
        with pytest.raises(InvalidParameterError):
            config_from_dict({"beam": {"k": 5.0, "waist": 1.0}})

    def test_non_object_section(self):
        with pytest.raises(InvalidParameterError):
            config_from_dict({"beam": [5.0, 1.0]})

    def test_non_object_root(self):
        with pytest.raises(InvalidParameterError):
            config_from_dict([1, 2, 3])


class TestSectionValidation:
    def test_sweep(self):
        with pytest.raises(InvalidParameterError):
            SweepSection(start=-0.1)
        with pytest.raises(InvalidParameterError):
            SweepSection(start=1.0, stop=1.0)
        with pytest.raises(InvalidParameterError):
            SweepSection(count=1)
        assert SweepSection(0.0, 3.0, 61).values().shape == (61,)

    def test_monte_carlo(self):
        with pytest.raises(InvalidParameterError):
            MonteCarloSection(n_realizations=99)
        with pytest.raises(InvalidParameterError):
            MonteCarloSection(grid_spacing=0.0)
        with pytest.raises(InvalidParameterError):
            MonteCarloSection(dimension=4)
        with pytest.raises(InvalidParameterError):
            MonteCarloSection(checkpoints=())
        with pytest.raises(InvalidParameterError):
            MonteCarloSection(checkpoints=(0.0,))
        with pytest.raises(InvalidParameterError):
            MonteCarloSection(elements=((1, -1, 0),))
        with pytest.raises(InvalidParameterError):
            MonteCarloSection(dimension=3, elements=((2, 0, 0, 0),))

    def test_quadrature(self):
        with pytest.raises(InvalidParameterError):
            QuadratureSection(extent=0.0)
        with pytest.raises(InvalidParameterError):
            QuadratureSection(nodes=1)

    def test_modes(self):
        with pytest.raises(InvalidParameterError):
            ModesSection(grid_points=8)
        with pytest.raises(InvalidParameterError):
            ModesSection(extent=0.0)

    def test_lsymbols(self):
        with pytest.raises(InvalidParameterError):
            LsymbolsSection(max_azimuthal=-1)
        with pytest.raises(InvalidParameterError):
            LsymbolsSection(method="montecarlo")

    def test_evolve(self):
        with pytest.raises(InvalidParameterError):
            EvolveSection(x3=-1.0)
        with pytest.raises(InvalidParameterError):
            EvolveSection(dimension=26)

    def test_dimensions(self):
        with pytest.raises(InvalidParameterError):
            config_from_dict({"dimensions": []})
        with pytest.raises(InvalidParameterError):
            config_from_dict({"dimensions": [4]})
        with pytest.raises(InvalidParameterError):
            config_from_dict({"dimensions": "all"})

    def test_output_dir(self):
        with pytest.raises(InvalidParameterError):
            config_from_dict({"output_dir": ""})


class TestLoadConfig:
    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidParameterError):
            load_config(str(tmp_path / "nope.json"))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(InvalidParameterError):
            load_config(str(path))

    def test_roundtrip(self, tmp_path):
        cfg = ExperimentConfig()
        path = tmp_path / "config.json"
        path.write_text(json.dumps(cfg.to_dict()), encoding="utf-8")
        assert load_config(str(path)) == cfg
