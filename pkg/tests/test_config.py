import math
import os
import sys

import orjson
import pytest
from pydantic import ValidationError

# 确保项目根目录在 sys.path 中
CURRENT_DIR = os.path.dirname(os.path.abspath(__file__))
PROJECT_ROOT = os.path.dirname(CURRENT_DIR)
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from holobrack.core import BallParams, Config, IntrinsicParams, get_config, set_config
from holobrack.utils import format_csv, normalize, to_json_bytes, write_csv


@pytest.fixture()
def fresh_config():
    """每个测试结束后恢复全局配置"""
    set_config(None)
    yield
    set_config(None)


@pytest.mark.config
class TestConfig:
    def test_defaults(self):
        config = Config()
        assert config.zero_threshold == 1e-12
        assert config.weak_tolerance == 1e-10
        assert config.max_iter == 10
        assert config.dt == 1e-3
        assert config.float_format == "%.12e"

    def test_from_env(self, monkeypatch, fresh_config):
        monkeypatch.setenv("HOLOBRACK_MAX_ITER", "4")
        monkeypatch.setenv("HOLOBRACK_DT", "0.01")
        monkeypatch.setenv("HOLOBRACK_DEBUG", "true")
        config = get_config()
        assert config.max_iter == 4
        assert config.dt == 0.01
        assert config.debug is True
        assert get_config() is config

    def test_set_config(self, fresh_config):
        custom = Config(max_iter=7)
        set_config(custom)
        assert get_config() is custom
        assert get_config().to_dict()["max_iter"] == 7


@pytest.mark.config
class TestParams:
    def test_ball_defaults(self):
        params = BallParams()
        assert params.phi == pytest.approx(math.pi / 4)
        assert params.inertia_factor == pytest.approx(0.4)
        assert params.sec == pytest.approx(math.sqrt(2.0))

    @pytest.mark.parametrize("field,value", [("m", 0.0), ("R", -1.0), ("g", -9.8), ("phi", math.pi / 2), ("phi", -0.1), ("a", -1.0)])
    def test_ball_rejects(self, field, value):
        with pytest.raises(ValidationError):
            BallParams(**{field: value})

    def test_ball_edge_values_accepted(self):
        assert BallParams(phi=0.0).tan == 0.0
        assert BallParams(g=0.0).g == 0.0

    def test_ball_frozen(self):
        params = BallParams()
        with pytest.raises(ValidationError):
            params.m = 2.0

    def test_intrinsic_scales(self):
        params = IntrinsicParams(M=2.0, f=3.0, hbar=0.5)
        assert params.energy_scale == pytest.approx((0.25 * 9.0 / 4.0) ** (1.0 / 3.0))
        assert params.length_scale == pytest.approx((0.25 / 12.0) ** (1.0 / 3.0))
        assert params.energy_scale == pytest.approx(params.f * params.length_scale)

    def test_intrinsic_rejects(self):
        with pytest.raises(ValidationError):
            IntrinsicParams(M=0.0, f=1.0)


@pytest.mark.config
class TestExport:
    def test_json_sorted_and_rounded(self):
        data = to_json_bytes({"b": 1.0 / 3.0, "a": [1, 2.5], ("x", "Px"): 2.0})
        text = data.decode()
        assert text.index('"a"') < text.index('"b"')
        parsed = orjson.loads(data)
        assert parsed["b"] == float("%.12e" % (1.0 / 3.0))
        assert parsed["x,Px"] == 2.0
        assert data.endswith(b"\n")

    def test_json_special_values(self):
        parsed = orjson.loads(to_json_bytes({"c": 1j, "nan": float("nan"), "params": BallParams()}))
        assert parsed["c"] == {"re": 0.0, "im": 1.0}
        assert parsed["nan"] is None
        assert parsed["params"]["a"] == 2.0

    def test_normalize_rejects_unknown(self):
        with pytest.raises(TypeError):
            normalize({"x": object()})

    def test_csv(self, tmp_path):
        path = write_csv(tmp_path / "sub" / "t.csv", ["t", "x"], [[0.0, 1.5], [0.1, 2]])
        content = path.read_bytes()
        assert content == b"t,x\n0.000000000000e+00,1.500000000000e+00\n1.000000000000e-01,2\n"

    def test_csv_row_length(self):
        with pytest.raises(ValueError):
            format_csv(["a", "b"], [[1.0]])
