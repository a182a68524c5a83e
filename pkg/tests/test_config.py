import pytest
from hypothesis import given, settings, strategies as st

from ringvortex.config import ConfigError, parse_config, with_value

MIN = "mode = minimize\nR = 2\nn = 1\nP0 = 1.0\n"


def test_defaults():
    c = parse_config(MIN)
    assert (c.N, c.s, c.M) == (1024, 1, 41)
    assert c.potential.kind == "zero"
    assert c.beta is None


def test_comments_and_overrides():
    c = parse_config("# header\n" + MIN + "N = 64  # coarse\n", {"N": 128, "R": None})
    assert c.N == 128 and c.R == 2.0


@pytest.mark.parametrize("text,where", [
    ("mode = mountainpass\nR = 1\nn = 1\n", "mountainpass needs beta"),
    (MIN + "bogus = 1\n", "cfg:5: unknown key"),
    (MIN + "R = 3\n", "cfg:5: duplicate key"),
    ("mode = minimize\nR = -1\nn = 1\nP0 = 1\n", "cfg:2"),
    ("mode = minimize\nR = 1\nn = 0\nP0 = 1\n", "cfg:3"),
    (MIN + "s = 2\n", "cfg:5"),
    (MIN + "beta = 1\n", "cfg:5"),
    (MIN + "potential = harmonic\n", "cfg:5"),
    (MIN + "potential = constant\n", "needs 'potential.value'"),
    ("mode = minimize\nR\n", "cfg:2: expected"),
    ("mode = minimize\nR = 1\nn = 1.5\nP0 = 1\n", "cfg:3: invalid value"),
    ("mode = minimize\nR = nan\nn = 1\nP0 = 1\n", "cfg:2: invalid value"),
    ("mode = mountainpass\nR = 1\nn = 1\nbeta = 1\ns = -1\n", r"cfg:5: .*s = \+1 only"),
])
def test_errors_are_line_anchored(text, where):
    with pytest.raises(ConfigError, match=where):
        parse_config(text, source="cfg")


def test_mode_conflict():
    with pytest.raises(ConfigError, match="conflicts"):
        parse_config(MIN, mode="check")


def test_beta_below_v0plus_warns():
    c = parse_config("mode = mountainpass\nR = 1\nn = 1\nbeta = 1\npotential = constant\n"
                     "potential.value = 2\n")
    assert any("hypothesis" in w for w in c.warnings)


def test_potentials_parse():
    c = parse_config(MIN + "potential = tabulated\npotential.r = 0, 1, 2\npotential.V = 1, 0, 1\n")
    assert c.potential.r_table == (0.0, 1.0, 2.0)
    with pytest.raises(ConfigError, match="cover"):
        parse_config(MIN + "potential = tabulated\npotential.r = 0, 1\npotential.V = 1, 0\n")
    c = parse_config(MIN + "potential = bessel_j1_sq\npotential.p = 2\npotential.b = 3\n")
    assert (c.potential.p, c.potential.b) == (2.0, 3.0)


def test_sweep():
    c = parse_config("mode = sweep\nR = 1\nn = 1\nP0 = 1\nsweep.param = n\nsweep.start = 1\n"
                     "sweep.stop = 6\nsweep.count = 6\n")
    assert c.sweep.values == (1, 2, 3, 4, 5, 6)
    one = with_value(c, "n", 4)
    assert one.mode == "minimize" and one.n == 4 and one.sweep is None
    with pytest.raises(ConfigError, match="only valid in sweep"):
        parse_config(MIN + "sweep.param = n\n")


@settings(max_examples=50, deadline=None)
@given(R=st.floats(0.1, 10), n=st.integers(-5, 5).filter(bool), P0=st.floats(1e-3, 50),
       N=st.integers(2, 4096))
def test_valid_configs_roundtrip(R, n, P0, N):
    text = f"mode = minimize\nR = {R!r}\nn = {n}\nP0 = {P0!r}\nN = {N}\n"
    c = parse_config(text)
    assert (c.R, c.n, c.P0, c.N) == (R, n, P0, N)
    d = c.to_dict()
    assert d["R"] == R and d["potential"] == {"kind": "zero"}
