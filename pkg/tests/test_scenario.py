import math
import textwrap

import numpy as np
import pytest

from lrdecoherence.errors import ScenarioError
from lrdecoherence.protocol import Linear, Sampled, Sinusoid, Winding
from lrdecoherence.scenario import DEFAULT_TOLERANCES, load_scenario, parse_number

BASE = """
[scenario]
name = t
T = 2
{extra}

[algebra]
j = 1

[branch a]
omega = 1
theta = pi/3
phi = 0
"""


def write(tmp_path, text, name="s.ini"):
    p = tmp_path / name
    p.write_text(textwrap.dedent(text))
    return str(p)


def base(tmp_path, extra="", tail=""):
    return write(tmp_path, BASE.format(extra=extra) + tail)


def test_numbers():
    assert parse_number("pi/3", "k") == pytest.approx(math.pi / 3)
    assert parse_number("-2*pi + 0.5", "k") == pytest.approx(-2 * math.pi + 0.5)
    assert parse_number("3**0.5", "k") == pytest.approx(math.sqrt(3))
    assert parse_number("0.5 + 0.25j", "k", allow_complex=True) == 0.5 + 0.25j
    for bad in ("__import__('os')", "1/0", "abs(1)", "x", "1j"):
        with pytest.raises(ScenarioError, match="k"):
            parse_number(bad, "k")


def test_defaults(tmp_path, monkeypatch):
    monkeypatch.delenv("LRDECOHERENCE_OUTPUT_DIR", raising=False)
    scn = load_scenario(base(tmp_path))
    assert scn.mode == "integrated" and scn.routes == ("matrix-element",)
    assert scn.pair == ("a", "a") and scn.mu == 1.0 and scn.lam == 1.0
    assert scn.tolerances == DEFAULT_TOLERANCES
    assert scn.output.endswith("t")
    assert scn.inits["a"] is None
    assert scn.representation().dim == 3


def test_function_kinds(tmp_path):
    tail = """
    [branch b]
    omega = sinusoid 1 0.2 0.3 0.1
    theta = linear 0.5 0.01
    phi = winding 0.2
    a0 = 0.6
    b0 = 0.1

    [branch c]
    omega = constant 2
    theta = sampled
    theta.times = 0, 1, 2
    theta.values = 0.5 0.6 0.55
    phi = 0
    """
    scn = load_scenario(base(tmp_path, tail=textwrap.dedent(tail)))
    b, c = scn.branches["b"], scn.branches["c"]
    assert isinstance(b.omega, Sinusoid) and isinstance(b.theta, Linear) and isinstance(b.phi, Winding)
    assert isinstance(c.theta, Sampled)
    assert tuple(scn.inits["b"]) == (0.6, 0.1)


@pytest.mark.parametrize(
    "extra,tail,key",
    [
        ("T = -1", "", "T"),
        ("mode = sideways", "", "mode"),
        ("routes = matrix-element, psychic", "", "routes"),
        ("step = 0", "", "step"),
        ("pair = a, zz", "", "pair"),
        ("mu = 0.5", "", "mu"),
        ("", "[tolerances]\nfoo = 1\n", "foo"),
        ("", "[tolerances]\ncommutator = -1\n", "commutator"),
        ("", "[branch b]\nomega = 1\ntheta = wiggle 1 2\nphi = 0\n", "theta"),
        ("", "[branch b]\nomega = 1\ntheta = linear 1\nphi = 0\n", "theta"),
        ("", "[branch b]\nomega = 1\nphi = 0\n", "theta"),
        ("", "[branch b]\nomega = 1\ntheta = 1\nphi = 0\na0 = 1\n", "a0"),
        ("", "[branch b]\nomega = 1\ntheta = sampled\nphi = 0\n", "theta.times"),
        ("", "[scan]\njmax = 0.3\n", "jmax"),
    ],
)
def test_errors_name_the_key(tmp_path, extra, tail, key):
    with pytest.raises(ScenarioError) as info:
        load_scenario(base(tmp_path, extra, tail))
    assert key in str(info.value)


def test_bad_algebra(tmp_path):
    text = BASE.format(extra="").replace("j = 1", "j = 1\nm = 1\nn = -2")
    with pytest.raises(ScenarioError, match="non-compact"):
        load_scenario(write(tmp_path, text))
    text = BASE.format(extra="").replace("j = 1", "j = 0.7")
    with pytest.raises(ScenarioError, match="j"):
        load_scenario(write(tmp_path, text))


def test_missing_file_and_section(tmp_path):
    with pytest.raises(ScenarioError, match="not found"):
        load_scenario(str(tmp_path / "nope.ini"))
    with pytest.raises(ScenarioError, match="scenario"):
        load_scenario(write(tmp_path, "[algebra]\nj = 1\n"))
    with pytest.raises(ScenarioError, match="branch"):
        load_scenario(write(tmp_path, "[scenario]\nT = 1\n"))


def test_duplicate_label_rejected(tmp_path):
    text = BASE.format(extra="") + "\n[branch  a]\nomega = 1\ntheta = 1\nphi = 0\n"
    with pytest.raises(ScenarioError):
        load_scenario(write(tmp_path, text))


def test_env_output_override(tmp_path, monkeypatch):
    monkeypatch.setenv("LRDECOHERENCE_OUTPUT_DIR", str(tmp_path / "elsewhere"))
    assert load_scenario(base(tmp_path)).output == str(tmp_path / "elsewhere")


def test_cini_section(tmp_path):
    text = """
    [scenario]
    T = 1

    [cini]
    omega1 = 1.5
    omega2 = 0.5
    n1 = 2
    n2 = 1

    [level 0]
    energy = 0
    coupling = 0.3 + 0.1j

    [level 1]
    energy = 1
    coupling_re = linear 0.2 0.1
    coupling_im = 0
    """
    scn = load_scenario(write(tmp_path, text))
    assert scn.mode == "adiabatic"
    assert scn.j == 1.5 and scn.pair == ("0", "1")
    assert float(scn.offsets["0"].value(0.0)) == pytest.approx(1.5 * 2.0)
    assert float(scn.branches["0"].phi.value(0.0)) == pytest.approx(-np.arctan2(0.1, 0.3))
    assert not scn.branches["1"].is_constant


def test_degenerate_cini_level(tmp_path):
    text = """
    [scenario]
    T = 1
    [cini]
    omega1 = 1
    omega2 = 1
    n1 = 1
    n2 = 1
    [level 0]
    energy = 0
    coupling = 0
    """
    with pytest.raises(ScenarioError, match="level 0"):
        load_scenario(write(tmp_path, text))
