"""
Scenario files: ``[section]`` headers with ``key = value`` lines.

Grammar
-------
Comments start with ``#`` or ``;``. Numbers may be plain floats or simple
arithmetic in ``pi`` (``pi/3``, ``-2*pi``, ``0.5*pi + 0.1``).

A time function is either a number (constant) or ``<kind> <params...>``::

    constant c
    linear   c0 c1                  # c0 + c1 t
    sinusoid c0 c1 c2 [c3]          # c0 + c1 sin(c2 t + c3)
    winding  c1                     # c1 t
    sampled                         # with <key>.times and <key>.values lists

Sections
--------
``[scenario]``   name, T, step, oracle_step, mode, routes, pair, mu, output,
                 debug_trajectories
``[algebra]``    m, n, j
``[branch X]``   omega, theta, phi, optional a0, b0 (one per branch label X)
``[cini]``       omega1, omega2, n1, n2 (replaces [algebra] and [branch])
``[level K]``    energy, coupling (complex literal) or coupling_re/coupling_im
``[scan]``       delta, jmax
``[tolerances]`` overrides for the verification thresholds
"""

import ast
import configparser
from dataclasses import dataclass, field
import math
import operator
import os

from .algebra import SU2, AlgebraSpec, as_half_integer, build_representation
from .auxiliary import AuxiliaryState
from .cini import CiniLevel, CiniModel, branch_protocol, reduce_to_sector
from .decoherence import ROUTES
from .errors import NonCompactAlgebraError, ScenarioError
from .protocol import Constant, Linear, Protocol, Sampled, Sinusoid, Winding

MODES = ("integrated", "adiabatic", "stationary")

DEFAULT_TOLERANCES = {
    "commutator": 1e-13,
    "invariant_residual": 1e-6,
    "invariant_to_generator": 1e-11,
    "hv_offdiagonal": 1e-5,
    "hv_coefficient": 1e-5,
    "oracle_overlap": 1e-6,
    "overlap_vs_factor": 1e-5,
    "abs_F_bound": 1e-10,
    "hermitian_symmetry": 1e-12,
    "closed_form": 1e-12,
    "scan_fit": 1e-9,
}

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
        return node.value
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        return _UNARY[type(node.op)](_eval_node(node.operand))
    raise ValueError("unsupported expression")


def parse_number(text, key, allow_complex=False):
    try:
        value = _eval_node(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise ScenarioError(key, f"cannot parse number {text!r}") from None
    if isinstance(value, complex) and not allow_complex:
        raise ScenarioError(key, f"expected a real number, got {text!r}")
    value = complex(value) if allow_complex else float(value)
    if not all(math.isfinite(x) for x in ((value.real, value.imag) if allow_complex else (value,))):
        raise ScenarioError(key, "value must be finite")
    return value


def _number_list(text, key):
    return [parse_number(tok, key) for tok in text.replace(",", " ").split()]


def parse_function(section, key):
    """Parse ``section[key]`` into a ScalarFunction."""
    where = f"[{section.name}] {key}"
    raw = section[key].strip()
    parts = raw.split()
    kind = parts[0].lower()
    if kind not in ("constant", "linear", "sinusoid", "winding", "sampled"):
        if len(parts) > 1 and parts[0].isidentifier():
            raise ScenarioError(where, f"unknown function kind {parts[0]!r}")
        return Constant(parse_number(raw, where))
    params = [parse_number(tok, where) for tok in parts[1:]]
    arity = {"constant": (1,), "linear": (2,), "sinusoid": (3, 4), "winding": (1,), "sampled": (0,)}[kind]
    if len(params) not in arity:
        raise ScenarioError(where, f"{kind} takes {' or '.join(map(str, arity))} parameters, got {len(params)}")
    if kind == "constant":
        return Constant(*params)
    if kind == "linear":
        return Linear(*params)
    if kind == "sinusoid":
        return Sinusoid(*params)
    if kind == "winding":
        return Winding(*params)
    for sub in ("times", "values"):
        if f"{key}.{sub}" not in section:
            raise ScenarioError(f"[{section.name}] {key}.{sub}", "required for a sampled function")
    try:
        return Sampled(_number_list(section[f"{key}.times"], f"[{section.name}] {key}.times"),
                       _number_list(section[f"{key}.values"], f"[{section.name}] {key}.values"))
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(f"[{section.name}] {key}.times", str(exc)) from None


@dataclass
class Scenario:
    name: str
    T: float
    step: float | None
    oracle_step: float | None
    mode: str
    routes: tuple
    spec: AlgebraSpec
    j: float
    branches: dict
    inits: dict
    pair: tuple
    mu: float
    output: str
    debug_trajectories: bool = False
    cini: CiniModel | None = None
    offsets: dict = field(default_factory=dict)
    scan_delta: float | None = None
    scan_jmax: float | None = None
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    source: str = ""

    @property
    def lam(self) -> float:
        return self.spec.m * self.mu

    def representation(self):
        return build_representation(self.spec, self.j)


def _get(section, key, default=None, required=False):
    if key in section:
        return section[key]
    if required:
        raise ScenarioError(f"[{section.name}] {key}", "missing required key")
    return default


def load_scenario(path) -> Scenario:
    """Parse and validate a scenario file; raises ScenarioError naming the bad key."""
    if not os.path.isfile(path):
        raise ScenarioError("config", f"file not found: {path}")
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    cp.optionxform = str
    try:
        with open(path) as f:
            cp.read_file(f)
    except configparser.Error as exc:
        raise ScenarioError("config", f"parse error: {exc}") from None
    return scenario_from_config(cp, source=str(path))


def scenario_from_config(cp, source="") -> Scenario:
    if "scenario" not in cp:
        raise ScenarioError("[scenario]", "missing section")
    sc = cp["scenario"]
    name = _get(sc, "name", os.path.splitext(os.path.basename(source))[0] or "scenario")
    T = parse_number(_get(sc, "T", required=True), "[scenario] T")
    if not T > 0:
        raise ScenarioError("[scenario] T", "must be positive")
    step = _get(sc, "step")
    step = None if step is None else parse_number(step, "[scenario] step")
    if step is not None and not step > 0:
        raise ScenarioError("[scenario] step", "must be positive")
    oracle_step = _get(sc, "oracle_step")
    oracle_step = None if oracle_step is None else parse_number(oracle_step, "[scenario] oracle_step")
    if oracle_step is not None and not oracle_step > 0:
        raise ScenarioError("[scenario] oracle_step", "must be positive")

    is_cini = "cini" in cp
    mode = _get(sc, "mode", "adiabatic" if is_cini else "integrated").strip().lower()
    if mode not in MODES:
        raise ScenarioError("[scenario] mode", f"must be one of {', '.join(MODES)}")
    routes = tuple(r.strip() for r in _get(sc, "routes", "matrix-element").split(",") if r.strip())
    for r in routes:
        if r not in ROUTES:
            raise ScenarioError("[scenario] routes", f"unknown route {r!r}; choose from {', '.join(ROUTES)}")
    if "matrix-element" not in routes:
        routes = ("matrix-element",) + routes

    branches, inits, offsets = {}, {}, {}
    cini = None
    if is_cini:
        cini, spec, j = _parse_cini(cp)
        for k in range(len(cini.levels)):
            try:
                p, off = branch_protocol(reduce_to_sector(cini, k), T)
            except ValueError as exc:
                raise ScenarioError(f"[level {k}]", str(exc)) from None
            branches[str(k)] = p
            inits[str(k)] = None
            offsets[str(k)] = off
    else:
        spec, j = _parse_algebra(cp)
        for sec_name in cp.sections():
            if not sec_name.startswith("branch"):
                continue
            parts = sec_name.split(None, 1)
            if len(parts) != 2 or parts[0] != "branch":
                raise ScenarioError(f"[{sec_name}]", "branch sections are written [branch <label>]")
            label = parts[1].strip()
            if label in branches:
                raise ScenarioError(f"[{sec_name}]", f"duplicate branch label {label!r}")
            sec = cp[sec_name]
            funcs = {}
            for key in ("omega", "theta", "phi"):
                _get(sec, key, required=True)
                funcs[key] = parse_function(sec, key)
            branches[label] = Protocol(funcs["omega"], funcs["theta"], funcs["phi"], T, label)
            if ("a0" in sec) != ("b0" in sec):
                raise ScenarioError(f"[{sec_name}] a0", "a0 and b0 must be given together")
            inits[label] = (
                AuxiliaryState(parse_number(sec["a0"], f"[{sec_name}] a0"), parse_number(sec["b0"], f"[{sec_name}] b0"))
                if "a0" in sec else None
            )
        if not branches:
            raise ScenarioError("[branch]", "scenario defines no branches")

    labels = list(branches)
    pair_raw = _get(sc, "pair")
    if pair_raw is None:
        pair = (labels[0], labels[1] if len(labels) > 1 else labels[0])
    else:
        pair = tuple(x.strip() for x in pair_raw.split(","))
        if len(pair) != 2 or any(x not in branches for x in pair):
            raise ScenarioError("[scenario] pair", f"must name two branch labels from {labels}")

    mu_raw = _get(sc, "mu")
    mu = float(j) if mu_raw is None else parse_number(mu_raw, "[scenario] mu")
    if abs(2 * mu - round(2 * mu)) > 1e-9 or abs(mu) > j + 1e-9 or abs((j - mu) - round(j - mu)) > 1e-9:
        raise ScenarioError("[scenario] mu", f"must be a weight of spin {j:g}")

    output = os.environ.get("LRDECOHERENCE_OUTPUT_DIR") or _get(sc, "output", os.path.join("out", name))
    debug = _get(sc, "debug_trajectories", "false").strip().lower() in ("1", "true", "yes", "on")

    scan_delta = scan_jmax = None
    if "scan" in cp:
        s = cp["scan"]
        if "delta" in s:
            scan_delta = parse_number(s["delta"], "[scan] delta")
        if "jmax" in s:
            scan_jmax = parse_number(s["jmax"], "[scan] jmax")
            try:
                as_half_integer(scan_jmax)
            except ValueError:
                raise ScenarioError("[scan] jmax", "must be a positive half-integer") from None

    tolerances = dict(DEFAULT_TOLERANCES)
    if "tolerances" in cp:
        for key, raw in cp["tolerances"].items():
            if key not in DEFAULT_TOLERANCES:
                raise ScenarioError(f"[tolerances] {key}", f"unknown tolerance; known: {', '.join(DEFAULT_TOLERANCES)}")
            val = parse_number(raw, f"[tolerances] {key}")
            if not val > 0:
                raise ScenarioError(f"[tolerances] {key}", "must be positive")
            tolerances[key] = val

    return Scenario(
        name=name, T=T, step=step, oracle_step=oracle_step, mode=mode, routes=routes, spec=spec, j=j,
        branches=branches, inits=inits, pair=pair, mu=mu, output=output, debug_trajectories=debug,
        cini=cini, offsets=offsets, scan_delta=scan_delta, scan_jmax=scan_jmax, tolerances=tolerances,
        source=source,
    )


def _parse_algebra(cp):
    if "algebra" not in cp:
        return SU2, 0.5
    sec = cp["algebra"]
    m = parse_number(_get(sec, "m", "1"), "[algebra] m")
    n = parse_number(_get(sec, "n", "2"), "[algebra] n")
    try:
        spec = AlgebraSpec(m, n)
    except NonCompactAlgebraError as exc:
        raise ScenarioError("[algebra] m", str(exc)) from None
    j = parse_number(_get(sec, "j", "1/2"), "[algebra] j")
    try:
        j = float(as_half_integer(j))
    except ValueError as exc:
        raise ScenarioError("[algebra] j", str(exc)) from None
    return spec, j


def _parse_cini(cp):
    sec = cp["cini"]
    w1 = parse_function(sec, "omega1") if "omega1" in sec else Constant(0.0)
    w2 = parse_function(sec, "omega2") if "omega2" in sec else Constant(0.0)
    occ = []
    for key in ("n1", "n2"):
        v = parse_number(_get(sec, key, required=True), f"[cini] {key}")
        if v != int(v) or v < 0:
            raise ScenarioError(f"[cini] {key}", "must be a non-negative integer")
        occ.append(int(v))
    if sum(occ) < 1:
        raise ScenarioError("[cini] n1", "n1 + n2 must be at least 1")
    levels = {}
    for name in cp.sections():
        if not name.startswith("level"):
            continue
        parts = name.split(None, 1)
        try:
            k = int(parts[1])
        except (IndexError, ValueError):
            raise ScenarioError(f"[{name}]", "level sections are written [level <integer>]") from None
        ls = cp[name]
        energy = parse_function(ls, "energy") if "energy" in ls else Constant(0.0)
        if "coupling" in ls:
            g = parse_number(ls["coupling"], f"[{name}] coupling", allow_complex=True)
            re_f, im_f = Constant(g.real), Constant(g.imag)
        else:
            re_f = parse_function(ls, "coupling_re") if "coupling_re" in ls else Constant(0.0)
            im_f = parse_function(ls, "coupling_im") if "coupling_im" in ls else Constant(0.0)
        levels[k] = CiniLevel(energy, re_f, im_f)
    if sorted(levels) != list(range(len(levels))) or not levels:
        raise ScenarioError("[level]", "levels must be numbered 0, 1, ..., M-1")
    model = CiniModel(tuple(levels[k] for k in range(len(levels))), w1, w2, occ[0], occ[1])
    return model, SU2, model.j
