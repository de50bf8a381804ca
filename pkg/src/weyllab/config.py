"""Run configuration: flat ``[section]`` blocks of ``key = value`` lines.

``#`` starts a comment anywhere on a line.  Unknown sections and keys are
rejected, and every validation error names the file, line and key.

Sections and defaults::

    [solution]   family = dirac | weyl | transverse      (dirac)
                 species = particle | antiparticle       (particle, dirac only)
                 helicity = +1 | -1                      (+1, weyl/transverse)
                 sense = +1 | -1                         (+1, transverse: +z / -z)
                 theta = 0, phi = 0                      (directional families)
    [f] [g] [h]  kind = constant | gaussian | offset-gaussian | sum-of-gaussians
                        | erf-chirp | linear-phase
                 f: constant A=1;  g: constant A=0;  h: linear-phase E=1
    [p]          kind = super-gaussian | reciprocal | uniform   (super-gaussian)
                 A=1 k1=1 k2=1 n1=1 n2=1 x0=0 y0=0, r1=1 for reciprocal
    [potential]  q = 1; gauge = zero | constant | polynomial | sinusoid (zero)
                 s0=1; terms = 1*x + 0.5*t*x; kx ky kz omega phase = 0
    [verify]     order=4 step=0.01 mass=0 points=6 half_width=1
                 residual_threshold=1e-6 field_threshold=1e-7
                 gauge_samples=20 seed=20240601
    [waveform]   w_min=-5 w_max=5 samples=1001
    [separation] branch = auto | minus | plus (auto); half_width=2 points=41
    [output]     dir = out
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from weyllab.em_gauge import ConstantGauge, PolynomialGauge, SinusoidGauge, ZeroGauge
from weyllab.errors import ConfigError
from weyllab.fd import FDSpec
from weyllab.profiles import (
    PROFILE1D_KINDS,
    Constant,
    Direction,
    GaussianSum,
    LinearPhase,
    Reciprocal,
    SuperGaussian,
    Uniform,
)
from weyllab.solutions import (
    ANTIPARTICLE,
    PARTICLE,
    DiracSolution,
    WeylDirectionalSolution,
    WeylTransverseSolution,
)


@dataclass(frozen=True)
class VerifySpec:
    order: int = 4
    step: float = 0.01
    mass: float = 0.0
    points: int = 6
    half_width: float = 1.0
    residual_threshold: float = 1e-6
    field_threshold: float = 1e-7
    gauge_samples: int = 20
    seed: int = 20240601

    @property
    def fd(self) -> FDSpec:
        return FDSpec(self.order, self.step)


@dataclass(frozen=True)
class WaveformSpec:
    w_min: float = -5.0
    w_max: float = 5.0
    samples: int = 1001


@dataclass(frozen=True)
class SeparationSpec:
    branch: str = "auto"
    half_width: float = 2.0
    points: int = 41
    r1: float = 1.0


@dataclass(frozen=True)
class RunConfig:
    solution: object = field(default_factory=DiracSolution)
    q: float = 1.0
    gauge: object = field(default_factory=ZeroGauge)
    verify: VerifySpec = field(default_factory=VerifySpec)
    waveform: WaveformSpec = field(default_factory=WaveformSpec)
    separation: SeparationSpec = field(default_factory=SeparationSpec)
    output_dir: str = "out"

    @property
    def family(self) -> str:
        if isinstance(self.solution, DiracSolution):
            return "dirac"
        if isinstance(self.solution, WeylTransverseSolution):
            return "transverse"
        return "weyl"


# ---------------------------------------------------------------------------
# raw parsing

_SECTIONS = ("solution", "f", "g", "h", "p", "potential", "verify", "waveform", "separation", "output")
_LINE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")


class _Section(dict):
    """key -> (value, line), plus the header line."""

    def __init__(self, name, line):
        super().__init__()
        self.name = name
        self.line = line


def parse_text(text: str, path="<config>") -> dict:
    sections: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in _SECTIONS:
                raise ConfigError(f"unknown section [{name}]", path, lineno)
            if name in sections:
                raise ConfigError(f"duplicate section [{name}]", path, lineno)
            current = sections[name] = _Section(name, lineno)
            continue
        m = _LINE.match(line)
        if m is None:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", path, lineno)
        if current is None:
            raise ConfigError("key outside of any [section]", path, lineno, m.group(1))
        key, value = m.group(1), m.group(2).strip()
        if key in current:
            raise ConfigError(f"duplicate key in [{current.name}]", path, lineno, key)
        if not value:
            raise ConfigError("empty value", path, lineno, key)
        current[key] = (value, lineno)
    return sections


# ---------------------------------------------------------------------------
# typed access


class _Reader:
    def __init__(self, section: _Section | None, path, allowed):
        self.section = section if section is not None else _Section("", None)
        self.path = path
        self.used = set()
        unknown = [k for k in self.section if k not in allowed]
        if unknown:
            key = unknown[0]
            raise ConfigError(
                f"unknown key in [{self.section.name}] (allowed: {', '.join(sorted(allowed))})",
                path, self.section[key][1], key,
            )

    def error(self, key, message):
        line = self.section[key][1] if key in self.section else self.section.line
        return ConfigError(message, self.path, line, key)

    def raw(self, key, default=None):
        return self.section[key][0] if key in self.section else default

    def float(self, key, default):
        if key not in self.section:
            return default
        try:
            value = float(self.section[key][0])
        except ValueError:
            raise self.error(key, f"expected a number, got {self.section[key][0]!r}") from None
        if not math.isfinite(value):
            raise self.error(key, "value must be finite")
        return value

    def int(self, key, default, why="integer required"):
        if key not in self.section:
            return default
        text = self.section[key][0]
        try:
            value = float(text)
        except ValueError:
            raise self.error(key, f"{why}, got {text!r}") from None
        if not value.is_integer():
            raise self.error(key, f"{why}, got {text!r}")
        return int(value)

    def sign(self, key, default):
        text = self.raw(key)
        if text is None:
            return default
        table = {"+1": 1, "1": 1, "+": 1, "positive": 1, "+z": 1,
                 "-1": -1, "-": -1, "negative": -1, "-z": -1}
        if text not in table:
            raise self.error(key, f"expected +1 or -1, got {text!r}")
        return table[text]

    def choice(self, key, default, options):
        text = self.raw(key, default)
        if text not in options:
            raise self.error(key, f"expected one of {', '.join(options)}, got {text!r}")
        return text


def _build(reader: _Reader, ctor, **kwargs):
    """Construct, turning a constructor's ValueError into a keyed ConfigError."""
    try:
        return ctor(**kwargs)
    except ValueError as exc:
        message = str(exc)
        key = message.split(" ", 1)[0]
        key = {"lam": "lambda"}.get(key, key)
        raise reader.error(key, message) from None


_PROFILE_KEYS = {
    "constant": {"A"},
    "gaussian": {"A", "k", "w0"},
    "offset-gaussian": {"B", "A", "k", "w0"},
    "sum-of-gaussians": {"terms"},
    "erf-chirp": {"E0", "lambda", "w0"},
    "linear-phase": {"E"},
}


def _profile1d(section, path, default):
    if section is None:
        return default
    kind = section["kind"][0] if "kind" in section else None
    if kind not in PROFILE1D_KINDS:
        line = section["kind"][1] if "kind" in section else section.line
        raise ConfigError(f"[{section.name}] kind must be one of {', '.join(PROFILE1D_KINDS)}", path, line, "kind")
    r = _Reader(section, path, _PROFILE_KEYS[kind] | {"kind"})
    if kind == "sum-of-gaussians":
        text = r.raw("terms")
        if text is None:
            raise r.error("terms", "sum-of-gaussians needs 'terms = A k w0; A k w0; ...'")
        try:
            terms = tuple(tuple(float(v) for v in chunk.split()) for chunk in text.split(";") if chunk.strip())
        except ValueError:
            raise r.error("terms", f"terms must be numbers, got {text!r}") from None
        if any(len(t) != 3 for t in terms):
            raise r.error("terms", "each term needs exactly three numbers: A k w0")
        try:
            return GaussianSum(terms)
        except ValueError as exc:
            raise r.error("terms", str(exc)) from None
    params = {}
    for key in _PROFILE_KEYS[kind]:
        if key in section:
            params["lam" if key == "lambda" else key] = r.float(key, None)
    return _build(r, PROFILE1D_KINDS[kind], **params)


_P_KEYS = {"A", "k1", "k2", "n1", "n2", "x0", "y0"}


def _profile2d(section, path):
    r = _Reader(section, path, _P_KEYS | {"kind", "r1"})
    kind = r.choice("kind", "super-gaussian", ("super-gaussian", "reciprocal", "uniform"))
    if kind == "uniform":
        extra = [k for k in r.section if k not in ("kind", "A")]
        if extra:
            raise r.error(extra[0], "uniform profile only takes A")
        return _build(r, Uniform, A=r.float("A", 1.0))
    if kind == "super-gaussian" and "r1" in r.section:
        raise r.error("r1", "r1 only applies to kind = reciprocal")
    why = "integer required (super-Gaussian exponent)"
    base = _build(
        r, SuperGaussian,
        A=r.float("A", 1.0), k1=r.float("k1", 1.0), k2=r.float("k2", 1.0),
        n1=r.int("n1", 1, why), n2=r.int("n2", 1, why),
        x0=r.float("x0", 0.0), y0=r.float("y0", 0.0),
    )
    if kind == "reciprocal":
        return _build(r, Reciprocal, base=base, r1=r.float("r1", 1.0))
    return base


_MONOMIAL = re.compile(r"^([txyz])(?:\^(\d+))?$")


def parse_polynomial(text: str) -> PolynomialGauge:
    """'1*x + 0.5*t*x - 2*z^2' -> PolynomialGauge."""
    compact = text.replace(" ", "")
    if not compact:
        raise ValueError("empty polynomial")
    # split before +/- that are not exponent signs of a float literal
    pieces = re.split(r"(?<=[^eE+\-*^])(?=[+-])", compact)
    terms = []
    for piece in pieces:
        factors = piece.split("*")
        coeff = 1.0
        powers = [0, 0, 0, 0]
        for j, factor in enumerate(factors):
            sign = 1.0
            if j == 0 and factor[:1] in "+-" and factor[1:2] in tuple("txyz"):
                sign, factor = (-1.0 if factor[0] == "-" else 1.0), factor[1:]
                coeff *= sign
            m = _MONOMIAL.match(factor)
            if m:
                powers["txyz".index(m.group(1))] += int(m.group(2) or 1)
                continue
            try:
                coeff *= float(factor)
            except ValueError:
                raise ValueError(f"cannot parse polynomial term {piece!r}") from None
        terms.append((tuple(powers), coeff))
    return PolynomialGauge(tuple(terms))


def format_polynomial(gauge: PolynomialGauge) -> str:
    text = ""
    for powers, coeff in gauge.terms:
        factors = [repr(abs(float(coeff)))]
        for name, k in zip("txyz", powers):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        negative = math.copysign(1.0, coeff) < 0
        if text:
            text += " - " if negative else " + "
        elif negative:
            text = "-"
        text += "*".join(factors)
    return text or "0.0"


def _gauge(section, path):
    r = _Reader(section, path, {"q", "gauge", "s0", "terms", "kx", "ky", "kz", "omega", "phase"})
    kind = r.choice("gauge", "zero", ("zero", "constant", "polynomial", "sinusoid"))
    allowed = {
        "zero": set(),
        "constant": {"s0"},
        "polynomial": {"terms"},
        "sinusoid": {"s0", "kx", "ky", "kz", "omega", "phase"},
    }[kind]
    for key in r.section:
        if key not in allowed | {"q", "gauge"}:
            raise r.error(key, f"key does not apply to gauge = {kind}")
    if kind == "zero":
        return ZeroGauge()
    if kind == "constant":
        return ConstantGauge(r.float("s0", 1.0))
    if kind == "polynomial":
        if "terms" not in r.section:
            raise r.error("terms", "polynomial gauge needs terms")
        try:
            return parse_polynomial(r.raw("terms"))
        except ValueError as exc:
            raise r.error("terms", str(exc)) from None
    return SinusoidGauge(*(r.float(k, d) for k, d in
                           (("s0", 1.0), ("kx", 0.0), ("ky", 0.0), ("kz", 0.0), ("omega", 0.0), ("phase", 0.0))))


def _spec(section, path, cls, ints=()):
    names = [f.name for f in fields(cls)]
    r = _Reader(section, path, set(names))
    values = {}
    for f in fields(cls):
        if f.name not in r.section:
            continue
        if f.name in ints:
            values[f.name] = r.int(f.name, f.default)
        elif isinstance(f.default, str):
            values[f.name] = r.raw(f.name)
        else:
            values[f.name] = r.float(f.name, f.default)
    return r, cls(**values)


def config_from_sections(sections: dict, path="<config>") -> RunConfig:
    sol_r = _Reader(sections.get("solution"), path, {"family", "species", "helicity", "sense", "theta", "phi"})
    family = sol_r.choice("family", "dirac", ("dirac", "weyl", "transverse"))
    keys_by_family = {
        "dirac": {"family", "species", "theta", "phi"},
        "weyl": {"family", "helicity", "theta", "phi"},
        "transverse": {"family", "helicity", "sense"},
    }
    for key in sol_r.section:
        if key not in keys_by_family[family]:
            raise sol_r.error(key, f"key does not apply to family = {family}")
    for name, needed in (("g", family == "dirac"), ("p", family == "transverse")):
        if name in sections and not needed:
            raise ConfigError(f"section [{name}] does not apply to family = {family}", path, sections[name].line)

    f = _profile1d(sections.get("f"), path, Constant(1.0))
    h = _profile1d(sections.get("h"), path, LinearPhase(1.0))
    if family == "transverse":
        solution = _build(sol_r, WeylTransverseSolution, helicity=sol_r.sign("helicity", 1),
                          sense=sol_r.sign("sense", 1), p=_profile2d(sections.get("p"), path), f=f, h=h)
    else:
        direction = _build(sol_r, Direction, theta=sol_r.float("theta", 0.0), phi=sol_r.float("phi", 0.0))
        if family == "dirac":
            g = _profile1d(sections.get("g"), path, Constant(0.0))
            species = sol_r.choice("species", PARTICLE, (PARTICLE, ANTIPARTICLE))
            solution = DiracSolution(species, direction, f, g, h)
        else:
            solution = WeylDirectionalSolution(sol_r.sign("helicity", 1), direction, f, h)

    gauge = _gauge(sections.get("potential"), path)
    pot_r = _Reader(sections.get("potential"), path, {"q", "gauge", "s0", "terms", "kx", "ky", "kz", "omega", "phase"})
    q = pot_r.float("q", 1.0)
    if q == 0:
        raise pot_r.error("q", "charge q must be nonzero")

    vr, verify = _spec(sections.get("verify"), path, VerifySpec, ints=("order", "points", "gauge_samples", "seed"))
    if verify.order not in (2, 4):
        raise vr.error("order", "order must be 2 or 4")
    for key in ("step", "half_width", "residual_threshold", "field_threshold"):
        if not getattr(verify, key) > 0:
            raise vr.error(key, f"{key} must be positive")
    if verify.mass < 0:
        raise vr.error("mass", "mass must be non-negative")
    for key in ("points", "gauge_samples"):
        if getattr(verify, key) < 1:
            raise vr.error(key, f"{key} must be at least 1")

    wr, waveform = _spec(sections.get("waveform"), path, WaveformSpec, ints=("samples",))
    if not waveform.w_min < waveform.w_max:
        raise wr.error("w_max", "w_max must exceed w_min")
    if waveform.samples < 2:
        raise wr.error("samples", "samples must be at least 2")

    sr, separation = _spec(sections.get("separation"), path, SeparationSpec, ints=("points",))
    if separation.branch not in ("auto", "minus", "plus"):
        raise sr.error("branch", "branch must be auto, minus or plus")
    if not separation.half_width > 0:
        raise sr.error("half_width", "half_width must be positive")
    if separation.points < 2:
        raise sr.error("points", "points must be at least 2")
    if not separation.r1 > 0:
        raise sr.error("r1", "r1 must be positive")

    out_r = _Reader(sections.get("output"), path, {"dir"})
    return RunConfig(solution, q, gauge, verify, waveform, separation, out_r.raw("dir", "out"))


def parse_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror or exc}", path) from None
    return config_from_sections(parse_text(text, path), path)


def parse_config_text(text: str, path="<config>") -> RunConfig:
    return config_from_sections(parse_text(text, path), path)


# ---------------------------------------------------------------------------
# emission


def _num(x) -> str:
    return repr(float(x))


def _profile1d_lines(profile) -> list:
    lines = [f"kind = {profile.kind}"]
    if isinstance(profile, GaussianSum):
        lines.append("terms = " + "; ".join(" ".join(_num(v) for v in t) for t in profile.terms))
        return lines
    for f in fields(profile):
        key = "lambda" if f.name == "lam" else f.name
        lines.append(f"{key} = {_num(getattr(profile, f.name))}")
    return lines


def _profile2d_lines(profile) -> list:
    if isinstance(profile, Uniform):
        return ["kind = uniform", f"A = {_num(profile.A)}"]
    base, lines = profile, ["kind = super-gaussian"]
    if isinstance(profile, Reciprocal):
        base, lines = profile.base, ["kind = reciprocal", f"r1 = {_num(profile.r1)}"]
    for f in fields(base):
        value = getattr(base, f.name)
        lines.append(f"{f.name} = {int(value) if f.name in ('n1', 'n2') else _num(value)}")
    return lines


def _gauge_lines(gauge) -> list:
    if isinstance(gauge, ZeroGauge):
        return ["gauge = zero"]
    if isinstance(gauge, ConstantGauge):
        return ["gauge = constant", f"s0 = {_num(gauge.s0)}"]
    if isinstance(gauge, PolynomialGauge):
        return ["gauge = polynomial", f"terms = {format_polynomial(gauge)}"]
    if isinstance(gauge, SinusoidGauge):
        return ["gauge = sinusoid"] + [f"{f.name} = {_num(getattr(gauge, f.name))}" for f in fields(gauge)]
    raise ValueError(f"gauge {gauge!r} has no config representation")


def dump_config(cfg: RunConfig) -> str:
    sol = cfg.solution
    out = ["[solution]", f"family = {cfg.family}"]
    if isinstance(sol, WeylTransverseSolution):
        out += [f"helicity = {sol.helicity:+d}", f"sense = {sol.sense:+d}"]
    else:
        if isinstance(sol, DiracSolution):
            out.append(f"species = {sol.species}")
        else:
            out.append(f"helicity = {sol.helicity:+d}")
        out += [f"theta = {_num(sol.direction.theta)}", f"phi = {_num(sol.direction.phi)}"]
    out += ["", "[f]"] + _profile1d_lines(sol.f)
    if isinstance(sol, DiracSolution):
        out += ["", "[g]"] + _profile1d_lines(sol.g)
    out += ["", "[h]"] + _profile1d_lines(sol.h)
    if isinstance(sol, WeylTransverseSolution):
        out += ["", "[p]"] + _profile2d_lines(sol.p)
    out += ["", "[potential]", f"q = {_num(cfg.q)}"] + _gauge_lines(cfg.gauge)
    for name, spec in (("verify", cfg.verify), ("waveform", cfg.waveform), ("separation", cfg.separation)):
        out += ["", f"[{name}]"]
        for f in fields(spec):
            value = getattr(spec, f.name)
            text = value if isinstance(value, str) else (str(value) if isinstance(value, int) else _num(value))
            out.append(f"{f.name} = {text}")
    out += ["", "[output]", f"dir = {cfg.output_dir}", ""]
    return "\n".join(out)


def with_overrides(cfg: RunConfig, order=None, step=None, output_dir=None) -> RunConfig:
    verify = cfg.verify
    if order is not None:
        verify = replace(verify, order=order)
    if step is not None:
        verify = replace(verify, step=step)
    return replace(cfg, verify=verify, output_dir=output_dir if output_dir is not None else cfg.output_dir)
