"""Scenario and sweep configuration: parsing, validation, serialization, presets.

Configs are flat key-value text files with sections ([model], [initial_state],
[time], [outputs], and [sweep] for sweep configs).  Full-line comments start
with '#'.  The exact grammar is documented in the README; the shipped figure
presets are config files in ``qsync/presets`` and round-trip exactly through
``parse_config``/``serialize_config``.
"""

from __future__ import annotations

import configparser
import io
import os
import re
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import ConfigError, SingularCouplingError
from .hilbert import HilbertSpace, coherent_state, normalize, parse_level
from .model import ModelParams, ProtectedPair, tuned_kappa_AB

_MODEL_FIELDS = ("omega_A", "omega_B", "omega_r", "kappa_A", "kappa_B", "kappa_AB",
                 "gamma_diss_r", "gamma_diss_A", "gamma_diss_B",
                 "gamma_deph_A", "gamma_deph_B", "n_max")

STANDARD_COLUMNS = ("sx_A", "sx_B", "pop_P", "pop_G", "coh_PG", "purity", "vn_entropy")
EXTRA_OUTPUTS = ("quad_populations", "block_populations")

_LEVEL_NAMES = {0: "-", 1: "+"}


# -- initial states ----------------------------------------------------------
#
# Pure specs expose build(space, pair) -> ket; MixedSpec builds a density
# matrix directly.  FockKet and NamedKet double as terms inside
# superpositions and mixtures.

@dataclass(frozen=True)
class FockKet:
    n: int
    level_a: int
    level_b: int

    def build(self, space: HilbertSpace, pair: ProtectedPair | None) -> np.ndarray:
        return space.basis_state(self.n, self.level_a, self.level_b)

    def render(self) -> str:
        return f"fock({self.n},{_LEVEL_NAMES[self.level_a]},{_LEVEL_NAMES[self.level_b]})"


@dataclass(frozen=True)
class NamedKet:
    """'P' (protected state) or 'G' (ground state)."""

    name: str

    def build(self, space: HilbertSpace, pair: ProtectedPair | None) -> np.ndarray:
        if pair is None:
            raise ConfigError(f"initial_state: ket {self.name!r} needs the protected "
                              "pair, which is undefined at these couplings")
        return pair.state_P if self.name == "P" else pair.state_G

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class CoherentSpec:
    alpha: complex
    level_a: int
    level_b: int
    leak_tol: float = 1e-8

    def build(self, space, pair):
        return coherent_state(space, self.alpha, self.level_a, self.level_b,
                              leak_tol=self.leak_tol)


@dataclass(frozen=True)
class SuperpositionSpec:
    terms: tuple[tuple[complex, object], ...]

    def build(self, space, pair):
        ket = np.zeros(space.dim, dtype=complex)
        for amp, term in self.terms:
            ket = ket + amp * term.build(space, pair)
        if abs(np.linalg.norm(ket) - 1.0) > 1e-10:
            raise ConfigError(f"initial_state: superposition norm is "
                              f"{np.linalg.norm(ket):.12g}, not 1 within 1e-10")
        return ket


@dataclass(frozen=True)
class CustomSpec:
    amplitudes: tuple[complex, ...]

    def build(self, space, pair):
        if len(self.amplitudes) != space.dim:
            raise ConfigError(f"initial_state: custom amplitude list has "
                              f"{len(self.amplitudes)} entries, space needs {space.dim}")
        ket = np.array(self.amplitudes, dtype=complex)
        if abs(np.linalg.norm(ket) - 1.0) > 1e-10:
            raise ConfigError("initial_state: custom amplitudes are not normalized "
                              "within 1e-10")
        return ket


@dataclass(frozen=True)
class MixedSpec:
    components: tuple[tuple[float, object], ...]

    def build_rho(self, space, pair):
        total = sum(w for w, _ in self.components)
        if abs(total - 1.0) > 1e-10:
            raise ConfigError(f"initial_state: mixture weights sum to {total:.12g}, "
                              "not 1 within 1e-10")
        rho = np.zeros((space.dim, space.dim), dtype=complex)
        for weight, term in self.components:
            if weight < 0:
                raise ConfigError("initial_state: mixture weights must be >= 0")
            ket = term.build(space, pair)
            rho += weight * np.outer(ket, ket.conj())
        return rho


def build_initial_density(spec, space: HilbertSpace, pair: ProtectedPair | None) -> np.ndarray:
    """Density matrix for any initial-state spec (kets get projected)."""
    if isinstance(spec, MixedSpec):
        return spec.build_rho(space, pair)
    ket = normalize(spec.build(space, pair))
    return np.outer(ket, ket.conj())


# -- configs -----------------------------------------------------------------

@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    model: ModelParams
    auto_kappa_AB: bool
    initial_state: object
    t_end: float
    n_steps: int
    columns: tuple[str, ...]
    extras: tuple[str, ...] = ()

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.n_steps)


@dataclass(frozen=True)
class SweepConfig:
    """Grid over kappa_B and log10(gamma_r); each point runs one scenario to
    t = t_end_factor / gamma_r and records the protected-ground coherence."""

    name: str
    model: ModelParams          # template; kappa_B and gamma_diss_r replaced per point
    auto_kappa_AB: bool
    initial_state: object
    kappa_B_start: float
    kappa_B_stop: float
    kappa_B_count: int
    log10_gamma_start: float
    log10_gamma_stop: float
    log10_gamma_count: int
    exclude_band: float
    t_end_factor: float

    @property
    def kappa_B_grid(self) -> np.ndarray:
        return np.linspace(self.kappa_B_start, self.kappa_B_stop, self.kappa_B_count)

    @property
    def log10_gamma_grid(self) -> np.ndarray:
        return np.linspace(self.log10_gamma_start, self.log10_gamma_stop,
                           self.log10_gamma_count)


# -- parsing ------------------------------------------------------------------

_KET_RE = re.compile(r"^fock\(\s*(\d+)\s*,\s*([+-])\s*,\s*([+-])\s*\)$")
_LINSPACE_RE = re.compile(r"^linspace\(\s*([^,\s]+)\s*,\s*([^,\s]+)\s*,\s*(\d+)\s*\)$")


def _parse_ket(text: str, where: str):
    text = text.strip()
    if text in ("P", "G"):
        return NamedKet(text)
    m = _KET_RE.match(text)
    if m:
        return FockKet(int(m.group(1)), parse_level(m.group(2)), parse_level(m.group(3)))
    raise ConfigError(f"{where}: cannot parse ket {text!r} "
                      "(expected P, G or fock(n,+/-,+/-))")


def _parse_complex(text: str, where: str) -> complex:
    try:
        return complex(text.strip().replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"{where}: invalid complex number {text!r}") from exc


def _require(section, key: str, where: str) -> str:
    raw = section.get(key)
    if raw is None:
        raise ConfigError(f"{where}.{key}: missing required key")
    return raw


def _parse_float(section, key: str, where: str) -> float:
    raw = _require(section, key, where)
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}.{key}: invalid number {raw!r}") from exc


def _parse_int(section, key: str, where: str) -> int:
    raw = _require(section, key, where)
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}.{key}: invalid integer {raw!r}") from exc


def _numbered_values(section, prefix: str, where: str) -> list[str]:
    found = {}
    for key, value in section.items():
        if key.startswith(prefix + "."):
            try:
                idx = int(key[len(prefix) + 1:])
            except ValueError as exc:
                raise ConfigError(f"{where}: bad key {key!r}") from exc
            found[idx] = value
    if not found:
        raise ConfigError(f"{where}: at least one '{prefix}.N' entry is required")
    if sorted(found) != list(range(1, len(found) + 1)):
        raise ConfigError(f"{where}: '{prefix}.N' entries must be numbered 1..N")
    return [found[i] for i in sorted(found)]


def _parse_initial_state(section) -> object:
    where = "initial_state"
    kind = _require(section, "kind", where)
    if kind == "fock":
        return FockKet(_parse_int(section, "n", where),
                       parse_level(section.get("qubit_A", "-")),
                       parse_level(section.get("qubit_B", "-")))
    if kind == "coherent":
        try:
            leak = float(section.get("leak_tol", "1e-8"))
        except ValueError as exc:
            raise ConfigError(f"{where}.leak_tol: invalid number") from exc
        return CoherentSpec(_parse_complex(_require(section, "alpha", where),
                                           where + ".alpha"),
                            parse_level(section.get("qubit_A", "-")),
                            parse_level(section.get("qubit_B", "-")),
                            leak_tol=leak)
    if kind == "superposition":
        terms = []
        for raw in _numbered_values(section, "term", where):
            if "*" not in raw:
                raise ConfigError(f"{where}: term {raw!r} must look like "
                                  "'<amplitude> * <ket>'")
            amp_text, ket_text = raw.split("*", 1)
            terms.append((_parse_complex(amp_text, where), _parse_ket(ket_text, where)))
        return SuperpositionSpec(tuple(terms))
    if kind == "custom":
        raw = _require(section, "amplitudes", where)
        return CustomSpec(tuple(_parse_complex(tok, where) for tok in raw.split()))
    if kind == "mixed":
        comps = []
        for raw in _numbered_values(section, "component", where):
            if "|" not in raw:
                raise ConfigError(f"{where}: component {raw!r} must look like "
                                  "'<weight> | <ket>'")
            w_text, ket_text = raw.split("|", 1)
            try:
                weight = float(w_text)
            except ValueError as exc:
                raise ConfigError(f"{where}: invalid weight {w_text!r}") from exc
            comps.append((weight, _parse_ket(ket_text, where)))
        return MixedSpec(tuple(comps))
    raise ConfigError(f"{where}.kind: unknown kind {kind!r}")


def _parse_model(section) -> tuple[ModelParams, bool]:
    for key in section:
        if key not in _MODEL_FIELDS:
            raise ConfigError(f"model.{key}: unknown parameter")
    kwargs = {}
    auto = False
    for name in _MODEL_FIELDS:
        if name not in section:
            continue
        if name == "kappa_AB" and section[name].strip() == "auto":
            auto = True
            continue
        if name == "n_max":
            kwargs[name] = _parse_int(section, name, "model")
        else:
            kwargs[name] = _parse_float(section, name, "model")
    try:
        params = ModelParams(**kwargs)
        if auto:
            params = params.replace(kappa_AB=tuned_kappa_AB(params))
    except (ValueError, SingularCouplingError) as exc:
        raise ConfigError(f"model: {exc}") from exc
    return params, auto


def parse_config(text: str, name: str = "config"):
    """Parse a scenario or sweep config; returns ScenarioConfig or SweepConfig."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case-sensitive (omega_A vs omega_a)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc

    for required in ("model", "initial_state"):
        if required not in parser:
            raise ConfigError(f"missing [{required}] section")
    params, auto = _parse_model(parser["model"])
    initial = _parse_initial_state(parser["initial_state"])

    if "sweep" in parser:
        sw = parser["sweep"]
        m_kb = _LINSPACE_RE.match(_require(sw, "kappa_B_grid", "sweep").strip())
        m_lg = _LINSPACE_RE.match(_require(sw, "log10_gamma_r_grid", "sweep").strip())
        if not m_kb or not m_lg:
            raise ConfigError("sweep: kappa_B_grid and log10_gamma_r_grid must be "
                              "linspace(start, stop, count)")
        cfg = SweepConfig(
            name=name, model=params, auto_kappa_AB=auto, initial_state=initial,
            kappa_B_start=float(m_kb.group(1)), kappa_B_stop=float(m_kb.group(2)),
            kappa_B_count=int(m_kb.group(3)),
            log10_gamma_start=float(m_lg.group(1)), log10_gamma_stop=float(m_lg.group(2)),
            log10_gamma_count=int(m_lg.group(3)),
            exclude_band=float(sw.get("exclude_band", "0.02")),
            t_end_factor=float(sw.get("t_end_factor", "200")),
        )
        if cfg.kappa_B_count < 1 or cfg.log10_gamma_count < 1:
            raise ConfigError("sweep: grids must be nonempty")
        if not cfg.auto_kappa_AB:
            raise ConfigError("sweep: kappa_AB must be 'auto' (it is retuned per point)")
        return cfg

    if "time" not in parser:
        raise ConfigError("missing [time] section")
    t_end = _parse_float(parser["time"], "t_end", "time")
    n_steps = _parse_int(parser["time"], "n_steps", "time")
    if t_end <= 0:
        raise ConfigError(f"time.t_end: must be > 0, got {t_end}")
    if n_steps < 2:
        raise ConfigError(f"time.n_steps: must be >= 2, got {n_steps}")

    columns: tuple[str, ...] = STANDARD_COLUMNS
    extras: tuple[str, ...] = ()
    if "outputs" in parser:
        raw_cols = parser["outputs"].get("columns")
        if raw_cols is not None:
            columns = tuple(raw_cols.split())
            for col in columns:
                if col not in STANDARD_COLUMNS:
                    raise ConfigError(f"outputs.columns: unknown column {col!r}")
        raw_extras = parser["outputs"].get("extras")
        if raw_extras is not None:
            extras = tuple(raw_extras.split())
            for extra in extras:
                if extra not in EXTRA_OUTPUTS:
                    raise ConfigError(f"outputs.extras: unknown extra {extra!r}")
    return ScenarioConfig(name=name, model=params, auto_kappa_AB=auto,
                          initial_state=initial, t_end=t_end, n_steps=n_steps,
                          columns=columns, extras=extras)


# -- serialization -------------------------------------------------------------

def _render_number(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _render_complex(z: complex) -> str:
    if z.imag == 0:
        return _render_number(z.real)
    return f"{z.real!r}{z.imag:+}j"


def _render_initial_state(spec) -> list[str]:
    lines = []
    if isinstance(spec, FockKet):
        lines += ["kind = fock", f"n = {spec.n}",
                  f"qubit_A = {_LEVEL_NAMES[spec.level_a]}",
                  f"qubit_B = {_LEVEL_NAMES[spec.level_b]}"]
    elif isinstance(spec, CoherentSpec):
        lines += ["kind = coherent", f"alpha = {_render_complex(spec.alpha)}",
                  f"qubit_A = {_LEVEL_NAMES[spec.level_a]}",
                  f"qubit_B = {_LEVEL_NAMES[spec.level_b]}",
                  f"leak_tol = {_render_number(spec.leak_tol)}"]
    elif isinstance(spec, SuperpositionSpec):
        lines.append("kind = superposition")
        for i, (amp, ket) in enumerate(spec.terms, start=1):
            lines.append(f"term.{i} = {_render_complex(amp)} * {ket.render()}")
    elif isinstance(spec, CustomSpec):
        lines.append("kind = custom")
        lines.append("amplitudes = " + " ".join(_render_complex(a) for a in spec.amplitudes))
    elif isinstance(spec, MixedSpec):
        lines.append("kind = mixed")
        for i, (w, ket) in enumerate(spec.components, start=1):
            lines.append(f"component.{i} = {_render_number(w)} | {ket.render()}")
    else:
        raise TypeError(f"unknown initial-state spec {type(spec).__name__}")
    return lines


def serialize_config(cfg) -> str:
    """Canonical text form; parse_config(serialize_config(cfg)) == cfg."""
    out = io.StringIO()
    out.write("[model]\n")
    for field_name in _MODEL_FIELDS:
        if field_name == "kappa_AB" and cfg.auto_kappa_AB:
            out.write("kappa_AB = auto\n")
            continue
        out.write(f"{field_name} = {_render_number(getattr(cfg.model, field_name))}\n")
    out.write("\n[initial_state]\n")
    for line in _render_initial_state(cfg.initial_state):
        out.write(line + "\n")
    if isinstance(cfg, SweepConfig):
        out.write("\n[sweep]\n")
        out.write(f"kappa_B_grid = linspace({_render_number(cfg.kappa_B_start)}, "
                  f"{_render_number(cfg.kappa_B_stop)}, {cfg.kappa_B_count})\n")
        out.write(f"log10_gamma_r_grid = linspace({_render_number(cfg.log10_gamma_start)}, "
                  f"{_render_number(cfg.log10_gamma_stop)}, {cfg.log10_gamma_count})\n")
        out.write(f"exclude_band = {_render_number(cfg.exclude_band)}\n")
        out.write(f"t_end_factor = {_render_number(cfg.t_end_factor)}\n")
    else:
        out.write("\n[time]\n")
        out.write(f"t_end = {_render_number(cfg.t_end)}\n")
        out.write(f"n_steps = {cfg.n_steps}\n")
        out.write("\n[outputs]\n")
        out.write("columns = " + " ".join(cfg.columns) + "\n")
        if cfg.extras:
            out.write("extras = " + " ".join(cfg.extras) + "\n")
    return out.getvalue()


# -- presets -------------------------------------------------------------------

def preset_names() -> list[str]:
    files = resources.files("qsync").joinpath("presets")
    return sorted(p.name[:-4] for p in files.iterdir() if p.name.endswith(".cfg"))


def preset_description(name: str) -> str:
    for line in _preset_text(name).splitlines():
        if line.startswith("#"):
            return line.lstrip("# ").strip()
    return ""


def _preset_text(name: str) -> str:
    path = resources.files("qsync").joinpath("presets").joinpath(f"{name}.cfg")
    if not path.is_file():
        raise ConfigError(f"unknown preset {name!r}; available: "
                          + ", ".join(preset_names()))
    return path.read_text(encoding="utf-8")


def load_preset(name: str):
    return parse_config(_preset_text(name), name=name)


def load_config(source: str):
    """Load a config from a preset name or a file path."""
    if os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
        name = os.path.splitext(os.path.basename(source))[0]
        return parse_config(text, name=name)
    return load_preset(source)
