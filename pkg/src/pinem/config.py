"""Experiment configuration: flat ``key = value`` text files.

Lines starting with ``#`` and trailing ``# ...`` comments are ignored.  Phases
may be written as simple expressions in ``pi`` (``-pi/2``).  Drift lengths are
given in cm.

Recognised keys
---------------
beta                       velocity ratio v0/c (default 0.7)
sigma_E | sigma_z_um | gamma0
                           exactly one: energy spread (eV), rms packet length
                           (um), or decay parameter
wavelength_nm | photon_energy_eV
                           exactly one
g_mag, phi0                coupling and relative phase (rad)
L0_cm, LD_cm               pre- and post-interaction drift
interaction_path           sideband_sum | phase_mask
grid_n_samples             force the number of momentum samples
grid_half_width            force the half width (eV fs/nm)
grid_sigma_margin, grid_sideband_margin, grid_feature_oversample
                           auto-grid margins
decoherence                also emit the dephased spectrum (bool)
wigner                     also emit the Wigner map (bool)
wigner_resolution          points per Wigner axis (default: 256, or the
                           smallest power of two that resolves the band)
focus_L0_min_cm, focus_L0_max_cm
                           run the spectral-focusing search on this range
bunching_LD_min_cm, bunching_LD_max_cm
                           run the bunching search on this range
out_dir, emit_plot         output directory and plot flag
"""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, fields, replace

from .errors import ParameterError
from .interaction import PHASE_MASK, SIDEBAND_SUM
from .units import (
    CM_TO_NM,
    UM_TO_NM,
    BeamParameters,
    LaserParameters,
    beam_from,
    laser_from,
    sigma_E_for_decay,
    sigma_E_from_length,
)
from .wavepacket import GridOptions, MomentumGrid, auto_grid

_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


def parse_number(text: str) -> float:
    """Evaluate a numeric literal or an arithmetic expression in ``pi``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ParameterError(f"not a number: {text!r}")

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise ParameterError(f"not a number: {text!r}") from exc


def parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ParameterError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    beta: float = 0.7
    sigma_E: float | None = None
    sigma_z_um: float | None = None
    gamma0: float | None = None
    wavelength_nm: float | None = None
    photon_energy_eV: float | None = None
    g_mag: float = 0.0
    phi0: float = 0.0
    L0_cm: float = 0.0
    LD_cm: float = 0.0
    interaction_path: str = SIDEBAND_SUM
    grid_n_samples: int | None = None
    grid_half_width: float | None = None
    grid_sigma_margin: float = 8.0
    grid_sideband_margin: int = 4
    grid_feature_oversample: int = 16
    decoherence: bool = False
    wigner: bool = False
    wigner_resolution: int | None = None
    focus_L0_min_cm: float | None = None
    focus_L0_max_cm: float | None = None
    bunching_LD_min_cm: float | None = None
    bunching_LD_max_cm: float | None = None
    out_dir: str = "pinem_out"
    emit_plot: bool = False

    # --- construction -------------------------------------------------------

    @classmethod
    def keys(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_mapping(cls, mapping: dict) -> "ExperimentConfig":
        return cls().updated(mapping)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        return cls.from_mapping(read_key_values(path))

    def updated(self, mapping: dict) -> "ExperimentConfig":
        """Return a copy with ``mapping`` applied; string values are parsed."""
        known = {f.name: f for f in fields(self)}
        changes = {}
        for key, raw in mapping.items():
            if key not in known:
                raise ParameterError(f"unknown config key {key!r}")
            changes[key] = _coerce(key, known[key].type, raw)
        cfg = replace(self, **changes)
        # choosing one member of a mutually exclusive group clears the others
        for group in (("sigma_E", "sigma_z_um", "gamma0"), ("wavelength_nm", "photon_energy_eV")):
            chosen = [k for k in group if k in changes and changes[k] is not None]
            if chosen:
                cfg = replace(cfg, **{k: None for k in group if k not in chosen})
        return cfg

    def as_mapping(self) -> dict:
        return {k: getattr(self, k) for k in self.keys()}

    # --- validation and derived objects -------------------------------------

    def validate(self) -> None:
        widths = [k for k in ("sigma_E", "sigma_z_um", "gamma0") if getattr(self, k) is not None]
        if len(widths) != 1:
            raise ParameterError("give exactly one of sigma_E, sigma_z_um, gamma0")
        colours = [k for k in ("wavelength_nm", "photon_energy_eV") if getattr(self, k) is not None]
        if len(colours) != 1:
            raise ParameterError("give exactly one of wavelength_nm, photon_energy_eV")
        if self.L0_cm < 0 or self.LD_cm < 0:
            raise ParameterError("drift lengths must be non-negative")
        if self.interaction_path not in (SIDEBAND_SUM, PHASE_MASK):
            raise ParameterError(f"unknown interaction_path {self.interaction_path!r}")
        for lo, hi in (("focus_L0_min_cm", "focus_L0_max_cm"), ("bunching_LD_min_cm", "bunching_LD_max_cm")):
            a, b = getattr(self, lo), getattr(self, hi)
            if (a is None) != (b is None):
                raise ParameterError(f"{lo} and {hi} must be given together")
            if a is not None and not 0 <= a < b:
                raise ParameterError(f"invalid search range [{a}, {b}]")
        self.beam()
        self.laser()

    def laser(self) -> LaserParameters:
        return laser_from(
            wavelength=self.wavelength_nm,
            photon_energy=self.photon_energy_eV,
            g_mag=self.g_mag,
            phi0=self.phi0,
        )

    def beam(self) -> BeamParameters:
        if self.sigma_E is not None:
            sigma_E = self.sigma_E
        elif self.sigma_z_um is not None:
            sigma_E = sigma_E_from_length(self.beta, self.sigma_z_um * UM_TO_NM)
        elif self.gamma0 is not None:
            sigma_E = sigma_E_for_decay(self.laser().photon_energy, self.gamma0)
        else:
            raise ParameterError("no energy spread given")
        return beam_from(self.beta, sigma_E)

    @property
    def L0(self) -> float:
        return self.L0_cm * CM_TO_NM

    @property
    def LD(self) -> float:
        return self.LD_cm * CM_TO_NM

    def grid_options(self) -> GridOptions:
        return GridOptions(
            sigma_margin=self.grid_sigma_margin,
            sideband_margin=self.grid_sideband_margin,
            feature_oversample=self.grid_feature_oversample,
        )

    def grid(self) -> MomentumGrid:
        beam, laser = self.beam(), self.laser()
        L0_max = max(self.L0, (self.focus_L0_max_cm or 0.0) * CM_TO_NM)
        LD_max = max(self.LD, (self.bunching_LD_max_cm or 0.0) * CM_TO_NM)
        auto = auto_grid(beam, laser, L0_max=L0_max, LD_max=LD_max, options=self.grid_options())
        half_width = self.grid_half_width or auto.half_width
        n = self.grid_n_samples or auto.n_samples
        return MomentumGrid(p_center=beam.p0, half_width=half_width, n_samples=n)

    def to_text(self) -> str:
        lines = []
        for k, v in self.as_mapping().items():
            if v is None:
                continue
            lines.append(f"{k} = {v!r}" if isinstance(v, float) else f"{k} = {v}")
        return "\n".join(lines) + "\n"


def _coerce(key, type_name, raw):
    if raw is None:
        return None
    if not isinstance(raw, str):
        return raw
    t = str(type_name)
    if "bool" in t:
        return parse_bool(raw)
    if key in ("interaction_path", "out_dir"):
        return raw.strip()
    if "int" in t and "float" not in t:
        val = parse_number(raw)
        if val != int(val):
            raise ParameterError(f"{key} must be an integer")
        return int(val)
    return parse_number(raw)


def read_key_values(path) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key = value")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def parse_assignments(items) -> dict:
    """``["k=v", ...]`` from the command line into a mapping."""
    out = {}
    for item in items:
        if "=" not in item:
            raise ParameterError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out
