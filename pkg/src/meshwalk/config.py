"""YAML experiment files validated by pydantic models."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Annotated, Any, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    ValidationError,
    model_validator,
)

from .constants import (
    DEFAULT_ALPHA_RANGE,
    DEFAULT_CONE_MARGIN,
    DEFAULT_OVERFLOW_GUARD,
    DEFAULT_SUPPORT_FRACTION,
)
from .harness import (
    DeltaExcitation,
    ExperimentConfig,
    RecordConfig,
    WavePacketExcitation,
)
from .lattice import CoinConfig
from .potentials import (
    DriftingPotential,
    KKMultiPole,
    Pole,
    RealPartOf,
    ShapeFunction,
    Tabulated,
    random_multipole,
)


class ConfigError(ValueError):
    """Experiment file could not be read or failed validation."""


def _parse_complex(value: Any) -> complex:
    if isinstance(value, complex):
        return value
    if isinstance(value, bool):
        raise ValueError("expected a complex number, got a boolean")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, str):
        return complex(value.replace(" ", "").replace("i", "j"))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ValueError(f"expected a complex number as 'a+bj' or [re, im], got {value!r}")


ComplexValue = Annotated[
    Any,
    BeforeValidator(_parse_complex),
    PlainSerializer(lambda z: [z.real, z.imag], return_type=list),
]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CoinSection(StrictModel):
    beta: float = Field(gt=0.0, lt=math.pi)


class PoleSection(StrictModel):
    amplitude: ComplexValue
    position: ComplexValue
    order: int = Field(default=2, ge=2)


class NoPotentialSection(StrictModel):
    kind: Literal["none"] = "none"


class KKPotentialSection(StrictModel):
    kind: Literal["kk", "real_kk"]
    poles: List[PoleSection] = Field(min_length=1)


class RandomKKSection(StrictModel):
    kind: Literal["random_kk"]
    count: int = Field(ge=1)
    base: ComplexValue
    amplitude_range: Tuple[float, float] = (0.0, 0.5)
    order: int = Field(default=2, ge=2)


class TabulatedSection(StrictModel):
    kind: Literal["tabulated"]
    x: List[float] = Field(min_length=2)
    re: List[float]
    im: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check_lengths(self) -> "TabulatedSection":
        if len(self.re) != len(self.x) or (self.im is not None and len(self.im) != len(self.x)):
            raise ValueError("tabulated x, re and im must have equal lengths")
        return self


PotentialSection = Annotated[
    Union[NoPotentialSection, KKPotentialSection, RandomKKSection, TabulatedSection],
    Field(discriminator="kind"),
]


class DeltaSection(StrictModel):
    kind: Literal["delta"] = "delta"
    site: int = 0


class WavePacketSection(StrictModel):
    kind: Literal["wavepacket"]
    q: float = Field(ge=-math.pi, le=math.pi)
    width: float = Field(ge=2.0)
    center: int = 0
    band: Literal["+", "-"] = "+"


ExcitationSection = Annotated[Union[DeltaSection, WavePacketSection], Field(discriminator="kind")]


class RecordSection(StrictModel):
    maps: List[Literal["P", "Q", "Pref"]] = ["P", "Q", "Pref"]
    fields: bool = False
    stride: int = Field(default=1, ge=1)
    sites: Optional[Tuple[int, int]] = None


class ChannelSection(StrictModel):
    enabled: bool = True
    q0: Optional[float] = Field(default=None, ge=-math.pi, le=math.pi)
    alpha: Tuple[int, int] = DEFAULT_ALPHA_RANGE


class AnalysisSection(StrictModel):
    support_fraction: float = Field(default=DEFAULT_SUPPORT_FRACTION, gt=0.0, lt=1.0)
    cone_margin: float = Field(default=DEFAULT_CONE_MARGIN, ge=0.0)
    require_separation: bool = True
    overflow_guard: float = Field(default=DEFAULT_OVERFLOW_GUARD, gt=0.0)


class OutputSection(StrictModel):
    dir: Optional[str] = None


class ExperimentFile(StrictModel):
    """Top-level experiment document."""

    name: str = "custom"
    coin: CoinSection
    drift: float = Field(default=0.0, ge=0.0)
    potential: PotentialSection = Field(default_factory=NoPotentialSection)
    excitation: ExcitationSection = Field(default_factory=DeltaSection)
    steps: int = Field(ge=1)
    window: Union[Literal["auto"], Tuple[int, int]] = "auto"
    record: RecordSection = Field(default_factory=RecordSection)
    channels: ChannelSection = Field(default_factory=ChannelSection)
    analysis: AnalysisSection = Field(default_factory=AnalysisSection)
    output: OutputSection = Field(default_factory=OutputSection)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_ranges(self) -> "ExperimentFile":
        if self.window != "auto" and self.window[1] < self.window[0]:
            raise ValueError(f"window must satisfy n_lo <= n_hi, got {list(self.window)}")
        if self.channels.alpha[1] < self.channels.alpha[0]:
            raise ValueError(f"channels.alpha must satisfy lo <= hi, got {list(self.channels.alpha)}")
        return self

    def build_shape(self) -> Optional[ShapeFunction]:
        section = self.potential
        if isinstance(section, NoPotentialSection):
            return None
        if isinstance(section, KKPotentialSection):
            shape = KKMultiPole(
                tuple(Pole(p.amplitude, p.position, p.order) for p in section.poles)
            )
            return RealPartOf(shape) if section.kind == "real_kk" else shape
        if isinstance(section, RandomKKSection):
            return random_multipole(
                section.count,
                section.base,
                section.amplitude_range,
                seed=self.seed,
                order=section.order,
            )
        im = section.im if section.im is not None else [0.0] * len(section.x)
        return Tabulated(np.asarray(section.x), np.asarray(section.re) + 1j * np.asarray(im))

    def to_experiment(self) -> ExperimentConfig:
        shape = self.build_shape()
        excitation = self.excitation
        if isinstance(excitation, WavePacketSection):
            built_excitation = WavePacketExcitation(
                excitation.q, excitation.width, excitation.center, excitation.band
            )
        else:
            built_excitation = DeltaExcitation(excitation.site)
        return ExperimentConfig(
            coin=CoinConfig(self.coin.beta),
            potential=None if shape is None else DriftingPotential(shape, self.drift),
            steps=self.steps,
            excitation=built_excitation,
            window=None if self.window == "auto" else tuple(self.window),
            record=RecordConfig(
                maps=tuple(self.record.maps),
                fields=self.record.fields,
                stride=self.record.stride,
                sites=self.record.sites,
            ),
            support_fraction=self.analysis.support_fraction,
            cone_margin=self.analysis.cone_margin,
            require_separation=self.analysis.require_separation,
            overflow_guard=self.analysis.overflow_guard,
            q0=self.channels.q0,
            alpha_range=self.channels.alpha,
            analyze_channels=self.channels.enabled,
            name=self.name,
        )

    def echo(self) -> dict:
        """JSON-ready copy of the document."""
        return self.model_dump(mode="json")


def parse_config(data: Any, source: str = "<config>") -> ExperimentFile:
    """Validate a decoded document, including the physical preconditions."""
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: expected a mapping at the top level")
    try:
        document = ExperimentFile.model_validate(data)
        document.to_experiment()
    except ValidationError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    return document


def load_config(path: Union[str, Path]) -> ExperimentFile:
    config_path = Path(path)
    if not config_path.is_file():
        raise FileNotFoundError(f"config not found: {config_path}")
    try:
        import yaml
    except ImportError as exc:
        raise ConfigError("PyYAML is required to read config files. Install with: pip install pyyaml") from exc

    try:
        with config_path.open("r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{config_path}: invalid YAML: {exc}") from exc
    return parse_config(data or {}, str(config_path))


def apply_overrides(
    document: ExperimentFile,
    *,
    seed: Optional[int] = None,
    steps: Optional[int] = None,
    out_dir: Optional[str] = None,
) -> ExperimentFile:
    """Command-line values take precedence over file values."""
    data = document.model_dump(mode="json")
    if seed is not None:
        data["seed"] = seed
    if steps is not None:
        data["steps"] = steps
    if out_dir is not None:
        data["output"] = {"dir": str(out_dir)}
    return parse_config(data, document.name)


__all__ = [
    "ConfigError",
    "ExperimentFile",
    "parse_config",
    "load_config",
    "apply_overrides",
]
