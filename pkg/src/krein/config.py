from __future__ import annotations

from pathlib import Path
from typing import Annotated, Any

from pydantic import Field, PositiveFloat, PositiveInt
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    TomlConfigSettingsSource,
)

from krein.report import OutputFormat


type RhoCut = Annotated[float, Field(ge=0.0, lt=1.0)]


class RunConfig(BaseSettings):
    """Run-wide numerical settings, from a TOML file and command-line overrides."""

    model_config = SettingsConfigDict(extra="forbid", frozen=True)

    nmax: Annotated[int, Field(ge=0, le=40, description="Highest total Fock level.")] = 8
    nodes: Annotated[int, Field(ge=1, le=512)] = 48
    tensor_nodes: Annotated[int, Field(ge=1, le=24)] = 12
    tol: PositiveFloat = 1e-10
    seed: int = 0
    format: OutputFormat = OutputFormat.JSON
    out: Path | None = None
    guard: bool = True
    logfire: bool = False

    c_values: list[PositiveFloat] = [1.0, 2.0, 4.0, 8.0]
    k_values: list[PositiveFloat] = [8.0, 16.0, 32.0, 64.0]
    rho_cuts: list[RhoCut] = [0.0, 0.5, 0.9, 0.99, 0.999]
    cutoffs: list[PositiveFloat] = [2.0, 4.0, 6.0, 8.0]
    tau: float = 3.0
    mass: PositiveFloat = 2.0
    fock_nmax: PositiveInt = 16

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)

    @classmethod
    def load(cls, path: Path | None = None, **overrides: Any) -> RunConfig:
        """Values from `path`, replaced by every override that is not None."""

        values: dict[str, Any] = {}
        if path is not None:
            values.update(TomlConfigSettingsSource(cls, toml_file=path)())
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def updated(self, **overrides: Any) -> RunConfig:
        return type(self).load(None, **{**self.model_dump(), **overrides})

    def echo(self) -> dict[str, Any]:
        return self.model_dump(mode="json")
