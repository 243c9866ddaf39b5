# modshare/config/settings.py

import json
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from modshare.domain.exceptions.exception import ConfigException
from modshare.domain.models.common import OutputFormat, Pipelining

CONFIG_PATH = Path.home() / ".modshare" / "config.json"


class PlacementSettings(BaseModel):
    include_cloud: bool = False
    replicate: bool = False
    # False leaves task heads out of the accumulated encoder completion time
    accumulate_heads: bool = True
    brute_force_limit: int = Field(default=10**7, ge=1)


class RoutingSettings(BaseModel):
    brute_force_limit: int = Field(default=10**6, ge=1)


class SimulationSettings(BaseModel):
    end_to_end: bool = False
    pipelining: Pipelining = Pipelining.fine
    parallel_encoding: bool = True


class OutputSettings(BaseModel):
    format: OutputFormat = OutputFormat.table


class AppConfig(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="MODSHARE_",
        env_nested_delimiter="__",
        extra="ignore"
    )

    scenario_dir: Optional[Path] = None
    log_level: str = "WARNING"

    placement: PlacementSettings = PlacementSettings()
    routing: RoutingSettings = RoutingSettings()
    simulation: SimulationSettings = SimulationSettings()
    output: OutputSettings = OutputSettings()

    @classmethod
    def load(cls) -> "AppConfig":
        if not CONFIG_PATH.exists():
            return cls()
        try:
            with open(CONFIG_PATH, "r", encoding="utf-8") as f:
                file_config = json.load(f)
            return cls(**file_config)
        except (json.JSONDecodeError, ValidationError) as e:
            raise ConfigException(f"Invalid config file {CONFIG_PATH}: {e}")

    def save(self):
        CONFIG_PATH.parent.mkdir(parents=True, exist_ok=True)
        with open(CONFIG_PATH, "w", encoding="utf-8") as f:
            json.dump(self.model_dump(mode="json"), f, indent=2)

    def update(self, key: str, value: str) -> "AppConfig":
        if key not in get_config_keys(self):
            raise ConfigException(f"Unknown key '{key}'. Options: {', '.join(get_config_keys(self))}")
        current_data = self.model_dump(mode="json")

        ref = current_data
        parts = key.split(".")
        for part in parts[:-1]:
            ref = ref[part]
        ref[parts[-1]] = value

        try:
            updated = AppConfig(**current_data)
        except ValidationError as e:
            raise ConfigException(f"Invalid value '{value}' for '{key}': {e.errors()[0]['msg']}")
        updated.save()
        return updated


def get_config_keys(config: BaseModel, prefix="") -> List[str]:
    keys = []
    for field, value in config:
        full_key = f"{prefix}.{field}" if prefix else field
        if isinstance(value, BaseModel):
            keys.extend(get_config_keys(value, prefix=full_key))
        else:
            keys.append(full_key)
    return keys


settings = AppConfig.load()
