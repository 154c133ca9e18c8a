"""
Application Configuration
Centralized configuration management for the Expansion Planning Engine
"""
import math
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra="ignore")

    # Application
    APP_NAME: str = "Expansion Planning Engine"
    VERSION: str = "1.0.0"
    DEBUG: bool = Field(default=False)

    # Logging
    LOG_LEVEL: str = Field(default="INFO")
    LOG_FILE: Optional[str] = Field(default=None)
    LOG_DIR: Optional[str] = Field(default="logs")

    # Outputs
    OUTPUT_DIR: str = Field(default="output")

    # Solver backend
    SOLVER_BACKEND: str = Field(default="embedded")  # embedded or external
    EXTERNAL_SOLVER_COMMAND: Optional[str] = Field(default=None)  # e.g. "cbc {model} solve solu {solution}"
    EXTERNAL_SOLVER_FORMAT: str = Field(default="cbc")
    EXTERNAL_SOLVER_TIMEOUT: int = Field(default=3600)

    # Solver tolerances and limits
    FEASIBILITY_TOLERANCE: float = Field(default=1e-7)
    OPTIMALITY_TOLERANCE: float = Field(default=1e-7)
    INTEGRALITY_TOLERANCE: float = Field(default=1e-6)
    MIP_GAP: float = Field(default=1e-6)
    NODE_LIMIT: int = Field(default=100000)
    TIME_LIMIT_SECONDS: float = Field(default=3600.0)
    ITERATION_LIMIT: int = Field(default=500000)
    REFACTOR_FREQUENCY: int = Field(default=100)
    DEGENERACY_THRESHOLD: int = Field(default=50)

    # Formulation
    THETA_MAX: float = Field(default=math.pi / 2)
    FORMULATION_WORKERS: int = Field(default=1)

    # Export
    MPS_NAME_LIMIT: int = Field(default=255)

    # Typical days
    CLUSTERING_SEED: int = Field(default=0)


# Create settings instance
settings = Settings()
