# equires/config.py

from typing import Literal, Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    GOLDEN_DIR: Optional[str] = None
    MAX_M: int = 8
    MAX_DIM: int = 3
    GAMMA_GUARD: int = 12
    MAX_STEPS: int = 64
    TRACE: Literal["none", "steps", "full"] = "steps"
    LOG_LEVEL: str = "INFO"
    JOBS: int = 1

    class Config:
        env_file = ".env"
        env_prefix = "EQUIRES_"

settings = Settings()
