from typing import Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Randomized suites; CUBICA_SEED wins over --seed when set
    SEED: Optional[int] = None
    TRIALS: int = 20

    # Symbolic work grows fast with the dimension
    MAX_DIMENSION: int = 4

    LOG_LEVEL: str = "WARNING"

    # Report output: "memory" or "file"
    REPORT_SINK: str = "memory"
    REPORT_PATH: str = "cubica-report.json"

    @field_validator("MAX_DIMENSION")
    @classmethod
    def dimension_capped(cls, v: int) -> int:
        if not 1 <= v <= 4:
            raise ValueError("MAX_DIMENSION must lie in 1..4")
        return v

    class Config:
        env_file = ".env"
        env_prefix = "CUBICA_"


settings = Settings()
