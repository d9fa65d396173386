from typing import Tuple

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    SEED: int = 20240101
    SAMPLE_RHO_RANGE: Tuple[float, float] = (0.1, 10.0)
    SAMPLE_P_RANGE: Tuple[float, float] = (0.1, 10.0)
    SAMPLE_U_RANGE: Tuple[float, float] = (-5.0, 5.0)

    RANK_TOL: float = 1e-10
    EXACT_TOL: float = 1e-10
    DERIVATIVE_TOL: float = 1e-8
    FD_STEP: float = 1e-6
    RESIDUAL_FD_STEP: float = 1e-5
    ODE_TOL: float = 1e-10
    QUADRATURE_NODES: int = 64

    CFL: float = 0.45
    GRADIENT_LIMIT: float = 1e6

    SUPPORT_THRESHOLD: float = 0.02
    COLLAR_CELLS: int = 5
    SUPPORT_SCALE: str = "common"

    MAX_GRADE: int = 6
    CLOSURE_STATES: int = 50
    CLOSURE_TOL: float = 1e-7

    OUTPUT_DIR: str = "out"
    LOG_LEVEL: str = "INFO"

    class Config:
        env_file = ".env"
        env_prefix = "WAVELAB_"
        extra = "ignore"


settings = Settings()
