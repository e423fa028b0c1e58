from pydantic_settings import BaseSettings
from pydantic import validator, PositiveInt

class Settings(BaseSettings):
    PROJECT_NAME: str = "Relevance BVASS Toolkit"
    VERSION: str = "1.0.0"
    ENVIRONMENT: str = "development"
    DEBUG: bool = False

    @validator("DEBUG", pre=True, always=True)
    def set_debug_settings(cls, v: bool, values: dict) -> bool:
        if values.get("ENVIRONMENT") == "development":
            return True
        return bool(v)

    LOG_DIR: str = "logs"
    LOG_FILE: str = "app.log"
    LOG_MAX_BYTES: int = 100 * 1024 * 1024
    LOG_BACKUP_COUNT: int = 5

    # Proof search
    LR_NODE_BUDGET: PositiveInt = 2_000_000
    FR_NODE_BUDGET: PositiveInt = 2_000_000
    BOUNDED_DEPTH: int = 14

    @validator("LR_NODE_BUDGET", "FR_NODE_BUDGET", pre=True)
    def adjust_node_budget(cls, v: str | int, values: dict) -> int:
        v_int = int(v) if isinstance(v, str) else v
        if values.get("ENVIRONMENT") == "test":
            return max(10_000, v_int // 2)
        return v_int

    # Saturation solvers
    DEFAULT_CAP: int = 6
    HEIGHT_CAP: int = 8
    MEMORY_BUDGET_BYTES: PositiveInt = 2 * 1024 * 1024 * 1024
    BYTES_PER_CONFIG: PositiveInt = 96  # plus 8 bytes per coordinate
    COMPREHENSIVE_RULE_BUDGET: PositiveInt = 1 << 20

    # Batch runs
    DEFAULT_SEED: int = 20140714
    JOBS: PositiveInt = 4

    @validator("JOBS", pre=True)
    def validate_jobs(cls, v: int, values: dict) -> int:
        if values.get("ENVIRONMENT") == "development":
            return 1
        return v

    class Config:
        case_sensitive = True
        env_file = ".env"

settings = Settings()
