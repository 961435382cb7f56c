from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    LOG_LEVEL: str = "WARNING"
    ENUMERATION_LIMIT: int = 1000
    DEFAULT_POLICY: str = "smallest"
    MAX_STATES: int = 1 << 16
    INDENT_JSON: int = 2

    class Config:
        env_file = ".env"
        env_prefix = "LEDLEY_"

settings = Settings()
