from typing import List

from pydantic import BaseSettings, validator


class Settings(BaseSettings):
    # Group engine bounds
    max_closure_order: int = 10_000
    max_table_order: int = 1_024
    max_order: int = 64

    # ε-lattice automorphisms
    enum_threshold: int = 10_000
    brute_force_max_carrier: int = 7
    extension_sample: int = 100

    # Theorem suite scopes
    pair_scope_max_order: int = 24
    single_scope_max_order: int = 48

    # Reports
    supported_languages: List[str] = ["en"]
    report_language: str = "en"

    # Logging
    log_level: str = "WARNING"

    @validator(
        'max_closure_order', 'max_table_order', 'max_order', 'enum_threshold',
        'brute_force_max_carrier', 'extension_sample',
        'pair_scope_max_order', 'single_scope_max_order',
    )
    def validate_positive(cls, v, field):
        if v < 1:
            raise ValueError(f'{field.name} must be a positive integer')
        return v

    @validator('log_level')
    def validate_log_level(cls, v):
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f'Unknown log level: {v}')
        return level

    @validator('report_language')
    def validate_report_language(cls, v, values):
        if v not in values.get('supported_languages', ["en"]):
            raise ValueError(f'Unsupported report language: {v}')
        return v

    def bound(self, name: str, override=None) -> int:
        """Return an explicit override or the configured bound."""
        return override if override is not None else getattr(self, name)

    class Config:
        env_file = ".env"
        env_prefix = "ELATLAB_"
        case_sensitive = False


settings = Settings()
