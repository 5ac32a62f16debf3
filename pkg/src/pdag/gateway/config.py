"""Gateway configuration."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

DEFAULT_MODEL = "gpt-4o"
DEFAULT_TEMPERATURE = 1.0
API_KEY_ENV = "PDAG_API_KEY"


@dataclass
class LlmConfig:
    model: str = DEFAULT_MODEL
    temperature: float = DEFAULT_TEMPERATURE
    base_url: str = "https://api.openai.com/v1"
    api_key: str | None = field(default=None, repr=False)
    timeout: float = 60.0
    max_retries: int = 3
    backoff_base: float = 0.5
    requests_per_second: float = 2.0
    burst: int = 4

    def __post_init__(self) -> None:
        if self.api_key is None:
            self.api_key = os.environ.get(API_KEY_ENV)
        if not self.model:
            raise ValueError("model must be non-empty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature {self.temperature} outside [0, 2]")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.requests_per_second <= 0 or self.burst < 1:
            raise ValueError("rate limit parameters must be positive")
