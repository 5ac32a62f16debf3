"""Chat-completions access with record/replay fixtures and output extraction."""

from .client import (
    AuthError,
    FixtureMiss,
    GatewayClient,
    GatewayError,
    GatewayTimeout,
    LlmResponse,
    RateLimited,
    TokenBucket,
    bundle_hash,
)
from .config import LlmConfig
from .extract import (
    Extraction,
    ExtraBlocksWarning,
    MissingDomain,
    MissingProblem,
    UnbalancedExpression,
    extract_pddl,
)

__all__ = [
    "AuthError",
    "ExtraBlocksWarning",
    "Extraction",
    "FixtureMiss",
    "GatewayClient",
    "GatewayError",
    "GatewayTimeout",
    "LlmConfig",
    "LlmResponse",
    "MissingDomain",
    "MissingProblem",
    "RateLimited",
    "TokenBucket",
    "UnbalancedExpression",
    "bundle_hash",
    "extract_pddl",
]
