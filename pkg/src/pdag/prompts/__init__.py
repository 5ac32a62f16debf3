"""Prompt templates and chat-message assembly for abstraction requests."""

from .catalog import (
    Category,
    DemoCollisionWarning,
    EmptyDescriptionWarning,
    Message,
    PromptBundle,
    Shot,
    Template,
    TemplateError,
    UnsupportedCombination,
    assemble,
    load_template,
    supported_combinations,
)

__all__ = [
    "Category",
    "DemoCollisionWarning",
    "EmptyDescriptionWarning",
    "Message",
    "PromptBundle",
    "Shot",
    "Template",
    "TemplateError",
    "UnsupportedCombination",
    "assemble",
    "load_template",
    "supported_combinations",
]
