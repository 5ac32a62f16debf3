"""Loads versioned prompt templates and assembles chat message lists.

Templates live as plain text files, one directory per (category, shot)
pair. The code never hardcodes prompt wording; it only fills the four
slots {{description}}, {{domain}}, {{problem}}, {{purpose}} in the user
query and stitches the demonstration turns around it for one-shot use.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from functools import lru_cache


class Category(Enum):
    ALT_ACTIONS = "AltActions"
    SEQ_ACTIONS = "SeqActions"
    PARAM_ABSTRACTION = "ParamAbstraction"
    ALT_SEQ_ACTIONS = "AltSeqActions"


class Shot(Enum):
    ZERO = "Zero"
    ONE = "One"


_DIRS = {
    Category.ALT_ACTIONS: "alt_actions",
    Category.SEQ_ACTIONS: "seq_actions",
    Category.PARAM_ABSTRACTION: "param_abstraction",
    Category.ALT_SEQ_ACTIONS: "alt_seq_actions",
}

_COMBOS = [
    (Category.ALT_ACTIONS, Shot.ZERO),
    (Category.ALT_ACTIONS, Shot.ONE),
    (Category.SEQ_ACTIONS, Shot.ONE),
    (Category.PARAM_ABSTRACTION, Shot.ZERO),
    (Category.ALT_SEQ_ACTIONS, Shot.ONE),
]

_SLOTS = ("description", "domain", "problem", "purpose")


class UnsupportedCombination(Exception):
    def __init__(self, category: Category, shot: Shot):
        self.category = category
        self.shot = shot
        super().__init__(f"no {shot.value}-shot template for {category.value}")


class TemplateError(Exception):
    pass


class EmptyDescriptionWarning(UserWarning):
    pass


class DemoCollisionWarning(UserWarning):
    """The query is about the same benchmark the demonstration answers."""


@dataclass(frozen=True)
class Message:
    role: str
    content: str


@dataclass(frozen=True)
class Template:
    category: Category
    shot: Shot
    version: str
    system: str
    user_query: str
    demo_user: str | None
    demo_assistant: str | None
    demo_topic: str | None
    anchors: tuple[str, ...]

    @property
    def template_version(self) -> str:
        return f"{_DIRS[self.category]}/{self.shot.value.lower()}@{self.version}"


@dataclass(frozen=True)
class PromptBundle:
    category: Category
    shot: Shot
    template_version: str
    messages: tuple[Message, ...]

    def to_chat_messages(self) -> list[dict]:
        return [{"role": m.role, "content": m.content} for m in self.messages]


def supported_combinations() -> list[tuple[Category, Shot]]:
    return list(_COMBOS)


def _template_dir(category: Category, shot: Shot):
    return (
        resources.files("pdag.prompts")
        / "templates"
        / _DIRS[category]
        / shot.value.lower()
    )


@lru_cache(maxsize=None)
def load_template(category: Category, shot: Shot) -> Template:
    if (category, shot) not in _COMBOS:
        raise UnsupportedCombination(category, shot)
    base = _template_dir(category, shot)
    meta = json.loads((base / "meta.json").read_text(encoding="utf-8"))
    system = (base / "system.txt").read_text(encoding="utf-8")
    user_query = (base / "user_query.txt").read_text(encoding="utf-8")
    demo_user = demo_assistant = None
    if shot is Shot.ONE:
        demo_user = (base / "demo_user.txt").read_text(encoding="utf-8")
        demo_assistant = (base / "demo_assistant.txt").read_text(encoding="utf-8")
    return Template(
        category=category,
        shot=shot,
        version=meta["version"],
        system=system,
        user_query=user_query,
        demo_user=demo_user,
        demo_assistant=demo_assistant,
        demo_topic=meta.get("demo_topic"),
        anchors=tuple(meta.get("anchors", [])),
    )


def _render(template: str, slots: dict[str, str]) -> str:
    out = template
    for key, value in slots.items():
        out = out.replace("{{" + key + "}}", value)
    leftover = sorted(set(re.findall(r"\{\{(\w+)\}\}", out)))
    if leftover:
        raise TemplateError(f"unfilled template slot(s): {', '.join(leftover)}")
    return out


def assemble(
    category: Category,
    shot: Shot,
    *,
    description: str,
    domain_text: str,
    problem_text: str,
    purpose: str,
    topic: str | None = None,
) -> PromptBundle:
    """Build the chat messages for one abstraction request.

    Zero-shot bundles carry [system, user]; one-shot bundles carry
    [system, demo user, demo assistant, user]. ``topic`` is the benchmark
    the query text came from, used only to notice demo overlap.
    """
    template = load_template(category, shot)
    if not description.strip():
        warnings.warn(
            f"{category.value}/{shot.value} query has an empty description",
            EmptyDescriptionWarning,
            stacklevel=2,
        )
    if topic is not None and template.demo_topic is not None and topic == template.demo_topic:
        warnings.warn(
            f"query topic {topic!r} matches the built-in demonstration; "
            "the answer is effectively given away",
            DemoCollisionWarning,
            stacklevel=2,
        )
    query = _render(
        template.user_query,
        {
            "description": description,
            "domain": domain_text,
            "problem": problem_text,
            "purpose": purpose,
        },
    )
    messages = [Message("system", template.system)]
    if shot is Shot.ONE:
        assert template.demo_user is not None and template.demo_assistant is not None
        messages.append(Message("user", template.demo_user))
        messages.append(Message("assistant", template.demo_assistant))
    messages.append(Message("user", query))
    return PromptBundle(
        category=category,
        shot=shot,
        template_version=template.template_version,
        messages=tuple(messages),
    )
