"""Seed replay fixtures from the shipped reference solutions.

A golden fixture is a canned chat completion whose content is the
reference abstraction for one benchmark. With these on disk the whole
batch runs offline on the replay transport, and every run of a seeded
benchmark scores full marks, which is exactly the property the
end-to-end determinism checks lean on.

Runs of one benchmark share a prompt bundle (the run index is not part
of the digest), so one fixture file serves an entire batch. Seeding
goes through the record transport against a stub server, the same code
path a real recording session takes.
"""

from __future__ import annotations

import warnings
from pathlib import Path

import httpx

from ..gateway import GatewayClient, LlmConfig, bundle_hash
from ..prompts import assemble
from .manifest import BenchmarkEntry, Manifest, load_artifacts


def golden_content(entry: BenchmarkEntry, manifest: Manifest) -> str:
    artifacts = load_artifacts(manifest, entry)
    return (
        f"The abstraction keeps only what the purpose needs: {entry.purpose}\n\n"
        f"{artifacts.hl_domain_text.rstrip()}\n\n"
        f"{artifacts.hl_problem_text.rstrip()}\n"
    )


def make_golden_fixtures(
    manifest: Manifest, fixtures_dir: str | Path, config: LlmConfig | None = None
) -> dict[str, str]:
    """Write one fixture per ready benchmark and shot; returns digest by name."""
    config = config or LlmConfig(api_key="golden-offline")
    canned: dict = {}

    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(200, json=canned)

    client = GatewayClient(
        config,
        fixtures_dir,
        transport="record",
        http_transport=httpx.MockTransport(handler),
        sleep=lambda _: None,
    )
    written: dict[str, str] = {}
    for entry in manifest.ready_entries():
        content = golden_content(entry, manifest)
        artifacts = load_artifacts(manifest, entry)
        for shot in entry.supported_shots:
            # demo collisions are expected here: the shipped one-shot demos
            # are these very benchmarks; the runner records the warning anyway
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                bundle = assemble(
                    entry.category,
                    shot,
                    description=entry.description,
                    domain_text=artifacts.ll_domain_text,
                    problem_text=artifacts.ll_problem_text,
                    purpose=entry.purpose,
                    topic=entry.id,
                )
            canned = {
                "id": f"golden-{entry.id}-{shot.value}",
                "object": "chat.completion",
                "model": config.model,
                "choices": [
                    {
                        "index": 0,
                        "message": {"role": "assistant", "content": content},
                        "finish_reason": "stop",
                    }
                ],
            }
            client.complete(bundle)
            written[f"{entry.id}/{shot.value}"] = bundle_hash(bundle)
    return written
