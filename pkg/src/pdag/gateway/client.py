"""Chat-completions client with live, record, and replay transports.

Fixtures are keyed by a digest of the prompt bundle, so recording is
idempotent and replay needs no network at all. The record transport is
what produced the golden fixtures shipped with the benchmark corpus.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from pathlib import Path

import httpx

from ..prompts import PromptBundle
from .config import LlmConfig


class GatewayError(Exception):
    pass


class AuthError(GatewayError):
    pass


class RateLimited(GatewayError):
    pass


class GatewayTimeout(GatewayError):
    pass


class FixtureMiss(GatewayError):
    def __init__(self, digest: str):
        self.digest = digest
        super().__init__(f"no recorded response for bundle {digest}")


def bundle_hash(bundle: PromptBundle) -> str:
    """Stable digest of what the model actually sees."""
    doc = {
        "template_version": bundle.template_version,
        "messages": [[m.role, m.content] for m in bundle.messages],
    }
    blob = json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass
class LlmResponse:
    content: str
    model: str
    raw: dict
    latency_s: float


class TokenBucket:
    """Blocking rate limiter: ``rate`` refills per second up to ``burst``."""

    def __init__(self, rate: float, burst: int, clock=time.monotonic, sleep=time.sleep):
        self.rate = rate
        self.burst = burst
        self._clock = clock
        self._sleep = sleep
        self._tokens = float(burst)
        self._last = clock()

    def acquire(self) -> None:
        now = self._clock()
        self._tokens = min(self.burst, self._tokens + (now - self._last) * self.rate)
        self._last = now
        if self._tokens < 1.0:
            wait = (1.0 - self._tokens) / self.rate
            self._sleep(wait)
            self._last = self._clock()
            self._tokens = 1.0
        self._tokens -= 1.0


class GatewayClient:
    def __init__(
        self,
        config: LlmConfig,
        fixtures_dir: str | Path,
        transport: str = "replay",
        http_transport: httpx.BaseTransport | None = None,
        sleep=time.sleep,
    ):
        if transport not in ("live", "record", "replay"):
            raise ValueError(f"unknown transport {transport!r}")
        self.config = config
        self.fixtures_dir = Path(fixtures_dir)
        self.transport = transport
        self._sleep = sleep
        self._http_transport = http_transport
        self._bucket = TokenBucket(config.requests_per_second, config.burst, sleep=sleep)

    # -- fixtures -------------------------------------------------------

    def _fixture_path(self, digest: str) -> Path:
        return self.fixtures_dir / f"{digest}.json"

    def _load_fixture(self, digest: str) -> dict | None:
        path = self._fixture_path(digest)
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def _store_fixture(self, digest: str, request: dict, response: dict) -> None:
        self.fixtures_dir.mkdir(parents=True, exist_ok=True)
        path = self._fixture_path(digest)
        tmp = path.with_suffix(".json.tmp")
        doc = {"request": request, "response": response}
        tmp.write_text(
            json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        os.replace(tmp, path)

    # -- calls ----------------------------------------------------------

    def _request_body(self, bundle: PromptBundle) -> dict:
        return {
            "model": self.config.model,
            "temperature": self.config.temperature,
            "messages": bundle.to_chat_messages(),
        }

    def _call_live(self, body: dict) -> dict:
        if not self.config.api_key:
            raise AuthError("no API key configured")
        headers = {"Authorization": f"Bearer {self.config.api_key}"}
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        client_kwargs = {"timeout": self.config.timeout}
        if self._http_transport is not None:
            client_kwargs["transport"] = self._http_transport
        last_error: GatewayError | None = None
        with httpx.Client(**client_kwargs) as client:
            for attempt in range(self.config.max_retries + 1):
                if attempt:
                    self._sleep(self.config.backoff_base * 2 ** (attempt - 1))
                self._bucket.acquire()
                try:
                    resp = client.post(url, json=body, headers=headers)
                except httpx.TimeoutException:
                    last_error = GatewayTimeout(f"request timed out (attempt {attempt + 1})")
                    continue
                if resp.status_code in (401, 403):
                    raise AuthError(f"authentication rejected ({resp.status_code})")
                if resp.status_code == 429:
                    last_error = RateLimited("throttled by server")
                    continue
                if resp.status_code >= 500:
                    last_error = GatewayError(f"server error {resp.status_code}")
                    continue
                if resp.status_code != 200:
                    raise GatewayError(f"unexpected status {resp.status_code}: {resp.text[:200]}")
                return resp.json()
        assert last_error is not None
        raise last_error

    @staticmethod
    def _to_response(raw: dict, latency_s: float) -> LlmResponse:
        try:
            content = raw["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as err:
            raise GatewayError(f"malformed completion payload: {err}") from err
        return LlmResponse(
            content=content,
            model=raw.get("model", ""),
            raw=raw,
            latency_s=latency_s,
        )

    def complete(self, bundle: PromptBundle) -> LlmResponse:
        digest = bundle_hash(bundle)
        body = self._request_body(bundle)
        if self.transport == "replay":
            fixture = self._load_fixture(digest)
            if fixture is None:
                raise FixtureMiss(digest)
            return self._to_response(fixture["response"], 0.0)
        if self.transport == "record":
            fixture = self._load_fixture(digest)
            if fixture is not None:
                return self._to_response(fixture["response"], 0.0)
            start = time.monotonic()
            raw = self._call_live(body)
            latency = time.monotonic() - start
            self._store_fixture(digest, body, raw)
            return self._to_response(raw, latency)
        start = time.monotonic()
        raw = self._call_live(body)
        return self._to_response(raw, time.monotonic() - start)
