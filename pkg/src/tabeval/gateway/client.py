"""HTTP client for chat-completions endpoints with a content-addressed response cache.

Every completed request is cached as cache/<model>/<sha256(prompt)>.json;
re-running a warmed pipeline issues zero HTTP requests, so expensive runs
are resumable and leaderboards reproducible from cached transcripts.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import httpx

from ..errors import EndpointError, ProtocolError

log = logging.getLogger(__name__)

_RETRYABLE_STATUS = {408, 409, 429, 500, 502, 503, 504}


@dataclass(frozen=True)
class LlmEndpointConfig:
    """Where and how to talk to a chat-completions-compatible endpoint."""

    base_url: str
    model: str
    api_key_env: str = "TABEVAL_API_KEY"
    max_concurrent: int = 4
    max_retries: int = 3
    timeout: float = 60.0
    cache_dir: Optional[str] = None

    def __post_init__(self) -> None:
        if self.max_concurrent < 1:
            raise ValueError("max_concurrent must be >= 1")
        if self.timeout <= 0:
            raise ValueError("timeout must be > 0")


def prompt_key(model: str, messages: list[dict[str, str]], temperature: float) -> str:
    payload = json.dumps(
        {"model": model, "messages": messages, "temperature": temperature},
        sort_keys=True,
        ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class _KeyedLocks:
    """One lock per cache key so concurrent identical requests collapse to one."""

    def __init__(self) -> None:
        self._guard = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}

    def get(self, key: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(key, threading.Lock())


class LlmClient:
    """Thread-safe gateway to one endpoint/model pair.

    ``transport`` exists for tests: an ``httpx.BaseTransport`` replaces
    real network I/O while exercising the full request path.
    """

    def __init__(
        self,
        cfg: LlmEndpointConfig,
        transport: Optional[httpx.BaseTransport] = None,
        backoff: float = 0.5,
    ) -> None:
        self.cfg = cfg
        self._semaphore = threading.BoundedSemaphore(cfg.max_concurrent)
        self._locks = _KeyedLocks()
        self._backoff = backoff
        headers = {}
        token = os.environ.get(cfg.api_key_env, "")
        if token:
            headers["Authorization"] = f"Bearer {token}"
        self._http = httpx.Client(timeout=cfg.timeout, transport=transport, headers=headers)

    # -- cache ---------------------------------------------------------------

    def _cache_path(self, key: str) -> Optional[Path]:
        if self.cfg.cache_dir is None:
            return None
        model_dir = self.cfg.model.replace("/", "_").replace(":", "_")
        return Path(self.cfg.cache_dir) / model_dir / f"{key}.json"

    def cached_response(self, key: str) -> Optional[str]:
        path = self._cache_path(key)
        if path is None or not path.exists():
            return None
        try:
            return json.loads(path.read_text(encoding="utf-8"))["response_text"]
        except (json.JSONDecodeError, KeyError, OSError):
            log.warning("discarding unreadable cache entry %s", path)
            return None

    def _store(self, key: str, messages: list[dict[str, str]], temperature: float, text: str) -> None:
        path = self._cache_path(key)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        record = {
            "model": self.cfg.model,
            "messages": messages,
            "temperature": temperature,
            "response_text": text,
            "cached_at": time.time(),
        }
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(record, fh, ensure_ascii=False)
            os.replace(tmp, path)
        except OSError:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    # -- requests --------------------------------------------------------------

    def complete(self, messages: list[dict[str, str]], temperature: float = 0.0) -> str:
        """Return the assistant message for a prompt, via cache when possible."""
        key = prompt_key(self.cfg.model, messages, temperature)
        cached = self.cached_response(key)
        if cached is not None:
            return cached
        with self._locks.get(key):
            cached = self.cached_response(key)  # may have been written while we waited
            if cached is not None:
                return cached
            text = self._request(messages, temperature)
            self._store(key, messages, temperature, text)
            return text

    def _request(self, messages: list[dict[str, str]], temperature: float) -> str:
        url = self.cfg.base_url.rstrip("/") + "/chat/completions"
        body = {"model": self.cfg.model, "messages": messages, "temperature": temperature}
        last_error: Optional[str] = None
        for attempt in range(self.cfg.max_retries + 1):
            if attempt:
                time.sleep(self._backoff * 2 ** (attempt - 1))
            with self._semaphore:
                try:
                    response = self._http.post(url, json=body)
                except httpx.HTTPError as exc:
                    last_error = f"transport failure: {exc}"
                    log.warning("request attempt %d failed: %s", attempt + 1, last_error)
                    continue
            if response.status_code in _RETRYABLE_STATUS:
                last_error = f"HTTP {response.status_code}"
                log.warning("request attempt %d failed: %s", attempt + 1, last_error)
                continue
            if response.status_code != 200:
                raise EndpointError(f"endpoint returned HTTP {response.status_code}: {response.text[:500]}")
            return self._extract_text(response)
        raise EndpointError(f"endpoint unreachable after {self.cfg.max_retries + 1} attempts: {last_error}")

    @staticmethod
    def _extract_text(response: httpx.Response) -> str:
        try:
            payload = response.json()
            return payload["choices"][0]["message"]["content"]
        except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
            raise ProtocolError(f"response is not chat-completions shaped: {exc}") from exc

    def close(self) -> None:
        self._http.close()

    def __enter__(self) -> "LlmClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
