"""Chat-completion client for any OpenAI-wire-compatible endpoint."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import requests

from ..errors import EndpointError

log = logging.getLogger("musetune.instruct")

TRANSIENT_STATUS = {429, 500, 502, 503, 504}


@dataclass
class ChatClient:
    """POSTs {model, messages, temperature} and returns the reply text.

    Transient failures (connection errors, 429/5xx) are retried with
    exponential backoff up to ``max_retries``; anything else raises
    immediately.
    """

    endpoint_url: str
    api_key: str | None = None
    temperature: float = 0.7
    timeout_s: float = 60.0
    max_retries: int = 4
    backoff_base_s: float = 0.5

    def complete(self, model: str, system: str, user: str) -> str:
        payload = {
            "model": model,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
            "temperature": self.temperature,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"

        last_error = "no attempt made"
        for attempt in range(self.max_retries + 1):
            if attempt:
                delay = self.backoff_base_s * 2 ** (attempt - 1)
                log.debug("retry %d after %.2fs: %s", attempt, delay, last_error)
                time.sleep(delay)
            try:
                resp = requests.post(
                    self.endpoint_url, json=payload, headers=headers,
                    timeout=self.timeout_s,
                )
            except requests.RequestException as exc:
                last_error = f"connection failure: {exc}"
                continue
            if resp.status_code in TRANSIENT_STATUS:
                last_error = f"transient HTTP {resp.status_code}"
                continue
            if resp.status_code != 200:
                raise EndpointError(f"HTTP {resp.status_code}: {resp.text[:300]}")
            try:
                return resp.json()["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError) as exc:
                raise EndpointError(f"malformed completion payload: {exc}") from exc
        raise EndpointError(f"gave up after {self.max_retries} retries: {last_error}")
