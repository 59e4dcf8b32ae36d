"""Client for the HTTP service.

With no base URL the client mounts the app in-process (no socket, no server
process), so the CLI works standalone while speaking the exact wire format a
remote deployment would.  Pass a base URL to talk to a running server
instead.
"""

from __future__ import annotations

from typing import Any

import httpx

from .errors import TwlgaError


class ServiceError(TwlgaError):
    """Service returned an error status; carries the HTTP detail."""

    def __init__(self, status_code: int, detail: str):
        super().__init__(f"service error {status_code}: {detail}")
        self.status_code = status_code
        self.detail = detail


class ServiceClient:
    def __init__(self, base_url: str | None = None):
        if base_url is None:
            import warnings
            with warnings.catch_warnings():
                # starlette warns about its own httpx-backed TestClient import
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import create_app
            self._client: Any = TestClient(create_app())
        else:
            self._client = httpx.Client(base_url=base_url, timeout=600.0)

    def close(self) -> None:
        self._client.close()

    def __enter__(self) -> "ServiceClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    @staticmethod
    def _result(response: httpx.Response) -> dict:
        if response.status_code >= 400:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise ServiceError(response.status_code, str(detail))
        return response.json()

    def get(self, path: str) -> dict:
        return self._result(self._client.get(path))

    def post(self, path: str, payload: dict) -> dict:
        return self._result(self._client.post(path, json=payload))

    def health(self) -> dict:
        return self.get("/health")

    def artifacts(self, path: str, payload: dict) -> dict[str, str]:
        """POST a manifest-shaped payload, return the artifact file map."""
        return self.post(path, payload)["files"]
