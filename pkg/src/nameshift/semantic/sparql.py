"""Live SPARQL-protocol backend with an on-disk response cache."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import threading
from pathlib import Path

import requests

from .kb import (LITERAL, RDFS_SUBCLASS_OF, RESOURCE, RESOURCE_BASE, KBUnavailable, KnowledgeBase, PropertyIndex,
                 Resource, Value, uri_from_name)

log = logging.getLogger(__name__)

_FORWARD = "SELECT ?p ?o WHERE {{ <{uri}> ?p ?o }}"
_INVERSE = "SELECT ?p ?s WHERE {{ ?s ?p <{uri}> }}"
_EXISTS = "ASK {{ <{uri}> ?p ?o }}"
_SUPER = "SELECT ?s WHERE {{ <{uri}> <" + RDFS_SUBCLASS_OF + "> ?s }} ORDER BY ?s LIMIT 1"


def _escape_uri(uri: str) -> str:
    return "".join("%{:02X}".format(ord(c)) if c in '<>"{}|\\^`' or ord(c) <= 32 else c for c in uri)


class SparqlKB(KnowledgeBase):
    def __init__(self, endpoint: str, cache_dir=None, timeout: float = 30.0, base: str = RESOURCE_BASE,
                 session: requests.Session | None = None):
        self.endpoint = endpoint
        self.base = base
        self.timeout = timeout
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.session = session or requests.Session()
        self._lock = threading.Lock()
        self._memory: dict[str, dict] = {}

    def _cache_path(self, query: str) -> Path | None:
        if self.cache_dir is None:
            return None
        digest = hashlib.sha256(f"{self.endpoint}\n{query}".encode()).hexdigest()
        return self.cache_dir / digest[:2] / f"{digest}.json"

    def _query(self, query: str) -> dict:
        if query in self._memory:
            return self._memory[query]
        path = self._cache_path(query)
        if path is not None and path.exists():
            with open(path, encoding="utf-8") as fh:
                result = json.load(fh)
        else:
            try:
                resp = self.session.get(self.endpoint, params={"query": query},
                                        headers={"Accept": "application/sparql-results+json"}, timeout=self.timeout)
                resp.raise_for_status()
                result = resp.json()
            except (requests.RequestException, ValueError) as exc:
                raise KBUnavailable(f"SPARQL endpoint {self.endpoint} failed: {exc}") from exc
            if path is not None:
                self._store(path, result)
        with self._lock:
            self._memory[query] = result
        return result

    def _store(self, path: Path, result: dict) -> None:
        with self._lock:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(result, fh)
            os.replace(tmp, path)

    @staticmethod
    def _bindings(result: dict) -> list[dict]:
        return result.get("results", {}).get("bindings", [])

    @staticmethod
    def _value(binding: dict) -> Value:
        kind = RESOURCE if binding.get("type") == "uri" else LITERAL
        return Value(binding["value"], kind)

    def lookup(self, name: str) -> Resource | None:
        name = name.strip()
        if not name:
            return None
        uri = uri_from_name(name[0].upper() + name[1:], self.base)
        result = self._query(_EXISTS.format(uri=_escape_uri(uri)))
        return Resource(uri) if result.get("boolean") else None

    def properties(self, resource: Resource) -> PropertyIndex:
        uri = _escape_uri(resource.uri)
        idx = PropertyIndex()
        for b in self._bindings(self._query(_FORWARD.format(uri=uri))):
            idx.add(b["p"]["value"], self._value(b["o"]))
        for b in self._bindings(self._query(_INVERSE.format(uri=uri))):
            idx.add(b["p"]["value"], self._value(b["s"]), inverse=True)
        return idx

    def super_type(self, type_id: str) -> str | None:
        if not type_id.startswith(("http://", "https://")):
            return None
        rows = self._bindings(self._query(_SUPER.format(uri=_escape_uri(type_id))))
        return rows[0]["s"]["value"] if rows else None

    def close(self) -> None:
        self.session.close()
