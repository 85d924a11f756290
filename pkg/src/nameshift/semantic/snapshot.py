"""Offline knowledge-base snapshot backed by a JSON Lines file.

Two record kinds share the file::

    {"uri": "http://dbpedia.org/resource/Sean_Combs",
     "properties": [["http://www.w3.org/1999/02/22-rdf-syntax-ns#type", "http://dbpedia.org/ontology/Person", "resource"],
                    ["http://dbpedia.org/ontology/birthDate", "1969-11-04", "literal"]],
     "redirect": null, "disambiguates": []}
    {"type": "http://dbpedia.org/ontology/Person", "super": "http://dbpedia.org/ontology/Agent"}

``redirect`` and ``disambiguates`` are shorthands for the redirect and
disambiguation predicates. Inverse properties are derived on load.
"""
from __future__ import annotations

import json
from collections import defaultdict
from pathlib import Path
from typing import Iterable

from ..terms import term_key
from .kb import (DISAMBIGUATES, LITERAL, REDIRECTS, RESOURCE, RESOURCE_BASE, KnowledgeBase, PropertyIndex,
                 Resource, Value, name_from_uri)


class SnapshotError(ValueError):
    pass


class SnapshotKB(KnowledgeBase):
    def __init__(self, records: Iterable[dict] = (), base: str = RESOURCE_BASE):
        self.base = base
        self._forward: dict[str, list[tuple[str, Value]]] = defaultdict(list)
        self._supers: dict[str, str] = {}
        self._known: set[str] = set()
        for rec in records:
            self._add(rec)
        self._inverse: dict[str, list[tuple[str, Value]]] = defaultdict(list)
        for subject, props in self._forward.items():
            for pred, v in props:
                if v.is_resource:
                    self._inverse[v.value].append((pred, Value(subject, RESOURCE)))
        self._by_name: dict[str, str] = {}
        self._by_key: dict = defaultdict(list)
        for uri in sorted(self._known):
            name = name_from_uri(uri)
            self._by_name.setdefault(name, uri)
            self._by_key[term_key(name)].append(uri)
        self._cache: dict[str, PropertyIndex] = {}

    @classmethod
    def load(cls, path) -> "SnapshotKB":
        path = Path(path)
        if not path.is_file():
            raise SnapshotError(f"knowledge-base snapshot {path} does not exist")
        records = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise SnapshotError(f"{path}:{lineno}: {exc}") from exc
        return cls(records)

    def _add(self, rec: dict) -> None:
        if "type" in rec and "uri" not in rec:
            if rec.get("super"):
                self._supers[rec["type"]] = rec["super"]
            return
        if "uri" not in rec:
            raise SnapshotError(f"record without uri: {rec!r}")
        uri = rec["uri"]
        self._known.add(uri)
        props = self._forward[uri]
        for item in rec.get("properties", ()):
            pred, value = item[0], item[1]
            kind = item[2] if len(item) > 2 else LITERAL
            if kind not in (LITERAL, RESOURCE):
                raise SnapshotError(f"bad value kind {kind!r} on {uri}")
            props.append((pred, Value(str(value), kind)))
        if rec.get("redirect"):
            props.append((REDIRECTS, Value(rec["redirect"], RESOURCE)))
        for target in rec.get("disambiguates", ()):
            props.append((DISAMBIGUATES, Value(target, RESOURCE)))

    def __len__(self) -> int:
        return len(self._known)

    def lookup(self, name: str) -> Resource | None:
        """Exact name first, then the case-folded, stemmed form of the name."""
        name = name.strip()
        if not name:
            return None
        uri = self._by_name.get(name)
        if uri is None:
            hits = self._by_key.get(term_key(name))
            uri = hits[0] if hits else None
        return Resource(uri) if uri else None

    def properties(self, resource: Resource) -> PropertyIndex:
        idx = self._cache.get(resource.uri)
        if idx is None:
            idx = PropertyIndex()
            for pred, v in self._forward.get(resource.uri, ()):
                idx.add(pred, v)
            for pred, v in self._inverse.get(resource.uri, ()):
                idx.add(pred, v, inverse=True)
            self._cache[resource.uri] = idx
        return idx.copy()

    def super_type(self, type_id: str) -> str | None:
        return self._supers.get(type_id)
