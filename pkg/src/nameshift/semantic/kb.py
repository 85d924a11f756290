"""Knowledge-base interface and the dual-keyed property index."""
from __future__ import annotations

import abc
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, NamedTuple

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
RDFS_SUBCLASS_OF = "http://www.w3.org/2000/01/rdf-schema#subClassOf"
DCT_SUBJECT = "http://purl.org/dc/terms/subject"
REDIRECTS = "http://dbpedia.org/ontology/wikiPageRedirects"
DISAMBIGUATES = "http://dbpedia.org/ontology/wikiPageDisambiguates"
RESOURCE_BASE = "http://dbpedia.org/resource/"

LITERAL = "literal"
RESOURCE = "resource"

# key prefix for inverse properties: (value -> is-property-of -> resource)
INVERSE = "^"

DISAMBIGUATION_SUFFIX = " (disambiguation)"


class KBUnavailable(RuntimeError):
    """The knowledge base could not be reached; the operation may be retried."""


def local_name(uri: str) -> str:
    cut = max(uri.rfind("#"), uri.rfind("/"))
    return uri[cut + 1:] if cut >= 0 else uri


def name_from_uri(uri: str) -> str:
    return local_name(uri).replace("_", " ")


def uri_from_name(name: str, base: str = RESOURCE_BASE) -> str:
    return base + name.strip().replace(" ", "_")


@dataclass(frozen=True, order=True)
class Resource:
    uri: str

    @property
    def name(self) -> str:
        return name_from_uri(self.uri)

    def __str__(self) -> str:
        return self.name


class Value(NamedTuple):
    value: str
    kind: str = LITERAL

    @property
    def is_resource(self) -> bool:
        return self.kind == RESOURCE

    @property
    def text(self) -> str:
        """Literal text, or the readable name of a resource value."""
        return name_from_uri(self.value) if self.is_resource else self.value


class PropertyIndex:
    """Every ``(predicate, value)`` is reachable by full predicate URI and by its local name.

    Adding is append-only; merging another index never drops entries.
    """

    def __init__(self):
        self.by_uri: dict[str, list[Value]] = defaultdict(list)
        self.by_local_name: dict[str, list[Value]] = defaultdict(list)

    def add(self, predicate: str, value: Value, inverse: bool = False) -> None:
        prefix = INVERSE if inverse else ""
        bucket = self.by_uri[prefix + predicate]
        if value in bucket:
            return
        bucket.append(value)
        self.by_local_name[prefix + local_name(predicate)].append(value)

    def extend(self, other: "PropertyIndex") -> None:
        for key, values in other.by_uri.items():
            inverse = key.startswith(INVERSE)
            pred = key[1:] if inverse else key
            for v in values:
                self.add(pred, v, inverse)

    def copy(self) -> "PropertyIndex":
        out = PropertyIndex()
        out.extend(self)
        return out

    def get(self, key: str, inverse: bool = False) -> list[Value]:
        """Values under a predicate URI or local name."""
        prefix = INVERSE if inverse else ""
        if key in self.by_uri or prefix + key in self.by_uri:
            return list(self.by_uri.get(prefix + key, ()))
        return list(self.by_local_name.get(prefix + key, ()))

    def items(self, include_inverse: bool = True) -> Iterator[tuple[str, Value]]:
        for key, values in self.by_uri.items():
            if not include_inverse and key.startswith(INVERSE):
                continue
            for v in values:
                yield key, v

    def __len__(self) -> int:
        return sum(len(v) for v in self.by_uri.values())

    def __bool__(self) -> bool:
        return any(self.by_uri.values())


class KnowledgeBase(abc.ABC):
    """Read-only view of a linked-data knowledge base."""

    @abc.abstractmethod
    def lookup(self, name: str) -> Resource | None:
        ...

    @abc.abstractmethod
    def properties(self, resource: Resource) -> PropertyIndex:
        """Forward and inverse properties of ``resource``."""

    @abc.abstractmethod
    def super_type(self, type_id: str) -> str | None:
        ...

    def redirect_target(self, resource: Resource) -> Resource | None:
        for v in self.properties(resource).get(REDIRECTS):
            if v.is_resource:
                return Resource(v.value)
        return None

    def disambiguation_candidates(self, resource: Resource) -> list[Resource]:
        return [Resource(v.value) for v in self.properties(resource).get(DISAMBIGUATES) if v.is_resource]

    def close(self) -> None:
        pass
