"""Knowledge-base access and semantic filtering of co-reference candidates."""
from .filtering import (DROP, KEEP, CorefContext, Decision, Resolution, SemanticProfile, StaticContext,
                        disambiguate_direct, disambiguate_indirect, fetch_profile, find_disambiguation,
                        follow_redirects, resolve, resolve_profile, semantic_filter, similarity_filter,
                        type_chain, type_hierarchy_filter)
from .kb import KBUnavailable, KnowledgeBase, PropertyIndex, Resource, Value
from .snapshot import SnapshotError, SnapshotKB
from .sparql import SparqlKB

__all__ = [
    "DROP", "KEEP", "CorefContext", "Decision", "KBUnavailable", "KnowledgeBase", "PropertyIndex", "Resolution",
    "Resource", "SemanticProfile", "SnapshotError", "SnapshotKB", "SparqlKB", "StaticContext", "Value",
    "disambiguate_direct", "disambiguate_indirect", "fetch_profile", "find_disambiguation", "follow_redirects",
    "resolve", "resolve_profile", "semantic_filter", "similarity_filter", "type_chain", "type_hierarchy_filter",
]
