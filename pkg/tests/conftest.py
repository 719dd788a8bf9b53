"""Shared fixtures: a small corpus of families exercising every feature."""
from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import asymlp as a


@pytest.fixture(scope="session")
def corpus() -> dict[str, a.FamilySpec]:
    """Small materialised families covering all builders and both p values."""
    return {
        "f-p1": a.f_family(8, 1.0),
        "f-p2": a.f_family(8, 2.0),
        "g": a.g_family(8),
        "h": a.h_family(5),
        "u-p1": a.u_family(8, 1.0),
        "u-p2": a.u_family(8, 2.0),
        "v": a.v_family(6, 2.0),
        "lipschitz": a.lipschitz_family(4),
        "spike": a.spike_family(6, 1.0),
    }


@pytest.fixture(scope="session")
def corpus_members(corpus):
    """(label, member, p) triples for per-function checks."""
    out = []
    for name, fam in corpus.items():
        for k, member in zip(fam.indices, fam.members):
            out.append((f"{name}[{k}]", member, fam.p))
    return out
