"""Seeded random ensembles matching the coefficient hypotheses under test.

Every sample is a pure function of its EnsembleSpec: the stream is a Philox
counter-based generator keyed by the seed, so equal specs give bit-identical
matrices. Campaigns derive one seed per trial with :func:`derive_seed`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources

import numpy as np

from .document import SCHEMA_VERSION, poly_from_doc
from .errors import InvalidSpec


class Kind(str, Enum):
    UNITARY_HAAR_LIKE = "UnitaryHaarLike"
    COMMUTING_UNITARY_PAIR = "CommutingUnitaryPair"
    COMMUTING_NORMAL_PAIR = "CommutingNormalPair"
    DOUBLY_STOCHASTIC_BIRKHOFF = "DoublyStochasticBirkhoff"
    PERMUTATION = "Permutation"
    POSITIVE_DEFINITE = "PositiveDefinite"
    DIAGONAL = "Diagonal"
    COMMUTING_PERMUTATION_FAMILY = "CommutingPermutationFamily"
    GINIBRE = "Ginibre"


PD_SHIFT = 1e-3


@dataclass(frozen=True)
class EnsembleSpec:
    kind: Kind
    n: int
    seed: int
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", Kind(self.kind))
        except ValueError as exc:
            raise InvalidSpec(f"unknown ensemble kind {self.kind!r}") from exc
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidSpec(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2**64:
            raise InvalidSpec(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def derive_seed(base: int, *keys: int) -> int:
    """Independent child seed for (base, keys), e.g. one per campaign trial."""
    seq = np.random.SeedSequence(int(base), spawn_key=tuple(int(k) for k in keys))
    return int(seq.generate_state(1, np.uint64)[0])


def _complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def haar_unitary(rng, n) -> np.ndarray:
    """Orthonormalized complex Gaussian matrix with the R-diagonal phases removed."""
    q, r = np.linalg.qr(_complex_gaussian(rng, (n, n)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def unimodular_diagonal(rng, n) -> np.ndarray:
    return np.diag(np.exp(1j * rng.uniform(0.0, 2 * np.pi, n)))


def permutation_matrix(rng, n) -> np.ndarray:
    return np.eye(n)[rng.permutation(n)]


def birkhoff(rng, n, terms) -> np.ndarray:
    """Convex combination of `terms` uniformly drawn permutation matrices."""
    weights = rng.dirichlet(np.ones(terms))
    out = np.zeros((n, n))
    for w in weights:
        out += w * permutation_matrix(rng, n)
    return out


def _count(spec, default):
    count = spec.extras.get("count", default)
    if not isinstance(count, int) or count < 1:
        raise InvalidSpec(f"count must be a positive integer, got {count!r}")
    return count


def sample(spec: EnsembleSpec):
    """One draw from the ensemble; pair/family kinds return a tuple of matrices."""
    rng = rng_for(spec.seed)
    n = spec.n
    kind = spec.kind
    if kind is Kind.UNITARY_HAAR_LIKE:
        return haar_unitary(rng, n)
    if kind is Kind.COMMUTING_UNITARY_PAIR:
        w = haar_unitary(rng, n)
        return tuple(w @ unimodular_diagonal(rng, n) @ w.conj().T for _ in range(_count(spec, 2)))
    if kind is Kind.COMMUTING_NORMAL_PAIR:
        w = haar_unitary(rng, n)
        return tuple(
            w @ np.diag(_complex_gaussian(rng, n)) @ w.conj().T for _ in range(_count(spec, 2))
        )
    if kind is Kind.DOUBLY_STOCHASTIC_BIRKHOFF:
        terms = spec.extras.get("terms", 3)
        if not isinstance(terms, int) or terms < 1:
            raise InvalidSpec(f"terms must be a positive integer, got {terms!r}")
        return birkhoff(rng, n, terms)
    if kind is Kind.PERMUTATION:
        return permutation_matrix(rng, n)
    if kind is Kind.POSITIVE_DEFINITE:
        g = _complex_gaussian(rng, (n, n))
        return g.conj().T @ g + PD_SHIFT * np.eye(n)
    if kind is Kind.DIAGONAL:
        return np.diag(_complex_gaussian(rng, n))
    if kind is Kind.COMMUTING_PERMUTATION_FAMILY:
        base = permutation_matrix(rng, n)
        powers = rng.integers(0, max(n, 1), size=_count(spec, 2))
        return tuple(np.linalg.matrix_power(base, int(k)) for k in powers)
    if kind is Kind.GINIBRE:
        return _complex_gaussian(rng, (n, n))
    raise InvalidSpec(f"unhandled ensemble kind {kind!r}")


# --- published fixtures -----------------------------------------------------

FIXTURE_FILE = "fixtures_v1.json"
FIXTURE_IDS = tuple(f"F{i}" for i in range(1, 14))


@dataclass(frozen=True)
class PaperFixture:
    id: str
    title: str
    payload: dict  # "pair": (P, Q) or "polynomials": (P, ...)
    expected: dict  # raw JSON values; complex numbers stay as [re, im]
    provenance: str

    @property
    def polynomials(self) -> tuple:
        return self.payload.get("pair") or self.payload.get("polynomials")


@lru_cache(maxsize=1)
def _raw_fixtures() -> dict:
    text = resources.files("polyspec.data").joinpath(FIXTURE_FILE).read_text(encoding="utf-8")
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise InvalidSpec(f"fixture file has schema {doc.get('schema_version')!r}")
    return doc


def fixtures() -> tuple:
    """The thirteen published examples, F1..F13, with their expected values."""
    out = []
    for entry in _raw_fixtures()["fixtures"]:
        payload = {k: tuple(poly_from_doc(d) for d in docs) for k, docs in entry["payload"].items()}
        out.append(
            PaperFixture(entry["id"], entry["title"], payload, entry["expected"], entry["provenance"])
        )
    return tuple(out)


def fixture(fid: str) -> PaperFixture:
    for f in fixtures():
        if f.id == fid:
            return f
    raise KeyError(fid)
