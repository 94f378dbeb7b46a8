"""Cyclotomic classes C_a and cyclotomic numbers (a, b) of order e over F_q."""

import json
import time
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from cyclonum.errors import InvalidArgumentError
from cyclonum.finite_field import (
    FieldElement,
    FieldSpec,
    divisors,
    dlog_table,
    field_for,
    find_primitive,
    iter_prime_powers,
    make_field_spec,
    power_table,
)
from cyclonum.utils import elapsed_ms, log_event


class CyclotomyConfig(BaseModel):
    """One cyclotomy instance q = e*k + 1 with its canonical primitive element."""

    model_config = ConfigDict(frozen=True)

    spec: FieldSpec
    e: int
    k: int
    g: int

    @model_validator(mode="after")
    def check_invariants(self) -> "CyclotomyConfig":
        if self.e < 2 or self.k < 2:
            raise ValueError(f"e = {self.e}, k = {self.k}: both must be nontrivial (>= 2)")
        if self.spec.q != self.e * self.k + 1:
            raise ValueError(f"q = {self.spec.q} != e*k + 1 = {self.e * self.k + 1}")
        if not 0 < self.g < self.spec.q:
            raise ValueError(f"g = {self.g} is not a nonzero element of F_{self.spec.q}")
        return self

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def q(self) -> int:
        return self.spec.q

    def label(self) -> str:
        return f"q={self.q} (p={self.p}, n={self.n}) e={self.e} k={self.k}"


@lru_cache(maxsize=None)
def make_config(p: int, n: int, e: int) -> CyclotomyConfig:
    """
    Build the cyclotomy configuration of order e over F_{p^n}.

    Raises:
        InvalidArgumentError: p not prime, e does not divide q - 1, or e or
            k = (q - 1)/e is trivial
    """
    spec = make_field_spec(p, n)
    q = spec.q
    if e < 2:
        raise InvalidArgumentError(f"order e = {e} is trivial; need e >= 2")
    if (q - 1) % e:
        raise InvalidArgumentError(f"e = {e} does not divide q - 1 = {q - 1}")
    k = (q - 1) // e
    if k < 2:
        raise InvalidArgumentError(f"class size k = {k} is trivial; need k >= 2")
    return CyclotomyConfig(spec=spec, e=e, k=k, g=find_primitive(spec))


def admissible_configs(q_max: int, k_max: int = None, p_max: int = None) -> Iterator[CyclotomyConfig]:
    """Every config with q <= q_max (and k <= k_max, p <= p_max), ascending q then e."""
    for q, p, n in iter_prime_powers(q_max, p_max):
        for e in divisors(q - 1):
            k = (q - 1) // e
            if e < 2 or k < 2:
                continue
            if k_max is not None and k > k_max:
                continue
            yield make_config(p, n, e)


def class_index(x: FieldElement, cfg: CyclotomyConfig) -> int:
    """The a in [0, e) with x in C_a."""
    if x == 0:
        raise InvalidArgumentError("0 lies in no cyclotomic class")
    if not 0 < x < cfg.q:
        raise InvalidArgumentError(f"{x} is not an element of F_{cfg.q}")
    return int(dlog_table(cfg.spec, cfg.g)[x]) % cfg.e


class CyclotomicTable(BaseModel):
    """The e x e grid of cyclotomic numbers; counts[a, b] = (a, b)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    config: CyclotomyConfig
    counts: np.ndarray

    @model_validator(mode="after")
    def check_invariants(self) -> "CyclotomicTable":
        e, k, q = self.config.e, self.config.k, self.config.q
        if self.counts.shape != (e, e):
            raise ValueError(f"counts must be {e}x{e}, got {self.counts.shape}")
        if int(self.counts.sum()) != q - 2:
            raise ValueError(f"entries sum to {int(self.counts.sum())}, expected q - 2 = {q - 2}")
        if self.counts.min() < 0 or self.counts.max() > k:
            raise ValueError(f"entries must lie in [0, {k}]")
        return self

    def __getitem__(self, ab) -> int:
        a, b = ab
        e = self.config.e
        return int(self.counts[a % e, b % e])

    def to_lists(self):
        return [[int(v) for v in row] for row in self.counts]


def compute_table(cfg: CyclotomyConfig) -> CyclotomicTable:
    """
    All cyclotomic numbers of cfg in one O(q) sweep.

    The power table lists x = g^i in sweep order, so the class of x is i mod e;
    only 1 + x needs a log lookup. The x with 1 + x = 0 is dropped.
    """
    start = time.perf_counter()
    e, p = cfg.e, cfg.p

    powers = power_table(cfg.spec, cfg.g)
    logs = dlog_table(cfg.spec, cfg.g)

    c0 = powers % p
    ys = powers - c0 + (c0 + 1) % p
    keep = ys != 0

    a = np.arange(cfg.q - 1, dtype=np.int64) % e
    b = logs[ys[keep]] % e
    counts = np.bincount(a[keep] * e + b, minlength=e * e).astype(np.int64).reshape(e, e)
    counts.flags.writeable = False

    log_event(
        "table_computed",
        {"q": cfg.q, "e": e, "k": cfg.k, "latency_ms": elapsed_ms(start)},
        level="DEBUG",
    )
    return CyclotomicTable(config=cfg, counts=counts)


def brute_force_entry(cfg: CyclotomyConfig, a: int, b: int) -> int:
    """
    (a, b) as the literal count of pairs (r, s) with 1 + g^(a+re) = g^(b+se).

    Independent of the dlog tables; used as the oracle for compute_table.
    """
    if not (0 <= a < cfg.e and 0 <= b < cfg.e):
        raise InvalidArgumentError(f"(a, b) = ({a}, {b}) outside [0, {cfg.e})")
    field = field_for(cfg.spec)
    g, e, k = cfg.g, cfg.e, cfg.k

    rhs = [field.pow(g, b + s * e) for s in range(k)]
    count = 0
    for r in range(k):
        lhs = field.add(1, field.pow(g, a + r * e))
        for s in range(k):
            if lhs == rhs[s]:
                count += 1
    return count


def brute_force_table(cfg: CyclotomyConfig) -> List[List[int]]:
    """
    Every (a, b) from the definition: walk the powers of g to label each class,
    then count x in C_a with x + 1 in C_b. Shares no code with the dlog tables.
    """
    field = field_for(cfg.spec)
    e = cfg.e
    labels = {}
    x = 1
    for i in range(cfg.q - 1):
        labels[x] = i % e
        x = field.mul(x, cfg.g)

    counts = [[0] * e for _ in range(e)]
    for x, a in labels.items():
        y = field.add_one(x)
        if y:
            counts[a][labels[y]] += 1
    return counts


class UniformityStats(BaseModel):
    """Spread of a table around the asymptotic value q/e^2."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    min: int
    max: int
    expected: Fraction
    max_deviation: Fraction
    relative_deviation: Fraction

    def to_dict(self):
        return {
            "min": self.min,
            "max": self.max,
            "expected": str(self.expected),
            "max_deviation": str(self.max_deviation),
            "relative_deviation": str(self.relative_deviation),
        }


def uniformity_stats(table: CyclotomicTable) -> UniformityStats:
    """Exact min, max and largest |(a, b) - q/e^2| of a table."""
    q, e = table.config.q, table.config.e
    expected = Fraction(q, e * e)
    lo, hi = int(table.counts.min()), int(table.counts.max())
    deviation = max(abs(lo - expected), abs(hi - expected))
    return UniformityStats(
        min=lo,
        max=hi,
        expected=expected,
        max_deviation=deviation,
        relative_deviation=deviation / expected,
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def table_to_csv(table: CyclotomicTable) -> str:
    """Rows a, columns b, no header."""
    return "\n".join(",".join(str(int(v)) for v in row) for row in table.counts)


def table_to_json(table: CyclotomicTable) -> str:
    cfg = table.config
    return json.dumps(
        {"p": cfg.p, "n": cfg.n, "e": cfg.e, "k": cfg.k, "counts": table.to_lists()}
    )


def table_from_json(text: str) -> CyclotomicTable:
    data = json.loads(text)
    cfg = make_config(data["p"], data["n"], data["e"])
    if data.get("k", cfg.k) != cfg.k:
        raise InvalidArgumentError(f"k = {data['k']} inconsistent with q = {cfg.q}, e = {cfg.e}")
    counts = np.array(data["counts"], dtype=np.int64)
    counts.flags.writeable = False
    return CyclotomicTable(config=cfg, counts=counts)


def format_table(table: CyclotomicTable) -> str:
    """Human-readable grid with a and b labels."""
    e = table.config.e
    width = max(len(str(e - 1)), len(str(int(table.counts.max())))) + 1
    header = " " * (width + 2) + "".join(f"{b:>{width}}" for b in range(e))
    lines = [table.config.label(), header]
    for a in range(e):
        lines.append(f"{a:>{width}} |" + "".join(f"{int(v):>{width}}" for v in table.counts[a]))
    return "\n".join(lines)
