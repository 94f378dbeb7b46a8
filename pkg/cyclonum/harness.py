"""Theorem verification over cyclotomy configurations.

Each config gets one VerificationReport holding a TheoremRecord per statement.
A record's premise is an exact integer inequality in p, k and ord_k(p); when
it holds the conclusion is checked against the computed table, otherwise the
record is vacuous and never counts as a confirmation.
"""

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, Iterable, Iterator, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from cyclonum.config import settings
from cyclonum.cyclotomy import (
    CyclotomicTable,
    CyclotomyConfig,
    admissible_configs,
    brute_force_table,
    class_index,
    compute_table,
    make_config,
    uniformity_stats,
)
from cyclonum.errors import CounterexampleError, InvalidArgumentError, UnsupportedCaseError
from cyclonum.finite_field import euler_phi, field_for, is_prime, mult_order
from cyclonum.utils import elapsed_ms, log_event

Status = Literal["pass", "vacuous", "fail", "unsupported"]

THEOREM_IDS = (
    "bound_all_3",
    "bound_all_2_prime_k",
    "general_bound_14k",
    "diag_00_exact",
    "diag_00_exact_alt",
    "row0_bound",
    "col0_bound",
    "diag_aa_bound",
    "offdiag_ab_bound",
    "diag_00_exact_prime_k",
    "col0_diag_bound_prime_k",
    "row0_bound_prime_k",
    "offdiag_ab_bound_prime_k",
    "oracle",
)


class TheoremRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    theorem_id: str
    premise: bool
    conclusion_checked: bool
    conclusion_holds: Optional[bool] = None
    status: Status
    witnesses: List[Tuple[int, int]] = Field(default_factory=list)
    detail: Optional[str] = None

    @model_validator(mode="after")
    def check_vacuity(self) -> "TheoremRecord":
        if not self.premise and self.conclusion_checked:
            raise ValueError(f"{self.theorem_id}: conclusion checked under a false premise")
        if self.conclusion_checked != (self.conclusion_holds is not None):
            raise ValueError(f"{self.theorem_id}: conclusion_holds set iff checked")
        expected = {True: "pass", False: "fail", None: None}[self.conclusion_holds]
        if expected is not None and self.status != expected:
            raise ValueError(f"{self.theorem_id}: status {self.status} contradicts the check")
        if not self.conclusion_checked and self.status in ("pass", "fail"):
            raise ValueError(f"{self.theorem_id}: unchecked records cannot pass or fail")
        return self


class VerificationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    n: int
    q: int
    e: int
    k: int
    records: List[TheoremRecord]
    stats: Dict[str, Any]
    timing_ms: Optional[float] = None

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.records)

    @property
    def key(self) -> Tuple[int, int, int, int]:
        return (self.p, self.n, self.e, self.k)

    def record(self, theorem_id: str) -> Optional[TheoremRecord]:
        for r in self.records:
            if r.theorem_id == theorem_id:
                return r
        return None

    def failures(self) -> List[TheoremRecord]:
        return [r for r in self.records if r.status == "fail"]

    def to_jsonl(self) -> str:
        return self.model_dump_json(exclude_none=True)


class Prediction00(BaseModel):
    model_config = ConfigDict(frozen=True)

    premise: bool
    alt_premise: bool
    two_in_c0: bool
    six_divides_k: bool
    value: int


class FermatReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    e: int
    k: int
    premise: bool
    six_divides_k: bool
    two_is_eth_power: bool
    mode: Literal["exhaustive", "sampled", "none"]
    pairs_checked: int
    status: Status
    offending_pair: Optional[Tuple[int, int]] = None


# ---------------------------------------------------------------------------
# Premises (exact integer forms)
# ---------------------------------------------------------------------------


def _premise_ratio(p: int, k: int, c: int, phi: int = None) -> bool:
    """p > (c*k/phi)^(phi/(2*ord_k(p))), i.e. p^(2*ord) * phi^phi > (c*k)^phi."""
    b = mult_order(p, k)
    phi = euler_phi(k) if phi is None else phi
    return p ** (2 * b) * phi**phi > (c * k) ** phi


def premise_main1(p: int, k: int) -> bool:
    """p > sqrt(14)^(k/ord_k(p)), as p^(2*ord) > 14^k."""
    return p ** (2 * mult_order(p, k)) > 14**k


def premise_main2(p: int, k: int) -> bool:
    """p > (3^(k-1) * k)^(1/ord_k(p)) for prime k."""
    if not is_prime(k):
        raise InvalidArgumentError(f"k = {k} is not prime")
    return p ** mult_order(p, k) > 3 ** (k - 1) * k


def _premise_row0_prime_k(p: int, k: int) -> bool:
    return p ** mult_order(p, k) > 2 ** (k - 1) * k


def _premise_alt_00(p: int, k: int) -> bool:
    return p ** (2 * mult_order(p, k)) > 3**k


# ---------------------------------------------------------------------------
# Record builders
# ---------------------------------------------------------------------------


def _vacuous(theorem_id: str) -> TheoremRecord:
    return TheoremRecord(
        theorem_id=theorem_id, premise=False, conclusion_checked=False, status="vacuous"
    )


def _unsupported(theorem_id: str, premise: bool, detail: str) -> TheoremRecord:
    return TheoremRecord(
        theorem_id=theorem_id,
        premise=premise,
        conclusion_checked=False,
        status="unsupported",
        detail=detail,
    )


def _checked(theorem_id: str, witnesses: List[Tuple[int, int]], detail: str = None) -> TheoremRecord:
    holds = not witnesses
    return TheoremRecord(
        theorem_id=theorem_id,
        premise=True,
        conclusion_checked=True,
        conclusion_holds=holds,
        status="pass" if holds else "fail",
        witnesses=witnesses,
        detail=detail,
    )


def _cells(mask: np.ndarray, row_offset: int = 0, col_offset: int = 0) -> List[Tuple[int, int]]:
    return [(int(a) + row_offset, int(b) + col_offset) for a, b in np.argwhere(mask)]


def _two_is_eth_power(p: int, k: int) -> bool:
    """2 lies in the subgroup of e-th powers mod p = e*k + 1 iff 2^k = 1."""
    return pow(2, k, p) == 1


def _class_of_two(cfg: CyclotomyConfig) -> int:
    """Class index of 2 = 1 + 1; raises for p = 2 where 2 = 0."""
    if cfg.p == 2:
        raise UnsupportedCaseError("2 = 0 in characteristic 2; membership of 2 in C_a is undefined")
    return class_index(field_for(cfg.spec).from_int(2), cfg)


def _table_for(cfg: CyclotomyConfig, table: Optional[CyclotomicTable]) -> CyclotomicTable:
    return table if table is not None else compute_table(cfg)


def _bound_all(theorem_id: str, premise: bool, table: CyclotomicTable, bound: int) -> TheoremRecord:
    if not premise:
        return _vacuous(theorem_id)
    return _checked(theorem_id, _cells(table.counts > bound))


def _row0(theorem_id: str, table: CyclotomicTable, bounds: np.ndarray) -> TheoremRecord:
    return _checked(theorem_id, _cells(table.counts[0:1, 1:] > bounds, 0, 1))


def _col0_and_diag(table: CyclotomicTable, bounds: np.ndarray, which: str) -> List[Tuple[int, int]]:
    e = table.config.e
    if which == "col0":
        values = table.counts[1:, 0]
        return [(a, 0) for a in range(1, e) if values[a - 1] > bounds[a - 1]]
    values = np.diagonal(table.counts)[1:]
    return [(a, a) for a in range(1, e) if values[a - 1] > bounds[a - 1]]


def _offdiag(table: CyclotomicTable, bound: int) -> List[Tuple[int, int]]:
    sub = table.counts[1:, 1:]
    mask = (sub > bound) & ~np.eye(sub.shape[0], dtype=bool)
    return _cells(mask, 1, 1)


# ---------------------------------------------------------------------------
# Verification operations
# ---------------------------------------------------------------------------


def verify_main1(cfg: CyclotomyConfig, table: CyclotomicTable = None) -> TheoremRecord:
    """Every (a, b) <= 3 under p^(2*ord) > 14^k."""
    premise = premise_main1(cfg.p, cfg.k)
    return _bound_all("bound_all_3", premise, _table_for(cfg, table) if premise else None, 3)


def verify_main2(cfg: CyclotomyConfig, table: CyclotomicTable = None) -> TheoremRecord:
    """Every (a, b) <= 2 under p^ord > 3^(k-1) * k, prime k."""
    if not is_prime(cfg.k):
        raise InvalidArgumentError(f"k = {cfg.k} is not prime")
    premise = premise_main2(cfg.p, cfg.k)
    return _bound_all("bound_all_2_prime_k", premise, _table_for(cfg, table) if premise else None, 2)


def verify_general_bound(cfg: CyclotomyConfig, table: CyclotomicTable = None) -> TheoremRecord:
    """Every (a, b) <= 3 under the 14k/phi(k) premise."""
    premise = _premise_ratio(cfg.p, cfg.k, 14)
    return _bound_all("general_bound_14k", premise, _table_for(cfg, table) if premise else None, 3)


def predicted_00(cfg: CyclotomyConfig) -> Prediction00:
    """
    Value of (0, 0) predicted from 6 | k and 2 in C_0, with its premise.

    Raises:
        UnsupportedCaseError: p = 2
    """
    two_in_c0 = _class_of_two(cfg) == 0
    six = cfg.k % 6 == 0
    value = (2 if six else 0) + (1 if two_in_c0 else 0)
    return Prediction00(
        premise=_premise_ratio(cfg.p, cfg.k, 3),
        alt_premise=_premise_alt_00(cfg.p, cfg.k),
        two_in_c0=two_in_c0,
        six_divides_k=six,
        value=value,
    )


def _diag_00_records(cfg: CyclotomyConfig, table: Optional[CyclotomicTable]) -> List[TheoremRecord]:
    premise = _premise_ratio(cfg.p, cfg.k, 3)
    alt = _premise_alt_00(cfg.p, cfg.k)
    if cfg.p == 2:
        return [
            _unsupported("diag_00_exact", premise, "p = 2") if premise else _vacuous("diag_00_exact"),
            _unsupported("diag_00_exact_alt", alt, "p = 2") if alt else _vacuous("diag_00_exact_alt"),
        ]
    pred = predicted_00(cfg)
    records = []
    for theorem_id, holds in (("diag_00_exact", premise), ("diag_00_exact_alt", alt)):
        if not holds:
            records.append(_vacuous(theorem_id))
            continue
        actual = _table_for(cfg, table)[0, 0]
        witnesses = [] if actual == pred.value else [(0, 0)]
        records.append(_checked(theorem_id, witnesses, f"predicted {pred.value}, computed {actual}"))
    return records


def verify_case_theorems(cfg: CyclotomyConfig, table: CyclotomicTable = None) -> List[TheoremRecord]:
    """
    Records for the five case statements: (0, 0) exactly, then (0, a), (a, 0),
    (a, a) and (a, b) for a != b in [1, e).
    """
    records = _diag_00_records(cfg, table)
    e, k = cfg.e, cfg.k
    premise4 = _premise_ratio(cfg.p, k, 4)

    # (0, a): 3 if 2 in C_a else 2
    if not premise4:
        records.append(_vacuous("row0_bound"))
    elif cfg.p == 2:
        records.append(_unsupported("row0_bound", True, "p = 2"))
    else:
        table = _table_for(cfg, table)
        two = _class_of_two(cfg)
        bounds = np.full(e - 1, 2, dtype=np.int64)
        if two != 0:
            bounds[two - 1] = 3
        records.append(_row0("row0_bound", table, bounds))

    # (a, 0): for even k, 3 if 2 in C_a else 2; for odd k, 2.
    # (a, a) = (-a, 0), so its raised bound sits at -a: 3 if 2 in C_{-a}.
    for theorem_id, which in (("col0_bound", "col0"), ("diag_aa_bound", "diag")):
        if not premise4:
            records.append(_vacuous(theorem_id))
            continue
        table = _table_for(cfg, table)
        bounds = np.full(e - 1, 2, dtype=np.int64)
        if k % 2 == 0:
            # q is odd here, so p != 2
            two = _class_of_two(cfg)
            raised = two if which == "col0" else (-two) % e
            if raised != 0:
                bounds[raised - 1] = 3
        records.append(_checked(theorem_id, _col0_and_diag(table, bounds, which)))

    if _premise_ratio(cfg.p, k, 14):
        records.append(_checked("offdiag_ab_bound", _offdiag(_table_for(cfg, table), 2)))
    else:
        records.append(_vacuous("offdiag_ab_bound"))
    return records


def verify_prime_k_theorems(cfg: CyclotomyConfig, table: CyclotomicTable = None) -> List[TheoremRecord]:
    """The sharper statements available when k is prime."""
    k, p, e = cfg.k, cfg.p, cfg.e
    if not is_prime(k):
        raise InvalidArgumentError(f"k = {k} is not prime")
    records = []

    premise = _premise_ratio(p, k, 3, phi=k - 1)
    if not premise:
        records.append(_vacuous("diag_00_exact_prime_k"))
    elif p == 2:
        records.append(_unsupported("diag_00_exact_prime_k", True, "p = 2"))
    else:
        predicted = 1 if _class_of_two(cfg) == 0 else 0
        actual = _table_for(cfg, table)[0, 0]
        witnesses = [] if actual == predicted else [(0, 0)]
        records.append(
            _checked("diag_00_exact_prime_k", witnesses, f"predicted {predicted}, computed {actual}")
        )

    if _premise_ratio(p, k, 4, phi=k - 1):
        table = _table_for(cfg, table)
        twos = np.full(e - 1, 2, dtype=np.int64)
        witnesses = _col0_and_diag(table, twos, "col0") + _col0_and_diag(table, twos, "diag")
        records.append(_checked("col0_diag_bound_prime_k", witnesses))
    else:
        records.append(_vacuous("col0_diag_bound_prime_k"))

    if _premise_row0_prime_k(p, k):
        records.append(_row0("row0_bound_prime_k", _table_for(cfg, table), np.full(e - 1, 2)))
    else:
        records.append(_vacuous("row0_bound_prime_k"))

    if premise_main2(p, k):
        records.append(_checked("offdiag_ab_bound_prime_k", _offdiag(_table_for(cfg, table), 2)))
    else:
        records.append(_vacuous("offdiag_ab_bound_prime_k"))
    return records


def verify_oracle(cfg: CyclotomyConfig, table: CyclotomicTable = None) -> TheoremRecord:
    """compute_table against brute_force_table on every cell."""
    table = _table_for(cfg, table)
    expected = np.array(brute_force_table(cfg), dtype=np.int64)
    witnesses = _cells(expected != table.counts)
    return _checked("oracle", witnesses)


def verify_config(cfg: CyclotomyConfig, oracle: bool = False, timing: bool = False) -> VerificationReport:
    """All applicable theorem records for one config."""
    start = time.perf_counter()
    table = compute_table(cfg)

    records = [verify_main1(cfg, table)]
    if is_prime(cfg.k):
        records.append(verify_main2(cfg, table))
    records.append(verify_general_bound(cfg, table))
    records.extend(verify_case_theorems(cfg, table))
    if is_prime(cfg.k):
        records.extend(verify_prime_k_theorems(cfg, table))
    if oracle:
        records.append(verify_oracle(cfg, table))

    report = VerificationReport(
        p=cfg.p,
        n=cfg.n,
        q=cfg.q,
        e=cfg.e,
        k=cfg.k,
        records=records,
        stats=uniformity_stats(table).to_dict(),
        timing_ms=elapsed_ms(start) if timing else None,
    )
    log_event(
        "grid_config_verified",
        {"q": cfg.q, "e": cfg.e, "k": cfg.k, "ok": report.ok},
        level="DEBUG",
    )
    return report


# ---------------------------------------------------------------------------
# Fermat application
# ---------------------------------------------------------------------------


def fermat_check(
    p: int,
    e: int,
    mode: str = "auto",
    samples: int = None,
    seed: int = None,
) -> FermatReport:
    """
    Check that x^e + y^e is never a nonzero e-th power mod p for x, y != 0.

    Applies when p = e*k + 1 > 3^(k/2), 2 is not an e-th power and 6 does not
    divide k. For 6 | k the relation 1 + w = -w^2 with w a cube root of unity
    gives genuine solutions, so that case is reported vacuous.

    Args:
        p: Prime
        e: Exponent dividing p - 1
        mode: "exhaustive", "sampled", or "auto" (exhaustive up to
            FERMAT_EXHAUSTIVE_LIMIT)
        samples: Pair count in sampled mode
        seed: Random seed in sampled mode
    """
    if mode not in ("auto", "exhaustive", "sampled"):
        raise InvalidArgumentError(f"unknown fermat mode {mode!r}")
    cfg = make_config(p, 1, e)
    k = cfg.k

    premise = p * p > 3**k
    six = k % 6 == 0
    two_power = _two_is_eth_power(p, k)
    base = dict(p=p, e=e, k=k, premise=premise, six_divides_k=six, two_is_eth_power=two_power)

    if not premise:
        return FermatReport(**base, mode="none", pairs_checked=0, status="vacuous")
    # the "2 is an e-th power" branch settles the statement before 6 | k matters
    if two_power:
        return FermatReport(**base, mode="none", pairs_checked=0, status="pass")
    if six:
        return FermatReport(**base, mode="none", pairs_checked=0, status="vacuous")

    if mode == "auto":
        mode = "exhaustive" if p <= settings.FERMAT_EXHAUSTIVE_LIMIT else "sampled"

    start = time.perf_counter()
    xe = np.array([pow(x, e, p) for x in range(p)], dtype=np.int64)
    is_power = np.zeros(p, dtype=bool)
    is_power[xe[1:]] = True

    offending = None
    if mode == "exhaustive":
        ys = xe[1:]
        for x in range(1, p):
            bad = is_power[(xe[x] + ys) % p]
            if bad.any():
                offending = (x, int(np.argmax(bad)) + 1)
                break
        checked = (p - 1) ** 2 if offending is None else None
    else:
        n_samples = samples or settings.FERMAT_SAMPLES
        rng = np.random.default_rng(settings.RANDOM_SEED if seed is None else seed)
        pairs = rng.integers(1, p, size=(n_samples, 2))
        bad = is_power[(xe[pairs[:, 0]] + xe[pairs[:, 1]]) % p]
        if bad.any():
            i = int(np.argmax(bad))
            offending = (int(pairs[i, 0]), int(pairs[i, 1]))
        checked = n_samples

    if offending is not None:
        log_event("counterexample_found", {"p": p, "e": e, "pair": offending}, level="ERROR")
        if checked is None:
            checked = (offending[0] - 1) * (p - 1) + offending[1]
        status = "fail"
    else:
        status = "pass"
    log_event(
        "fermat_checked",
        {"p": p, "e": e, "mode": mode, "status": status, "latency_ms": elapsed_ms(start)},
    )
    return FermatReport(
        **base, mode=mode, pairs_checked=checked, status=status, offending_pair=offending
    )


# ---------------------------------------------------------------------------
# Grid search
# ---------------------------------------------------------------------------


def _verify_worker(args: Tuple[int, int, int, bool, bool]) -> VerificationReport:
    p, n, e, oracle, timing = args
    return verify_config(make_config(p, n, e), oracle=oracle, timing=timing)


def grid_search(
    q_max: int,
    k_max: int = None,
    p_max: int = None,
    jobs: int = None,
    cache=None,
    oracle: bool = False,
    timing: bool = False,
) -> Iterator[VerificationReport]:
    """
    Verify every admissible config with q <= q_max (k <= k_max, p <= p_max).

    Reports come out in ascending q, then e, whatever the worker count. Cached
    reports are reused. The first failing report aborts the stream.

    Raises:
        CounterexampleError: a premise-true record failed
    """
    if q_max < 1 or (k_max is not None and k_max < 1) or (p_max is not None and p_max < 1):
        raise InvalidArgumentError("grid bounds must be positive")
    jobs = jobs or settings.DEFAULT_JOBS
    configs = list(admissible_configs(q_max, k_max, p_max))

    cached: Dict[int, VerificationReport] = {}
    if cache is not None:
        for i, cfg in enumerate(configs):
            hit = cache.get_report(cfg.p, cfg.n, cfg.e, cfg.k)
            if hit is not None and (not oracle or hit.record("oracle") is not None):
                cached[i] = hit
    pending = [
        (cfg.p, cfg.n, cfg.e, oracle, timing)
        for i, cfg in enumerate(configs)
        if i not in cached
    ]
    log_event(
        "grid_started",
        {"q_max": q_max, "k_max": k_max, "configs": len(configs), "cached": len(cached), "jobs": jobs},
    )

    executor = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 and len(pending) > 1 else None
    try:
        if executor is not None:
            computed = executor.map(_verify_worker, pending, chunksize=4)
        else:
            computed = map(_verify_worker, pending)

        passed = 0
        for i in range(len(configs)):
            report = cached[i] if i in cached else next(computed)
            if cache is not None and i not in cached:
                cache.upsert_report(report)
            if not report.ok:
                log_event(
                    "counterexample_found",
                    {
                        "p": report.p,
                        "n": report.n,
                        "e": report.e,
                        "k": report.k,
                        "theorems": [r.theorem_id for r in report.failures()],
                    },
                    level="ERROR",
                )
                raise CounterexampleError(report)
            passed += 1
            yield report
        log_event("grid_finished", {"configs": passed})
    finally:
        if executor is not None:
            executor.shutdown(wait=True, cancel_futures=True)


# ---------------------------------------------------------------------------
# Summaries
# ---------------------------------------------------------------------------


SUMMARY_FIELDS = ["p", "n", "q", "e", "k", *THEOREM_IDS]


def summary_rows(reports: Iterable[VerificationReport]) -> List[Dict[str, object]]:
    """One row per report: config columns, then each theorem's status ("-" if not run)."""
    rows = []
    for report in reports:
        row: Dict[str, object] = {
            "p": report.p,
            "n": report.n,
            "q": report.q,
            "e": report.e,
            "k": report.k,
        }
        statuses = {r.theorem_id: r.status for r in report.records}
        for theorem_id in THEOREM_IDS:
            row[theorem_id] = statuses.get(theorem_id, "-")
        rows.append(row)
    return rows


def write_summary_csv(reports: Iterable[VerificationReport], path: str) -> int:
    """Write the summary CSV and return the number of rows."""
    rows = summary_rows(reports)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS)
        writer.writeheader()
        writer.writerows(rows)
    return len(rows)


def tally(reports: Iterable[VerificationReport]) -> Dict[str, Dict[str, int]]:
    """Per-theorem counts of pass / vacuous / fail / unsupported."""
    counts: Dict[str, Dict[str, int]] = {
        t: {"pass": 0, "vacuous": 0, "fail": 0, "unsupported": 0} for t in THEOREM_IDS
    }
    for report in reports:
        for r in report.records:
            counts[r.theorem_id][r.status] += 1
    return counts
