"""Bulk verification campaigns: deterministic JSONL scans with resume.

Work is sheeted per denominator p (a worker handles all q for one p,
sharing the exact heavy work between mirror pairs); records are merged and
written in canonical (p, q) enumeration order regardless of worker count, so
equal configs produce byte-identical files.
"""

from __future__ import annotations

import json
import multiprocessing
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .riley import VerificationReport, verify_conjecture, verify_conjecture_pair
from .twobridge import KnotFraction, enumerate_fractions, equivalent_forms, _order_key


@dataclass(frozen=True)
class ScanConfig:
    pmax: int
    jobs: int = 1
    dedup: bool = False
    out: Optional[str] = None
    resume: bool = False
    include_timings: bool = False
    isolate: bool = True
    refine_width: Optional[Fraction] = None

    def __post_init__(self):
        if self.pmax < 3:
            raise ValueError("pmax must be at least 3")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")


def record_dict(rep: VerificationReport, q_input: int, include_timings: bool) -> dict:
    rec = {
        "p": rep.fraction.p,
        "q_input": q_input,
        "q_canonical": rep.fraction.q,
        "n": rep.n,
        "sigma": rep.sigma,
        "determinant": rep.determinant,
        "bound": rep.bound,
        "real_root_count": rep.real_root_count,
        "satisfied": rep.satisfied,
        "lambda_coeffs": [str(c) for c in rep.lam.coeffs],
        "root_intervals": [[str(iv.lo), str(iv.hi)] for iv in rep.roots],
        "squarefree": rep.squarefree,
        "congruence_ok": rep.congruence_ok,
    }
    if include_timings:
        rec["timing_ms"] = round(rep.timing_ms, 3)
    return rec


def record_line(rec: dict) -> str:
    return json.dumps(rec, separators=(", ", ": "), sort_keys=False)


@dataclass
class ScanSummary:
    pmax: int
    total: int = 0
    violations: list = field(default_factory=list)
    max_gap: int = 0
    max_gap_fraction: Optional[tuple] = None
    congruence_failures: list = field(default_factory=list)
    non_squarefree: list = field(default_factory=list)
    reused: int = 0
    elapsed_s: float = 0.0

    def absorb(self, rec: dict):
        self.total += 1
        key = (rec["p"], rec["q_canonical"])
        if not rec["satisfied"]:
            self.violations.append(key)
        if not rec["congruence_ok"]:
            self.congruence_failures.append(key)
        if not rec["squarefree"]:
            self.non_squarefree.append(key)
        gap = rec["real_root_count"] - rec["bound"]
        if gap > self.max_gap:
            self.max_gap = gap
            self.max_gap_fraction = key

    @property
    def ok(self) -> bool:
        return not self.violations


def _q_values(p: int, dedup: bool) -> list:
    from math import gcd as int_gcd

    qs = [q for q in range(1, p, 2) if int_gcd(p, q) == 1]
    qs += [-q for q in qs]
    qs.sort(key=_order_key)
    if not dedup:
        return qs
    keep = []
    for q in qs:
        k = KnotFraction(p, q)
        if min(_order_key(c) for c in equivalent_forms(k)) >= _order_key(q):
            keep.append(q)
    return keep


def _scan_one_p(args) -> list:
    """All records for one p, in canonical q order, heavy work mirror-shared."""
    p, dedup, isolate, refine_width, include_timings = args
    by_q: dict = {}
    qs = _q_values(p, dedup)
    needed = set(qs)
    for q in qs:
        if q in by_q:
            continue
        if q > 0:
            rep, rep_m = verify_conjecture_pair(
                KnotFraction(p, q), isolate=isolate, refine_width=refine_width
            )
            by_q[q] = rep
            if -q in needed:
                by_q[-q] = rep_m
        else:
            by_q[q] = verify_conjecture(
                KnotFraction(p, q), isolate=isolate, refine_width=refine_width
            )
    return [record_dict(by_q[q], q, include_timings) for q in qs]


def run_scan(
    config: ScanConfig,
    on_record: Optional[Callable[[dict], None]] = None,
    progress: Optional[Callable[[int, int], None]] = None,
) -> ScanSummary:
    """Run the campaign; streams records to the JSONL file and/or a callback.

    Resume keeps verbatim lines of complete prior records and recomputes the
    rest (a corrupt trailing line is discarded); output order is always the
    canonical enumeration order.
    """
    t0 = time.perf_counter()
    summary = ScanSummary(pmax=config.pmax)
    prior: dict = {}
    if config.resume and config.out and os.path.exists(config.out):
        prior = _load_prior(config.out)
    ps = list(range(3, config.pmax + 1, 2))
    complete = set()
    tasks = []
    for p in ps:
        qs = _q_values(p, config.dedup)
        if qs and all((p, q) in prior for q in qs):
            complete.add(p)
        else:
            tasks.append((p, config.dedup, config.isolate, config.refine_width,
                          config.include_timings))
    pool = None
    if config.jobs > 1 and len(tasks) > 1:
        pool = multiprocessing.Pool(processes=config.jobs)
        fresh_iter = pool.imap(_scan_one_p, tasks, chunksize=1)
    else:
        fresh_iter = map(_scan_one_p, tasks)
    out_fh = open(config.out, "w", encoding="utf-8", newline="\n") if config.out else None
    try:
        for done, p in enumerate(ps, start=1):
            if p in complete:
                recs = []
                for q in _q_values(p, config.dedup):
                    line = prior[(p, q)]
                    rec = json.loads(line)
                    summary.reused += 1
                    summary.absorb(rec)
                    if out_fh:
                        out_fh.write(line + "\n")
                    if on_record:
                        on_record(rec)
            else:
                for rec in next(fresh_iter):
                    summary.absorb(rec)
                    if out_fh:
                        out_fh.write(record_line(rec) + "\n")
                    if on_record:
                        on_record(rec)
            if progress:
                progress(done, len(ps))
    finally:
        if out_fh:
            out_fh.close()
        if pool is not None:
            pool.close()
            pool.join()
    summary.elapsed_s = time.perf_counter() - t0
    return summary


def _load_prior(path: str) -> dict:
    """Verbatim complete JSONL lines keyed by (p, q_input)."""
    prior = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                rec = json.loads(line)
                key = (rec["p"], rec["q_input"])
                if "satisfied" not in rec or "lambda_coeffs" not in rec:
                    continue
            except (json.JSONDecodeError, KeyError, TypeError):
                continue
            prior[key] = line
    return prior


def default_jobs() -> int:
    return max(1, os.cpu_count() or 1)


def format_summary(s: ScanSummary) -> str:
    lines = [
        f"fractions scanned: {s.total} (pmax={s.pmax}, reused {s.reused})",
        f"violations: {len(s.violations)}",
        f"congruence failures: {len(s.congruence_failures)}",
        f"non-squarefree: {len(s.non_squarefree)}",
    ]
    if s.max_gap_fraction:
        p, q = s.max_gap_fraction
        lines.append(f"max strictness gap: {s.max_gap} at {p}/{q}")
    else:
        lines.append(f"max strictness gap: {s.max_gap}")
    for p, q in s.violations:
        lines.append(f"VIOLATION at {p}/{q}")
    lines.append(f"elapsed: {s.elapsed_s:.1f}s")
    return "\n".join(lines)
