"""Golden-corpus regression runs and run-to-run diffs.

A corpus is TSV: `id<TAB>english<TAB>expected`. Every case runs through the
full pipeline with empty constraints and passes only on exact string match,
so any behavior change is visible. Reports serialize as JSON lines (one case
per line, corpus order, then a summary object) keyed by the resource
fingerprint that produced them.
"""

from __future__ import annotations

import datetime
import json
from dataclasses import dataclass

from .errors import LoadError
from .resources import ResourceBundle
from .transfer import translate


@dataclass(frozen=True)
class CorpusCase:
    id: str
    english: str
    expected: str


def load_corpus(text: str) -> list[CorpusCase]:
    cases = []
    seen = set()
    for ln, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 3:
            raise LoadError(f"expected 3 tab-separated fields, got {len(parts)}", ln)
        case_id, english, expected = (p.strip() for p in parts)
        if not case_id:
            raise LoadError("empty case id", ln)
        if case_id in seen:
            raise LoadError(f"duplicate case id {case_id!r}", ln)
        seen.add(case_id)
        cases.append(CorpusCase(case_id, english, expected))
    return cases


@dataclass(frozen=True)
class CaseRecord:
    id: str
    status: str
    got: str
    expected: str
    passed: bool
    total: float | None
    parse_count: int

    def to_json(self):
        return {
            "id": self.id,
            "status": self.status,
            "got": self.got,
            "expected": self.expected,
            "pass": self.passed,
            "total": self.total,
            "parse_count": str(self.parse_count),
        }


@dataclass(frozen=True)
class RunReport:
    records: tuple
    fingerprint: str
    timestamp: str

    @property
    def summary(self):
        passed = sum(1 for r in self.records if r.passed)
        errors = sum(1 for r in self.records if r.status != "ok")
        failed = len(self.records) - passed - errors
        return {"pass": passed, "fail": failed, "error": errors, "cases": len(self.records)}

    def to_jsonl(self) -> str:
        lines = [json.dumps(r.to_json(), ensure_ascii=False, sort_keys=True) for r in self.records]
        summary = dict(self.summary)
        summary["fingerprint"] = self.fingerprint
        summary["timestamp"] = self.timestamp
        lines.append(json.dumps({"summary": summary}, ensure_ascii=False, sort_keys=True))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "RunReport":
        records = []
        fingerprint = ""
        timestamp = ""
        for ln, raw in enumerate(text.splitlines(), 1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as err:
                raise LoadError(f"bad JSON: {err}", ln) from None
            if "summary" in obj:
                fingerprint = obj["summary"].get("fingerprint", "")
                timestamp = obj["summary"].get("timestamp", "")
            else:
                records.append(
                    CaseRecord(
                        id=obj["id"],
                        status=obj["status"],
                        got=obj["got"],
                        expected=obj["expected"],
                        passed=obj["pass"],
                        total=obj["total"],
                        parse_count=int(obj["parse_count"]),
                    )
                )
        return cls(tuple(records), fingerprint, timestamp)


def run_case(case: CorpusCase, bundle: ResourceBundle) -> CaseRecord:
    results = translate(case.english, bundle, kbest=1)
    if not results:
        return CaseRecord(case.id, "no-parse", "", case.expected, False, None, 0)
    status = next((r.status for r in results if r.status != "ok"), "ok")
    got = "".join(r.japanese for r in results)
    best = results[0].best if len(results) == 1 else None
    return CaseRecord(
        id=case.id,
        status=status,
        got=got,
        expected=case.expected,
        passed=status == "ok" and got == case.expected,
        total=None if best is None else best.breakdown.total,
        parse_count=sum(r.parse_count for r in results),
    )


def run_suite(corpus, bundle: ResourceBundle, timestamp=None) -> RunReport:
    """Evaluate every case in corpus order. Deterministic given a timestamp."""
    if timestamp is None:
        timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    records = tuple(run_case(case, bundle) for case in corpus)
    return RunReport(records, bundle.fingerprint, timestamp)


@dataclass(frozen=True)
class RunDiff:
    regressions: tuple  # pass -> fail
    progressions: tuple  # fail -> pass
    changed_output: tuple  # failing in both, different got
    unchanged: int
    added: tuple  # only in current
    removed: tuple  # only in baseline

    def to_json(self):
        return {
            "regressions": list(self.regressions),
            "progressions": list(self.progressions),
            "changed_output": list(self.changed_output),
            "unchanged": self.unchanged,
            "added": list(self.added),
            "removed": list(self.removed),
        }


def diff_runs(baseline: RunReport, current: RunReport) -> RunDiff:
    base = {r.id: r for r in baseline.records}
    cur = {r.id: r for r in current.records}
    shared = [r.id for r in current.records if r.id in base]  # current corpus order
    regressions = []
    progressions = []
    changed = []
    unchanged = 0
    for case_id in shared:
        b, c = base[case_id], cur[case_id]
        if b.passed and not c.passed:
            regressions.append(case_id)
        elif not b.passed and c.passed:
            progressions.append(case_id)
        elif not b.passed and not c.passed and b.got != c.got:
            changed.append(case_id)
        else:
            unchanged += 1
    added = sorted(set(cur) - set(base))
    removed = sorted(set(base) - set(cur))
    return RunDiff(
        regressions=tuple(regressions),
        progressions=tuple(progressions),
        changed_output=tuple(changed),
        unchanged=unchanged,
        added=tuple(added),
        removed=tuple(removed),
    )
