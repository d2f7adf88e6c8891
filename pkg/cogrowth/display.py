"""Phase 7a: Output rendering – word lists, TSV tables, JSON, reports."""

from __future__ import annotations

import json
import sys
from typing import Any, Iterable, Sequence

from cogrowth.models import LemmaReport, PeriodBoundsReport


def render_error(message: str) -> None:
    print(f"ERROR: {message}", file=sys.stderr)


def render_lines(lines: Iterable[str]) -> None:
    for line in lines:
        print(line)


def render_tsv(rows: Iterable[Sequence[Any]]) -> None:
    for row in rows:
        print("\t".join(str(x) for x in row))


def render_series(values: Sequence[Any], start: int = 1) -> None:
    """``n<TAB>value`` starting at n = start."""
    render_tsv((n, v) for n, v in enumerate(values, start=start))


def render_json(data: Any) -> None:
    print(json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False))


def render_text(text: str) -> None:
    sys.stdout.write(text)


def render_bounds(report: PeriodBoundsReport) -> None:
    print(f"max_len={report.max_len}")
    print(f"classes_checked={report.classes_checked}")
    print(f"words_checked={report.words_checked}")
    print(f"violations={len(report.violations)}")
    for length in sorted(report.min_colength):
        print(f"min_colength\t{length}\t{report.min_colength[length]}")
    for v in report.violations:
        print(f"violation\t{v.bound}\t{v.word}\t{v.colength}\t{v.detail}")


def bounds_as_dict(report: PeriodBoundsReport) -> dict[str, Any]:
    return {
        "max_len": report.max_len,
        "classes_checked": report.classes_checked,
        "words_checked": report.words_checked,
        "min_colength": {str(k): v for k, v in sorted(report.min_colength.items())},
        "violations": [
            {"bound": v.bound, "word": v.word, "colength": v.colength, "detail": v.detail}
            for v in report.violations
        ],
    }


def lemma_as_dict(name: str, report: LemmaReport) -> dict[str, Any]:
    return {
        "graph": name,
        "base_er": report.base_er,
        "bound": report.bound,
        "iterated_vertices": report.iterated_vertices,
        "iterated_edges": report.iterated_edges,
        "failures": [r.edge for r in report.failures],
    }


def render_lemma(name: str, report: LemmaReport) -> None:
    status = "ok" if report.ok else "FAILED"
    print(f"{name}\ter={report.base_er}\tbound={report.bound}\t"
          f"vertices={report.iterated_vertices}\tedges={report.iterated_edges}\t"
          f"failures={len(report.failures)}\t{status}")
    for r in report.failures:
        print(f"  failed edge {r.edge}: component size {r.component_size}, "
              f"er {r.component_er if r.component_er is not None else '-'}")
