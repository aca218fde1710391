import logging
from pathlib import Path
from typing import Any, Dict, Tuple

from elatlab.core.elattice import load_elattice, verify_axioms
from elatlab.core.exceptions import ELatticeFileError
from elatlab.handlers.base import EXIT_CHECK_FAILED, EXIT_OK, CommandOptions, execute, verdict_label, yes_no
from elatlab.models.reports import Report, Verdict
from elatlab.services.messages import messages

logger = logging.getLogger(__name__)


def axioms_result(path: Path) -> Tuple[Dict[str, Any], int]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ELatticeFileError(f"cannot read {path}: {e.strerror}")
    l = load_elattice(text)
    report = verify_axioms(l)
    result = {
        "size": l.size,
        "verdict": Verdict.PASS.value if report.passed else Verdict.FAIL.value,
        "passed": report.passed,
        "canonical": report.canonical,
        "eps_idempotent": report.eps_idempotent,
        "image_is_fix": report.image_is_fix,
        "violated": report.violated,
        "witness": list(report.witness) if report.witness is not None else None,
    }
    return result, EXIT_OK if report.passed else EXIT_CHECK_FAILED


def render_axioms(report: Report) -> str:
    r = report.result
    lines = [
        f"{messages.get_text('heading_axioms')}: {verdict_label(r['verdict'])}",
        f"{messages.get_text('label_canonical')}: {yes_no(r['canonical'])}",
    ]
    if r["violated"]:
        lines.append(f"{messages.get_text('label_violated')}: {r['violated']} "
                     f"{messages.get_text('label_witness')} {tuple(r['witness'])}")
    return "\n".join(lines)


def check_axioms_file(path: Path, options: CommandOptions) -> int:
    return execute("axioms", {"file": path.name}, options, lambda: axioms_result(path), render_axioms)
