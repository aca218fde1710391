import logging
from typing import Any, Dict, List, Optional, Tuple

from elatlab.handlers.base import EXIT_CHECK_FAILED, EXIT_OK, CommandOptions, execute, verdict_label
from elatlab.models.reports import Report, Verdict
from elatlab.services.messages import messages
from elatlab.services.theorem_suite import suite
from elatlab.utils.helpers import format_table

logger = logging.getLogger(__name__)


def verify_result(ids: List[str], scope: Optional[List[str]],
                  options: CommandOptions) -> Tuple[Dict[str, Any], int]:
    results = suite.run(ids, scope, options.max_order, options.enum_threshold)
    checks = [r.dict() for r in results]
    failed = [r.check_id for r in results if r.overall == Verdict.FAIL]
    diverged = [r.check_id for r in results if r.overall == Verdict.DIVERGENCE]
    if failed:
        logger.warning(f"Failing checks: {', '.join(failed)}")
    result = {
        "checks": checks,
        "failed": failed,
        "diverged": diverged,
        "vacuous": [r.check_id for r in results if r.vacuous],
    }
    return result, EXIT_CHECK_FAILED if failed else EXIT_OK


def render_verify(report: Report) -> str:
    r = report.result
    rows = []
    for check in r["checks"]:
        label = verdict_label(check["overall"])
        if check["vacuous"]:
            label += " " + messages.get_text("vacuous")
        rows.append([check["check_id"], label, len(check["instances"]), check["claim"]])
    lines = [messages.get_text("heading_verify"), format_table(["check", "verdict", "instances", "claim"], rows)]

    for check in r["checks"]:
        flagged = [i for i in check["instances"] if i["verdict"] in (Verdict.FAIL, Verdict.DIVERGENCE)]
        for instance in flagged:
            lines.append(f"{verdict_label(instance['verdict'])} {check['check_id']}: "
                         f"{instance['description']} {instance['witness']}")

    passed = len(r["checks"]) - len(r["failed"]) - len(r["diverged"])
    lines.append("")
    lines.append(messages.get_text(
        "label_summary", passed=passed, failed=len(r["failed"]),
        diverged=len(r["diverged"]), skipped=len(r["vacuous"]),
    ))
    if r["diverged"]:
        lines.append(messages.get_text("divergence_note"))
    return "\n".join(lines)


def run_verify(ids: List[str], scope: Optional[List[str]], options: CommandOptions) -> int:
    inputs = {"checks": ids or ["all"], "scope": scope}
    return execute("verify", inputs, options, lambda: verify_result(ids, scope, options), render_verify)
