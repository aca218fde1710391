from typing import Any, Dict, Tuple

from elatlab.handlers.base import EXIT_OK, CommandOptions, execute, yes_no
from elatlab.models.reports import Report
from elatlab.services.analysis_service import analysis
from elatlab.services.messages import messages
from elatlab.utils.helpers import format_table


def compare_result(spec1: str, spec2: str, options: CommandOptions) -> Tuple[Dict[str, Any], int]:
    return analysis.compare(spec1, spec2, options.max_order), EXIT_OK


def render_compare(report: Report) -> str:
    r = report.result
    rows = [
        [messages.get_text("label_group_iso"), yes_no(r["isomorphic"])],
        [messages.get_text("label_l_iso"), yes_no(r["l_iso"])],
        [messages.get_text("label_n_iso"), yes_no(r["n_iso"])],
        [messages.get_text("label_el_iso"), yes_no(r["el_iso"])],
        [messages.get_text("label_fix_isos"), f"{r['fix_iso_count']} / {r['admissible_count']}"],
        [messages.get_text("label_subgroups"), " / ".join(str(n) for n in r["subgroup_counts"])],
        [messages.get_text("label_class_sizes"),
         " / ".join("(" + ",".join(str(s) for s in sizes) + ")" for sizes in r["class_sizes"])],
    ]
    heading = messages.get_text("heading_compare", first=report.inputs["spec1"], second=report.inputs["spec2"])
    return heading + "\n" + format_table(["", ""], rows)


def show_compare(spec1: str, spec2: str, options: CommandOptions) -> int:
    return execute(
        "compare",
        {"spec1": spec1, "spec2": spec2},
        options,
        lambda: compare_result(spec1, spec2, options),
        render_compare,
    )
