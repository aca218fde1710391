import logging
from typing import Any, Dict, Tuple

from elatlab.config.settings import settings
from elatlab.core.morphisms import exact_sequence_report
from elatlab.handlers.base import EXIT_OK, CommandOptions, execute, yes_no
from elatlab.models.reports import Report
from elatlab.services.analysis_service import analysis
from elatlab.services.messages import messages
from elatlab.utils.helpers import format_table

logger = logging.getLogger(__name__)


def aut_result(spec: str, options: CommandOptions) -> Tuple[Dict[str, Any], int]:
    a = analysis.analyse(spec, options.max_order)
    d = a.decomposition
    threshold = settings.bound('enum_threshold', options.enum_threshold)

    if d.total_order <= threshold:
        report = exact_sequence_report(a.elattice, threshold)
        exactness = {
            "skipped": False,
            "exact": report.exact,
            "aut_e": report.automorphism_count,
            "ker_psi": report.kernel_psi_order,
            "im_phi": report.image_phi_order,
            "im_psi": report.image_psi_order,
            "kernel_equals_image": report.kernel_equals_image,
            "kernel_normal": report.kernel_normal,
        }
    else:
        logger.info(f"Skipping the exactness check of {spec}: |Aut_E| = {d.factored}")
        exactness = {"skipped": True, "threshold": threshold}

    towers = a.towers
    result = {
        "class_sizes": list(d.class_sizes),
        "factored": d.factored,
        "total_order": d.total_order,
        "kernel_order": d.kernel_order,
        "aut_fix_order": d.aut_fix_order,
        "im_psi_order": d.im_psi_order,
        "aut_fix_trivial": d.aut_fix_trivial,
        "fix_is_chain": d.fix_is_chain,
        "psi_surjective": d.psi_surjective,
        "towers": {
            level: {"name": t.name, "order": t.order}
            for level, t in (("aut0", towers.aut0), ("aut1", towers.aut1), ("aut2", towers.aut2))
        },
        "containments": dict(sorted(towers.containments.items())),
        "exactness": exactness,
    }
    return result, EXIT_OK


def render_aut(report: Report) -> str:
    r = report.result
    lines = [
        messages.get_text("heading_aut", spec=report.inputs["spec"]),
        f"{messages.get_text('label_class_sizes')}: ({','.join(str(s) for s in r['class_sizes'])})",
        f"{messages.get_text('label_aut_order')}: {r['factored']} = {r['total_order']}",
        f"{messages.get_text('label_aut_fix')}: {r['aut_fix_order']}",
        f"{messages.get_text('label_im_psi')}: {r['im_psi_order']}",
        f"{messages.get_text('label_psi_surjective')}: {yes_no(r['psi_surjective'])}",
        "",
        messages.get_text("heading_towers"),
        format_table(["level", "group", "order"], [[k, t["name"], t["order"]] for k, t in r["towers"].items()]),
        format_table(["containment", "holds"], [[k, yes_no(v)] for k, v in r["containments"].items()]),
        "",
        messages.get_text("heading_exactness"),
    ]
    exactness = r["exactness"]
    if exactness["skipped"]:
        lines.append(messages.get_text("skipped_exactness", order=r["factored"], threshold=exactness["threshold"]))
    else:
        lines.append(f"{messages.get_text('label_exact')}: {yes_no(exactness['exact'])}")
        lines.append(format_table(
            ["|Aut_E|", "|Ker ψ|", "|Im φ|", "|Im ψ|"],
            [[exactness["aut_e"], exactness["ker_psi"], exactness["im_phi"], exactness["im_psi"]]],
        ))
    return "\n".join(lines)


def show_aut(spec: str, options: CommandOptions) -> int:
    return execute("aut", {"spec": spec}, options, lambda: aut_result(spec, options), render_aut)
