import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from elatlab.core.elattice import dump_elattice_document
from elatlab.handlers.base import EXIT_OK, CommandOptions, execute, yes_no
from elatlab.models.reports import Report
from elatlab.services.analysis_service import analysis
from elatlab.services.messages import messages
from elatlab.utils.helpers import format_table

logger = logging.getLogger(__name__)


def group_result(spec: str, options: CommandOptions, dump: Optional[Path] = None) -> Tuple[Dict[str, Any], int]:
    a = analysis.analyse(spec, options.max_order)
    g, lat = a.group, a.lattice
    fd = a.frattini_derived
    partition = a.elattice.partition

    subgroups = [
        {
            "id": h.id,
            "order": h.order,
            "core": lat.cores[h.id],
            "normal": lat.is_normal(h),
            "class_size": partition.sizes[lat.cores[h.id]],
            "members": sorted(h.members),
        }
        for h in lat.subgroups
    ]
    predicates = asdict(a.predicates)
    predicates["nilpotent_by_sylow"] = a.nilpotent_by_sylow

    if dump is not None:
        dump.write_text(dump_elattice_document(a.elattice) + "\n", encoding="utf-8")
        logger.info(f"Wrote the ε-lattice of {spec} to {dump}")

    result = {
        "order": g.order,
        "degree": g.degree,
        "identified": a.identified,
        "generators": [g.describe(i) for i in g.generating_set],
        "subgroup_count": lat.size,
        "normal": list(lat.normal_ids),
        "class_sizes": list(partition.profile),
        "subgroups": subgroups,
        "predicates": predicates,
        "frattini": fd.frattini.id,
        "derived": fd.derived.id,
    }
    return result, EXIT_OK


def render_group(report: Report) -> str:
    r = report.result
    lines = [
        messages.get_text("heading_group", spec=report.inputs["spec"]),
        f"{messages.get_text('label_order')}: {r['order']}",
        f"{messages.get_text('label_identified')}: {r['identified']}",
        f"{messages.get_text('label_subgroups')}: {r['subgroup_count']}",
        f"{messages.get_text('label_normal')}: {', '.join(f'H{i}' for i in r['normal'])}",
        f"{messages.get_text('label_class_sizes')}: ({','.join(str(s) for s in r['class_sizes'])})",
        f"{messages.get_text('label_frattini')}: H{r['frattini']}",
        f"{messages.get_text('label_derived')}: H{r['derived']}",
        "",
        messages.get_text("heading_subgroups"),
        format_table(
            ["H", "order", "core", "normal", "class"],
            [[f"H{h['id']}", h["order"], f"H{h['core']}", yes_no(h["normal"]), h["class_size"]] for h in r["subgroups"]],
        ),
        "",
        messages.get_text("heading_predicates"),
        format_table(["property", "value"], [[k, yes_no(v)] for k, v in sorted(r["predicates"].items())]),
    ]
    return "\n".join(lines)


def show_group(spec: str, options: CommandOptions, dump: Optional[Path] = None) -> int:
    inputs = {"spec": spec}
    if dump is not None:
        inputs["dump"] = str(dump)
    return execute("group", inputs, options, lambda: group_result(spec, options, dump), render_group)
