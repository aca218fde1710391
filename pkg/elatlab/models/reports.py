import json
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    DIVERGENCE = "divergence-from-paper"
    SKIPPED = "skipped"


class CheckInstance(BaseModel):
    description: str
    verdict: Verdict
    witness: Dict[str, Any] = {}

    class Config:
        use_enum_values = True


class CheckResult(BaseModel):
    check_id: str
    claim: str
    overall: Verdict
    vacuous: bool = False
    instances: List[CheckInstance] = []

    class Config:
        use_enum_values = True

    @classmethod
    def from_instances(cls, check_id: str, claim: str, instances: List[CheckInstance]) -> "CheckResult":
        """Overall verdict: any fail fails, else any divergence diverges, else pass."""
        verdicts = [i.verdict for i in instances]
        if Verdict.FAIL in verdicts:
            overall = Verdict.FAIL
        elif Verdict.DIVERGENCE in verdicts:
            overall = Verdict.DIVERGENCE
        else:
            overall = Verdict.PASS
        vacuous = all(v == Verdict.SKIPPED for v in verdicts)
        return cls(check_id=check_id, claim=claim, overall=overall, vacuous=vacuous, instances=instances)


class Report(BaseModel):
    command: str
    inputs: Dict[str, Any]
    result: Dict[str, Any]
    timing_ms: Optional[float] = None

    def to_json(self) -> str:
        """Stable machine form: sorted keys, two-space indent."""
        payload = self.dict()
        if payload["timing_ms"] is None:
            del payload["timing_ms"]
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.parse_obj(json.loads(text))
