"""Uniform record for identity checks."""
from dataclasses import dataclass, field


@dataclass
class Report:
    """Outcome of one identity check."""

    identity: str
    context: str
    qorder: object
    verdict: str  # pass | fail | not-applicable
    details: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.verdict != "fail"

    def to_text(self):
        lines = [f"identity: {self.identity}", f"context: {self.context}",
                 f"verified order: {self.qorder}", f"verdict: {self.verdict}"]
        lines += [f"  {d}" for d in self.details]
        lines += [f"  offending: {f}" for f in self.failures]
        return "\n".join(lines)

    def to_dict(self):
        return {"identity": self.identity, "context": self.context, "qorder": str(self.qorder),
                "verdict": self.verdict, "details": list(self.details), "failures": list(self.failures)}
