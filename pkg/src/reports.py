# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""Line-oriented verification reports.

Every verifier returns a `Report`: a list of named checks, each PASS or FAIL, plus
optional notes and degree-by-degree tables. Rendering is deterministic so that identical
inputs produce byte-identical output.
"""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    """A single named check."""

    name: str
    passed: bool
    detail: str = ""

    def render(self) -> str:
        """Render as one `PASS`/`FAIL` line."""
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.detail}" if self.detail else f"{status} {self.name}"


@dataclass
class Report:
    """Outcome of a verification procedure."""

    title: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    table: list[str] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        """Record a check and return its outcome."""
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def note(self, text: str):
        """Attach a free-form note."""
        self.notes.append(text)

    def row(self, text: str):
        """Append a table row."""
        self.table.append(text)

    @property
    def passed(self) -> bool:
        """True when every recorded check passed."""
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        """The failed checks, in recording order."""
        return [c for c in self.checks if not c.passed]

    def extend(self, other: "Report", prefix: str = ""):
        """Fold the checks, notes and table of another report into this one."""
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.detail))
        self.notes.extend(prefix + n for n in other.notes)
        self.table.extend(prefix + r for r in other.table)

    def render(self) -> str:
        """Render the report as text, ending with an overall verdict line."""
        lines = [f"# {self.title}"]
        lines.extend(self.table)
        lines.extend(c.render() for c in self.checks)
        lines.extend(f"note: {n}" for n in self.notes)
        lines.append(f"RESULT {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"
