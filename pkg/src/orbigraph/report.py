"""Deterministic analysis reports.

A report is a flat list of named verdicts plus provenance (library
version, command, parameter echo, input digests).  Rendering is
byte-stable: rerunning on identical inputs and parameters produces
identical output, so reports can be diffed or committed as goldens.
Verdict reasons come from closed per-command enumerations, never free
text alone.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from . import __version__

PASS = "pass"
FAIL = "fail"
SKIP = "skip"
INFO = "info"

LEVEL_ASSERT = "assert"
LEVEL_INFO = "info"


@dataclass(frozen=True)
class Verdict:
    name: str
    outcome: str
    reason: str = ""
    detail: str = ""
    level: str = LEVEL_ASSERT


@dataclass
class Report:
    command: str
    params: list = field(default_factory=list)
    inputs: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)

    def add(self, name, outcome, reason="", detail="", level=LEVEL_ASSERT):
        self.verdicts.append(Verdict(name, outcome, reason, detail, level))

    def add_info(self, name, detail):
        self.verdicts.append(Verdict(name, INFO, "", detail, LEVEL_INFO))

    def extend(self, verdicts, prefix=""):
        for v in verdicts:
            name = prefix + v.name if prefix else v.name
            self.verdicts.append(Verdict(name, v.outcome, v.reason, v.detail, v.level))

    def add_input(self, path, data):
        digest = hashlib.sha256(data).hexdigest()
        self.inputs.append((str(path), digest))

    def failed(self):
        return [v for v in self.verdicts
                if v.level == LEVEL_ASSERT and v.outcome == FAIL]

    def exit_code(self):
        return 1 if self.failed() else 0

    def render_text(self):
        lines = ["orbigraph %s" % __version__,
                 "command = %s" % self.command]
        for key, value in self.params:
            lines.append("param %s = %s" % (key, value))
        for path, digest in self.inputs:
            lines.append("input %s sha256=%s" % (path, digest))
        for v in self.verdicts:
            parts = ["check %s: %s" % (v.name, v.outcome)]
            if v.reason:
                parts.append("[%s]" % v.reason)
            if v.detail:
                parts.append(v.detail)
            lines.append(" ".join(parts))
        failed = self.failed()
        checked = [v for v in self.verdicts if v.level == LEVEL_ASSERT]
        lines.append("summary = %s (%d checks, %d failed)"
                     % ("failed" if failed else "ok", len(checked), len(failed)))
        return "\n".join(lines) + "\n"

    def render_kv(self):
        lines = ["meta.version = %s" % __version__,
                 "meta.command = %s" % self.command]
        for key, value in self.params:
            lines.append("param.%s = %s" % (key, value))
        for path, digest in self.inputs:
            lines.append("input.sha256.%s = %s" % (path, digest))
        for v in self.verdicts:
            lines.append("check.%s.outcome = %s" % (v.name, v.outcome))
            if v.reason:
                lines.append("check.%s.reason = %s" % (v.name, v.reason))
            if v.detail:
                lines.append("check.%s.detail = %s" % (v.name, v.detail))
        lines.append("summary.failed = %d" % len(self.failed()))
        return "\n".join(lines) + "\n"

    def render(self, output):
        if output == "kv":
            return self.render_kv()
        return self.render_text()
