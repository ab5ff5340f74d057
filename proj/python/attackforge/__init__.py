"""Attack scenario compiler.

Compiles ``.atk`` scenarios to a TOSCA service template, Ansible-style
inventory, playbooks and roles, and a CSAR archive.
"""

from ._attackforge import (
    DiagnosticError,
    build,
    check,
    emit_preamble,
    export_graph,
    service_template,
    simulate,
)

__all__ = [
    "DiagnosticError",
    "build",
    "check",
    "emit_preamble",
    "export_graph",
    "service_template",
    "simulate",
]
