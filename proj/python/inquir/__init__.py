# Copyright 2026 The InQuIR Toolchain Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python interface to the InQuIR toolchain core."""

import json

from . import _inquir
from ._inquir import InquirError

__all__ = ["InquirError", "format_program", "program", "compile_qasm", "run", "analyze", "lint"]


def format_program(text):
    """Parse InQuIR source and return it in canonical form."""
    return _inquir.format_program(text)


def program(text):
    """Parse InQuIR source into its JSON AST."""
    return json.loads(_inquir.program_json(text))


def compile_qasm(qasm, arch):
    """Compile OpenQASM 2.0 source for `arch` (a preset string or JSON dict)."""
    return _inquir.compile_qasm(qasm, _arch(arch))


def run(text, arch, seed=0, policy="roundrobin", backend="sv"):
    """Interpret a program; returns outcome, exit_code, steps, trace and stuck."""
    return json.loads(_inquir.run_json(text, _arch(arch), seed, policy, backend))


def analyze(source, arch, qasm=True):
    """Cost analysis of a circuit (or an InQuIR program with qasm=False)."""
    return json.loads(_inquir.analyze_json(source, _arch(arch), qasm))


def lint(text):
    """Static diagnostics as a list of dicts."""
    return json.loads(_inquir.lint_json(text))


def _arch(arch):
    return arch if isinstance(arch, str) else json.dumps(arch)
