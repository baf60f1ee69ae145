"""Central values L(k, f, chi_d) of quadratic twists, their moments, and the
Waldspurger coefficient ratios for the Tunnell pair.

Report-shaped results are returned as dicts with the same keys as the CLI's
JSON output.
"""

import json as _json

from . import _qtwist
from ._qtwist import (
    Eigenform,
    FormatError,
    InvalidArgument,
    NumericGuardError,
    REPORT_SCHEMA_VERSION,
    delta_coefficients,
    factorize,
    kernel_V,
    kronecker,
    level32_form,
    load_coefficients,
    moebius,
    q_split_residual,
    ramanujan_tau,
    required_table_size_for_window,
    tunnell_coefficients,
    unit_square_classes,
)

__all__ = [
    "Eigenform",
    "FormatError",
    "InvalidArgument",
    "NumericGuardError",
    "REPORT_SCHEMA_VERSION",
    "L_f_value",
    "central_L",
    "delta_coefficients",
    "factorize",
    "first_moment",
    "kernel_V",
    "kronecker",
    "level32_form",
    "load_coefficients",
    "moebius",
    "nonvanishing_count",
    "q_split_residual",
    "ramanujan_tau",
    "required_table_size_for_window",
    "run_cli",
    "second_moment",
    "tunnell_coefficients",
    "tunnell_gaps",
    "unit_square_classes",
    "waldspurger_ratios",
]


def central_L(form, d, tail_target=1e-12, hard_cap=50_000_000):
    return _json.loads(_qtwist.central_L(form, d, tail_target, hard_cap))


def L_f_value(form, grid=(1e5, 2e5, 4e5), tail_target=1e-12, literal=False):
    return _json.loads(_qtwist.L_f_value(form, list(grid), tail_target, literal))


def first_moment(form, X, h, L_f=None, threads=0, tail_target=1e-12):
    return _json.loads(_qtwist.first_moment(form, X, h, L_f, threads, tail_target))


def second_moment(form, X, threads=0):
    return _json.loads(_qtwist.second_moment(form, X, threads))


def nonvanishing_count(form, X, h, threads=0):
    return _json.loads(_qtwist.nonvanishing_count(form, X, h, threads))


def waldspurger_ratios(max_d=2000, threads=0):
    return _json.loads(_qtwist.waldspurger_ratios(max_d, threads))


def tunnell_gaps(n_max):
    """Summary dict plus the list i(n), 0 <= n <= n_max."""
    summary, gaps = _qtwist.tunnell_gaps(n_max)
    return _json.loads(summary), gaps


def run_cli(*args):
    """Run the command-line front end in-process; returns (exit code, stdout, stderr)."""
    return _qtwist.run_cli([str(a) for a in args])
