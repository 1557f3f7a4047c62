"""Fermat quotient valuations: exact arithmetic, explicit bounds, certificates and scans."""

import json

from ._core import (
    CapExceeded,
    DegenerateB,
    DomainError,
    check_kl_condition,
    conj1_bound,
    discrete_log,
    export_csv,
    fermat_quotient_valuation,
    heuristic_partial_sum,
    mul_order,
    nagell_check,
    select_parameters,
    teichmuller_lift,
    thm2_bound,
    thm3_bound,
    thm4_min_constant,
    vp,
)
from ._core import run_scan as _run_scan
from ._core import verify_certificate_json as _core_verify

__version__ = "0.1.0"


def verify_certificate(params):
    """Check a certificate given as a dict (integers may be ints or decimal strings).

    Returns the canonical certificate dict with the verdict fields appended.
    """
    text = json.dumps({k: str(v) if isinstance(v, int) else v for k, v in params.items()})
    return json.loads(_core_verify(text))


def run_scan(p_min, p_max, x_min, x_max, output, mode="thm2", checkpoint="", workers=1, chunk_size=1000, c_max=50):
    return _run_scan(p_min, p_max, x_min, x_max, mode=mode, output=str(output), checkpoint=str(checkpoint),
                     workers=workers, chunk_size=chunk_size, c_max=c_max)


def resume(p_min, p_max, x_min, x_max, output, checkpoint, mode="thm2", workers=1, chunk_size=1000, c_max=50):
    return _run_scan(p_min, p_max, x_min, x_max, mode=mode, output=str(output), checkpoint=str(checkpoint),
                     workers=workers, chunk_size=chunk_size, c_max=c_max, resume=True)

