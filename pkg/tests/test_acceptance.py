"""End-to-end acceptance checks.

Every criterion prints exactly one ``PASS``/``FAIL`` line to the terminal (even
under output capture) before asserting.  Tolerances are fixed here and not
tuned per run.
"""

import subprocess
import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from reference_tables import REFERENCE
from subdiff.harness import load_cases, run_case
from subdiff.oracle import semi_discrete_reference
from subdiff.projection import FunctionDescriptor as F
from subdiff.projection import sample_on_grid
from subdiff.stepper import ProblemSpec, SolverConfig, advance

pytestmark = pytest.mark.slow

ERR_REL_TOL = 0.05  # criteria 1-2
RATE_TOL_TEMPORAL = 0.03  # criteria 1-2
RATE_TOL_SPATIAL = 0.05  # criteria 3, 4 (l2) and 5
RATE_TOL_LINF_LAW = 0.06  # criterion 4 (l-infinity)
ORACLE_GAP_TOL = 5e-7  # criterion 6
ORACLE_RATIO_BAND = (4 * 0.85, 4 * 1.15)
PROPERTY_BUDGET_S = 30.0  # criterion 7

TESTS = Path(__file__).parent


@lru_cache(maxsize=None)
def table(tid):
    """{section: {norm: (errors, rates)}} for one builtin table, computed once."""
    out = {}
    for case in load_cases(tid):
        rep = run_case(case)
        (scheme,) = rep.schemes
        sec = case.id.split(":", 1)[1]
        out[sec] = {n: (rep.errors(scheme, n), rep.rates(scheme, n)) for n in ("l2", "linf")}
    return out


def verdict(capsys, label, ok, detail):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} {label}: {detail}")
    assert ok, f"{label}: {detail}"


def reproduce(tid, err_tol, rate_tol):
    """Worst relative error gap and worst rate gap against the printed table."""
    worst_err = worst_rate = 0.0
    where = ""
    for sec, ref in REFERENCE[tid].items():
        got = table(tid)[sec]
        for norm in ("l2", "linf"):
            e, r = got[norm]
            de = np.max(np.abs(e / np.array(ref[norm]["err"]) - 1.0))
            dr = np.max(np.abs(r - np.array(ref[norm]["rate"])))
            if de / err_tol + dr / rate_tol > worst_err / err_tol + worst_rate / rate_tol:
                where = f"{sec}/{norm}"
            worst_err, worst_rate = max(worst_err, de), max(worst_rate, dr)
    return worst_err, worst_rate, where


def rate_gaps(tids, norm="l2"):
    worst, where = 0.0, ""
    for tid in tids:
        for sec, ref in REFERENCE[tid].items():
            d = np.max(np.abs(table(tid)[sec][norm][1] - np.array(ref[norm]["rate"])))
            if d > worst:
                worst, where = d, f"{tid}:{sec}/{norm}"
    return worst, where


def regularity(sec):
    """Spectral regularity index of the data: sigma + 1/2 for the bump, 1/2 - gamma for the jump."""
    _, tag = sec.split("_")
    if tag.startswith("sigma"):
        return float(tag[5:]) + 0.5
    return 0.5 - float(tag[5:])


def test_criterion_1_table1_reproduction(capsys):
    de, dr, where = reproduce("table1", ERR_REL_TOL, RATE_TOL_TEMPORAL)
    e, r = table("table1")["alpha0.2"]["l2"]
    ok = de <= ERR_REL_TOL and dr <= RATE_TOL_TEMPORAL
    verdict(capsys, "criterion 1 (L1bar temporal, homogeneous)", ok,
            f"max rel error gap {de:.2%} (tol {ERR_REL_TOL:.0%}), max rate gap {dr:.4f} "
            f"(tol {RATE_TOL_TEMPORAL}), worst at {where}; alpha=0.2 L=512 l2 {e[-1]:.4e} rate {r[-1]:.4f}")


def test_criterion_2_table2_reproduction(capsys):
    de, dr, where = reproduce("table2", ERR_REL_TOL, RATE_TOL_TEMPORAL)
    e, r = table("table2")["alpha0.4"]["l2"]
    ok = de <= ERR_REL_TOL and dr <= RATE_TOL_TEMPORAL
    verdict(capsys, "criterion 2 (SBDbar temporal, homogeneous)", ok,
            f"max rel error gap {de:.2%}, max rate gap {dr:.4f}, worst at {where}; "
            f"alpha=0.4 L=512 l2 {e[-1]:.4e} rate {r[-1]:.4f}")


def test_criterion_3_central_spatial_rates(capsys):
    worst, where = max(rate_gaps(["table5", "table6"], "l2"), rate_gaps(["table5", "table6"], "linf"))
    bump = table("table5")["alpha0.2_sigma0.3"]["l2"][1]
    sing = table("table6")["alpha0.2_gamma0.499"]["l2"][1]
    # central law: min(regularity + 1/2, 2) for both examples
    law_ok = np.all(np.abs(bump - 1.3) <= RATE_TOL_SPATIAL) and np.all(np.abs(sing - 0.501) <= RATE_TOL_SPATIAL)
    ok = worst <= RATE_TOL_SPATIAL and law_ok
    verdict(capsys, "criterion 3 (central scheme spatial rates)", ok,
            f"max rate gap to printed values {worst:.4f} at {where} (tol {RATE_TOL_SPATIAL}); "
            f"(0.2,sigma=0.3) l2 rates {np.round(bump, 4).tolist()}, "
            f"(0.2,gamma=0.499) l2 rates {np.round(sing, 4).tolist()}")


def test_criterion_4a_modified_l2_rates_are_two(capsys):
    worst, where, fails = 0.0, "", []
    for tid in ("table7", "table8"):
        for sec in REFERENCE[tid]:
            r = table(tid)[sec]["l2"][1]
            d = np.max(np.abs(r - 2.0))
            if d > RATE_TOL_SPATIAL:
                fails.append(f"{tid}:{sec} {np.round(r, 4).tolist()}")
            if d > worst:
                worst, where = d, f"{tid}:{sec}"
    ok = not fails
    detail = f"max |rate - 2| = {worst:.4f} at {where} (tol {RATE_TOL_SPATIAL})"
    if fails:
        detail += "; outside band: " + "; ".join(fails)
    verdict(capsys, "criterion 4a (modified scheme l2 rates = 2)", ok, detail)


def test_criterion_4b_modified_linf_law(capsys):
    worst, where = 0.0, ""
    for tid in ("table7", "table8"):
        for sec in REFERENCE[tid]:
            law = min(regularity(sec) + 1.5, 2.0)
            d = np.max(np.abs(table(tid)[sec]["linf"][1] - law))
            if d > worst:
                worst, where = d, f"{tid}:{sec} (law {law:.3f})"
    r = table("table8")["alpha0.2_gamma0.499"]["linf"][1]
    verdict(capsys, "criterion 4b (modified scheme l-inf rate law)", worst <= RATE_TOL_LINF_LAW,
            f"max gap to min(reg+3/2, 2) {worst:.4f} at {where} (tol {RATE_TOL_LINF_LAW}); "
            f"(0.2,gamma=0.499) l-inf rates {np.round(r, 4).tolist()}")


def test_criterion_5_inhomogeneous_spatial_rates(capsys):
    tids = ["table9", "table10", "table11", "table12"]
    worst, where = max(rate_gaps(tids, "l2"), rate_gaps(tids, "linf"))
    r = table("table9")["alpha0.2_gamma0.3"]["l2"][1]
    verdict(capsys, "criterion 5 (inhomogeneous spatial rates)", worst <= RATE_TOL_SPATIAL,
            f"max rate gap {worst:.4f} at {where} (tol {RATE_TOL_SPATIAL}); "
            f"(0.2,gamma=0.3) l2 first rate {r[0]:.4f}")


def test_inhomogeneous_temporal_tables(capsys):
    # not a numbered criterion; same tolerances as criteria 1-2
    res = [reproduce(t, ERR_REL_TOL, RATE_TOL_TEMPORAL) for t in ("table3", "table4")]
    de = max(x[0] for x in res)
    dr = max(x[1] for x in res)
    verdict(capsys, "extra (temporal rates, inhomogeneous)", de <= ERR_REL_TOL and dr <= RATE_TOL_TEMPORAL,
            f"max rel error gap {de:.2%}, max rate gap {dr:.4f}")


def test_criterion_6_oracle_equivalence(capsys):
    N, lines, ok = 32, [], True
    u0 = F.characteristic(0.5)
    for alpha in (0.3, 0.7):
        ref = semi_discrete_reference(sample_on_grid(u0, N), 1.0, alpha, N).values
        for scheme in ("l1bar", "sbdbar"):
            gaps = []
            for L in (2048, 4096):
                cfg = SolverConfig(scheme, "central", N, L, 1.0, alpha)
                u = advance(ProblemSpec(alpha, u0=u0), cfg).final.values
                gaps.append(float(np.sqrt(np.mean((u - ref) ** 2))))
            ratio = gaps[0] / gaps[1]
            good = gaps[1] <= ORACLE_GAP_TOL and ORACLE_RATIO_BAND[0] <= ratio <= ORACLE_RATIO_BAND[1]
            ok &= good
            lines.append(f"alpha={alpha} {scheme}: gap(4096)={gaps[1]:.2e} ratio={ratio:.3f}")
    verdict(capsys, "criterion 6 (contour oracle vs time march)", ok, "; ".join(lines))


def test_criterion_7_property_suites_fast(capsys):
    selection = [
        "tests/test_mesh.py",
        "tests/test_weights.py",
        "tests/test_stepper.py",
        "tests/test_oracle.py",
        "tests/test_harness.py::test_norms_examples",
        "tests/test_harness.py::test_restriction_examples",
        "tests/test_harness.py::test_restriction_round_trip",
    ]
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *selection],
        cwd=TESTS.parent, capture_output=True, text=True,
    )
    elapsed = time.perf_counter() - t0
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    ok = proc.returncode == 0 and elapsed < PROPERTY_BUDGET_S
    verdict(capsys, "criterion 7 (property suites)", ok,
            f"{summary}; wall time {elapsed:.1f} s (budget {PROPERTY_BUDGET_S:.0f} s)")
