"""Self-convergence studies: case files, error norms, rates and report emission.

A case file is INI-style (read with :mod:`configparser`).  Each section is one
case::

    [alpha0.2]
    alpha = 0.2
    u0 = characteristic(0.5)
    source = zero
    source_time_exponent = 0
    vary = temporal              # temporal | spatial
    fixed = 512                  # N for temporal studies, L for spatial ones
    levels = 32 64 128 256 512 1024
    schemes = l1bar/central      # comma separated temporal/spatial pairs
    T = 1
    param = -                    # label only, e.g. sigma=0.3
    compare = interpolate        # spatial studies: interpolate | restrict

A ``[DEFAULT]`` section supplies shared keys.  Errors at level r compare the
solution at r with the one at 2r, so the last level only serves as a partner.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DivergenceError, InvalidInputError
from .projection import FunctionDescriptor, parse_descriptor
from .stepper import ProblemSpec, SeparableSource, SolverConfig, Spatial, advance
from .weights import Scheme

__all__ = [
    "ExperimentCase",
    "RateRow",
    "RateReport",
    "CaseFailure",
    "norms",
    "coarsen_restrict",
    "prolong_linear",
    "observed_rates",
    "run_case",
    "run_cases",
    "load_cases",
    "builtin_ids",
    "emit",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("case", "scheme", "alpha", "param", "norm", "level", "error", "rate")


class CaseFailure(Exception):
    def __init__(self, case_id: str, cause: Exception):
        self.case_id = case_id
        self.cause = cause
        super().__init__(f"case {case_id!r}: {cause}")

    def record(self) -> dict:
        rec = {"error": type(self.cause).__name__, "case": self.case_id, "message": str(self.cause)}
        if isinstance(self.cause, DivergenceError):
            rec["step"] = self.cause.step
        return rec


# ---------------------------------------------------------------------------
# grid-level helpers
# ---------------------------------------------------------------------------


def norms(u, v) -> tuple[float, float]:
    """Discrete l2 (mean-square over the M entries) and max norms of ``u - v``."""
    a = np.asarray(getattr(u, "values", u), dtype=float)
    b = np.asarray(getattr(v, "values", v), dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidInputError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise InvalidInputError("empty vectors")
    d = a - b
    return float(np.sqrt(np.mean(d * d))), float(np.max(np.abs(d)))


def coarsen_restrict(fine) -> np.ndarray:
    """Values of a fine-grid field (N-1 entries, N even) at the N/2-grid nodes."""
    f = np.asarray(getattr(fine, "values", fine), dtype=float)
    N = f.shape[0] + 1
    if N % 2:
        raise InvalidInputError(f"fine grid N={N} is odd; nodes are not nested")
    return f[1::2].copy()


def prolong_linear(coarse) -> np.ndarray:
    """Piecewise-linear interpolation of an N-grid field onto the 2N grid."""
    c = np.asarray(getattr(coarse, "values", coarse), dtype=float)
    padded = np.concatenate(([0.0], c, [0.0]))
    out = np.empty(2 * c.shape[0] + 1)
    out[1::2] = c
    out[0::2] = 0.5 * (padded[:-1] + padded[1:])
    return out


def observed_rates(errors: Sequence[float]) -> list[float]:
    e = list(errors)
    return [math.log(e[i] / e[i + 1]) / math.log(2.0) for i in range(len(e) - 1)]


# ---------------------------------------------------------------------------
# cases and reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentCase:
    id: str
    alpha: float
    u0: FunctionDescriptor
    source: SeparableSource | None
    vary: str
    fixed: int
    levels: tuple[int, ...]
    schemes: tuple[tuple[Scheme, Spatial], ...]
    T: float = 1.0
    param: str = "-"
    compare: str = "interpolate"

    def __post_init__(self):
        if self.vary not in {"temporal", "spatial"}:
            raise InvalidInputError(f"vary must be temporal or spatial, got {self.vary!r}")
        if self.compare not in {"interpolate", "restrict"}:
            raise InvalidInputError(f"compare must be interpolate or restrict, got {self.compare!r}")
        lv = self.levels
        if len(lv) < 3:
            raise InvalidInputError("need at least 3 levels (two rates)")
        if any(b != 2 * a for a, b in zip(lv[:-1], lv[1:])):
            raise InvalidInputError(f"levels must double: {lv}")
        if not self.schemes:
            raise InvalidInputError("no schemes given")

    def problem(self) -> ProblemSpec:
        return ProblemSpec(self.alpha, self.T, self.u0, self.source)

    def config(self, temporal: Scheme, spatial: Spatial, level: int) -> SolverConfig:
        if self.vary == "temporal":
            N, L = self.fixed, level
        else:
            N, L = level, self.fixed
        return SolverConfig(temporal, spatial, N, L, self.T, self.alpha)


@dataclass(frozen=True)
class RateRow:
    scheme: str
    resolution: int
    e_l2: float
    rate_l2: float | None
    e_linf: float
    rate_linf: float | None


@dataclass
class RateReport:
    case: str
    alpha: float
    param: str
    vary: str
    rows: list[RateRow] = field(default_factory=list)

    def scheme_rows(self, scheme: str) -> list[RateRow]:
        return [r for r in self.rows if r.scheme == scheme]

    @property
    def schemes(self) -> list[str]:
        seen: list[str] = []
        for r in self.rows:
            if r.scheme not in seen:
                seen.append(r.scheme)
        return seen

    def errors(self, scheme: str, norm: str = "l2") -> np.ndarray:
        attr = "e_l2" if norm == "l2" else "e_linf"
        return np.array([getattr(r, attr) for r in self.scheme_rows(scheme)])

    def rates(self, scheme: str, norm: str = "l2") -> np.ndarray:
        attr = "rate_l2" if norm == "l2" else "rate_linf"
        return np.array([getattr(r, attr) for r in self.scheme_rows(scheme)[1:]])


def scheme_label(temporal: Scheme, spatial: Spatial) -> str:
    return f"{temporal.value}/{spatial.value}"


def _final(case: ExperimentCase, temporal: Scheme, spatial: Spatial, level: int) -> np.ndarray:
    traj = advance(case.problem(), case.config(temporal, spatial, level))
    return traj.values[-1]


def run_case(case: ExperimentCase) -> RateReport:
    report = RateReport(case.id, case.alpha, case.param, case.vary)
    for temporal, spatial in case.schemes:
        label = scheme_label(temporal, spatial)
        try:
            sols = [_final(case, temporal, spatial, lv) for lv in case.levels]
        except DivergenceError as exc:
            raise CaseFailure(case.id, exc) from exc
        e2, einf = [], []
        for coarse, fine in zip(sols[:-1], sols[1:]):
            if case.vary == "temporal":
                a, b = coarse, fine
            elif case.compare == "interpolate":
                a, b = prolong_linear(coarse), fine
            else:
                a, b = coarse, coarsen_restrict(fine)
            l2, linf = norms(a, b)
            e2.append(l2)
            einf.append(linf)
        r2, rinf = observed_rates(e2), observed_rates(einf)
        for i, lv in enumerate(case.levels[:-1]):
            report.rows.append(
                RateRow(
                    label,
                    lv,
                    e2[i],
                    r2[i - 1] if i else None,
                    einf[i],
                    rinf[i - 1] if i else None,
                )
            )
    return report


def run_cases(cases: Iterable[ExperimentCase], workers: int = 1) -> list[RateReport]:
    cases = list(cases)
    if workers <= 1 or len(cases) <= 1:
        return [run_case(c) for c in cases]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_case, cases))


# ---------------------------------------------------------------------------
# case files
# ---------------------------------------------------------------------------


def _parse_schemes(text: str) -> tuple[tuple[Scheme, Spatial], ...]:
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        t, _, s = item.partition("/")
        out.append((Scheme.parse(t), Spatial.parse(s or "central")))
    return tuple(out)


def _case_from_section(prefix: str, name: str, sec: configparser.SectionProxy) -> ExperimentCase:
    try:
        src_space = parse_descriptor(sec.get("source", "zero"))
        source = None
        if src_space.kind != "zero":
            source = SeparableSource(src_space, sec.getfloat("source_time_exponent", 0.0))
        return ExperimentCase(
            id=f"{prefix}:{name}" if prefix else name,
            alpha=sec.getfloat("alpha"),
            u0=parse_descriptor(sec.get("u0", "zero")),
            source=source,
            vary=sec.get("vary", "temporal").strip(),
            fixed=sec.getint("fixed", 512),
            levels=tuple(int(x) for x in sec.get("levels", "32 64 128 256 512 1024").split()),
            schemes=_parse_schemes(sec.get("schemes", "l1bar/central")),
            T=sec.getfloat("T", 1.0),
            param=sec.get("param", "-").strip(),
            compare=sec.get("compare", "interpolate").strip(),
        )
    except (configparser.Error, ValueError, TypeError) as exc:
        if isinstance(exc, InvalidInputError):
            raise
        raise InvalidInputError(f"section [{name}]: {exc}") from exc


def parse_cases(text: str, prefix: str = "") -> list[ExperimentCase]:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # keep "T" upper-case
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise InvalidInputError(f"malformed case file: {exc}") from exc
    return [_case_from_section(prefix, name, cp[name]) for name in cp.sections()]


def builtin_ids() -> list[str]:
    files = resources.files("subdiff") / "cases"
    ids = [p.name[:-4] for p in files.iterdir() if p.name.endswith(".cfg")]
    return sorted(ids, key=lambda s: (len(s), s))


def load_cases(ref: str) -> list[ExperimentCase]:
    """Cases from a file path or a builtin id such as ``table1``."""
    path = Path(ref)
    if path.is_file():
        return parse_cases(path.read_text(encoding="utf-8"), prefix=path.stem)
    res = resources.files("subdiff") / "cases" / f"{ref}.cfg"
    if res.is_file():
        return parse_cases(res.read_text(encoding="utf-8"), prefix=ref)
    raise InvalidInputError(f"no case file or builtin case named {ref!r}; builtins: {builtin_ids()}")


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _records(reports: Sequence[RateReport]) -> list[dict]:
    recs = []
    for rep in reports:
        for norm in ("l2", "linf"):
            for row in rep.rows:
                err = row.e_l2 if norm == "l2" else row.e_linf
                rate = row.rate_l2 if norm == "l2" else row.rate_linf
                recs.append(
                    {
                        "case": rep.case,
                        "scheme": row.scheme,
                        "alpha": rep.alpha,
                        "param": rep.param,
                        "norm": norm,
                        "level": row.resolution,
                        "error": err,
                        "rate": rate,
                    }
                )
    return recs


def _sci(x: float | None) -> str:
    return "" if x is None else f"{x:.9e}"


def _pretty(reports: Sequence[RateReport]) -> str:
    lines = []
    for rep in reports:
        for scheme in rep.schemes:
            rows = rep.scheme_rows(scheme)
            head = "L" if rep.vary == "temporal" else "N"
            title = f"{rep.case}  [{scheme}]  alpha={rep.alpha:g}"
            if rep.param != "-":
                title += f"  {rep.param}"
            lines.append(title)
            lines.append(f"  {head:>6} | " + " ".join(f"{r.resolution:>10d}" for r in rows))
            for norm, ek, rk in (("l2", "e_l2", "rate_l2"), ("linf", "e_linf", "rate_linf")):
                lines.append(f"  {norm:>6} | " + " ".join(f"{getattr(r, ek):>10.3e}" for r in rows))
                rates = ["{:>10}".format("Rate")] + [f"{getattr(r, rk):>10.4f}" for r in rows[1:]]
                lines.append(f"  {'':>6} | " + " ".join(rates))
            lines.append("")
    return "\n".join(lines)


def emit(reports, fmt: str = "csv") -> str:
    """Render one report or a list of reports as csv, json or a pretty table."""
    if isinstance(reports, RateReport):
        reports = [reports]
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(CSV_COLUMNS)
        for r in _records(reports):
            wr.writerow(
                [r["case"], r["scheme"], repr(r["alpha"]), r["param"], r["norm"], r["level"],
                 _sci(r["error"]), _sci(r["rate"])]
            )
        return buf.getvalue()
    if fmt == "json":
        return json.dumps({"columns": list(CSV_COLUMNS), "rows": _records(reports)}, indent=2) + "\n"
    if fmt == "pretty":
        return _pretty(reports)
    raise InvalidInputError(f"unknown format {fmt!r}")


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def report_to_dict(report: RateReport) -> dict:
    return asdict(report)
