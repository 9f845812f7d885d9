"""Fixture formats, loaders, the tempered-row DSL and the table verification harness."""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction as Q
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .norms import ktype_to_zeta4, lambda_stats, spin_norm, spin_norm_sq_batch, usmall_mask
from .omega import (
    InvolutionRecord,
    conjecture_check,
    infchar_from_parameter,
    make_record,
    nu_of,
)
from .root_datum import (
    build_e6_datum,
    format_rational,
    format_vector,
    format_weight,
    is_ktype_weight,
    norm_sq,
    parse_vector,
    zeta_coords,
    zeta_norm_sq,
)
from .weyl import WeylElement, dominate_batch

DEFAULT_FIXTURE_DIR = Path(__file__).resolve().parents[2] / "fixtures"

# fully supported KGB elements of E6(-14): singletons and inclusive ranges
_FS_RANGES = (
    266, 268, 271, 275, 276, (294, 299), 303, 306, 313, 314, 317, 321, (323, 326), 328,
    (342, 347), 349, 351, 354, 360, 362, (365, 369), 372, 373, (375, 392), (394, 396), 398,
    400, 402, 403, (405, 413), (415, 431), 433, 434, (436, 512),
)
FULLY_SUPPORTED_KGB = frozenset(
    x for r in _FS_RANGES for x in (range(r[0], r[1] + 1) if isinstance(r, tuple) else (r,))
)


class FixtureError(ValueError):
    pass


def fixture_dir(override: str | os.PathLike | None = None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get("E6_FIXTURE_DIR")
    return Path(env) if env else DEFAULT_FIXTURE_DIR


# ---------------------------------------------------------------- reports

@dataclass(frozen=True)
class CheckResult:
    subject: str
    check: str
    status: str  # pass | fail | gap | skip
    detail: str = ""


@dataclass
class Report:
    name: str
    results: list[CheckResult] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def add(self, subject, check, ok: bool | None, detail: str = "", status: str | None = None):
        if status is None:
            status = "pass" if ok else "fail"
        self.results.append(CheckResult(str(subject), check, status, detail))

    @property
    def ok(self) -> bool:
        return all(r.status in ("pass", "skip") for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if r.status in ("fail", "gap")]

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.results:
            out[r.status] = out.get(r.status, 0) + 1
        return out

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "counts": self.counts(),
            "warnings": self.warnings,
            "results": [r.__dict__ for r in self.results],
        }

    def to_tsv(self) -> str:
        lines = ["subject\tcheck\tstatus\tdetail"]
        lines += [f"{r.subject}\t{r.check}\t{r.status}\t{r.detail}" for r in self.results]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- involutions

def _matrix_json(w: WeylElement) -> list[list[str]]:
    return w.to_json()


def dump_involutions(records: Iterable[InvolutionRecord]) -> str:
    out = []
    for r in records:
        rec = {"kgb_index": r.kgb_index, "support": sorted(r.support), "matrix": _matrix_json(r.theta)}
        if r.provenance:
            rec["provenance"] = r.provenance
        out.append(rec)
    return json.dumps(out, indent=1) + "\n"


def parse_involutions(data) -> list[InvolutionRecord]:
    if not isinstance(data, list):
        raise FixtureError("involution fixture must be a JSON array")
    if not data:
        raise FixtureError("no involutions")
    out, seen = [], set()
    for pos, rec in enumerate(data):
        label = f"record {pos}"
        try:
            x = int(rec["kgb_index"])
            label = f"record {pos} (x={x})"
            if x in seen:
                raise FixtureError("duplicate kgb_index")
            seen.add(x)
            theta = WeylElement.from_matrix([[Q(str(v)) for v in row] for row in rec["matrix"]])
            out.append(make_record(x, theta, rec.get("support"), rec.get("provenance", "")))
        except FixtureError as e:
            raise FixtureError(f"{label}: {e}") from None
        except (KeyError, TypeError, ValueError) as e:
            raise FixtureError(f"{label}: {e}") from None
    return out


def load_involutions(path: str | os.PathLike) -> list[InvolutionRecord]:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise FixtureError(f"{path}: {e}") from None
    return parse_involutions(data)


def involutions_by_index(records: Iterable[InvolutionRecord]) -> dict[int, InvolutionRecord]:
    return {r.kgb_index: r for r in records}


# ---------------------------------------------------------------- TSV tables

@dataclass(frozen=True)
class ScatteredRow:
    x: int
    lam: tuple[Q, ...]
    nu: tuple[Q, ...]
    infchar: tuple[int, ...]
    spin_lkts: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class IntegralRow:
    x: int
    lam: tuple[Q, ...]
    nu: tuple[Q, ...]
    infchar: tuple[int, ...]


def _tsv_records(text: str, columns: Sequence[str]) -> list[tuple[int, list[str]]]:
    rows, header = [], None
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cells = line.rstrip("\n").split("\t")
        if header is None:
            header = cells
            if header != list(columns):
                raise FixtureError(f"line {lineno}: expected columns {list(columns)}, got {header}")
            continue
        if len(cells) != len(columns):
            raise FixtureError(f"line {lineno}: expected {len(columns)} cells, got {len(cells)}")
        rows.append((lineno, cells))
    return rows


def _infchar(text: str) -> tuple[int, ...]:
    v = parse_vector(text, 6)
    if any(x.denominator != 1 or x < 0 for x in v):
        raise FixtureError(f"infinitesimal character {text} is not a nonnegative integer vector")
    return tuple(int(x) for x in v)


def _kweight(text: str) -> tuple[int, ...]:
    v = parse_vector(text, 6)
    if any(x.denominator != 1 for x in v):
        raise FixtureError(f"K-type {text} is not integral")
    return tuple(int(x) for x in v)


SCATTERED_COLUMNS = ("x", "lambda", "nu", "infchar", "spin_lkts")
INTEGRAL_COLUMNS = ("x", "lambda", "nu", "infchar")


def parse_scattered(text: str, strict: bool = True) -> list[ScatteredRow]:
    out = []
    for lineno, (x, lam, nu, inf, lkts) in _tsv_records(text, SCATTERED_COLUMNS):
        try:
            row = ScatteredRow(
                int(x), parse_vector(lam, 6), parse_vector(nu, 6), _infchar(inf),
                tuple(_kweight(s) for s in lkts.split(";") if s.strip()),
            )
        except ValueError as e:
            raise FixtureError(f"line {lineno}: {e}") from None
        if strict and row.x not in FULLY_SUPPORTED_KGB:
            raise FixtureError(f"line {lineno}: x={row.x} is not fully supported")
        if not row.spin_lkts:
            raise FixtureError(f"line {lineno}: no spin-lowest K-types")
        out.append(row)
    return out


def parse_integral(text: str) -> list[IntegralRow]:
    out = []
    for lineno, (x, lam, nu, inf) in _tsv_records(text, INTEGRAL_COLUMNS):
        try:
            row = IntegralRow(int(x), parse_vector(lam, 6), parse_vector(nu, 6), _infchar(inf))
        except ValueError as e:
            raise FixtureError(f"line {lineno}: {e}") from None
        if row.x not in FULLY_SUPPORTED_KGB:
            raise FixtureError(f"line {lineno}: x={row.x} is not fully supported")
        out.append(row)
    return out


def dump_scattered(rows: Iterable[ScatteredRow]) -> str:
    lines = ["\t".join(SCATTERED_COLUMNS)]
    for r in rows:
        lkts = ";".join(format_weight(m).replace(" ", "") for m in r.spin_lkts)
        lines.append("\t".join([str(r.x), format_vector(r.lam), format_vector(r.nu), format_vector(r.infchar), lkts]))
    return "\n".join(lines) + "\n"


def dump_integral(rows: Iterable[IntegralRow]) -> str:
    lines = ["\t".join(INTEGRAL_COLUMNS)]
    for r in rows:
        lines.append("\t".join([str(r.x), format_vector(r.lam), format_vector(r.nu), format_vector(r.infchar)]))
    return "\n".join(lines) + "\n"


def load_scattered(path) -> list[ScatteredRow]:
    return parse_scattered(Path(path).read_text(encoding="utf-8"))


def load_integral(path) -> list[IntegralRow]:
    return parse_integral(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------- tempered DSL

_VARS = "abcdef"
_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*([a-f]?)\s*")


@dataclass(frozen=True)
class Affine:
    coeffs: tuple[int, ...]
    const: int

    @classmethod
    def parse(cls, text: str) -> "Affine":
        s = text.strip()
        if not s:
            raise FixtureError("empty expression")
        coeffs, const, pos = [0] * 6, 0, 0
        while pos < len(s):
            m = _TERM.match(s, pos)
            sign, num, var = m.groups()
            if not num and not var:
                raise FixtureError(f"cannot parse {text!r} at {s[pos:]!r}")
            if pos and not sign:
                raise FixtureError(f"missing operator in {text!r}")
            k = (-1 if sign == "-" else 1) * (int(num) if num else 1)
            if var:
                coeffs[_VARS.index(var)] += k
            else:
                const += k
            pos = m.end()
        return cls(tuple(coeffs), const)

    def __call__(self, p: np.ndarray) -> np.ndarray:
        return p @ np.array(self.coeffs) + self.const

    def __str__(self) -> str:
        parts = []
        for c, v in zip(self.coeffs, _VARS):
            if c:
                mag = "" if abs(c) == 1 else str(abs(c))
                parts.append(("-" if c < 0 else "+") + mag + v)
        if self.const or not parts:
            parts.append(("-" if self.const < 0 else "+") + str(abs(self.const)))
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class Atom:
    expr: Affine
    op: str  # ">=" or "="
    value: int

    def holds(self, p: np.ndarray) -> np.ndarray:
        v = self.expr(p)
        return v >= self.value if self.op == ">=" else v == self.value

    def __str__(self) -> str:
        return f"{self.expr}{self.op}{self.value}"


_ATOM = re.compile(r"^(.*?)(>=|=)\s*(-?\d+)\s*$")


@dataclass(frozen=True)
class TemperedRow:
    x: int
    mu_formula: tuple[Affine, ...]
    alternatives: tuple[tuple[Atom, ...], ...]  # disjunction of conjunctions

    def satisfied(self, p: np.ndarray) -> np.ndarray:
        p = np.atleast_2d(p)
        ok = np.zeros(len(p), dtype=bool)
        for alt in self.alternatives:
            part = (p >= 0).all(axis=1)
            for atom in alt:
                part &= atom.holds(p)
            ok |= part
        return ok

    def mu(self, p: np.ndarray) -> np.ndarray:
        p = np.atleast_2d(p)
        return np.stack([e(p) for e in self.mu_formula], axis=1)

    def to_line(self) -> str:
        conds = " or ".join(", ".join(str(a) for a in alt) for alt in self.alternatives)
        return f"{self.x} | {', '.join(str(e) for e in self.mu_formula)} | {conds}"


def parse_tempered_line(line: str) -> TemperedRow:
    parts = [p.strip() for p in line.split("|")]
    if len(parts) != 3:
        raise FixtureError(f"expected 'x | formula | conditions': {line!r}")
    x = int(parts[0])
    exprs = [Affine.parse(e) for e in parts[1].split(",")]
    if len(exprs) != 6:
        raise FixtureError(f"x={x}: expected 6 expressions, got {len(exprs)}")
    alts = []
    for alt in re.split(r"\s+or\s+", parts[2]):
        atoms = []
        for raw in alt.split(","):
            m = _ATOM.match(raw.strip())
            if not m:
                raise FixtureError(f"x={x}: cannot parse condition {raw.strip()!r}")
            atoms.append(Atom(Affine.parse(m.group(1)), m.group(2), int(m.group(3))))
        alts.append(tuple(atoms))
    return TemperedRow(x, tuple(exprs), tuple(alts))


def parse_tempered(text: str) -> list[TemperedRow]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            out.append(parse_tempered_line(line))
        except (FixtureError, ValueError) as e:
            raise FixtureError(f"line {lineno}: {e}") from None
    return out


def load_tempered(path) -> list[TemperedRow]:
    return parse_tempered(Path(path).read_text(encoding="utf-8"))


def dump_tempered(rows: Iterable[TemperedRow]) -> str:
    return "\n".join(r.to_line() for r in rows) + "\n"


# ---------------------------------------------------------------- branch and failure files

def load_branch(path):
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return parse_branch(data)


def parse_branch(data: dict):
    from .spin_dirac import BranchList

    try:
        entries = [(_kweight(json.dumps(mu)), int(m)) for mu, m in data["ktypes"]]
        source = data.get("parameter")
        return BranchList.of(entries, data.get("height_bound"), source)
    except (KeyError, TypeError, ValueError) as e:
        raise FixtureError(f"branch file: {e}") from None


def dump_branch(branch) -> str:
    data = {
        "parameter": branch.source_parameter,
        "height_bound": branch.height_bound,
        "ktypes": [[list(mu), m] for mu, m in branch.ktypes],
    }
    return json.dumps(data, indent=1) + "\n"


@dataclass(frozen=True)
class FailureFixture:
    infchar: tuple[int, ...]
    lkts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for mu in self.lkts:
            if not is_ktype_weight(mu):
                raise FixtureError(f"failure fixture entry {format_weight(mu)} is not a K-type highest weight")


def parse_failure(data: dict) -> FailureFixture:
    try:
        return FailureFixture(
            _infchar(json.dumps(data["infchar"])), tuple(_kweight(json.dumps(m)) for m in data["lkts"])
        )
    except (KeyError, TypeError) as e:
        raise FixtureError(f"failure file: {e}") from None


def load_failure(path) -> FailureFixture:
    return parse_failure(json.loads(Path(path).read_text(encoding="utf-8")))


def dump_failure(f: FailureFixture) -> str:
    return json.dumps({"infchar": list(f.infchar), "lkts": [list(m) for m in f.lkts]}, indent=1) + "\n"


@dataclass(frozen=True)
class Tables:
    scattered: list[ScatteredRow]
    integral: list[IntegralRow]
    tempered: list[TemperedRow]


def load_tables(directory=None) -> Tables:
    d = fixture_dir(directory)
    return Tables(
        load_scattered(d / "scattered.tsv"),
        load_integral(d / "fs_integral.tsv"),
        load_tempered(d / "tempered.rows"),
    )


# ---------------------------------------------------------------- verification

def _frac_vec(v) -> str:
    return format_vector(v)


def _check_parameter(report: Report, row, thetas: dict[int, InvolutionRecord] | None) -> None:
    theta = thetas.get(row.x) if thetas else None
    if theta is None:
        report.add(row.x, "a:nu", None, "fixture gap: no involution for this x", status="gap")
        report.add(row.x, "b:infchar", None, "fixture gap: no involution for this x", status="gap")
        return
    nu = zeta_coords(nu_of(row.infchar, theta))
    report.add(row.x, "a:nu", nu == row.nu, f"(Lambda - theta Lambda)/2 = {_frac_vec(nu)}")
    try:
        lam = infchar_from_parameter(theta, row.lam, row.nu)
        report.add(row.x, "b:infchar", lam == row.infchar, f"infinitesimal character {_frac_vec(lam)}")
    except ValueError as e:
        report.add(row.x, "b:infchar", False, str(e))


def _conjugate_to(shift, infchar) -> bool:
    n4 = np.array([int(4 * x) for x in zeta_coords(shift)], dtype=np.int64)[None, :]
    dom, _ = dominate_batch(n4, "full")
    return bool((dom[0] == 4 * np.array(infchar)).all())


def verify_scattered_table(rows: Sequence[ScatteredRow], thetas: dict[int, InvolutionRecord] | None) -> Report:
    report = Report("scattered")
    for row in rows:
        _check_parameter(report, row, thetas)
        lam_sq = zeta_norm_sq(row.infchar)
        bad, small = [], []
        for mu in row.spin_lkts:
            if not is_ktype_weight(mu):
                bad.append(f"{format_weight(mu)} is not a K-type")
                continue
            s = spin_norm(mu)
            if s.norm_sq != lam_sq:
                bad.append(f"{format_weight(mu)} spin^2={format_rational(s.norm_sq)}")
            elif not any(_conjugate_to(s.dominant_shifts[j], row.infchar) for j in s.argmin_js):
                bad.append(f"{format_weight(mu)} no minimizing shift conjugate to Lambda")
            if not usmall_mask(ktype_to_zeta4(mu)[None, :])[0]:
                small.append(format_weight(mu))
        report.add(row.x, "c:spin=Lambda", not bad, "; ".join(bad) or f"|Lambda|^2={format_rational(lam_sq)}")
        report.add(row.x, "d:u-small", not small and not bad, "; ".join(small) or "all u-small")
        report.add(row.x, "e:conjecture", conjecture_check(row.infchar), _frac_vec(row.infchar))
    return report


def verify_integral_table(rows: Sequence[IntegralRow], thetas: dict[int, InvolutionRecord] | None) -> Report:
    report = Report("fs_integral")
    for row in rows:
        _check_parameter(report, row, thetas)
        lam_sq = zeta_norm_sq(row.infchar)
        rho_c_sq = norm_sq(build_e6_datum().rho_c)
        report.add(
            row.x, "norm<rho_c", lam_sq < rho_c_sq,
            f"|Lambda|^2={format_rational(lam_sq)} vs |rho_c|^2={format_rational(rho_c_sq)}",
        )
        report.add(row.x, "e:conjecture", conjecture_check(row.infchar), _frac_vec(row.infchar))
    return report


def sample_parameters(row: TemperedRow, n: int, seed: int, top: int = 6) -> np.ndarray:
    """Up to n distinct constraint-satisfying parameter tuples from {0..top}^6."""
    grid = np.stack(np.meshgrid(*[np.arange(top + 1)] * 6, indexing="ij"), -1).reshape(-1, 6)
    ok = grid[row.satisfied(grid)]
    if len(ok) <= n:
        return ok
    rng = np.random.default_rng([seed, row.x])
    return ok[np.sort(rng.choice(len(ok), size=n, replace=False))]


def verify_tempered_rows(rows: Sequence[TemperedRow], samples_per_row: int = 200, seed: int = 0) -> Report:
    report = Report("tempered")
    g3 = build_e6_datum().gram3
    for row in rows:
        params = sample_parameters(row, samples_per_row, seed)
        if not len(params):
            report.add(row.x, "samples", None, "constraints unsatisfiable in the sample box", status="skip")
            report.warnings.append(f"x={row.x}: no samples")
            continue
        if len(params) < samples_per_row:
            report.warnings.append(f"x={row.x}: only {len(params)} samples satisfy the constraints")
        mus = row.mu(params)
        valid = [is_ktype_weight(m) for m in mus.tolist()]
        report.add(row.x, "ktype", all(valid), f"{sum(valid)}/{len(mus)} valid")
        if not all(valid):
            continue
        mus4 = np.array([ktype_to_zeta4(m) for m in mus.tolist()])
        spin48 = spin_norm_sq_batch(mus4)
        lam48 = 16 * np.einsum("ni,ij,nj->n", params, g3, params)
        spin_ok = spin48 == lam48
        lam_ok = np.array([lambda_stats(m).norm_sq * 48 == s for m, s in zip(mus.tolist(), spin48.tolist())])
        report.add(row.x, "spin=|Lambda|", bool(spin_ok.all()), f"{int(spin_ok.sum())}/{len(mus)}")
        report.add(row.x, "spin=lambda", bool(lam_ok.all()), f"{int(lam_ok.sum())}/{len(mus)}")
    return report


def verify_failure_case(f: FailureFixture) -> Report:
    report = Report("failure")
    if not f.lkts:
        report.warnings.append("no lowest K-types: vacuous pass")
        return report
    lam_sq = zeta_norm_sq(f.infchar)
    for mu in f.lkts:
        s = spin_norm(mu).norm_sq
        margin = lam_sq - s
        detail = f"spin^2={format_rational(s)} |Lambda|^2={format_rational(lam_sq)} margin={format_rational(margin)}"
        if margin == 0:
            report.warnings.append(f"{format_weight(mu)}: Dirac inequality is an equality")
        report.add(format_weight(mu).replace(" ", ""), "spin<|Lambda|", margin > 0, detail)
    return report
