"""
Closed-form entropy bounds, breaking criteria, thresholds and counts.

A construction breaks additivity when its two-copy upper bound c is below twice its
single-copy lower bound C. Every family also has an equivalent polynomial criterion
that is reported next to (C, c) so the two can be checked against each other.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Iterable
from dataclasses import asdict, dataclass, field
from enum import Enum
from math import comb, factorial
from typing import Any

import scipy.optimize

from .core.error_handler import ArgumentError, DomainError, NotInRegionError
from .core.logging import get_logger
from .core.validation import ConstructionSpec, Family
from .entropy import RenyiOrder, entropy_upper_from_mu1, lower_bound_C

logger = get_logger("bounds")

CEIL_FUZZ = 1e-12
EQUIVALENCE_TOL = 1e-9
CSV_COLUMNS = ("family", "p", "d", "member", "n_or_x0", "C", "c", "margin")


def fuzzy_ceil(x: float) -> int:
    """Ceiling that treats values within 1e-12 (relative) of an integer as that integer."""
    nearest = round(x)
    if abs(x - nearest) <= CEIL_FUZZ * max(1.0, abs(x)):
        return int(nearest)
    return math.ceil(x)


def fuzzy_floor(x: float) -> int:
    nearest = round(x)
    if abs(x - nearest) <= CEIL_FUZZ * max(1.0, abs(x)):
        return int(nearest)
    return math.floor(x)


def _order(p: float | RenyiOrder) -> float:
    return p.p if isinstance(p, RenyiOrder) else RenyiOrder(p).p


def _verdict(breaks: bool, p: float, exact_below_two: bool = False) -> str:
    """``exact_below_two`` marks constructions whose no-break verdict also holds for 1 < p ≤ 2."""
    if breaks:
        return "break"
    return "inconclusive" if p <= 2 and not exact_below_two else "no-break"


# ---------------------------------------------------------------------------
# Counts
# ---------------------------------------------------------------------------


def s_count(d: int) -> int:
    """Number of involutions of S_d: d! Σ_k 1/(2^k k! (d−2k)!), in exact integers."""
    if d < 1:
        raise ArgumentError(f"d must be >= 1, got {d}", argument="d")
    return sum(factorial(d) // (2**k * factorial(k) * factorial(d - 2 * k)) for k in range(d // 2 + 1))


def s_count_recurrence(d: int) -> int:
    """Same count from s(d) = s(d−1) + (d−1)·s(d−2)."""
    if d < 1:
        raise ArgumentError(f"d must be >= 1, got {d}", argument="d")
    previous, current = 1, 1  # s(0), s(1)
    for k in range(2, d + 1):
        previous, current = current, current + (k - 1) * previous
    return current


# ---------------------------------------------------------------------------
# Bound reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    """C, c and the verdict c < 2C for one construction at order p."""

    spec: ConstructionSpec
    p: float
    C: float
    c: float
    breaks: bool
    margin: float
    criterion: float
    criterion_name: str
    criterion_agrees: bool
    verdict: str

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["spec"] = self.spec.model_dump(mode="json")
        return data


def _report(spec: ConstructionSpec, p: float, C: float, c: float, criterion: float, name: str) -> BoundReport:
    margin = 2 * C - c
    breaks = margin > 0
    agrees = breaks == (criterion > 0) or abs(margin) <= EQUIVALENCE_TOL
    if not agrees:
        logger.warning(
            "Entropy verdict disagrees with the polynomial criterion",
            construction=spec.label,
            p=p,
            margin=margin,
            criterion=criterion,
        )
    return BoundReport(
        spec=spec,
        p=p,
        C=C,
        c=c,
        breaks=breaks,
        margin=margin,
        criterion=criterion,
        criterion_name=name,
        criterion_agrees=agrees,
        verdict=_verdict(breaks, p, exact_below_two=name == "parthasarathy"),
    )


def f_extension(p: float | RenyiOrder, d: int, x: float) -> float:
    """[d(d−1)+2x]^p − 2^{−p}[(d+2x)^p + (d−2x)^p]²; positive iff the Bell extension by x states breaks."""
    order = _order(p)
    if d <= 2:
        raise ArgumentError(f"d must be > 2, got {d}", argument="d")
    if not 1 <= x <= d / 2:
        raise ArgumentError(f"x must lie in [1, d/2={d / 2}], got {x}", argument="x")
    return (d * (d - 1) + 2 * x) ** order - 2.0**-order * ((d + 2 * x) ** order + (d - 2 * x) ** order) ** 2


def extension_upper_envelope(p: float | RenyiOrder, d: int, x: float) -> float:
    """β(x) = [d(d−1)+2x]^p − 2^{−p}(d+2x)^{2p} ≥ f_extension; its root is p-independent."""
    order = _order(p)
    return (d * (d - 1) + 2 * x) ** order - 2.0**-order * (d + 2 * x) ** (2 * order)


def extension_bracket_upper(d: int) -> float:
    """b = ½(1 − d + √(2d² − 4d + 1))."""
    return 0.5 * (1 - d + math.sqrt(2 * d * d - 4 * d + 1))


@dataclass(frozen=True)
class ExtensionRoot:
    x0: float
    r: int
    a: float
    b: float
    bracket_valid: bool


def extension_root(p: float | RenyiOrder, d: int) -> ExtensionRoot:
    """Root x₀ of f_extension on [1, d/4] by bisection, with the analytic bracket [a, b]."""
    order = _order(p)
    if d < 4:
        raise NotInRegionError(f"(p={order}, d={d}) has no extension root: need d >= 4", p=order, d=d)
    f1 = f_extension(order, d, 1)
    if f1 <= 0:
        raise NotInRegionError(f"f(1) = {f1:.6g} <= 0, (p={order}, d={d}) is outside the region", p=order, d=d)
    quarter = d / 4
    f_quarter = f_extension(order, d, quarter)
    if f_quarter >= 0:
        raise DomainError(f"f(d/4) = {f_quarter:.6g} is not negative; no sign change on [1, d/4]")

    x0 = float(scipy.optimize.bisect(lambda x: f_extension(order, d, x), 1.0, quarter, xtol=1e-10))
    a = 1 + (quarter - 1) * f1 / (f1 - f_quarter)
    b = extension_bracket_upper(d)
    valid = a - 1e-9 <= x0 <= b + 1e-9
    if not valid:
        logger.warning("Extension root outside its analytic bracket", p=order, d=d, x0=x0, a=a, b=b)
    return ExtensionRoot(x0=x0, r=math.floor(x0), a=a, b=b, bracket_valid=valid)


def bounds_extension(p: float | RenyiOrder, d: int, n: int) -> BoundReport:
    """Antisymmetric space extended by n orthogonal Bell states; needs n < d/2."""
    order = _order(p)
    if d <= 2:
        raise ArgumentError(f"d must be > 2, got {d}", argument="d")
    if not (1 <= n and 2 * n < d):
        raise ArgumentError(f"n must satisfy 1 <= n < d/2 = {d / 2}, got {n}", argument="n")
    spec = ConstructionSpec.build(family=Family.BELL_EXTENSION, d=d, n=n)
    C = lower_bound_C((d + 2 * n) / (2 * d), order)
    c = entropy_upper_from_mu1((n + d * (d - 1) / 2) / d**2, order)
    return _report(spec, order, C, c, f_extension(order, d, n), "f_extension")


def subspace_threshold(p: float | RenyiOrder, d: int) -> float:
    """4^{1/p−1}·d²: antisymmetric subspaces of dimension n break iff n exceeds it."""
    order = _order(p)
    return 4.0 ** (1 / order - 1) * d * d


def bounds_subspace(p: float | RenyiOrder, d: int, n: int) -> BoundReport:
    """n-dimensional subspace of the antisymmetric space: C = 1, c = (p/(1−p)) log₂(n/d²)."""
    order = _order(p)
    high = comb(d, 2) - 1
    if not 1 <= n <= high:
        raise ArgumentError(f"n must lie in [1, {high}] for d={d}, got {n}", argument="n")
    spec = ConstructionSpec.build(family=Family.ANTISYMMETRIC_SUBSPACE, d=d, n=n)
    c = entropy_upper_from_mu1(n / d**2, order)
    criterion = n**order / d ** (2 * order) - 4.0 ** (1 - order)
    return _report(spec, order, 1.0, c, criterion, "n^p/d^2p - 4^(1-p)")


def bounds_antisymmetric(p: float | RenyiOrder, d: int) -> BoundReport:
    """The whole antisymmetric space: C = 1, c = (p/(1−p)) log₂((d−1)/(2d))."""
    order = _order(p)
    if d < 2:
        raise ArgumentError(f"d must be >= 2, got {d}", argument="d")
    spec = ConstructionSpec.build(family=Family.ANTISYMMETRIC_FULL, d=d)
    c = entropy_upper_from_mu1(comb(d, 2) / d**2, order)
    criterion = ((d - 1) / (2 * d)) ** order - 4.0 ** (1 - order)
    return _report(spec, order, 1.0, c, criterion, "((d-1)/2d)^p - 4^(1-p)")


def parthasarathy_criterion(p: float | RenyiOrder, d: int, m: float) -> float:
    """((d−1)/d)^p − (1−m)^p − m^p."""
    order = _order(p)
    return ((d - 1) / d) ** order - (1 - m) ** order - m**order


def _check_m(m: float) -> None:
    if not 0 < m <= 0.5:
        raise DomainError(f"m must lie in (0, 1/2], got {m!r}", details={"m": m})


def bounds_parthasarathy(p: float | RenyiOrder, d: int, m: float) -> BoundReport:
    """Completely entangled space S with M_d ≥ m: C = C(m), c = (2p/(1−p)) log₂((d−1)/d)."""
    order = _order(p)
    if d < 2:
        raise ArgumentError(f"d must be >= 2, got {d}", argument="d")
    _check_m(m)
    spec = ConstructionSpec.build(family=Family.PARTHASARATHY, d=d)
    C = lower_bound_C(1 - m, order)
    c = entropy_upper_from_mu1(((d - 1) / d) ** 2, order)
    return _report(spec, order, C, c, parthasarathy_criterion(order, d, m), "parthasarathy")


def parthasarathy_threshold(p: float | RenyiOrder, m: float) -> float:
    """(1 − [(1−m)^p + m^p]^{1/p})⁻¹; the construction breaks exactly for d above it."""
    order = _order(p)
    _check_m(m)
    return 1.0 / (1.0 - ((1 - m) ** order + m**order) ** (1 / order))


def parthasarathy_d0(p: float | RenyiOrder, m: float) -> int:
    return fuzzy_ceil(parthasarathy_threshold(p, m))


# ---------------------------------------------------------------------------
# Subspace census
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusRecord:
    """How many antisymmetric-subspace dimensions n break additivity at (p, d)."""

    p: float
    d: int
    threshold: float
    l_formula: int
    l_direct: int
    discrepancy: int
    d0: int
    n_range: tuple[int, int] | None
    smallest_breaking_n: int | None
    d_necessary: int

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["n_range"] = list(self.n_range) if self.n_range else None
        return data


def subspace_d0(p: float | RenyiOrder) -> int:
    """⌈4(−1 + √(9 − 4^{1/p+1}))⁻¹⌉; breaking subspaces exist for every d above it."""
    order = _order(p)
    if order <= 2:
        raise DomainError(f"the subspace census needs p > 2, got p={order}", details={"p": order})
    radicand = 9 - 4.0 ** (1 / order + 1)
    if radicand <= 1:
        raise DomainError(f"d0 formula undefined at p={order}", details={"p": order})
    return fuzzy_ceil(4 / (-1 + math.sqrt(radicand)))


def subspace_d_necessary(p: float | RenyiOrder) -> int:
    """Smallest d above (1 − 2^{2/p−1})⁻¹, below which no antisymmetric subspace breaks."""
    order = _order(p)
    if order <= 2:
        raise DomainError(f"the subspace census needs p > 2, got p={order}", details={"p": order})
    return fuzzy_floor(1 / (1 - 2.0 ** (2 / order - 1))) + 1


def subspace_census(p: float | RenyiOrder, d: int) -> CensusRecord:
    """Both the closed-form count l_{p,d} and the direct count of n with 4^{1/p−1}d² < n < C(d,2)."""
    order = _order(p)
    d0 = subspace_d0(order)
    if d < 2:
        raise ArgumentError(f"d must be >= 2, got {d}", argument="d")
    tau = subspace_threshold(order, d)
    top = comb(d, 2)
    l_formula = 1 - fuzzy_ceil(tau) + top
    first = fuzzy_floor(tau) + 1
    last = top - 1
    l_direct = max(0, last - first + 1)
    return CensusRecord(
        p=order,
        d=d,
        threshold=tau,
        l_formula=l_formula,
        l_direct=l_direct,
        discrepancy=l_formula - l_direct,
        d0=d0,
        n_range=(first, last) if l_direct else None,
        smallest_breaking_n=first if l_direct else None,
        d_necessary=subspace_d_necessary(order),
    )


# ---------------------------------------------------------------------------
# Region scans
# ---------------------------------------------------------------------------


class ScanFamily(str, Enum):
    EXTENSION = "extension"
    SUBSPACE = "subspace"
    PARTHASARATHY = "parthasarathy"
    ANTISYMMETRIC = "antisym"

    @classmethod
    def _missing_(cls, value: object) -> ScanFamily | None:
        aliases = {
            Family.BELL_EXTENSION.value: cls.EXTENSION,
            Family.ANTISYMMETRIC_SUBSPACE.value: cls.SUBSPACE,
        }
        return aliases.get(str(value))


@dataclass
class ScanRow:
    family: str
    p: float
    d: int
    member: bool
    verdict: str
    n_or_x0: float | None
    C: float | None
    c: float | None
    margin: float | None
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def member_label(self) -> str:
        if self.member:
            return "true"
        return "inconclusive" if self.verdict == "inconclusive" else "false"

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["member"] = self.member_label
        return data


@dataclass
class RegionScan:
    """Membership of every (p, d) grid point, p-major then d ascending."""

    family: ScanFamily
    rows: list[ScanRow]
    metadata: dict[str, Any] = field(default_factory=dict)

    def members(self, p: float) -> list[int]:
        return [row.d for row in self.rows if row.p == p and row.member]

    def first_member(self, p: float) -> int | None:
        found = self.members(p)
        return found[0] if found else None

    def monotone_rows(self) -> bool:
        """True when, for each p, membership never switches off as d grows."""
        by_p: dict[float, list[bool]] = {}
        for row in self.rows:
            by_p.setdefault(row.p, []).append(row.member)
        return all(not (a and not b) for flags in by_p.values() for a, b in zip(flags, flags[1:], strict=False))

    def to_csv(self) -> str:
        buffer = io.StringIO()
        for key, value in self.metadata.items():
            buffer.write(f"# {key}={value}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow(
                [
                    row.family,
                    _fmt(row.p),
                    row.d,
                    row.member_label,
                    _fmt(row.n_or_x0),
                    _fmt(row.C),
                    _fmt(row.c),
                    _fmt(row.margin),
                ]
            )
        return buffer.getvalue()

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": self.family.value,
            "columns": list(CSV_COLUMNS),
            "metadata": self.metadata,
            "monotone": self.monotone_rows(),
            "rows": [row.to_dict() for row in self.rows],
        }


def _fmt(value: float | int | None) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return format(value, ".17g")


def _extension_row(p: float, d: int) -> ScanRow:
    if d <= 2:
        return ScanRow("extension", p, d, False, _verdict(False, p), None, None, None, None)
    report = bounds_extension(p, d, 1)
    extras: dict[str, Any] = {"f1": f_extension(p, d, 1)}
    x0 = None
    if d >= 4 and extras["f1"] > 0:
        root = extension_root(p, d)
        x0 = root.x0
        extras.update(r=root.r, a=root.a, b=root.b, bracket_valid=root.bracket_valid)
    member = x0 is not None
    return ScanRow("extension", p, d, member, _verdict(member, p), x0, report.C, report.c, report.margin, extras)


def _subspace_row(p: float, d: int) -> ScanRow:
    top = comb(d, 2) - 1
    if top < 1:
        return ScanRow("subspace", p, d, False, _verdict(False, p), None, None, None, None)
    if p <= 2:
        report = bounds_subspace(p, d, top)
        return ScanRow("subspace", p, d, False, _verdict(False, p), top, report.C, report.c, report.margin)
    census = subspace_census(p, d)
    n = census.smallest_breaking_n or top
    report = bounds_subspace(p, d, n)
    member = census.l_direct > 0
    extras = {"l_formula": census.l_formula, "l_direct": census.l_direct, "d0": census.d0}
    return ScanRow("subspace", p, d, member, _verdict(member, p), n, report.C, report.c, report.margin, extras)


def _parthasarathy_row(p: float, d: int, m: float) -> ScanRow:
    report = bounds_parthasarathy(p, d, m)
    extras = {"m": m, "d0": parthasarathy_d0(p, m)}
    return ScanRow(
        "parthasarathy", p, d, report.breaks, report.verdict, None, report.C, report.c, report.margin, extras
    )


def _antisymmetric_row(p: float, d: int) -> ScanRow:
    report = bounds_antisymmetric(p, d)
    return ScanRow("antisym", p, d, report.breaks, report.verdict, comb(d, 2), report.C, report.c, report.margin)


def region_scan(
    family: ScanFamily | str, p_grid: Iterable[float], d_grid: Iterable[int], m: float = 0.5
) -> RegionScan:
    """Evaluate family membership over the grid; rows are p-major with both axes ascending."""
    family = ScanFamily(family)
    ps = sorted({_order(p) for p in p_grid})
    ds = sorted({int(d) for d in d_grid})
    if not ps or not ds:
        raise ArgumentError("p and d grids must be nonempty", argument="grid")
    if ds[0] < 2:
        raise ArgumentError(f"d grid must start at 2 or above, got {ds[0]}", argument="d_grid")

    metadata: dict[str, Any] = {"family": family.value}
    rows: list[ScanRow] = []
    for p in ps:
        for d in ds:
            if family is ScanFamily.EXTENSION:
                rows.append(_extension_row(p, d))
            elif family is ScanFamily.SUBSPACE:
                rows.append(_subspace_row(p, d))
            elif family is ScanFamily.PARTHASARATHY:
                rows.append(_parthasarathy_row(p, d, m))
            else:
                rows.append(_antisymmetric_row(p, d))
        if family is ScanFamily.SUBSPACE and p > 2:
            metadata[f"d0[p={_fmt(p)}]"] = subspace_d0(p)
            metadata[f"d_necessary[p={_fmt(p)}]"] = subspace_d_necessary(p)
        if family is ScanFamily.PARTHASARATHY:
            metadata["m"] = m
            metadata[f"d0[p={_fmt(p)}]"] = parthasarathy_d0(p, m)

    scan = RegionScan(family=family, rows=rows, metadata=metadata)
    if not scan.monotone_rows():
        logger.warning("Region membership is not monotone in d", family=family.value)
    logger.info("Region scan complete", family=family.value, rows=len(rows), members=sum(r.member for r in rows))
    return scan


def first_breaking_d(p: float | RenyiOrder, m: float, d_max: int = 64) -> int | None:
    """Smallest d in [2, d_max] at which the Parthasarathy construction breaks."""
    order = _order(p)
    return next((d for d in range(2, d_max + 1) if bounds_parthasarathy(order, d, m).breaks), None)


def analytic_bounds(spec: ConstructionSpec, p: float | RenyiOrder, m: float | None = None) -> BoundReport:
    """BoundReport for any construction spec (``m`` is required for the Parthasarathy family)."""
    if spec.family is Family.ANTISYMMETRIC_FULL:
        return bounds_antisymmetric(p, spec.d)
    if spec.family is Family.ANTISYMMETRIC_SUBSPACE:
        assert spec.n is not None
        return bounds_subspace(p, spec.d, spec.n)
    if spec.family is Family.BELL_EXTENSION:
        assert spec.n is not None
        return bounds_extension(p, spec.d, spec.n)
    if m is None:
        raise ArgumentError("the parthasarathy family needs m, a lower bound on M_d", argument="m")
    return bounds_parthasarathy(p, spec.d, m)
