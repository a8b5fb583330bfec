"""Diagonal operators on the sequence space lp (1 < p < inf), given by a
closed-form entry rule n -> d_n.

The rule grammar is a rational function of n for the tail plus finitely
many index overrides, e.g. ``override{1:1}; tail: 1 - 1/n``.  Within
that grammar the supremum, its argmax set and the tail limit are decided
exactly by monotonicity analysis of the rational tail, never by
truncation; smoothness verdicts then follow from the attainment
structure and the spectral gap.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np
import sympy as sp

from .operators import MatrixOperator, OperatorSmoothnessReport
from .spaces import NormSpec, SmoothnessVerdict
from .tags import RULE_CONCENTRATION, RULE_PLUMBING, RULE_SPAN

_N = sp.Symbol("n")

# The two stock entry rules used as regression fixtures: a spectrum
# accumulating at the top value from below, and a spectrum with a strict
# gap below the top value.
ACCUMULATING_SYMBOL = "override{1:1}; tail: 1 - 1/n"
GAPPED_SYMBOL = "override{1:1}; tail: 1/2"


class SymbolGrammarError(ValueError):
    """The entry rule is outside the supported grammar."""


class UndecidableSpanError(ValueError):
    """Span membership cannot be decided for the given sequence kind."""


class DiagonalPreconditionError(ValueError):
    """An operation was invoked outside its stated precondition."""


def _parse_value(text: str) -> sp.Rational:
    try:
        return sp.Rational(text.strip())
    except (TypeError, ValueError, sp.SympifyError) as exc:
        raise SymbolGrammarError(f"cannot parse value {text!r}") from exc


@dataclass(frozen=True)
class DiagonalOperator:
    """Entry rule d_n = overrides.get(n, tail(n)) acting on lp."""

    overrides: dict
    tail: sp.Expr
    p: float
    symbol_text: str = ""

    def __post_init__(self):
        if not (1.0 < float(self.p) < math.inf):
            raise ValueError("diagonal operators are supported for 1 < p < inf")
        object.__setattr__(self, "p", float(self.p))

    @classmethod
    def parse(cls, text: str, p: float) -> "DiagonalOperator":
        overrides: dict = {}
        tail = sp.Integer(0)
        saw_tail = False
        for part in text.split(";"):
            part = part.strip()
            if not part:
                continue
            if part.startswith("override"):
                m = re.fullmatch(r"override\s*\{(.*)\}", part)
                if m is None:
                    raise SymbolGrammarError(f"malformed override clause {part!r}")
                for item in m.group(1).split(","):
                    if not item.strip():
                        continue
                    if ":" not in item:
                        raise SymbolGrammarError(f"malformed override item {item!r}")
                    k_text, v_text = item.split(":", 1)
                    try:
                        k = int(k_text)
                    except ValueError as exc:
                        raise SymbolGrammarError(f"bad override index {k_text!r}") from exc
                    if k < 1:
                        raise SymbolGrammarError("override indices start at 1")
                    overrides[k] = _parse_value(v_text)
            elif part.startswith("tail"):
                _, _, expr_text = part.partition(":")
                try:
                    tail = sp.sympify(expr_text, locals={"n": _N}, rational=True)
                except (sp.SympifyError, SyntaxError, TypeError) as exc:
                    raise SymbolGrammarError(f"cannot parse tail {expr_text!r}") from exc
                saw_tail = True
            else:
                raise SymbolGrammarError(f"unrecognized clause {part!r}")
        if not saw_tail and not overrides:
            raise SymbolGrammarError("empty symbol")
        op = cls(overrides, sp.together(tail), p, symbol_text=text)
        op._validate()
        return op

    def _validate(self):
        extra = self.tail.free_symbols - {_N}
        if extra:
            raise SymbolGrammarError(f"tail may only involve n, found {extra}")
        if not self.tail.is_rational_function(_N):
            raise SymbolGrammarError("tail must be a rational function of n")
        denom = sp.denom(sp.together(self.tail))
        for root in _real_roots(denom):
            k = _as_positive_int(root)
            if k is not None and k not in self.overrides:
                raise SymbolGrammarError(
                    f"tail has a pole at n={k} that is not overridden"
                )
        limit = sp.limit(self.tail, _N, sp.oo)
        if limit.is_infinite:
            raise SymbolGrammarError("unbounded symbol: tail diverges")

    def entry_exact(self, k: int) -> sp.Expr:
        if k < 1:
            raise ValueError("indices start at 1")
        if k in self.overrides:
            return self.overrides[k]
        return sp.nsimplify(self.tail.subs(_N, sp.Integer(k)))

    def entry_float(self, k: int) -> float:
        return float(self.entry_exact(k))

    def truncate(self, dim: int, r: float | None = None) -> MatrixOperator:
        values = [self.entry_float(k) for k in range(1, dim + 1)]
        return MatrixOperator(
            np.diag(values),
            NormSpec(self.p, dim),
            NormSpec(r if r is not None else self.p, dim),
        )


def _real_roots(poly_expr) -> list[float]:
    poly_expr = sp.expand(poly_expr)
    if poly_expr.is_constant():
        return []
    poly = sp.Poly(poly_expr, _N)
    return [complex(r).real for r in poly.nroots() if abs(complex(r).imag) < 1e-9]


def _as_positive_int(value: float) -> int | None:
    k = round(value)
    if k >= 1 and abs(value - k) < 1e-9:
        return int(k)
    return None


@dataclass(frozen=True)
class _TailRegion:
    start: int
    mode: str  # "constant" | "decreasing" | "increasing"
    first_abs: sp.Expr  # |tail(start)|
    limit_abs: sp.Expr


@dataclass(frozen=True)
class _Spectrum:
    head: dict  # index -> exact |d_k| for 1..start-1
    region: _TailRegion

    def sup_excluding(self, exclude: frozenset = frozenset()):
        """(sup_exact, head argmax list, region flags) over indices not excluded."""
        entries = [(v, k) for k, v in self.head.items() if k not in exclude]
        head_max = None
        for v, _ in entries:
            if head_max is None or v > head_max:
                head_max = v
        region = self.region
        region_sup = region.limit_abs if region.mode == "increasing" else region.first_abs
        sup = region_sup if head_max is None else max(head_max, region_sup)
        head_argmax = sorted(k for v, k in entries if v == sup)
        region_attains = region.mode != "increasing" and region_sup == sup
        region_all = region.mode == "constant" and region_sup == sup
        return sup, head_argmax, region_attains, region_all


@dataclass(frozen=True)
class DiagonalSpectrumSummary:
    """Exact supremum structure of |d_n|.

    ``argmax_indices`` lists the finitely many head indices attaining
    the supremum; ``tail_argmax_from`` is set when every index from
    there on attains it too (eventually-constant rules).
    """

    sup_value: float
    sup_exact: sp.Expr
    argmax_indices: frozenset
    tail_argmax_from: int | None
    limsup_tail: float
    limsup_exact: sp.Expr
    attained: bool


def _analyze(D: DiagonalOperator) -> _Spectrum:
    tail = D.tail
    roots: list[float] = []
    if not tail.is_constant():
        together = sp.together(tail)
        roots += _real_roots(sp.numer(together))
        roots += _real_roots(sp.denom(together))
        roots += _real_roots(sp.numer(sp.together(sp.diff(tail, _N))))
    n0 = 1
    if roots:
        n0 = max(n0, int(math.ceil(max(roots))) + 1)
    if D.overrides:
        n0 = max(n0, max(D.overrides))
    start = n0 + 3  # margin so the strict argmax never hides in the region
    head = {k: abs(D.entry_exact(k)) for k in range(1, start)}
    limit_abs = abs(sp.limit(tail, _N, sp.oo))
    if tail.is_constant():
        region = _TailRegion(start, "constant", limit_abs, limit_abs)
    else:
        first_abs = abs(sp.nsimplify(tail.subs(_N, sp.Integer(start))))
        if first_abs > limit_abs:
            region = _TailRegion(start, "decreasing", first_abs, limit_abs)
        elif first_abs < limit_abs:
            region = _TailRegion(start, "increasing", first_abs, limit_abs)
        else:
            region = _TailRegion(start, "constant", first_abs, limit_abs)
    return _Spectrum(head, region)


def diag_norm(D: DiagonalOperator) -> DiagonalSpectrumSummary:
    """Exact norm data: sup |d_n|, its argmax set, and the tail limit."""
    spec = _analyze(D)
    sup, head_argmax, region_attains, region_all = spec.sup_excluding()
    argmax = set(head_argmax)
    tail_from = None
    if region_attains:
        if region_all:
            tail_from = spec.region.start
        else:
            argmax.add(spec.region.start)
    return DiagonalSpectrumSummary(
        sup_value=float(sup),
        sup_exact=sup,
        argmax_indices=frozenset(argmax),
        tail_argmax_from=tail_from,
        limsup_tail=float(spec.region.limit_abs),
        limsup_exact=spec.region.limit_abs,
        attained=bool(argmax) or tail_from is not None,
    )


@dataclass(frozen=True)
class DiagMTResult:
    """Description of the attainment set of a diagonal operator."""

    attained: bool
    support_indices: frozenset
    tail_support_from: int | None
    singleton_pair: bool
    description: str


def diag_MT(D: DiagonalOperator) -> DiagMTResult:
    """The attainment set: unit vectors supported on argmax indices.

    For a diagonal rule, ||Tx||^p = sum |d_i|^p |x_i|^p reaches sup^p
    exactly when the support of x lies inside the argmax set, so the set
    is empty iff the supremum is not attained and a single antipodal
    pair iff the argmax is one index.
    """
    summary = diag_norm(D)
    if not summary.attained:
        return DiagMTResult(False, frozenset(), None, False, "empty: supremum not attained")
    singleton = summary.tail_argmax_from is None and len(summary.argmax_indices) == 1
    if singleton:
        k = next(iter(summary.argmax_indices))
        desc = f"the antipodal basis pair at index {k}"
    elif summary.tail_argmax_from is not None:
        desc = (
            f"unit vectors supported on {sorted(summary.argmax_indices)} "
            f"and on all indices >= {summary.tail_argmax_from}"
        )
    else:
        desc = f"unit vectors supported on {sorted(summary.argmax_indices)}"
    return DiagMTResult(
        True,
        summary.argmax_indices,
        summary.tail_argmax_from,
        singleton,
        desc,
    )


# ---------------------------------------------------------------------------
# symbolic sequences


@dataclass(frozen=True)
class ConstantBasisSequence:
    """x_k = e_index for every k."""

    index: int

    def indices(self, count: int) -> list[int]:
        return [self.index] * count


@dataclass(frozen=True)
class TailBasisSequence:
    """x_k = e_{n_k} along the non-overridden indices n_k >= start."""

    start: int
    excluded: frozenset = frozenset()

    def indices(self, count: int) -> list[int]:
        out = []
        k = self.start
        while len(out) < count:
            if k not in self.excluded:
                out.append(k)
            k += 1
        return out


@dataclass(frozen=True)
class SpikeDecaySequence:
    """x_k = normalize(e_base + (1/k) e_k) for k >= spike_start.

    Converges to e_base while its terms touch ever-later coordinates.
    """

    base_index: int
    spike_start: int = 2


def canonical_norming_sequences(D: DiagonalOperator) -> list:
    """The stock norming sequences of a diagonal rule.

    One constant sequence per attaining basis index, plus the tail basis
    sequence whenever |d_n| approaches the supremum along the tail.
    """
    summary = diag_norm(D)
    spec = _analyze(D)
    out: list = [ConstantBasisSequence(k) for k in sorted(summary.argmax_indices)]
    tail_norming = summary.tail_argmax_from is not None or (
        spec.region.mode == "increasing" and summary.limsup_exact == summary.sup_exact
    )
    if tail_norming:
        start = summary.tail_argmax_from or spec.region.start
        out.append(TailBasisSequence(start=start, excluded=frozenset(D.overrides) - set(range(1, start))))
    return out


def span_closure_test(x0_index: int, sequences) -> bool:
    """Is e_{x0_index} in the closed span of the sequence terms?

    The closed span of a family of basis vectors (and of spike-decay
    perturbations of one) is the set of vectors supported on the union
    of the touched coordinates, so membership reduces to an index check.
    Sequence kinds outside the decidable fragment raise
    UndecidableSpanError rather than guessing.
    """
    if x0_index < 1:
        raise ValueError("indices start at 1")
    seq_list = sequences if isinstance(sequences, (list, tuple)) else [sequences]
    for seq in seq_list:
        if isinstance(seq, ConstantBasisSequence):
            if x0_index == seq.index:
                return True
        elif isinstance(seq, TailBasisSequence):
            if x0_index >= seq.start and x0_index not in seq.excluded:
                return True
        elif isinstance(seq, SpikeDecaySequence):
            if x0_index == seq.base_index or x0_index >= seq.spike_start:
                return True
        else:
            raise UndecidableSpanError(
                f"membership undecidable in fragment for sequence {type(seq).__name__}"
            )
    return False


@dataclass(frozen=True)
class ConcentrationResult:
    """Spectral-gap certificate forcing norming sequences onto the head index.

    With s the supremum of |d_n| away from the head index, every unit y
    satisfies ||Ty||^p <= sup^p |y_head|^p + s^p (1 - |y_head|^p); a
    positive gap therefore forces |y_head| -> 1 along every norming
    sequence, so all of them concentrate at the attaining pair.
    """

    gap: float
    certificate: bool
    sup_value: float
    off_sup: float


def norming_sequence_concentration(D: DiagonalOperator, head_index: int) -> ConcentrationResult:
    summary = diag_norm(D)
    if summary.tail_argmax_from is not None or summary.argmax_indices != frozenset({head_index}):
        raise DiagonalPreconditionError(
            f"concentration requires the argmax to be exactly index {head_index}"
        )
    spec = _analyze(D)
    off_sup, _, _, _ = spec.sup_excluding(frozenset({head_index}))
    gap = summary.sup_exact - off_sup
    return ConcentrationResult(
        gap=float(gap),
        certificate=bool(gap > 0),
        sup_value=float(summary.sup_exact),
        off_sup=float(off_sup),
    )


def diag_smoothness(D: DiagonalOperator) -> OperatorSmoothnessReport:
    """Smoothness verdict for a diagonal rule.

    smooth: a single attaining index with a strict spectral gap (the
    attainment pair is unique, its image is a smooth point, and norming
    sequences concentrate).  not_smooth: several attaining indices, or a
    unique one with zero gap (the tail basis sequence is then norming
    while the attaining direction lies outside its closed span).
    undetermined: supremum not attained, where no implemented rule
    applies.
    """
    summary = diag_norm(D)
    mt = diag_MT(D)
    notes: list[str] = []
    analysis: dict = {"spectrum": summary}
    if summary.sup_value == 0.0:
        raise ValueError("smoothness is undefined for the zero operator")
    if not summary.attained:
        verdict = "undetermined"
        citations = [RULE_PLUMBING]
        notes.append(
            "supremum is approached but never attained; the attainment set is "
            "empty and no implemented criterion applies"
        )
    elif not mt.singleton_pair:
        verdict = "not_smooth"
        citations = [RULE_SPAN]
        notes.append("attainment set is not a single antipodal pair")
    else:
        head = next(iter(summary.argmax_indices))
        conc = norming_sequence_concentration(D, head)
        analysis["concentration"] = conc
        analysis["image_smooth"] = True  # nonzero points of lp, 1<p<inf, are smooth
        if conc.certificate:
            verdict = "smooth"
            citations = [RULE_CONCENTRATION]
            notes.append(
                f"unique attaining index {head} with spectral gap {conc.gap}; "
                "every norming sequence concentrates at the attaining pair"
            )
        else:
            verdict = "not_smooth"
            citations = [RULE_SPAN]
            start = _analyze(D).region.start
            witness = TailBasisSequence(
                start=start,
                excluded=frozenset(D.overrides) - set(range(1, start)),
            )
            member = span_closure_test(head, witness)
            analysis["witness_sequence"] = witness
            analysis["span_member"] = member
            notes.append(
                f"the tail basis sequence from index {witness.start} is norming, "
                f"yet the attaining direction e_{head} lies outside its closed span"
            )
    image_smooth = (
        SmoothnessVerdict(True, []) if verdict == "smooth" else None
    )
    return OperatorSmoothnessReport(
        verdict=verdict,
        mt=mt,
        image_smooth=image_smooth,
        transfer_results=[],
        counterexample=None,
        citations=citations,
        notes=notes,
        analysis=analysis,
    )


def accumulating_fixture(p: float = 2.0) -> DiagonalOperator:
    return DiagonalOperator.parse(ACCUMULATING_SYMBOL, p)


def gapped_fixture(p: float = 2.0) -> DiagonalOperator:
    return DiagonalOperator.parse(GAPPED_SYMBOL, p)
