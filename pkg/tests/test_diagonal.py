import math

import numpy as np
import pytest

from opsmooth import (
    ConstantBasisSequence,
    SpikeDecaySequence,
    TailBasisSequence,
    canonical_norming_sequences,
    diag_MT,
    diag_norm,
    diag_smoothness,
    norm_attainment_set,
    norming_sequence_concentration,
    norming_sequence_gen,
    op_norm,
    smoothness_decide,
    span_closure_test,
)
from opsmooth.diagonal import (
    DiagonalOperator,
    DiagonalPreconditionError,
    SymbolGrammarError,
    UndecidableSpanError,
    accumulating_fixture,
    gapped_fixture,
)
from opsmooth.spaces import lp_norm
from opsmooth.tags import RULE_CONCENTRATION, RULE_SPAN


class TestGrammar:
    def test_parse_fixture_entries(self):
        acc = accumulating_fixture(2.0)
        assert acc.entry_float(1) == 1.0
        assert acc.entry_float(2) == 0.5
        assert acc.entry_float(10) == pytest.approx(0.9)
        gap = gapped_fixture(2.0)
        assert gap.entry_float(1) == 1.0
        assert all(gap.entry_float(k) == 0.5 for k in range(2, 8))

    def test_unbounded_tail_rejected(self):
        with pytest.raises(SymbolGrammarError, match="unbounded"):
            DiagonalOperator.parse("tail: n", 2.0)
        with pytest.raises(SymbolGrammarError, match="unbounded"):
            DiagonalOperator.parse("tail: n**2/(n+1)", 2.0)

    def test_non_rational_tail_rejected(self):
        with pytest.raises(SymbolGrammarError):
            DiagonalOperator.parse("tail: 2**n", 2.0)

    def test_pole_without_override_rejected(self):
        with pytest.raises(SymbolGrammarError, match="pole"):
            DiagonalOperator.parse("tail: 1/(n-3)", 2.0)

    def test_pole_with_override_accepted(self):
        D = DiagonalOperator.parse("override{3: 7}; tail: 1/(n-3)", 2.0)
        assert D.entry_float(3) == 7.0
        assert D.entry_float(4) == 1.0

    def test_extreme_exponents_rejected(self):
        for p in (1.0, math.inf):
            with pytest.raises(ValueError):
                gapped_fixture(p)

    def test_malformed_clauses_rejected(self):
        for bad in ("override{x:1}; tail: 1/2", "override{1}; tail: 1/2",
                    "spam: 1", ""):
            with pytest.raises(SymbolGrammarError):
                DiagonalOperator.parse(bad, 2.0)


class TestDiagNorm:
    def test_accumulating_fixture(self):
        s = diag_norm(accumulating_fixture(2.0))
        assert s.sup_value == 1.0
        assert s.argmax_indices == frozenset({1})
        assert s.limsup_tail == 1.0
        assert s.attained
        assert s.tail_argmax_from is None

    def test_gapped_fixture(self):
        s = diag_norm(gapped_fixture(2.0))
        assert s.sup_value == 1.0
        assert s.argmax_indices == frozenset({1})
        assert s.limsup_tail == 0.5
        assert s.attained

    def test_constant_rule_attains_everywhere(self):
        s = diag_norm(DiagonalOperator.parse("tail: 3/4", 2.0))
        assert s.sup_value == 0.75
        assert s.tail_argmax_from is not None
        assert s.attained

    def test_unattained_supremum(self):
        s = diag_norm(DiagonalOperator.parse("tail: 1 - 1/n", 2.0))
        assert s.sup_value == 1.0
        assert not s.attained
        assert s.argmax_indices == frozenset()

    def test_negative_entries_use_magnitudes(self):
        s = diag_norm(DiagonalOperator.parse("override{2: -2}; tail: 1/n", 2.0))
        assert s.sup_value == 2.0
        assert s.argmax_indices == frozenset({2})

    @pytest.mark.parametrize("dim", (4, 8, 16))
    def test_norm_matches_truncation_exactly(self, dim):
        # valid whenever the tail supremum does not exceed the head maximum
        for fixture in (accumulating_fixture(2.0), gapped_fixture(2.0)):
            trunc = fixture.truncate(dim)
            assert op_norm(trunc).value == diag_norm(fixture).sup_value


class TestDiagMT:
    def test_fixtures_are_singleton_pairs(self):
        for fixture in (accumulating_fixture(2.0), gapped_fixture(2.0)):
            mt = diag_MT(fixture)
            assert mt.attained
            assert mt.singleton_pair
            assert mt.support_indices == frozenset({1})

    def test_two_index_argmax(self):
        mt = diag_MT(DiagonalOperator.parse("override{1:1, 2:1}; tail: 0", 2.0))
        assert mt.attained and not mt.singleton_pair
        assert mt.support_indices == frozenset({1, 2})

    def test_unattained_is_empty(self):
        mt = diag_MT(DiagonalOperator.parse("tail: 1 - 1/n", 2.0))
        assert not mt.attained
        assert mt.support_indices == frozenset()


class TestCanonicalNormingSequences:
    def test_accumulating_has_norming_tail(self):
        acc = accumulating_fixture(2.0)
        seqs = canonical_norming_sequences(acc)
        tails = [s for s in seqs if isinstance(s, TailBasisSequence)]
        assert len(tails) == 1
        values = [abs(acc.entry_float(k)) for k in tails[0].indices(200)]
        assert values == sorted(values)
        assert values[-1] > 1 - 1e-2  # climbing toward the supremum 1

    def test_gapped_has_only_the_constant_sequence(self):
        seqs = canonical_norming_sequences(gapped_fixture(2.0))
        assert seqs == [ConstantBasisSequence(index=1)]

    def test_constant_rule_has_tail_and_constants(self):
        seqs = canonical_norming_sequences(DiagonalOperator.parse("tail: 3/4", 2.0))
        assert any(isinstance(s, TailBasisSequence) for s in seqs)
        assert any(isinstance(s, ConstantBasisSequence) for s in seqs)


class TestSpanClosure:
    def test_attaining_direction_outside_tail_span(self):
        acc = accumulating_fixture(2.0)
        tail = [s for s in canonical_norming_sequences(acc)
                if isinstance(s, TailBasisSequence)][0]
        assert span_closure_test(1, tail) is False

    def test_membership_when_sequence_contains_the_vector(self):
        assert span_closure_test(1, [ConstantBasisSequence(1)]) is True
        assert span_closure_test(3, TailBasisSequence(start=2)) is True

    def test_spike_decay_limit_recovers_base(self):
        seq = SpikeDecaySequence(base_index=1, spike_start=2)
        assert span_closure_test(1, seq) is True
        assert span_closure_test(5, seq) is True

    def test_monotone_under_adding_sequences(self):
        seqs = [TailBasisSequence(start=4)]
        before = span_closure_test(2, list(seqs))
        seqs.append(ConstantBasisSequence(2))
        after = span_closure_test(2, seqs)
        assert not before and after
        # adding more sequences never flips membership off
        seqs.append(TailBasisSequence(start=100))
        assert span_closure_test(2, seqs)

    def test_outside_fragment_is_refused(self):
        with pytest.raises(UndecidableSpanError):
            span_closure_test(1, ["mystery sequence"])


class TestConcentration:
    @pytest.mark.parametrize("p", (1.5, 2.0, 3.0))
    def test_gapped_certificate(self, p):
        result = norming_sequence_concentration(gapped_fixture(p), 1)
        assert result.certificate
        assert result.gap == pytest.approx(0.5)

    def test_accumulating_has_no_certificate(self):
        result = norming_sequence_concentration(accumulating_fixture(2.0), 1)
        assert not result.certificate
        assert result.gap == 0.0

    def test_precondition_requires_the_argmax_index(self):
        with pytest.raises(DiagonalPreconditionError):
            norming_sequence_concentration(gapped_fixture(2.0), 2)

    @pytest.mark.parametrize("p", (1.5, 2.0, 3.0))
    def test_gapped_truncation_identity(self, p):
        # ||Ty||^p = |y_1|^p (1 - 2^-p) + 2^-p on unit vectors, any truncation
        fixture = gapped_fixture(p)
        T = fixture.truncate(50)
        rng = np.random.default_rng(60)
        for _ in range(100):
            y = rng.standard_normal(50)
            y /= lp_norm(y, p)
            lhs = lp_norm(T.entries @ y, p) ** p
            rhs = abs(y[0]) ** p * (1 - 2.0 ** -p) + 2.0 ** -p
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_generated_sequences_concentrate_on_gapped_truncation(self):
        T = gapped_fixture(2.0).truncate(8)
        for mode in ("ascent", "perturbed"):
            seq = norming_sequence_gen(T, 200, mode, seed=3)
            assert abs(seq.vectors[-1].coords[0]) > 1 - 1e-3


class TestDiagSmoothness:
    def test_accumulating_not_smooth_via_span_rule(self):
        report = diag_smoothness(accumulating_fixture(2.0))
        assert report.verdict == "not_smooth"
        assert RULE_SPAN in report.citations
        assert report.analysis["span_member"] is False

    @pytest.mark.parametrize("p", (1.5, 2.0, 3.0))
    def test_gapped_smooth_via_concentration_rule(self, p):
        report = diag_smoothness(gapped_fixture(p))
        assert report.verdict == "smooth"
        assert RULE_CONCENTRATION in report.citations

    def test_unattained_supremum_is_undetermined(self):
        report = diag_smoothness(DiagonalOperator.parse("tail: 1 - 1/n", 2.0))
        assert report.verdict == "undetermined"

    def test_two_index_argmax_not_smooth(self):
        report = diag_smoothness(
            DiagonalOperator.parse("override{1:1, 2:1}; tail: 1/2", 2.0)
        )
        assert report.verdict == "not_smooth"

    def test_zero_rule_rejected(self):
        with pytest.raises(ValueError, match="zero"):
            diag_smoothness(DiagonalOperator.parse("tail: 0", 2.0))

    @pytest.mark.parametrize("dim", (4, 8, 16, 32))
    def test_truncation_consistency(self, dim):
        gapped = gapped_fixture(2.0)
        assert smoothness_decide(gapped.truncate(dim), seed=1).verdict == "smooth"
        assert diag_smoothness(gapped).verdict == "smooth"
        two = DiagonalOperator.parse("override{1:1, 2:1}; tail: 1/2", 2.0)
        assert smoothness_decide(two.truncate(dim), seed=1).verdict == "not_smooth"
        assert diag_smoothness(two).verdict == "not_smooth"

    @pytest.mark.parametrize("dim", (4, 8, 16))
    def test_truncations_keep_singleton_attainment(self, dim):
        for fixture in (accumulating_fixture(2.0), gapped_fixture(2.0)):
            mt = norm_attainment_set(fixture.truncate(dim), seed=1)
            assert mt.singleton_pair == diag_MT(fixture).singleton_pair
