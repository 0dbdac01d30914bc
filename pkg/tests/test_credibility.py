from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from canvas.credibility import (
    CredibilityStore,
    EVIDENCE_COMPONENTS,
    EvidenceAssessment,
    NARRATIVE_COMPONENTS,
    NarrativeAnalysis,
    PROFILE_COORDINATES,
    ScoringConfig,
    SourceProfile,
    combined_credibility,
    evaluate_content,
    report_signals,
    update_source_profile,
)
from canvas.errors import DuplicateId, NoReport, OutOfRange, UnknownSource

from oracles import convex_combination, ewma_replay, ewma_step, mean_of_ten

UNIT = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


def evidence_of(*values) -> EvidenceAssessment:
    return EvidenceAssessment(**dict(zip(EVIDENCE_COMPONENTS, values)))


def narrative_of(*values) -> NarrativeAnalysis:
    return NarrativeAnalysis(**dict(zip(NARRATIVE_COMPONENTS, values)))


# -- content evaluation -------------------------------------------------------


def test_extremes():
    assert evaluate_content(evidence_of(*[1.0] * 5), narrative_of(*[1.0] * 5)) == 1.0
    assert evaluate_content(evidence_of(*[0.0] * 5), narrative_of(*[0.0] * 5)) == 0.0


def test_equal_weight_mean_matches_oracle():
    evidence = evidence_of(0.8, 0.6, 1.0, 0.4, 0.7)
    narrative = narrative_of(0.9, 0.5, 0.6, 0.8, 0.7)
    expected = mean_of_ten(evidence.to_doc(), narrative.to_doc())
    assert evaluate_content(evidence, narrative) == pytest.approx(expected, abs=1e-15)


def test_component_out_of_range_rejected():
    with pytest.raises(OutOfRange):
        evidence_of(1.2, 0.5, 0.5, 0.5, 0.5)
    with pytest.raises(OutOfRange):
        narrative_of(-0.1, 0.5, 0.5, 0.5, 0.5)


def test_custom_weights_change_the_blend():
    config = ScoringConfig(weights={"evidence.consensus": 9.0})
    high_consensus = evaluate_content(
        evidence_of(1.0, 0.0, 0.0, 0.0, 0.0), narrative_of(*[0.0] * 5), config
    )
    assert high_consensus == pytest.approx(9.0 / 18.0)


@given(st.lists(UNIT, min_size=10, max_size=10))
def test_content_score_bounded(values):
    score = evaluate_content(evidence_of(*values[:5]), narrative_of(*values[5:]))
    assert 0.0 <= score <= 1.0


@given(st.lists(UNIT, min_size=10, max_size=10),
       st.integers(min_value=0, max_value=9), UNIT)
def test_content_score_monotone_in_each_component(values, index, bump):
    raised = list(values)
    raised[index] = min(1.0, raised[index] + bump)
    base = evaluate_content(evidence_of(*values[:5]), narrative_of(*values[5:]))
    more = evaluate_content(evidence_of(*raised[:5]), narrative_of(*raised[5:]))
    assert more >= base - 1e-12


def test_negative_polarity_inverted_at_ingestion():
    doc = {
        "fact_balance": 0.9,
        "sensationalism": 0.8,
        "emotional_language": 0.3,
        "contextual_completeness": 0.7,
        "framing_bias": 0.25,
    }
    narrative = NarrativeAnalysis.from_doc(doc)
    assert narrative.objectivity == pytest.approx(0.2)
    assert narrative.emotional_neutrality == pytest.approx(0.7)
    assert narrative.framing_neutrality == pytest.approx(0.75)


# -- profile smoothing ----------------------------------------------------------


def test_ewma_single_step_example():
    profile = SourceProfile("s", {c: 0.5 for c in PROFILE_COORDINATES}, 0, "t0")
    signals = {c: 1.0 for c in PROFILE_COORDINATES}
    updated = update_source_profile(profile, signals, 0.3, "t1")
    assert updated.coordinates["track_record"] == pytest.approx(
        ewma_step(0.5, 1.0, 0.3), abs=1e-15
    )
    assert updated.coordinates["track_record"] == pytest.approx(0.65)
    assert updated.report_count == 1


def test_ewma_fixed_point():
    profile = SourceProfile("s", {c: 0.42 for c in PROFILE_COORDINATES}, 3, "t0")
    updated = update_source_profile(
        profile, {c: 0.42 for c in PROFILE_COORDINATES}, 0.3, "t1"
    )
    assert updated.coordinates == profile.coordinates
    assert updated.report_count == 4


def test_ewma_replay_100_random_reports_matches_oracle():
    rng = random.Random(1234)
    profile = SourceProfile("s", {c: 0.5 for c in PROFILE_COORDINATES}, 0, "t")
    sequence = [
        {c: rng.random() for c in PROFILE_COORDINATES} for _ in range(100)
    ]
    replayed = profile
    for signals in sequence:
        replayed = update_source_profile(replayed, signals, 0.3, "t")
    oracle = ewma_replay({c: 0.5 for c in PROFILE_COORDINATES}, sequence, 0.3)
    for name in PROFILE_COORDINATES:
        assert abs(replayed.coordinates[name] - oracle[name]) <= 1e-12
    assert replayed.report_count == 100


def test_ewma_converges_monotonically():
    profile = SourceProfile("s", {c: 0.2 for c in PROFILE_COORDINATES}, 0, "t")
    previous = 0.2
    for _ in range(50):
        profile = update_source_profile(
            profile, {c: 0.9 for c in PROFILE_COORDINATES}, 0.3, "t"
        )
        value = profile.coordinates["expertise"]
        assert previous < value < 0.9
        previous = value


# -- combination ------------------------------------------------------------------


def test_combined_extremes_and_oracle():
    assert combined_credibility(1.0, 1.0) == 1.0
    assert combined_credibility(0.0, 0.0) == 0.0
    got = combined_credibility(0.8, 0.5, 0.6)
    assert got == pytest.approx(convex_combination(0.8, 0.5, 0.6), abs=1e-15)


@given(UNIT, UNIT, UNIT, UNIT)
def test_combined_bounded_and_monotone(content, mean, delta_content, delta_mean):
    base = combined_credibility(content, mean)
    assert 0.0 <= base <= 1.0
    more_content = combined_credibility(min(1.0, content + delta_content), mean)
    more_mean = combined_credibility(content, min(1.0, mean + delta_mean))
    assert more_content >= base - 1e-12
    assert more_mean >= base - 1e-12


def test_combined_rejects_out_of_range():
    with pytest.raises(OutOfRange):
        combined_credibility(1.5, 0.5)


# -- store: reports, audit, badges -------------------------------------------------


def store_with_source(source_id="src-a") -> CredibilityStore:
    store = CredibilityStore()
    store.create_source("A source", "publication", source_id=source_id, now="t0")
    return store


def test_ingest_report_audit_recomputable():
    store = store_with_source()
    evidence = evidence_of(0.8, 0.6, 1.0, 0.4, 0.7)
    narrative = narrative_of(0.9, 0.5, 0.6, 0.8, 0.7)
    report, profile = store.ingest_report(
        "src-a", ("e", "b"), evidence, narrative, now="t1"
    )
    assert report.content_score == evaluate_content(evidence, narrative)
    before_mean = sum(report.profile_before.values()) / 5
    assert report.combined_score == combined_credibility(
        report.content_score, before_mean
    )
    assert profile.report_count == 1
    # the profile snapshot predates this report's own update
    assert report.profile_before == {c: 0.5 for c in PROFILE_COORDINATES}


def test_ingest_updates_profile_with_mapped_signals():
    store = store_with_source()
    evidence = evidence_of(0.8, 0.6, 1.0, 0.4, 0.7)
    narrative = narrative_of(0.9, 0.5, 0.6, 0.8, 0.7)
    report, profile = store.ingest_report(
        "src-a", ("e", "b"), evidence, narrative, now="t1"
    )
    signals = report_signals(evidence, narrative, report.content_score)
    for name in PROFILE_COORDINATES:
        assert profile.coordinates[name] == pytest.approx(
            ewma_step(0.5, signals[name], 0.3), abs=1e-15
        )


def test_ingest_order_replay_matches_oracle():
    rng = random.Random(777)
    store = store_with_source()
    signal_seq = []
    for i in range(40):
        evidence = evidence_of(*[rng.random() for _ in range(5)])
        narrative = narrative_of(*[rng.random() for _ in range(5)])
        content = evaluate_content(evidence, narrative)
        signal_seq.append(report_signals(evidence, narrative, content))
        store.ingest_report("src-a", ("e", f"b{i}"), evidence, narrative, now=f"t{i}")
    oracle = ewma_replay({c: 0.5 for c in PROFILE_COORDINATES}, signal_seq, 0.3)
    profile = store.profile("src-a")
    for name in PROFILE_COORDINATES:
        assert abs(profile.coordinates[name] - oracle[name]) <= 1e-12


def test_badge_takes_max_over_citations():
    store = CredibilityStore()
    store.create_source("strong", "institution", source_id="src-strong", now="t")
    store.create_source("weak", "publication", source_id="src-weak", now="t")
    store.ingest_report("src-strong", ("e", "b"),
                        evidence_of(*[0.9] * 5), narrative_of(*[0.9] * 5), now="t")
    store.ingest_report("src-weak", ("e", "b"),
                        evidence_of(*[0.3] * 5), narrative_of(*[0.3] * 5), now="t")
    badge = store.credibility_badge("e", "b", ["src-strong", "src-weak"])
    expected = max(r.combined_score for r in store.reports())
    assert badge["combined_score"] == expected
    assert badge["source_id"] == "src-strong"
    # single citation: that report's score, even if lower
    low = store.credibility_badge("e", "b", ["src-weak"])
    assert low["source_id"] == "src-weak"
    assert low["combined_score"] < badge["combined_score"]


def test_badge_requires_a_report():
    store = store_with_source()
    with pytest.raises(NoReport):
        store.credibility_badge("e", "b", [])
    with pytest.raises(NoReport):
        store.credibility_badge("e", "b", ["src-a"])  # cited, but never evaluated


def test_badge_ignores_uncited_reports():
    store = CredibilityStore()
    store.create_source("cited", "institution", source_id="src-c", now="t")
    store.create_source("uncited", "institution", source_id="src-u", now="t")
    store.ingest_report("src-c", ("e", "b"),
                        evidence_of(*[0.4] * 5), narrative_of(*[0.4] * 5), now="t")
    store.ingest_report("src-u", ("e", "b"),
                        evidence_of(*[1.0] * 5), narrative_of(*[1.0] * 5), now="t")
    badge = store.credibility_badge("e", "b", ["src-c"])
    assert badge["source_id"] == "src-c"


def test_source_errors():
    store = store_with_source()
    with pytest.raises(UnknownSource):
        store.profile("missing")
    with pytest.raises(DuplicateId):
        store.create_source("again", "individual", source_id="src-a", now="t")


def test_validate_invariants_accepts_replayed_store():
    store = store_with_source()
    store.ingest_report("src-a", ("e", "b"),
                        evidence_of(*[0.6] * 5), narrative_of(*[0.7] * 5), now="t")
    store.validate_invariants()


def test_apply_report_rejects_foreign_source():
    from canvas.credibility import SourceProfile, apply_report
    from canvas.errors import SourceMismatch

    store = store_with_source("src-a")
    report, _ = store.ingest_report(
        "src-a", ("e", "b"), evidence_of(*[0.5] * 5), narrative_of(*[0.5] * 5), now="t"
    )
    other = SourceProfile.initial("src-b", "t")
    with pytest.raises(SourceMismatch):
        apply_report(other, report, 0.3, "t")
    # and the happy path matches the store's own smoothing
    fresh = SourceProfile.initial("src-a", "t")
    assert apply_report(fresh, report, 0.3, "t").coordinates == \
        store.profile("src-a").coordinates
