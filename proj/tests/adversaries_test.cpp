#include <gtest/gtest.h>

#include "sigmalab/adversaries/adversaries.hpp"
#include "sigmalab/learners/transforms.hpp"
#include "sigmalab/reductions/gammas.hpp"

using namespace sigmalab;
using CS = CatalogStructure;

namespace {

CS tl(std::size_t n) { return CS::tilde(CS::chain(n)); }
CS tp(std::size_t k) { return CS::tilde(CS::poset_p(k)); }
CS ci(std::size_t n) { return CS::du(CS::cycle(n), CS::iso_inf()); }
CS ri(std::size_t n) { return CS::du(CS::ray(n), CS::iso_inf()); }

Family rays(std::size_t top) {
    std::vector<CS> m;
    for (std::size_t n = 1; n <= top; ++n) m.push_back(ri(n));
    m.push_back(CS::du(CS::ray(), CS::iso_inf()));
    return make_family("rays", m, true);
}

Family posets(std::size_t top) {
    std::vector<CS> m;
    for (std::size_t k = 0; k <= top; ++k) m.push_back(tp(k));
    return make_family("posets", m, true);
}

Family fstar(std::size_t top) {
    std::vector<CS> m{CS::tilde(CS::omega()), CS::tilde(CS::omega_star())};
    for (std::size_t n = 2; n <= top; ++n) m.push_back(tl(n));
    return make_family("fstar", m, true);
}

Family cycles34() { return make_family("cycles34", {ci(3), ci(4)}); }

Escalation small() { return {256, 2048}; }

// Column 0 holds 1 exactly at the stages where the longest chain grew.
ReductionOperator height_gamma() {
    ReductionOperator g;
    g.name = "height_growth";
    g.target = Relation::E3;
    g.start = []() {
        return gamma_detail::make_run(OutputPrefix::make_columnar({{}}),
                                      [h = std::size_t(0)](const FiniteFragment& f, OutputPrefix& out) mutable {
                                          auto now = learner_detail::height(f);
                                          out.columns[0].push_back(now > h ? 1 : 0);
                                          h = now;
                                      });
    };
    return g;
}

// Replays the duel's fragment from the certificate's own presentation.
void expect_presentation_replays(const DuelResult& r) {
    auto p = r.presentation();
    EXPECT_TRUE(p.restrict(r.stages - 1) == r.fragment);
}

}  // namespace

TEST(Escalation, Checkpoints) {
    Escalation e{256, 2048};
    EXPECT_TRUE(e.checkpoint(256));
    EXPECT_TRUE(e.checkpoint(1024));
    EXPECT_TRUE(e.checkpoint(2048));
    EXPECT_FALSE(e.checkpoint(300));
    EXPECT_THROW((Escalation{0, 10}.validate()), ConfigurationError);
    EXPECT_THROW((Escalation{64, 32}.validate()), ConfigurationError);
}

TEST(DuelDriver, StageMustAddOneElement) {
    ScriptedLearner m({});
    DuelDriver d(Signature::graph(), &m, m.id(), "t", 0, small());
    EXPECT_THROW(d.stage([](StageBuilder&) {}), ConstructionError);
}

TEST(RaysAdversary, TruncationLeavesLearnerStuck) {
    auto fam = rays(8);
    ExMinEmbedLearner m(fam);
    auto r = adv_vs_ex_rays(m, fam, 0, small());
    ASSERT_TRUE(r.refuted()) << r.to_json().dump();
    EXPECT_EQ(r.certificate->kind, CertificateKind::StuckWrong);
    // the ray stops at length 9, one past the largest finite member
    EXPECT_EQ(r.certificate->details["truth"], ri(9).to_string());
    EXPECT_TRUE(r.certificate->details["truth_code"].is_null());
    EXPECT_EQ(r.certificate->details["expansionary_stages"].size(), 7u);
    EXPECT_EQ(r.audit_violations, 0u);
    expect_presentation_replays(r);
}

TEST(RaysAdversary, SilentLearnerIsStuck) {
    auto fam = rays(8);
    ScriptedLearner m({}, "silent");
    auto r = adv_vs_ex_rays(m, fam, 0, small());
    ASSERT_TRUE(r.refuted());
    EXPECT_EQ(r.certificate->kind, CertificateKind::StuckWrong);
    EXPECT_EQ(r.certificate->details["truth"], ri(2).to_string());
    EXPECT_EQ(r.stages, 256u);
}

TEST(RaysAdversary, EagerLearnerChangesMindForever) {
    auto fam = rays(300);
    // names the current ray length whenever it is a member
    FunctionLearner m("ray_counter", [&](const FiniteFragment& f, std::size_t) {
        auto c = fam.code_of(ri(std::max<std::size_t>(1, adversary_detail::path_length(f, 0))));
        return c ? Hypothesis::conjecture(*c) : kQuestion;
    });
    auto r = adv_vs_ex_rays(m, fam, 0, small());
    ASSERT_TRUE(r.refuted());
    EXPECT_EQ(r.certificate->kind, CertificateKind::InfinitelyManyMindChanges);
    EXPECT_EQ(*r.limit, CS::du(CS::ray(), CS::iso_inf()));
    expect_presentation_replays(r);
}

TEST(PosetAdversary, ExPosetAbandonsAndReturns) {
    auto fam = posets(24);
    ExPosetLearner m(fam);
    auto r = adv_vs_nus_poset(m, fam, 1, small());
    ASSERT_TRUE(r.refuted()) << r.to_json().dump();
    EXPECT_EQ(r.certificate->kind, CertificateKind::AbandonReturn);
    auto st = r.certificate->details["stages"];
    ASSERT_EQ(st.size(), 3u);
    EXPECT_LT(st[0].get<std::size_t>(), st[1].get<std::size_t>());
    EXPECT_LT(st[1].get<std::size_t>(), st[2].get<std::size_t>());
    const std::size_t c0 = poset_family_codes(fam).at(0);
    EXPECT_TRUE(r.transcript[st[0].get<std::size_t>()].is(c0));
    EXPECT_FALSE(r.transcript[st[1].get<std::size_t>()].is(c0));
    EXPECT_TRUE(r.transcript[st[2].get<std::size_t>()].is(c0));
    EXPECT_EQ(r.audit_violations, 0u);
    expect_presentation_replays(r);
}

TEST(PosetAdversary, DecisiveLearnerGetsStuck) {
    auto fam = posets(24);
    NusToDec m(std::make_unique<ExPosetLearner>(fam));
    auto r = adv_vs_nus_poset(m, fam, 1, small());
    ASSERT_TRUE(r.refuted()) << r.to_json().dump();
    EXPECT_EQ(r.certificate->kind, CertificateKind::StuckWrong);
    // Dec cannot come back to P̃_0 once it has left it
    const auto& d = r.certificate->details;
    EXPECT_EQ(d["phase"], 2);
    EXPECT_EQ(d["truth"], tp(0).to_string());
    EXPECT_NE(d["final"], d["truth_code"]);
    EXPECT_EQ(r.audit_violations, 0u);
}

TEST(PosetAdversary, TruncationIsInconclusive) {
    auto fam = posets(2);
    ExPosetLearner m(fam);
    auto r = adv_vs_nus_poset(m, fam, 0, small());
    EXPECT_FALSE(r.refuted());
    EXPECT_NE(r.reason.find("truncated"), std::string::npos);
}

TEST(CoAdversary, SwitchesWhenUpperCodeShows) {
    auto fam = make_family("tl34", {tl(3), tl(4)});
    // says 1 from stage 5 on, never 0
    FunctionLearner m("upper", [](const FiniteFragment&, std::size_t s) { return s >= 5 ? Hypothesis::conjecture(1) : kQuestion; });
    auto r = adv_vs_co_comparable(m, fam, 0, 1, 0, small());
    ASSERT_TRUE(r.refuted());
    EXPECT_EQ(r.certificate->kind, CertificateKind::CorrectCodeEmitted);
    EXPECT_EQ(r.certificate->details["code"], 1);
    EXPECT_EQ(*r.limit, tl(4));
    EXPECT_EQ(r.audit_violations, 0u);
    expect_presentation_replays(r);
}

TEST(CoAdversary, MissingUpperCodeAtCap) {
    auto fam = make_family("tl34", {tl(3), tl(4)});
    ScriptedLearner m({}, "silent");
    auto r = adv_vs_co_comparable(m, fam, 0, 1, 0, small());
    ASSERT_TRUE(r.refuted());
    EXPECT_EQ(r.certificate->kind, CertificateKind::MissingCode);
    EXPECT_EQ(r.stages, 2048u);
}

TEST(CoAdversary, RequiresStrictInclusion) {
    auto fam = make_family("tl34", {tl(3), tl(4)});
    ScriptedLearner m({});
    EXPECT_THROW(adv_vs_co_comparable(m, fam, 1, 0), ConfigurationError);
    EXPECT_THROW(adv_vs_co_comparable(m, cycles34(), 0, 1), ConfigurationError);
}

TEST(FinAdversary, EarlyCommitmentIsTrapped) {
    std::vector<CS> m;
    for (std::size_t n = 3; n <= 6; ++n) m.push_back(ci(n));
    m.push_back(CS::du(CS::ray(), CS::iso_inf()));
    auto fam = make_family("cycles_and_ray", m, true);
    const std::size_t ray = fam.size() - 1;
    // commits to the ray member as soon as it sees an edge
    FunctionLearner early("early", [ray](const FiniteFragment& f, std::size_t) {
        return f.atoms().empty() ? kQuestion : Hypothesis::conjecture(ray);
    });
    auto r = adv_vs_fin(early, fam, ray, {0, 1, 2, 3}, 0, small());
    ASSERT_TRUE(r.refuted()) << r.to_json().dump();
    EXPECT_EQ(r.certificate->kind, CertificateKind::StuckWrong);
    EXPECT_NE(r.certificate->details["truth"], fam[ray].to_string());
    EXPECT_EQ(r.audit_violations, 0u);
    expect_presentation_replays(r);
}

TEST(FinAdversary, RevisionIsSecondCommitment) {
    std::vector<CS> m{ci(3), ci(4), CS::du(CS::ray(), CS::iso_inf())};
    auto fam = make_family("c34r", m);
    // commits to the ray, then to whichever cycle shows up
    FunctionLearner fickle("fickle", [](const FiniteFragment& f, std::size_t) {
        if (f.atoms().empty()) return kQuestion;
        for (std::size_t n : {3, 4})
            if (find_embedding(whole(CS::cycle(n)), f))
                return Hypothesis::conjecture(n - 3);
        return Hypothesis::conjecture(2);
    });
    auto r = adv_vs_fin(fickle, fam, 2, {0, 1}, 0, small());
    ASSERT_TRUE(r.refuted());
    EXPECT_EQ(r.certificate->kind, CertificateKind::SecondCommitment);
}

TEST(FinAdversary, WrongCommitAndNeverCommit) {
    auto fam = cycles34();
    ScriptedLearner wrong(parse_script("?,?,1"), "wrong");
    auto r = adv_vs_fin(wrong, fam, 0, {1}, 0, small());
    ASSERT_TRUE(r.refuted());
    EXPECT_EQ(r.certificate->kind, CertificateKind::StuckWrong);
    ScriptedLearner silent({}, "silent");
    auto q = adv_vs_fin(silent, fam, 0, {1}, 0, small());
    ASSERT_TRUE(q.refuted());
    EXPECT_EQ(q.certificate->kind, CertificateKind::NeverCommits);
}

TEST(FinAdversary, CorrectFinLearnerIsNotRefuted) {
    auto fam = cycles34();
    auto m = FinLearner::from_classifier(fam);
    auto r = adv_vs_fin(m, fam, 0, {1}, 0, small());
    EXPECT_FALSE(r.refuted()) << r.to_json().dump();
    EXPECT_NE(r.reason.find("precondition"), std::string::npos);
}

TEST(TotalOperatorAdversary, RefutesTotalFinOperator) {
    auto fam = cycles34();
    auto c = classify_family(fam);
    std::vector<FormulaWitness> strong{*c.strong[0], *c.strong[1]};
    auto g = gamma_fin_to_eqnat_total(fam, strong);
    auto r = adv_vs_total_id_operator(g, fam, 0, small());
    ASSERT_TRUE(r.refuted()) << r.to_json().dump();
    EXPECT_EQ(r.certificate->kind, CertificateKind::PrefixDisagreement);
    const auto& d = r.certificate->details;
    EXPECT_NE(d["gamma_value"], d["reference_value"]);
    EXPECT_EQ(r.audit_violations, 0u);
    ASSERT_TRUE(r.limit.has_value());
    // independent check: Γ on the finished copy still differs from Γ on the reference
    const std::size_t k = d["position"];
    auto out = g.apply(r.fragment);
    OperatorTrace ref(g, present(*r.limit, 0));
    EXPECT_NE(out.flat.at(k), ref.at(r.stages - 1).flat.at(k));
    expect_presentation_replays(r);
}

TEST(TotalOperatorAdversary, RejectsPartialOperator) {
    auto fam = cycles34();
    auto g = gamma_fin_to_eqnat(fam, FinLearner::from_classifier(fam));
    EXPECT_THROW(adv_vs_total_id_operator(g, fam), ConfigurationError);
    EXPECT_THROW(adv_vs_total_id_operator(height_gamma(), fam), ConfigurationError);
}

TEST(E3Adversary, CollectsColumnZeroDisagreements) {
    auto fam = fstar(6);
    auto r = adv_vs_e3_operator_fstar(height_gamma(), fam, 0, {256, 2048});
    ASSERT_TRUE(r.refuted()) << r.to_json().dump();
    const auto& d = r.certificate->details["disagreements"];
    ASSERT_GE(d.size(), 10u);
    for (std::size_t i = 1; i < d.size(); ++i) EXPECT_LT(d[i - 1].get<std::size_t>(), d[i].get<std::size_t>());
    EXPECT_EQ(r.audit_violations, 0u);
    // recompute column 0 on both sides
    auto mine = height_gamma().apply(r.fragment);
    OperatorTrace ref(height_gamma(), present(*r.limit, 0));
    const auto& theirs = ref.at(r.stages - 1);
    for (const auto& k : d) EXPECT_NE(mine.columns[0].at(k), theirs.columns[0].at(k));
    expect_presentation_replays(r);
}

TEST(E3Adversary, RejectsOperatorsItCannotTarget) {
    auto fam = fstar(4);
    EXPECT_THROW(gamma_erange_to_e3(fam), ConfigurationError);
    EXPECT_THROW(adv_vs_e3_operator_fstar(gamma_erange(make_family("tl34", {tl(3), tl(4)})), fam), ConfigurationError);
}

TEST(Duel, DeterministicPerSeed) {
    auto fam = posets(24);
    ExPosetLearner a(fam), b(fam);
    auto x = adv_vs_nus_poset(a, fam, 5, small());
    auto y = adv_vs_nus_poset(b, fam, 5, small());
    ASSERT_TRUE(x.refuted());
    EXPECT_EQ(x.certificate->dump(), y.certificate->dump());
    EXPECT_TRUE(x.fragment == y.fragment);
}
