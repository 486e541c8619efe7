#include <gtest/gtest.h>

#include "sigmalab/catalog/presentation.hpp"
#include "sigmalab/reductions/gammas.hpp"
#include "sigmalab/reductions/verify.hpp"

using namespace sigmalab;
using CS = CatalogStructure;

namespace {

CS tl(std::size_t n) { return CS::tilde(CS::chain(n)); }
CS ci(std::size_t n) { return CS::du(CS::cycle(n), CS::iso_inf()); }

Family cycles34() { return make_family("cycles34", {ci(3), ci(4)}); }
Family tl34() { return make_family("tl34", {tl(3), tl(4)}); }

OutputPrefix flat(std::vector<std::uint64_t> v) { return OutputPrefix::make_flat(std::move(v)); }

OutputPrefix trace(const ReductionOperator& g, const CS& target, std::uint64_t seed, std::size_t stages) {
    OperatorTrace t(g, present(target, seed));
    return t.at(stages - 1);
}

}  // namespace

TEST(CheckPrefix, IdRules) {
    EXPECT_EQ(check_prefix(Relation::Id, flat({0, 1, 1}), flat({0, 1, 1})).kind, PrefixVerdict::Kind::ConsistentSoFar);
    auto v = check_prefix(Relation::Id, flat({0, 1, 0}), flat({0, 1, 1}));
    EXPECT_TRUE(v.distinct());
    EXPECT_EQ(v.position, 2u);
    // different lengths compare on the common part
    EXPECT_FALSE(check_prefix(Relation::Id, flat({0, 1}), flat({0, 1, 7})).distinct());
}

TEST(CheckPrefix, EqNatUsesFirstEntry) {
    EXPECT_EQ(check_prefix(Relation::EqN, flat({}), flat({2})).kind, PrefixVerdict::Kind::ConsistentSoFar);
    EXPECT_EQ(check_prefix(Relation::EqN, flat({2, 2}), flat({2})).kind, PrefixVerdict::Kind::EquivalentByRule);
    EXPECT_TRUE(check_prefix(Relation::EqN, flat({1}), flat({2})).distinct());
}

TEST(CheckPrefix, LimitRelationsNeverDistinctAtFiniteStage) {
    auto v = check_prefix(Relation::E0, flat({1, 2, 3, 4}), flat({0, 2, 0, 4}));
    EXPECT_EQ(v.kind, PrefixVerdict::Kind::ConsistentSoFar);
    EXPECT_EQ(v.evidence["mismatches"], 2);
    EXPECT_EQ(v.evidence["agreeing_suffix"], 1);
    auto a = OutputPrefix::make_columnar({{0, 0, 1}, {1}});
    auto b = OutputPrefix::make_columnar({{0, 1, 1}, {1}});
    auto w = check_prefix(Relation::E3, a, b);
    EXPECT_EQ(w.kind, PrefixVerdict::Kind::ConsistentSoFar);
    EXPECT_EQ(w.evidence["disagreeing_columns"].size(), 1u);
}

TEST(CheckPrefix, RangeDeltaThenClosedRange) {
    auto a = flat({0, 5, 0});
    auto b = flat({0, 0});
    auto v = check_prefix(Relation::Erange, a, b);
    EXPECT_EQ(v.kind, PrefixVerdict::Kind::ConsistentSoFar);
    EXPECT_EQ(v.evidence["only_left"], nlohmann::json::array({5}));
    EXPECT_TRUE(v.evidence["only_right"].empty());
    auto w = check_prefix(Relation::Erange, a, b, std::nullopt, std::set<std::uint64_t>{0});
    EXPECT_TRUE(w.distinct());
    EXPECT_EQ(w.position, 1u);
}

TEST(CheckPrefix, ShapeMismatchThrows) {
    EXPECT_THROW(check_prefix(Relation::Id, flat({0}), OutputPrefix::make_columnar({{0}})), ConfigurationError);
    EXPECT_THROW(check_prefix(Relation::E3, flat({0}), flat({0})), ConfigurationError);
}

TEST(OutputPrefix, ColumnwisePrefixOrder) {
    auto a = OutputPrefix::make_columnar({{0}, {1, 1}});
    auto b = OutputPrefix::make_columnar({{0, 1}, {1, 1, 0}});
    EXPECT_TRUE(a.is_prefix_of(b));
    EXPECT_FALSE(b.is_prefix_of(a));
    EXPECT_TRUE(flat({3, 4}).is_prefix_of(flat({3, 4, 5})));
    EXPECT_FALSE(flat({3, 5}).is_prefix_of(flat({3, 4, 5})));
}

TEST(GammaFin, MapsMembersToTheirCodes) {
    auto fam = cycles34();
    auto g = gamma_fin_to_eqnat(fam, FinLearner::from_classifier(fam));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto out = trace(g, fam[i], seed, 150);
            ASSERT_FALSE(out.flat.empty());
            for (auto v : out.flat) EXPECT_EQ(v, i);
        }
}

TEST(GammaFin, EmptyBeforeTriggerAndMonotone) {
    auto fam = cycles34();
    auto g = gamma_fin_to_eqnat(fam, FinLearner::from_classifier(fam));
    OperatorTrace t(g, present(fam[1], 3));
    EXPECT_TRUE(t.at(0).flat.empty());
    OutputPrefix prev = t.current();
    for (std::size_t s = 1; s < 100; ++s) {
        const auto& cur = t.at(s);
        EXPECT_TRUE(prev.is_prefix_of(cur));
        prev = cur;
    }
}

TEST(GammaFin, SameMemberPairsAgree) {
    auto fam = cycles34();
    auto g = gamma_fin_to_eqnat(fam, FinLearner::from_classifier(fam));
    auto rep = verify_reduction(g, fam, 150, {0, 1, 2});
    EXPECT_TRUE(rep.pass) << rep.to_json().dump();
    EXPECT_EQ(rep.same_member_pairs, 6u);
    EXPECT_EQ(rep.same_member_failures, 0u);
}

TEST(GammaErange, RangesOnPaddedChains) {
    auto fam = tl34();
    auto g = gamma_erange(fam);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        EXPECT_EQ(trace(g, tl(3), seed, 100).range(), (std::set<std::uint64_t>{0}));
        EXPECT_EQ(trace(g, tl(4), seed, 100).range(), (std::set<std::uint64_t>{0, pair(1, 0)}));
    }
    EXPECT_EQ(pair(1, 0), 1u);
    EXPECT_EQ(g.declared_range(0), (std::set<std::uint64_t>{0}));
    EXPECT_EQ(g.declared_range(1), (std::set<std::uint64_t>{0, 1}));
}

TEST(GammaErange, PositionLayout) {
    auto fam = tl34();
    auto g = gamma_erange(fam);
    OperatorTrace t(g, present(tl(4), 2));
    for (std::size_t s = 0; s < 30; ++s) {
        const auto& out = t.at(s);
        ASSERT_EQ(out.flat.size(), pair(s + 1, 0));
        EXPECT_EQ(out.flat[0], 0u);
        // every position <s', i, j> below the bound was written at stage s'
        for (std::uint64_t z = 0; z < out.flat.size(); ++z) {
            auto [st, ij] = unpair(z);
            EXPECT_LE(st, s);
            EXPECT_TRUE(out.flat[z] == 0 || out.flat[z] == ij);
        }
    }
}

TEST(GammaErange, RejectsIncomparableOrder) { EXPECT_THROW(gamma_erange(make_family("w", {CS::omega(), CS::omega_star()})), ConfigurationError); }

TEST(GammaErange, VerifiedAtHorizon) {
    auto fam = tl34();
    auto rep = verify_reduction(gamma_erange(fam), fam, 100, {0, 1, 2});
    EXPECT_TRUE(rep.pass) << rep.to_json().dump();
    EXPECT_EQ(rep.cross_unseparated, 0u);
    EXPECT_EQ(rep.range_violations, 0u);
    EXPECT_EQ(rep.monotonicity_violations, 0u);
}

TEST(GammaErangeToE3, ColumnsFlipOnce) {
    auto fam = tl34();
    auto g = gamma_erange_to_e3(fam);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto hi = trace(g, tl(4), seed, 100);
        auto lo = trace(g, tl(3), seed, 100);
        const std::size_t c10 = pair(1, 0);
        ASSERT_EQ(hi.columns.size(), pair(1, 1) + 1);
        EXPECT_EQ(hi.columns[c10].back(), 1u);
        for (auto v : lo.columns[c10]) EXPECT_EQ(v, 0u);
        for (std::size_t i = 0; i < 2; ++i)
            for (auto v : hi.columns[pair(i, i)]) EXPECT_EQ(v, 0u);
        for (const auto& col : hi.columns)
            for (std::size_t k = 1; k < col.size(); ++k) EXPECT_LE(col[k - 1], col[k]);
    }
}

TEST(GammaErangeToE3, VerifiedAtHorizon) {
    auto fam = tl34();
    auto rep = verify_reduction(gamma_erange_to_e3(fam), fam, 100, {0, 1});
    EXPECT_TRUE(rep.pass) << rep.to_json().dump();
}

TEST(Unary, KnownCodes) {
    EXPECT_EQ(unary_string({0}), "1");
    EXPECT_EQ(unary_string({2, 1}), "00101");
    EXPECT_EQ(unary_string({}), "");
}

TEST(Unary, InjectiveAndRoundTrips) {
    std::set<std::vector<std::uint64_t>> images;
    std::size_t count = 0;
    std::function<void(std::vector<std::uint64_t>&)> go = [&](std::vector<std::uint64_t>& p) {
        auto e = unary_encode(p);
        EXPECT_EQ(unary_decode(e), p);
        images.insert(e);
        ++count;
        if (p.size() == 4) return;
        for (std::uint64_t v = 0; v <= 3; ++v) {
            p.push_back(v);
            auto before = unary_encode(p);
            // prefix-monotone: extending p extends its code
            auto shorter = unary_encode(std::vector<std::uint64_t>(p.begin(), p.end() - 1));
            EXPECT_TRUE(std::equal(shorter.begin(), shorter.end(), before.begin()));
            go(p);
            p.pop_back();
        }
    };
    std::vector<std::uint64_t> p;
    go(p);
    EXPECT_EQ(images.size(), count);
    EXPECT_THROW(unary_decode({0, 2}), ParseError);
}

TEST(Verify, EmptyFamilyPassesVacuously) {
    auto fam = make_family("empty", {});
    auto rep = verify_reduction(gamma_erange(tl34()), fam, 10, {0});
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.cross_pairs + rep.same_member_pairs, 0u);
}

TEST(Csv, ColumnarDump) {
    auto p = OutputPrefix::make_columnar({{0, 1}, {1}});
    EXPECT_EQ(to_csv(p), "position,col0,col1\n0,0,1\n1,1,\n");
}
