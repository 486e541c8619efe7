#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sigmalab/core/codec.hpp"
#include "sigmalab/core/embedding.hpp"

using namespace sigmalab;

namespace {

Signature mixed() { return Signature({{"P", 1}, {"R", 2}, {"T", 3}}); }

}  // namespace

TEST(Signature, RejectsDuplicatesAndZeroArity) {
    EXPECT_THROW(Signature({{"R", 2}, {"R", 1}}), MalformedFormula);
    EXPECT_THROW(Signature({{"R", 0}}), MalformedFormula);
}

TEST(Signature, JsonRoundTrip) {
    auto sig = mixed();
    EXPECT_EQ(Signature::from_json(sig.to_json()), sig);
    EXPECT_EQ(sig.to_json().dump(), R"([{"arity":1,"name":"P"},{"arity":2,"name":"R"},{"arity":3,"name":"T"}])");
}

TEST(GodelIndex, FirstSentenceIsUnaryAtZero) {
    Signature sig({{"U", 1}, {"R", 2}});
    EXPECT_EQ(godel_index(sig, 0, {0}), 0u);
}

TEST(GodelIndex, ArityMismatchIsMalformed) {
    Signature sig({{"U", 1}, {"R", 2}});
    EXPECT_THROW(godel_index(sig, 1, {0}), MalformedFormula);
    EXPECT_THROW(godel_index(sig, 2, {0}), MalformedFormula);
}

TEST(GodelIndex, DecodeInvertsEncodeBelow1000) {
    for (const auto& sig : {mixed(), Signature::graph(), Signature({{"U", 1}}), Signature({{"T", 3}, {"U", 1}})}) {
        for (std::uint64_t x = 0; x < 1000; ++x) {
            auto atom = godel_decode(sig, x);
            ASSERT_EQ(godel_index(sig, atom.rel, atom.args), x) << sig.to_json().dump() << " x=" << x;
        }
    }
}

TEST(GodelIndex, MatchesReferenceOrder) {
    for (const auto& sig : {mixed(), Signature::graph(), Signature({{"T", 3}, {"U", 1}})}) {
        auto ref = oracles::reference_sentence_order(sig, 5);
        for (std::size_t i = 0; i < ref.size(); ++i) {
            ASSERT_EQ(godel_index(sig, ref[i].rel, ref[i].args), i);
        }
        EXPECT_EQ(sentences_below(sig, 5), ref.size());
    }
}

TEST(Codec, PrefixLengthCountsDecidedAtoms) {
    auto sig = mixed();
    for (std::size_t n = 0; n < 6; ++n) {
        FiniteFragment f(sig, n);
        EXPECT_EQ(encode_fragment(f).size(), n + n * n + n * n * n);
    }
}

TEST(Codec, EmptyAndRelationFreeFragments) {
    EXPECT_EQ(encode_fragment(FiniteFragment(Signature::graph(), 0)).to_string(), "");
    EXPECT_EQ(encode_fragment(FiniteFragment(Signature::graph(), 3)).to_string(), std::string(9, '0'));
}

TEST(Codec, KnownSmallEncoding) {
    // edge 0-1 in the graph signature: sentences E(0,0) E(0,1) E(1,0) E(1,1)
    auto f = oracles::path(2);
    EXPECT_EQ(encode_fragment(f).to_string(), "0110");
}

TEST(Codec, RaggedPrefixIsPartialDiagram) {
    EXPECT_THROW(decode_fragment(DiagramPrefix::from_string("01"), Signature::graph()), PartialDiagram);
    EXPECT_NO_THROW(decode_fragment(DiagramPrefix::from_string("0110"), Signature::graph()));
}

TEST(Codec, ExhaustiveRoundTripUpToFour) {
    const auto& sig = Signature::graph();
    for (std::size_t n = 0; n <= 4; ++n) {
        const auto len = sentences_below(sig, n);
        for (std::uint64_t mask = 0; mask < (1ull << len); ++mask) {
            std::vector<bool> bits(len);
            for (std::size_t i = 0; i < len; ++i) bits[i] = (mask >> i) & 1;
            DiagramPrefix p(bits);
            auto f = decode_fragment(p, sig);
            ASSERT_EQ(f.size(), n);
            ASSERT_EQ(encode_fragment(f), p);
        }
    }
}

TEST(Codec, RandomRoundTrip) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        auto f = oracles::random_fragment(mixed(), rng() % 8, rng);
        auto g = decode_fragment(encode_fragment(f), mixed());
        ASSERT_EQ(f, g);
    }
}

TEST(Fragment, ExtensionOrder) {
    auto p3 = oracles::path(3);
    EXPECT_TRUE(p3.restrict(2).is_extended_by(p3));
    EXPECT_TRUE(p3.is_extended_by(p3));
    EXPECT_FALSE(p3.is_extended_by(p3.restrict(2)));
    EXPECT_FALSE(oracles::cycle(3).restrict(2).is_extended_by(oracles::graph_from_edges(3, {})));
}

TEST(Embedding, KnownCases) {
    EXPECT_TRUE(embed_finite(oracles::linear(2), oracles::linear(3)));
    EXPECT_FALSE(embed_finite(oracles::cycle(3), oracles::cycle(4)));
    EXPECT_TRUE(embed_finite(oracles::path(2), oracles::cycle(3)));
    EXPECT_FALSE(embed_finite(oracles::path(3), oracles::cycle(3)));
    EXPECT_TRUE(embed_finite(oracles::path(3), oracles::cycle(4)));
}

TEST(Embedding, SignatureMismatchThrows) {
    EXPECT_THROW(embed_finite(oracles::linear(2), oracles::path(2)), SignatureMismatch);
}

TEST(Embedding, Reflexive) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto f = oracles::random_fragment(mixed(), rng() % 7, rng, 0.4);
        ASSERT_TRUE(embed_finite(f, f));
    }
}

TEST(Embedding, TransitiveOnSampledTriples) {
    std::mt19937_64 rng(13);
    int chains = 0;
    for (int i = 0; i < 3000 && chains < 50; ++i) {
        auto c = oracles::random_fragment(Signature::graph(), 5, rng, 0.3);
        // sample b, a as induced substructures so that chains actually occur
        std::vector<Element> sb, sa;
        for (Element x = 0; x < 5; ++x)
            if (rng() % 3) sb.push_back(x);
        auto b = c.induced(sb);
        for (Element x = 0; x < b.size(); ++x)
            if (rng() % 2) sa.push_back(x);
        auto a = b.induced(sa);
        auto other = oracles::random_fragment(Signature::graph(), 4, rng, 0.5);
        ASSERT_TRUE(embed_finite(a, b));
        ASSERT_TRUE(embed_finite(b, c));
        ASSERT_TRUE(embed_finite(a, c));
        if (embed_finite(other, b)) ASSERT_TRUE(embed_finite(other, c));
        ++chains;
    }
    EXPECT_EQ(chains, 50);
}

TEST(Embedding, AgreesWithBruteForce) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 600; ++i) {
        auto sig = (i % 3 == 0) ? mixed() : Signature::graph();
        auto f = oracles::random_fragment(sig, rng() % 5, rng, 0.35);
        auto g = oracles::random_fragment(sig, rng() % 7, rng, 0.35);
        ASSERT_EQ(embed_finite(f, g), oracles::brute_embeds(f, g)) << i;
        if (auto h = find_embedding(f, g)) {
            for (const auto& a : f.atoms()) {
                Tuple t;
                for (auto x : a.args) t.push_back((*h)[x]);
                ASSERT_TRUE(g.holds(a.rel, t));
            }
        }
    }
}
