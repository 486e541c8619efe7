#pragma once

#include <optional>
#include <vector>

#include "sigmalab/catalog/model.hpp"
#include "sigmalab/catalog/oracle.hpp"
#include "sigmalab/logic/formula.hpp"

namespace sigmalab {

// Window large enough that every finite substructure of a separating the two
// ages already shows up in it; catalog ages are periodic past their finite
// parts.
inline std::size_t comparison_window(const CatalogStructure& a, const CatalogStructure& b) {
    return 2 * (a.scale() + b.scale()) + 24;
}

// Th_Σ1(A) ⊆ Th_Σ1(B), decided as inclusion of finite substructures.
inline bool sigma1_leq(const CatalogStructure& a, const CatalogStructure& b) {
    if (!(a.signature() == b.signature())) throw SignatureMismatch(a.to_string() + " vs " + b.to_string());
    if (auto c = a.cardinality()) return embeds_in_catalog(whole(a), b);
    return embeds_in_catalog(window(a, comparison_window(a, b)), b);
}

inline bool sigma1_equiv(const CatalogStructure& a, const CatalogStructure& b) {
    return sigma1_leq(a, b) && sigma1_leq(b, a);
}

// Finite named parts of a term: the whole structure when finite, else the
// finite pieces under tilde and du.
inline void finite_pieces(const CatalogStructure& a, std::vector<FiniteFragment>& out) {
    if (a.cardinality()) {
        out.push_back(whole(a));
        return;
    }
    if (a.shape() == Shape::Tilde || a.shape() == Shape::DisjointUnion)
        for (const auto& x : a.args()) finite_pieces(x, out);
}

// Finite F embedding in `a` but in none of `others`. Named finite pieces of
// `a` are tried first; otherwise the first separating window of `a` is shrunk
// by deleting elements. Returns nullopt when nothing separates within `bound`.
inline std::optional<FormulaWitness> find_witness(const CatalogStructure& a, const std::vector<CatalogStructure>& others,
                                                  std::size_t bound) {
    auto outside = [&](const FiniteFragment& f) {
        for (const auto& b : others)
            if (embeds_in_catalog(f, b)) return false;
        return true;
    };
    std::vector<FiniteFragment> pieces;
    finite_pieces(a, pieces);
    for (auto& p : pieces)
        if (p.size() >= 1 && p.size() <= bound && outside(p)) return FormulaWitness::embeds(std::move(p));

    std::size_t scale = a.scale();
    for (const auto& b : others) scale = std::max(scale, b.scale());
    std::size_t cap = 2 * (a.scale() + scale) + 32;
    if (auto c = a.cardinality()) cap = *c;

    std::optional<FiniteFragment> f;
    for (std::size_t n = 1; n <= cap; ++n) {
        auto w = window(a, n);
        if (outside(w)) {
            f = std::move(w);
            break;
        }
    }
    if (!f) return std::nullopt;
    // drop elements from the end while the fragment stays outside
    for (std::size_t i = f->size(); i-- > 0;) {
        if (f->size() == 1) break;
        std::vector<Element> keep;
        for (Element x = 0; x < f->size(); ++x)
            if (x != i) keep.push_back(x);
        auto g = f->induced(keep);
        if (outside(g)) f = std::move(g);
    }
    if (f->size() > bound) return std::nullopt;
    return FormulaWitness::embeds(*f);
}

}  // namespace sigmalab
