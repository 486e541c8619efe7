#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sigmalab/catalog/family.hpp"

namespace sigmalab {

// Σ2 comparability is not computed. These are facts recorded by hand about
// specific catalog pairs; lookups never derive anything new from them.
struct Sigma2Fact {
    std::string description;
    std::function<bool(const CatalogStructure&, const CatalogStructure&)> covers;  // unordered pair test
    bool comparable = false;
};

inline bool in_fstar(const CatalogStructure& s) {
    if (s.shape() != Shape::Tilde) return false;
    const auto& x = s.arg();
    return x.shape() == Shape::Omega || x.shape() == Shape::OmegaStar ||
           (x.shape() == Shape::Chain && x.param() >= 2);
}

inline const std::vector<Sigma2Fact>& declared_sigma2_facts() {
    static const std::vector<Sigma2Fact> facts = [] {
        auto pair_of = [](CatalogStructure a, CatalogStructure b) {
            return [a, b](const CatalogStructure& x, const CatalogStructure& y) {
                return (x == a && y == b) || (x == b && y == a);
            };
        };
        std::vector<Sigma2Fact> v;
        v.push_back({"omega and zeta are Σ2-comparable, so {omega, zeta} is not PL-learnable",
                     pair_of(CatalogStructure::omega(), CatalogStructure::zeta()), true});
        v.push_back({"omega and omega_star are Σ2-incomparable; the pair is Ex-learnable",
                     pair_of(CatalogStructure::omega(), CatalogStructure::omega_star()), false});
        v.push_back({"distinct members of F* = {tilde(omega), tilde(omega_star)} + {tilde(chain(n)) : n >= 2} are "
                     "Σ2-incomparable",
                     [](const CatalogStructure& x, const CatalogStructure& y) { return !(x == y) && in_fstar(x) && in_fstar(y); },
                     false});
        return v;
    }();
    return facts;
}

inline const Sigma2Fact* find_sigma2_fact(const CatalogStructure& a, const CatalogStructure& b) {
    for (const auto& f : declared_sigma2_facts())
        if (f.covers(a, b)) return &f;
    return nullptr;
}

// true / false when every pair is covered by a declared fact, nullopt otherwise.
inline std::optional<bool> declared_sigma2_antichain(const Family& fam) {
    bool all_known = true;
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = i + 1; j < fam.size(); ++j) {
            const auto* f = find_sigma2_fact(fam[i], fam[j]);
            if (!f) all_known = false;
            else if (f->comparable) return false;
        }
    if (!all_known) return std::nullopt;
    return true;
}

}  // namespace sigmalab
