#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "sigmalab/catalog/model.hpp"
#include "sigmalab/core/embedding.hpp"

namespace sigmalab {

// Decides F ↪ A for a finite F and a catalog structure A, per atom.

namespace oracle_detail {

// Reflexive, antisymmetric, transitive.
inline bool is_partial_order(const FiniteFragment& f) {
    const auto n = static_cast<Element>(f.size());
    for (Element a = 0; a < n; ++a) {
        if (!f.holds2(0, a, a)) return false;
        for (auto b : f.out(0, a)) {
            if (b != a && f.holds2(0, b, a)) return false;
            for (auto c : f.out(0, b))
                if (!f.holds2(0, a, c)) return false;
        }
    }
    return true;
}

inline bool is_linear_order(const FiniteFragment& f) {
    const auto n = f.size();
    // in a linear order the down-set sizes are exactly 1..n
    std::vector<std::size_t> rank(n);
    std::vector<bool> seen(n + 1, false);
    for (Element a = 0; a < n; ++a) {
        if (!f.holds2(0, a, a)) return false;
        rank[a] = f.in(0, a).size();
        if (rank[a] == 0 || rank[a] > n || seen[rank[a]]) return false;
        seen[rank[a]] = true;
    }
    for (Element a = 0; a < n; ++a) {
        if (f.out(0, a).size() != n + 1 - rank[a]) return false;
        for (auto b : f.out(0, a))
            if (rank[b] < rank[a]) return false;
    }
    return true;
}

// Non-isolated part of an order fragment.
inline FiniteFragment order_core(const FiniteFragment& f) {
    std::vector<Element> keep;
    for (Element a = 0; a < f.size(); ++a)
        if (!f.isolated(a)) keep.push_back(a);
    return f.induced(keep);
}

// F ↪ P_0 iff F is a partial order whose non-maximal elements form a chain
// and every maximal element's strict down-set is an initial segment of it.
inline bool embeds_in_p0(const FiniteFragment& f) {
    if (!is_partial_order(f)) return false;
    const auto n = static_cast<Element>(f.size());
    std::vector<Element> lower;
    std::vector<bool> maximal(n);
    for (Element a = 0; a < n; ++a) {
        maximal[a] = f.out(0, a).size() == 1;
        if (!maximal[a]) lower.push_back(a);
    }
    // chain check on the non-maximal part; rank = strict down-set inside it
    std::vector<std::size_t> rank(n, 0);
    for (auto a : lower) {
        for (auto b : lower)
            if (a != b && !f.holds2(0, a, b) && !f.holds2(0, b, a)) return false;
        for (auto b : f.in(0, a))
            if (b != a) ++rank[a];
    }
    for (Element m = 0; m < n; ++m) {
        if (!maximal[m]) continue;
        std::size_t below = f.in(0, m).size() - 1;
        // down-set must be the `below` lowest chain elements
        for (auto b : f.in(0, m)) {
            if (b == m) continue;
            if (maximal[b]) return false;
            if (rank[b] >= below) return false;
        }
    }
    return true;
}

inline bool embeds_in_order(const FiniteFragment& f, const CatalogStructure& a) {
    switch (a.shape()) {
        case Shape::Omega:
        case Shape::OmegaStar:
        case Shape::Zeta: return is_linear_order(f);
        case Shape::Chain: return f.size() <= a.param() && is_linear_order(f);
        case Shape::PosetP:
            if (a.param() == 0) return embeds_in_p0(f);
            if (f.size() > 2 * a.param() + 2) return false;
            return embed_finite(f, whole(a));
        case Shape::Tilde: {
            if (!is_partial_order(f)) return false;
            return embeds_in_order(order_core(f), a.arg());
        }
        default: break;
    }
    throw UnsupportedOracle("no order oracle for " + a.to_string());
}

struct GraphPieces {
    std::vector<std::size_t> paths;   // vertex counts
    std::vector<std::size_t> cycles;  // cycle sizes
    bool valid = true;
};

inline GraphPieces graph_pieces(const FiniteFragment& f) {
    GraphPieces res;
    const auto n = static_cast<Element>(f.size());
    for (Element a = 0; a < n; ++a) {
        if (f.holds2(0, a, a)) {
            res.valid = false;
            return res;
        }
        for (auto b : f.out(0, a))
            if (!f.holds2(0, b, a)) {
                res.valid = false;
                return res;
            }
        if (f.out(0, a).size() > 2) {
            res.valid = false;
            return res;
        }
    }
    std::vector<bool> seen(n, false);
    for (Element a = 0; a < n; ++a) {
        if (seen[a]) continue;
        std::size_t verts = 0, degsum = 0;
        std::vector<Element> stack{a};
        seen[a] = true;
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            ++verts;
            degsum += f.out(0, v).size();
            for (auto w : f.out(0, v))
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        std::size_t edges = degsum / 2;
        if (edges + 1 == verts) res.paths.push_back(verts);
        else if (edges == verts && verts >= 3) res.cycles.push_back(verts);
        else {
            res.valid = false;
            return res;
        }
    }
    return res;
}

struct GraphInventory {
    bool ray = false;
    bool iso_inf = false;
    std::size_t complements = 0;                 // count of cyc_comp atoms
    std::vector<std::size_t> complement_skips;   // their parameters
    std::vector<std::size_t> finite_rays;        // R_n
    std::vector<std::size_t> cycles;             // C_n
    std::size_t singletons = 0;
};

inline void collect(const CatalogStructure& s, GraphInventory& inv) {
    switch (s.shape()) {
        case Shape::Ray: inv.ray = true; break;
        case Shape::FiniteRay: inv.finite_rays.push_back(s.param()); break;
        case Shape::Cycle: inv.cycles.push_back(s.param()); break;
        case Shape::IsolatedInfinite: inv.iso_inf = true; break;
        case Shape::IsolatedFinite: inv.singletons += s.param(); break;
        case Shape::CycleComplement:
            ++inv.complements;
            inv.complement_skips.push_back(s.param());
            break;
        case Shape::DisjointUnion:
            collect(s.arg(0), inv);
            collect(s.arg(1), inv);
            break;
        default: throw UnsupportedOracle("no graph oracle for " + s.to_string());
    }
}

// Items of cost (path size + 1) into bins; a path of a vertices needs a+1
// units of a cycle C_m (capacity m), of a finite ray R_n (capacity n+1), or of
// a lone vertex (capacity 2).
inline bool pack(std::vector<std::size_t> big, std::size_t singles, std::vector<std::size_t> bins) {
    std::sort(big.rbegin(), big.rend());
    std::size_t total_cost = singles * 2;
    for (auto a : big) total_cost += a + 1;
    std::size_t cap = 0;
    for (auto b : bins) cap += b;
    if (total_cost > cap) return false;

    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (i == big.size()) {
            std::size_t room = 0;
            for (auto b : bins) room += b / 2;
            return room >= singles;
        }
        for (std::size_t j = 0; j < bins.size(); ++j) {
            if (bins[j] < big[i] + 1) continue;
            bool dup = false;
            for (std::size_t k = 0; k < j; ++k)
                if (bins[k] == bins[j]) dup = true;
            if (dup) continue;
            bins[j] -= big[i] + 1;
            if (go(i + 1)) return true;
            bins[j] += big[i] + 1;
        }
        return false;
    };
    return go(0);
}

inline bool embeds_in_graph(const FiniteFragment& f, const CatalogStructure& a) {
    GraphInventory inv;
    collect(a, inv);
    auto pieces = graph_pieces(f);
    if (!pieces.valid) return false;

    std::map<std::size_t, std::size_t> need;
    for (auto c : pieces.cycles) ++need[c];
    std::vector<std::size_t> free_cycles = inv.cycles;
    for (auto [m, count] : need) {
        std::size_t from_comp = 0;
        for (auto skip : inv.complement_skips)
            if (skip != m) ++from_comp;
        std::size_t rest = count > from_comp ? count - from_comp : 0;
        for (std::size_t k = 0; k < rest; ++k) {
            auto it = std::find(free_cycles.begin(), free_cycles.end(), m);
            if (it == free_cycles.end()) return false;
            free_cycles.erase(it);
        }
    }

    if (inv.ray || inv.complements > 0) return true;

    std::vector<std::size_t> big;
    std::size_t singles = 0;
    for (auto p : pieces.paths) {
        if (p == 1) ++singles;
        else big.push_back(p);
    }
    if (inv.iso_inf) singles = 0;
    std::vector<std::size_t> bins;
    for (auto n : inv.finite_rays) bins.push_back(n + 1);
    for (auto m : free_cycles) bins.push_back(m);
    for (std::size_t k = 0; k < inv.singletons; ++k) bins.push_back(2);
    return pack(std::move(big), singles, std::move(bins));
}

}  // namespace oracle_detail

inline bool embeds_in_catalog(const FiniteFragment& f, const CatalogStructure& a) {
    if (!(f.signature() == a.signature())) {
        throw SignatureMismatch("fragment signature does not match " + a.to_string());
    }
    if (f.empty()) return true;
    if (auto c = a.cardinality(); c && f.size() > *c) return false;
    if (a.kind() == Kind::Order) return oracle_detail::embeds_in_order(f, a);
    return oracle_detail::embeds_in_graph(f, a);
}

}  // namespace sigmalab
