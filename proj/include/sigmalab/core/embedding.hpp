#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <climits>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "sigmalab/core/fragment.hpp"

namespace sigmalab {

// Injective map preserving and reflecting every relation.
using Embedding = std::vector<Element>;

namespace detail {

class EmbeddingSearch {
public:
    EmbeddingSearch(const FiniteFragment& f, const FiniteFragment& g) : f_(f), g_(g) {
        for (std::size_t r = 0; r < f.signature().size(); ++r) {
            auto a = f.signature()[r].arity;
            if (a == 1) unary_.push_back(r);
            else if (a == 2) binary_.push_back(r);
            else higher_.push_back(r);
        }
    }

    std::optional<Embedding> run() {
        const std::size_t n = f_.size();
        if (n > g_.size()) return std::nullopt;
        if (!pair_types_fit()) return std::nullopt;
        map_.assign(n, kUnset);
        inverse_.assign(g_.size(), kUnset);
        if (n == 0) return map_;
        words_ = (g_.size() + 63) / 64;
        if (n * n * words_ <= kMaxTrailWords && binary_.size() <= 32) {
            if (!init_domains() || !assign_next(0)) return std::nullopt;
            return map_;
        }
        order_vertices();
        if (!place(0)) return std::nullopt;
        return map_;
    }

private:
    static constexpr Element kUnset = static_cast<Element>(-1);
    static constexpr std::size_t kMaxTrailWords = std::size_t{1} << 23;
    static constexpr std::size_t kScoreBudget = std::size_t{1} << 18;

    // Forward-checking search over bitset domains, most constrained vertex
    // first. Used unless the undo trail could get too large.
    std::uint64_t* row(Element u) { return domains_.data() + std::size_t{u} * words_; }

    bool init_domains() {
        const std::size_t n = f_.size();
        domains_.assign(n * words_, 0);
        count_.assign(n, 0);
        for (Element u = 0; u < n; ++u) {
            for (Element x = 0; x < g_.size(); ++x)
                if (locally_fits(u, x)) {
                    row(u)[x / 64] |= std::uint64_t{1} << (x % 64);
                    ++count_[u];
                }
            if (count_[u] == 0) return false;
        }
        return true;
    }

    bool locally_fits(Element v, Element w) const {
        for (auto r : unary_)
            if (f_.holds1(r, v) != g_.holds1(r, w)) return false;
        for (auto r : binary_) {
            if (f_.out(r, v).size() > g_.out(r, w).size() || f_.in(r, v).size() > g_.in(r, w).size()) return false;
            if (f_.holds2(r, v, v) != g_.holds2(r, w, w)) return false;
        }
        return true;
    }

    // Candidates x whose pattern towards w equals `type`.
    const std::vector<std::uint64_t>& pattern_mask(std::uint64_t type, Element w) {
        auto it = masks_.find(type);
        if (it != masks_.end()) return it->second;
        std::vector<std::uint64_t> mask(words_, 0);
        auto set = [&](Element x) { mask[x / 64] |= std::uint64_t{1} << (x % 64); };
        if (type == 0) {
            std::fill(mask.begin(), mask.end(), ~std::uint64_t{0});
            if (g_.size() % 64) mask.back() = (std::uint64_t{1} << (g_.size() % 64)) - 1;
            for (auto r : binary_) {
                for (auto x : g_.out(r, w)) mask[x / 64] &= ~(std::uint64_t{1} << (x % 64));
                for (auto x : g_.in(r, w)) mask[x / 64] &= ~(std::uint64_t{1} << (x % 64));
            }
        } else {
            for (auto r : binary_) {
                for (auto x : g_.out(r, w))
                    if (x != w && pair_type(g_, x, w) == type) set(x);
                for (auto x : g_.in(r, w))
                    if (x != w && pair_type(g_, x, w) == type) set(x);
            }
        }
        mask[w / 64] &= ~(std::uint64_t{1} << (w % 64));
        return masks_.emplace(type, std::move(mask)).first->second;
    }

    bool assign_next(std::size_t placed) {
        const std::size_t n = f_.size();
        if (placed == n) return true;
        Element v = kUnset;
        for (Element u = 0; u < n; ++u) {
            if (map_[u] != kUnset) continue;
            if (v == kUnset || count_[u] < count_[v] || (count_[u] == count_[v] && f_.degree(u) > f_.degree(v))) v = u;
        }
        // try the values that leave the other domains largest first, when
        // scoring them all is cheap enough
        const bool score = count_[v] * (n - placed) * words_ <= kScoreBudget;
        std::vector<std::tuple<std::size_t, std::size_t, Element>> ranked;
        std::vector<std::uint64_t> mine(row(v), row(v) + words_);
        for (std::size_t wi = 0; wi < words_; ++wi) {
            for (std::uint64_t bits = mine[wi]; bits; bits &= bits - 1) {
                const Element w = static_cast<Element>(wi * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                if (inverse_[w] != kUnset) continue;
                if (!score) {
                    ranked.emplace_back(0, 0, w);
                    continue;
                }
                map_[v] = w;
                inverse_[w] = v;
                const std::size_t mark = trail_.size();
                if (higher_ok(v) && narrow(v, w)) {
                    std::size_t lo = SIZE_MAX, sum = 0;
                    for (Element u = 0; u < n; ++u)
                        if (map_[u] == kUnset) lo = std::min(lo, count_[u]), sum += count_[u];
                    ranked.emplace_back(lo, sum, w);
                }
                undo(mark);
                map_[v] = kUnset;
                inverse_[w] = kUnset;
            }
        }
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            return std::get<0>(a) != std::get<0>(b) ? std::get<0>(a) > std::get<0>(b) : std::get<1>(a) > std::get<1>(b);
        });
        for (const auto& [lo, sum, w] : ranked) {
            map_[v] = w;
            inverse_[w] = v;
            const std::size_t mark = trail_.size();
            if ((score || higher_ok(v)) && narrow(v, w) && assign_next(placed + 1)) return true;
            undo(mark);
            map_[v] = kUnset;
            inverse_[w] = kUnset;
        }
        return false;
    }

    bool narrow(Element v, Element w) {
        masks_.clear();
        for (Element u = 0; u < f_.size(); ++u) {
            if (map_[u] != kUnset) continue;
            const auto& mask = pattern_mask(pair_type(f_, u, v), w);
            auto* d = row(u);
            bool changed = false;
            for (std::size_t i = 0; i < words_; ++i)
                if ((d[i] & mask[i]) != d[i]) changed = true;
            if (!changed) continue;
            trail_.push_back({u, count_[u], std::vector<std::uint64_t>(d, d + words_)});
            std::size_t c = 0;
            for (std::size_t i = 0; i < words_; ++i) {
                d[i] &= mask[i];
                c += static_cast<std::size_t>(std::popcount(d[i]));
            }
            count_[u] = c;
            if (c == 0) return false;
        }
        return pigeonhole_ok();
    }

    // Unplaced vertices sharing one domain cannot outnumber it.
    bool pigeonhole_ok() {
        std::unordered_map<std::uint64_t, std::vector<Element>> groups;
        for (Element u = 0; u < f_.size(); ++u) {
            if (map_[u] != kUnset) continue;
            std::uint64_t h = 1469598103934665603ull;
            for (std::size_t i = 0; i < words_; ++i) h = (h ^ row(u)[i]) * 1099511628211ull;
            groups[h].push_back(u);
        }
        for (auto& [h, members] : groups) {
            if (members.size() < 2) continue;
            // hash buckets may mix domains; count exact matches against the first
            std::size_t same = 0;
            for (auto u : members)
                if (std::equal(row(u), row(u) + words_, row(members.front()))) ++same;
            if (same > count_[members.front()]) return false;
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            auto& t = trail_.back();
            std::copy(t.words.begin(), t.words.end(), row(t.vertex));
            count_[t.vertex] = t.count;
            trail_.pop_back();
        }
    }

    struct TrailEntry {
        Element vertex;
        std::size_t count;
        std::vector<std::uint64_t> words;
    };

    // Bits of the binary relations holding between x and y in both directions.
    std::uint64_t pair_type(const FiniteFragment& h, Element x, Element y) const {
        std::uint64_t t = 0;
        for (std::size_t i = 0; i < binary_.size(); ++i) {
            if (h.holds2(binary_[i], x, y)) t |= std::uint64_t{1} << (2 * i);
            if (h.holds2(binary_[i], y, x)) t |= std::uint64_t{1} << (2 * i + 1);
        }
        return t;
    }

    // Necessary condition: every two-element pattern of f occurs in g. Cheap
    // refutation of cases the search would only discover deep in the tree.
    bool pair_types_fit() const {
        constexpr std::size_t kMaxPairs = 1u << 21;
        const std::size_t n = f_.size(), m = g_.size();
        if (binary_.empty() || binary_.size() > 32 || n < 2 || n * n > kMaxPairs) return true;
        std::size_t adjacency = 0;
        for (auto r : binary_)
            for (Element x = 0; x < m; ++x) adjacency += g_.out(r, x).size();
        if (adjacency > kMaxPairs) return true;

        std::vector<std::uint64_t> seen;
        std::vector<std::pair<Element, Element>> adjacent;
        for (auto r : binary_)
            for (Element x = 0; x < m; ++x)
                for (auto y : g_.out(r, x))
                    if (x != y) adjacent.push_back({std::min(x, y), std::max(x, y)});
        std::sort(adjacent.begin(), adjacent.end());
        adjacent.erase(std::unique(adjacent.begin(), adjacent.end()), adjacent.end());
        for (auto [x, y] : adjacent) {
            seen.push_back(pair_type(g_, x, y));
            seen.push_back(pair_type(g_, y, x));
        }
        if (adjacent.size() < m * (m - 1) / 2) seen.push_back(0);
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());

        for (Element x = 0; x < n; ++x)
            for (Element y = x + 1; y < n; ++y)
                if (!std::binary_search(seen.begin(), seen.end(), pair_type(f_, x, y))) return false;
        return true;
    }

    // Most constrained first: prefer vertices adjacent to already ordered ones.
    void order_vertices() {
        const std::size_t n = f_.size();
        std::vector<std::size_t> links(n, 0);
        std::vector<bool> taken(n, false);
        order_.clear();
        for (std::size_t step = 0; step < n; ++step) {
            std::size_t best = n;
            for (std::size_t v = 0; v < n; ++v) {
                if (taken[v]) continue;
                if (best == n || links[v] > links[best] ||
                    (links[v] == links[best] && f_.degree(static_cast<Element>(v)) > f_.degree(static_cast<Element>(best)))) {
                    best = v;
                }
            }
            taken[best] = true;
            order_.push_back(static_cast<Element>(best));
            for (auto r : binary_) {
                for (auto u : f_.out(r, static_cast<Element>(best))) ++links[u];
                for (auto u : f_.in(r, static_cast<Element>(best))) ++links[u];
            }
        }
    }

    bool place(std::size_t depth) {
        if (depth == order_.size()) return true;
        const Element v = order_[depth];

        // candidate list from the tightest placed neighbour, else everything
        std::span<const Element> pool;
        bool have_pool = false;
        for (auto r : binary_) {
            for (auto u : f_.out(r, v)) {
                if (u == v || map_[u] == kUnset) continue;
                auto c = g_.in(r, map_[u]);
                if (!have_pool || c.size() < pool.size()) pool = c, have_pool = true;
            }
            for (auto u : f_.in(r, v)) {
                if (u == v || map_[u] == kUnset) continue;
                auto c = g_.out(r, map_[u]);
                if (!have_pool || c.size() < pool.size()) pool = c, have_pool = true;
            }
        }
        if (have_pool) {
            std::vector<Element> cands(pool.begin(), pool.end());
            for (auto w : cands)
                if (try_candidate(depth, v, w)) return true;
            return false;
        }
        for (Element w = 0; w < g_.size(); ++w)
            if (try_candidate(depth, v, w)) return true;
        return false;
    }

    bool try_candidate(std::size_t depth, Element v, Element w) {
        if (inverse_[w] != kUnset || !compatible(v, w)) return false;
        map_[v] = w;
        inverse_[w] = v;
        if (higher_ok(v) && place(depth + 1)) return true;
        map_[v] = kUnset;
        inverse_[w] = kUnset;
        return false;
    }

    bool compatible(Element v, Element w) const {
        for (auto r : unary_)
            if (f_.holds1(r, v) != g_.holds1(r, w)) return false;
        for (auto r : binary_) {
            if (f_.out(r, v).size() > g_.out(r, w).size() || f_.in(r, v).size() > g_.in(r, w).size()) return false;
            if (f_.holds2(r, v, v) != g_.holds2(r, w, w)) return false;
            std::size_t fo = 0, fi = 0, go = 0, gi = 0;
            for (auto u : f_.out(r, v)) {
                if (u == v || map_[u] == kUnset) continue;
                if (!g_.holds2(r, w, map_[u])) return false;
                ++fo;
            }
            for (auto u : f_.in(r, v)) {
                if (u == v || map_[u] == kUnset) continue;
                if (!g_.holds2(r, map_[u], w)) return false;
                ++fi;
            }
            for (auto x : g_.out(r, w))
                if (x != w && inverse_[x] != kUnset) ++go;
            for (auto x : g_.in(r, w))
                if (x != w && inverse_[x] != kUnset) ++gi;
            if (fo != go || fi != gi) return false;
        }
        return true;
    }

    // Relations of arity >= 3, checked once all arguments are placed.
    bool higher_ok(Element v) const {
        for (auto r : higher_) {
            for (const auto& t : f_.incident(r, v)) {
                Tuple img;
                bool full = true;
                for (auto x : t) {
                    if (map_[x] == kUnset) {
                        full = false;
                        break;
                    }
                    img.push_back(map_[x]);
                }
                if (full && !g_.holds(r, img)) return false;
            }
            for (const auto& t : g_.incident(r, map_[v])) {
                bool full = true;
                for (auto x : t)
                    if (inverse_[x] == kUnset) {
                        full = false;
                        break;
                    }
                if (!full) continue;
                Tuple pre;
                for (auto x : t) pre.push_back(inverse_[x]);
                if (!f_.holds(r, pre)) return false;
            }
        }
        return true;
    }

    const FiniteFragment& f_;
    const FiniteFragment& g_;
    std::vector<std::size_t> unary_, binary_, higher_;
    std::vector<Element> order_;
    std::vector<Element> map_;
    std::vector<Element> inverse_;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> domains_;
    std::vector<std::size_t> count_;
    std::vector<TrailEntry> trail_;
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> masks_;
};

}  // namespace detail

namespace detail {

// Connected components of the graph joining elements that share an atom.
inline std::vector<std::vector<Element>> components(const FiniteFragment& f) {
    std::vector<Element> parent(f.size());
    for (Element x = 0; x < f.size(); ++x) parent[x] = x;
    auto find = [&](Element x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& a : f.atoms())
        for (auto x : a.args) parent[find(x)] = find(a.args.front());
    std::vector<std::vector<Element>> out;
    std::vector<std::size_t> slot(f.size(), SIZE_MAX);
    for (Element x = 0; x < f.size(); ++x) {
        auto r = find(x);
        if (slot[r] == SIZE_MAX) slot[r] = out.size(), out.emplace_back();
        out[slot[r]].push_back(x);
    }
    return out;
}

// Elements listed bottom to top when the single binary relation is a
// reflexive linear order, nothing otherwise.
inline std::optional<std::vector<Element>> linear_listing(const FiniteFragment& f) {
    if (f.signature().size() != 1 || f.signature()[0].arity != 2) return std::nullopt;
    const std::size_t n = f.size();
    if (f.atom_count() != n * (n + 1) / 2) return std::nullopt;
    std::vector<Element> at(n, static_cast<Element>(n));
    for (Element x = 0; x < n; ++x) {
        if (!f.holds2(0, x, x)) return std::nullopt;
        auto above = f.out(0, x).size() - 1;  // strictly above x
        auto rank = n - 1 - above;
        if (at[rank] != n) return std::nullopt;
        at[rank] = x;
    }
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t q = r + 1; q < n; ++q)
            if (!f.holds2(0, at[r], at[q])) return std::nullopt;
    return at;
}

}  // namespace detail

inline std::optional<Embedding> find_embedding(const FiniteFragment& f, const FiniteFragment& g) {
    if (!(f.signature() == g.signature())) throw SignatureMismatch("embedding between different signatures");
    if (f.size() > g.size()) return std::nullopt;
    // linear into linear is decided by size; the generic search thrashes here
    if (auto lf = detail::linear_listing(f)) {
        if (auto lg = detail::linear_listing(g)) {
            Embedding e(f.size());
            for (std::size_t r = 0; r < lf->size(); ++r) e[(*lf)[r]] = (*lg)[r];
            return e;
        }
    }
    // a component that fits nowhere refutes the whole search up front
    auto parts = detail::components(f);
    if (parts.size() > 1) {
        std::vector<std::pair<std::size_t, std::size_t>> tried;
        for (const auto& part : parts) {
            auto sub = f.induced(part);
            std::pair<std::size_t, std::size_t> key{sub.size(), sub.atom_count()};
            if (sub.size() == 1 && std::find(tried.begin(), tried.end(), key) != tried.end()) continue;
            tried.push_back(key);
            if (!detail::EmbeddingSearch(sub, g).run()) return std::nullopt;
        }
    }
    return detail::EmbeddingSearch(f, g).run();
}

inline bool embed_finite(const FiniteFragment& f, const FiniteFragment& g) {
    return find_embedding(f, g).has_value();
}

inline bool isomorphic(const FiniteFragment& f, const FiniteFragment& g) {
    return f.size() == g.size() && f.atom_count() == g.atom_count() && embed_finite(f, g);
}

}  // namespace sigmalab
