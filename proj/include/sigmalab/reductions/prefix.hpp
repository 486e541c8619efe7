#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigmalab/errors.hpp"

namespace sigmalab {

enum class Relation { EqN, Id, E0, Erange, E3, Eset };

inline std::string to_string(Relation r) {
    switch (r) {
        case Relation::EqN: return "=N";
        case Relation::Id: return "Id";
        case Relation::E0: return "E0";
        case Relation::Erange: return "Erange";
        case Relation::E3: return "E3";
        case Relation::Eset: return "Eset";
    }
    return "?";
}

inline bool columnar(Relation r) { return r == Relation::E3 || r == Relation::Eset; }

// Finite part of an element of ℕ^ℕ (flat) or ℕ^(ℕ×ℕ) (columnar).
struct OutputPrefix {
    bool columnar = false;
    std::vector<std::uint64_t> flat;
    std::vector<std::vector<std::uint64_t>> columns;

    static OutputPrefix make_flat(std::vector<std::uint64_t> v = {}) { return {false, std::move(v), {}}; }
    static OutputPrefix make_columnar(std::vector<std::vector<std::uint64_t>> c = {}) {
        return {true, {}, std::move(c)};
    }

    std::size_t length() const {
        if (!columnar) return flat.size();
        std::size_t n = 0;
        for (const auto& c : columns) n += c.size();
        return n;
    }

    // Value of column m at position k, if already determined.
    std::optional<std::uint64_t> at(std::size_t m, std::size_t k) const {
        if (m >= columns.size() || k >= columns[m].size()) return std::nullopt;
        return columns[m][k];
    }

    // Prefix order; columnwise for columnar prefixes.
    bool is_prefix_of(const OutputPrefix& o) const {
        if (columnar != o.columnar) return false;
        auto pre = [](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
            return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
        };
        if (!columnar) return pre(flat, o.flat);
        for (std::size_t m = 0; m < columns.size(); ++m) {
            static const std::vector<std::uint64_t> empty;
            if (!pre(columns[m], m < o.columns.size() ? o.columns[m] : empty)) return false;
        }
        return true;
    }

    std::set<std::uint64_t> range() const {
        std::set<std::uint64_t> r(flat.begin(), flat.end());
        for (const auto& c : columns) r.insert(c.begin(), c.end());
        return r;
    }

    nlohmann::json to_json() const {
        if (!columnar) return {{"flat", flat}};
        return {{"columns", columns}};
    }

    bool operator==(const OutputPrefix&) const = default;
};

struct PrefixVerdict {
    enum class Kind { ConsistentSoFar, DefinitelyDistinct, EquivalentByRule };
    Kind kind = Kind::ConsistentSoFar;
    std::optional<std::size_t> position;  // witness for DefinitelyDistinct
    nlohmann::json evidence = nlohmann::json::object();

    bool distinct() const { return kind == Kind::DefinitelyDistinct; }
    std::string kind_name() const {
        switch (kind) {
            case Kind::ConsistentSoFar: return "ConsistentSoFar";
            case Kind::DefinitelyDistinct: return "DefinitelyDistinct";
            case Kind::EquivalentByRule: return "EquivalentByRule";
        }
        return "?";
    }
    nlohmann::json to_json() const {
        nlohmann::json j{{"verdict", kind_name()}, {"evidence", evidence}};
        if (position) j["position"] = *position;
        return j;
    }
};

// Agreement statistics of two sequences on their common domain.
struct Agreement {
    std::size_t common = 0;
    std::size_t mismatches = 0;
    std::size_t agreeing_suffix = 0;
    std::optional<std::size_t> last_mismatch;
};

inline Agreement agreement(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    Agreement g;
    g.common = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < g.common; ++k)
        if (a[k] != b[k]) {
            ++g.mismatches;
            g.last_mismatch = k;
        }
    g.agreeing_suffix = g.last_mismatch ? g.common - *g.last_mismatch - 1 : g.common;
    return g;
}

// Compares two prefixes under `rel`. A declared closed range (E_range) is the
// complete limiting range of that side; leaving it outside certifies
// distinctness.
inline PrefixVerdict check_prefix(Relation rel, const OutputPrefix& a, const OutputPrefix& b,
                                  const std::optional<std::set<std::uint64_t>>& closed_a = std::nullopt,
                                  const std::optional<std::set<std::uint64_t>>& closed_b = std::nullopt) {
    if (a.columnar != b.columnar) throw ConfigurationError("prefix shape mismatch");
    if (columnar(rel) != a.columnar) throw ConfigurationError("prefix shape does not fit " + to_string(rel));
    PrefixVerdict v;
    using K = PrefixVerdict::Kind;
    switch (rel) {
        case Relation::EqN: {
            // the value is the first entry; later entries repeat it
            if (a.flat.empty() || b.flat.empty()) break;
            if (a.flat[0] != b.flat[0]) {
                v.kind = K::DefinitelyDistinct;
                v.position = 0;
            } else {
                v.kind = K::EquivalentByRule;
            }
            break;
        }
        case Relation::Id: {
            auto g = agreement(a.flat, b.flat);
            for (std::size_t k = 0; k < g.common; ++k)
                if (a.flat[k] != b.flat[k]) {
                    v.kind = K::DefinitelyDistinct;
                    v.position = k;
                    break;
                }
            v.evidence = {{"compared", g.common}};
            break;
        }
        case Relation::E0: {
            auto g = agreement(a.flat, b.flat);
            v.evidence = {{"compared", g.common}, {"mismatches", g.mismatches}, {"agreeing_suffix", g.agreeing_suffix}};
            break;
        }
        case Relation::E3: {
            auto cols = nlohmann::json::array();
            std::size_t n = std::max(a.columns.size(), b.columns.size());
            static const std::vector<std::uint64_t> empty;
            for (std::size_t m = 0; m < n; ++m) {
                auto g = agreement(m < a.columns.size() ? a.columns[m] : empty, m < b.columns.size() ? b.columns[m] : empty);
                if (g.mismatches)
                    cols.push_back({{"column", m}, {"mismatches", g.mismatches}, {"agreeing_suffix", g.agreeing_suffix}});
            }
            v.evidence = {{"columns_compared", n}, {"disagreeing_columns", cols}};
            break;
        }
        case Relation::Erange: {
            auto ra = a.range(), rb = b.range();
            std::vector<std::uint64_t> only_a, only_b;
            std::set_difference(ra.begin(), ra.end(), rb.begin(), rb.end(), std::back_inserter(only_a));
            std::set_difference(rb.begin(), rb.end(), ra.begin(), ra.end(), std::back_inserter(only_b));
            v.evidence = {{"only_left", only_a}, {"only_right", only_b}};
            auto escapes = [&](const OutputPrefix& p, const std::set<std::uint64_t>& closed) -> std::optional<std::size_t> {
                for (std::size_t k = 0; k < p.flat.size(); ++k)
                    if (!closed.count(p.flat[k])) return k;
                return std::nullopt;
            };
            if (closed_b)
                if (auto k = escapes(a, *closed_b)) {
                    v.kind = K::DefinitelyDistinct;
                    v.position = *k;
                    v.evidence["escaped"] = "left";
                }
            if (!v.distinct() && closed_a)
                if (auto k = escapes(b, *closed_a)) {
                    v.kind = K::DefinitelyDistinct;
                    v.position = *k;
                    v.evidence["escaped"] = "right";
                }
            if (!v.distinct() && closed_a && closed_b && *closed_a == *closed_b) v.kind = K::EquivalentByRule;
            break;
        }
        case Relation::Eset: {
            std::set<std::vector<std::uint64_t>> ca(a.columns.begin(), a.columns.end()),
                cb(b.columns.begin(), b.columns.end());
            v.evidence = {{"distinct_left", ca.size()}, {"distinct_right", cb.size()}};
            break;
        }
    }
    return v;
}

}  // namespace sigmalab
