#pragma once

#include <string>
#include <vector>

#include "sigmalab/catalog/model.hpp"
#include "sigmalab/catalog/oracle.hpp"
#include "sigmalab/core/codec.hpp"
#include "sigmalab/core/embedding.hpp"

namespace sigmalab {

// Finitary Σ1 sentence in normal form: a disjunction of "some finite
// structure embeds". Zero disjuncts is the false sentence.
class FormulaWitness {
public:
    FormulaWitness() = default;
    explicit FormulaWitness(std::vector<FiniteFragment> disjuncts) : disjuncts_(std::move(disjuncts)) {
        for (const auto& d : disjuncts_)
            if (!(d.signature() == disjuncts_.front().signature())) {
                throw MalformedFormula("disjuncts over different signatures");
            }
    }

    static FormulaWitness embeds(FiniteFragment f) { return FormulaWitness({std::move(f)}); }

    const std::vector<FiniteFragment>& disjuncts() const { return disjuncts_; }
    bool is_false() const { return disjuncts_.empty(); }

    // Largest disjunct, the size that matters for witness bounds.
    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& d : disjuncts_) n = std::max(n, d.size());
        return n;
    }

    std::string to_string() const;
    static FormulaWitness parse(const std::string& text, const Signature& sig);

    bool operator==(const FormulaWitness& o) const { return disjuncts_ == o.disjuncts_; }

private:
    std::vector<FiniteFragment> disjuncts_;
};

inline bool sat_fragment(const FormulaWitness& phi, const FiniteFragment& f) {
    for (const auto& d : phi.disjuncts())
        if (embed_finite(d, f)) return true;
    return false;
}

// sat_fragment along a growing sequence of fragments, each extending the
// last. A connected disjunct newly satisfied at a stage has an image through
// a new element x, inside the ball around x of radius |d|-1; only that ball is
// searched. Anything else falls back to the full search.
class SatTracker {
public:
    explicit SatTracker(FormulaWitness phi) : phi_(std::move(phi)) {
        for (const auto& d : phi_.disjuncts()) local_.push_back(d.size() > 0 && detail::components(d).size() == 1);
    }

    bool update(const FiniteFragment& f) {
        if (f.size() < seen_) {
            sat_ = false;
            seen_ = 0;
        }
        if (sat_) {
            seen_ = f.size();
            return true;
        }
        bool binary = true;
        for (std::size_t r = 0; r < f.signature().size(); ++r) binary = binary && f.signature()[r].arity <= 2;
        for (std::size_t i = 0; i < phi_.disjuncts().size() && !sat_; ++i) {
            const auto& d = phi_.disjuncts()[i];
            if (!local_[i] || !binary || seen_ == 0) {
                sat_ = embed_finite(d, f);
                continue;
            }
            for (Element x = static_cast<Element>(seen_); x < f.size() && !sat_; ++x) {
                auto b = ball(f, x, d.size() - 1);
                sat_ = b.size() >= d.size() && embed_finite(d, f.induced(b));
            }
        }
        seen_ = f.size();
        return sat_;
    }

    bool satisfied() const { return sat_; }

private:
    static std::vector<Element> ball(const FiniteFragment& f, Element x, std::size_t radius) {
        std::vector<Element> out{x};
        std::vector<bool> in(f.size(), false);
        in[x] = true;
        for (std::size_t lo = 0, r = 0; r < radius && lo < out.size(); ++r) {
            const std::size_t hi = out.size();
            for (; lo < hi; ++lo)
                for (std::size_t rel = 0; rel < f.signature().size(); ++rel) {
                    if (f.signature()[rel].arity != 2) continue;
                    for (auto span : {f.out(rel, out[lo]), f.in(rel, out[lo])})
                        for (auto y : span)
                            if (!in[y]) {
                                in[y] = true;
                                out.push_back(y);
                            }
                }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    FormulaWitness phi_;
    std::vector<bool> local_;
    std::size_t seen_ = 0;
    bool sat_ = false;
};

inline bool sat_catalog(const FormulaWitness& phi, const CatalogStructure& a) {
    for (const auto& d : phi.disjuncts())
        if (embeds_in_catalog(d, a)) return true;
    return false;
}

// Catalog name for a finite fragment when it has one.
inline std::string name_fragment(const FiniteFragment& f) {
    auto raw = [&] { return "diagram(" + std::to_string(f.size()) + ":" + encode_fragment(f).to_string() + ")"; };
    if (f.signature() == Signature::order()) {
        if (f.size() >= 1 && oracle_detail::is_linear_order(f)) return "chain(" + std::to_string(f.size()) + ")";
        if (f.size() >= 4 && f.size() % 2 == 0) {
            auto k = f.size() / 2 - 1;
            if (isomorphic(f, whole(CatalogStructure::poset_p(k)))) return "poset_p(" + std::to_string(k) + ")";
        }
        return raw();
    }
    if (f.signature() == Signature::graph()) {
        auto pieces = oracle_detail::graph_pieces(f);
        if (!pieces.valid) return raw();
        std::vector<std::string> names;
        std::size_t singles = 0;
        for (auto c : pieces.cycles) names.push_back("cycle(" + std::to_string(c) + ")");
        for (auto p : pieces.paths) {
            if (p == 1) ++singles;
            else names.push_back("ray(" + std::to_string(p) + ")");
        }
        if (singles > 0 || names.empty()) names.push_back("iso(" + std::to_string(singles) + ")");
        std::string s = names.back();
        for (std::size_t i = names.size() - 1; i-- > 0;) s = "du(" + names[i] + ", " + s + ")";
        return s;
    }
    return raw();
}

inline std::string FormulaWitness::to_string() const {
    if (disjuncts_.empty()) return "false";
    std::string s;
    for (std::size_t i = 0; i < disjuncts_.size(); ++i) {
        if (i) s += " | ";
        s += "embeds(" + name_fragment(disjuncts_[i]) + ")";
    }
    return s;
}

inline FormulaWitness FormulaWitness::parse(const std::string& text, const Signature& sig) {
    auto trim = [](std::string s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        return s;
    };
    auto t = trim(text);
    if (t == "false") return FormulaWitness();
    std::vector<FiniteFragment> ds;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= t.size(); ++i) {
        if (i < t.size() && t[i] == '(') ++depth;
        if (i < t.size() && t[i] == ')') --depth;
        if (i == t.size() || (t[i] == '|' && depth == 0)) {
            auto part = trim(t.substr(start, i - start));
            start = i + 1;
            const std::string head = "embeds(";
            if (part.rfind(head, 0) != 0 || part.back() != ')') throw MalformedFormula("expected embeds(...) in '" + part + "'");
            auto inner = trim(part.substr(head.size(), part.size() - head.size() - 1));
            if (inner.rfind("diagram(", 0) == 0) {
                auto colon = inner.find(':');
                if (colon == std::string::npos || inner.back() != ')') throw MalformedFormula("bad diagram term");
                auto bits = inner.substr(colon + 1, inner.size() - colon - 2);
                auto f = decode_fragment(DiagramPrefix::from_string(bits), sig);
                if (std::to_string(f.size()) != inner.substr(8, colon - 8)) throw MalformedFormula("diagram size mismatch");
                ds.push_back(std::move(f));
            } else {
                auto s = CatalogStructure::parse(inner);
                if (!(s.signature() == sig)) throw SignatureMismatch("witness target over another signature");
                ds.push_back(whole(s));
            }
        }
    }
    return FormulaWitness(std::move(ds));
}

}  // namespace sigmalab
