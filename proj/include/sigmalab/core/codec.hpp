#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "sigmalab/core/fragment.hpp"

namespace sigmalab {

// Atomic sentences are numbered by (max argument, relation index,
// lexicographic arguments). The first L(n) = sum_r n^arity(r) sentences are
// exactly those whose arguments are all < n.

namespace detail {

inline std::uint64_t ipow(std::uint64_t b, std::size_t e) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (b != 0 && r > std::numeric_limits<std::uint64_t>::max() / b) {
            throw MalformedFormula("sentence index overflow");
        }
        r *= b;
    }
    return r;
}

// Tuples of the given arity over [0..m] whose maximum is exactly m.
inline std::uint64_t exact_max_count(std::uint64_t m, std::size_t arity) {
    return ipow(m + 1, arity) - ipow(m, arity);
}

inline std::uint64_t completions(bool seen_max, std::uint64_t m, std::size_t rem) {
    return seen_max ? ipow(m + 1, rem) : ipow(m + 1, rem) - ipow(m, rem);
}

}  // namespace detail

inline std::uint64_t sentences_below(const Signature& sig, std::uint64_t n) {
    std::uint64_t total = 0;
    for (const auto& s : sig.symbols()) total += detail::ipow(n, s.arity);
    return total;
}

inline std::uint64_t godel_index(const Signature& sig, std::size_t rel, const Tuple& args) {
    if (rel >= sig.size()) throw MalformedFormula("relation index out of range");
    if (args.size() != sig[rel].arity) throw MalformedFormula("arity mismatch for relation '" + sig[rel].name + "'");
    std::uint64_t m = 0;
    for (auto a : args) m = std::max<std::uint64_t>(m, a);
    std::uint64_t idx = sentences_below(sig, m);
    for (std::size_t r = 0; r < rel; ++r) idx += detail::exact_max_count(m, sig[r].arity);
    bool seen = false;
    const std::size_t a = args.size();
    for (std::size_t k = 0; k < a; ++k) {
        idx += static_cast<std::uint64_t>(args[k]) * detail::completions(seen, m, a - k - 1);
        if (args[k] == m) seen = true;
    }
    return idx;
}

inline Atom godel_decode(const Signature& sig, std::uint64_t index) {
    if (sig.size() == 0) throw MalformedFormula("empty signature has no sentences");
    std::uint64_t m = 0;
    while (sentences_below(sig, m + 1) <= index) ++m;
    std::uint64_t rest = index - sentences_below(sig, m);
    std::size_t rel = 0;
    while (true) {
        auto c = detail::exact_max_count(m, sig[rel].arity);
        if (rest < c) break;
        rest -= c;
        ++rel;
    }
    const std::size_t a = sig[rel].arity;
    Tuple args(a);
    bool seen = false;
    for (std::size_t k = 0; k < a; ++k) {
        for (std::uint64_t v = 0; v <= m; ++v) {
            auto block = detail::completions(seen || v == m, m, a - k - 1);
            if (rest < block) {
                args[k] = static_cast<Element>(v);
                break;
            }
            rest -= block;
        }
        if (args[k] == m) seen = true;
    }
    return {rel, args};
}

// Visits the atoms of an n-element domain in sentence order.
inline void for_each_sentence(const Signature& sig, std::size_t n, const std::function<void(const Atom&)>& fn) {
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t r = 0; r < sig.size(); ++r) {
            const std::size_t a = sig[r].arity;
            Tuple t(a, 0);
            // odometer over [0..m]^a, keeping tuples whose max is m
            while (true) {
                if (std::find(t.begin(), t.end(), static_cast<Element>(m)) != t.end()) fn({r, t});
                std::size_t k = a;
                while (k > 0 && t[k - 1] == m) {
                    t[k - 1] = 0;
                    --k;
                }
                if (k == 0) break;
                ++t[k - 1];
            }
        }
    }
}

class DiagramPrefix {
public:
    DiagramPrefix() = default;
    explicit DiagramPrefix(std::vector<bool> bits) : bits_(std::move(bits)) {}

    const std::vector<bool>& bits() const { return bits_; }
    std::size_t size() const { return bits_.size(); }
    bool operator==(const DiagramPrefix&) const = default;

    std::string to_string() const {
        std::string s;
        s.reserve(bits_.size());
        for (bool b : bits_) s.push_back(b ? '1' : '0');
        return s;
    }

    static DiagramPrefix from_string(const std::string& s) {
        std::vector<bool> bits;
        for (char c : s) {
            if (c != '0' && c != '1') throw ParseError("diagram prefix must be a 0/1 string");
            bits.push_back(c == '1');
        }
        return DiagramPrefix(std::move(bits));
    }

private:
    std::vector<bool> bits_;
};

inline DiagramPrefix encode_fragment(const FiniteFragment& f) {
    std::vector<bool> bits;
    bits.reserve(sentences_below(f.signature(), f.size()));
    for_each_sentence(f.signature(), f.size(), [&](const Atom& a) { bits.push_back(f.holds(a.rel, a.args)); });
    return DiagramPrefix(std::move(bits));
}

inline FiniteFragment decode_fragment(const DiagramPrefix& p, const Signature& sig) {
    std::size_t n = 0;
    while (sentences_below(sig, n) < p.size()) ++n;
    if (sentences_below(sig, n) != p.size()) {
        throw PartialDiagram("prefix length " + std::to_string(p.size()) + " does not decide a whole domain");
    }
    FiniteFragment f(sig, n);
    std::size_t i = 0;
    for_each_sentence(sig, n, [&](const Atom& a) {
        if (p.bits()[i++]) f.add(a.rel, a.args);
    });
    return f;
}

}  // namespace sigmalab
