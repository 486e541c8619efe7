#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sigmalab/core/signature.hpp"
#include "sigmalab/errors.hpp"

namespace sigmalab {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

struct Atom {
    std::size_t rel = 0;
    Tuple args;

    auto operator<=>(const Atom&) const = default;
};

// Finite atomic diagram over the domain {0, ..., size-1}. Closed world: an
// atom is true iff it was added. Binary relations keep sorted adjacency so
// that lookups and embedding candidate generation stay cheap.
class FiniteFragment {
public:
    FiniteFragment() = default;

    explicit FiniteFragment(Signature sig, std::size_t size = 0) : sig_(std::move(sig)) {
        tables_.resize(sig_.size());
        for (std::size_t r = 0; r < sig_.size(); ++r) tables_[r].arity = sig_[r].arity;
        for (std::size_t i = 0; i < size; ++i) add_element();
    }

    const Signature& signature() const { return sig_; }
    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    Element add_element() {
        auto e = static_cast<Element>(size_++);
        for (auto& t : tables_) {
            switch (t.arity) {
                case 1: t.unary.push_back(0); break;
                case 2:
                    t.out.emplace_back();
                    t.in.emplace_back();
                    break;
                default: t.incident.emplace_back(); break;
            }
        }
        return e;
    }

    void add(std::size_t rel, const Tuple& args) {
        check_atom(rel, args);
        auto& t = tables_[rel];
        switch (t.arity) {
            case 1:
                if (!t.unary[args[0]]) {
                    t.unary[args[0]] = 1;
                    ++t.count;
                }
                break;
            case 2: add2(rel, args[0], args[1]); break;
            default:
                if (t.tuples.insert(args).second) {
                    ++t.count;
                    std::vector<Element> seen;
                    for (auto a : args) {
                        if (std::find(seen.begin(), seen.end(), a) != seen.end()) continue;
                        seen.push_back(a);
                        t.incident[a].push_back(args);
                    }
                }
        }
    }

    void add2(std::size_t rel, Element a, Element b) {
        auto& t = tables_[rel];
        if (a >= size_ || b >= size_) throw MalformedFormula("argument outside fragment domain");
        if (insert_sorted(t.out[a], b)) {
            insert_sorted(t.in[b], a);
            ++t.count;
        }
    }

    bool holds(std::size_t rel, const Tuple& args) const {
        check_atom(rel, args);
        const auto& t = tables_[rel];
        switch (t.arity) {
            case 1: return t.unary[args[0]] != 0;
            case 2: return holds2(rel, args[0], args[1]);
            default: return t.tuples.count(args) != 0;
        }
    }

    bool holds2(std::size_t rel, Element a, Element b) const {
        const auto& o = tables_[rel].out[a];
        return std::binary_search(o.begin(), o.end(), b);
    }

    bool holds1(std::size_t rel, Element a) const { return tables_[rel].unary[a] != 0; }

    std::span<const Element> out(std::size_t rel, Element a) const { return tables_[rel].out[a]; }
    std::span<const Element> in(std::size_t rel, Element a) const { return tables_[rel].in[a]; }
    const std::vector<Tuple>& incident(std::size_t rel, Element a) const { return tables_[rel].incident[a]; }

    std::size_t atom_count(std::size_t rel) const { return tables_[rel].count; }

    std::size_t atom_count() const {
        std::size_t n = 0;
        for (const auto& t : tables_) n += t.count;
        return n;
    }

    // Number of atoms that mention a, counting both directions.
    std::size_t degree(Element a) const {
        std::size_t d = 0;
        for (const auto& t : tables_) {
            switch (t.arity) {
                case 1: d += t.unary[a]; break;
                case 2: d += t.out[a].size() + t.in[a].size(); break;
                default: d += t.incident[a].size();
            }
        }
        return d;
    }

    // Elements related to a by some binary relation other than a itself.
    bool isolated(Element a) const {
        for (const auto& t : tables_) {
            if (t.arity == 1 && t.unary[a]) return false;
            if (t.arity == 2) {
                for (auto b : t.out[a])
                    if (b != a) return false;
                for (auto b : t.in[a])
                    if (b != a) return false;
            }
            if (t.arity > 2 && !t.incident[a].empty()) return false;
        }
        return true;
    }

    std::vector<Atom> atoms() const {
        std::vector<Atom> res;
        for (std::size_t r = 0; r < tables_.size(); ++r) {
            const auto& t = tables_[r];
            if (t.arity == 1) {
                for (Element a = 0; a < size_; ++a)
                    if (t.unary[a]) res.push_back({r, {a}});
            } else if (t.arity == 2) {
                for (Element a = 0; a < size_; ++a)
                    for (auto b : t.out[a]) res.push_back({r, {a, b}});
            } else {
                for (const auto& tu : t.tuples) res.push_back({r, tu});
            }
        }
        return res;
    }

    // Restriction to the initial segment {0, ..., n-1}.
    FiniteFragment restrict(std::size_t n) const {
        if (n > size_) throw ConstructionError("restriction larger than the fragment");
        FiniteFragment res(sig_, n);
        for (std::size_t r = 0; r < tables_.size(); ++r) {
            const auto& t = tables_[r];
            if (t.arity == 1) {
                for (Element a = 0; a < n; ++a)
                    if (t.unary[a]) res.add(r, {a});
            } else if (t.arity == 2) {
                for (Element a = 0; a < n; ++a)
                    for (auto b : t.out[a]) {
                        if (b >= n) break;
                        res.add2(r, a, b);
                    }
            } else {
                for (const auto& tu : t.tuples)
                    if (std::all_of(tu.begin(), tu.end(), [&](Element x) { return x < n; })) res.add(r, tu);
            }
        }
        return res;
    }

    // Induced substructure on elems, relabelled 0..k-1 in the given order.
    FiniteFragment induced(const std::vector<Element>& elems) const {
        std::vector<std::int64_t> pos(size_, -1);
        for (std::size_t i = 0; i < elems.size(); ++i) {
            if (elems[i] >= size_ || pos[elems[i]] >= 0) throw ConstructionError("bad induced element list");
            pos[elems[i]] = static_cast<std::int64_t>(i);
        }
        FiniteFragment res(sig_, elems.size());
        for (std::size_t r = 0; r < tables_.size(); ++r) {
            const auto& t = tables_[r];
            for (std::size_t i = 0; i < elems.size(); ++i) {
                Element a = elems[i];
                if (t.arity == 1) {
                    if (t.unary[a]) res.add(r, {static_cast<Element>(i)});
                } else if (t.arity == 2) {
                    for (auto b : t.out[a])
                        if (pos[b] >= 0) res.add2(r, static_cast<Element>(i), static_cast<Element>(pos[b]));
                } else {
                    for (const auto& tu : t.incident[a]) {
                        Tuple mapped;
                        bool inside = true;
                        for (auto x : tu) {
                            if (pos[x] < 0) {
                                inside = false;
                                break;
                            }
                            mapped.push_back(static_cast<Element>(pos[x]));
                        }
                        if (inside) res.add(r, mapped);
                    }
                }
            }
        }
        return res;
    }

    // this ⊑ other: other is at least as large and agrees exactly on our domain.
    bool is_extended_by(const FiniteFragment& other) const {
        if (!(sig_ == other.sig_) || other.size_ < size_) return false;
        return other.restrict(size_) == *this;
    }

    bool operator==(const FiniteFragment& o) const {
        if (!(sig_ == o.sig_) || size_ != o.size_) return false;
        for (std::size_t r = 0; r < tables_.size(); ++r) {
            const auto& a = tables_[r];
            const auto& b = o.tables_[r];
            if (a.count != b.count || a.unary != b.unary || a.out != b.out || a.tuples != b.tuples) return false;
        }
        return true;
    }

private:
    struct Table {
        std::size_t arity = 0;
        std::size_t count = 0;
        std::vector<std::uint8_t> unary;
        std::vector<std::vector<Element>> out;
        std::vector<std::vector<Element>> in;
        std::set<Tuple> tuples;
        std::vector<std::vector<Tuple>> incident;
    };

    static bool insert_sorted(std::vector<Element>& v, Element x) {
        if (v.empty() || v.back() < x) {
            v.push_back(x);
            return true;
        }
        auto it = std::lower_bound(v.begin(), v.end(), x);
        if (it != v.end() && *it == x) return false;
        v.insert(it, x);
        return true;
    }

    void check_atom(std::size_t rel, const Tuple& args) const {
        if (rel >= sig_.size()) throw MalformedFormula("relation index out of range");
        if (args.size() != sig_[rel].arity) {
            throw MalformedFormula("arity mismatch for relation '" + sig_[rel].name + "'");
        }
        for (auto a : args)
            if (a >= size_) throw MalformedFormula("argument outside fragment domain");
    }

    Signature sig_;
    std::size_t size_ = 0;
    std::vector<Table> tables_;
};

}  // namespace sigmalab
