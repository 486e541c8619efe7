#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "sigmalab/catalog/structure.hpp"
#include "sigmalab/core/fragment.hpp"

namespace sigmalab {

// Concrete enumeration of a catalog structure: abstract elements 0, 1, 2, ...
// and the binary relation between them.
class Model {
public:
    virtual ~Model() = default;
    virtual std::optional<std::size_t> cardinality() const = 0;
    virtual bool related(std::size_t a, std::size_t b) const = 0;
    // Finite superset of the elements related to a (either direction), when
    // the model is sparse. nullopt means "scan everything".
    virtual std::optional<std::vector<std::size_t>> neighbours(std::size_t a) const = 0;
};

namespace detail {

class LinearModel : public Model {
public:
    enum class Type { Omega, OmegaStar, Zeta, Chain };
    LinearModel(Type t, std::size_t n) : type_(t), n_(n) {}

    std::optional<std::size_t> cardinality() const override {
        if (type_ == Type::Chain) return n_;
        return std::nullopt;
    }

    bool related(std::size_t a, std::size_t b) const override {
        switch (type_) {
            case Type::Omega:
            case Type::Chain: return a <= b;
            case Type::OmegaStar: return a >= b;
            case Type::Zeta: return position(a) <= position(b);
        }
        return false;
    }

    std::optional<std::vector<std::size_t>> neighbours(std::size_t) const override { return std::nullopt; }

private:
    // 0, -1, 1, -2, 2, ...
    static std::int64_t position(std::size_t i) {
        auto v = static_cast<std::int64_t>(i);
        return (v % 2 == 1) ? -(v + 1) / 2 : v / 2;
    }

    Type type_;
    std::size_t n_;
};

// Element 2i is spine s_i. For k > 0 element 2i+1 is the pendant above s_i;
// for k = 0 element 2j-1 is the pendant above s_j and s_0 has none.
class PosetModel : public Model {
public:
    explicit PosetModel(std::size_t k) : k_(k) {}

    std::optional<std::size_t> cardinality() const override {
        if (k_ == 0) return std::nullopt;
        return 2 * k_ + 2;
    }

    bool related(std::size_t a, std::size_t b) const override {
        if (a == b) return true;
        if (a % 2 == 1) return false;  // pendants are maximal
        std::size_t i = a / 2;
        if (b % 2 == 0) return i <= b / 2;
        std::size_t j = (k_ == 0) ? (b + 1) / 2 : (b - 1) / 2;
        return i <= j;
    }

    std::optional<std::vector<std::size_t>> neighbours(std::size_t) const override { return std::nullopt; }

private:
    std::size_t k_;
};

// Only the diagonal of the order.
class AntichainModel : public Model {
public:
    std::optional<std::size_t> cardinality() const override { return std::nullopt; }
    bool related(std::size_t a, std::size_t b) const override { return a == b; }
    std::optional<std::vector<std::size_t>> neighbours(std::size_t a) const override {
        return std::vector<std::size_t>{a};
    }
};

class PathModel : public Model {
public:
    explicit PathModel(std::optional<std::size_t> n) : n_(n) {}
    std::optional<std::size_t> cardinality() const override { return n_; }
    bool related(std::size_t a, std::size_t b) const override { return a + 1 == b || b + 1 == a; }
    std::optional<std::vector<std::size_t>> neighbours(std::size_t a) const override {
        std::vector<std::size_t> r;
        if (a > 0) r.push_back(a - 1);
        if (!n_ || a + 1 < *n_) r.push_back(a + 1);
        return r;
    }

private:
    std::optional<std::size_t> n_;
};

class IsolatedModel : public Model {
public:
    explicit IsolatedModel(std::optional<std::size_t> n) : n_(n) {}
    std::optional<std::size_t> cardinality() const override { return n_; }
    bool related(std::size_t, std::size_t) const override { return false; }
    std::optional<std::vector<std::size_t>> neighbours(std::size_t) const override {
        return std::vector<std::size_t>{};
    }

private:
    std::optional<std::size_t> n_;
};

// Disjoint cycles laid out consecutively; sizes come from the list, or from
// 3, 4, 5, ... skipping `skip` when the list is empty.
class CyclesModel : public Model {
public:
    static CyclesModel single(std::size_t n) { return CyclesModel(n, 0); }
    static CyclesModel complement(std::size_t skip) { return CyclesModel(0, skip); }

    std::optional<std::size_t> cardinality() const override {
        if (single_ != 0) return single_;
        return std::nullopt;
    }

    bool related(std::size_t a, std::size_t b) const override {
        auto [sa, oa] = locate(a);
        auto [sb, ob] = locate(b);
        if (sa != sb || oa != ob || a == b) return false;
        std::size_t i = a - oa, j = b - ob;
        return (i + 1) % sa == j || (j + 1) % sa == i;
    }

    std::optional<std::vector<std::size_t>> neighbours(std::size_t a) const override {
        auto [s, o] = locate(a);
        std::size_t i = a - o;
        return std::vector<std::size_t>{o + (i + 1) % s, o + (i + s - 1) % s};
    }

    // (cycle size, offset of its first element)
    std::pair<std::size_t, std::size_t> locate(std::size_t a) const {
        if (single_ != 0) return {single_, 0};
        std::size_t offset = 0;
        for (std::size_t m = 3;; ++m) {
            if (m == skip_) continue;
            if (a < offset + m) return {m, offset};
            offset += m;
        }
    }

private:
    CyclesModel(std::size_t single, std::size_t skip) : single_(single), skip_(skip) {}
    std::size_t single_;
    std::size_t skip_;
};

// Alternates between the two sides while both have elements left.
class UnionModel : public Model {
public:
    UnionModel(std::unique_ptr<Model> left, std::unique_ptr<Model> right)
        : left_(std::move(left)), right_(std::move(right)) {
        auto a = left_->cardinality();
        auto b = right_->cardinality();
        if (a && b) {
            both_ = std::min(*a, *b);
            longer_ = *a >= *b ? 0 : 1;
        } else if (a) {
            both_ = *a;
            longer_ = 1;
        } else if (b) {
            both_ = *b;
            longer_ = 0;
        } else {
            both_ = std::nullopt;
            longer_ = 0;
        }
    }

    std::optional<std::size_t> cardinality() const override {
        auto a = left_->cardinality();
        auto b = right_->cardinality();
        if (!a || !b) return std::nullopt;
        return *a + *b;
    }

    bool related(std::size_t a, std::size_t b) const override {
        auto [sa, la] = split(a);
        auto [sb, lb] = split(b);
        if (sa != sb) return false;
        return side(sa).related(la, lb);
    }

    std::optional<std::vector<std::size_t>> neighbours(std::size_t a) const override {
        auto [s, l] = split(a);
        auto inner = side(s).neighbours(l);
        if (!inner) return std::nullopt;
        std::vector<std::size_t> out;
        for (auto x : *inner) out.push_back(join(s, x));
        return out;
    }

    std::pair<int, std::size_t> split(std::size_t i) const {
        if (!both_ || i < 2 * *both_) return {static_cast<int>(i % 2), i / 2};
        return {longer_, *both_ + (i - 2 * *both_)};
    }

    std::size_t join(int s, std::size_t local) const {
        if (!both_ || local < *both_) return 2 * local + static_cast<std::size_t>(s);
        return 2 * *both_ + (local - *both_);
    }

private:
    const Model& side(int s) const { return s == 0 ? *left_ : *right_; }

    std::unique_ptr<Model> left_, right_;
    std::optional<std::size_t> both_;
    int longer_;
};

}  // namespace detail

inline std::unique_ptr<Model> make_model(const CatalogStructure& s) {
    using detail::LinearModel;
    switch (s.shape()) {
        case Shape::Omega: return std::make_unique<LinearModel>(LinearModel::Type::Omega, 0);
        case Shape::OmegaStar: return std::make_unique<LinearModel>(LinearModel::Type::OmegaStar, 0);
        case Shape::Zeta: return std::make_unique<LinearModel>(LinearModel::Type::Zeta, 0);
        case Shape::Chain: return std::make_unique<LinearModel>(LinearModel::Type::Chain, s.param());
        case Shape::PosetP: return std::make_unique<detail::PosetModel>(s.param());
        case Shape::Ray: return std::make_unique<detail::PathModel>(std::nullopt);
        case Shape::FiniteRay: return std::make_unique<detail::PathModel>(s.param());
        case Shape::Cycle: return std::make_unique<detail::CyclesModel>(detail::CyclesModel::single(s.param()));
        case Shape::CycleComplement:
            return std::make_unique<detail::CyclesModel>(detail::CyclesModel::complement(s.param()));
        case Shape::IsolatedInfinite: return std::make_unique<detail::IsolatedModel>(std::nullopt);
        case Shape::IsolatedFinite: return std::make_unique<detail::IsolatedModel>(s.param());
        case Shape::Tilde:
            return std::make_unique<detail::UnionModel>(make_model(s.arg()), std::make_unique<detail::AntichainModel>());
        case Shape::DisjointUnion:
            return std::make_unique<detail::UnionModel>(make_model(s.arg(0)), make_model(s.arg(1)));
    }
    throw ConstructionError("no model for " + s.to_string());
}

// Substructure on the first n abstract elements, in enumeration order.
inline FiniteFragment window(const CatalogStructure& s, std::size_t n) {
    auto model = make_model(s);
    if (auto c = model->cardinality(); c && n > *c) n = *c;
    FiniteFragment f(s.signature(), n);
    for (std::size_t a = 0; a < n; ++a) {
        auto nb = model->neighbours(a);
        if (nb) {
            for (auto b : *nb) {
                if (b >= n) continue;
                if (model->related(a, b)) f.add2(0, static_cast<Element>(a), static_cast<Element>(b));
            }
        } else {
            for (std::size_t b = 0; b < n; ++b)
                if (model->related(a, b)) f.add2(0, static_cast<Element>(a), static_cast<Element>(b));
        }
    }
    return f;
}

inline FiniteFragment whole(const CatalogStructure& s) {
    auto c = s.cardinality();
    if (!c) throw ConstructionError(s.to_string() + " is infinite");
    return window(s, *c);
}

}  // namespace sigmalab
