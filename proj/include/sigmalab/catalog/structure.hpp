#pragma once

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sigmalab/core/signature.hpp"
#include "sigmalab/errors.hpp"

namespace sigmalab {

enum class Shape {
    Omega,
    OmegaStar,
    Zeta,
    Chain,
    Ray,
    FiniteRay,
    Cycle,
    IsolatedInfinite,
    IsolatedFinite,
    PosetP,
    CycleComplement,
    Tilde,
    DisjointUnion,
};

enum class Kind { Order, Graph };

// Symbolic catalog structure: an atom with an optional parameter, or an
// operator over sub-structures.
class CatalogStructure {
public:
    static CatalogStructure omega() { return {Shape::Omega, 0, {}}; }
    static CatalogStructure omega_star() { return {Shape::OmegaStar, 0, {}}; }
    static CatalogStructure zeta() { return {Shape::Zeta, 0, {}}; }
    static CatalogStructure chain(std::size_t n) { return checked(Shape::Chain, n, n >= 1, "chain needs n >= 1"); }
    static CatalogStructure ray() { return {Shape::Ray, 0, {}}; }
    static CatalogStructure ray(std::size_t n) { return checked(Shape::FiniteRay, n, n >= 1, "ray(n) needs n >= 1"); }
    static CatalogStructure cycle(std::size_t n) { return checked(Shape::Cycle, n, n >= 3, "cycle needs n >= 3"); }
    static CatalogStructure iso_inf() { return {Shape::IsolatedInfinite, 0, {}}; }
    static CatalogStructure iso(std::size_t n) { return {Shape::IsolatedFinite, n, {}}; }
    static CatalogStructure poset_p(std::size_t k) { return {Shape::PosetP, k, {}}; }
    static CatalogStructure cyc_comp(std::size_t n) {
        return checked(Shape::CycleComplement, n, n >= 3, "cyc_comp needs n >= 3");
    }

    static CatalogStructure tilde(CatalogStructure x) {
        if (x.kind() != Kind::Order) throw ConstructionError("tilde applies to partial orders");
        return {Shape::Tilde, 0, {std::move(x)}};
    }

    static CatalogStructure du(CatalogStructure x, CatalogStructure y) {
        if (x.kind() != Kind::Graph || y.kind() != Kind::Graph) {
            throw ConstructionError("du applies to graphs");
        }
        return {Shape::DisjointUnion, 0, {std::move(x), std::move(y)}};
    }

    Shape shape() const { return shape_; }
    std::size_t param() const { return param_; }
    const std::vector<CatalogStructure>& args() const { return args_; }
    const CatalogStructure& arg(std::size_t i = 0) const { return args_.at(i); }

    Kind kind() const {
        switch (shape_) {
            case Shape::Omega:
            case Shape::OmegaStar:
            case Shape::Zeta:
            case Shape::Chain:
            case Shape::PosetP:
            case Shape::Tilde: return Kind::Order;
            default: return Kind::Graph;
        }
    }

    const Signature& signature() const { return kind() == Kind::Order ? Signature::order() : Signature::graph(); }

    // nullopt for infinite structures.
    std::optional<std::size_t> cardinality() const {
        switch (shape_) {
            case Shape::Chain:
            case Shape::FiniteRay:
            case Shape::Cycle:
            case Shape::IsolatedFinite: return param_;
            case Shape::PosetP:
                if (param_ == 0) return std::nullopt;
                return 2 * param_ + 2;
            case Shape::Tilde: return std::nullopt;
            case Shape::DisjointUnion: {
                auto a = args_[0].cardinality();
                auto b = args_[1].cardinality();
                if (!a || !b) return std::nullopt;
                return *a + *b;
            }
            default: return std::nullopt;
        }
    }

    bool infinite() const { return !cardinality().has_value(); }

    // Sum of the finite sizes this term mentions; used to size search windows.
    std::size_t scale() const {
        switch (shape_) {
            case Shape::Chain:
            case Shape::FiniteRay:
            case Shape::Cycle:
            case Shape::IsolatedFinite: return param_;
            case Shape::PosetP: return 2 * param_ + 2;
            case Shape::CycleComplement: return (param_ + 1) * (param_ + 2) / 2 + param_;
            case Shape::Tilde: return args_[0].scale();
            case Shape::DisjointUnion: return args_[0].scale() + args_[1].scale();
            default: return 0;
        }
    }

    std::string to_string() const {
        switch (shape_) {
            case Shape::Omega: return "omega";
            case Shape::OmegaStar: return "omega_star";
            case Shape::Zeta: return "zeta";
            case Shape::Chain: return "chain(" + std::to_string(param_) + ")";
            case Shape::Ray: return "ray";
            case Shape::FiniteRay: return "ray(" + std::to_string(param_) + ")";
            case Shape::Cycle: return "cycle(" + std::to_string(param_) + ")";
            case Shape::IsolatedInfinite: return "iso_inf";
            case Shape::IsolatedFinite: return "iso(" + std::to_string(param_) + ")";
            case Shape::PosetP: return "poset_p(" + std::to_string(param_) + ")";
            case Shape::CycleComplement: return "cyc_comp(" + std::to_string(param_) + ")";
            case Shape::Tilde: return "tilde(" + args_[0].to_string() + ")";
            case Shape::DisjointUnion: return "du(" + args_[0].to_string() + ", " + args_[1].to_string() + ")";
        }
        return "?";
    }

    bool operator==(const CatalogStructure& o) const {
        return shape_ == o.shape_ && param_ == o.param_ && args_ == o.args_;
    }

    static CatalogStructure parse(const std::string& text) {
        Parser p{text, 0};
        auto s = p.structure();
        p.skip_ws();
        if (p.pos != text.size()) p.fail("trailing input");
        return s;
    }

private:
    CatalogStructure(Shape s, std::size_t p, std::vector<CatalogStructure> a)
        : shape_(s), param_(p), args_(std::move(a)) {}

    static CatalogStructure checked(Shape s, std::size_t p, bool ok, const char* msg) {
        if (!ok) throw ConstructionError(msg);
        return {s, p, {}};
    }

    struct Parser {
        const std::string& text;
        std::size_t pos;

        [[noreturn]] void fail(const std::string& why) const {
            throw ParseError("catalog term '" + text + "': " + why + " at offset " + std::to_string(pos));
        }

        void skip_ws() {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        }

        bool eat(char c) {
            skip_ws();
            if (pos < text.size() && text[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        void expect(char c) {
            if (!eat(c)) fail(std::string("expected '") + c + "'");
        }

        std::string ident() {
            skip_ws();
            auto start = pos;
            while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
            if (start == pos) fail("expected a name");
            return text.substr(start, pos - start);
        }

        std::size_t number() {
            skip_ws();
            auto start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (start == pos) fail("expected a number");
            return std::stoul(text.substr(start, pos - start));
        }

        std::size_t param() {
            expect('(');
            auto n = number();
            expect(')');
            return n;
        }

        CatalogStructure structure() {
            auto name = ident();
            if (name == "omega") return omega();
            if (name == "omega_star") return omega_star();
            if (name == "zeta") return zeta();
            if (name == "iso_inf") return iso_inf();
            if (name == "chain") return chain(param());
            if (name == "cycle") return cycle(param());
            if (name == "iso") return iso(param());
            if (name == "poset_p") return poset_p(param());
            if (name == "cyc_comp") return cyc_comp(param());
            if (name == "ray") {
                skip_ws();
                if (pos < text.size() && text[pos] == '(') return ray(param());
                return ray();
            }
            if (name == "tilde") {
                expect('(');
                auto x = structure();
                expect(')');
                return tilde(std::move(x));
            }
            if (name == "du") {
                expect('(');
                auto x = structure();
                expect(',');
                auto y = structure();
                expect(')');
                return du(std::move(x), std::move(y));
            }
            fail("unknown structure '" + name + "'");
        }
    };

    Shape shape_;
    std::size_t param_;
    std::vector<CatalogStructure> args_;
};

}  // namespace sigmalab
