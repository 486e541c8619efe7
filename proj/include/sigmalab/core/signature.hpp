#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sigmalab/errors.hpp"

namespace sigmalab {

struct RelationSymbol {
    std::string name;
    std::size_t arity = 1;

    bool operator==(const RelationSymbol&) const = default;
};

// Finite relational signature. Symbol order fixes the relation index used
// by the sentence numbering.
class Signature {
public:
    Signature() = default;

    explicit Signature(std::vector<RelationSymbol> symbols) : symbols_(std::move(symbols)) {
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            if (symbols_[i].arity == 0) {
                throw MalformedFormula("relation '" + symbols_[i].name + "' has arity 0");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (symbols_[j].name == symbols_[i].name) {
                    throw MalformedFormula("duplicate relation name '" + symbols_[i].name + "'");
                }
            }
        }
    }

    // One reflexive binary relation "le".
    static const Signature& order() {
        static const Signature sig({{"le", 2}});
        return sig;
    }

    // One symmetric irreflexive binary relation "E".
    static const Signature& graph() {
        static const Signature sig({{"E", 2}});
        return sig;
    }

    std::size_t size() const { return symbols_.size(); }
    const RelationSymbol& operator[](std::size_t i) const { return symbols_.at(i); }
    const std::vector<RelationSymbol>& symbols() const { return symbols_; }

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            if (symbols_[i].name == name) return i;
        }
        throw MalformedFormula("unknown relation '" + name + "'");
    }

    bool operator==(const Signature&) const = default;

    nlohmann::json to_json() const {
        auto out = nlohmann::json::array();
        for (const auto& s : symbols_) out.push_back({{"name", s.name}, {"arity", s.arity}});
        return out;
    }

    static Signature from_json(const nlohmann::json& j) {
        if (!j.is_array()) throw ParseError("signature must be a JSON array");
        std::vector<RelationSymbol> syms;
        for (const auto& e : j) {
            if (!e.is_object() || !e.contains("name") || !e.contains("arity")) {
                throw ParseError("signature entries need 'name' and 'arity'");
            }
            auto arity = e.at("arity").get<long long>();
            if (arity < 1) throw MalformedFormula("arity must be >= 1");
            syms.push_back({e.at("name").get<std::string>(), static_cast<std::size_t>(arity)});
        }
        return Signature(std::move(syms));
    }

private:
    std::vector<RelationSymbol> symbols_;
};

}  // namespace sigmalab
