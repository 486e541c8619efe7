#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigmalab/catalog/structure.hpp"

namespace sigmalab {

// Ordered list of structures; a member's code is its index. When the family
// is infinite, `members` is the truncation and `truncation` records its bound.
struct Family {
    std::string name;
    std::vector<CatalogStructure> members;
    bool infinite = false;
    std::optional<std::size_t> truncation;

    std::size_t size() const { return members.size(); }
    bool empty() const { return members.empty(); }
    const CatalogStructure& operator[](std::size_t i) const { return members.at(i); }

    std::optional<std::size_t> code_of(const CatalogStructure& s) const {
        for (std::size_t i = 0; i < members.size(); ++i)
            if (members[i] == s) return i;
        return std::nullopt;
    }

    const Signature& signature() const {
        if (members.empty()) return Signature::graph();
        return members.front().signature();
    }

    std::string describe() const {
        std::string s = "{";
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (i) s += ", ";
            s += members[i].to_string();
        }
        if (infinite) s += ", ...";
        return s + "}";
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["name"] = name;
        j["members"] = nlohmann::json::array();
        for (const auto& m : members) j["members"].push_back(m.to_string());
        j["infinite"] = infinite;
        if (truncation) j["truncation"] = *truncation;
        return j;
    }
};

inline Family make_family(std::string name, std::vector<CatalogStructure> members, bool infinite = false) {
    Family f{std::move(name), std::move(members), infinite, std::nullopt};
    if (infinite) f.truncation = f.members.size();
    for (const auto& m : f.members)
        if (!(m.signature() == f.members.front().signature())) {
            throw ConfigurationError("family mixes signatures");
        }
    return f;
}

}  // namespace sigmalab
