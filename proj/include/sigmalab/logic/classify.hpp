#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sigmalab/catalog/family.hpp"
#include "sigmalab/logic/sigma1.hpp"

namespace sigmalab {

enum class Level { StrongAntichain, Antichain, PartialOrder, NotPartialOrder, Inconclusive };
enum class Solidity { Solid, Inconclusive, NotApplicable };

inline std::string to_string(Level l) {
    switch (l) {
        case Level::StrongAntichain: return "StrongAntichain";
        case Level::Antichain: return "Antichain";
        case Level::PartialOrder: return "PartialOrder";
        case Level::NotPartialOrder: return "NotPartialOrder";
        case Level::Inconclusive: return "Inconclusive";
    }
    return "?";
}

inline std::string to_string(Solidity s) {
    switch (s) {
        case Solidity::Solid: return "Solid";
        case Solidity::Inconclusive: return "Inconclusive";
        case Solidity::NotApplicable: return "NotApplicable";
    }
    return "?";
}

struct Classification {
    Level level = Level::Inconclusive;
    Solidity solid = Solidity::NotApplicable;
    std::size_t witness_bound = 8;
    std::vector<std::vector<bool>> leq;
    // (i, j) -> sentence true in A_i and false in A_j, for every pair with not leq[i][j]
    std::map<std::pair<std::size_t, std::size_t>, FormulaWitness> pairwise;
    // true in A_i, false in every other member
    std::vector<std::optional<FormulaWitness>> strong;
    // true in A_i, false in every member strictly below it
    std::vector<std::optional<FormulaWitness>> solid_witnesses;
    std::vector<std::string> notes;

    bool is_partial_order() const {
        return level == Level::StrongAntichain || level == Level::Antichain || level == Level::PartialOrder;
    }

    const FormulaWitness* pair_witness(std::size_t i, std::size_t j) const {
        auto it = pairwise.find({i, j});
        return it == pairwise.end() ? nullptr : &it->second;
    }

    nlohmann::json to_json(const Family& fam) const {
        nlohmann::json j;
        j["family"] = fam.to_json();
        j["level"] = to_string(level);
        j["solid"] = to_string(solid);
        j["witness_bound"] = witness_bound;
        j["leq"] = leq;
        auto pw = nlohmann::json::array();
        for (const auto& [k, w] : pairwise) pw.push_back({{"i", k.first}, {"j", k.second}, {"formula", w.to_string()}});
        j["pairwise"] = pw;
        auto opt = [](const std::vector<std::optional<FormulaWitness>>& v) {
            auto a = nlohmann::json::array();
            for (const auto& w : v) a.push_back(w ? nlohmann::json(w->to_string()) : nlohmann::json(nullptr));
            return a;
        };
        j["strong"] = opt(strong);
        j["solid_witnesses"] = opt(solid_witnesses);
        j["notes"] = notes;
        return j;
    }
};

inline Classification classify_family(const Family& fam, std::size_t bound = 8) {
    Classification c;
    c.witness_bound = bound;
    const std::size_t n = fam.size();
    c.leq.assign(n, std::vector<bool>(n, false));
    try {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) c.leq[i][j] = (i == j) || sigma1_leq(fam[i], fam[j]);
    } catch (const UnsupportedOracle& e) {
        c.level = Level::Inconclusive;
        c.notes.push_back(e.what());
        return c;
    }

    bool poset = true, antichain = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (c.leq[i][j] && c.leq[j][i]) {
                poset = false;
                c.notes.push_back(fam[i].to_string() + " and " + fam[j].to_string() + " have the same Σ1 theory");
            }
            if (c.leq[i][j]) antichain = false;
        }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || c.leq[i][j]) continue;
            if (auto w = find_witness(fam[i], {fam[j]}, bound)) c.pairwise.emplace(std::make_pair(i, j), *w);
            else c.notes.push_back("no pairwise witness within bound for (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }

    if (!poset) {
        c.level = Level::NotPartialOrder;
        return c;
    }

    c.strong.resize(n);
    if (antichain) {
        bool all = true;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<CatalogStructure> others;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) others.push_back(fam[j]);
            c.strong[i] = find_witness(fam[i], others, bound);
            if (!c.strong[i]) all = false;
        }
        c.level = all ? Level::StrongAntichain : Level::Antichain;
        if (!all) c.notes.push_back("strong witness search exhausted at size bound");
    } else {
        c.level = Level::PartialOrder;
    }

    c.solid_witnesses.resize(n);
    bool all_solid = true;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<CatalogStructure> below;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && c.leq[j][i]) below.push_back(fam[j]);
        c.solid_witnesses[i] = find_witness(fam[i], below, bound);
        if (!c.solid_witnesses[i]) all_solid = false;
    }
    c.solid = all_solid ? Solidity::Solid : Solidity::Inconclusive;
    if (!all_solid) c.notes.push_back("solid witness search exhausted at size bound");
    return c;
}

}  // namespace sigmalab
