#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sigmalab/adversaries/adversaries.hpp"
#include "sigmalab/harness/criteria.hpp"
#include "sigmalab/learners/constructions.hpp"
#include "sigmalab/learners/transforms.hpp"
#include "sigmalab/reductions/gammas.hpp"
#include "sigmalab/reductions/verify.hpp"

namespace sigmalab {

// Named families, learners, operators and adversaries. Everything a run or a
// duel needs is reconstructed from these names plus a seed and a horizon.
namespace registry {

using CS = CatalogStructure;

struct FamilyEntry {
    std::string name, about;
    std::function<Family()> make;
};

inline const std::vector<FamilyEntry>& families() {
    static const std::vector<FamilyEntry> all = [] {
        auto ci = [](std::size_t n) { return CS::du(CS::cycle(n), CS::iso_inf()); };
        auto tl = [](std::size_t n) { return CS::tilde(CS::chain(n)); };
        std::vector<FamilyEntry> v;
        v.push_back({"omega_pair", "ω and ω*", [] { return make_family("omega_pair", {CS::omega(), CS::omega_star()}); }});
        v.push_back({"cycles34", "C_3 ⊕ I and C_4 ⊕ I", [ci] { return make_family("cycles34", {ci(3), ci(4)}); }});
        v.push_back({"tl34", "padded chains L̃_3 and L̃_4", [tl] { return make_family("tl34", {tl(3), tl(4)}); }});
        v.push_back({"cyc_comp", "cycle complements, 3 <= n <= 6", [] {
                         std::vector<CS> m;
                         for (std::size_t n = 3; n <= 6; ++n) m.push_back(CS::cyc_comp(n));
                         return make_family("cyc_comp", m, true);
                     }});
        v.push_back({"fstar", "ω̃, ω̃* and L̃_2 .. L̃_6", [tl] {
                         std::vector<CS> m{CS::tilde(CS::omega()), CS::tilde(CS::omega_star())};
                         for (std::size_t n = 2; n <= 6; ++n) m.push_back(tl(n));
                         return make_family("fstar", m, true);
                     }});
        v.push_back({"posets", "padded P_k, k <= 24", [] {
                         std::vector<CS> m;
                         for (std::size_t k = 0; k <= 24; ++k) m.push_back(CS::tilde(CS::poset_p(k)));
                         return make_family("posets", m, true);
                     }});
        v.push_back({"rays", "R_n ⊕ I for n <= 8, and R ⊕ I", [] {
                         std::vector<CS> m;
                         for (std::size_t n = 1; n <= 8; ++n) m.push_back(CS::du(CS::ray(n), CS::iso_inf()));
                         m.push_back(CS::du(CS::ray(), CS::iso_inf()));
                         return make_family("rays", m, true);
                     }});
        v.push_back({"cycles_ray", "C_n ⊕ I for 3 <= n <= 6, and R ⊕ I", [ci] {
                         std::vector<CS> m;
                         for (std::size_t n = 3; n <= 6; ++n) m.push_back(ci(n));
                         m.push_back(CS::du(CS::ray(), CS::iso_inf()));
                         return make_family("cycles_ray", m, true);
                     }});
        return v;
    }();
    return all;
}

inline Family family(const std::string& name) {
    for (const auto& e : families())
        if (e.name == name) return e.make();
    throw ParseError("unknown family '" + name + "'");
}

// Column 0 marks the stages where the longest chain grew. A plausible-looking
// E_3 candidate for F*, used as duel fodder.
inline ReductionOperator height_growth_operator() {
    ReductionOperator g;
    g.name = "height_growth";
    g.target = Relation::E3;
    g.start = []() {
        return gamma_detail::make_run(OutputPrefix::make_columnar({{}}),
                                      [h = std::size_t(0)](const FiniteFragment& f, OutputPrefix& out) mutable {
                                          auto now = learner_detail::height(f);
                                          out.columns[0].push_back(now > h ? 1 : 0);
                                          h = now;
                                      });
    };
    return g;
}

inline std::vector<FormulaWitness> strong_witnesses(const Family& fam) {
    auto c = classify_family(fam);
    std::vector<FormulaWitness> w;
    for (std::size_t i = 0; i < fam.size(); ++i) {
        if (!c.strong.at(i)) throw ConfigurationError("no strong witness for " + fam[i].to_string());
        w.push_back(*c.strong[i]);
    }
    return w;
}

struct OperatorEntry {
    std::string name, about;
    std::function<ReductionOperator(const Family&)> make;
};

inline const std::vector<OperatorEntry>& operators() {
    static const std::vector<OperatorEntry> all{
        {"fin_to_eqnat", "=ℕ from a Fin-learner",
         [](const Family& f) { return gamma_fin_to_eqnat(f, FinLearner::from_classifier(f)); }},
        {"fin_to_eqnat_total", "fin_to_eqnat padded to every fragment, into Id",
         [](const Family& f) { return gamma_fin_to_eqnat_total(f, strong_witnesses(f)); }},
        {"erange", "E_range from pairwise witnesses", [](const Family& f) { return gamma_erange(f); }},
        {"erange_to_e3", "E_3 from pairwise witnesses", [](const Family& f) { return gamma_erange_to_e3(f); }},
        {"height_growth", "E_3 candidate marking chain growth", [](const Family&) { return height_growth_operator(); }},
    };
    return all;
}

inline ReductionOperator make_operator(const std::string& name, const Family& fam) {
    for (const auto& e : operators())
        if (e.name == name) return e.make(fam);
    throw ParseError("unknown operator '" + name + "'");
}

// Ex-learner for the pair {A_i, A_j} in the codes of `fam`.
inline LearnerPtr pair_learner(const Family& fam, std::size_t i, std::size_t j) {
    if (fam.size() == 2 && fam[0] == CS::omega() && fam[1] == CS::omega_star()) return std::make_unique<ExMinMaxLearner>(fam);
    auto c = classify_family(make_family("pair", {fam[i], fam[j]}));
    const bool swap = c.leq[1][0] && !c.leq[0][1];
    auto sub = swap ? make_family("pair", {fam[j], fam[i]}) : make_family("pair", {fam[i], fam[j]});
    std::vector<std::size_t> to = swap ? std::vector<std::size_t>{j, i} : std::vector<std::size_t>{i, j};
    return std::make_unique<RemapLearner>(std::make_unique<ExMinEmbedLearner>(sub), to);
}

inline LearnerPtr pl_pairwise(const Family& fam) {
    DuelMap duels;
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = i + 1; j < fam.size(); ++j) duels[{i, j}] = pair_learner(fam, i, j);
    return std::make_unique<PlFromPairwise>(fam.size(), std::move(duels));
}

struct LearnerEntry {
    std::string name, about;
    std::function<LearnerPtr(const Family&)> make;
};

inline const std::vector<LearnerEntry>& learners() {
    static const std::vector<LearnerEntry> all{
        {"ex_minmax", "Ex on {ω, ω*} by least/greatest element", [](const Family& f) { return LearnerPtr(new ExMinMaxLearner(f)); }},
        {"fin", "Fin from strong witnesses", [](const Family& f) { return LearnerPtr(new FinLearner(FinLearner::from_classifier(f))); }},
        {"co", "co from pairwise witnesses", [](const Family& f) { return LearnerPtr(new CoLearner(CoLearner::from_classifier(f))); }},
        {"id_to_co", "co through the fin_to_eqnat operator",
         [](const Family& f) { return LearnerPtr(new IdToCo(f, make_operator("fin_to_eqnat", f))); }},
        {"nus", "nUs from solid witnesses", [](const Family& f) { return LearnerPtr(new NusLearner(NusLearner::from_classifier(f))); }},
        {"dec", "nus made decisive", [](const Family& f) {
             return LearnerPtr(new NusToDec(std::make_unique<NusLearner>(NusLearner::from_classifier(f))));
         }},
        {"pl_pairwise", "PL from pairwise Ex-learners", [](const Family& f) { return pl_pairwise(f); }},
        {"pl_e3", "PL through the erange_to_e3 operator", [](const Family& f) {
             auto g = gamma_erange_to_e3(f);
             return LearnerPtr(new PlFromE3(f.size(), g, compute_e3_tables(f, g, 256)));
         }},
        {"pl_fstar", "PL on F*", [](const Family& f) { return LearnerPtr(new PlFstarLearner(f)); }},
        {"ex_poset", "Ex on the P_k family", [](const Family& f) { return LearnerPtr(new ExPosetLearner(f)); }},
        {"dec_ex_poset", "ex_poset made decisive",
         [](const Family& f) { return LearnerPtr(new NusToDec(std::make_unique<ExPosetLearner>(f))); }},
        {"ex_min_embed", "least member the fragment embeds into", [](const Family& f) { return LearnerPtr(new ExMinEmbedLearner(f)); }},
        {"ex_from_pl", "Ex on a pair from pl_pairwise", [](const Family& f) {
             if (f.size() != 2) throw ConfigurationError("ex_from_pl needs a two-member family");
             return LearnerPtr(new ExFromPl(pl_pairwise(f), 0, 1));
         }},
        {"silent", "always '?'", [](const Family&) { return LearnerPtr(new ScriptedLearner({}, "silent")); }},
    };
    return all;
}

inline LearnerPtr make_learner(const std::string& name, const Family& fam) {
    for (const auto& e : learners())
        if (e.name == name) return e.make(fam);
    throw ParseError("unknown learner '" + name + "'");
}

struct AdversaryEntry {
    std::string name, family, about;
    bool against_operator;
    std::function<DuelResult(const std::string& opponent, const Family&, std::uint64_t, Escalation)> run;
};

inline const std::vector<AdversaryEntry>& adversaries() {
    static const std::vector<AdversaryEntry> all{
        {"ex_rays", "rays", "lengthen the ray on every expansionary stage", false,
         [](const std::string& who, const Family& f, std::uint64_t seed, Escalation e) {
             auto m = make_learner(who, f);
             return adv_vs_ex_rays(*m, f, seed, e);
         }},
        {"nus_poset", "posets", "P_0, detour to P_k, back to P_0", false,
         [](const std::string& who, const Family& f, std::uint64_t seed, Escalation e) {
             auto m = make_learner(who, f);
             return adv_vs_nus_poset(*m, f, seed, e);
         }},
        {"co_comparable", "tl34", "L̃_3, switching to L̃_4 once its code shows", false,
         [](const std::string& who, const Family& f, std::uint64_t seed, Escalation e) {
             auto m = make_learner(who, f);
             return adv_vs_co_comparable(*m, f, 0, 1, seed, e);
         }},
        {"fin", "cycles_ray", "R ⊕ I until commitment, then close a cycle", false,
         [](const std::string& who, const Family& f, std::uint64_t seed, Escalation e) {
             auto m = make_learner(who, f);
             std::vector<std::size_t> cycles;
             for (std::size_t i = 0; i + 1 < f.size(); ++i) cycles.push_back(i);
             return adv_vs_fin(*m, f, f.size() - 1, cycles, seed, e);
         }},
        {"total_id_operator", "cycles34", "isolated points until Γ commits, then complete", true,
         [](const std::string& who, const Family& f, std::uint64_t seed, Escalation e) {
             return adv_vs_total_id_operator(make_operator(who, f), f, seed, e);
         }},
        {"e3_fstar", "fstar", "grow a padded chain on column-0 disagreements", true,
         [](const std::string& who, const Family& f, std::uint64_t seed, Escalation e) {
             return adv_vs_e3_operator_fstar(make_operator(who, f), f, seed, e);
         }},
    };
    return all;
}

inline const AdversaryEntry& adversary(const std::string& name) {
    for (const auto& e : adversaries())
        if (e.name == name) return e;
    throw ParseError("unknown adversary '" + name + "'");
}

}  // namespace registry

// The duel named by (adversary, opponent, seed, horizon). Opponent ids are
// registry names, and the certificate records them so the same call replays it.
inline DuelResult run_duel(const std::string& adversary, const std::string& opponent, std::uint64_t seed,
                           std::size_t horizon = std::size_t(1) << 14) {
    const auto& a = registry::adversary(adversary);
    Escalation esc{std::min<std::size_t>(256, horizon), horizon};
    auto r = a.run(opponent, registry::family(a.family), seed, esc);
    r.learner = opponent;
    r.notes["family"] = a.family;
    if (r.certificate) r.certificate->replay["learner"] = opponent;
    return r;
}

inline DuelResult replay_duel(const FailureCertificate& c) {
    const auto& r = c.replay;
    if (!r.contains("adversary") || !r.contains("learner") || !r.contains("seed") || !r.contains("horizon"))
        throw ParseError("certificate has no replay record");
    return run_duel(r["adversary"], r["learner"], r["seed"], r["horizon"]);
}

// ---- matrix ----

struct MatrixConfig {
    std::vector<std::string> families, learners, criteria;
    std::vector<std::uint64_t> seeds{0};
    std::vector<std::size_t> horizons{512};
    std::size_t tail = 64, window = 50, budget = 0;
    std::size_t threads = 0;  // 0: hardware concurrency
    // extra rows: {"operator", "family"} verified, {"adversary", "opponent"} dueled
    std::vector<std::pair<std::string, std::string>> reductions, duels;

    static MatrixConfig from_json(const nlohmann::json& j) {
        if (!j.is_object()) throw ParseError("matrix config must be a JSON object");
        static const std::set<std::string> known{"families", "learners", "criteria", "seeds",      "horizons",
                                                 "tail",     "window",   "budget",   "threads",    "reductions",
                                                 "duels"};
        for (const auto& [k, v] : j.items())
            if (!known.count(k)) throw ParseError("unknown matrix key '" + k + "'");
        MatrixConfig c;
        try {
            if (j.contains("families")) c.families = j["families"].get<std::vector<std::string>>();
            if (j.contains("learners")) c.learners = j["learners"].get<std::vector<std::string>>();
            if (j.contains("criteria")) c.criteria = j["criteria"].get<std::vector<std::string>>();
            if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
            if (j.contains("horizons")) c.horizons = j["horizons"].get<std::vector<std::size_t>>();
            c.tail = j.value("tail", c.tail);
            c.window = j.value("window", c.window);
            c.budget = j.value("budget", c.budget);
            c.threads = j.value("threads", c.threads);
            for (const auto& r : j.value("reductions", nlohmann::json::array()))
                c.reductions.emplace_back(r.at("operator").get<std::string>(), r.at("family").get<std::string>());
            for (const auto& r : j.value("duels", nlohmann::json::array()))
                c.duels.emplace_back(r.at("adversary").get<std::string>(), r.at("opponent").get<std::string>());
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad matrix config: ") + e.what());
        }
        for (const auto& k : c.criteria) parse_criterion(k);
        for (const auto& f : c.families) registry::family(f);
        if (c.seeds.empty() || c.horizons.empty()) throw ParseError("matrix needs seeds and horizons");
        return c;
    }
};

// One record per run: (family, learner, criterion, horizon, member, seed), or
// one per reduction / duel row.
struct MatrixRecord {
    std::string row, column;
    nlohmann::json data;
    std::string verdict;
};

namespace matrix_detail {

inline void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex mu;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> g(mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace matrix_detail

inline std::vector<MatrixRecord> run_matrix(const MatrixConfig& cfg) {
    struct Task {
        std::size_t fam, learner, member, horizon;
        std::uint64_t seed;
    };
    std::vector<Family> fams;
    for (const auto& f : cfg.families) fams.push_back(registry::family(f));
    std::vector<CriterionKind> kinds;
    for (const auto& k : cfg.criteria) kinds.push_back(parse_criterion(k));

    // prototypes, one per (family, learner); an incompatible pair is SKIPPED
    std::vector<std::vector<LearnerPtr>> protos(fams.size());
    std::vector<std::vector<std::string>> skip(fams.size());
    for (std::size_t f = 0; f < fams.size(); ++f)
        for (const auto& l : cfg.learners) {
            try {
                protos[f].push_back(registry::make_learner(l, fams[f]));
                skip[f].push_back("");
            } catch (const ConfigurationError& e) {
                protos[f].push_back(nullptr);
                skip[f].push_back(e.what());
            } catch (const WitnessInconsistency& e) {
                protos[f].push_back(nullptr);
                skip[f].push_back(e.what());
            }
        }

    std::vector<Task> tasks;
    for (std::size_t f = 0; f < fams.size(); ++f)
        for (std::size_t l = 0; l < cfg.learners.size(); ++l) {
            if (!protos[f][l]) continue;
            for (auto h : cfg.horizons)
                for (std::size_t m = 0; m < fams[f].size(); ++m)
                    for (auto seed : cfg.seeds) tasks.push_back({f, l, m, h, seed});
        }

    std::vector<std::vector<MatrixRecord>> out(tasks.size());
    matrix_detail::parallel_for(tasks.size(), cfg.threads, [&](std::size_t i) {
        const auto& t = tasks[i];
        const auto& fam = fams[t.fam];
        auto m = protos[t.fam][t.learner]->clone();
        auto p = present(fam[t.member], t.seed);
        Transcript tr;
        std::string error;
        try {
            tr = run_learner(*m, p, t.horizon);
        } catch (const Error& e) {
            error = e.what();
        }
        for (auto k : kinds) {
            CriterionSpec spec{k, t.horizon, cfg.window, std::min(cfg.tail, t.horizon), cfg.budget};
            Verdict v;
            if (!error.empty()) {
                v = Verdict::inconclusive("learner raised: " + error);
            } else {
                try {
                    v = check(spec, tr, t.member, fam);
                } catch (const ConfigurationError& e) {
                    v = Verdict::skipped(e.what());
                }
            }
            nlohmann::json d{{"kind", "run"},
                             {"family", fam.name},
                             {"learner", cfg.learners[t.learner]},
                             {"criterion", to_string(k)},
                             {"horizon", t.horizon},
                             {"member", t.member},
                             {"truth", fam[t.member].to_string()},
                             {"seed", t.seed}};
            d.update(v.to_json());
            out[i].push_back({fam.name + " / " + cfg.learners[t.learner], to_string(k), d, v.name()});
        }
    });

    std::vector<MatrixRecord> rec;
    std::size_t next = 0;
    for (std::size_t f = 0; f < fams.size(); ++f)
        for (std::size_t l = 0; l < cfg.learners.size(); ++l) {
            if (protos[f][l]) {
                for (; next < tasks.size() && tasks[next].fam == f && tasks[next].learner == l; ++next)
                    for (auto& r : out[next]) rec.push_back(std::move(r));
                continue;
            }
            for (auto k : kinds)
                rec.push_back({fams[f].name + " / " + cfg.learners[l], to_string(k),
                               {{"kind", "run"},
                                {"family", fams[f].name},
                                {"learner", cfg.learners[l]},
                                {"criterion", to_string(k)},
                                {"verdict", "SKIPPED"},
                                {"reason", skip[f][l]}},
                               "SKIPPED"});
        }

    for (const auto& [op, fname] : cfg.reductions) {
        nlohmann::json d{{"kind", "reduction"}, {"operator", op}, {"family", fname}};
        std::string verdict;
        try {
            auto fam = registry::family(fname);
            auto g = registry::make_operator(op, fam);
            auto rep = verify_reduction(g, fam, cfg.horizons.front(), cfg.seeds);
            verdict = rep.pass ? "PASS" : "FAIL";
            d["report"] = rep.to_json();
        } catch (const ConfigurationError& e) {
            verdict = "SKIPPED";
            d["reason"] = e.what();
        }
        d["verdict"] = verdict;
        rec.push_back({fname + " / " + op, "reduce", d, verdict});
    }
    for (const auto& [adv, who] : cfg.duels) {
        nlohmann::json d{{"kind", "duel"}, {"adversary", adv}, {"opponent", who}};
        std::string verdict;
        try {
            auto r = run_duel(adv, who, cfg.seeds.front());
            verdict = r.refuted() ? "FAIL" : "INCONCLUSIVE";
            d["duel"] = r.to_json();
        } catch (const ConfigurationError& e) {
            verdict = "SKIPPED";
            d["reason"] = e.what();
        }
        d["verdict"] = verdict;
        rec.push_back({adv + " / " + who, "duel", d, verdict});
    }
    return rec;
}

inline std::string records_to_jsonl(const std::vector<MatrixRecord>& rec) {
    std::string s;
    for (const auto& r : rec) s += r.data.dump() + "\n";
    return s;
}

inline std::vector<MatrixRecord> records_from_jsonl(const std::string& text) {
    std::vector<MatrixRecord> rec;
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("kind") || !j.contains("verdict"))
            throw ParseError("runs line " + std::to_string(n) + " is not a matrix record");
        const std::string kind = j["kind"];
        MatrixRecord r;
        if (kind == "run") {
            r.row = j.value("family", "?") + " / " + j.value("learner", "?");
            r.column = j.value("criterion", "?");
        } else if (kind == "reduction") {
            r.row = j.value("family", "?") + " / " + j.value("operator", "?");
            r.column = "reduce";
        } else if (kind == "duel") {
            r.row = j.value("adversary", "?") + " / " + j.value("opponent", "?");
            r.column = "duel";
        } else {
            throw ParseError("runs line " + std::to_string(n) + " has unknown kind '" + kind + "'");
        }
        r.verdict = j["verdict"];
        r.data = std::move(j);
        rec.push_back(std::move(r));
    }
    return rec;
}

// Worst verdict wins: FAIL > INCONCLUSIVE > PASS > SKIPPED > anything else.
inline std::string combine_verdicts(const std::string& a, const std::string& b) {
    auto rank = [](const std::string& v) {
        if (v == "FAIL") return 3;
        if (v == "INCONCLUSIVE") return 2;
        if (v == "PASS") return 1;
        if (v == "SKIPPED") return 0;
        return -1;
    };
    return rank(a) >= rank(b) ? a : b;
}

// Rows in first-seen order; a cell reads "PASS 6/6" with the count of
// records that passed out of those in the cell.
inline std::string render_table(const std::vector<MatrixRecord>& rec) {
    std::vector<std::string> rows, cols;
    struct Cell {
        std::string verdict;
        std::size_t pass = 0, total = 0;
    };
    std::map<std::pair<std::string, std::string>, Cell> cells;
    for (const auto& r : rec) {
        if (std::find(rows.begin(), rows.end(), r.row) == rows.end()) rows.push_back(r.row);
        if (std::find(cols.begin(), cols.end(), r.column) == cols.end()) cols.push_back(r.column);
        auto& c = cells[{r.row, r.column}];
        c.verdict = c.total ? combine_verdicts(c.verdict, r.verdict) : r.verdict;
        c.pass += r.verdict == "PASS";
        ++c.total;
    }
    auto text = [&](const std::string& row, const std::string& col) -> std::string {
        auto it = cells.find({row, col});
        if (it == cells.end()) return "";
        const auto& c = it->second;
        if (c.verdict == "SKIPPED") return "SKIPPED";
        return c.verdict + " " + std::to_string(c.pass) + "/" + std::to_string(c.total);
    };
    std::size_t w0 = 4;
    for (const auto& r : rows) w0 = std::max(w0, r.size());
    std::vector<std::size_t> w;
    for (const auto& c : cols) {
        std::size_t x = c.size();
        for (const auto& r : rows) x = std::max(x, text(r, c).size());
        w.push_back(x);
    }
    auto pad = [](std::string s, std::size_t n) {
        s.resize(std::max(n, s.size()), ' ');
        return s;
    };
    std::string out = pad("", w0);
    for (std::size_t i = 0; i < cols.size(); ++i) out += "  " + pad(cols[i], w[i]);
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
    for (const auto& r : rows) {
        out += pad(r, w0);
        for (std::size_t i = 0; i < cols.size(); ++i) out += "  " + pad(text(r, cols[i]), w[i]);
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += "\n";
    }
    return out;
}

inline bool any_failed(const std::vector<MatrixRecord>& rec) {
    return std::any_of(rec.begin(), rec.end(), [](const MatrixRecord& r) { return r.verdict == "FAIL"; });
}

}  // namespace sigmalab
