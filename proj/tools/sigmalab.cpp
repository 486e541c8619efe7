// sigmalab command line: runs, duels, reductions and experiment matrices.
// Exit codes: 0 all PASS/SKIPPED, 1 any FAIL, 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigmalab/harness/registry.hpp"

using namespace sigmalab;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kFail = 1, kUsage = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << text;
}

int list_families(bool all) {
    for (const auto& e : registry::families()) {
        auto f = e.make();
        std::cout << e.name << "  " << f.describe();
        if (f.truncation) std::cout << "  (truncated at " << *f.truncation << ")";
        std::cout << "\n";
    }
    if (!all) return kOk;
    std::cout << "\nlearners:\n";
    for (const auto& e : registry::learners()) std::cout << "  " << e.name << "  " << e.about << "\n";
    std::cout << "\noperators:\n";
    for (const auto& e : registry::operators()) std::cout << "  " << e.name << "  " << e.about << "\n";
    std::cout << "\nadversaries:\n";
    for (const auto& e : registry::adversaries())
        std::cout << "  " << e.name << "  on " << e.family << (e.against_operator ? ", vs operators" : ", vs learners") << "  "
                  << e.about << "\n";
    return kOk;
}

int classify(const std::string& name, std::size_t bound) {
    auto fam = registry::family(name);
    auto c = classify_family(fam, bound);
    std::cout << c.to_json(fam).dump(2) << "\n";
    return kOk;
}

struct RunOpts {
    std::uint64_t seed = 0;
    std::size_t horizon = 512, tail = 64, window = 50, budget = 0;
    std::optional<std::size_t> member;
    std::string transcript_out;
};

int run(const std::string& fname, const std::string& lname, const std::string& crit, const RunOpts& o) {
    auto fam = registry::family(fname);
    CriterionSpec spec{parse_criterion(crit), o.horizon, o.window, o.tail, o.budget};
    spec.validate();
    if (o.member && *o.member >= fam.size()) throw ParseError("member " + std::to_string(*o.member) + " out of range");
    LearnerPtr proto;
    try {
        proto = registry::make_learner(lname, fam);
    } catch (const ConfigurationError& e) {
        std::cout << json{{"family", fname}, {"learner", lname}, {"criterion", crit}, {"verdict", "SKIPPED"}, {"reason", e.what()}}.dump()
                  << "\n";
        return kOk;
    }
    bool failed = false;
    std::string log;
    for (std::size_t i = 0; i < fam.size(); ++i) {
        if (o.member && *o.member != i) continue;
        auto t = run_learner(*proto, fam[i], o.seed, o.horizon);
        Verdict v;
        try {
            v = check(spec, t, i, fam);
        } catch (const ConfigurationError& e) {
            v = Verdict::skipped(e.what());
        }
        failed = failed || v.failed();
        json j{{"family", fname}, {"learner", lname}, {"criterion", to_string(spec.kind)}, {"member", i},
               {"truth", fam[i].to_string()}, {"seed", o.seed}, {"horizon", o.horizon}};
        j.update(v.to_json());
        std::cout << j.dump() << "\n";
        if (!o.transcript_out.empty()) {
            std::istringstream in(t.to_jsonl());
            for (std::string line; std::getline(in, line);) {
                auto r = json::parse(line);
                r["member"] = i;
                log += r.dump() + "\n";
            }
        }
    }
    if (!o.transcript_out.empty()) spill(o.transcript_out, log);
    return failed ? kFail : kOk;
}

int duel(const std::string& adv, const std::string& who, std::uint64_t seed, std::size_t horizon, const std::string& out) {
    DuelResult r;
    try {
        r = run_duel(adv, who, seed, horizon);
    } catch (const ConfigurationError& e) {
        std::cout << json{{"adversary", adv}, {"opponent", who}, {"outcome", "SKIPPED"}, {"reason", e.what()}}.dump() << "\n";
        return kOk;
    }
    auto j = r.to_json();
    std::cout << j.dump(2) << "\n";
    if (!out.empty()) spill(out, j.dump() + "\n");
    return r.refuted() ? kFail : kOk;
}

int reduce(const std::string& gname, const std::string& fname, bool verify, std::size_t horizon,
           const std::vector<std::uint64_t>& seeds, std::size_t member, bool csv) {
    auto fam = registry::family(fname);
    ReductionOperator g;
    try {
        g = registry::make_operator(gname, fam);
    } catch (const ConfigurationError& e) {
        std::cout << json{{"operator", gname}, {"family", fname}, {"verdict", "SKIPPED"}, {"reason", e.what()}}.dump() << "\n";
        return kOk;
    }
    if (verify) {
        auto rep = verify_reduction(g, fam, horizon, seeds);
        auto j = rep.to_json();
        j["verdict"] = rep.pass ? "PASS" : "FAIL";
        std::cout << j.dump(2) << "\n";
        return rep.pass ? kOk : kFail;
    }
    if (member >= fam.size()) throw ParseError("member " + std::to_string(member) + " out of range");
    OperatorTrace t(g, present(fam[member], seeds.front()));
    const auto& out = t.at(horizon - 1);
    if (csv) std::cout << to_csv(out);
    else std::cout << json{{"operator", gname}, {"member", fam[member].to_string()}, {"seed", seeds.front()},
                           {"stages", horizon}, {"output", out.columnar ? json(out.columns) : json(out.flat)}}.dump() << "\n";
    return kOk;
}

int matrix(const std::string& config, const std::string& out) {
    json j;
    try {
        j = json::parse(slurp(config));
    } catch (const json::parse_error& e) {
        throw ParseError(config + ": " + e.what());
    }
    auto rec = run_matrix(MatrixConfig::from_json(j));
    if (!out.empty()) spill(out, records_to_jsonl(rec));
    std::cout << render_table(rec);
    return any_failed(rec) ? kFail : kOk;
}

int report(const std::string& runs) {
    auto rec = records_from_jsonl(slurp(runs));
    std::cout << render_table(rec);
    return any_failed(rec) ? kFail : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learning-in-the-limit laboratory for countable structures"};
    app.require_subcommand(1);

    bool all = false;
    auto* lf = app.add_subcommand("list-families", "Families, and with --all the learners, operators and adversaries");
    lf->add_flag("--all", all, "Also list learners, operators and adversaries");

    std::string fname, lname, crit, gname, adv, config, runs, out;
    std::size_t bound = 8;
    auto* cl = app.add_subcommand("classify", "Σ1 classification of a family");
    cl->add_option("family", fname)->required();
    cl->add_option("--bound", bound, "Witness size bound")->check(CLI::PositiveNumber);

    RunOpts ro;
    std::size_t member = 0;
    auto* rn = app.add_subcommand("run", "Run a learner on every member and check a criterion");
    rn->add_option("family", fname)->required();
    rn->add_option("learner", lname)->required();
    rn->add_option("criterion", crit)->required();
    rn->add_option("--seed", ro.seed);
    rn->add_option("--horizon", ro.horizon)->check(CLI::PositiveNumber);
    rn->add_option("--tail", ro.tail)->check(CLI::PositiveNumber);
    rn->add_option("--window", ro.window)->check(CLI::PositiveNumber);
    rn->add_option("--budget", ro.budget);
    rn->add_option("--member", member, "Only this member code");
    rn->add_option("--transcript", ro.transcript_out, "Write the stage-by-stage transcripts as JSON lines");

    std::uint64_t seed = 0;
    std::size_t horizon = std::size_t(1) << 14;
    auto* du = app.add_subcommand("duel", "Run an adversary against a learner or operator");
    du->add_option("adversary", adv)->required();
    du->add_option("opponent", lname)->required();
    du->add_option("--seed", seed);
    du->add_option("--horizon", horizon, "Stage cap")->check(CLI::PositiveNumber);
    du->add_option("--out", out, "Write the result as one JSON line");

    bool verify = false, csv = false;
    std::size_t rhorizon = 100;
    std::vector<std::uint64_t> seeds{0, 1, 2};
    auto* rd = app.add_subcommand("reduce", "Trace a reduction operator, or verify it on a family");
    rd->add_option("gamma", gname)->required();
    rd->add_option("family", fname)->required();
    rd->add_flag("--verify", verify);
    rd->add_option("--horizon", rhorizon)->check(CLI::PositiveNumber);
    rd->add_option("--seeds", seeds)->delimiter(',');
    rd->add_option("--member", member);
    rd->add_flag("--csv", csv, "Print the output prefix as CSV");

    auto* mx = app.add_subcommand("matrix", "Run an experiment matrix from a JSON config");
    mx->add_option("config", config)->required()->check(CLI::ExistingFile);
    mx->add_option("--out", out, "Write the records as JSON lines");

    auto* rp = app.add_subcommand("report", "Render the table for a JSON-lines run log");
    rp->add_option("runs", runs)->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*lf) return list_families(all);
        if (*cl) return classify(fname, bound);
        if (*rn) {
            if (rn->count("--member")) ro.member = member;
            return run(fname, lname, crit, ro);
        }
        if (*du) return duel(adv, lname, seed, horizon, out);
        if (*rd) return reduce(gname, fname, verify, rhorizon, seeds, member, csv);
        if (*mx) return matrix(config, out);
        if (*rp) return report(runs);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ConfigurationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}
