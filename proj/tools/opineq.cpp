#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opineq/json_io.hpp"

namespace {

using namespace opineq;

// exit codes: 0 claim satisfied, 1 violation found, 2 usage/config error,
// 3 hypothesis violation
constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitHypothesis = 3;

std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> dims;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) dims.push_back(std::stoi(token));
    return dims;
}

Interval parse_interval(const std::string& text) {
    const auto pos = text.find(',');
    if (pos == std::string::npos) throw BadParameter("interval must look like LO,HI");
    return Interval(std::stod(text.substr(0, pos)), std::stod(text.substr(pos + 1)));
}

int cmd_check(const std::string& claim_flag, const std::string& instance_path, bool as_json) {
    const io::json j = io::parse_file(instance_path);
    std::string claim_from_file;
    Instance inst = io::instance_from_json(j, &claim_from_file);
    const std::string claim = claim_flag.empty() ? claim_from_file : claim_flag;
    if (claim.empty()) {
        std::cerr << "no claim given: pass --claim or tag the instance file\n";
        return kExitUsage;
    }
    const TermBreakdown b = evaluate_claim(claim, inst);
    if (as_json)
        std::cout << io::breakdown_to_json(b).dump(2) << "\n";
    else
        std::cout << io::breakdown_pretty(b);
    return is_violation(b) ? kExitViolation : kExitOk;
}

int cmd_trace(const std::string& instance_path, bool as_json) {
    const io::json j = io::parse_file(instance_path);
    std::string claim_from_file;
    Instance inst = io::instance_from_json(j, &claim_from_file);
    const StepTrace t = trace_popoviciu(inst);
    if (as_json)
        std::cout << io::trace_to_json(t).dump(2) << "\n";
    else
        std::cout << io::trace_pretty(t);
    return kExitOk;
}

int cmd_campaign(const CampaignConfig& cfg, const std::string& out_path,
                 const std::string& csv_path) {
    const CampaignReport report = run_campaign(cfg);
    if (!out_path.empty()) io::write_file(out_path, io::report_to_json(report));
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw Error("cannot write file: " + csv_path);
        csv << campaign_csv(report);
    }
    std::cout << io::campaign_summary_line(report) << "\n";
    std::cerr << "wall time " << report.wall_seconds << " s\n";
    return report.verdict.violations > 0 ? kExitViolation : kExitOk;
}

int cmd_search(const std::string& claim_flag, const std::string& start_path, int budget,
               uint64_t seed, const std::string& out_path) {
    const io::json j = io::parse_file(start_path);
    std::string claim_from_file;
    Instance start = io::instance_from_json(j, &claim_from_file);
    const std::string claim = claim_flag.empty() ? claim_from_file : claim_flag;
    if (claim.empty()) {
        std::cerr << "no claim given: pass --claim or tag the start file\n";
        return kExitUsage;
    }
    const Instance refined = refine_counterexample(claim, start, budget, seed);
    const TermBreakdown b = evaluate_claim(claim, refined);
    if (!out_path.empty()) io::write_file(out_path, io::instance_to_json(refined, claim));
    std::cout << "claim=" << claim << " refined_gap=" << b.gap << "\n";
    return is_violation(b) ? kExitViolation : kExitOk;
}

int cmd_list_claims() {
    for (const auto& c : list_claims()) {
        std::cout << std::left << std::setw(14) << c.id << std::setw(38) << c.source
                  << c.hypothesis;
        if (!c.notes.empty()) std::cout << "  -- " << c.notes;
        std::cout << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for operator convexity-type inequalities"};
    app.require_subcommand(1);

    std::string claim, instance_path, out_path, csv_path, start_path;
    std::string dims_text = "1,2,4", map_kind = "random_kraus:3", f_spec = "pow:2",
                interval_text = "0,3";
    bool as_json = false, pretty = false;
    int trials = 0, budget = 1000;
    uint64_t seed = 0;

    auto* check = app.add_subcommand("check", "evaluate a claim on one instance");
    check->add_option("--claim", claim, "claim id (defaults to the file's tag)");
    check->add_option("--instance", instance_path, "instance JSON file")->required();
    check->add_flag("--json", as_json, "print the breakdown as JSON");
    check->add_flag("--pretty", pretty, "print the breakdown as text (default)");

    auto* trace = app.add_subcommand("trace", "replay the THM2.1 proof chain on one instance");
    trace->add_option("--instance", instance_path, "instance JSON file")->required();
    trace->add_flag("--json", as_json, "print the trace as JSON");

    auto* campaign = app.add_subcommand("campaign", "run a randomized verification campaign");
    campaign->add_option("--claim", claim, "claim id")->required();
    campaign->add_option("--trials", trials, "number of trials")->required();
    campaign->add_option("--dims", dims_text, "comma list of operator dimensions");
    campaign->add_option("--map", map_kind,
                         "identity|unitary|pinching|trace_average|random_kraus:m|compression|family:k");
    campaign->add_option("--f", f_spec, "function spec, e.g. pow:2, abs, expc");
    campaign->add_option("--interval", interval_text, "spectrum window LO,HI");
    campaign->add_option("--seed", seed, "master seed");
    campaign->add_option("--out", out_path, "write the report JSON here");
    campaign->add_option("--csv", csv_path, "write per-trial rows as CSV here");

    auto* search = app.add_subcommand("search", "refine a counterexample by local search");
    search->add_option("--claim", claim, "claim id (defaults to the file's tag)");
    search->add_option("--start", start_path, "starting instance JSON file")->required();
    search->add_option("--budget", budget, "evaluation budget");
    search->add_option("--seed", seed, "search seed");
    search->add_option("--out", out_path, "write the refined instance here");

    auto* list = app.add_subcommand("list-claims", "print the claim registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (check->parsed()) return cmd_check(claim, instance_path, as_json && !pretty);
        if (trace->parsed()) return cmd_trace(instance_path, as_json);
        if (campaign->parsed()) {
            CampaignConfig cfg;
            cfg.claim_id = claim;
            cfg.trials = trials;
            cfg.dims = parse_dims(dims_text);
            cfg.map_kind = map_kind;
            cfg.function_spec = f_spec;
            cfg.interval = parse_interval(interval_text);
            cfg.master_seed = seed;
            return cmd_campaign(cfg, out_path, csv_path);
        }
        if (search->parsed()) return cmd_search(claim, start_path, budget, seed, out_path);
        if (list->parsed()) return cmd_list_claims();
    } catch (const HypothesisViolation& e) {
        std::cerr << e.what() << "\n";
        return kExitHypothesis;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
