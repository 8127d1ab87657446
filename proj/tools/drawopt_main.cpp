#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "drawopt/experiments.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        try {
            out.push_back(std::stoi(text.substr(pos, comma - pos)));
        } catch (const std::exception&) {
            throw CLI::ValidationError(std::string(what) + ": not an integer list");
        }
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained group-draw simulation and trade-off analysis"};

    drawopt::ExperimentConfig config;
    std::string scenarios = "all";
    std::string host_policy = "relabel";
    std::string psi_mechanism = "uniform";
    std::string pot_order;

    app.add_option("--instance", config.instance_path,
                   "Path to a JSON tournament instance");
    app.add_option("--experiment", config.experiment,
                   "scenario-sweep | host-policy | frontier | example1-verify")
        ->required()
        ->check(CLI::IsMember({"scenario-sweep", "host-policy", "frontier",
                               "example1-verify"}));
    app.add_option("--scenarios", scenarios,
                   "Scenario indices (comma list) or 'all'");
    app.add_option("--iterations", config.iterations,
                   "Draws per mechanism and scenario");
    app.add_option("--seed", config.seed, "Master random seed");
    app.add_option("--workers", config.workers, "Worker thread count")
        ->check(CLI::PositiveNumber);
    app.add_option("--host-policy", host_policy, "preassign | relabel")
        ->check(CLI::IsMember({"preassign", "relabel"}));
    app.add_option("--pot-order", pot_order,
                   "Draw order of pots as a comma list (default 1,2,...)");
    app.add_option("--psi-mechanism", psi_mechanism,
                   "Conditioning for reported psi: uniform | skip")
        ->check(CLI::IsMember({"uniform", "skip"}));
    app.add_option("--alpha-step", config.alpha_step,
                   "Grid step for the envelope trace");
    app.add_option("--out", config.out_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    if (scenarios != "all")
        config.scenarios = parse_int_list(scenarios, "--scenarios");
    if (!pot_order.empty())
        config.pot_order = parse_int_list(pot_order, "--pot-order");
    config.policy = host_policy == "preassign"
                        ? drawopt::HostPolicy::PreAssign
                        : drawopt::HostPolicy::DrawAndRelabel;
    config.psi_mechanism = psi_mechanism == "skip"
                               ? drawopt::PsiMechanism::Skip
                               : drawopt::PsiMechanism::Uniform;
    if (config.experiment != "example1-verify" && config.instance_path.empty()) {
        std::fprintf(stderr, "--instance is required for this experiment\n");
        return 1;
    }

    try {
        return drawopt::run_experiment(config);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
