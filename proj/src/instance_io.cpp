#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "drawopt/model.hpp"

namespace drawopt {

// Instance files are JSON:
// {
//   "name": "...", "group_count": N, "pot_count": M,
//   "group_labels": ["A", ...],
//   "teams": [{"name": "...", "pot": 1,
//              "confederations": {"UEFA": 1.0}, "host": true}, ...],
//   "psi_excluded_pairs": [["Team X", "Team Y"], ...]   (optional)
// }
// A team's confederation entry maps each possible confederation to its
// probability; settled teams have a single entry with probability 1.
// psi_excluded_pairs lists team pairs left out of the attractiveness score.
DrawInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    nlohmann::json j;
    in >> j;

    DrawInstance inst;
    inst.name = j.at("name").get<std::string>();
    inst.group_count = j.at("group_count").get<int>();
    inst.pot_count = j.at("pot_count").get<int>();
    inst.group_labels = j.at("group_labels").get<std::vector<std::string>>();

    for (const auto& jt : j.at("teams")) {
        Team t;
        t.name = jt.at("name").get<std::string>();
        t.pot = jt.at("pot").get<int>();
        t.is_host = jt.value("host", false);
        for (const auto& [code, prob] : jt.at("confederations").items()) {
            t.constraint_confeds.push_back(code);
            t.confed_distribution[code] = prob.get<double>();
        }
        inst.teams.push_back(std::move(t));
    }

    for (const auto& jp : j.value("psi_excluded_pairs", nlohmann::json::array())) {
        auto names = jp.get<std::vector<std::string>>();
        if (names.size() != 2)
            throw std::runtime_error("psi_excluded_pairs entries must name two teams");
        inst.psi_excluded_pairs.emplace_back(inst.team_index(names[0]),
                                             inst.team_index(names[1]));
    }

    auto errors = validate_instance(inst);
    if (!errors.empty())
        throw std::runtime_error("invalid instance " + path + ": " + errors.front());
    return inst;
}

}  // namespace drawopt
