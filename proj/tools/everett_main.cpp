#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "everett/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitObstruction = 3;

void add_command(CLI::App& app, everett::ExperimentConfig& config,
                 everett::ExperimentConfig::Command command, const std::string& description,
                 bool& selected_any) {
    CLI::App* sub = app.add_subcommand(everett::command_name(command), description);
    sub->fallthrough();
    sub->callback([&config, command, &selected_any] {
        config.command = command;
        selected_any = true;
    });
}

int write_output(const everett::Report& report, const everett::ExperimentConfig& config) {
    const std::string bytes = everett::render(report, config.format);
    for (const std::string& warning : report.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    if (config.out_path.empty()) {
        std::cout << bytes;
        return kExitOk;
    }
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output path " << config.out_path << "\n";
        return kExitConfig;
    }
    out << bytes;
    return out.good() ? kExitOk : kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    using Config = everett::ExperimentConfig;
    Config config;
    bool selected = false;
    std::string format = "json";

    CLI::App app{"Branching-measurement experiments: Everett measures, count-class "
                 "statistics, frequency asymptotics, and cat-observation operators"};
    app.require_subcommand(1);

    add_command(app, config, Config::Command::born, "modal classes, typicality and variance floors over an N sweep", selected);
    add_command(app, config, Config::Command::classes, "count-class table with exact multiplicities and measures", selected);
    add_command(app, config, Config::Command::residual, "remainder measure 1 - m(modal class) over an N sweep", selected);
    add_command(app, config, Config::Command::cat, "observed-superposition joint state and record measures", selected);
    add_command(app, config, Config::Command::complement, "superposition-observer matrix and its action on definite states", selected);
    add_command(app, config, Config::Command::invariance, "record measures under random object-basis rotations", selected);

    app.add_option("--coeffs", config.coeffs,
                   "outcome measures |C_i|^2, comma separated (renormalized on load)")
        ->delimiter(',');
    app.add_option("--n", config.n, "measurement count / sweep endpoint / trial count");
    app.add_option("--epsilon", config.epsilon, "frequency deviation tolerance in (0, 1]");
    app.add_option("--a-sq", config.a_sq, "cat amplitude measure |a|^2, in (0, 1)");
    app.add_option("--seed", config.seed, "seed for random rotations");
    app.add_option("--format", format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", config.out_path, "output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    config.format = format == "csv" ? Config::Format::csv : Config::Format::json;

    try {
        const everett::Report report = everett::run_experiment(config);
        return write_output(report, config);
    } catch (const everett::ObstructionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitObstruction;
    } catch (const everett::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const everett::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
