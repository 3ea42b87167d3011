#include "commands.hpp"
#include "config.hpp"

#include "sxai/error.hpp"

#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

using sxai::cli::RawConfig;
using sxai::cli::RunConfig;

struct Subcommand {
    const char* name;
    const char* help;
    void (*run)(const RunConfig&);
};

constexpr Subcommand kSubcommands[] = {
    {"synth", "generate a planted synthetic dataset", sxai::cli::cmd_synth},
    {"train", "train the LSTM-attention classifier and report held-out skill", sxai::cli::cmd_train},
    {"evaluate", "score a checkpoint on its held-out split", sxai::cli::cmd_evaluate},
    {"explain-global", "SHAP attributions with beeswarm, bar and decision plots", sxai::cli::cmd_explain_global},
    {"explain-local", "LIME explanation of one test window", sxai::cli::cmd_explain_local},
    {"correlate", "correlation matrix and dependence plots", sxai::cli::cmd_correlate},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpretable solar-storm prediction: LSTM-attention model with SHAP and LIME explanations"};
    app.require_subcommand(1, 1);

    RawConfig flag_values;
    std::string config_path;
    std::vector<std::pair<CLI::App*, const Subcommand*>> subs;
    for (const auto& s : kSubcommands) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", config_path, "flat key = value config file; flags override it");
        for (const auto& key : sxai::cli::config_keys()) {
            const std::string name(key.name);
            sub->add_option_function<std::string>(
                "--" + name, [&flag_values, name](const std::string& v) { flag_values[name] = v; },
                std::string(key.help) + " (default: " + std::string(key.default_value) + ")");
        }
        subs.emplace_back(sub, &s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        RawConfig file_values;
        if (!config_path.empty()) file_values = sxai::cli::parse_config_file(config_path);
        RunConfig config = sxai::cli::resolve_config(file_values, flag_values);
        config.config_file = config_path;
        for (const auto& [sub, spec] : subs) {
            if (sub->parsed()) spec->run(config);
        }
        return 0;
    } catch (const sxai::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed JSON input: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
