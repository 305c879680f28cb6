#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spinsc/config.hpp"
#include "spinsc/errors.hpp"
#include "spinsc/harness.hpp"

namespace {

const char* describe(const std::string& sub) {
    if (sub == "contours") return "energy-delay grid of gate error rates";
    if (sub == "fp") return "Fokker-Planck error rates at (E_b, i, t_g) points";
    if (sub == "llg") return "stochastic LLG Monte Carlo against Fokker-Planck";
    if (sub == "shape") return "error PMFs of the 15-bit RCA before and after delay shaping";
    if (sub == "fuse-check") return "brute-force check of the fusion rule";
    return "SVM accuracy and energy sweep for serial, N-MR and Shannon architectures";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinsc: statistical error compensation experiments for spin-logic circuits"};
    app.require_subcommand(1, 1);

    std::string config_path, out_dir, format;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    for (const auto& name : spinsc::subcommands()) {
        CLI::App* sub = app.add_subcommand(name, describe(name));
        sub->add_option("--config", config_path, "experiment config (TOML-style)")->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "seed; overrides [run] seed");
        sub->add_option("--trials", trials, "Monte Carlo trials; overrides the config")->check(CLI::PositiveNumber);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--format", format, "data file format")->check(CLI::IsMember({"csv", "json"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    spinsc::RunRequest req;
    req.subcommand = app.get_subcommands().front()->get_name();
    const CLI::App* sub = app.get_subcommands().front();
    try {
        if (!config_path.empty()) {
            req.config = spinsc::Config::load(config_path);
            req.config_dir = std::filesystem::path(config_path).parent_path().string();
        }
        if (sub->count("--seed")) req.seed = seed;
        if (sub->count("--trials")) req.trials = trials;
        if (sub->count("--out")) req.out_dir = out_dir;
        if (sub->count("--format")) req.format = format == "json" ? spinsc::OutputFormat::Json : spinsc::OutputFormat::Csv;

        const spinsc::RunReport r = spinsc::run(req, &std::cerr);
        for (const auto& [k, v] : r.summary) std::cout << k << " = " << v << "\n";
        return 0;
    } catch (const spinsc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
