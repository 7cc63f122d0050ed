#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "coachsim/config_file.hpp"
#include "coachsim/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

struct RunArgs {
    std::string preset;
    std::string config_path;
    std::string out_dir;
    std::string format = "csv";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int trials = 0;
    bool serial = false;
};

int do_run(const RunArgs& args) {
    if (args.format != "csv") throw coachsim::ConfigError("unsupported format: " + args.format);
    if (args.preset.empty() == args.config_path.empty())
        throw coachsim::ConfigError("exactly one of --preset or --config is required");

    coachsim::ExperimentPreset preset = args.preset.empty()
                                            ? coachsim::load_config(args.config_path)
                                            : coachsim::make_preset(args.preset);
    if (args.seed_set) preset.seed = args.seed;
    if (args.trials > 0) preset.trials = args.trials;

    std::error_code ec;
    std::filesystem::create_directories(args.out_dir, ec);
    if (ec) throw coachsim::IoError("cannot create output directory: " + args.out_dir);

    const auto output = coachsim::run_preset(preset, !args.serial);
    std::filesystem::path file =
        std::filesystem::path(args.out_dir) /
        (std::filesystem::path(preset.name).filename().string() + ".csv");
    coachsim::write_text_file(file.string(), coachsim::to_csv(output));
    std::cout << file.string() << ": " << output.lines.size() << " rows ("
              << preset.trials << " trials, seed " << preset.seed << ")\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Repair-bandwidth experiments for erasure-coded cellular caching"};
    app.require_subcommand(1);

    RunArgs args;
    auto* run = app.add_subcommand("run", "Run an experiment preset or config file and emit CSV");
    std::string preset_help = "Built-in preset (";
    for (size_t i = 0; i < coachsim::preset_names().size(); ++i)
        preset_help += (i ? " | " : "") + coachsim::preset_names()[i];
    preset_help += ")";
    run->add_option("--preset", args.preset, preset_help);
    run->add_option("--config", args.config_path, "Experiment config file");
    run->add_option("--out", args.out_dir, "Output directory")->required();
    run->add_option("--seed", args.seed, "Root RNG seed override")
        ->each([&args](const std::string&) { args.seed_set = true; });
    run->add_option("--trials", args.trials, "Trial count override");
    run->add_option("--format", args.format, "Output format (csv)");
    run->add_flag("--serial", args.serial, "Disable the parallel trial runner");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        return do_run(args);
    } catch (const coachsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const coachsim::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
