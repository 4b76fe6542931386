#include <CLI11.hpp>
#include <string>

#include "hq/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Neumann solver for Hessian-quotient-type equations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool quiet = false;
    bool have_out = false;
    bool have_seed = false;

    for (const char* name : {"solve", "verify", "sweep"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("config", config_path, "problem config file")->required();
        sub->add_option("--out", out_dir, "output directory")
            ->each([&](const std::string&) { have_out = true; });
        sub->add_option("--seed", seed, "sampler seed")
            ->each([&](const std::string&) { have_seed = true; });
        sub->add_flag("--quiet", quiet, "suppress the summary lines");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    hq::cli::CliFlags flags;
    if (have_out) flags.out_dir = out_dir;
    if (have_seed) flags.seed = seed;
    flags.quiet = quiet;

    return hq::cli::run(app.get_subcommands().front()->get_name(), config_path, flags);
}
