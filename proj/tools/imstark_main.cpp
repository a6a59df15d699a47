// Command-line front end: runs one named experiment and writes its CSV
// tables, JSON summary, and plot script into an output directory.
//
// Exit codes: 0 success, 2 configuration error, 3 computation error,
// 4 failed result invariant.

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include <imstark/imstark.hpp>

namespace {

int run_cli(int argc, char** argv) {
    CLI::App app{"imstark: spectra and dissipative dynamics of a lattice with a linear imaginary potential"};
    app.footer(
        "Configuration keys (flat key=value):\n"
        "  lattice.L lattice.J lattice.F lattice.kind   model parameters\n"
        "  grid.*                                       experiment-specific scan grids\n"
        "  time.t_end time.samples                      evolution time grid\n"
        "  tol.classify tol.bisect                      tolerances\n"
        "  out.dir                                      output directory\n"
        "Environment: IMSTARK_THREADS caps worker threads.\n"
        "Run 'imstark list' for the experiment names.");

    std::string experiment;
    std::string config_file;
    std::vector<std::string> overrides;
    std::string out_flag;
    app.add_option("experiment", experiment, "experiment name, or 'list'")->required();
    app.add_option("--config", config_file, "key=value configuration file");
    app.add_option("--set", overrides, "override one key, e.g. --set lattice.L=60 (repeatable)");
    app.add_option("--out", out_flag, "output directory (default: out/<experiment>)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (experiment == "list") {
        std::printf("available experiments:\n");
        for (const imstark::ExperimentInfo& info : imstark::experiment_registry())
            std::printf("  %-17s %s\n", info.name.c_str(), info.description.c_str());
        return 0;
    }

    try {
        imstark::ExperimentSpec spec;
        spec.name = experiment;
        if (!config_file.empty()) spec.config = imstark::ConfigMap::from_file(config_file);
        for (const std::string& kv : overrides) spec.config.set_pair(kv);
        if (!out_flag.empty())
            spec.out_dir = out_flag;
        else if (spec.config.has("out.dir"))
            spec.out_dir = spec.config.get_string("out.dir", "");
        else
            spec.out_dir = std::filesystem::path("out") / experiment;

        const imstark::ResultBundle b = imstark::run(spec);

        std::printf("%s: wrote %zu tables to %s\n", b.experiment.c_str(), b.tables.size(),
                    spec.out_dir.string().c_str());
        bool all_ok = true;
        for (const auto& [name, ok] : b.invariants) {
            std::printf("  %s %s\n", ok ? "pass" : "FAIL", name.c_str());
            if (!ok) all_ok = false;
        }
        if (!all_ok) {
            std::fprintf(stderr, "error: one or more result invariants failed\n");
            return 4;
        }
        return 0;
    } catch (const imstark::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const imstark::InvariantFailure& e) {
        std::fprintf(stderr, "invariant failure: %s\n", e.what());
        return 4;
    } catch (const imstark::ComputationError& e) {
        std::fprintf(stderr, "computation error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
