// cascade_discord — batch front end for the biexciton-cascade correlation pipeline.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cascade/config.hpp"
#include "cascade/errors.hpp"
#include "cascade/run.hpp"

namespace {

const char* kCommandHelp =
    "state | measures | sweep-temperature | sweep-delay | critical-vs-delay | "
    "critical-vs-fss | calibrate-kappa | replay";

std::string to_text(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Polarization correlations of quantum-dot cascade photon pairs"};
    std::string command_name;
    std::string input;
    std::string config_path;
    std::vector<std::string> sets;
    std::optional<double> noise, eta, fss, temperature, delay, width, kappa, lo, hi, resolution, target;
    std::optional<std::size_t> points, workers;
    std::optional<std::string> out_dir, matrix;

    app.add_option("command", command_name, kCommandHelp)->required();
    app.add_option("input", input, "manifest.json for `replay`");
    app.add_option("-c,--config", config_path, "key = value config file");
    app.add_option("--set", sets, "override as section.key=value (repeatable)");
    app.add_option("--noise", noise, "background-noise fraction g");
    app.add_option("--eta", eta, "indistinguishable fraction");
    app.add_option("--fss", fss, "fine structure splitting S, ueV");
    app.add_option("--temperature", temperature, "lattice temperature, K");
    app.add_option("--delay", delay, "gate delay tau_g, ns");
    app.add_option("--width", width, "gate width w_g, ns");
    app.add_option("--kappa", kappa, "phonon coupling kappa_ref, 1/ns");
    app.add_option("--lo", lo, "axis lower bound for sweeps");
    app.add_option("--hi", hi, "axis upper bound for sweeps");
    app.add_option("--points", points, "axis point count for sweeps");
    app.add_option("--resolution", resolution, "finder resolution, K");
    app.add_option("--target", target, "target T_c for calibrate-kappa, K");
    app.add_option("--matrix", matrix, "evaluate `measures` on a matrix file");
    app.add_option("-o,--out", out_dir, "output directory");
    app.add_option("-j,--workers", workers, "worker threads (default: CASCADE_DISCORD_THREADS or all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cascade::kExitOk : cascade::kExitUsage;
    }

    try {
        cascade::RunConfig config;
        if (command_name == "replay") {
            if (input.empty()) {
                std::cerr << "error: replay needs a manifest path\n";
                return cascade::kExitUsage;
            }
            config = cascade::config_from_manifest(input);
            if (out_dir) config.output_dir = *out_dir;
            if (workers) config.workers = *workers;
        } else {
            const auto command = cascade::parse_command(command_name);
            if (!command) {
                std::cerr << "error: unknown command '" << command_name << "' (expected " << kCommandHelp << ")\n";
                return cascade::kExitUsage;
            }

            std::vector<cascade::Override> overrides;
            for (const auto& s : sets) {
                const auto eq = s.find('=');
                if (eq == std::string::npos) {
                    std::cerr << "error: --set expects section.key=value, got '" << s << "'\n";
                    return cascade::kExitUsage;
                }
                overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
            }
            const auto put = [&](const char* key, const std::optional<double>& v) {
                if (v) overrides.emplace_back(key, to_text(*v));
            };
            put("mixture.g", noise);
            put("mixture.eta", eta);
            put("dot.S", fss);
            put("dot.T", temperature);
            put("gate.tau_g", delay);
            put("gate.w_g", width);
            put("dot.kappa_ref", kappa);
            put("sweep.resolution", resolution);
            put("sweep.target_Tc", target);

            const char* axis = nullptr;
            switch (*command) {
            case cascade::Command::SweepTemperature: axis = "sweep.T"; break;
            case cascade::Command::SweepDelay:
            case cascade::Command::CriticalVsDelay: axis = "sweep.delay"; break;
            case cascade::Command::CriticalVsFss: axis = "sweep.fss"; break;
            case cascade::Command::CalibrateKappa: axis = "sweep.kappa"; break;
            default: break;
            }
            if ((lo || hi || points) && !axis) {
                std::cerr << "error: --lo/--hi/--points do not apply to " << command_name << '\n';
                return cascade::kExitUsage;
            }
            if (axis) {
                put((std::string(axis) + "_lo").c_str(), lo);
                put((std::string(axis) + "_hi").c_str(), hi);
                if (points) {
                    if (*command == cascade::Command::CalibrateKappa) {
                        std::cerr << "error: --points does not apply to calibrate-kappa\n";
                        return cascade::kExitUsage;
                    }
                    overrides.emplace_back(std::string(axis) + "_points", std::to_string(*points));
                }
            }
            if (out_dir) overrides.emplace_back("output.dir", *out_dir);
            if (workers) overrides.emplace_back("output.workers", std::to_string(*workers));

            config = config_path.empty() ? cascade::parse_config_text("", overrides)
                                         : cascade::parse_config(config_path, overrides);
            config.command = *command;
            if (matrix) config.matrix_input = *matrix;
        }

        const cascade::RunResult result = cascade::run(config, std::cout);
        for (const auto& p : result.outputs) std::cerr << "wrote " << p.string() << '\n';
        return result.exit_code;
    } catch (const cascade::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cascade::kExitUsage;
    }
}
