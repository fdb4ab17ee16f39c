#include "cascade/run.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cascade/errors.hpp"
#include "cascade/pairstate.hpp"

namespace cascade {

namespace {

namespace fs = std::filesystem;

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    out += '"';
    return out;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string optional_number(const std::optional<CriticalPoint>& cp, double CriticalPoint::*field)
{
    return cp ? format_csv_number((*cp).*field) : std::string();
}

nlohmann::json critical_point_json(const CriticalPoint& cp)
{
    nlohmann::json j{{"value", cp.value},
                     {"bracket", {cp.bracket_lo, cp.bracket_hi}},
                     {"resolution", cp.resolution}};
    if (cp.kink) {
        j["kink"] = {{"location", cp.kink->location},
                     {"slope_jump", cp.kink->slope_jump},
                     {"noise_floor", cp.kink->noise_floor},
                     {"fired", cp.kink->fired}};
    }
    if (cp.monotone_probe) j["monotone_probe"] = *cp.monotone_probe;
    return j;
}

} // namespace

std::string format_csv_number(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 9);
    return std::string(buf.data(), res.ptr);
}

std::string sweep_csv(const SweepTable& table)
{
    std::string out = table.axis_name + ",mutual_bits,classical_bits,discord_bits,concurrence,theta_opt_rad,error\n";
    for (const auto& r : table.rows) {
        out += format_csv_number(r.axis_value);
        if (r.error.empty()) {
            for (double v : {r.mutual, r.classical, r.discord, r.concurrence, r.theta}) {
                out += ',';
                out += format_csv_number(v);
            }
            out += ",\n";
        } else {
            out += ",,,,,," + csv_field(r.error) + "\n";
        }
    }
    return out;
}

std::string critical_csv(const std::vector<CriticalRow>& rows, SweepAxis axis)
{
    std::string out = std::string(axis_column(axis)) +
                      ",Tc_K,Td_K,Tc_bracket_lo,Tc_bracket_hi,Td_bracket_lo,Td_bracket_hi,error\n";
    for (const auto& r : rows) {
        out += format_csv_number(r.axis_value);
        for (const std::string& f :
             {optional_number(r.tc, &CriticalPoint::value), optional_number(r.td, &CriticalPoint::value),
              optional_number(r.tc, &CriticalPoint::bracket_lo), optional_number(r.tc, &CriticalPoint::bracket_hi),
              optional_number(r.td, &CriticalPoint::bracket_lo), optional_number(r.td, &CriticalPoint::bracket_hi)}) {
            out += ',';
            out += f;
        }
        out += ',' + csv_field(r.error) + '\n';
    }
    return out;
}

std::string measures_csv(const CorrelationReport& r)
{
    std::string out = "mutual_bits,classical_bits,discord_bits,concurrence,theta_opt_rad,phi_opt_rad,optimizer_evals\n";
    for (double v : {r.mutual_info, r.classical, r.discord, r.concurrence, r.optimal_direction.theta,
                     r.optimal_direction.phi}) {
        out += format_csv_number(v);
        out += ',';
    }
    out += std::to_string(r.optimizer_evals) + '\n';
    return out;
}

RunResult run(const RunConfig& config, std::ostream& log)
{
    const auto started = std::chrono::steady_clock::now();
    RunResult result;

    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec || !fs::is_directory(config.output_dir)) {
        throw Error(ErrorKind::Io, "output directory " + config.output_dir.string() + " is not writable");
    }
    const auto emit = [&](const std::string& name, const std::string& text) {
        const fs::path path = config.output_dir / name;
        write_text(path, text);
        result.outputs.push_back(path);
    };

    nlohmann::json& m = result.manifest;
    m["tool"] = "cascade_discord";
    m["version"] = kVersion;
    m["command"] = to_string(config.command);
    m["config_text"] = format_config(config);
    m["constants"] = {{"hbar_ueV_ns", PhysConstants::hbar},
                      {"kB_ueV_per_K", PhysConstants::kB},
                      {"h_ueV_ns", PhysConstants::h}};
    m["workers"] = config.workers;
    std::size_t failed_points = 0;

    try {
        switch (config.command) {
        case Command::State: {
            emit("rho_pol.txt", format_matrix(polarization_state(config.params).elements()));
            break;
        }
        case Command::Measures: {
            const DensityMatrix rho = config.matrix_input
                                          ? DensityMatrix(Eigen::MatrixXcd(read_matrix_file(*config.matrix_input)))
                                          : polarization_state(config.params).density();
            if (config.matrix_input) m["matrix_input"] = config.matrix_input->string();
            emit("measures.csv", measures_csv(quantum_discord(rho)));
            break;
        }
        case Command::SweepTemperature:
        case Command::SweepDelay: {
            const bool temp = config.command == Command::SweepTemperature;
            const AxisRange& r = temp ? config.temperature : config.delay;
            const SweepTable table = sweep(config.params, temp ? SweepAxis::Temperature : SweepAxis::Delay, r.lo,
                                           r.hi, r.points, config.workers);
            for (const auto& row : table.rows) failed_points += row.error.empty() ? 0 : 1;
            if (const auto sw = first_basis_switch(table)) m["basis_switch_axis_value"] = table.axis_values[*sw];
            emit(temp ? "sweep_temperature.csv" : "sweep_delay.csv", sweep_csv(table));
            break;
        }
        case Command::CriticalVsDelay:
        case Command::CriticalVsFss: {
            const bool delay = config.command == Command::CriticalVsDelay;
            const SweepAxis axis = delay ? SweepAxis::Delay : SweepAxis::Fss;
            const AxisRange& r = delay ? config.delay : config.fss;
            const auto rows = critical_vs(config.params, axis, r.lo, r.hi, r.points, config.workers,
                                          config.tc_range, config.td_range);
            nlohmann::json points = nlohmann::json::array();
            for (const auto& row : rows) {
                failed_points += row.error.empty() ? 0 : 1;
                nlohmann::json p{{"axis_value", row.axis_value}};
                if (row.tc) p["Tc"] = critical_point_json(*row.tc);
                if (row.td) p["Td"] = critical_point_json(*row.td);
                points.push_back(p);
            }
            m["critical_points"] = points;
            emit(delay ? "critical_vs_delay.csv" : "critical_vs_fss.csv", critical_csv(rows, axis));
            break;
        }
        case Command::CalibrateKappa: {
            const KappaCalibration cal = calibrate_kappa(config.params, config.target_Tc, config.kappa_lo,
                                                         config.kappa_hi, config.tc_range);
            m["calibration"] = {{"target_Tc_K", config.target_Tc},
                                {"kappa_ref", cal.kappa_ref},
                                {"achieved_Tc_K", cal.achieved_Tc},
                                {"iterations", cal.iterations}};
            try {
                const KappaCalibration doubled = calibrate_kappa(config.params, 2.0 * config.target_Tc,
                                                                 config.kappa_lo, config.kappa_hi, config.tc_range);
                m["calibration"]["doubled_target_kappa_ref"] = doubled.kappa_ref;
                m["calibration"]["kappa_direction_when_target_doubles"] =
                    doubled.kappa_ref < cal.kappa_ref ? "decreasing" : "increasing";
            } catch (const Error& e) {
                m["calibration"]["doubled_target_error"] = e.what();
            }
            std::array<char, 64> buf{};
            const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), cal.kappa_ref,
                                           std::chars_format::general, 8);
            const std::string snippet = "[dot]\nkappa_ref = " + std::string(buf.data(), res.ptr) + "\n";
            emit("calibration.csv", "target_Tc_K,kappa_ref,achieved_Tc_K\n" + format_csv_number(config.target_Tc) +
                                        "," + format_csv_number(cal.kappa_ref) + "," +
                                        format_csv_number(cal.achieved_Tc) + "\n");
            emit("kappa.ini", snippet);
            log << snippet;
            break;
        }
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Io) throw;
        m["error"] = e.what();
        log << "error: " << e.what() << '\n';
        result.exit_code = kExitPartialFailure;
    }

    if (failed_points > 0) {
        result.exit_code = kExitPartialFailure;
        log << "error: " << failed_points << " point(s) failed; see the error column\n";
    }
    m["failed_points"] = failed_points;
    m["exit_code"] = result.exit_code;
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& p : result.outputs) outputs.push_back(p.filename().string());
    m["outputs"] = outputs;
    m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    const fs::path manifest_path = config.output_dir / "manifest.json";
    write_text(manifest_path, m.dump(2) + "\n");
    result.outputs.push_back(manifest_path);
    return result;
}

RunConfig config_from_manifest(const fs::path& manifest_path)
{
    std::ifstream in(manifest_path);
    if (!in) throw Error(ErrorKind::Io, "cannot open manifest " + manifest_path.string());
    nlohmann::json m;
    try {
        in >> m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, "manifest " + manifest_path.string() + ": " + e.what());
    }
    if (!m.contains("command") || !m.contains("config_text")) {
        throw Error(ErrorKind::Parse, "manifest lacks command or config_text");
    }
    const auto command = parse_command(m["command"].get<std::string>());
    if (!command) throw Error(ErrorKind::Parse, "manifest names an unknown command");
    RunConfig config = parse_config_text(m["config_text"].get<std::string>());
    config.command = *command;
    if (m.contains("matrix_input")) config.matrix_input = m["matrix_input"].get<std::string>();
    return config;
}

} // namespace cascade
