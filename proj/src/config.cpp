#include "cascade/config.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

struct CommandName {
    Command command;
    const char* name;
};

constexpr std::array<CommandName, 7> kCommands{{
    {Command::State, "state"},
    {Command::Measures, "measures"},
    {Command::SweepTemperature, "sweep-temperature"},
    {Command::SweepDelay, "sweep-delay"},
    {Command::CriticalVsDelay, "critical-vs-delay"},
    {Command::CriticalVsFss, "critical-vs-fss"},
    {Command::CalibrateKappa, "calibrate-kappa"},
}};

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

double to_double(const std::string& key, const std::string& value)
{
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw Error(ErrorKind::Validation, key + ": expected a number, got '" + value + "'");
    }
    return v;
}

std::size_t to_count(const std::string& key, const std::string& value)
{
    std::size_t v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw Error(ErrorKind::Validation, key + ": expected a non-negative integer, got '" + value + "'");
    }
    return v;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

Setter number(double RunConfig::*field)
{
    return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = to_double(k, v); };
}

template <typename Member>
Setter nested(Member RunConfig::*outer, double Member::*inner)
{
    return [outer, inner](RunConfig& c, const std::string& k, const std::string& v) {
        (c.*outer).*inner = to_double(k, v);
    };
}

Setter nested_count(AxisRange RunConfig::*outer)
{
    return [outer](RunConfig& c, const std::string& k, const std::string& v) { (c.*outer).points = to_count(k, v); };
}

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"dot.S", nested(&RunConfig::params, &DotParams::S)},
        {"dot.T", nested(&RunConfig::params, &DotParams::T)},
        {"dot.gammaX_H", nested(&RunConfig::params, &DotParams::gammaX_H)},
        {"dot.gammaX_V", nested(&RunConfig::params, &DotParams::gammaX_V)},
        {"dot.gammaXX_H", nested(&RunConfig::params, &DotParams::gammaXX_H)},
        {"dot.gammaXX_V", nested(&RunConfig::params, &DotParams::gammaXX_V)},
        {"dot.kappa_ref", nested(&RunConfig::params, &DotParams::kappa_ref)},
        {"dot.S_ref", nested(&RunConfig::params, &DotParams::S_ref)},
        {"gate.tau_g", nested(&RunConfig::params, &DotParams::tau_g)},
        {"gate.w_g", nested(&RunConfig::params, &DotParams::w_g)},
        {"mixture.eta", nested(&RunConfig::params, &DotParams::eta)},
        {"mixture.g", nested(&RunConfig::params, &DotParams::g)},
        {"sweep.T_lo", nested(&RunConfig::temperature, &AxisRange::lo)},
        {"sweep.T_hi", nested(&RunConfig::temperature, &AxisRange::hi)},
        {"sweep.T_points", nested_count(&RunConfig::temperature)},
        {"sweep.delay_lo", nested(&RunConfig::delay, &AxisRange::lo)},
        {"sweep.delay_hi", nested(&RunConfig::delay, &AxisRange::hi)},
        {"sweep.delay_points", nested_count(&RunConfig::delay)},
        {"sweep.fss_lo", nested(&RunConfig::fss, &AxisRange::lo)},
        {"sweep.fss_hi", nested(&RunConfig::fss, &AxisRange::hi)},
        {"sweep.fss_points", nested_count(&RunConfig::fss)},
        {"sweep.tc_lo", nested(&RunConfig::tc_range, &FinderRange::lo)},
        {"sweep.tc_hi", nested(&RunConfig::tc_range, &FinderRange::hi)},
        {"sweep.td_lo", nested(&RunConfig::td_range, &FinderRange::lo)},
        {"sweep.td_hi", nested(&RunConfig::td_range, &FinderRange::hi)},
        {"sweep.resolution",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.tc_range.resolution = c.td_range.resolution = to_double(k, v);
         }},
        {"sweep.target_Tc", number(&RunConfig::target_Tc)},
        {"sweep.kappa_lo", number(&RunConfig::kappa_lo)},
        {"sweep.kappa_hi", number(&RunConfig::kappa_hi)},
        {"output.dir", [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
        {"output.workers",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.workers = to_count(k, v); }},
    };
    return table;
}

void assign(RunConfig& config, const std::string& key, const std::string& value, const std::string& where)
{
    const auto it = setters().find(key);
    if (it == setters().end()) {
        throw Error(ErrorKind::Parse, where + "unknown key '" + key + "'");
    }
    it->second(config, key.substr(key.find('.') + 1), value);
}

void validate_axis(const AxisRange& r, const char* name)
{
    if (!(r.lo < r.hi)) throw Error(ErrorKind::Validation, std::string(name) + "_lo must be < " + name + "_hi");
    if (r.points < 2) throw Error(ErrorKind::Validation, std::string(name) + "_points must be >= 2");
}

void validate(const RunConfig& c)
{
    c.params.validate();
    validate_axis(c.temperature, "T");
    validate_axis(c.delay, "delay");
    validate_axis(c.fss, "fss");
    if (c.temperature.lo < 0.0) throw Error(ErrorKind::Validation, "T_lo must be >= 0");
    if (c.delay.lo < 0.0) throw Error(ErrorKind::Validation, "delay_lo must be >= 0");
    if (!(c.fss.lo > 0.0)) throw Error(ErrorKind::Validation, "fss_lo must be > 0");
    for (const auto& [r, name] : {std::pair{c.tc_range, "tc"}, std::pair{c.td_range, "td"}}) {
        if (!(r.lo >= 0.0 && r.lo < r.hi)) {
            throw Error(ErrorKind::Validation, std::string(name) + "_lo must be >= 0 and < " + name + "_hi");
        }
        if (!(r.resolution > 0.0)) throw Error(ErrorKind::Validation, "resolution must be > 0");
    }
    if (!(c.kappa_lo > 0.0 && c.kappa_lo < c.kappa_hi)) {
        throw Error(ErrorKind::Validation, "kappa_lo must be > 0 and < kappa_hi");
    }
    if (c.workers < 1) throw Error(ErrorKind::Validation, "workers must be >= 1");
    if (c.output_dir.empty()) throw Error(ErrorKind::Validation, "dir must not be empty");
}

} // namespace

const char* to_string(Command command)
{
    for (const auto& c : kCommands)
        if (c.command == command) return c.name;
    return "unknown";
}

std::optional<Command> parse_command(std::string_view name)
{
    for (const auto& c : kCommands)
        if (name == c.name) return c.command;
    return std::nullopt;
}

std::size_t default_workers()
{
    if (const char* env = std::getenv("CASCADE_DISCORD_THREADS")) {
        std::size_t n = 0;
        const std::string_view s(env);
        const auto res = std::from_chars(s.data(), s.data() + s.size(), n);
        if (res.ec == std::errc() && res.ptr == s.data() + s.size() && n > 0) return n;
        throw Error(ErrorKind::Validation, "CASCADE_DISCORD_THREADS must be a positive integer, got '" +
                                               std::string(s) + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

RunConfig parse_config_text(std::string_view text, const std::vector<Override>& overrides)
{
    RunConfig config;
    config.workers = default_workers();

    std::istringstream in{std::string(text)};
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        std::string line = raw;
        if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw Error(ErrorKind::Parse, where + "unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section != "dot" && section != "gate" && section != "mixture" && section != "sweep" &&
                section != "output") {
                throw Error(ErrorKind::Parse, where + "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::Parse, where + "expected key = value");
        if (section.empty()) throw Error(ErrorKind::Parse, where + "key outside of a section");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty() || value.empty()) throw Error(ErrorKind::Parse, where + "empty key or value");
        assign(config, section + "." + key, value, where);
    }

    for (const auto& [key, value] : overrides) assign(config, key, value, "override: ");
    validate(config);
    return config;
}

RunConfig parse_config(const std::filesystem::path& path, const std::vector<Override>& overrides)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), overrides);
}

std::string format_config(const RunConfig& c)
{
    std::ostringstream os;
    const auto kv = [&](const char* key, double v) { os << key << " = " << format_double(v) << '\n'; };
    const auto kn = [&](const char* key, std::size_t v) { os << key << " = " << v << '\n'; };
    const DotParams& p = c.params;
    os << "[dot]\n";
    kv("S", p.S);
    kv("T", p.T);
    kv("gammaX_H", p.gammaX_H);
    kv("gammaX_V", p.gammaX_V);
    kv("gammaXX_H", p.gammaXX_H);
    kv("gammaXX_V", p.gammaXX_V);
    kv("kappa_ref", p.kappa_ref);
    kv("S_ref", p.S_ref);
    os << "\n[gate]\n";
    kv("tau_g", p.tau_g);
    kv("w_g", p.w_g);
    os << "\n[mixture]\n";
    kv("eta", p.eta);
    kv("g", p.g);
    os << "\n[sweep]\n";
    kv("T_lo", c.temperature.lo);
    kv("T_hi", c.temperature.hi);
    kn("T_points", c.temperature.points);
    kv("delay_lo", c.delay.lo);
    kv("delay_hi", c.delay.hi);
    kn("delay_points", c.delay.points);
    kv("fss_lo", c.fss.lo);
    kv("fss_hi", c.fss.hi);
    kn("fss_points", c.fss.points);
    kv("tc_lo", c.tc_range.lo);
    kv("tc_hi", c.tc_range.hi);
    kv("td_lo", c.td_range.lo);
    kv("td_hi", c.td_range.hi);
    kv("resolution", c.tc_range.resolution);
    kv("target_Tc", c.target_Tc);
    kv("kappa_lo", c.kappa_lo);
    kv("kappa_hi", c.kappa_hi);
    os << "\n[output]\n";
    os << "dir = " << c.output_dir.string() << '\n';
    kn("workers", c.workers);
    return os.str();
}

} // namespace cascade
