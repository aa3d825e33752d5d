#include "monwalk_app/cli.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "monwalk/errors.hpp"
#include "monwalk_app/commands.hpp"

#ifndef MONWALK_VERSION
#define MONWALK_VERSION "0.0.0"
#endif

namespace monwalk::app {

namespace {

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    bool any = false;
    for (char c : text) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
            any = true;
        } else if (c != ' ' && c != '\t') {
            cur.push_back(c);
        }
    }
    if (any || !cur.empty()) out.push_back(cur);
    return out;
}

template <class T>
T parse_number(const std::string& s, const std::string& field) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError(field, "cannot parse '" + s + "'");
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
    return v;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& field) {
    std::vector<T> out;
    for (const auto& s : split(text)) out.push_back(parse_number<T>(s, field));
    return out;
}

// Raw option text for one subcommand; lists stay strings until the command is known.
struct RawOptions {
    std::optional<std::string> n, alpha, tau, detector, reset_r;
    int init = 0;
    std::optional<std::int64_t> steps;
    std::int64_t stride = 1;
    double target_pdet = 0.9;
    std::int64_t step_cap = 1'000'000;
    std::string out = ".";
    int threads = 1;
    std::string mode;
    bool exact = false, perturbative = false, both = false;
    double bin_width = 1.0;
    double t_ref = 1e4;
    double margin = 0.1;
};

void add_common(CLI::App* sub, RawOptions& o) {
    sub->add_option("--n", o.n, "lattice sizes, comma separated");
    sub->add_option("--alpha", o.alpha, "hopping exponents or 'nn', comma separated");
    sub->add_option("--tau", o.tau, "measurement periods, comma separated");
    sub->add_option("--detector", o.detector, "detector sites, comma separated");
    sub->add_option("--init", o.init, "initial site")->capture_default_str();
    sub->add_option("--steps", o.steps, "number of measurements (default t_max = 2e4)");
    sub->add_option("--stride", o.stride, "record every k-th step")->capture_default_str();
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--threads", o.threads, "worker threads, 0 for all cores")->capture_default_str();
}

RunManifest build_manifest(const std::string& command, const RawOptions& o) {
    RunManifest m;
    m.command = command;
    m.version = MONWALK_VERSION;
    if (o.n) m.N = parse_list<int>(*o.n, "n");
    if (o.alpha)
        for (const auto& s : split(*o.alpha)) m.alpha.push_back(AlphaSpec::parse(s));
    if (o.tau) m.tau = parse_list<double>(*o.tau, "tau");
    if (o.detector) m.D = parse_list<int>(*o.detector, "detector");
    if (o.reset_r) m.reset_r = parse_list<std::int64_t>(*o.reset_r, "reset-r");
    // explicitly empty axes must stay empty so validate() reports them
    const bool empty_n = o.n && m.N.empty(), empty_a = o.alpha && m.alpha.empty();
    const bool empty_t = o.tau && m.tau.empty(), empty_d = o.detector && m.D.empty();
    apply_command_defaults(m);
    if (empty_n) m.N.clear();
    if (empty_a) m.alpha.clear();
    if (empty_t) m.tau.clear();
    if (empty_d) m.D.clear();

    m.l = o.init;
    m.steps = o.steps;
    m.record_stride = o.stride;
    m.target_pdet = o.target_pdet;
    m.step_cap = o.step_cap;
    m.out = o.out;
    m.threads = o.threads;
    m.bin_width = o.bin_width;
    m.t_ref = o.t_ref;
    m.margin = o.margin;
    if (command == "spectrum") {
        if (o.exact + o.perturbative + o.both + !o.mode.empty() > 1)
            throw ConfigError("mode", "choose one of --mode, --exact, --perturbative, --both");
        if (!o.mode.empty()) m.mode = parse_mode(o.mode);
        if (o.exact) m.mode = SpectrumMode::Exact;
        if (o.perturbative) m.mode = SpectrumMode::Perturbative;
        if (o.both) m.mode = SpectrumMode::Both;
    }
    m.validate();
    return m;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stroboscopically monitored quantum walks on long-range rings", "monwalk"};
    app.set_version_flag("--version", std::string(MONWALK_VERSION));
    app.set_config("--config", "", "TOML or INI file with subcommand sections");
    app.require_subcommand(1);

    RawOptions o;
    auto* survival = app.add_subcommand("survival", "survival, detection and fidelity traces");
    auto* spectrum = app.add_subcommand("spectrum", "effective non-Hermitian spectrum");
    auto* reset = app.add_subcommand("reset", "optimal stochastic reset period");
    auto* tails = app.add_subcommand("tails", "power-law tail fits of S(t) - S_inf");
    for (auto* sub : {survival, spectrum, reset, tails}) add_common(sub, o);

    spectrum->add_option("--mode", o.mode, "exact, perturbative or both");
    spectrum->add_flag("--exact", o.exact, "diagonalize H_eff");
    spectrum->add_flag("--perturbative", o.perturbative, "second-order rates");
    spectrum->add_flag("--both", o.both, "both, with relative deviation");
    spectrum->add_option("--bin-width", o.bin_width, "1/gamma bin width for the mode density")->capture_default_str();

    reset->add_option("--reset-r", o.reset_r, "reset periods in steps, comma separated");
    reset->add_option("--target-pdet", o.target_pdet, "detection probability to reach")->capture_default_str();
    reset->add_option("--step-cap", o.step_cap, "give up after this many steps")->capture_default_str();

    tails->add_option("--t-ref", o.t_ref, "time at which the tail branch is classified")->capture_default_str();
    tails->add_option("--margin", o.margin, "relative margin around D = D*")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kConfigError;
    }

    std::string command;
    for (auto* sub : {survival, spectrum, reset, tails})
        if (sub->parsed()) command = sub->get_name();

    try {
        const RunManifest m = build_manifest(command, o);
        const auto rep = run_command(m);
        for (const auto& f : rep.files) out << f.string() << '\n';
        for (const auto& n : rep.notes) err << "monwalk: " << n << '\n';
        return rep.exit_code;
    } catch (const ConfigError& e) {
        err << "monwalk: invalid " << e.field() << ": " << e.what() << '\n';
        return kConfigError;
    } catch (const HorizonError& e) {
        err << "monwalk: " << e.what() << '\n';
        return kNoConvergence;
    } catch (const std::exception& e) {
        err << "monwalk: numerical error: " << e.what() << '\n';
        return kNumericalError;
    }
}

}  // namespace monwalk::app
