#include "monwalk_app/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include <json.hpp>

#include "monwalk/errors.hpp"
#include "monwalk_app/output.hpp"

namespace monwalk::app {

AlphaSpec AlphaSpec::parse(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "nn") return {0.0, true};
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw ConfigError("alpha", "'" + text + "' is neither a number nor 'nn'");
    return {v, false};
}

std::string AlphaSpec::label() const { return nearest_neighbor ? "nn" : fmt(value); }

LatticeConfig AlphaSpec::lattice(int N, double J) const {
    LatticeConfig c;
    c.N = N;
    c.alpha = nearest_neighbor ? 0.0 : value;
    c.J = J;
    c.nearest_neighbor = nearest_neighbor;
    return c;
}

SpectrumMode parse_mode(const std::string& text) {
    if (text == "exact") return SpectrumMode::Exact;
    if (text == "perturbative") return SpectrumMode::Perturbative;
    if (text == "both") return SpectrumMode::Both;
    throw ConfigError("mode", "expected exact, perturbative or both, got '" + text + "'");
}

std::string to_string(SpectrumMode m) {
    switch (m) {
        case SpectrumMode::Exact: return "exact";
        case SpectrumMode::Perturbative: return "perturbative";
        case SpectrumMode::Both: return "both";
    }
    return "perturbative";
}

void RunManifest::validate() const {
    if (N.empty()) throw ConfigError("n", "empty sweep");
    if (alpha.empty()) throw ConfigError("alpha", "empty sweep");
    if (tau.empty()) throw ConfigError("tau", "empty sweep");
    if (D.empty()) throw ConfigError("detector", "empty sweep");
    for (int n : N)
        for (const auto& a : alpha) a.lattice(n).validate();
    for (double t : tau)
        if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("tau", "must be > 0");
    for (int n : N) {
        if (l < 0 || l >= n) throw ConfigError("init", "must lie in [0, N)");
        for (int d : D) {
            if (d < 0 || d >= n) throw ConfigError("detector", "must lie in [0, N)");
            if (d == l) throw ConfigError("init", "must differ from the detector site");
        }
    }
    if (steps && *steps < 1) throw ConfigError("steps", "must be >= 1");
    if (record_stride < 1) throw ConfigError("stride", "must be >= 1");
    for (auto r : reset_r)
        if (r < 1) throw ConfigError("reset-r", "entries must be >= 1");
    if (!(target_pdet > 0.0 && target_pdet < 1.0)) throw ConfigError("target-pdet", "must lie in (0, 1)");
    if (step_cap < 1) throw ConfigError("step-cap", "must be >= 1");
    if (!(bin_width > 0.0)) throw ConfigError("bin-width", "must be > 0");
    if (!(t_ref > 0.0)) throw ConfigError("t-ref", "must be > 0");
    if (!(margin > 0.0 && margin < 1.0)) throw ConfigError("margin", "must lie in (0, 1)");
    if (threads < 0) throw ConfigError("threads", "must be >= 0");
}

std::int64_t RunManifest::steps_for(double t) const {
    if (steps) return *steps;
    return std::max<std::int64_t>(1, std::llround(kDefaultHorizon / t));
}

std::string RunManifest::canonical() const {
    nlohmann::json j;
    j["command"] = command;
    j["N"] = N;
    std::vector<std::string> a;
    for (const auto& x : alpha) a.push_back(x.label());
    j["alpha"] = a;
    std::vector<std::string> t;
    for (double x : tau) t.push_back(fmt(x));
    j["tau"] = t;
    j["D"] = D;
    j["l"] = l;
    j["steps"] = steps ? nlohmann::json(*steps) : nlohmann::json(nullptr);
    j["stride"] = record_stride;
    j["reset_r"] = reset_r;
    j["target_pdet"] = fmt(target_pdet);
    j["step_cap"] = step_cap;
    j["mode"] = to_string(mode);
    j["bin_width"] = fmt(bin_width);
    j["t_ref"] = fmt(t_ref);
    j["margin"] = fmt(margin);
    j["version"] = version;
    return j.dump();
}

std::string RunManifest::hash() const {
    const std::string text = canonical();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return os.str();
}

void apply_command_defaults(RunManifest& m) {
    if (m.N.empty()) m.N = {1000};
    if (m.tau.empty()) m.tau = {0.2};
    if (m.D.empty()) m.D = m.command == "tails" ? std::vector<int>{1, 50} : std::vector<int>{10};
    if (m.alpha.empty()) {
        std::vector<std::string> a;
        if (m.command == "survival")
            a = {"0.5", "1.5", "3", "nn"};
        else if (m.command == "spectrum")
            a = {"0.2", "0.5", "1.5", "3"};
        else if (m.command == "reset")
            a = {"0.2", "0.5", "1", "1.5", "2", "3"};
        else
            a = {"0.5", "1.5", "3"};
        for (const auto& s : a) m.alpha.push_back(AlphaSpec::parse(s));
    }
}

}  // namespace monwalk::app
