#include "monwalk/lattice.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "monwalk/errors.hpp"

namespace monwalk {

void LatticeConfig::validate() const {
    if (N < 4) throw ConfigError("N", "must be at least 4, got " + std::to_string(N));
    if (N % 2 != 0) throw ConfigError("N", "must be even, got " + std::to_string(N));
    if (!nearest_neighbor && !(alpha >= 0.0 && std::isfinite(alpha)))
        throw ConfigError("alpha", "must be finite and >= 0");
    if (!(J > 0.0 && std::isfinite(J))) throw ConfigError("J", "must be finite and > 0");
}

std::string LatticeConfig::label() const {
    if (nearest_neighbor) return "nn";
    std::ostringstream os;
    os << alpha;
    return os.str();
}

int ring_distance(int i, int j, int N) {
    if (N <= 0) throw ConfigError("N", "must be positive");
    if (i < 0 || i >= N) throw ConfigError("i", "site index out of range");
    if (j < 0 || j >= N) throw ConfigError("j", "site index out of range");
    const int d = i > j ? i - j : j - i;
    return d < N - d ? d : N - d;
}

double hopping(const LatticeConfig& cfg, int d) {
    if (d <= 0) return 0.0;
    if (cfg.nearest_neighbor) return d == 1 ? -cfg.J : 0.0;
    if (cfg.alpha == 0.0) return -cfg.J;
    return -cfg.J * std::pow(static_cast<double>(d), -cfg.alpha);
}

std::vector<double> circulant_row(const LatticeConfig& cfg) {
    cfg.validate();
    std::vector<double> row(static_cast<std::size_t>(cfg.N), 0.0);
    for (int j = 1; j < cfg.N; ++j) row[static_cast<std::size_t>(j)] = hopping(cfg, ring_distance(0, j, cfg.N));
    return row;
}

Eigen::MatrixXd hamiltonian_dense(const LatticeConfig& cfg) {
    const auto row = circulant_row(cfg);
    const int N = cfg.N;
    Eigen::MatrixXd H(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) H(i, j) = row[static_cast<std::size_t>((j - i + N) % N)];
    return H;
}

namespace {

// cos(2*pi*m/N) with the integer phase reduced first.
double cos_frac(long long m, int N) {
    const long long r = ((m % N) + N) % N;
    return std::cos(2.0 * std::numbers::pi * static_cast<double>(r) / N);
}

}  // namespace

DispersionTable dispersion(const LatticeConfig& cfg) {
    const auto row = circulant_row(cfg);
    const int N = cfg.N;
    const int half = N / 2;
    DispersionTable t;
    t.k.resize(static_cast<std::size_t>(N));
    t.E.resize(static_cast<std::size_t>(N));
    for (int a = 0; a < N; ++a) {
        double s = 0.0;
        for (int d = 1; d < half; ++d) s += 2.0 * row[static_cast<std::size_t>(d)] * cos_frac(1LL * a * d, N);
        s += row[static_cast<std::size_t>(half)] * (a % 2 == 0 ? 1.0 : -1.0);
        t.k[static_cast<std::size_t>(a)] = 2.0 * std::numbers::pi * a / N;
        t.E[static_cast<std::size_t>(a)] = s;
    }
    return t;
}

double truncated_band(const LatticeConfig& cfg, double k) {
    cfg.validate();
    double s = 0.0;
    for (int r = 1; r < cfg.N / 2; ++r) s += hopping(cfg, r) * std::cos(k * r);
    return 2.0 * s;
}

double zeta_partial(double alpha, int N) {
    if (N <= 0 || N % 2 != 0) throw ConfigError("N", "must be positive and even");
    if (!(alpha >= 0.0)) throw ConfigError("alpha", "must be >= 0");
    // Smallest terms first to limit rounding for large N.
    double s = 0.0;
    for (int r = N / 2; r >= 1; --r) s += std::pow(static_cast<double>(r), -alpha);
    return s;
}

LiebRobinsonScale lr_timescale(double alpha, int D, int N) {
    if (D < 1 || D > N / 2) throw ConfigError("D", "must lie in [1, N/2]");
    if (!(alpha >= 0.0)) throw ConfigError("alpha", "must be >= 0");
    const double d = D;
    if (alpha >= 2.0) return {"O(D)", d};
    if (alpha > 1.0) return {"O(D^{alpha-1})", std::pow(d, alpha - 1.0)};
    if (alpha == 1.0) return {"O(log D)", std::log(d)};
    if (alpha >= 0.5) return {"O(1)", 1.0};
    return {"O(N^{alpha-1/2})", std::pow(static_cast<double>(N), alpha - 0.5)};
}

LiebRobinsonScale lr_timescale(const LatticeConfig& cfg, int D) {
    if (cfg.nearest_neighbor) {
        if (D < 1 || D > cfg.N / 2) throw ConfigError("D", "must lie in [1, N/2]");
        return {"O(D)", static_cast<double>(D)};
    }
    return lr_timescale(cfg.alpha, D, cfg.N);
}

}  // namespace monwalk
