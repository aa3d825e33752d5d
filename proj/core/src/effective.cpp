#include "monwalk/effective.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <numbers>
#include <sstream>

#include "dense_eigen.hpp"
#include "monwalk/errors.hpp"

namespace monwalk {

double EffectiveSpectrum::gamma_max() const {
    if (gamma.empty()) return 0.0;
    return *std::max_element(gamma.begin(), gamma.end());
}

double EffectiveSpectrum::dark_threshold() const { return kDarkRelativeThreshold * gamma_max(); }

bool EffectiveSpectrum::is_dark(std::size_t a) const { return gamma[a] < dark_threshold(); }

std::size_t EffectiveSpectrum::dark_count() const {
    const double eps = dark_threshold();
    return static_cast<std::size_t>(std::count_if(gamma.begin(), gamma.end(), [eps](double g) { return g < eps; }));
}

namespace {

void check_site(int N, int site, const char* field) {
    if (site < 0 || site >= N) throw ConfigError(field, "site index out of range");
}

void sort_modes(EffectiveSpectrum& s) {
    std::vector<std::size_t> order(s.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (s.gamma[a] != s.gamma[b]) return s.gamma[a] > s.gamma[b];
        return s.lambda0[a] < s.lambda0[b];
    });
    auto permute = [&](auto& v) {
        if (v.empty()) return;
        auto copy = v;
        for (std::size_t i = 0; i < order.size(); ++i) v[i] = copy[order[i]];
    };
    permute(s.lambda0);
    permute(s.gamma);
    permute(s.overlap0);
    permute(s.amplitude);
}

}  // namespace

Eigen::MatrixXcd build_h_eff(const LatticeConfig& lat, int D, double tau) {
    lat.validate();
    check_site(lat.N, D, "detector");
    if (!(tau >= 0.0 && std::isfinite(tau))) throw ConfigError("tau", "must be finite and >= 0");
    if (lat.J * tau > 0.5) {
        std::ostringstream os;
        os << "J*tau = " << lat.J * tau << " exceeds 0.5; the effective Hamiltonian assumes J*tau << 1";
        warn(os.str());
    }
    const Eigen::MatrixXd H = hamiltonian_dense(lat);
    Eigen::VectorXd v = H.col(D);
    v[D] = 0.0;
    Eigen::MatrixXcd h(lat.N, lat.N);
    const std::complex<double> c(0.0, -0.5 * tau);
    for (int j = 0; j < lat.N; ++j)
        for (int i = 0; i < lat.N; ++i)
            h(i, j) = (i == D || j == D) ? std::complex<double>(0.0) : H(i, j) + c * (v[i] * v[j]);
    return h;
}

int ComplementBlock::index_of(int site) const {
    auto it = std::lower_bound(sites.begin(), sites.end(), site);
    if (it == sites.end() || *it != site) throw ConfigError("site", "not part of the complement block");
    return static_cast<int>(it - sites.begin());
}

ComplementBlock complement_block(const LatticeConfig& lat, int D) {
    lat.validate();
    check_site(lat.N, D, "detector");
    const Eigen::MatrixXd H = hamiltonian_dense(lat);
    ComplementBlock b;
    for (int i = 0; i < lat.N; ++i)
        if (i != D) b.sites.push_back(i);
    const int m = lat.N - 1;
    b.H0.resize(m, m);
    b.v.resize(m);
    for (int q = 0; q < m; ++q) {
        b.v[q] = H(b.sites[static_cast<std::size_t>(q)], D);
        for (int p = 0; p < m; ++p) b.H0(p, q) = H(b.sites[static_cast<std::size_t>(p)], b.sites[static_cast<std::size_t>(q)]);
    }
    return b;
}

EffectiveSpectrum exact_spectrum(const Eigen::MatrixXcd& h_eff, double tau, const ExactOptions& opts) {
    if (!(tau > 0.0)) throw ConfigError("tau", "must be > 0");
    const auto n = h_eff.rows();
    if (opts.initial_site) {
        check_site(static_cast<int>(n), *opts.initial_site, "init");
        if (!opts.vectors) throw ConfigError("init", "weights require eigenvectors");
    }
    const auto eig = detail::complex_eigen(h_eff, opts.vectors);

    Eigen::VectorXcd lambda = eig.values;
    Eigen::MatrixXcd X;
    if (opts.vectors) {
        // Transpose Rayleigh quotient x^T H x / x^T x; stationary for complex symmetric H.
        X = eig.vectors;
        const Eigen::MatrixXcd HX = h_eff * X;
        for (Eigen::Index a = 0; a < n; ++a) {
            const std::complex<double> xx = (X.col(a).transpose() * X.col(a))(0, 0);
            const double scale = X.col(a).squaredNorm();
            if (std::abs(xx) > 1e-8 * scale) {
                lambda[a] = (X.col(a).transpose() * HX.col(a))(0, 0) / xx;
                X.col(a) /= std::sqrt(xx);
            }
        }
    }

    EffectiveSpectrum s;
    s.tau = tau;
    s.lambda0.resize(static_cast<std::size_t>(n));
    s.gamma.resize(static_cast<std::size_t>(n));
    constexpr double clamp_floor = -1e-10;
    for (Eigen::Index a = 0; a < n; ++a) {
        double g = -lambda[a].imag() / tau;
        if (g < clamp_floor) {
            std::ostringstream os;
            os << "eigenvalue " << a << " has growth rate " << -g << " (expected gamma >= 0); frobenius norm "
               << h_eff.norm();
            throw NumericalError(os.str());
        }
        s.lambda0[static_cast<std::size_t>(a)] = lambda[a].real();
        s.gamma[static_cast<std::size_t>(a)] = std::max(g, 0.0);
    }
    if (opts.initial_site) {
        const int l = *opts.initial_site;
        s.initial_site = l;
        s.overlap0.resize(static_cast<std::size_t>(n));
        s.amplitude.resize(static_cast<std::size_t>(n));
        for (Eigen::Index a = 0; a < n; ++a) {
            const std::complex<double> w = X(l, a) * X(l, a);
            s.amplitude[static_cast<std::size_t>(a)] = w;
            s.overlap0[static_cast<std::size_t>(a)] = w.real();
        }
    }
    sort_modes(s);
    return s;
}

EffectiveSpectrum gamma_perturbative(const LatticeConfig& lat, int D, double tau, std::optional<int> initial_site) {
    if (!(tau > 0.0)) throw ConfigError("tau", "must be > 0");
    const ComplementBlock b = complement_block(lat, D);
    int lc = -1;
    if (initial_site) {
        check_site(lat.N, *initial_site, "init");
        if (*initial_site == D) throw ConfigError("init", "must differ from the detector site");
        lc = b.index_of(*initial_site);
    }
    const auto eig = detail::symmetric_eigen(b.H0);
    const Eigen::VectorXd proj = eig.vectors.transpose() * b.v;
    const auto m = static_cast<std::size_t>(b.H0.rows());
    EffectiveSpectrum s;
    s.tau = tau;
    s.lambda0.resize(m);
    s.gamma.resize(m);
    for (std::size_t a = 0; a < m; ++a) {
        s.lambda0[a] = eig.values[static_cast<Eigen::Index>(a)];
        s.gamma[a] = 0.5 * proj[static_cast<Eigen::Index>(a)] * proj[static_cast<Eigen::Index>(a)];
    }
    if (initial_site) {
        s.initial_site = *initial_site;
        s.overlap0.resize(m);
        s.amplitude.resize(m);
        for (std::size_t a = 0; a < m; ++a) {
            const double c = eig.vectors(lc, static_cast<Eigen::Index>(a));
            s.overlap0[a] = c * c;
            s.amplitude[a] = c * c;
        }
    }
    sort_modes(s);
    return s;
}

double gamma_k(const LatticeConfig& lat, int D, double k) {
    lat.validate();
    const double Jk = truncated_band(lat, k);
    const double c = std::cos(k * D);
    return Jk * Jk * c * c / lat.N;
}

double gamma_k_approx(const LatticeConfig& lat, int D, int a) {
    lat.validate();
    if (lat.nearest_neighbor || lat.alpha >= 1.0)
        warn("standing-wave rates are derived for 0 < alpha < 1; the sinusoidal picture degrades above");
    return gamma_k(lat, D, 2.0 * std::numbers::pi * a / lat.N);
}

double gamma_max_closed(const LatticeConfig& lat) {
    lat.validate();
    const double z = lat.nearest_neighbor ? 1.0 : zeta_partial(lat.alpha, lat.N);
    return 2.0 * lat.J * lat.J * z * z / lat.N;
}

double spectral_gap(const EffectiveSpectrum& spec) {
    if (spec.size() < 2) throw ConfigError("spectrum", "needs at least two modes");
    return spec.gamma[0] - spec.gamma[1];
}

double survival_from_spectrum(const EffectiveSpectrum& spec, double t) {
    if (!spec.has_weights()) throw ConfigError("spectrum", "weights for an initial site are required");
    double s = 0.0;
    for (std::size_t a = 0; a < spec.size(); ++a) s += std::exp(-2.0 * spec.gamma[a] * spec.tau * t) * spec.overlap0[a];
    return s;
}

double survival_from_spectrum(const EffectiveSpectrum& spec, double t, const std::vector<bool>& mask) {
    if (!spec.has_weights()) throw ConfigError("spectrum", "weights for an initial site are required");
    if (mask.size() != spec.size()) throw ConfigError("mask", "length must match the number of modes");
    double s = 0.0;
    for (std::size_t a = 0; a < spec.size(); ++a)
        if (mask[a]) s += std::exp(-2.0 * spec.gamma[a] * spec.tau * t) * spec.overlap0[a];
    return s;
}

double gapped_two_term_survival(const LatticeConfig& lat, int D, double tau, double t) {
    lat.validate();
    if (lat.nearest_neighbor || lat.alpha >= 0.5) warn("two-term survival assumes the gapped regime alpha < 1/2");
    const int half = lat.N / 2;
    const double gmax = gamma_max_closed(lat);
    // Trapezoid rule on the lattice momenta k = 2 pi a / N in [0, pi].
    const double dk = 2.0 * std::numbers::pi / lat.N;
    double integral = 0.0;
    for (int a = 0; a <= half; ++a) {
        const double w = (a == 0 || a == half) ? 0.5 : 1.0;
        integral += w * std::exp(-2.0 * tau * gamma_k(lat, D, a * dk) * t);
    }
    integral *= dk / std::numbers::pi;
    return 2.0 / lat.N * std::exp(-2.0 * tau * gmax * t) + 2.0 * integral;
}

ModeDensity mode_density(const EffectiveSpectrum& spec, double bin_width) {
    if (!(bin_width > 0.0)) throw ConfigError("bin_width", "must be > 0");
    ModeDensity d;
    d.bin_width = bin_width;
    d.modes = spec.size();
    if (spec.size() == 0) return d;
    const double eps = spec.dark_threshold();
    std::size_t dark = 0;
    std::map<double, std::size_t> counts;  // keyed by bin index
    for (double g : spec.gamma) {
        if (g < eps) {
            ++dark;
            continue;
        }
        ++counts[std::floor(1.0 / g / bin_width)];
    }
    const double total = static_cast<double>(spec.size());
    d.dark_fraction = static_cast<double>(dark) / total;
    for (const auto& [bin, n] : counts) {
        d.lower.push_back(bin * bin_width);
        d.fraction.push_back(static_cast<double>(n) / total);
    }
    return d;
}

double fidelity_from_spectrum(const EffectiveSpectrum& spec, double t) {
    if (spec.amplitude.empty()) throw ConfigError("spectrum", "amplitudes for an initial site are required");
    std::complex<double> z = 0.0;
    for (std::size_t a = 0; a < spec.size(); ++a)
        z += std::exp(std::complex<double>(-spec.tau * spec.gamma[a] * t, -spec.lambda0[a] * t)) * spec.amplitude[a];
    return std::norm(z);
}

}  // namespace monwalk
