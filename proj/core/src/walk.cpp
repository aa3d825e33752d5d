#include "monwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "monwalk/errors.hpp"

namespace monwalk {

void ProtocolConfig::validate(int N) const {
    if (!(tau > 0.0 && std::isfinite(tau))) throw ConfigError("tau", "must be finite and > 0");
    if (D < 0 || D >= N) throw ConfigError("detector", "site index out of range");
    if (l < 0 || l >= N) throw ConfigError("init", "site index out of range");
    if (D == l) throw ConfigError("init", "must differ from the detector site");
    if (n_steps < 1) throw ConfigError("steps", "must be >= 1");
    if (record_stride < 1) throw ConfigError("record_stride", "must be >= 1");
}

std::vector<double> SurvivalTrace::times() const {
    std::vector<double> t(step.size());
    for (std::size_t i = 0; i < step.size(); ++i) t[i] = time(i);
    return t;
}

bool SurvivalTrace::contiguous() const {
    for (std::size_t i = 0; i < step.size(); ++i)
        if (step[i] != static_cast<std::int64_t>(i)) return false;
    return true;
}

double SurvivalTrace::survival_at_step(std::int64_t n) const {
    const auto it = std::lower_bound(step.begin(), step.end(), n);
    if (it == step.end() || *it != n) throw HorizonError("trace does not contain step " + std::to_string(n));
    return survival[static_cast<std::size_t>(it - step.begin())];
}

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

struct Propagator::Impl {
    int n = 0;
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::vector<std::complex<double>> phase;  // exp(-i E_a tau) / N

    ~Impl() {
        std::lock_guard lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (buf) fftw_free(buf);
    }

    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(buf); }

    void unitary() {
        fftw_execute(fwd);
        auto* z = data();
        for (int a = 0; a < n; ++a) z[a] *= phase[static_cast<std::size_t>(a)];
        fftw_execute(bwd);
    }
};

Propagator::Propagator(const LatticeConfig& cfg, double tau) : impl_(std::make_unique<Impl>()) {
    if (!std::isfinite(tau)) throw ConfigError("tau", "must be finite");
    const auto table = dispersion(cfg);
    impl_->n = cfg.N;
    impl_->phase.resize(static_cast<std::size_t>(cfg.N));
    for (int a = 0; a < cfg.N; ++a)
        impl_->phase[static_cast<std::size_t>(a)] = std::polar(1.0 / cfg.N, -table.E[static_cast<std::size_t>(a)] * tau);
    std::lock_guard lock(planner_mutex());
    impl_->buf = fftw_alloc_complex(static_cast<std::size_t>(cfg.N));
    if (!impl_->buf) throw NumericalError("FFT buffer allocation failed");
    // FFTW_ESTIMATE: plan choice does not depend on timing.
    impl_->fwd = fftw_plan_dft_1d(cfg.N, impl_->buf, impl_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_1d(cfg.N, impl_->buf, impl_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->bwd) throw NumericalError("FFT planning failed");
    for (int i = 0; i < cfg.N; ++i) impl_->buf[i][0] = impl_->buf[i][1] = 0.0;
}

Propagator::~Propagator() = default;
Propagator::Propagator(Propagator&&) noexcept = default;
Propagator& Propagator::operator=(Propagator&&) noexcept = default;

int Propagator::size() const { return impl_->n; }

std::span<std::complex<double>> Propagator::buffer() {
    return {impl_->data(), static_cast<std::size_t>(impl_->n)};
}

void Propagator::load(const WalkerState& psi) {
    if (psi.size() != impl_->n) throw ConfigError("state", "length does not match lattice size");
    auto* z = impl_->data();
    for (int i = 0; i < impl_->n; ++i) z[i] = psi[i];
}

WalkerState Propagator::store() const {
    WalkerState psi(impl_->n);
    const auto* z = reinterpret_cast<const std::complex<double>*>(impl_->buf);
    for (int i = 0; i < impl_->n; ++i) psi[i] = z[i];
    return psi;
}

void Propagator::apply(WalkerState& psi) {
    load(psi);
    impl_->unitary();
    psi = store();
}

double Propagator::monitored_step(int D) {
    impl_->unitary();
    auto* z = impl_->data();
    z[D] = 0.0;
    double s = 0.0;
    for (int i = 0; i < impl_->n; ++i) s += std::norm(z[i]);
    return s;
}

WalkerState site_state(int N, int site) {
    if (site < 0 || site >= N) throw ConfigError("site", "index out of range");
    WalkerState psi = WalkerState::Zero(N);
    psi[site] = 1.0;
    return psi;
}

WalkerState evolve_unitary(const WalkerState& state, const LatticeConfig& cfg, double tau) {
    cfg.validate();
    if (state.size() != cfg.N) throw ConfigError("state", "length does not match lattice size");
    if (tau == 0.0) return state;
    Propagator prop(cfg, tau);
    WalkerState out = state;
    prop.apply(out);
    return out;
}

NoClickResult project_no_click(WalkerState state, int D) {
    if (D < 0 || D >= state.size()) throw ConfigError("detector", "site index out of range");
    NoClickResult r;
    r.p_click = std::norm(state[D]);
    state[D] = 0.0;
    r.state = std::move(state);
    return r;
}

SurvivalTrace run_monitored(const LatticeConfig& lat, const ProtocolConfig& prot) {
    lat.validate();
    prot.validate(lat.N);
    Propagator prop(lat, prot.tau);
    auto z = prop.buffer();
    z[static_cast<std::size_t>(prot.l)] = 1.0;

    SurvivalTrace tr;
    tr.tau = prot.tau;
    const auto reserve = static_cast<std::size_t>(prot.n_steps / prot.record_stride + 2);
    tr.step.reserve(reserve);
    tr.survival.reserve(reserve);
    tr.first_detection.reserve(reserve);
    tr.fidelity.reserve(reserve);
    tr.step.push_back(0);
    tr.survival.push_back(1.0);
    tr.first_detection.push_back(0.0);
    tr.fidelity.push_back(1.0);

    constexpr double zero_floor = 1e-12;
    double prev = 1.0;
    for (std::int64_t n = 1; n <= prot.n_steps; ++n) {
        const double s = prop.monitored_step(prot.D);
        if (n % prot.record_stride == 0 || n == prot.n_steps) {
            double f = prev - s;
            if (f < 0.0 && f > -zero_floor) f = 0.0;
            tr.step.push_back(n);
            tr.survival.push_back(s);
            tr.first_detection.push_back(f);
            tr.fidelity.push_back(std::norm(z[static_cast<std::size_t>(prot.l)]));
        }
        prev = s;
    }
    return tr;
}

std::vector<double> fidelity_trace(const LatticeConfig& lat, const ProtocolConfig& prot) {
    return run_monitored(lat, prot).fidelity;
}

double equilibration_time(std::span<const double> t, std::span<const double> f, double threshold) {
    if (t.size() != f.size() || t.empty()) throw ConfigError("fidelity", "time and value series must match and be non-empty");
    std::size_t last_above = f.size();
    for (std::size_t i = f.size(); i-- > 0;) {
        if (f[i] >= threshold) {
            last_above = i;
            break;
        }
    }
    if (last_above == f.size()) return t[0];
    if (last_above + 1 == f.size()) throw HorizonError("not equilibrated within horizon");
    return t[last_above + 1];
}

double equilibration_time(const SurvivalTrace& trace, double threshold) {
    const auto t = trace.times();
    return equilibration_time(t, trace.fidelity, threshold);
}

double relaxation_time(const SurvivalTrace& trace, double level) {
    for (std::size_t i = 0; i < trace.size(); ++i)
        if (trace.survival[i] <= level) return trace.time(i);
    throw HorizonError("not relaxed within horizon");
}

}  // namespace monwalk
