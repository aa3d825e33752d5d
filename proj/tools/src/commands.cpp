#include "monwalk_app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include <json.hpp>

#include "monwalk/asymptotics.hpp"
#include "monwalk/darkstates.hpp"
#include "monwalk/effective.hpp"
#include "monwalk/errors.hpp"
#include "monwalk/reset.hpp"
#include "monwalk/walk.hpp"
#include "monwalk_app/output.hpp"
#include "monwalk_app/work_queue.hpp"

namespace monwalk::app {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Point::tag() const {
    return "N" + fmt(N) + "_alpha" + alpha.label() + "_tau" + fmt(tau) + "_D" + fmt(D);
}

std::vector<Point> expand(const RunManifest& m) {
    std::vector<Point> pts;
    for (int n : m.N)
        for (const auto& a : m.alpha)
            for (double t : m.tau)
                for (int d : m.D) pts.push_back({n, a, t, d});
    return pts;
}

namespace {

ProtocolConfig protocol(const RunManifest& m, const Point& p) {
    ProtocolConfig c;
    c.tau = p.tau;
    c.D = p.D;
    c.l = m.l;
    c.n_steps = m.steps_for(p.tau);
    c.record_stride = m.record_stride;
    return c;
}

double asymptote(const Point& p, int l) {
    if (!p.alpha.nearest_neighbor && p.alpha.value == 0.0) return bright_state(p.N, p.D, l).survival_exact();
    return survival_infinity(p.N, p.D, l);
}

json alpha_json(const AlphaSpec& a) { return a.nearest_neighbor ? json("nn") : json(a.value); }

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// Groups point indices by every axis except alpha (or except N and alpha), keeping first-seen order.
std::vector<std::pair<std::string, std::vector<std::size_t>>> group(const std::vector<Point>& pts, bool drop_n) {
    std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
    std::map<std::string, std::size_t> where;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        std::string key = drop_n ? "" : "N" + fmt(p.N) + "_";
        key += "tau" + fmt(p.tau) + "_D" + fmt(p.D);
        auto [it, fresh] = where.emplace(key, out.size());
        if (fresh) out.push_back({key, {}});
        out[it->second].second.push_back(i);
    }
    return out;
}

fs::path grouped_name(const fs::path& dir, const std::string& stem, const std::string& key, std::size_t groups) {
    return dir / (groups == 1 ? stem + ".csv" : stem + "_" + key + ".csv");
}

void write_json(const fs::path& path, const RunManifest& m, const std::string& key, json items) {
    json doc;
    doc["manifest_sha256"] = m.hash();
    doc["units"] = std::string(kUnitsLine);
    doc[key] = std::move(items);
    write_text(path, doc.dump(2) + "\n");
}

}  // namespace

CommandReport cmd_survival(const RunManifest& m) {
    m.validate();
    const auto pts = expand(m);
    const fs::path dir = m.out;
    ensure_directory(dir);
    const std::string h = m.hash();

    std::vector<SurvivalTrace> traces(pts.size());
    parallel_for(pts.size(), m.threads, [&](std::size_t i) { traces[i] = run_monitored(pts[i].lattice(), protocol(m, pts[i])); });

    CommandReport rep;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& tr = traces[i];
        CsvFile f(dir / ("survival_" + pts[i].tag() + ".csv"), h, {"step", "t", "survival", "pdet", "first_detection", "fidelity"});
        for (std::size_t k = 0; k < tr.size(); ++k)
            f.row({fmt(static_cast<long long>(tr.step[k])), fmt(tr.time(k)), fmt(tr.survival[k]), fmt(tr.pdet(k)),
                   fmt(tr.first_detection[k]), fmt(tr.fidelity[k])});
        f.write();
        rep.files.push_back(f.path());
    }

    const auto groups = group(pts, false);
    for (const auto& [key, idx] : groups) {
        CsvFile f(grouped_name(dir, "survival_long", key, groups.size()), h, {"alpha", "t", "survival"});
        for (auto i : idx)
            for (std::size_t k = 0; k < traces[i].size(); ++k)
                f.row({pts[i].alpha.label(), fmt(traces[i].time(k)), fmt(traces[i].survival[k])});
        f.write();
        rep.files.push_back(f.path());
    }

    CsvFile s(dir / "survival_summary.csv", h, {"N", "alpha", "tau", "D", "l", "s_final", "s_infinity", "t_eq", "t_half"});
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        const auto& tr = traces[i];
        double teq = std::nan(""), thalf = std::nan("");
        try {
            teq = equilibration_time(tr);
        } catch (const HorizonError&) {
        }
        try {
            thalf = relaxation_time(tr);
        } catch (const HorizonError&) {
        }
        s.row({fmt(p.N), p.alpha.label(), fmt(p.tau), fmt(p.D), fmt(m.l), fmt(tr.survival.back()), fmt(asymptote(p, m.l)), fmt(teq),
               fmt(thalf)});
    }
    s.write();
    rep.files.push_back(s.path());
    return rep;
}

CommandReport cmd_spectrum(const RunManifest& m) {
    m.validate();
    const auto pts = expand(m);
    const fs::path dir = m.out;
    ensure_directory(dir);
    const std::string h = m.hash();
    const bool want_exact = m.mode != SpectrumMode::Perturbative;
    const bool want_pert = m.mode != SpectrumMode::Exact;

    struct Result {
        std::optional<EffectiveSpectrum> exact, pert;
        DispersionTable disp;
    };
    std::vector<Result> res(pts.size());
    parallel_for(pts.size(), m.threads, [&](std::size_t i) {
        const auto lat = pts[i].lattice();
        auto& r = res[i];
        if (want_exact) r.exact = exact_spectrum(build_h_eff(lat, pts[i].D, pts[i].tau), pts[i].tau, {.initial_site = m.l});
        if (want_pert) r.pert = gamma_perturbative(lat, pts[i].D, pts[i].tau, m.l);
        r.disp = dispersion(lat);
    });

    CommandReport rep;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& r = res[i];
        const auto& main = r.exact ? *r.exact : *r.pert;
        std::vector<std::string> cols{"a", "lambda0", "gamma", "overlap0"};
        const bool both = r.exact && r.pert;
        if (both) {
            cols.push_back("gamma_perturbative");
            cols.push_back("rel_dev");
        }
        CsvFile f(dir / ("spectrum_" + pts[i].tag() + ".csv"), h, cols);
        for (std::size_t a = 0; a < main.size(); ++a) {
            std::vector<std::string> row{fmt(static_cast<long long>(a)), fmt(main.lambda0[a]), fmt(main.gamma[a]), fmt(main.overlap0[a])};
            if (both) {
                if (a < r.pert->size()) {
                    const double gp = r.pert->gamma[a];
                    row.push_back(fmt(gp));
                    row.push_back(main.is_dark(a) ? "nan" : fmt(std::abs(gp - main.gamma[a]) / main.gamma[a]));
                } else {
                    row.push_back("nan");
                    row.push_back("nan");
                }
            }
            f.row(row);
        }
        f.write();
        rep.files.push_back(f.path());

        CsvFile d(dir / ("dispersion_" + pts[i].tag() + ".csv"), h, {"a", "k", "E_a"});
        for (std::size_t a = 0; a < r.disp.E.size(); ++a) d.row({fmt(static_cast<long long>(a)), fmt(r.disp.k[a]), fmt(r.disp.E[a])});
        d.write();
        rep.files.push_back(d.path());

        const auto dens = mode_density(main, m.bin_width);
        CsvFile g(dir / ("density_" + pts[i].tag() + ".csv"), h, {"bin", "inv_gamma_lower", "fraction"});
        g.row({"dark", "inf", fmt(dens.dark_fraction)});
        for (std::size_t b = 0; b < dens.lower.size(); ++b) g.row({fmt(static_cast<long long>(b)), fmt(dens.lower[b]), fmt(dens.fraction[b])});
        g.write();
        rep.files.push_back(g.path());
    }

    const auto groups = group(pts, true);
    for (const auto& [key, idx] : groups) {
        CsvFile f(grouped_name(dir, "gap", key, groups.size()), h, {"N", "alpha", "gamma_max", "gamma_second", "gap"});
        for (auto i : idx) {
            const auto& main = res[i].exact ? *res[i].exact : *res[i].pert;
            f.row({fmt(pts[i].N), pts[i].alpha.label(), fmt(main.gamma[0]), fmt(main.gamma[1]), fmt(spectral_gap(main))});
        }
        f.write();
        rep.files.push_back(f.path());
    }
    return rep;
}

CommandReport cmd_reset(const RunManifest& m) {
    m.validate();
    const auto pts = expand(m);
    const fs::path dir = m.out;
    ensure_directory(dir);
    const std::string h = m.hash();

    ResetConfig scan;
    scan.r_scan = m.reset_r.empty() ? default_r_grid() : m.reset_r;
    scan.target_pdet = m.target_pdet;
    scan.step_cap = m.step_cap;
    scan.validate();
    const auto r_max = *std::max_element(scan.r_scan.begin(), scan.r_scan.end());

    struct Result {
        ResetOptimum opt;
        double gamma_max = 0.0;
        std::int64_t r_pred = 0;
    };
    std::vector<Result> res(pts.size());
    parallel_for(pts.size(), m.threads, [&](std::size_t i) {
        const auto& p = pts[i];
        ProtocolConfig prot = protocol(m, p);
        prot.n_steps = r_max;
        prot.record_stride = 1;
        const auto tr = run_monitored(p.lattice(), prot);
        res[i].opt = optimize_r(tr, scan);
        res[i].gamma_max = gamma_perturbative(p.lattice(), p.D, p.tau).gamma_max();
        res[i].r_pred = predicted_optimal_r(res[i].gamma_max, p.tau);
    });

    CommandReport rep;
    const auto groups = group(pts, false);
    for (const auto& [key, idx] : groups) {
        CsvFile f(grouped_name(dir, "landscape", key, groups.size()), h, {"alpha", "r", "t_converge"});
        for (auto i : idx)
            for (const auto& q : res[i].opt.landscape) f.row({pts[i].alpha.label(), fmt(static_cast<long long>(q.r)), fmt(q.result.time)});
        f.write();
        rep.files.push_back(f.path());
    }

    json items = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        const auto& r = res[i];
        json j;
        j["N"] = p.N;
        j["alpha"] = alpha_json(p.alpha);
        j["tau"] = p.tau;
        j["D"] = p.D;
        j["l"] = m.l;
        j["target_pdet"] = m.target_pdet;
        j["gamma_max"] = r.gamma_max;
        j["r_predicted"] = r.r_pred;
        j["feasible"] = r.opt.feasible();
        j["r_best"] = r.opt.feasible() ? json(r.opt.r_best) : json(nullptr);
        j["t_best"] = number_or_null(r.opt.t_best);
        items.push_back(j);
        if (!r.opt.feasible()) {
            rep.exit_code = kNoConvergence;
            rep.notes.push_back("no reset period reaches the target within the step cap for " + p.tag());
        }
    }
    const fs::path summary = dir / "reset_summary.json";
    write_json(summary, m, "points", std::move(items));
    rep.files.push_back(summary);
    return rep;
}

CommandReport cmd_tails(const RunManifest& m) {
    m.validate();
    const auto pts = expand(m);
    const fs::path dir = m.out;
    ensure_directory(dir);

    struct Result {
        TailFit fit;
        BranchReport branch;
        double s_inf = 0.0;
    };
    std::vector<Result> res(pts.size());
    parallel_for(pts.size(), m.threads, [&](std::size_t i) {
        const auto& p = pts[i];
        ProtocolConfig prot = protocol(m, p);
        // keep at most ~2e5 recorded points per trace
        prot.record_stride = std::max(prot.record_stride, (prot.n_steps + 199'999) / 200'000);
        const auto tr = run_monitored(p.lattice(), prot);
        auto& r = res[i];
        r.s_inf = asymptote(p, m.l);
        r.fit = fit_tail(tr, r.s_inf, default_tail_window(tr.time(tr.size() - 1)));
        r.branch = classify_branch(ring_distance(p.D, m.l, p.N), p.N, 1.0, p.tau, m.t_ref, m.margin);
    });

    json items = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        const auto& r = res[i];
        json j;
        j["alpha"] = alpha_json(p.alpha);
        j["D"] = p.D;
        j["N"] = p.N;
        j["tau"] = p.tau;
        j["l"] = m.l;
        j["s_infinity"] = r.s_inf;
        j["beta"] = r.fit.beta;
        j["beta_err"] = number_or_null(r.fit.beta_err);
        j["amplitude"] = r.fit.amplitude;
        j["window"] = {r.fit.window.t_lo, r.fit.window.t_hi};
        j["residual"] = r.fit.residual;
        j["points"] = r.fit.points;
        j["branch"] = to_string(r.branch.branch);
        j["d_star"] = r.branch.d_star;
        j["t_ref"] = m.t_ref;
        j["beta_expected"] = number_or_null(r.branch.beta_expected);
        items.push_back(j);
    }
    CommandReport rep;
    const fs::path path = dir / "tails.json";
    write_json(path, m, "fits", std::move(items));
    rep.files.push_back(path);
    return rep;
}

CommandReport run_command(const RunManifest& m) {
    if (m.command == "survival") return cmd_survival(m);
    if (m.command == "spectrum") return cmd_spectrum(m);
    if (m.command == "reset") return cmd_reset(m);
    if (m.command == "tails") return cmd_tails(m);
    throw ConfigError("command", "unknown command '" + m.command + "'");
}

}  // namespace monwalk::app
