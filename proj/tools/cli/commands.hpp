// commands.hpp: harmsep command-line front end
//
// Subcommands: spectrum | tcrit | phase-diagram | ring | pmeasure | check-sep.
// Exit codes: 0 ok, 2 spec/usage error, 3 invalid Hamiltonian, 4 refused symmetry certificate.

#pragma once

#include "harmsep/harmsep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace harmsep::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kSpecError = 2, kInvalidHamiltonian = 3, kSymmetryRefused = 4 };

struct SweepRange {
    double min = 0.0;
    double max = 0.0;
    int points = 0;
    std::string spacing = "log";

    void validate(const char* what) const {
        if (!(min < max) || !std::isfinite(min) || !std::isfinite(max)) {
            throw SpecError(std::string(what) + ": need min < max");
        }
        if (points < 2) throw SpecError(std::string(what) + ": need at least 2 points");
        if (spacing != "log" && spacing != "linear") throw SpecError(std::string(what) + ": spacing must be log or linear");
        if (spacing == "log" && !(min > 0.0)) throw SpecError(std::string(what) + ": log spacing needs min > 0");
    }

    std::vector<double> values() const {
        std::vector<double> v(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) {
            const double f = static_cast<double>(i) / (points - 1);
            v[static_cast<std::size_t>(i)] =
                spacing == "log" ? std::exp(std::log(min) + f * (std::log(max) - std::log(min))) : min + f * (max - min);
        }
        v.front() = min;
        v.back() = max;
        return v;
    }
};

// Evaluates f(0..n-1) on up to `jobs` threads; results keep index order.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, unsigned jobs, F&& f) {
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

inline std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header, bool timestamp)
        : out_(out), width_(header.size() + 1 + (timestamp ? 1 : 0)) {
        if (timestamp) stamp_ = timestamp_utc();
        header.emplace_back("version");
        if (timestamp) header.emplace_back("timestamp");
        write(header);
    }

    void row(std::vector<std::string> cells) {
        cells.emplace_back(kVersion);
        if (!stamp_.empty()) cells.push_back(stamp_);
        write(cells);
    }

private:
    void write(const std::vector<std::string>& cells) {
        if (cells.size() != width_) throw std::logic_error("CsvWriter: ragged row");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ostream& out_;
    std::size_t width_;
    std::string stamp_;
};

inline void emit_json(std::ostream& out, ordered_json j, bool timestamp) {
    if (timestamp) j["timestamp"] = timestamp_utc();
    out << j.dump(2) << '\n';
}

}  // namespace detail

struct GlobalOptions {
    double hbar = 1.0;
    double k_b = 1.0;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    bool timestamp = false;
};

inline HamiltonianSpec require_certificate(HamiltonianSpec spec, bool exact) {
    if (exact && !spec.shift_invariant()) {
        throw SymmetryRefused(std::string("--exact-symmetric refused: ") + spec.kind() +
                              " spec is not certified shift-invariant");
    }
    return spec;
}

// ---------------------------------------------------------------------------

inline void cmd_spectrum(const std::string& path, const GlobalOptions& g, std::ostream& out) {
    const HamiltonianSpec spec = load_spec_file(path);
    const FrequencySpectrum s = spec.spectrum();
    detail::CsvWriter csv(out, {"j", "omega", "omega_min", "omega_max", "r", "spec"}, g.timestamp);
    const std::string echo = detail::csv_quote(spec.echo().dump());
    for (std::size_t j = 0; j < s.size(); ++j) {
        csv.row({std::to_string(j), format_number(s.frequencies()[j]), format_number(s.omega_min()),
                 format_number(s.omega_max()), format_number(s.ratio()), echo});
    }
}

inline void cmd_tcrit(const std::string& path, bool exact, const GlobalOptions& g, std::ostream& out) {
    const HamiltonianSpec spec = require_certificate(load_spec_file(path), exact);
    const FrequencySpectrum s = spec.spectrum();
    const CriticalResult c = critical_beta(s, exact, g.hbar);
    const double t_crit = std::isinf(c.beta_crit) ? 0.0 : 1.0 / (g.k_b * c.beta_crit);

    ordered_json j;
    j["version"] = kVersion;
    j["input"] = {{"spec", spec.echo()}, {"exact_symmetric", exact}, {"hbar", g.hbar}, {"kB", g.k_b}};
    j["omega_min"] = json_number(s.omega_min());
    j["omega_max"] = json_number(s.omega_max());
    j["r"] = json_number(s.ratio());
    j["sigma_r"] = json_number(c.sigma_r);
    j["t_star"] = json_number(c.t_star);
    j["omega0_star"] = json_number(c.omega0_star);
    j["beta_crit"] = json_number(c.beta_crit);
    j["T_crit"] = json_number(t_crit);
    j["separable_at_all_T"] = std::isinf(c.beta_crit);
    j["exact"] = c.exact;
    j["method"] = to_string(c.method);
    detail::emit_json(out, std::move(j), g.timestamp);
}

inline void cmd_phase_diagram(const SweepRange& r_range, const GlobalOptions& g, std::ostream& out) {
    r_range.validate("phase-diagram");
    if (!(r_range.min > 1.0)) throw SpecError("phase-diagram: need 1 < r-min < r-max");
    std::vector<double> rs = r_range.values();
    std::sort(rs.begin(), rs.end(), std::greater<>());  // ascending in 1/r
    const auto sig = parallel_map<double>(rs.size(), g.jobs, [&](std::size_t i) { return sigma(rs[i]); });
    detail::CsvWriter csv(out, {"inv_r", "r", "sigma_r", "t_over_boundary"}, g.timestamp);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        csv.row({format_number(1.0 / rs[i]), format_number(rs[i]), format_number(sig[i]), format_number(1.0 / sig[i])});
    }
}

// k_B T_crit / (hbar omega) of an n-site ring as a function of delta / omega.
inline void cmd_ring_diagram(const SweepRange& d_range, int n, const GlobalOptions& g, std::ostream& out) {
    d_range.validate("ring");
    if (n < 1) throw SpecError("ring: --n must be >= 1");
    if (!(d_range.min > 0.0)) throw SpecError("ring: delta/omega must be > 0");
    const std::vector<double> ds = d_range.values();
    struct Row {
        double r, sigma, kt;
    };
    const auto rows = parallel_map<Row>(ds.size(), g.jobs, [&](std::size_t i) {
        const FrequencySpectrum s = ring_dispersion(RingParams{n, 1.0, ds[i], 1.0});
        const CriticalResult c = critical_beta(s, true);
        return Row{s.ratio(), c.sigma_r, 1.0 / c.beta_crit};
    });
    const double t_nn = 0.5;
    const double t_blocks = 2.8 / std::sqrt(20.0);
    detail::CsvWriter csv(out,
                          {"n", "delta_over_omega", "r", "sigma_r", "kT_crit_over_homega", "T_nn_over_homega",
                           "T_blocks_over_homega"},
                          g.timestamp);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        csv.row({std::to_string(n), format_number(ds[i]), format_number(rows[i].r), format_number(rows[i].sigma),
                 format_number(rows[i].kt), format_number(t_nn), format_number(t_blocks)});
    }
}

inline void cmd_pmeasure(const std::string& path, std::optional<double> beta, std::optional<SweepRange> sweep,
                         const GlobalOptions& g, std::ostream& out) {
    const HamiltonianSpec spec = load_spec_file(path);
    const FrequencySpectrum s = spec.spectrum();
    std::vector<double> betas;
    if (beta) {
        if (!(*beta > 0.0) || !std::isfinite(*beta)) throw SpecError("pmeasure: --beta must be > 0");
        betas.push_back(*beta);
    } else if (sweep) {
        sweep->validate("pmeasure");
        if (!(sweep->min > 0.0)) throw SpecError("pmeasure: beta range must be > 0");
        betas = sweep->values();
    } else {
        throw SpecError("pmeasure: give --beta or --beta-min/--beta-max/--points");
    }
    const auto res = parallel_map<PMeasureResult>(betas.size(), g.jobs, [&](std::size_t i) {
        return p_measure(s, ThermalPoint{betas[i], g.hbar, g.k_b});
    });
    detail::CsvWriter csv(out,
                          {"beta", "p", "neg_log_p", "omega0_star", "eof_lower_bound", "underflow", "hbar", "kB", "spec"},
                          g.timestamp);
    const std::string echo = detail::csv_quote(spec.echo().dump());
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const auto& r = res[i];
        csv.row({format_number(betas[i]), format_number(r.p), format_number(r.neg_log_p), format_number(r.omega0_star),
                 format_number(eof_lower_bound(r)), r.underflow ? "1" : "0", format_number(g.hbar),
                 format_number(g.k_b), echo});
    }
}

inline void cmd_check_sep(const std::string& path, double beta, bool exact, const GlobalOptions& g,
                          std::ostream& out) {
    const HamiltonianSpec spec = require_certificate(load_spec_file(path), exact);
    if (!(beta > 0.0) || !std::isfinite(beta)) throw SpecError("check-sep: --beta must be > 0");
    const auto pm = spec.potential();
    if (!pm) throw SpecError("check-sep: needs a \"ring\" or \"potential\" spec to build the site-basis state");
    const ThermalPoint t{beta, g.hbar, g.k_b};
    const CovarianceMatrix gamma = thermal_cm(*pm, t);
    const SeparabilityVerdict v = check_full_separability(gamma, spectrum_from_potential(*pm), t, exact, pm->mass());

    ordered_json j;
    j["version"] = kVersion;
    j["input"] = {{"spec", spec.echo()}, {"beta", beta}, {"exact_symmetric", exact}, {"hbar", g.hbar}, {"kB", g.k_b}};
    j["status"] = to_string(v.status);
    j["witness_omega0"] = v.witness_omega0 ? json_number(*v.witness_omega0) : ordered_json(nullptr);
    ordered_json per_mode = ordered_json::array();
    for (double w : v.witness_per_mode) per_mode.push_back(json_number(w));
    j["witness_per_mode"] = per_mode;
    j["margin"] = json_number(v.margin);
    j["beta"] = json_number(v.beta);
    j["beta_crit"] = json_number(v.beta_crit);
    j["exact"] = exact;
    detail::emit_json(out, std::move(j), g.timestamp);
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement and separability of harmonic-oscillator thermal states", "harmsep"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--hbar", g.hbar, "Value of hbar")->check(CLI::PositiveNumber);
    app.add_option("--kB", g.k_b, "Value of Boltzmann's constant")->check(CLI::PositiveNumber);
    app.add_option("--jobs", g.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_flag("--timestamp", g.timestamp, "Stamp output records with the UTC time");

    std::string spec_path;
    bool exact = false;
    double beta = 0.0;
    std::optional<double> beta_opt;
    SweepRange range;
    int ring_n = 64;

    auto* sp = app.add_subcommand("spectrum", "Normal-mode frequencies of a spec file (CSV)");
    sp->add_option("spec", spec_path, "Hamiltonian spec file")->required();

    auto* tc = app.add_subcommand("tcrit", "Critical temperature of full separability (JSON)");
    tc->add_option("spec", spec_path, "Hamiltonian spec file")->required();
    tc->add_flag("--exact-symmetric", exact, "Certify exactness via cyclic shift symmetry");

    auto* pd = app.add_subcommand("phase-diagram", "Universal boundary 1/sigma(r) vs 1/r (CSV)");
    pd->add_option("--r-min", range.min)->required();
    pd->add_option("--r-max", range.max)->required();
    pd->add_option("--points", range.points)->required();
    pd->add_option("--spacing", range.spacing, "log or linear")->capture_default_str();

    auto* rg = app.add_subcommand("ring", "Ring critical temperature vs delta/omega (CSV)");
    rg->add_option("--delta-min", range.min, "smallest delta/omega")->required();
    rg->add_option("--delta-max", range.max, "largest delta/omega")->required();
    rg->add_option("--points", range.points)->required();
    rg->add_option("--spacing", range.spacing, "log or linear")->capture_default_str();
    rg->add_option("--n", ring_n, "number of sites")->capture_default_str();

    auto* pm = app.add_subcommand("pmeasure", "P entanglement measure at one beta or over a sweep (CSV)");
    pm->add_option("spec", spec_path, "Hamiltonian spec file")->required();
    pm->add_option("--beta", beta_opt, "inverse temperature");
    auto* bmin = pm->add_option("--beta-min", range.min);
    auto* bmax = pm->add_option("--beta-max", range.max);
    auto* bpts = pm->add_option("--points", range.points);
    pm->add_option("--spacing", range.spacing, "log or linear")->capture_default_str();

    auto* cs = app.add_subcommand("check-sep", "Full-separability verdict of the site-basis state (JSON)");
    cs->add_option("spec", spec_path, "Hamiltonian spec file")->required();
    cs->add_option("--beta", beta, "inverse temperature")->required();
    cs->add_flag("--exact-symmetric", exact, "Certify exactness via cyclic shift symmetry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion& e) {
        out << kVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "harmsep: " << e.what() << '\n';
        return kSpecError;
    }

    try {
        if (*sp) {
            cmd_spectrum(spec_path, g, out);
        } else if (*tc) {
            cmd_tcrit(spec_path, exact, g, out);
        } else if (*pd) {
            cmd_phase_diagram(range, g, out);
        } else if (*rg) {
            cmd_ring_diagram(range, ring_n, g, out);
        } else if (*pm) {
            std::optional<SweepRange> sweep;
            if (bmin->count() || bmax->count() || bpts->count()) {
                if (beta_opt) throw SpecError("pmeasure: --beta and a beta sweep are exclusive");
                sweep = range;
            }
            cmd_pmeasure(spec_path, beta_opt, sweep, g, out);
        } else if (*cs) {
            cmd_check_sep(spec_path, beta, exact, g, out);
        }
    } catch (const SymmetryRefused& e) {
        err << "harmsep: " << e.what() << '\n';
        return kSymmetryRefused;
    } catch (const InvalidHamiltonian& e) {
        err << "harmsep: " << e.what() << '\n';
        return kInvalidHamiltonian;
    } catch (const NotPositiveDefinite& e) {
        err << "harmsep: " << e.what() << '\n';
        return kInvalidHamiltonian;
    } catch (const SpecError& e) {
        err << "harmsep: " << e.what() << '\n';
        return kSpecError;
    } catch (const std::invalid_argument& e) {
        err << "harmsep: " << e.what() << '\n';
        return kSpecError;
    }
    return kOk;
}

}  // namespace harmsep::cli
