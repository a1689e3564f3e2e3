#include "repac/bench.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "repac/rng.hpp"

namespace repac {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

MeanSd mean_sd(const std::vector<double>& values) {
    MeanSd out;
    double sum = 0.0;
    for (double v : values) {
        if (std::isnan(v)) continue;
        sum += v;
        ++out.n;
    }
    if (out.n == 0) {
        out.mean = kNan;
        out.sd = kNan;
        return out;
    }
    out.mean = sum / out.n;
    if (out.n >= 2) {
        double ss = 0.0;
        for (double v : values) {
            if (std::isnan(v)) continue;
            ss += (v - out.mean) * (v - out.mean);
        }
        out.sd = std::sqrt(ss / (out.n - 1));
    }
    return out;
}

void append_num(std::string& s, const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    s += buf;
}

std::string fmt_metric(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

void BenchGrid::validate() const {
    if (snr_values.empty() || m_values.empty() || l_values.empty())
        throw std::invalid_argument("bench grid: parameter lists must be non-empty");
    if (trials_per_cell < 1) throw std::invalid_argument("bench grid: trials_per_cell < 1");
    if (!(fs > 0.0)) throw std::invalid_argument("bench grid: fs must be positive");
    if (!(duration_s > 0.0)) throw std::invalid_argument("bench grid: duration must be positive");
    if (!(event_density > 0.0 && event_density <= 0.8))
        throw std::invalid_argument("bench grid: event_density outside (0, 0.8]");
    for (double m : m_values)
        if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("bench grid: m outside [0,1]");
    for (double l : l_values)
        if (!(l > 0.0)) throw std::invalid_argument("bench grid: event length must be positive");
    if (f_l_policy == FreqPolicy::Uniform && !(f_l_range.lo > 0.0 && f_l_range.lo < f_l_range.hi))
        throw std::invalid_argument("bench grid: f_l_range invalid");
    if (f_h_policy == FreqPolicy::Uniform && !(f_h_range.lo > 0.0 && f_h_range.lo < f_h_range.hi))
        throw std::invalid_argument("bench grid: f_h_range invalid");
}

ConfusionCounts score(const GroundTruth& truth, const std::vector<Interval>& detected) {
    const std::size_t n = truth.labels.size();
    std::vector<std::uint8_t> det(n, 0);
    for (const auto& [a, b] : detected) {
        if (a >= b || b > n) throw std::out_of_range("score: detected interval out of range");
        for (std::size_t i = a; i < b; ++i) det[i] = 1;
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < n; ++i) {
        if (truth.labels[i]) {
            if (det[i])
                ++c.tp;
            else
                ++c.fn;
        } else {
            if (det[i])
                ++c.fp;
            else
                ++c.tn;
        }
    }
    return c;
}

Metrics metrics(const ConfusionCounts& c) {
    Metrics m{kNan, kNan, kNan};
    if (c.tp + c.fn > 0)
        m.sensitivity = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    if (c.tn + c.fp > 0)
        m.specificity = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    if (c.total() > 0)
        m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    return m;
}

std::uint64_t hash_signal(const std::vector<double>& x) {
    std::uint64_t h = 1469598103934665603ULL;
    for (double v : x) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xFFu;
            h *= 1099511628211ULL;
        }
    }
    return h;
}

BenchReport monte_carlo(const BenchGrid& grid, const RepacConfig& repac_cfg,
                        const BaselineConfig& baseline_cfg, const CellCallback& on_cell) {
    grid.validate();
    repac_cfg.validate(grid.fs);
    baseline_cfg.validate(grid.fs);

    BenchReport report;
    report.grid = grid;
    const std::size_t total_cells =
        grid.snr_values.size() * grid.m_values.size() * grid.l_values.size();

    struct TrialOut {
        ConfusionCounts repac_counts, baseline_counts;
        Metrics repac_metrics{}, baseline_metrics{};
        bool repac_failed = false, baseline_failed = false;
        std::uint64_t hash = 0;
    };

    std::uint64_t cell_index = 0;
    for (double snr : grid.snr_values) {
        for (double m : grid.m_values) {
            for (double l : grid.l_values) {
                const int trials = grid.trials_per_cell;
                std::vector<TrialOut> outs(static_cast<std::size_t>(trials));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
                for (int t = 0; t < trials; ++t) {
                    TrialOut& out = outs[static_cast<std::size_t>(t)];
                    const std::uint64_t seed =
                        mix_seed(grid.master_seed, cell_index, static_cast<std::uint64_t>(t));
                    PacParams p;
                    p.duration = grid.duration_s;
                    p.fs = grid.fs;
                    p.m = m;
                    p.event_len = l;
                    p.snr_db = snr;
                    p.seed = seed;
                    Rng freq_rng(mix_seed(seed, 7));
                    p.f_l = grid.f_l_policy == FreqPolicy::Uniform
                                ? freq_rng.uniform(grid.f_l_range.lo, grid.f_l_range.hi)
                                : grid.f_l_fixed;
                    p.f_h = grid.f_h_policy == FreqPolicy::Uniform
                                ? freq_rng.uniform(grid.f_h_range.lo, grid.f_h_range.hi)
                                : grid.f_h_fixed;
                    const int n_events = std::max(
                        1, static_cast<int>(std::llround(grid.event_density * grid.duration_s / l)));
                    p.n_events = EventCount::fixed(n_events);

                    const SyntheticRecord rec = synthesize(p);
                    out.hash = hash_signal(rec.signal);

                    try {
                        const RepacResult rr = run_repac(rec.signal, grid.fs, repac_cfg);
                        out.repac_counts = score(rec.truth, rr.pac_intervals);
                    } catch (const std::exception&) {
                        out.repac_failed = true;
                        out.repac_counts = score(rec.truth, {});
                    }
                    try {
                        const BaselineResult br =
                            run_baseline(rec.signal, grid.fs, baseline_cfg, mix_seed(seed, 11));
                        out.baseline_counts = score(rec.truth, br.intervals);
                    } catch (const std::exception&) {
                        out.baseline_failed = true;
                        out.baseline_counts = score(rec.truth, {});
                    }
                    out.repac_metrics = metrics(out.repac_counts);
                    out.baseline_metrics = metrics(out.baseline_counts);
                }

                CellResult cell;
                cell.snr_db = snr;
                cell.m = m;
                cell.l_s = l;
                cell.trials = trials;
                std::vector<double> r_sens, r_spec, r_acc, b_sens, b_spec, b_acc;
                for (const TrialOut& out : outs) {
                    cell.record_hashes.push_back(out.hash);
                    cell.repac.pooled += out.repac_counts;
                    cell.baseline.pooled += out.baseline_counts;
                    cell.repac.failures += out.repac_failed ? 1 : 0;
                    cell.baseline.failures += out.baseline_failed ? 1 : 0;
                    r_sens.push_back(out.repac_metrics.sensitivity);
                    r_spec.push_back(out.repac_metrics.specificity);
                    r_acc.push_back(out.repac_metrics.accuracy);
                    b_sens.push_back(out.baseline_metrics.sensitivity);
                    b_spec.push_back(out.baseline_metrics.specificity);
                    b_acc.push_back(out.baseline_metrics.accuracy);
                }
                cell.repac.pooled_metrics = metrics(cell.repac.pooled);
                cell.baseline.pooled_metrics = metrics(cell.baseline.pooled);
                cell.repac.sensitivity = mean_sd(r_sens);
                cell.repac.specificity = mean_sd(r_spec);
                cell.repac.accuracy = mean_sd(r_acc);
                cell.baseline.sensitivity = mean_sd(b_sens);
                cell.baseline.specificity = mean_sd(b_spec);
                cell.baseline.accuracy = mean_sd(b_acc);

                // Arithmetic identity at low event density: accuracy is bounded
                // below by the specificity contribution of the negative class.
                for (const DetectorCellStats* d : {&cell.repac, &cell.baseline}) {
                    const auto& pc = d->pooled;
                    if (pc.total() == 0) continue;
                    const double neg_frac =
                        static_cast<double>(pc.tn + pc.fp) / static_cast<double>(pc.total());
                    if (d->pooled_metrics.accuracy + 1e-12 <
                        d->pooled_metrics.specificity * neg_frac)
                        throw std::logic_error("bench: accuracy identity violated");
                }

                report.cells.push_back(std::move(cell));
                ++cell_index;
                if (on_cell) on_cell(report.cells.back(), cell_index, total_cells);
            }
        }
    }
    return report;
}

std::string BenchReport::csv() const {
    std::string s = "snr_db,m,L_s,detector,sensitivity,specificity,accuracy,trials,failures\n";
    for (const CellResult& cell : cells) {
        for (const auto& [name, d] :
             {std::pair<const char*, const DetectorCellStats*>{"repac", &cell.repac},
              std::pair<const char*, const DetectorCellStats*>{"baseline", &cell.baseline}}) {
            append_num(s, "%g", cell.snr_db);
            s += ',';
            append_num(s, "%g", cell.m);
            s += ',';
            append_num(s, "%g", cell.l_s);
            s += ',';
            s += name;
            s += ',';
            s += fmt_metric(d->pooled_metrics.sensitivity);
            s += ',';
            s += fmt_metric(d->pooled_metrics.specificity);
            s += ',';
            s += fmt_metric(d->pooled_metrics.accuracy);
            s += ',';
            s += std::to_string(cell.trials);
            s += ',';
            s += std::to_string(d->failures);
            s += '\n';
        }
    }
    return s;
}

std::string BenchReport::summary() const {
    std::string s;
    s += "PAC detector benchmark\n";
    s += "======================\n\n";
    s += "grid:\n";
    auto add_list = [&](const char* name, const std::vector<double>& v) {
        s += "  ";
        s += name;
        s += ":";
        for (double x : v) {
            s += ' ';
            append_num(s, "%g", x);
        }
        s += '\n';
    };
    add_list("snr_db", grid.snr_values);
    add_list("m", grid.m_values);
    add_list("L_s", grid.l_values);
    s += "  f_l: ";
    if (grid.f_l_policy == FreqPolicy::Uniform) {
        s += "uniform ";
        append_num(s, "%g", grid.f_l_range.lo);
        s += "..";
        append_num(s, "%g", grid.f_l_range.hi);
    } else {
        s += "fixed ";
        append_num(s, "%g", grid.f_l_fixed);
    }
    s += " Hz\n  f_h: ";
    if (grid.f_h_policy == FreqPolicy::Uniform) {
        s += "uniform ";
        append_num(s, "%g", grid.f_h_range.lo);
        s += "..";
        append_num(s, "%g", grid.f_h_range.hi);
    } else {
        s += "fixed ";
        append_num(s, "%g", grid.f_h_fixed);
    }
    s += " Hz\n";
    s += "  trials_per_cell: " + std::to_string(grid.trials_per_cell) + "\n";
    s += "  duration_s: ";
    append_num(s, "%g", grid.duration_s);
    s += "\n  fs: ";
    append_num(s, "%g", grid.fs);
    s += "\n  event_density: ";
    append_num(s, "%g", grid.event_density);
    s += "\n  master_seed: " + std::to_string(grid.master_seed) + "\n\n";

    for (const CellResult& cell : cells) {
        s += "cell snr=";
        append_num(s, "%g", cell.snr_db);
        s += " dB, m=";
        append_num(s, "%g", cell.m);
        s += ", L=";
        append_num(s, "%g", cell.l_s);
        s += " s  (" + std::to_string(cell.trials) + " trials)\n";
        std::uint64_t digest = 1469598103934665603ULL;
        for (std::uint64_t h : cell.record_hashes) {
            digest ^= h;
            digest *= 1099511628211ULL;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
        s += "  records digest: ";
        s += buf;
        s += '\n';
        for (const auto& [name, d] :
             {std::pair<const char*, const DetectorCellStats*>{"repac   ", &cell.repac},
              std::pair<const char*, const DetectorCellStats*>{"baseline", &cell.baseline}}) {
            s += "  ";
            s += name;
            s += " sens=" + fmt_metric(d->pooled_metrics.sensitivity);
            s += " (" + fmt_metric(d->sensitivity.mean) + " +- " + fmt_metric(d->sensitivity.sd) + ")";
            s += " spec=" + fmt_metric(d->pooled_metrics.specificity);
            s += " acc=" + fmt_metric(d->pooled_metrics.accuracy);
            s += " failures=" + std::to_string(d->failures);
            s += '\n';
        }
    }
    return s;
}

std::vector<std::string> check_gates(const BenchReport& report, const BenchGates& gates) {
    std::vector<std::string> violations;
    auto cell_tag = [](const CellResult& c) {
        std::string t = "cell snr=";
        append_num(t, "%g", c.snr_db);
        t += " m=";
        append_num(t, "%g", c.m);
        t += " L=";
        append_num(t, "%g", c.l_s);
        return t;
    };
    for (const CellResult& cell : report.cells) {
        const Metrics& r = cell.repac.pooled_metrics;
        const Metrics& b = cell.baseline.pooled_metrics;
        if (!std::isnan(gates.min_repac_sensitivity) &&
            !(r.sensitivity >= gates.min_repac_sensitivity))
            violations.push_back(cell_tag(cell) + ": repac sensitivity " +
                                 fmt_metric(r.sensitivity) + " < " +
                                 fmt_metric(gates.min_repac_sensitivity));
        if (!std::isnan(gates.min_sensitivity_gap) &&
            !(r.sensitivity - b.sensitivity >= gates.min_sensitivity_gap))
            violations.push_back(cell_tag(cell) + ": sensitivity gap " +
                                 fmt_metric(r.sensitivity - b.sensitivity) + " < " +
                                 fmt_metric(gates.min_sensitivity_gap));
        if (!std::isnan(gates.min_specificity)) {
            if (!(r.specificity >= gates.min_specificity))
                violations.push_back(cell_tag(cell) + ": repac specificity " +
                                     fmt_metric(r.specificity) + " < " +
                                     fmt_metric(gates.min_specificity));
            if (!(b.specificity >= gates.min_specificity))
                violations.push_back(cell_tag(cell) + ": baseline specificity " +
                                     fmt_metric(b.specificity) + " < " +
                                     fmt_metric(gates.min_specificity));
        }
        if (!std::isnan(gates.min_accuracy)) {
            if (!(r.accuracy >= gates.min_accuracy))
                violations.push_back(cell_tag(cell) + ": repac accuracy " +
                                     fmt_metric(r.accuracy) + " < " +
                                     fmt_metric(gates.min_accuracy));
            if (!(b.accuracy >= gates.min_accuracy))
                violations.push_back(cell_tag(cell) + ": baseline accuracy " +
                                     fmt_metric(b.accuracy) + " < " +
                                     fmt_metric(gates.min_accuracy));
        }
    }
    return violations;
}

}  // namespace repac
