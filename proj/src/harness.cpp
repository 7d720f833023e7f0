#include "dsce/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dsce/recovery.hpp"
#include "dsce/smoothing.hpp"
#include "json.hpp"

namespace dsce {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Stats {
    double mean = kNan;
    double se = kNan;
    int count = 0;
};

Stats dstats(const std::vector<double>& v) {
    Stats s;
    s.count = static_cast<int>(v.size());
    if (v.empty()) return s;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / s.count;
    if (s.count >= 2) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.se = std::sqrt(ss / (s.count - 1) / s.count);
    } else {
        s.se = 0.0;
    }
    return s;
}

std::string axis_label(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::SnrDb: return "snrDb";
        case SweepAxis::DopplerNorm: return "dopplerNorm";
        case SweepAxis::Antennas: return "antennas";
    }
    return "axis";
}

std::string axis_key(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::SnrDb: return "snr";
        case SweepAxis::DopplerNorm: return "doppler";
        case SweepAxis::Antennas: return "antennas";
    }
    return "snr";
}

SweepAxis axis_from_key(const std::string& key) {
    if (key == "snr") return SweepAxis::SnrDb;
    if (key == "doppler") return SweepAxis::DopplerNorm;
    if (key == "antennas") return SweepAxis::Antennas;
    throw std::invalid_argument("unknown sweep axis '" + key + "'");
}

nlohmann::json spec_json(const SweepSpec& spec) {
    nlohmann::json j;
    j["n"] = spec.base.n;
    j["g"] = spec.base.g;
    j["l"] = spec.base.l;
    j["k"] = spec.base.k;
    j["d"] = spec.base.d;
    j["nt"] = spec.base.nt;
    j["dopplerNorm"] = spec.base.doppler_norm;
    if (std::isinf(spec.base.snr_db))
        j["snrDb"] = "inf";
    else
        j["snrDb"] = spec.base.snr_db;
    j["seed"] = spec.base.seed;
    j["oscillators"] = spec.base.oscillators;
    j["tapPowers"] = spec.base.tap_powers;
    j["bemExact"] = spec.base.bem_exact;
    j["zeroData"] = spec.base.zero_data;
    j["axis"] = axis_key(spec.axis);
    j["points"] = spec.points;
    j["trials"] = spec.trials;
    j["pilotRule"] = spec.pilot_rule == PilotRule::Proportional ? "proportional" : "fixed";
    j["threads"] = spec.threads;
    return j;
}

SweepSpec spec_from_parsed(const nlohmann::json& j) {
    SweepSpec spec;
    spec.base.n = j.value("n", spec.base.n);
    spec.base.g = j.value("g", spec.base.g);
    spec.base.l = j.value("l", spec.base.l);
    spec.base.k = j.value("k", spec.base.k);
    spec.base.d = j.value("d", spec.base.d);
    spec.base.nt = j.value("nt", spec.base.nt);
    spec.base.doppler_norm = j.value("dopplerNorm", spec.base.doppler_norm);
    if (j.contains("snrDb")) {
        if (j["snrDb"].is_string()) {
            if (j["snrDb"].get<std::string>() != "inf")
                throw std::invalid_argument("snrDb must be a number or \"inf\"");
            spec.base.snr_db = std::numeric_limits<double>::infinity();
        } else {
            spec.base.snr_db = j["snrDb"].get<double>();
        }
    }
    spec.base.seed = j.value("seed", spec.base.seed);
    spec.base.oscillators = j.value("oscillators", spec.base.oscillators);
    spec.base.tap_powers = j.value("tapPowers", spec.base.tap_powers);
    spec.base.bem_exact = j.value("bemExact", spec.base.bem_exact);
    spec.base.zero_data = j.value("zeroData", spec.base.zero_data);
    spec.axis = axis_from_key(j.value("axis", std::string("snr")));
    spec.points = j.value("points", spec.points);
    spec.trials = j.value("trials", spec.trials);
    std::string rule = j.value("pilotRule", std::string("fixed"));
    if (rule == "proportional")
        spec.pilot_rule = PilotRule::Proportional;
    else if (rule == "fixed")
        spec.pilot_rule = PilotRule::FixedG;
    else
        throw std::invalid_argument("unknown pilot rule '" + rule + "'");
    spec.threads = j.value("threads", spec.threads);
    return spec;
}

std::string iso_timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
}

std::string render_svg(const SweepTable& table) {
    const double w = 800, h = 520;
    const double x0 = 80, x1 = 760, y0 = 60, y1 = 440;

    struct Series {
        const char* label;
        const char* color;
        std::vector<std::pair<double, double>> pts;
    };
    std::vector<Series> series{{kEstimatorSomp, "#1f6fb4", {}},
                               {kEstimatorSmooth, "#2c9646", {}},
                               {kEstimatorLs, "#c9462c", {}}};
    double ax_min = 0, ax_max = 1, v_min = 0, v_max = 1;
    bool any = false;
    for (const PointSummary& p : table.points) {
        double means[3] = {p.mean_somp, p.mean_smooth, p.mean_ls};
        for (int s = 0; s < 3; ++s) {
            if (!std::isfinite(means[s])) continue;
            series[s].pts.push_back({p.axis_value, means[s]});
            if (!any) {
                ax_min = ax_max = p.axis_value;
                v_min = v_max = means[s];
                any = true;
            } else {
                ax_min = std::min(ax_min, p.axis_value);
                ax_max = std::max(ax_max, p.axis_value);
                v_min = std::min(v_min, means[s]);
                v_max = std::max(v_max, means[s]);
            }
        }
    }
    if (ax_max - ax_min < 1e-12) { ax_min -= 1.0; ax_max += 1.0; }
    double pad = std::max(1.0, 0.05 * (v_max - v_min));
    v_min -= pad;
    v_max += pad;

    auto px = [&](double v) { return x0 + (v - ax_min) / (ax_max - ax_min) * (x1 - x0); };
    auto py = [&](double v) { return y1 - (v - v_min) / (v_max - v_min) * (y1 - y0); };
    auto fmt3 = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4g", v);
        return std::string(buf);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << ' ' << h
        << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
    svg << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">"
        << "mean NMSE (dB) vs " << axis_label(table.spec.axis) << "</text>\n";

    for (int t = 0; t <= 5; ++t) {
        double vx = ax_min + t * (ax_max - ax_min) / 5;
        double vy = v_min + t * (v_max - v_min) / 5;
        svg << "<line x1=\"" << px(vx) << "\" y1=\"" << y1 << "\" x2=\"" << px(vx) << "\" y2=\""
            << y0 << "\" stroke=\"#e0e0e0\"/>\n";
        svg << "<line x1=\"" << x0 << "\" y1=\"" << py(vy) << "\" x2=\"" << x1 << "\" y2=\""
            << py(vy) << "\" stroke=\"#e0e0e0\"/>\n";
        svg << "<text x=\"" << px(vx) << "\" y=\"" << y1 + 22
            << "\" text-anchor=\"middle\">" << fmt3(vx) << "</text>\n";
        svg << "<text x=\"" << x0 - 8 << "\" y=\"" << py(vy) + 4
            << "\" text-anchor=\"end\">" << fmt3(vy) << "</text>\n";
    }
    svg << "<line x1=\"" << x0 << "\" y1=\"" << y1 << "\" x2=\"" << x1 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << h - 15
        << "\" text-anchor=\"middle\">" << axis_label(table.spec.axis) << "</text>\n";

    for (const Series& s : series) {
        if (s.pts.empty()) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [vx, vy] : s.pts) svg << px(vx) << ',' << py(vy) << ' ';
        svg << "\"/>\n";
        for (const auto& [vx, vy] : s.pts)
            svg << "<circle cx=\"" << px(vx) << "\" cy=\"" << py(vy) << "\" r=\"3\" fill=\""
                << s.color << "\"/>\n";
    }

    double ly = y0 + 10;
    for (const Series& s : series) {
        svg << "<line x1=\"" << x1 - 150 << "\" y1=\"" << ly << "\" x2=\"" << x1 - 120
            << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << x1 - 112 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
        ly += 20;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace

TrialResult run_trial(const SystemConfig& cfg, std::uint64_t seed) {
    TrialResult tr;
    tr.seed = seed;
    try {
        cfg.validate();
        Rng rng = make_rng(seed);

        std::vector<int> support = generate_support(cfg.l, cfg.k, rng);
        ChannelRealization truth = generate_ds_channel(cfg, support, rng);
        PilotPlan plan = make_pilot_plan(cfg.n, cfg.g, cfg.d, cfg.nt, rng);

        std::vector<OfdmSymbol> syms;
        syms.reserve(cfg.nt);
        for (int a = 0; a < cfg.nt; ++a) {
            CVector data = cfg.zero_data ? CVector(CVector::Zero(plan.data_count()))
                                         : qpsk_data(plan.data_count(), rng);
            syms.push_back(ofdm_modulate(assemble_frame(plan, data, a)));
        }

        CVector y_time = add_noise(apply_channel_time(truth, syms), cfg.snr_db, rng);
        CVector y_freq = ofdm_demodulate(y_time);

        EstimateInfo info;
        ChannelRealization est = estimate_channel(y_freq, plan, cfg, Solver::Somp, &info);
        tr.nmse_somp = nmse_db(est, truth);
        tr.mu = info.mu;
        tr.support_hit = est.support == truth.support;

        if (cfg.doppler_norm < 0.2 && cfg.n % 4 == 0) {
            ChannelRealization smooth = linear_smooth(est, est.support);
            tr.nmse_smooth = nmse_db(smooth, truth);
            tr.smooth_applicable = true;
        }

        ChannelRealization ls = estimate_channel(y_freq, plan, cfg, Solver::Ls);
        tr.nmse_ls = nmse_db(ls, truth);
    } catch (const std::exception& e) {
        tr.failed = true;
        tr.error = e.what();
    }
    return tr;
}

SystemConfig point_config(const SweepSpec& spec, double axis_value) {
    SystemConfig cfg = spec.base;
    switch (spec.axis) {
        case SweepAxis::SnrDb: cfg.snr_db = axis_value; break;
        case SweepAxis::DopplerNorm: cfg.doppler_norm = axis_value; break;
        case SweepAxis::Antennas: cfg.nt = static_cast<int>(std::lround(axis_value)); break;
    }
    if (spec.pilot_rule == PilotRule::Proportional) cfg.g = 3 * cfg.k * cfg.nt;
    return cfg;
}

SweepTable run_sweep(const SweepSpec& spec) {
    if (spec.points.empty()) throw std::invalid_argument("run_sweep: no sweep points");
    if (spec.trials <= 0) throw std::invalid_argument("run_sweep: trials must be positive");
    const int threads = std::max(1, spec.threads);

    SweepTable table;
    table.spec = spec;
    for (std::size_t pi = 0; pi < spec.points.size(); ++pi) {
        const SystemConfig cfg = point_config(spec, spec.points[pi]);
        std::vector<TrialResult> trials(spec.trials);

        auto worker = [&](int first, int last) {
            for (int ti = first; ti < last; ++ti)
                trials[ti] = run_trial(cfg, derive_seed(spec.base.seed, pi, ti));
        };
        if (threads == 1 || spec.trials == 1) {
            worker(0, spec.trials);
        } else {
            // Trials are indexed, so the partition cannot affect the results.
            std::vector<std::thread> pool;
            const int per = (spec.trials + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                int first = t * per;
                int last = std::min(spec.trials, first + per);
                if (first >= last) break;
                pool.emplace_back(worker, first, last);
            }
            for (std::thread& th : pool) th.join();
        }

        std::vector<double> somp_vals, smooth_vals, ls_vals;
        double mu_sum = 0.0;
        int hits = 0, ok = 0, failed = 0;
        std::string first_error;
        for (const TrialResult& tr : trials) {
            if (tr.failed) {
                if (first_error.empty()) first_error = tr.error;
                failed++;
                continue;
            }
            ok++;
            somp_vals.push_back(tr.nmse_somp);
            ls_vals.push_back(tr.nmse_ls);
            if (tr.smooth_applicable) smooth_vals.push_back(tr.nmse_smooth);
            mu_sum += tr.mu;
            if (tr.support_hit) hits++;
        }
        if (ok == 0)
            throw std::runtime_error("run_sweep: every trial failed at point " +
                                     fmt_double(spec.points[pi]) + ": " + first_error);

        Stats s_somp = dstats(somp_vals);
        Stats s_smooth = dstats(smooth_vals);
        Stats s_ls = dstats(ls_vals);

        PointSummary p;
        p.axis_value = spec.points[pi];
        p.mean_somp = s_somp.mean;
        p.se_somp = s_somp.se;
        p.mean_smooth = s_smooth.mean;
        p.se_smooth = s_smooth.se;
        p.mean_ls = s_ls.mean;
        p.se_ls = s_ls.se;
        p.mean_mu = mu_sum / ok;
        p.support_hit_rate = static_cast<double>(hits) / ok;
        p.trials_ok = ok;
        p.trials_failed = failed;
        table.points.push_back(p);
    }
    return table;
}

std::string to_csv(const SweepTable& table) {
    std::ostringstream out;
    out << "axisValue,estimator,meanNmseDb,stderr,muPhi,supportHitRate,trials,seed\n";
    for (const PointSummary& p : table.points) {
        struct Row {
            const char* name;
            double mean, se, hit;
        };
        Row rows[3] = {{kEstimatorSomp, p.mean_somp, p.se_somp, p.support_hit_rate},
                       {kEstimatorSmooth, p.mean_smooth, p.se_smooth, kNan},
                       {kEstimatorLs, p.mean_ls, p.se_ls, kNan}};
        for (const Row& r : rows) {
            out << fmt_double(p.axis_value) << ',' << r.name << ',' << fmt_double(r.mean) << ','
                << fmt_double(r.se) << ',' << fmt_double(p.mean_mu) << ',' << fmt_double(r.hit)
                << ',' << p.trials_ok << ',' << table.spec.base.seed << '\n';
        }
    }
    return out.str();
}

std::vector<CsvRow> parse_csv(const std::string& text) {
    std::istringstream lines(text);
    std::string line;
    if (!std::getline(lines, line) ||
        line != "axisValue,estimator,meanNmseDb,stderr,muPhi,supportHitRate,trials,seed")
        throw std::invalid_argument("parse_csv: unrecognized header");
    std::vector<CsvRow> rows;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string cell;
        std::vector<std::string> parts;
        while (std::getline(cells, cell, ',')) parts.push_back(cell);
        if (parts.size() != 8) throw std::invalid_argument("parse_csv: malformed row: " + line);
        CsvRow row;
        row.axis_value = std::strtod(parts[0].c_str(), nullptr);
        row.estimator = parts[1];
        row.mean_nmse_db = std::strtod(parts[2].c_str(), nullptr);
        row.std_err = std::strtod(parts[3].c_str(), nullptr);
        row.mu = std::strtod(parts[4].c_str(), nullptr);
        row.support_hit_rate = std::strtod(parts[5].c_str(), nullptr);
        row.trials = std::stoi(parts[6]);
        row.seed = std::stoull(parts[7]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string to_json(const SweepTable& table) {
    nlohmann::json j;
    j["version"] = version_string();
    j["spec"] = spec_json(table.spec);
    j["axis"] = axis_label(table.spec.axis);
    nlohmann::json points = nlohmann::json::array();
    for (const PointSummary& p : table.points) {
        nlohmann::json pj;
        pj["axisValue"] = p.axis_value;
        pj["estimators"] = {
            {kEstimatorSomp, {{"meanNmseDb", p.mean_somp}, {"stderr", p.se_somp}}},
            {kEstimatorSmooth, {{"meanNmseDb", p.mean_smooth}, {"stderr", p.se_smooth}}},
            {kEstimatorLs, {{"meanNmseDb", p.mean_ls}, {"stderr", p.se_ls}}},
        };
        pj["muPhi"] = p.mean_mu;
        pj["supportHitRate"] = p.support_hit_rate;
        pj["trialsOk"] = p.trials_ok;
        pj["trialsFailed"] = p.trials_failed;
        points.push_back(std::move(pj));
    }
    j["points"] = std::move(points);
    return j.dump(2) + "\n";
}

std::string spec_to_json(const SweepSpec& spec) { return spec_json(spec).dump(2) + "\n"; }

SweepSpec spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("spec_from_json: ") + e.what());
    }
    try {
        // A run manifest nests the sweep spec under "spec"; accept it
        // directly so a manifest file replays its run.
        if (j.is_object() && j.contains("spec") && j["spec"].is_object())
            return spec_from_parsed(j["spec"]);
        return spec_from_parsed(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("spec_from_json: ") + e.what());
    }
}

void emit_results(const SweepTable& table, const std::string& path, const std::string& format,
                  const std::string& plot_path) {
    if (format == "csv")
        write_file(path, to_csv(table));
    else if (format == "json")
        write_file(path, to_json(table));
    else
        throw std::invalid_argument("emit_results: format must be csv or json");

    nlohmann::json manifest;
    manifest["version"] = version_string();
    manifest["generatedAt"] = iso_timestamp();
    manifest["format"] = format;
    manifest["output"] = path;
    manifest["spec"] = spec_json(table.spec);
    write_file(path + ".manifest.json", manifest.dump(2) + "\n");

    if (!plot_path.empty()) write_file(plot_path, render_svg(table));
}

std::string version_string() { return "dsce 1.0"; }

}  // namespace dsce
