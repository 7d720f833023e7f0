// Acceptance gate: each criterion prints one [PASS]/[FAIL] line with the
// measured numbers. Exit code 0 only when every requested criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dsce/harness.hpp"
#include "dsce/recovery.hpp"
#include "dsce/smoothing.hpp"
#include "dsce/verify.hpp"

using namespace dsce;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(double v, const char* spec = "%.3f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

SystemConfig desk_config() {
    SystemConfig cfg;
    cfg.n = 256;
    cfg.g = 24;
    cfg.l = 16;
    cfg.k = 2;
    cfg.d = 3;
    cfg.nt = 4;
    cfg.doppler_norm = 0.057;
    cfg.snr_db = 20.0;
    return cfg;
}

// The 16-antenna trend experiments. Sixteen antennas with two taps each need
// 32 jointly recovered rows, so the pilot budget follows the proportional
// rule G = 3*K*Nt = 96 and the grid grows to N = 1024 to fit the 96 guard
// zones (96 * 5 = 480 > 256 rules the small grid out; with G = 24 the system
// would be underdetermined for any solver).
SystemConfig trend_config() {
    SystemConfig cfg;
    cfg.n = 1024;
    cfg.g = 96;
    cfg.l = 16;
    cfg.k = 2;
    cfg.d = 3;
    cfg.nt = 16;
    cfg.doppler_norm = 0.057;
    cfg.snr_db = 20.0;
    cfg.seed = 42;
    return cfg;
}

// Criteria 3 and 4 share one SNR sweep; compute it once per process.
const SweepTable& snr_sweep() {
    static const SweepTable table = [] {
        SweepSpec spec;
        spec.base = trend_config();
        spec.axis = SweepAxis::SnrDb;
        spec.points = {0, 5, 10, 15, 20, 25, 30};
        spec.trials = 200;
        spec.threads = 1;
        return run_sweep(spec);
    }();
    return table;
}

Outcome criterion_1() {
    SystemConfig cfg = desk_config();
    cfg.bem_exact = true;
    cfg.zero_data = true;
    cfg.snr_db = std::numeric_limits<double>::infinity();

    // The instances are the first five trials of the default-seed experiment
    // at this configuration, exactly as the sweep harness derives them.
    double worst_residual = 0.0, worst_nmse = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 5; ++trial) {
        ExactnessReport report = pipeline_exactness(cfg, derive_seed(cfg.seed, 0, trial));
        worst_residual = std::max(worst_residual, report.rel_residual);
        worst_nmse = std::max(worst_nmse, report.nmse_db);
    }
    Outcome out;
    out.passed = worst_residual < 1e-9 && worst_nmse <= -120.0;
    out.detail = "exact-basis pilot residual <= " + fmt(worst_residual, "%.3e") +
                 " relative, estimate NMSE <= " + fmt(worst_nmse, "%.1f") +
                 " dB over 5 default-experiment trials";
    return out;
}

Outcome criterion_2() {
    double worst_shift = 0.0;
    for (int n : {8, 16, 64})
        for (int order = 0; order < 3; ++order)
            worst_shift = std::max(worst_shift, shift_identity_error(n, order, 3));

    double worst_sel = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed)
        worst_sel = std::max(worst_sel, selection_identity_error(32, 4, 3, seed));

    Outcome out;
    out.passed = worst_shift < 1e-9 && worst_sel < 1e-9;
    out.detail = "shift identity frobenius error " + fmt(worst_shift, "%.3e") +
                 " over N in {8,16,64}, selection identity max error " + fmt(worst_sel, "%.3e") +
                 " on the dense N=32 grid";
    return out;
}

Outcome criterion_3() {
    const SweepTable& table = snr_sweep();
    bool decreasing = true;
    std::string violation;
    for (std::size_t i = 1; i < table.points.size(); ++i) {
        if (!(table.points[i].mean_somp < table.points[i - 1].mean_somp)) {
            decreasing = false;
            violation = fmt(table.points[i - 1].mean_somp) + " dB at " +
                        fmt(table.points[i - 1].axis_value, "%.0f") + " dB SNR vs " +
                        fmt(table.points[i].mean_somp) + " dB at " +
                        fmt(table.points[i].axis_value, "%.0f") + " dB SNR";
            break;
        }
    }
    const PointSummary& at20 = table.points[4];
    double gap = at20.mean_ls - at20.mean_somp;

    Outcome out;
    out.passed = decreasing && gap >= 5.0;
    std::ostringstream detail;
    if (decreasing)
        detail << "mean NMSE strictly decreasing over SNR 0..30";
    else
        detail << "monotonicity violated: " << violation;
    detail << "; at 20 dB somp " << fmt(at20.mean_somp) << " dB vs ls " << fmt(at20.mean_ls)
           << " dB (gap " << fmt(gap) << " dB, need >= 5)";
    out.detail = detail.str();
    return out;
}

Outcome criterion_4() {
    const SweepTable& table = snr_sweep();
    bool never_worse = true;
    std::string violation;
    for (const PointSummary& p : table.points) {
        if (p.axis_value < 10.0) continue;
        if (!(p.mean_smooth <= p.mean_somp)) {
            never_worse = false;
            violation = "smoothed " + fmt(p.mean_smooth) + " dB vs raw " + fmt(p.mean_somp) +
                        " dB at " + fmt(p.axis_value, "%.0f") + " dB SNR";
            break;
        }
    }
    const PointSummary& at20 = table.points[4];
    double gain = at20.mean_somp - at20.mean_smooth;

    Outcome out;
    out.passed = never_worse && gain >= 1.0;
    std::ostringstream detail;
    if (never_worse)
        detail << "smoothing never hurts for SNR >= 10";
    else
        detail << "smoothing regression: " << violation;
    detail << "; smoothing gain at 20 dB " << fmt(gain) << " dB (need >= 1)";
    out.detail = detail.str();
    return out;
}

Outcome criterion_5() {
    SweepSpec spec;
    spec.base = trend_config();
    spec.axis = SweepAxis::DopplerNorm;
    spec.points = {0.02, 0.057, 0.1, 0.15, 0.2};
    spec.trials = 200;
    spec.threads = 1;
    SweepTable table = run_sweep(spec);

    int inversions = 0;
    double worst_inversion = 0.0;
    for (std::size_t i = 1; i < table.points.size(); ++i) {
        double step = table.points[i].mean_somp - table.points[i - 1].mean_somp;
        if (step < 0.0) {
            inversions++;
            worst_inversion = std::max(worst_inversion, -step);
        }
    }
    Outcome out;
    out.passed = inversions == 0 || (inversions == 1 && worst_inversion <= 0.5);
    std::ostringstream detail;
    detail << "mean NMSE from " << fmt(table.points.front().mean_somp) << " dB at nu=0.02 to "
           << fmt(table.points.back().mean_somp) << " dB at nu=0.2, " << inversions
           << " inversion(s)";
    if (inversions > 0) detail << " worst " << fmt(worst_inversion) << " dB (allow one <= 0.5)";
    out.detail = detail.str();
    return out;
}

Outcome criterion_6() {
    SweepSpec spec;
    spec.base = desk_config();
    spec.base.n = 1024;
    spec.base.seed = 42;
    spec.axis = SweepAxis::Antennas;
    spec.points = {4, 9, 16, 25};
    spec.pilot_rule = PilotRule::Proportional;
    spec.trials = 200;
    spec.threads = 1;
    SweepTable table = run_sweep(spec);

    double lo = table.points[0].mean_somp, hi = table.points[0].mean_somp;
    std::ostringstream per_point;
    for (const PointSummary& p : table.points) {
        lo = std::min(lo, p.mean_somp);
        hi = std::max(hi, p.mean_somp);
        per_point << " Nt=" << fmt(p.axis_value, "%.0f") << ": " << fmt(p.mean_somp) << " dB (se "
                  << fmt(p.se_somp) << ", mean mu " << fmt(p.mean_mu) << ");";
    }
    Outcome out;
    out.passed = hi - lo <= 3.0;
    std::ostringstream detail;
    detail << "pilot groups scaled as 3*K*Nt; mean NMSE spread over Nt in {4,9,16,25} is "
           << fmt(hi - lo) << " dB (need <= 3);" << per_point.str()
           << " small arrays lose support-recovery accuracy as plan coherence rises";
    out.detail = detail.str();
    return out;
}

// Exhaustive single-column search: best least-squares fit over every column.
struct ExhaustivePick {
    int column = -1;
    CMatrix x;
};

ExhaustivePick exhaustive_one_sparse(const CMatrix& phi, const CMatrix& yr) {
    ExhaustivePick best;
    double best_residual = std::numeric_limits<double>::infinity();
    for (int c = 0; c < phi.cols(); ++c) {
        CVector col = phi.col(c);
        double nn = col.squaredNorm();
        if (nn == 0.0) continue;
        Eigen::RowVectorXcd coef = (col.adjoint() * yr) / nn;
        double residual = (yr - col * coef).norm();
        if (residual < best_residual - 1e-15) {
            best_residual = residual;
            best.column = c;
            best.x = CMatrix::Zero(phi.cols(), yr.cols());
            best.x.row(c) = coef;
        }
    }
    return best;
}

Outcome criterion_7() {
    Rng rng = make_rng(2024);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Greedy equals exhaustive search when one column explains the data.
    int agree = 0;
    const int tiny_draws = 100;
    for (int it = 0; it < tiny_draws; ++it) {
        PilotPlan plan = make_pilot_plan(32, 4, 3, 1, rng);
        MeasurementMatrix m = build_measurement_matrix(plan, 4);
        std::uniform_int_distribution<int> pick_col(0, 3);
        int truth_col = pick_col(rng);
        CMatrix x = CMatrix::Zero(4, 3);
        for (int d = 0; d < 3; ++d) x(truth_col, d) = {gauss(rng), gauss(rng)};
        CMatrix yr = m.phi * x;

        SparseSolution greedy = somp(m, yr, 1);
        ExhaustivePick brute = exhaustive_one_sparse(m.phi, yr);
        if (greedy.rows.size() == 1 && greedy.rows[0] == brute.column &&
            (greedy.x - brute.x).norm() <= 1e-9 * brute.x.norm())
            agree++;
    }

    // Joint recovery of a shared two-tap support across two antennas.
    int recovered = 0, low_coherence = 0;
    const int joint_draws = 100;
    for (int it = 0; it < joint_draws; ++it) {
        PilotPlan plan = make_pilot_plan(256, 32, 3, 2, rng);
        MeasurementMatrix m = build_measurement_matrix(plan, 8);
        std::vector<int> taps = generate_support(8, 2, rng);
        std::vector<int> rows;
        for (int a = 0; a < 2; ++a)
            for (int tap : taps) rows.push_back(a * 8 + tap);
        std::sort(rows.begin(), rows.end());
        CMatrix x = CMatrix::Zero(16, 3);
        for (int r : rows)
            for (int d = 0; d < 3; ++d) x(r, d) = {gauss(rng), gauss(rng)};
        CMatrix yr = m.phi * x;

        if (mutual_coherence(m.phi) < 1.0 / 7.0) low_coherence++;
        SparseSolution sol = somp(m, yr, 4);
        if (sol.rows == rows && (sol.x - x).norm() <= 1e-9 * x.norm()) recovered++;
    }

    // The classical coherence condition, checked where it is reachable: a
    // single shared tap over two antennas needs mu below 1/3.
    int qualifying = 0, qualifying_ok = 0;
    for (int it = 0; it < 200; ++it) {
        PilotPlan plan = make_pilot_plan(256, 32, 3, 2, rng);
        MeasurementMatrix m = build_measurement_matrix(plan, 8);
        if (mutual_coherence(m.phi) >= 1.0 / 3.0) continue;
        qualifying++;
        std::uniform_int_distribution<int> pick_tap(0, 7);
        int tap = pick_tap(rng);
        std::vector<int> rows{tap, 8 + tap};
        CMatrix x = CMatrix::Zero(16, 3);
        for (int r : rows)
            for (int d = 0; d < 3; ++d) x(r, d) = {gauss(rng), gauss(rng)};
        SparseSolution sol = somp(m, m.phi * x, 2);
        if (sol.rows == rows) qualifying_ok++;
    }

    Outcome out;
    out.passed = agree == tiny_draws && recovered == joint_draws && qualifying >= 10 &&
                 qualifying_ok == qualifying;
    std::ostringstream detail;
    detail << "greedy = exhaustive in " << agree << "/" << tiny_draws << " tiny draws; exact joint "
           << "support in " << recovered << "/" << joint_draws << " noiseless draws ("
           << low_coherence << " met the mu < 1/7 filter); coherence condition held in "
           << qualifying_ok << "/" << qualifying << " draws with mu < 1/3";
    out.detail = detail.str();
    return out;
}

Outcome criterion_8() {
    Rng rng = make_rng(99);
    int bad_plans = 0;
    struct Shape {
        int n, g, d;
    };
    std::vector<Shape> shapes{{256, 24, 3}, {64, 4, 3}, {45, 9, 3}, {100, 10, 5}, {1024, 96, 3}};
    for (const Shape& sh : shapes) {
        for (int it = 0; it < 200; ++it) {
            std::vector<int> centers = generate_pilot_positions(sh.n, sh.g, sh.d, rng);
            bool ok = std::is_sorted(centers.begin(), centers.end()) &&
                      static_cast<int>(centers.size()) == sh.g;
            std::set<int> occupied;
            for (int c : centers) {
                if (c < 0 || c >= sh.n) ok = false;
                for (int off = -(sh.d - 1); off <= sh.d - 1; ++off) {
                    int idx = ((c + off) % sh.n + sh.n) % sh.n;
                    if (!occupied.insert(idx).second) ok = false;  // overlapping zones
                }
            }
            for (std::size_t i = 0; ok && i < centers.size(); ++i) {
                int next = centers[(i + 1) % centers.size()];
                int gap = (next - centers[i] + sh.n) % sh.n;
                if (centers.size() > 1 && gap < 2 * sh.d - 1) ok = false;
            }
            if (!ok) bad_plans++;
        }
    }

    SystemConfig cfg = desk_config();
    double ici = ici_free_error(cfg, 5);

    ChannelRealization line;
    line.support = {0};
    CMatrix h(64, 2);
    h.setZero();
    for (int i = 0; i < 64; ++i)
        h(i, 0) = std::complex<double>(0.4, 0.9) + std::complex<double>(-0.003, 0.011) * double(i);
    line.h = {h};
    double reproduce = (linear_smooth(line, {0}).h[0] - line.h[0]).norm();

    SystemConfig rough = desk_config();
    rough.doppler_norm = 0.15;
    Rng rng2 = make_rng(7);
    ChannelRealization ch = generate_ds_channel(rough, {1, 9}, rng2);
    ChannelRealization once = linear_smooth(ch, {1, 9});
    ChannelRealization twice = linear_smooth(once, {1, 9});
    double drift = 0.0;
    for (int a = 0; a < rough.nt; ++a) drift = std::max(drift, (twice.h[a] - once.h[a]).norm());

    ChannelRealization truth;
    truth.support = {0};
    CMatrix ht = CMatrix::Constant(16, 1, std::complex<double>(1.0, 0.0));
    truth.h = {ht};
    ChannelRealization doubled = truth, offset = truth, same = truth;
    doubled.h[0] *= 2.0;                       // error power equals signal power
    offset.h[0] *= std::complex<double>(1.1);  // ten percent amplitude error
    double zero_db = nmse_db(doubled, truth);
    double minus20_db = nmse_db(offset, truth);
    double clamp_db = nmse_db(same, truth);
    bool nmse_ok = std::abs(zero_db) < 1e-9 && std::abs(minus20_db + 20.0) < 1e-9 &&
                   clamp_db == kNmseFloorDb;
    bool zero_ref_throws = false;
    ChannelRealization empty = truth;
    empty.h[0].setZero();
    try {
        nmse_db(truth, empty);
    } catch (const std::invalid_argument&) {
        zero_ref_throws = true;
    }

    Outcome out;
    out.passed = bad_plans == 0 && ici < 1e-9 && reproduce < 1e-12 && drift < 1e-12 && nmse_ok &&
                 zero_ref_throws;
    std::ostringstream detail;
    detail << (1000 - bad_plans) << "/1000 pilot plans disjoint and spaced; data-zeroing "
           << "invariance " << fmt(ici, "%.2e") << "; smoothing line error "
           << fmt(reproduce, "%.2e")
           << ", idempotence drift " << fmt(drift, "%.2e") << "; NMSE cases " << fmt(zero_db, "%.2f")
           << "/" << fmt(minus20_db, "%.2f") << "/" << fmt(clamp_db, "%.0f") << " dB"
           << (zero_ref_throws ? "" : "; zero reference did not throw");
    out.detail = detail.str();
    return out;
}

Outcome criterion_9() {
    SweepSpec spec;
    spec.base = desk_config();
    spec.base.seed = 4242;
    spec.axis = SweepAxis::SnrDb;
    spec.points = {0, 10, 20, 30};
    spec.trials = 50;
    spec.threads = 1;

    std::string first = to_csv(run_sweep(spec));
    std::string second = to_csv(run_sweep(spec));
    spec.threads = 8;
    std::string threaded = to_csv(run_sweep(spec));

    Outcome out;
    out.passed = first == second && first == threaded;
    std::ostringstream detail;
    detail << "csv bytes identical across reruns (" << (first == second ? "yes" : "no")
           << ") and across 1 vs 8 threads (" << (first == threaded ? "yes" : "no") << "), "
           << first.size() << " bytes";
    out.detail = detail.str();
    return out;
}

Outcome run_criterion(int idx) {
    switch (idx) {
        case 1: return criterion_1();
        case 2: return criterion_2();
        case 3: return criterion_3();
        case 4: return criterion_4();
        case 5: return criterion_5();
        case 6: return criterion_6();
        case 7: return criterion_7();
        case 8: return criterion_8();
        case 9: return criterion_9();
        default: return {false, "unknown criterion"};
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> requested;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            requested.push_back(std::atoi(argv[++i]));
        } else if (std::strncmp(argv[i], "--criterion=", 12) == 0) {
            requested.push_back(std::atoi(argv[i] + 12));
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
            return 2;
        }
    }
    if (requested.empty())
        for (int c = 1; c <= 9; ++c) requested.push_back(c);

    bool all_passed = true;
    for (int idx : requested) {
        if (idx < 1 || idx > 9) {
            std::fprintf(stderr, "criterion index must be 1..9, got %d\n", idx);
            return 2;
        }
        auto start = std::chrono::steady_clock::now();
        Outcome out = run_criterion(idx);
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s (%.1f s)\n", out.passed ? "PASS" : "FAIL", idx,
                    out.detail.c_str(), elapsed);
        std::fflush(stdout);
        if (!out.passed) all_passed = false;
    }
    return all_passed ? 0 : 1;
}
