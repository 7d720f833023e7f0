#include "dsce/verify.hpp"

#include <cmath>
#include <sstream>

#include "dsce/harness.hpp"
#include "dsce/recovery.hpp"
#include "dsce/smoothing.hpp"

namespace dsce {

double shift_identity_error(int n, int d_order, int d_total) {
    BasisMatrix basis = cebem_basis(n, d_total);
    if (d_order < 0 || d_order >= d_total)
        throw std::invalid_argument("shift_identity_error: order out of range");
    CMatrix w = dft_matrix(n);
    CMatrix a = w * basis.v.col(d_order).asDiagonal() * w.adjoint();

    // Conjugating a basis column by the DFT yields a cyclic down-shift by the
    // column's integer frequency offset.
    const int alpha = d_order - basis.center();
    CMatrix shift = CMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) shift(((k + alpha) % n + n) % n, k) = 1.0;

    return (a - shift).norm();
}

double selection_identity_error(int n, int g, int d, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    PilotPlan plan = make_pilot_plan(n, g, d, 1, rng);
    CVector data = qpsk_data(plan.data_count(), rng);
    CVector frame = assemble_frame(plan, data, 0);

    BasisMatrix basis = cebem_basis(n, d);
    CMatrix w = dft_matrix(n);
    IndexSets sets = index_sets(plan);

    // Rows of (W diag(v_d) W^H) diag(frame) taken at the set shifted by order
    // db: the pilot row of the identity when db == d, all zeros otherwise.
    // The guards make this hold with live data on the free subcarriers.
    double err = 0.0;
    for (int dd = 0; dd < d; ++dd) {
        CMatrix a = w * basis.v.col(dd).asDiagonal() * w.adjoint() * frame.asDiagonal();
        for (int db = 0; db < d; ++db) {
            for (int gi = 0; gi < g; ++gi) {
                Eigen::RowVectorXcd row = a.row(sets.sets[db][gi]);
                if (db == dd) row(plan.centers[gi]) -= plan.values(gi, 0);
                err = std::max(err, row.cwiseAbs().maxCoeff());
            }
        }
    }
    return err;
}

ExactnessReport pipeline_exactness(const SystemConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng = make_rng(seed);

    std::vector<int> support = generate_support(cfg.l, cfg.k, rng);
    ChannelRealization truth = generate_ds_channel(cfg, support, rng);
    PilotPlan plan = make_pilot_plan(cfg.n, cfg.g, cfg.d, cfg.nt, rng);

    std::vector<OfdmSymbol> syms;
    for (int a = 0; a < cfg.nt; ++a) {
        CVector data = cfg.zero_data ? CVector(CVector::Zero(plan.data_count()))
                                     : qpsk_data(plan.data_count(), rng);
        syms.push_back(ofdm_modulate(assemble_frame(plan, data, a)));
    }
    CVector y_time = add_noise(apply_channel_time(truth, syms), cfg.snr_db, rng);
    CVector y_freq = ofdm_demodulate(y_time);

    BasisMatrix basis = cebem_basis(cfg.n, cfg.d);
    BemCoefficients coef = bem_fit(truth, basis);
    CMatrix x = pack_coefficients(coef, cfg.n);
    CMatrix yr = extract_observations(y_freq, index_sets(plan));
    MeasurementMatrix m = build_measurement_matrix(plan, cfg.l);

    ExactnessReport report;
    report.rel_residual = (yr - m.phi * x).norm() / (m.phi * x).norm();
    ChannelRealization est = estimate_channel(y_freq, plan, cfg, Solver::Somp);
    report.nmse_db = nmse_db(est, truth);
    return report;
}

double ici_free_error(const SystemConfig& cfg, std::uint64_t seed) {
    // A basis-exact channel acts in frequency as D shifted diagonals, so
    // everything that lands on an observation index originates at most D-1
    // subcarriers away. The guard band is exactly that wide, which makes the
    // extracted observations blind to the data subcarriers.
    SystemConfig exact = cfg;
    exact.bem_exact = true;
    exact.validate();
    Rng rng = make_rng(seed);

    std::vector<int> support = generate_support(exact.l, exact.k, rng);
    ChannelRealization ch = generate_ds_channel(exact, support, rng);
    PilotPlan plan = make_pilot_plan(exact.n, exact.g, exact.d, exact.nt, rng);

    const int slots = exact.n - exact.g * (2 * exact.d - 1);
    std::vector<OfdmSymbol> live;
    std::vector<OfdmSymbol> muted;
    for (int a = 0; a < exact.nt; ++a) {
        live.push_back(ofdm_modulate(assemble_frame(plan, qpsk_data(slots, rng), a)));
        muted.push_back(ofdm_modulate(assemble_frame(plan, CVector::Zero(slots), a)));
    }
    IndexSets sets = index_sets(plan);
    CMatrix with_data =
        extract_observations(ofdm_demodulate(apply_channel_time(ch, live)), sets);
    CMatrix without =
        extract_observations(ofdm_demodulate(apply_channel_time(ch, muted)), sets);
    return (with_data - without).cwiseAbs().maxCoeff();
}

std::vector<CheckResult> run_identity_checks() {
    std::vector<CheckResult> results;
    auto push = [&](const std::string& name, bool passed, const std::string& detail) {
        results.push_back({name, passed, detail});
    };
    std::ostringstream detail;

    double worst_shift = 0.0;
    for (int n : {8, 16, 64})
        for (int order = 0; order < 3; ++order)
            worst_shift = std::max(worst_shift, shift_identity_error(n, order, 3));
    worst_shift = std::max(worst_shift, shift_identity_error(16, 4, 5));
    detail.str("");
    detail << "frobenius error " << worst_shift;
    push("shift identity", worst_shift < 1e-9, detail.str());

    double sel = selection_identity_error(32, 4, 3, 7);
    detail.str("");
    detail << "max entry error " << sel;
    push("selection identity", sel < 1e-9, detail.str());

    SystemConfig cfg;
    cfg.n = 256;
    cfg.g = 24;
    cfg.l = 16;
    cfg.k = 2;
    cfg.d = 3;
    cfg.nt = 4;
    cfg.bem_exact = true;
    cfg.zero_data = true;
    cfg.snr_db = std::numeric_limits<double>::infinity();
    ExactnessReport exact = pipeline_exactness(cfg, 7);
    detail.str("");
    detail << "relative residual " << exact.rel_residual << ", nmse " << exact.nmse_db << " dB";
    push("pipeline exactness", exact.rel_residual < 1e-9 && exact.nmse_db <= -120.0, detail.str());

    double ici = ici_free_error(cfg, 7);
    detail.str("");
    detail << "max observation difference " << ici;
    push("data-zeroing invariance", ici < 1e-9, detail.str());

    {
        ChannelRealization line;
        line.support = {0};
        CMatrix h(64, 1);
        for (int i = 0; i < 64; ++i)
            h(i, 0) = std::complex<double>(0.3, -0.8) +
                      std::complex<double>(0.01, 0.002) * static_cast<double>(i);
        line.h = {h};
        ChannelRealization once = linear_smooth(line, {0});
        ChannelRealization twice = linear_smooth(once, {0});
        double reproduce = (once.h[0] - line.h[0]).norm();
        double drift = (twice.h[0] - once.h[0]).norm();
        detail.str("");
        detail << "line reproduction " << reproduce << ", idempotence drift " << drift;
        push("smoothing invariants", reproduce < 1e-12 && drift < 1e-12, detail.str());
    }

    return results;
}

}  // namespace dsce
