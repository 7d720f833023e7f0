#include "dsce/recovery.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dsce/bem.hpp"

namespace dsce {

MeasurementMatrix build_measurement_matrix(const PilotPlan& plan, int l) {
    if (l <= 0 || l > plan.n)
        throw std::invalid_argument("measurement matrix: delay spread out of range");
    if (static_cast<int>(plan.centers.size()) != plan.g || plan.values.rows() != plan.g ||
        plan.values.cols() != plan.nt)
        throw std::invalid_argument("measurement matrix: malformed pilot plan");

    MeasurementMatrix m;
    m.g = plan.g;
    m.nt = plan.nt;
    m.l = l;
    m.n = plan.n;
    m.phi.resize(plan.g, plan.nt * l);
    const double scale = 1.0 / std::sqrt(static_cast<double>(plan.n));
    for (int a = 0; a < plan.nt; ++a)
        for (int tap = 0; tap < l; ++tap)
            for (int g = 0; g < plan.g; ++g)
                m.phi(g, a * l + tap) =
                    plan.values(g, a) *
                    std::polar(scale, -2.0 * M_PI * plan.centers[g] * tap / plan.n);
    return m;
}

double mutual_coherence(const CMatrix& a) {
    if (a.cols() < 2) return 0.0;
    CMatrix unit = a;
    for (int c = 0; c < unit.cols(); ++c) {
        double norm = unit.col(c).norm();
        if (norm == 0.0) throw std::invalid_argument("mutual_coherence: zero column");
        unit.col(c) /= norm;
    }
    CMatrix gram = unit.adjoint() * unit;
    double mu = 0.0;
    for (int r = 0; r < gram.rows(); ++r)
        for (int c = 0; c < gram.cols(); ++c)
            if (r != c) mu = std::max(mu, std::abs(gram(r, c)));
    return mu;
}

CMatrix extract_observations(const CVector& y_freq, const IndexSets& sets) {
    const int d = static_cast<int>(sets.sets.size());
    if (d == 0) throw std::invalid_argument("extract_observations: empty index sets");
    const int g = static_cast<int>(sets.sets[0].size());
    CMatrix yr(g, d);
    for (int dd = 0; dd < d; ++dd) {
        if (static_cast<int>(sets.sets[dd].size()) != g)
            throw std::invalid_argument("extract_observations: ragged index sets");
        for (int gi = 0; gi < g; ++gi) {
            int idx = sets.sets[dd][gi];
            if (idx < 0 || idx >= y_freq.size())
                throw std::out_of_range("extract_observations: index outside the symbol");
            yr(gi, dd) = y_freq[idx];
        }
    }
    return yr;
}

CMatrix pack_coefficients(const BemCoefficients& coef, int n_fft) {
    if (coef.theta.empty()) throw std::invalid_argument("pack_coefficients: no antennas");
    const int nt = coef.antennas();
    const int d = static_cast<int>(coef.theta[0].rows());
    const int l = static_cast<int>(coef.theta[0].cols());
    const double scale = std::sqrt(static_cast<double>(n_fft));
    CMatrix x(nt * l, d);
    for (int a = 0; a < nt; ++a) {
        if (coef.theta[a].rows() != d || coef.theta[a].cols() != l)
            throw std::invalid_argument("pack_coefficients: inconsistent antenna blocks");
        for (int tap = 0; tap < l; ++tap)
            for (int dd = 0; dd < d; ++dd) x(a * l + tap, dd) = scale * coef.theta[a](dd, tap);
    }
    return x;
}

BemCoefficients unpack_coefficients(const CMatrix& x, int nt, int l, int d, int n_fft) {
    if (x.rows() != static_cast<Eigen::Index>(nt) * l || x.cols() != d)
        throw std::invalid_argument("unpack_coefficients: shape mismatch");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_fft));
    BemCoefficients coef;
    coef.theta.reserve(nt);
    for (int a = 0; a < nt; ++a) {
        CMatrix th(d, l);
        for (int tap = 0; tap < l; ++tap)
            for (int dd = 0; dd < d; ++dd) th(dd, tap) = scale * x(a * l + tap, dd);
        coef.theta.push_back(std::move(th));
    }
    for (int tap = 0; tap < l; ++tap) {
        bool active = false;
        for (int a = 0; a < nt && !active; ++a)
            if (coef.theta[a].col(tap).norm() > 0.0) active = true;
        if (active) coef.support.push_back(tap);
    }
    return coef;
}

namespace {

SparseSolution greedy_pursuit(const MeasurementMatrix& m, const CMatrix& y_r, int sparsity,
                              const SompOptions& opt) {
    const CMatrix& phi = m.phi;
    if (y_r.rows() != phi.rows())
        throw std::invalid_argument("somp: observation row count must match the matrix");
    if (sparsity < 0) throw std::invalid_argument("somp: negative sparsity");

    const int cols = static_cast<int>(phi.cols());
    const int g = static_cast<int>(phi.rows());
    SparseSolution sol;
    sol.x = CMatrix::Zero(cols, y_r.cols());
    const double y_norm = y_r.norm();
    if (sparsity == 0 || y_norm == 0.0) return sol;

    RVector col_norm(cols);
    for (int c = 0; c < cols; ++c) col_norm[c] = phi.col(c).norm();

    const bool block = opt.block_select;
    if (block && (m.nt <= 0 || m.l <= 0 || cols != m.nt * m.l))
        throw std::invalid_argument("somp: block selection needs antenna-major column layout");
    const int events_cap = block ? std::min({sparsity, m.l, g / m.nt})
                                 : std::min({sparsity, g, cols});

    std::vector<char> used(block ? m.l : cols, 0);
    std::vector<int> picked;  // selection order
    CMatrix residual = y_r;
    CMatrix coef;

    auto column_score = [&](int c) {
        return (phi.col(c).adjoint() * residual).cwiseAbs().sum() / col_norm[c];
    };

    for (int event = 0; event < events_cap; ++event) {
        int best = -1;
        double best_score = -1.0;
        const int candidates = block ? m.l : cols;
        for (int c = 0; c < candidates; ++c) {
            if (used[c]) continue;
            double score;
            if (block) {
                score = 0.0;
                for (int a = 0; a < m.nt; ++a) {
                    int col = a * m.l + c;
                    if (col_norm[col] == 0.0) { score = -1.0; break; }
                    score += column_score(col);
                }
            } else {
                if (col_norm[c] == 0.0) continue;
                score = column_score(c);
            }
            if (score > best_score) {
                best_score = score;
                best = c;
            }
        }
        if (best < 0) break;
        used[best] = 1;
        if (block) {
            for (int a = 0; a < m.nt; ++a) picked.push_back(a * m.l + best);
        } else {
            picked.push_back(best);
        }

        CMatrix sub(g, picked.size());
        for (std::size_t i = 0; i < picked.size(); ++i) sub.col(i) = phi.col(picked[i]);
        Eigen::ColPivHouseholderQR<CMatrix> qr(sub);
        if (qr.rank() < static_cast<Eigen::Index>(picked.size()))
            throw std::runtime_error("somp: rank-deficient refit at iteration " +
                                     std::to_string(event + 1));
        coef = qr.solve(y_r);
        residual = y_r - sub * coef;
        sol.residual_norms.push_back(residual.norm());
        if (residual.norm() <= opt.rel_residual_tol * y_norm) break;
    }

    for (std::size_t i = 0; i < picked.size(); ++i) sol.x.row(picked[i]) = coef.row(i);
    sol.rows = picked;
    std::sort(sol.rows.begin(), sol.rows.end());
    return sol;
}

}  // namespace

SparseSolution somp(const MeasurementMatrix& m, const CMatrix& y_r, int sparsity,
                    const SompOptions& opt) {
    return greedy_pursuit(m, y_r, sparsity, opt);
}

SparseSolution omp(const MeasurementMatrix& m, const CVector& y, int sparsity,
                   const SompOptions& opt) {
    return greedy_pursuit(m, CMatrix(y), sparsity, opt);
}

CMatrix ls_estimate(const MeasurementMatrix& m, const CMatrix& y_r) {
    if (y_r.rows() != m.phi.rows())
        throw std::invalid_argument("ls_estimate: observation row count must match the matrix");
    // Minimum-norm least squares; the pilot equations are usually underdetermined.
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(m.phi);
    return cod.solve(y_r);
}

ChannelRealization estimate_channel(const CVector& y_freq, const PilotPlan& plan,
                                    const SystemConfig& cfg, Solver solver, EstimateInfo* info) {
    cfg.validate();
    if (plan.n != cfg.n || plan.g != cfg.g || plan.d != cfg.d || plan.nt != cfg.nt)
        throw std::invalid_argument("estimate_channel: pilot plan does not match the config");
    if (y_freq.size() != cfg.n)
        throw std::invalid_argument("estimate_channel: observation length mismatch");

    CMatrix yr = extract_observations(y_freq, index_sets(plan));
    MeasurementMatrix m = build_measurement_matrix(plan, cfg.l);

    CMatrix x;
    std::vector<int> rows;
    std::vector<double> residuals;
    if (solver == Solver::Somp) {
        SparseSolution sol = somp(m, yr, cfg.k * cfg.nt);
        x = std::move(sol.x);
        rows = std::move(sol.rows);
        residuals = std::move(sol.residual_norms);
    } else {
        x = ls_estimate(m, yr);
        rows.resize(x.rows());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
    }

    BemCoefficients coef = unpack_coefficients(x, cfg.nt, cfg.l, cfg.d, cfg.n);
    ChannelRealization est = bem_reconstruct(coef, cebem_basis(cfg.n, cfg.d));
    if (info) {
        info->support_rows = std::move(rows);
        info->residual_norms = std::move(residuals);
        info->mu = mutual_coherence(m.phi);
    }
    return est;
}

}  // namespace dsce
