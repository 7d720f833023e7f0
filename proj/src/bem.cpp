#include "dsce/bem.hpp"

#include <cmath>
#include <stdexcept>

namespace dsce {

BasisMatrix cebem_basis(int n, int d) {
    if (d <= 0 || d % 2 == 0)
        throw std::invalid_argument("cebem_basis: order must be odd and positive");
    if (d >= n) throw std::invalid_argument("cebem_basis: order must be < N");
    BasisMatrix b;
    b.n = n;
    b.d = d;
    b.v.resize(n, d);
    const int center = (d - 1) / 2;
    for (int col = 0; col < d; ++col) {
        const double alpha = col - center;
        for (int row = 0; row < n; ++row)
            b.v(row, col) = std::polar(1.0, 2.0 * M_PI * double(row) * alpha / double(n));
    }
    return b;
}

void bem_fit_tap(const CVector& h_l, const BasisMatrix& basis, CVector& theta_l,
                 CVector& eps_l) {
    if (h_l.size() != basis.n)
        throw std::invalid_argument("bem_fit_tap: trajectory length != basis N");
    // Columns are orthogonal with squared norm N, so the least-squares
    // projection reduces to V^H h / N; solved generically anyway to keep the
    // operation honest for any basis.
    Eigen::ColPivHouseholderQR<CMatrix> qr(basis.v);
    theta_l = qr.solve(h_l);
    eps_l = h_l - basis.v * theta_l;
}

BemCoefficients bem_fit(const ChannelRealization& ch, const BasisMatrix& basis) {
    BemCoefficients coef;
    coef.support = ch.support;
    for (const CMatrix& h : ch.h) {
        if (h.rows() != basis.n)
            throw std::invalid_argument("bem_fit: channel length != basis N");
        const int l = static_cast<int>(h.cols());
        CMatrix th = CMatrix::Zero(basis.d, l);
        CVector theta_l, eps_l;
        for (int tap = 0; tap < l; ++tap) {
            bem_fit_tap(h.col(tap), basis, theta_l, eps_l);
            th.col(tap) = theta_l;
        }
        coef.theta.push_back(std::move(th));
    }
    return coef;
}

ChannelRealization bem_reconstruct(const BemCoefficients& coef,
                                   const BasisMatrix& basis) {
    ChannelRealization ch;
    ch.support = coef.support;
    for (const CMatrix& th : coef.theta) {
        if (th.rows() != basis.d)
            throw std::invalid_argument("bem_reconstruct: order mismatch");
        ch.h.push_back(basis.v * th);
    }
    return ch;
}

ChannelRealization bem_project(const ChannelRealization& ch,
                               const BasisMatrix& basis) {
    ChannelRealization out = bem_reconstruct(bem_fit(ch, basis), basis);
    std::vector<CMatrix> err;
    err.reserve(ch.h.size());
    for (size_t a = 0; a < ch.h.size(); ++a) err.push_back(ch.h[a] - out.h[a]);
    out.modeling_error = std::move(err);
    return out;
}

CMatrix freq_channel_matrix(const CMatrix& theta, const BasisMatrix& basis) {
    const int n = basis.n;
    const int l = static_cast<int>(theta.cols());
    if (theta.rows() != basis.d)
        throw std::invalid_argument("freq_channel_matrix: order mismatch");
    if (l > n) throw std::invalid_argument("freq_channel_matrix: L > N");

    const CMatrix w = dft_matrix(n);
    CMatrix hf = CMatrix::Zero(n, n);
    for (int d = 0; d < basis.d; ++d) {
        CMatrix vd = w * basis.v.col(d).asDiagonal().toDenseMatrix() * w.adjoint();
        CVector padded = CVector::Zero(n);
        padded.head(l) = theta.row(d).transpose();
        CVector gd = std::sqrt(double(n)) * (w * padded);
        hf += vd * gd.asDiagonal().toDenseMatrix();
    }
    return hf;
}

}  // namespace dsce
