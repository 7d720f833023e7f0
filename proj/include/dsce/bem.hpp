#pragma once

#include <optional>
#include <vector>

#include "dsce/dft.hpp"

namespace dsce {

// Complex-exponential basis for one OFDM symbol:
//   V(n, d) = exp(i 2 pi n (d - (D-1)/2) / N),  n in [0,N), d in [0,D).
// Columns are exactly orthogonal with squared norm N; the middle column is
// the all-ones vector (time-invariant component).
struct BasisMatrix {
    CMatrix v;  // N x D
    int n = 0;
    int d = 0;

    int center() const { return (d - 1) / 2; }
};

// Requires odd D < N.
BasisMatrix cebem_basis(int n, int d);

// Per-antenna expansion coefficients. theta[antenna] is D x L: row d holds
// the order-d coefficient of every tap. Entries are zero off the support.
struct BemCoefficients {
    std::vector<CMatrix> theta;
    std::vector<int> support;  // sorted strong-tap indices

    int antennas() const { return static_cast<int>(theta.size()); }
};

// Time-lag channel tensor. h[antenna] is N x L; entry (n, l) is the gain of
// tap l at sample n. Entries are zero off the support.
struct ChannelRealization {
    std::vector<CMatrix> h;
    std::vector<int> support;                           // sorted
    std::optional<std::vector<CMatrix>> modeling_error;  // set by bem_project

    int antennas() const { return static_cast<int>(h.size()); }
};

// Least-squares fit of one tap trajectory onto the basis. Returns the D
// coefficients and the residual; V*theta + eps reconstructs h_l exactly.
void bem_fit_tap(const CVector& h_l, const BasisMatrix& basis, CVector& theta_l,
                 CVector& eps_l);

// Fits every antenna and tap; the residual is discarded here (see bem_project).
BemCoefficients bem_fit(const ChannelRealization& ch, const BasisMatrix& basis);

// h[antenna](n, l) = sum_d V(n, d) * theta[antenna](d, l).
ChannelRealization bem_reconstruct(const BemCoefficients& coef,
                                   const BasisMatrix& basis);

// Orthogonal projection of a channel onto the basis span; the result carries
// the per-antenna fit residual in modeling_error.
ChannelRealization bem_project(const ChannelRealization& ch,
                               const BasisMatrix& basis);

// Frequency-domain channel matrix of a single antenna,
//   Hf = sum_d Vd * Theta_d,
//   Vd = W diag(v_d) W^H,
//   Theta_d = diag(sqrt(N) * W * [theta_d; 0]),
// where theta_d is the length-L tap vector of order d (row d of theta).
CMatrix freq_channel_matrix(const CMatrix& theta, const BasisMatrix& basis);

}  // namespace dsce
