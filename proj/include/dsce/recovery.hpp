#pragma once

#include <vector>

#include "dsce/bem.hpp"
#include "dsce/channel.hpp"
#include "dsce/pilot.hpp"

namespace dsce {

// Measurement operator of the joint recovery problem. Columns are grouped in
// antenna-major blocks of width L:
//   phi[:, nt*L + l] (g) = values[g][nt] * W(centers[g], l),
// with W the unitary DFT, so every column has norm sqrt(G/N).
struct MeasurementMatrix {
    CMatrix phi;  // G x (Nt * L)
    int g = 0;
    int nt = 0;
    int l = 0;
    int n = 0;

    int block_of(int col) const { return col / l; }
    int tap_of(int col) const { return col % l; }
};

MeasurementMatrix build_measurement_matrix(const PilotPlan& plan, int l);

// Max over distinct column pairs of |<a_i, a_j>| / (|a_i| |a_j|).
// Rejects matrices with a zero column.
double mutual_coherence(const CMatrix& a);

// yR(g, d) = Y[sets[d][g]]: the received frequency symbol restricted to each
// of the D shifted observation sets, one column per set.
CMatrix extract_observations(const CVector& y_freq, const IndexSets& sets);

// The unknown X in yR = Phi * X is sqrt(N) times the stacked per-antenna
// expansion coefficients (the sqrt(N) comes from the unit-modulus pilot
// convention against the unitary DFT columns). pack/unpack convert between
// the solver scale and BEM-scale coefficients; the end-to-end exactness
// test pins the factor.
CMatrix pack_coefficients(const BemCoefficients& coef, int n_fft);
BemCoefficients unpack_coefficients(const CMatrix& x, int nt, int l, int d,
                                    int n_fft);

struct SompOptions {
    // Selections stop at sparsity*Nt (set by the solver), capped at the
    // measurement count, or earlier once the residual is numerically
    // exhausted. rel_residual_tol is the unknown-K stop; the default only
    // fires when the fit is exact to machine precision.
    double rel_residual_tol = 1e-12;
    // Select all Nt antenna rows of a tap per iteration instead of single
    // columns. Off by default.
    bool block_select = false;
};

struct SparseSolution {
    CMatrix x;                          // (Nt*L) x D, zero off selected rows
    std::vector<int> rows;              // selected rows, in selection order
    std::vector<double> residual_norms;  // Frobenius norm after each refit
};

// Greedy joint-sparse recovery: per iteration, pick the column maximizing
// sum_d |<column, residual_d>| / |column| (conjugate inner products, exact
// norms, lowest index on ties), then jointly least-squares refit all selected
// columns against all D observation columns. sparsity is the per-antenna tap
// count K; the fixed stopping rule is K*Nt selections.
SparseSolution somp(const MeasurementMatrix& phi, const CMatrix& y_r,
                    int sparsity, const SompOptions& opt = {});

// Single-observation specialization (one column, standard OMP).
SparseSolution omp(const MeasurementMatrix& phi, const CVector& y, int sparsity,
                   const SompOptions& opt = {});

// Minimum-norm least squares per observation column; no sparsity exploited.
CMatrix ls_estimate(const MeasurementMatrix& phi, const CMatrix& y_r);

struct EstimateInfo {
    std::vector<int> support_rows;       // selection order (empty for LS)
    std::vector<double> residual_norms;
    double mu = 0.0;                     // mutual coherence of phi
};

enum class Solver { Somp, Ls };

// Full pilot-domain pipeline: extract observations, solve, unpack, expand
// back to a time-lag channel tensor.
ChannelRealization estimate_channel(const CVector& y_freq, const PilotPlan& plan,
                                    const SystemConfig& cfg,
                                    Solver solver = Solver::Somp,
                                    EstimateInfo* info = nullptr);

}  // namespace dsce
