#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsce/channel.hpp"

namespace dsce {

// Executable numerical identities behind the pilot-domain model. These back
// both the `verify` CLI subcommand and the acceptance suite.

// || W diag(v_d) W^H - E_shift ||_F for the order-d basis column, where
// E_shift is the identity circularly shifted down by d - (D-1)/2 rows.
double shift_identity_error(int n, int d_order, int d_total);

// Dense check of the selection identity at size n: for every pair (d_bar, d),
// U_{d_bar} E_shift(d) diag(S) equals diag(values) * rows-of-identity at the
// centers when d_bar == d and vanishes otherwise. Returns the max elementwise
// error over all pairs, with QPSK data present in S.
double selection_identity_error(int n, int g, int d, std::uint64_t seed);

struct ExactnessReport {
    double rel_residual = 0.0;  // ||yR - Phi X_true||_F / ||Phi X_true||_F
    double nmse_db = 0.0;       // end-to-end estimate vs truth
};

// Full-pipeline exactness on a basis-exact, noiseless, zero-data trial.
ExactnessReport pipeline_exactness(const SystemConfig& cfg, std::uint64_t seed);

// Max |difference| at all observation indices between a frame with QPSK data
// and the same frame with data zeroed, pushed through one basis-exact
// channel (the guard structure makes the two coincide).
double ici_free_error(const SystemConfig& cfg, std::uint64_t seed);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// The standard identity battery with its gate tolerances.
std::vector<CheckResult> run_identity_checks();

}  // namespace dsce
