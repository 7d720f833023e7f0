#pragma once

#include <string>
#include <vector>

#include "dsce/dft.hpp"
#include "dsce/rng.hpp"

namespace dsce {

// Grouped guard-pilot frame layout. Each of the G groups is one nonzero
// pilot at its center with D-1 guard zeros on each side (2D-1 subcarriers
// per group, wrapping at the spectrum edges); the zones of distinct groups
// are disjoint, which keeps data leakage away from every observation index.
struct PilotPlan {
    int n = 0;
    int g = 0;
    int d = 0;
    int nt = 0;
    std::vector<int> centers;  // sorted, |c_u - c_v| >= 2D-1 circularly
    RMatrix values;            // G x Nt, entries +1 or -1

    int zone_width() const { return 2 * d - 1; }
    int data_count() const { return n - g * zone_width(); }
};

// The D observation index sets: sets[d][g] = (centers[g] + d - (D-1)/2) mod N.
// Row g of every set refers to group g; the middle set equals the centers.
struct IndexSets {
    std::vector<std::vector<int>> sets;
};

// G group centers with disjoint circular guard zones, uniform over all valid
// placements (gap-allocation sampling). Requires G*(2D-1) <= N.
std::vector<int> generate_pilot_positions(int n, int g, int d, Rng& rng);

// i.i.d. Rademacher (+/-1) pilot values, one column per antenna.
RMatrix generate_pilot_values(int g, int nt, Rng& rng);

// Convenience: draw positions and values into a complete plan.
PilotPlan make_pilot_plan(int n, int g, int d, int nt, Rng& rng);

IndexSets index_sets(const PilotPlan& plan);

// Frequency-domain frame for one antenna: pilot value at each center, zeros
// on the guards, caller-provided symbols on the remaining subcarriers.
// data.size() must equal plan.data_count().
CVector assemble_frame(const PilotPlan& plan, const CVector& data, int antenna);

// Unit-power QPSK symbols for the data subcarriers of a frame.
CVector qpsk_data(int count, Rng& rng);

// Plain structured-text (JSON) round trip so a plan can be pinned across runs.
std::string plan_to_text(const PilotPlan& plan);
PilotPlan plan_from_text(const std::string& text);

}  // namespace dsce
