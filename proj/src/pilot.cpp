#include "dsce/pilot.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dsce {

std::vector<int> generate_pilot_positions(int n, int g, int d, Rng& rng) {
    if (n <= 0 || g <= 0) throw std::invalid_argument("pilot positions: need n > 0, g > 0");
    if (d <= 0 || d % 2 == 0) throw std::invalid_argument("pilot positions: basis order must be odd");
    const int width = 2 * d - 1;
    const int slack = n - g * width;
    if (slack < 0)
        throw std::invalid_argument("pilot positions: guard zones do not fit the symbol");

    // Rotate-and-compose sampler. A uniform start plus a uniform composition
    // of the slack into g gaps counts every admissible center set exactly g
    // times, so the draw is uniform over admissible sets.
    std::uniform_int_distribution<int> start_dist(0, n - 1);
    const int start = start_dist(rng);

    std::vector<int> extra(g, 0);
    if (g > 1) {
        std::vector<int> pool(slack + g - 1);
        std::iota(pool.begin(), pool.end(), 1);
        for (int i = 0; i < g - 1; ++i) {
            std::uniform_int_distribution<int> pick(i, static_cast<int>(pool.size()) - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        std::vector<int> cuts(pool.begin(), pool.begin() + (g - 1));
        std::sort(cuts.begin(), cuts.end());
        int prev = 0;
        for (int i = 0; i < g - 1; ++i) {
            extra[i] = cuts[i] - prev - 1;
            prev = cuts[i];
        }
        extra[g - 1] = (slack + g) - prev - 1;
    } else {
        extra[0] = slack;
    }

    std::vector<int> centers(g);
    long long pos = start;
    for (int i = 0; i < g; ++i) {
        centers[i] = static_cast<int>((pos + d - 1) % n);
        pos += width + extra[i];
    }
    std::sort(centers.begin(), centers.end());
    return centers;
}

RMatrix generate_pilot_values(int g, int nt, Rng& rng) {
    if (g <= 0 || nt <= 0) throw std::invalid_argument("pilot values: need g > 0, nt > 0");
    std::uniform_int_distribution<int> coin(0, 1);
    RMatrix values(g, nt);
    for (int r = 0; r < g; ++r)
        for (int c = 0; c < nt; ++c) values(r, c) = coin(rng) == 0 ? -1.0 : 1.0;
    return values;
}

PilotPlan make_pilot_plan(int n, int g, int d, int nt, Rng& rng) {
    PilotPlan plan;
    plan.n = n;
    plan.g = g;
    plan.d = d;
    plan.nt = nt;
    plan.centers = generate_pilot_positions(n, g, d, rng);
    plan.values = generate_pilot_values(g, nt, rng);
    return plan;
}

IndexSets index_sets(const PilotPlan& plan) {
    IndexSets out;
    out.sets.resize(plan.d);
    const int half = (plan.d - 1) / 2;
    for (int dd = 0; dd < plan.d; ++dd) {
        out.sets[dd].resize(plan.g);
        for (int gi = 0; gi < plan.g; ++gi)
            out.sets[dd][gi] = ((plan.centers[gi] + dd - half) % plan.n + plan.n) % plan.n;
    }
    return out;
}

CVector assemble_frame(const PilotPlan& plan, const CVector& data, int antenna) {
    if (antenna < 0 || antenna >= plan.nt)
        throw std::out_of_range("assemble_frame: antenna index out of range");
    if (data.size() != plan.data_count())
        throw std::invalid_argument("assemble_frame: data length must match the free subcarriers");

    const int half = plan.d - 1;
    std::vector<bool> in_zone(plan.n, false);
    for (int c : plan.centers)
        for (int off = -half; off <= half; ++off) in_zone[((c + off) % plan.n + plan.n) % plan.n] = true;

    CVector frame = CVector::Zero(plan.n);
    for (int gi = 0; gi < plan.g; ++gi) frame[plan.centers[gi]] = plan.values(gi, antenna);
    int di = 0;
    for (int idx = 0; idx < plan.n; ++idx) {
        if (in_zone[idx]) continue;
        frame[idx] = data[di++];
    }
    return frame;
}

CVector qpsk_data(int count, Rng& rng) {
    if (count < 0) throw std::invalid_argument("qpsk_data: negative count");
    std::uniform_int_distribution<int> quad(0, 3);
    CVector data(count);
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < count; ++i) {
        switch (quad(rng)) {
            case 0: data[i] = {s, s}; break;
            case 1: data[i] = {-s, s}; break;
            case 2: data[i] = {-s, -s}; break;
            default: data[i] = {s, -s}; break;
        }
    }
    return data;
}

std::string plan_to_text(const PilotPlan& plan) {
    std::ostringstream out;
    out << "dsce-pilot-plan v1\n";
    out << "n " << plan.n << "\n";
    out << "g " << plan.g << "\n";
    out << "d " << plan.d << "\n";
    out << "nt " << plan.nt << "\n";
    out << "centers";
    for (int c : plan.centers) out << ' ' << c;
    out << "\nvalues\n";
    for (int r = 0; r < plan.values.rows(); ++r) {
        for (int c = 0; c < plan.values.cols(); ++c) {
            if (c) out << ' ';
            out << plan.values(r, c);
        }
        out << '\n';
    }
    return out.str();
}

PilotPlan plan_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "dsce-pilot-plan v1")
        throw std::invalid_argument("plan_from_text: unrecognized header");
    PilotPlan plan;
    auto read_kv = [&](const std::string& key) {
        std::string k;
        int v = 0;
        if (!(in >> k >> v) || k != key)
            throw std::invalid_argument("plan_from_text: expected field '" + key + "'");
        return v;
    };
    plan.n = read_kv("n");
    plan.g = read_kv("g");
    plan.d = read_kv("d");
    plan.nt = read_kv("nt");
    std::string tag;
    if (!(in >> tag) || tag != "centers")
        throw std::invalid_argument("plan_from_text: expected centers");
    plan.centers.resize(plan.g);
    for (int i = 0; i < plan.g; ++i)
        if (!(in >> plan.centers[i])) throw std::invalid_argument("plan_from_text: short centers");
    if (!(in >> tag) || tag != "values")
        throw std::invalid_argument("plan_from_text: expected values");
    plan.values.resize(plan.g, plan.nt);
    for (int r = 0; r < plan.g; ++r)
        for (int c = 0; c < plan.nt; ++c)
            if (!(in >> plan.values(r, c)))
                throw std::invalid_argument("plan_from_text: short values");
    return plan;
}

}  // namespace dsce
