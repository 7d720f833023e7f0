#include <complex>

#include "doctest.h"
#include "dsce/dft.hpp"
#include "dsce/rng.hpp"

using namespace dsce;

namespace {

CVector random_cvec(int n, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVector v(n);
    for (int i = 0; i < n; ++i) v[i] = {gauss(rng), gauss(rng)};
    return v;
}

}  // namespace

TEST_CASE("dft_matrix is unitary") {
    for (int n : {4, 16, 27}) {
        CMatrix w = dft_matrix(n);
        CMatrix gram = w.adjoint() * w;
        CHECK((gram - CMatrix::Identity(n, n)).norm() < 1e-12);
    }
}

TEST_CASE("dft_matrix entries follow the convention") {
    int n = 8;
    CMatrix w = dft_matrix(n);
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) {
            std::complex<double> want =
                std::polar(1.0 / std::sqrt(double(n)),
                           -2.0 * M_PI * double(m) * double(k) / double(n));
            CHECK(std::abs(w(m, k) - want) < 1e-14);
        }
}

TEST_CASE("unitary_dft matches the dense matrix product") {
    Rng rng = make_rng(7);
    for (int n : {8, 16, 64, 12, 5}) {  // power-of-two and direct paths
        CMatrix w = dft_matrix(n);
        CVector x = random_cvec(n, rng);
        CHECK((unitary_dft(x) - w * x).norm() < 1e-11);
        CHECK((unitary_idft(x) - w.adjoint() * x).norm() < 1e-11);
    }
}

TEST_CASE("delta at bin zero maps to a constant time vector") {
    int n = 16;
    CVector s = CVector::Zero(n);
    s[0] = 1.0;
    CVector t = unitary_idft(s);
    for (int i = 0; i < n; ++i)
        CHECK(std::abs(t[i] - 1.0 / std::sqrt(double(n))) < 1e-13);
}

TEST_CASE("round trip and Parseval") {
    Rng rng = make_rng(11);
    CVector x = random_cvec(256, rng);
    CVector back = unitary_idft(unitary_dft(x));
    CHECK((back - x).norm() < 1e-12 * x.norm());
    CHECK(unitary_dft(x).norm() == doctest::Approx(x.norm()).epsilon(1e-12));
}
