#include <cmath>
#include <vector>

#include "doctest.h"
#include "mct/kernels.hpp"

using namespace mct;
using namespace mct::kernels;

// Block boundaries sit at 2^12 states, so n = 15 exercises several blocks.

TEST_CASE("serial and parallel enumeration agree bit for bit") {
    const auto inst = generate_instance(15, WeightClass::TwentyOneWeight, 11);
    const auto a = scan_ground(inst, Exec::Serial);
    const auto b = scan_ground(inst, Exec::Parallel);
    CHECK(a.energy == b.energy);
    CHECK(a.degeneracy == b.degeneracy);
    CHECK(a.witness == b.witness);

    const auto la = scan_levels(inst, Exec::Serial);
    const auto lb = scan_levels(inst, Exec::Parallel);
    REQUIRE(la.size() == lb.size());
    for (std::size_t k = 0; k < la.size(); ++k) {
        CHECK(la[k].energy == lb[k].energy);
        CHECK(la[k].degeneracy == lb[k].degeneracy);
    }

    std::vector<double> da(1 << 15), db(1 << 15);
    diagonal_energies(inst, da, Exec::Serial);
    diagonal_energies(inst, db, Exec::Parallel);
    CHECK(da == db);
    // Gray-code walk against direct evaluation.
    for (std::uint64_t x = 0; x < da.size(); x += 997) CHECK(da[x] == doctest::Approx(energy(inst, x)).epsilon(1e-12));
}

TEST_CASE("statevector kernels agree across execution modes") {
    const int n = 14;
    const auto inst = generate_instance(n, WeightClass::SKBinary, 2);
    std::vector<double> diag(1 << n);
    diagonal_energies(inst, diag);
    std::vector<Complex> a(1 << n), b;
    for (std::size_t x = 0; x < a.size(); ++x) a[x] = Complex(std::cos(0.1 * x), std::sin(0.37 * x)) / 128.0;
    b = a;
    apply_phase(a, diag, 0.3, Exec::Serial);
    apply_phase(b, diag, 0.3, Exec::Parallel);
    CHECK(a == b);
    apply_x_rotation(a, n, 0.21, Exec::Serial);
    apply_x_rotation(b, n, 0.21, Exec::Parallel);
    CHECK(a == b);
    CHECK(norm_sq(a, Exec::Serial) == norm_sq(b, Exec::Parallel));
    CHECK(expectation(a, diag, Exec::Serial) == expectation(b, diag, Exec::Parallel));
    CHECK(probability_at_or_below(a, diag, -3.0, Exec::Serial) == probability_at_or_below(b, diag, -3.0, Exec::Parallel));
}

TEST_CASE("phase and rotation kernels are unitary") {
    const int n = 10;
    const auto inst = generate_instance(n, WeightClass::TwentyOneWeight, 4);
    std::vector<double> diag(1 << n);
    diagonal_energies(inst, diag);
    std::vector<Complex> a(1 << n, Complex(1.0 / 32.0, 0.0));
    for (int k = 0; k < 40; ++k) {
        apply_phase(a, diag, 0.1 * k);
        apply_x_rotation(a, n, 0.05 * k);
    }
    CHECK(norm_sq(a) == doctest::Approx(1.0).epsilon(1e-12));
}
