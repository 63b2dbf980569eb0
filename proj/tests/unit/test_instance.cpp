#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "doctest.h"
#include "mct/instance.hpp"

using namespace mct;

namespace {

// Independent enumerator: spins straight from the index bits, energy from the
// double sum over i<j.
double naive_energy(const IsingInstance& inst, std::uint64_t x) {
    double e = 0.0;
    for (int i = 0; i < inst.n(); ++i)
        for (int j = i + 1; j < inst.n(); ++j) {
            const int si = (x >> i) & 1 ? -1 : 1;
            const int sj = (x >> j) & 1 ? -1 : 1;
            e -= inst.coupling(i, j) * si * sj;
        }
    return e;
}

IsingInstance ferromagnet(int n, double j) {
    std::vector<double> c(static_cast<std::size_t>(n * n), j);
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i * n + i)] = 0.0;
    return IsingInstance(n, c);
}

}  // namespace

TEST_CASE("generation is deterministic and uses the right weight alphabet") {
    const auto a = generate_instance(10, WeightClass::TwentyOneWeight, 42);
    const auto b = generate_instance(10, WeightClass::TwentyOneWeight, 42);
    const auto c = generate_instance(10, WeightClass::TwentyOneWeight, 43);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    std::set<int> seen;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double v = a.coupling(i, j);
            CHECK(v == a.coupling(j, i));
            const double tenths = v * 10.0;
            CHECK(std::abs(tenths - std::round(tenths)) < 1e-12);
            CHECK(std::abs(v) <= 1.0);
            if (i != j) seen.insert(static_cast<int>(std::lround(tenths)));
        }
    CHECK(seen.size() > 5);

    const auto sk = generate_instance(12, WeightClass::SKBinary, 7);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            if (i != j) CHECK(std::abs(sk.coupling(i, j)) == 1.0);
}

TEST_CASE("invalid sizes and matrices are rejected") {
    CHECK_THROWS_AS(generate_instance(1, WeightClass::SKBinary, 1), InstanceError);
    CHECK_THROWS_AS(generate_instance(4, WeightClass::Custom, 1), InstanceError);
    CHECK_THROWS_AS(IsingInstance(2, {0.0, 1.0, 2.0, 0.0}), InstanceError);
    CHECK_THROWS_AS(IsingInstance(2, {1.0, 1.0, 1.0, 0.0}), InstanceError);
    CHECK_THROWS_AS(IsingInstance(2, {0.0, 1.0, 1.0}), InstanceError);
}

TEST_CASE("energy and cut are tied by E = -sum J - 2 cut") {
    const auto inst = generate_instance(9, WeightClass::TwentyOneWeight, 3);
    for (std::uint64_t x = 0; x < 512; x += 7) {
        const auto cfg = SpinConfig::from_index(x, 9);
        CHECK(cfg.index() == x);
        CHECK(energy(inst, cfg) == doctest::Approx(naive_energy(inst, x)).epsilon(1e-12));
        CHECK(energy(inst, x) == doctest::Approx(energy(inst, cfg)).epsilon(1e-12));
        CHECK(energy(inst, cfg) == doctest::Approx(-inst.coupling_sum() - 2.0 * cut_value(inst, cfg)).epsilon(1e-12));
        CHECK(energy(inst, cfg.flipped()) == doctest::Approx(energy(inst, cfg)).epsilon(1e-12));
    }
}

TEST_CASE("ferromagnet ground states are the two aligned configurations") {
    const auto inst = ferromagnet(5, 1.0);
    const auto g = brute_force_ground(inst);
    CHECK(g.energy == doctest::Approx(-10.0));
    CHECK(g.degeneracy == 2);
    CHECK(energy(inst, g.witness) == doctest::Approx(-10.0));
}

TEST_CASE("brute force matches the naive enumerator") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto inst = generate_instance(11, seed % 2 ? WeightClass::TwentyOneWeight : WeightClass::SKBinary, seed);
        double best = 1e300;
        std::uint64_t count = 0;
        std::map<long long, std::uint64_t> levels;
        for (std::uint64_t x = 0; x < (1u << 11); ++x) {
            const double e = naive_energy(inst, x);
            levels[std::llround(e * 10.0)]++;
            if (e < best - 1e-9) {
                best = e;
                count = 1;
            } else if (std::abs(e - best) <= 1e-9) {
                ++count;
            }
        }
        const auto g = brute_force_ground(inst);
        CHECK(g.energy == doctest::Approx(best).epsilon(1e-12));
        CHECK(g.degeneracy == count);
        CHECK(g.degeneracy % 2 == 0);

        const auto h = energy_histogram(inst);
        CHECK(h.total() == (1u << 11));
        REQUIRE(h.levels.size() == levels.size());
        std::size_t k = 0;
        for (const auto& [e10, d] : levels) {
            CHECK(h.levels[k].energy == doctest::Approx(e10 / 10.0).epsilon(1e-12));
            CHECK(h.levels[k].degeneracy == d);
            ++k;
        }
    }
}

TEST_CASE("exhaustive search refuses sizes above the cap") {
    const auto inst = IsingInstance::uncoupled(12);
    CHECK_THROWS_AS(brute_force_ground(inst, 10), InstanceError);
    CHECK_THROWS_AS(energy_histogram(inst, 10), InstanceError);
    const auto h = energy_histogram(inst);
    REQUIRE(h.levels.size() == 1);
    CHECK(h.levels[0].degeneracy == 4096);
}

TEST_CASE("instance JSON round trips exactly") {
    const auto inst = generate_instance(13, WeightClass::TwentyOneWeight, 99);
    const auto back = instance_from_json(instance_to_json(inst));
    CHECK(back == inst);
    CHECK(back.weight_class() == WeightClass::TwentyOneWeight);
    CHECK(back.seed() == 99);

    const auto dir = std::filesystem::temp_directory_path() / "mct_instance_test";
    std::filesystem::create_directories(dir);
    write_instance(inst, dir / "x.json");
    CHECK(read_instance(dir / "x.json") == inst);
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(instance_from_json("{\"version\":2}"), InstanceError);
    CHECK_THROWS_AS(instance_from_json("not json"), InstanceError);
    CHECK_THROWS_AS(instance_from_json(R"({"version":1,"n":3,"weight_class":"custom","seed":0,"edges":[[2,1,0.5]]})"),
                    InstanceError);
}

TEST_CASE("histogram CSV round trips and validates") {
    const auto inst = generate_instance(8, WeightClass::TwentyOneWeight, 5);
    const auto h = energy_histogram(inst);
    const auto back = histogram_from_csv(histogram_to_csv(h), 8);
    REQUIRE(back.levels.size() == h.levels.size());
    for (std::size_t k = 0; k < h.levels.size(); ++k) {
        CHECK(back.levels[k].energy == h.levels[k].energy);
        CHECK(back.levels[k].degeneracy == h.levels[k].degeneracy);
    }
    CHECK_THROWS_AS(histogram_from_csv("energy,degeneracy\n-1,2\n", 8), InstanceError);
    CHECK_THROWS_AS(histogram_from_csv("energy,degeneracy\n1,2\n-1,2\n", 2), InstanceError);
    CHECK_THROWS_AS(histogram_from_csv("e,d\n1,4\n", 2), InstanceError);
}
