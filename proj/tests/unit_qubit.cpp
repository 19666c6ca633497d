#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mdiqd/qubit.hpp"
#include "oracles.hpp"

using namespace mdiqd;

namespace {

constexpr double kTol = 1e-12;
constexpr double kInvSqrt2 = 0.70710678118654752440;

struct Prep {
    int bit;
    PrepBasis basis;
};

const std::vector<Prep> kAllPreps = {
    {0, PrepBasis::Z}, {1, PrepBasis::Z}, {0, PrepBasis::X}, {1, PrepBasis::X}};

}  // namespace

TEST_CASE("prepare follows the four encoding rules") {
    const QubitState zero = prepare(0, PrepBasis::Z);
    CHECK(std::abs(zero.amp0 - complex_t{1.0, 0.0}) < kTol);
    CHECK(std::abs(zero.amp1) < kTol);

    const QubitState one = prepare(1, PrepBasis::Z);
    CHECK(std::abs(one.amp0) < kTol);
    CHECK(std::abs(one.amp1 - complex_t{1.0, 0.0}) < kTol);

    const QubitState plus = prepare(0, PrepBasis::X);
    CHECK(std::abs(plus.amp0 - complex_t{kInvSqrt2, 0.0}) < kTol);
    CHECK(std::abs(plus.amp1 - complex_t{kInvSqrt2, 0.0}) < kTol);

    const QubitState minus = prepare(1, PrepBasis::X);
    CHECK(std::abs(minus.amp0 - complex_t{kInvSqrt2, 0.0}) < kTol);
    CHECK(std::abs(minus.amp1 - complex_t{-kInvSqrt2, 0.0}) < kTol);

    for (const Prep& p : kAllPreps) {
        CHECK(prepare(p.bit, p.basis).is_normalized());
    }
}

TEST_CASE("bell_probabilities reproduces the same-basis table") {
    // Rows over (Phi+, Phi-, Psi+, Psi-), entries in units of 1/2.
    struct Row {
        Prep alice, bob;
        std::array<double, 4> expected;
    };
    const double H = 0.5;
    const std::vector<Row> rows = {
        {{0, PrepBasis::Z}, {0, PrepBasis::Z}, {H, H, 0, 0}},
        {{0, PrepBasis::Z}, {1, PrepBasis::Z}, {0, 0, H, H}},
        {{1, PrepBasis::Z}, {0, PrepBasis::Z}, {0, 0, H, H}},
        {{1, PrepBasis::Z}, {1, PrepBasis::Z}, {H, H, 0, 0}},
        {{0, PrepBasis::X}, {0, PrepBasis::X}, {H, 0, H, 0}},
        {{0, PrepBasis::X}, {1, PrepBasis::X}, {0, H, 0, H}},
        {{1, PrepBasis::X}, {0, PrepBasis::X}, {0, H, 0, H}},
        {{1, PrepBasis::X}, {1, PrepBasis::X}, {H, 0, H, 0}},
    };
    for (const Row& row : rows) {
        const BellDistribution d =
            bell_probabilities(prepare(row.alice.bit, row.alice.basis),
                               prepare(row.bob.bit, row.bob.basis));
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(d.p[i] - row.expected[i]) < kTol);
        }
        CHECK(std::abs(d.sum() - 1.0) < kTol);
    }
}

TEST_CASE("basis mismatch yields the uniform distribution") {
    for (int za = 0; za < 2; ++za) {
        for (int xb = 0; xb < 2; ++xb) {
            for (bool z_first : {true, false}) {
                const QubitState z = prepare(za, PrepBasis::Z);
                const QubitState x = prepare(xb, PrepBasis::X);
                const BellDistribution d = z_first ? bell_probabilities(z, x)
                                                   : bell_probabilities(x, z);
                for (double p : d.p) CHECK(std::abs(p - 0.25) < kTol);
            }
        }
    }
}

TEST_CASE("bell_probabilities agrees with the brute-force oracle on all 16 pairs") {
    for (const Prep& pa : kAllPreps) {
        for (const Prep& pb : kAllPreps) {
            const QubitState a = prepare(pa.bit, pa.basis);
            const QubitState b = prepare(pb.bit, pb.basis);
            const BellDistribution d = bell_probabilities(a, b);
            const auto expected =
                oracle::bell_projection_probs(a.amp0, a.amp1, b.amp0, b.amp1);
            double sum = 0.0;
            for (std::size_t i = 0; i < 4; ++i) {
                CHECK(std::abs(d.p[i] - expected[i]) < kTol);
                sum += d.p[i];
            }
            CHECK(std::abs(sum - 1.0) < kTol);
        }
    }
}

TEST_CASE("bell_probabilities rejects non-normalized input") {
    const QubitState bad{0.5, 0.5};
    CHECK_THROWS_AS(bell_probabilities(bad, prepare(0, PrepBasis::Z)),
                    std::invalid_argument);
}

TEST_CASE("sample_bell point mass and frequencies") {
    Rng rng(7);
    const BellDistribution point{{1.0, 0.0, 0.0, 0.0}};
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_bell(point, rng) == BellOutcome::PhiPlus);
    }

    const BellDistribution half{{0.5, 0.5, 0.0, 0.0}};
    std::size_t phi_plus = 0;
    const std::size_t trials = 100000;
    for (std::size_t i = 0; i < trials; ++i) {
        const BellOutcome o = sample_bell(half, rng);
        CHECK((o == BellOutcome::PhiPlus || o == BellOutcome::PhiMinus));
        phi_plus += o == BellOutcome::PhiPlus;
    }
    const double freq = double(phi_plus) / double(trials);
    CHECK(freq == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("identical seeds give identical outcome sequences") {
    const BellDistribution uniform{{0.25, 0.25, 0.25, 0.25}};
    Rng r1(123), r2(123);
    for (int i = 0; i < 2000; ++i) {
        CHECK(sample_bell(uniform, r1) == sample_bell(uniform, r2));
    }
    Rng m1(9), m2(9);
    for (int i = 0; i < 2000; ++i) {
        const QubitState s = prepare(0, PrepBasis::Z);
        CHECK(measure_in_basis(s, PrepBasis::X, m1) ==
              measure_in_basis(s, PrepBasis::X, m2));
    }
}

TEST_CASE("measure_in_basis eigenstates and superpositions") {
    Rng rng(21);
    for (int i = 0; i < 100; ++i) {
        CHECK(measure_in_basis(prepare(0, PrepBasis::X), PrepBasis::X, rng) == 0);
        CHECK(measure_in_basis(prepare(1, PrepBasis::Z), PrepBasis::Z, rng) == 1);
    }
    std::size_t zeros = 0;
    const std::size_t trials = 100000;
    for (std::size_t i = 0; i < trials; ++i) {
        zeros += measure_in_basis(prepare(0, PrepBasis::Z), PrepBasis::X, rng) == 0;
    }
    CHECK(double(zeros) / double(trials) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("apply_flip_noise flips within the preparation basis") {
    Rng rng(31);
    const QubitState zero = prepare(0, PrepBasis::Z);
    const QubitState same = apply_flip_noise(zero, PrepBasis::Z, 0.0, rng);
    CHECK(std::abs(same.amp0 - zero.amp0) < kTol);
    CHECK(std::abs(same.amp1 - zero.amp1) < kTol);

    // At p = 1/2 the plus state becomes minus half the time.
    std::size_t flipped = 0;
    const std::size_t trials = 100000;
    for (std::size_t i = 0; i < trials; ++i) {
        const QubitState out =
            apply_flip_noise(prepare(0, PrepBasis::X), PrepBasis::X, 0.5, rng);
        CHECK(out.is_normalized());
        flipped += measure_in_basis(out, PrepBasis::X, rng) == 1;
    }
    CHECK(double(flipped) / double(trials) == doctest::Approx(0.5).epsilon(0.02));

    CHECK_THROWS_AS(apply_flip_noise(zero, PrepBasis::Z, 0.6, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_flip_noise(zero, PrepBasis::Z, -0.1, rng),
                    std::invalid_argument);
}

TEST_CASE("operations preserve normalization") {
    Rng rng(77);
    for (int i = 0; i < 1000; ++i) {
        const Prep& p = kAllPreps[rng.below(4)];
        QubitState s = prepare(p.bit, p.basis);
        s = apply_flip_noise(s, p.basis, 0.3, rng);
        CHECK(s.is_normalized());
        const BellDistribution d = bell_probabilities(s, prepare(rng.bit(), p.basis));
        CHECK(d.is_valid());
    }
}

TEST_CASE("announcement strings round-trip") {
    for (BellOutcome o :
         {BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus,
          BellOutcome::PsiMinus, BellOutcome::Inconclusive}) {
        CHECK(bell_outcome_from_string(to_string(o)) == o);
    }
    CHECK(!bell_outcome_from_string("phi").has_value());
}
