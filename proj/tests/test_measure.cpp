#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "everett/measure.hpp"
#include "test_support.hpp"

using namespace everett;
using namespace everett::testing;

namespace {

// Random state over single-symbol labels; some symbols may be absent.
StateVector random_partial_state(const Alphabet& alphabet, std::mt19937_64& rng,
                                 std::size_t min_terms = 1) {
    std::uniform_int_distribution<std::size_t> count(min_terms, alphabet.size());
    std::vector<std::size_t> symbols(alphabet.size());
    std::iota(symbols.begin(), symbols.end(), 0);
    std::shuffle(symbols.begin(), symbols.end(), rng);
    const std::size_t keep = count(rng);

    std::map<std::vector<Symbol>, Amplitude> terms;
    for (std::size_t i = 0; i < keep; ++i) {
        terms[{static_cast<Symbol>(symbols[i])}] = random_amplitude(rng);
    }
    return make_object_state(alphabet, terms);
}

SubsetSelector select_symbol_in(std::vector<Symbol> members) {
    return SubsetSelector{"symbols", [members = std::move(members)](const BasisLabel& l) {
                              return !l.object_part.empty() &&
                                     std::find(members.begin(), members.end(),
                                               l.object_part.front()) != members.end();
                          }};
}

}  // namespace

TEST_CASE("coeff_measure is the squared modulus") {
    CHECK(coeff_measure(Amplitude{1.0, 0.0}).linear == 1.0);
    CHECK(coeff_measure(Amplitude{0.6, 0.0}).linear == doctest::Approx(0.36).epsilon(1e-14));

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (double theta : {0.0, 0.3, 1.1, 2.7, 4.0, 6.0}) {
        const Amplitude phased = std::polar(inv_sqrt2, theta);
        CHECK(close(coeff_measure(phased).linear, 0.5, 1e-12));
    }
}

TEST_CASE("coeff_measure phase invariance is exact") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        // Coefficients of a normalized superposition, so |z| <= 1.
        const Amplitude z = random_amplitudes(3, rng)[0];
        const Amplitude modulus{std::abs(z), 0.0};
        CHECK(coeff_measure(z).linear == coeff_measure(modulus).linear);
    }
}

TEST_CASE("MeasureValue carries consistent linear and log forms") {
    const MeasureValue half = MeasureValue::from_linear(0.5);
    CHECK(half.log == doctest::Approx(std::log(0.5)).epsilon(1e-15));

    const MeasureValue tiny = MeasureValue::from_log(-800.0);
    CHECK(tiny.linear == 0.0);  // underflow is fine; log stays authoritative
    CHECK(tiny.log == -800.0);

    const MeasureValue zero = MeasureValue::zero();
    CHECK(zero.linear == 0.0);
    CHECK(std::isinf(zero.log));

    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> uniform(1e-300, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const MeasureValue m = MeasureValue::from_linear(uniform(rng));
        CHECK(close(m.linear, std::exp(m.log), 1e-9 * m.linear));
    }

    CHECK_THROWS_AS(MeasureValue::from_linear(-0.1), InputError);
    CHECK_THROWS_AS(MeasureValue::from_linear(1.5), InputError);
    CHECK_THROWS_AS(MeasureValue::from_log(0.5), InputError);
}

TEST_CASE("subset_measure sums matching labels") {
    const Alphabet xi = Alphabet::indexed("xi", 2);
    const StateVector s =
        make_object_state(xi, {{std::vector<Symbol>{0}, Amplitude{1.0, 0.0}},
                               {std::vector<Symbol>{1}, Amplitude{1.0, 0.0}}});

    CHECK(close(subset_measure(s, select_symbol_in({0})).linear, 0.5, 1e-12));
    CHECK(close(subset_measure(s, select_all()).linear, 1.0, 1e-10));
    CHECK(subset_measure(s, select_symbol_in({})).linear == 0.0);

    const SubsetSelector first = select_symbol_in({0});
    const double complement_sum = subset_measure(s, first).linear +
                                  subset_measure(s, select_complement(first)).linear;
    CHECK(close(complement_sum, 1.0, 1e-10));
}

TEST_CASE("memory selectors pick record contents") {
    const Alphabet outcomes = Alphabet::indexed("a", 2);
    StateVector::TermMap terms;
    terms[BasisLabel{{0}, {0}}] = Amplitude{std::sqrt(0.3), 0.0};
    terms[BasisLabel{{1}, {1}}] = Amplitude{std::sqrt(0.7), 0.0};
    const StateVector s = make_state(outcomes, outcomes, terms);

    CHECK(close(subset_measure(s, select_memory_equals({0})).linear, 0.3, 1e-12));
    CHECK(close(subset_measure(s, select_memory_equals({1})).linear, 0.7, 1e-12));
    CHECK(close(subset_measure(s, select_record_counts({1, 1})).linear, 0.0, 1e-15));
    CHECK(close(subset_measure(s, select_record_counts({1, 0})).linear, 0.3, 1e-12));
}

TEST_CASE("additivity holds on partitions and coarse-grainings") {
    const Alphabet xi = Alphabet::indexed("xi", 2);
    const StateVector merged =
        make_object_state(xi, {{std::vector<Symbol>{0}, Amplitude{1.0, 0.0}},
                               {std::vector<Symbol>{1}, Amplitude{1.0, 0.0}}});
    // Two halves merging into the whole: m = 0.5 + 0.5.
    CHECK(verify_additivity(merged, {select_symbol_in({0}), select_symbol_in({1})}));

    std::mt19937_64 rng(23);
    const Alphabet wide = Alphabet::indexed("xi", 8);
    for (int trial = 0; trial < 25; ++trial) {
        const StateVector s = random_object_state(wide, rng);

        // Random 3-part split of the eight symbols.
        std::vector<std::vector<Symbol>> parts(3);
        for (Symbol sym = 0; sym < 8; ++sym) {
            parts[rng() % 3].push_back(sym);
        }
        std::vector<SubsetSelector> partition;
        for (auto& members : parts) {
            partition.push_back(select_symbol_in(members));
        }
        CHECK(verify_additivity(s, partition));

        // Direct-summation check of each part against subset_measure.
        for (std::size_t p = 0; p < parts.size(); ++p) {
            double direct = 0.0;
            for (const auto& [label, amp] : s.terms()) {
                if (std::find(parts[p].begin(), parts[p].end(), label.object_part.front()) !=
                    parts[p].end()) {
                    direct += sq_abs(amp);
                }
            }
            CHECK(close(subset_measure(s, partition[p]).linear, direct, 1e-12));
        }
    }
}

TEST_CASE("verify_additivity rejects bad partitions") {
    const Alphabet xi = Alphabet::indexed("xi", 2);
    const StateVector s =
        make_object_state(xi, {{std::vector<Symbol>{0}, Amplitude{1.0, 0.0}},
                               {std::vector<Symbol>{1}, Amplitude{1.0, 0.0}}});

    CHECK_THROWS_WITH_AS(
        verify_additivity(s, {select_symbol_in({0, 1}), select_symbol_in({1})}),
        doctest::Contains("partition error"), InputError);
    CHECK_THROWS_WITH_AS(verify_additivity(s, {select_symbol_in({0})}),
                         doctest::Contains("partition error"), InputError);
}

TEST_CASE("total measure of random states is 1") {
    std::mt19937_64 rng(24);
    const Alphabet wide = Alphabet::indexed("xi", 12);
    for (int trial = 0; trial < 100; ++trial) {
        const StateVector s = random_partial_state(wide, rng);
        CHECK(close(subset_measure(s, select_all()).linear, 1.0, 1e-10));
    }
}

TEST_CASE("log-sum-exp accumulator") {
    LogSumAccumulator acc;
    CHECK(acc.empty());
    CHECK(std::isinf(acc.log_total()));

    acc.add(std::log(0.25));
    acc.add(std::log(0.5));
    acc.add(-std::numeric_limits<double>::infinity());  // ignored
    CHECK(acc.log_total() == doctest::Approx(std::log(0.75)).epsilon(1e-14));

    // Values far below the running maximum must not destabilize the sum.
    LogSumAccumulator wide;
    wide.add(-1000.0);
    wide.add(0.0);
    CHECK(wide.log_total() == doctest::Approx(0.0).epsilon(1e-14));

    // Deterministic in insertion order, correct against direct summation.
    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> uniform(-30.0, 0.0);
    LogSumAccumulator lse;
    double direct = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double log_v = uniform(rng);
        lse.add(log_v);
        direct += std::exp(log_v);
    }
    CHECK(lse.log_total() == doctest::Approx(std::log(direct)).epsilon(1e-12));
}
