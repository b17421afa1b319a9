#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "everett/hilbert.hpp"
#include "everett/random.hpp"
#include "test_support.hpp"

using namespace everett;
using namespace everett::testing;

namespace {

const Alphabet kCatObjects{std::vector<std::string>{"live", "dead"}};

StateVector cat_object(const Amplitude& a, const Amplitude& b) {
    std::map<std::vector<Symbol>, Amplitude> terms;
    if (a != Amplitude{0.0, 0.0}) {
        terms[{0}] = a;
    }
    if (b != Amplitude{0.0, 0.0}) {
        terms[{1}] = b;
    }
    return make_object_state(kCatObjects, terms);
}

}  // namespace

TEST_CASE("make_state normalizes and records the factor") {
    const StateVector single = cat_object(1.0, 0.0);
    CHECK(single.dimension() == 1);
    CHECK(close(single.amplitude(BasisLabel{{0}, {}}), Amplitude{1.0, 0.0}, 1e-15));
    CHECK(close(single.norm(), 1.0, 1e-12));

    const StateVector uniform = cat_object(1.0, 1.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(close(uniform.amplitude(BasisLabel{{0}, {}}), Amplitude{inv_sqrt2, 0.0}, 1e-15));
    CHECK(close(uniform.amplitude(BasisLabel{{1}, {}}), Amplitude{inv_sqrt2, 0.0}, 1e-15));

    const StateVector pythagorean = cat_object(3.0, 4.0);
    CHECK(close(pythagorean.amplitude(BasisLabel{{0}, {}}), Amplitude{0.6, 0.0}, 1e-15));
    CHECK(close(pythagorean.amplitude(BasisLabel{{1}, {}}), Amplitude{0.8, 0.0}, 1e-15));
    CHECK(pythagorean.normalization_factor() == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("make_state rejects bad input") {
    CHECK_THROWS_WITH_AS(cat_object(0.0, 0.0), doctest::Contains("zero vector"), InputError);
    // Symbol 2 is outside the two-symbol alphabet.
    CHECK_THROWS_WITH_AS(
        make_object_state(kCatObjects, {{std::vector<Symbol>{2}, Amplitude{1.0, 0.0}}}),
        doctest::Contains("label error"), InputError);
    const Amplitude nan_amp{std::nan(""), 0.0};
    CHECK_THROWS_AS(make_object_state(kCatObjects, {{std::vector<Symbol>{0}, nan_amp}}),
                    InputError);
}

TEST_CASE("tensor combines object and memory roles") {
    const Alphabet outcomes = Alphabet::indexed("a", 2);
    const StateVector object =
        make_object_state(outcomes, {{std::vector<Symbol>{0}, Amplitude{1.0, 0.0}}});
    const StateVector blank = make_memory_state(outcomes, {{RecordRegister{}, 1.0}});

    const StateVector joint = tensor(object, blank);
    CHECK(joint.dimension() == 1);
    CHECK(close(joint.amplitude(BasisLabel{{0}, {}}), Amplitude{1.0, 0.0}, 1e-15));

    const StateVector superposed =
        make_object_state(outcomes, {{std::vector<Symbol>{0}, Amplitude{1.0, 0.0}},
                                     {std::vector<Symbol>{1}, Amplitude{1.0, 0.0}}});
    const StateVector distributed = tensor(superposed, blank);
    CHECK(distributed.dimension() == 2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(close(distributed.amplitude(BasisLabel{{0}, {}}), Amplitude{inv_sqrt2, 0.0}, 1e-15));
    CHECK(close(distributed.amplitude(BasisLabel{{1}, {}}), Amplitude{inv_sqrt2, 0.0}, 1e-15));

    CHECK_THROWS_WITH_AS(tensor(object, superposed), doctest::Contains("role collision"),
                         InputError);
}

TEST_CASE("tensor preserves the product norm") {
    std::mt19937_64 rng(11);
    const Alphabet objects = Alphabet::indexed("a", 4);
    const Alphabet memories = Alphabet::indexed("a", 3);
    for (int trial = 0; trial < 50; ++trial) {
        const StateVector s1 = random_object_state(objects, rng);
        std::map<RecordRegister, Amplitude> memory_terms;
        for (Symbol s = 0; s < 3; ++s) {
            memory_terms[{s}] = random_amplitude(rng);
        }
        const StateVector s2 = make_memory_state(memories, memory_terms);

        const StateVector product = tensor(s1, s2);
        // Brute-force sum over all product terms.
        double brute = 0.0;
        for (const auto& [label, amp] : product.terms()) {
            brute += sq_abs(amp);
        }
        CHECK(close(std::sqrt(brute), s1.norm() * s2.norm(), 1e-12));
        CHECK(product.dimension() == s1.dimension() * s2.dimension());
    }
}

TEST_CASE("inner products on the labeled basis") {
    const StateVector live = cat_object(1.0, 0.0);
    const StateVector dead = cat_object(0.0, 1.0);
    CHECK(close(inner(live, dead), Amplitude{0.0, 0.0}, 1e-15));
    CHECK(close(inner(live, live), Amplitude{1.0, 0.0}, 1e-15));

    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const auto ab = random_amplitudes(2, rng);
        const StateVector plus = cat_object(ab[0], ab[1]);
        const StateVector minus = cat_object(ab[0], -ab[1]);
        const double expected = sq_abs(ab[0]) - sq_abs(ab[1]);
        CHECK(close(inner(plus, minus), Amplitude{expected, 0.0}, 1e-12));
        CHECK(close(inner(plus, plus), Amplitude{1.0, 0.0}, 1e-10));
    }

    const Alphabet other{std::vector<std::string>{"x", "y"}};
    const StateVector mismatched =
        make_object_state(other, {{std::vector<Symbol>{0}, Amplitude{1.0, 0.0}}});
    CHECK_THROWS_WITH_AS(inner(live, mismatched), doctest::Contains("label error"), InputError);
}

TEST_CASE("apply: identity, coverage errors") {
    const Alphabet objects = Alphabet::indexed("a", 3);
    std::mt19937_64 rng(13);
    const StateVector s = random_object_state(objects, rng);

    LinearOperator identity = object_operator_over(objects, Eigen::MatrixXcd::Identity(3, 3));
    CHECK(is_unitary(identity, 1e-10));
    const StateVector mapped = apply(identity, s);
    for (const auto& [label, amp] : s.terms()) {
        CHECK(close(mapped.amplitude(label), amp, 1e-15));
    }

    // Operator over a smaller alphabet cannot cover the state.
    const Alphabet small = Alphabet::indexed("a", 2);
    LinearOperator undersized = object_operator_over(small, Eigen::MatrixXcd::Identity(2, 2));
    CHECK_THROWS_WITH_AS(apply(undersized, s), doctest::Contains("basis coverage error"),
                         InputError);
}

TEST_CASE("is_unitary verdicts") {
    const Alphabet objects = Alphabet::indexed("a", 2);
    LinearOperator identity = object_operator_over(objects, Eigen::MatrixXcd::Identity(2, 2));
    CHECK(is_unitary(identity, 1e-10));
    CHECK(identity.verified_unitary());

    Eigen::MatrixXcd stretched = Eigen::MatrixXcd::Zero(2, 2);
    stretched(0, 0) = 1.0;
    stretched(1, 1) = 2.0;
    LinearOperator nonunitary = object_operator_over(objects, stretched);
    CHECK_FALSE(is_unitary(nonunitary, 1e-10));
    CHECK_FALSE(nonunitary.verified_unitary());
    CHECK(unitarity_residual(nonunitary) == doctest::Approx(3.0));
}

TEST_CASE("verified unitaries preserve norms and inner products") {
    std::mt19937_64 rng(14);
    const Alphabet objects = Alphabet::indexed("a", 4);
    for (int trial = 0; trial < 30; ++trial) {
        LinearOperator u = object_operator_over(objects, haar_unitary(4, rng));
        REQUIRE(is_unitary(u, 1e-10));

        const StateVector s1 = random_object_state(objects, rng);
        const StateVector s2 = random_object_state(objects, rng);
        const StateVector u1 = apply(u, s1);
        const StateVector u2 = apply(u, s2);

        CHECK(close(u1.norm(), 1.0, 1e-10));
        CHECK(close(inner(u1, u2), inner(s1, s2), 1e-10));
    }
}

TEST_CASE("operator application is linear") {
    std::mt19937_64 rng(15);
    const Alphabet objects = Alphabet::indexed("a", 4);
    for (int trial = 0; trial < 30; ++trial) {
        LinearOperator u = object_operator_over(objects, haar_unitary(4, rng));
        REQUIRE(is_unitary(u, 1e-10));

        const StateVector s1 = random_object_state(objects, rng);
        const StateVector s2 = random_object_state(objects, rng);
        const Amplitude alpha = random_amplitude(rng);
        const Amplitude beta = random_amplitude(rng);

        // States are always kept normalized, so the combination is built
        // through make_object_state and rescaled by the recorded factor.
        std::map<std::vector<Symbol>, Amplitude> combined;
        for (const auto& label : object_labels(objects)) {
            combined[label.object_part] =
                alpha * s1.amplitude(label) + beta * s2.amplitude(label);
        }
        const StateVector s3 = make_object_state(objects, combined);
        const double factor = s3.normalization_factor();

        const StateVector u1 = apply(u, s1);
        const StateVector u2 = apply(u, s2);
        const StateVector u3 = apply(u, s3);
        for (const auto& label : object_labels(objects)) {
            const Amplitude expected = alpha * u1.amplitude(label) + beta * u2.amplitude(label);
            CHECK(close(factor * u3.amplitude(label), expected, 1e-12));
        }
    }
}

TEST_CASE("alphabet and label formatting") {
    const Alphabet outcomes = Alphabet::indexed("a", 3);
    CHECK(outcomes.name(0) == "a1");
    CHECK(outcomes.name(2) == "a3");
    CHECK(outcomes.find("a2") == Symbol{1});
    CHECK_FALSE(outcomes.find("b1").has_value());

    CHECK(format_register({0, 2}, outcomes) == "[a1 a3]");
    CHECK(format_register({}, outcomes) == "[]");
    CHECK(format_label(BasisLabel{{1, 0}, {1}}, outcomes, outcomes) == "a2 a1 [a2]");
}
