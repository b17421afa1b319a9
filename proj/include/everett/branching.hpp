#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <gmpxx.h>

#include "everett/hilbert.hpp"
#include "everett/measure.hpp"

namespace everett {

/// Preparation coefficients C_1..C_M of the object state, one per outcome.
/// Amplitudes drive branch products; the outcome measures |C_i|^2 are kept
/// alongside so that measure arithmetic sees exactly the values given to
/// from_measures instead of a sqrt round trip.
struct Coefficients {
    std::vector<Amplitude> values;
    std::vector<double> outcome_measures;

    /// Validates M >= 1 and sum |C_i|^2 = 1 within 1e-10.
    static Coefficients from_amplitudes(std::vector<Amplitude> values);

    /// Builds real nonnegative amplitudes sqrt(m_i) from outcome measures
    /// m_i. The measures must already sum to 1 within 1e-10.
    static Coefficients from_measures(const std::vector<double>& measures);

    std::size_t size() const { return values.size(); }

    /// |C_i|^2 per outcome.
    const std::vector<double>& measures() const { return outcome_measures; }
};

/// One term of the post-measurement superposition: the observer record and
/// the product amplitude accumulated over the recorded outcomes.
struct Branch {
    RecordRegister record;
    Amplitude amplitude;
};

/// Occupation numbers (n_1, ..., n_M) of outcome records.
struct CountClass {
    std::vector<std::int64_t> counts;

    std::int64_t total() const;

    bool operator==(const CountClass&) const = default;
};

/// Exact branch list for N sequential measurements, in lexicographic record
/// order. Zero-amplitude branches are pruned.
struct BranchEnsemble {
    std::int64_t n_measurements = 0;
    Coefficients coeffs;
    std::vector<Branch> branches;

    double total_measure() const;
};

/// One measurement step. If the state carries as many objects as records,
/// a fresh object is first prepared in the coefficient state; the newest
/// object's outcome symbol is then appended to every record register.
/// All registers must have equal length (uniform history depth).
StateVector measure_step(const StateVector& s, const Coefficients& coeffs);

/// N measurement steps from blank memory, as repeated measure_step
/// application. Exact mode; guarded to M^N <= 2^20.
BranchEnsemble run_sequence(const Coefficients& coeffs, std::int64_t n);

/// Occupation counts of a branch record over an M-symbol outcome alphabet.
CountClass class_of(const Branch& branch, std::size_t m);

/// Exact multinomial coefficient N! / prod n_i!.
mpz_class class_count(const CountClass& c);

/// log of the multinomial coefficient via log-gamma; the production path
/// once exact integers stop being cheap.
double class_count_log(const CountClass& c);

/// False iff some n_i > 0 has C_i = 0 (such classes carry zero measure).
bool class_is_reachable(const Coefficients& coeffs, const CountClass& c);

/// Measure of the count class: (N!/prod n_i!) * prod |C_i|^(2 n_i),
/// computed in log space. Unreachable classes yield the zero measure.
MeasureValue class_measure(const Coefficients& coeffs, const CountClass& c);

/// Calls fn for every class with total N over m outcomes, in ascending
/// lexicographic order of (n_1, ..., n_{M-1}).
void for_each_count_class(std::int64_t n, std::size_t m,
                          const std::function<void(const CountClass&)>& fn);

/// log of the sum of class_measure over all classes at total N; should be
/// 0 up to accumulation error.
double total_class_measure_log(const Coefficients& coeffs, std::int64_t n);

/// Precomputed log-factorial table plus log outcome measures, for sweeps
/// that evaluate many classes at one N.
class ClassMeasureTable {
public:
    ClassMeasureTable(const Coefficients& coeffs, std::int64_t n);

    /// log measure of a class with total n_measurements().
    double log_measure(const CountClass& c) const;

    std::int64_t n_measurements() const { return n_; }

private:
    std::int64_t n_;
    std::vector<double> log_factorial_;   // log(k!) for k = 0..N
    std::vector<double> log_outcome_;     // log |C_i|^2, -inf at zero
};

}  // namespace everett
