#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "everett/hilbert.hpp"

namespace everett {

/// Weight of a branch subset, in [0, 1]. Carried in linear and natural-log
/// form; the log form stays usable where the linear form underflows.
struct MeasureValue {
    double linear = 0.0;
    double log = -std::numeric_limits<double>::infinity();

    static MeasureValue from_linear(double value);
    static MeasureValue from_log(double log_value);
    static MeasureValue zero();
};

/// Label-local predicate picking a subset of superposition terms. The
/// predicate must depend on the label only, never on amplitudes.
struct SubsetSelector {
    std::string description;
    std::function<bool(const BasisLabel&)> matches;
};

SubsetSelector select_all();
SubsetSelector select_complement(const SubsetSelector& sel);
SubsetSelector select_memory_equals(RecordRegister reg, std::string description = "");
/// Matches labels whose register occupation counts equal `counts`.
SubsetSelector select_record_counts(std::vector<std::int64_t> counts);

/// |x|^2. Phase-blind: depends on |x| only, exactly.
MeasureValue coeff_measure(const Amplitude& x);

/// Sum of |amplitude|^2 over the labels sel matches. Empty selection is 0.
MeasureValue subset_measure(const StateVector& s, const SubsetSelector& sel);

/// Checks that the partition is disjoint and exhaustive over s's labels,
/// then that every coarse-graining of it is additive: the measure of each
/// merged subset equals the sum of its parts within tol.
bool verify_additivity(const StateVector& s, const std::vector<SubsetSelector>& partition,
                       double tol = 1e-10);

/// Streaming log(sum(exp(log_i))) with running rescaling, deterministic in
/// insertion order. -inf entries are ignored.
class LogSumAccumulator {
public:
    void add(double log_value);
    double log_total() const;
    bool empty() const { return empty_; }

private:
    double max_log_ = -std::numeric_limits<double>::infinity();
    double scaled_sum_ = 0.0;
    bool empty_ = true;
};

}  // namespace everett
