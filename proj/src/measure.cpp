#include "everett/measure.hpp"

#include <cmath>
#include <limits>

namespace everett {

namespace {
constexpr double kMeasureSlack = 1e-12;
}

MeasureValue MeasureValue::from_linear(double value) {
    if (!(value >= 0.0) || value > 1.0 + kMeasureSlack) {
        throw InputError("measure value outside [0, 1]");
    }
    MeasureValue m;
    m.linear = value;
    m.log = value > 0.0 ? std::log(value) : -std::numeric_limits<double>::infinity();
    return m;
}

MeasureValue MeasureValue::from_log(double log_value) {
    if (log_value > kMeasureSlack) {
        throw InputError("log measure value above 0");
    }
    MeasureValue m;
    m.log = log_value;
    m.linear = std::exp(log_value);
    if (m.linear > 1.0 + kMeasureSlack) {
        m.linear = 1.0;
    }
    return m;
}

MeasureValue MeasureValue::zero() {
    return MeasureValue{};
}

SubsetSelector select_all() {
    return SubsetSelector{"all", [](const BasisLabel&) { return true; }};
}

SubsetSelector select_complement(const SubsetSelector& sel) {
    auto match = sel.matches;
    return SubsetSelector{"not(" + sel.description + ")",
                          [match](const BasisLabel& l) { return !match(l); }};
}

SubsetSelector select_memory_equals(RecordRegister reg, std::string description) {
    if (description.empty()) {
        description = "memory=fixed";
    }
    return SubsetSelector{std::move(description), [reg = std::move(reg)](const BasisLabel& l) {
                              return l.memory_part == reg;
                          }};
}

SubsetSelector select_record_counts(std::vector<std::int64_t> counts) {
    return SubsetSelector{
        "record counts", [counts = std::move(counts)](const BasisLabel& l) {
            std::vector<std::int64_t> seen(counts.size(), 0);
            for (Symbol s : l.memory_part) {
                if (s >= seen.size()) {
                    return false;
                }
                ++seen[s];
            }
            return seen == counts;
        }};
}

MeasureValue coeff_measure(const Amplitude& x) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
        throw InputError("non-finite amplitude");
    }
    return MeasureValue::from_linear(sq_abs(x));
}

MeasureValue subset_measure(const StateVector& s, const SubsetSelector& sel) {
    double sum = 0.0;
    for (const auto& [label, amp] : s.terms()) {
        if (sel.matches(label)) {
            sum += sq_abs(amp);
        }
    }
    return MeasureValue::from_linear(sum);
}

bool verify_additivity(const StateVector& s, const std::vector<SubsetSelector>& partition,
                       double tol) {
    if (partition.empty() || partition.size() > 20) {
        throw InputError("partition error: need between 1 and 20 selectors");
    }
    for (const auto& [label, amp] : s.terms()) {
        std::size_t hits = 0;
        for (const auto& sel : partition) {
            if (sel.matches(label)) {
                ++hits;
            }
        }
        if (hits > 1) {
            throw InputError("partition error: overlapping selectors");
        }
        if (hits == 0) {
            throw InputError("partition error: selectors are not exhaustive");
        }
    }

    std::vector<double> part_measure(partition.size());
    for (std::size_t i = 0; i < partition.size(); ++i) {
        part_measure[i] = subset_measure(s, partition[i]).linear;
    }

    // Each subset of parts is one coarse-graining; its merged measure must
    // match the sum of the member measures.
    const std::size_t k = partition.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        double merged = 0.0;
        for (const auto& [label, amp] : s.terms()) {
            for (std::size_t i = 0; i < k; ++i) {
                if ((mask >> i & 1u) && partition[i].matches(label)) {
                    merged += sq_abs(amp);
                    break;
                }
            }
        }
        double summed = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask >> i & 1u) {
                summed += part_measure[i];
            }
        }
        if (std::abs(merged - summed) > tol) {
            return false;
        }
    }
    return true;
}

void LogSumAccumulator::add(double log_value) {
    if (log_value == -std::numeric_limits<double>::infinity()) {
        return;
    }
    if (empty_) {
        max_log_ = log_value;
        scaled_sum_ = 1.0;
        empty_ = false;
        return;
    }
    if (log_value > max_log_) {
        scaled_sum_ = scaled_sum_ * std::exp(max_log_ - log_value) + 1.0;
        max_log_ = log_value;
    } else {
        scaled_sum_ += std::exp(log_value - max_log_);
    }
}

double LogSumAccumulator::log_total() const {
    if (empty_) {
        return -std::numeric_limits<double>::infinity();
    }
    return max_log_ + std::log(scaled_sum_);
}

}  // namespace everett
