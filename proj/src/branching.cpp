#include "everett/branching.hpp"

#include <cmath>
#include <limits>

namespace everett {

namespace {

constexpr double kCoeffNormTol = 1e-10;
constexpr std::int64_t kExactModeGuard = std::int64_t{1} << 20;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_class(const CountClass& c) {
    if (c.counts.empty()) {
        throw InputError("invalid class: no outcomes");
    }
    for (std::int64_t n : c.counts) {
        if (n < 0) {
            throw InputError("invalid class: negative count");
        }
    }
}

void check_class_against(const Coefficients& coeffs, const CountClass& c) {
    check_class(c);
    if (c.counts.size() != coeffs.size()) {
        throw InputError("invalid class: outcome count differs from coefficient count");
    }
}

}  // namespace

Coefficients Coefficients::from_amplitudes(std::vector<Amplitude> values) {
    if (values.empty()) {
        throw InputError("coefficients need at least one outcome");
    }
    if (values.size() > 255) {
        throw InputError("coefficients limited to 255 outcomes");
    }
    std::vector<double> measures;
    measures.reserve(values.size());
    double total = 0.0;
    for (const Amplitude& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw InputError("non-finite coefficient");
        }
        measures.push_back(sq_abs(v));
        total += measures.back();
    }
    if (std::abs(total - 1.0) > kCoeffNormTol) {
        throw InputError("coefficients are not normalized");
    }
    Coefficients c;
    c.values = std::move(values);
    c.outcome_measures = std::move(measures);
    return c;
}

Coefficients Coefficients::from_measures(const std::vector<double>& measures) {
    if (measures.empty()) {
        throw InputError("coefficients need at least one outcome");
    }
    if (measures.size() > 255) {
        throw InputError("coefficients limited to 255 outcomes");
    }
    std::vector<Amplitude> values;
    values.reserve(measures.size());
    double total = 0.0;
    for (double m : measures) {
        if (!(m >= 0.0) || !std::isfinite(m)) {
            throw InputError("outcome measures must be nonnegative");
        }
        values.emplace_back(std::sqrt(m), 0.0);
        total += m;
    }
    if (std::abs(total - 1.0) > kCoeffNormTol) {
        throw InputError("coefficients are not normalized");
    }
    Coefficients c;
    c.values = std::move(values);
    c.outcome_measures = measures;
    return c;
}

std::int64_t CountClass::total() const {
    std::int64_t sum = 0;
    for (std::int64_t n : counts) {
        sum += n;
    }
    return sum;
}

double BranchEnsemble::total_measure() const {
    double sum = 0.0;
    for (const Branch& b : branches) {
        sum += sq_abs(b.amplitude);
    }
    return sum;
}

StateVector measure_step(const StateVector& s, const Coefficients& coeffs) {
    if (!s.has_object_role() || !s.has_memory_role()) {
        throw InputError("measure_step needs a joint object/memory state");
    }
    if (s.object_alphabet().size() != coeffs.size()) {
        throw InputError("label error: coefficient count differs from the object alphabet");
    }

    const std::size_t depth = s.terms().begin()->first.memory_part.size();
    const std::size_t objects = s.terms().begin()->first.object_part.size();
    for (const auto& [label, amp] : s.terms()) {
        if (label.memory_part.size() != depth || label.object_part.size() != objects) {
            throw InputError("history depth error: ragged register or object lengths");
        }
    }
    if (objects != depth && objects != depth + 1) {
        throw InputError("history depth error: object count must match or exceed records by one");
    }

    StateVector::TermMap out;
    if (objects == depth) {
        // No pending object: prepare a fresh one in the coefficient state
        // and record its outcome in the same step.
        for (const auto& [label, amp] : s.terms()) {
            for (std::size_t i = 0; i < coeffs.size(); ++i) {
                if (coeffs.values[i] == Amplitude{0.0, 0.0}) {
                    continue;  // zero-coefficient branches are pruned
                }
                BasisLabel next = label;
                next.object_part.push_back(static_cast<Symbol>(i));
                next.memory_part.push_back(static_cast<Symbol>(i));
                out[std::move(next)] = amp * coeffs.values[i];
            }
        }
    } else {
        // A prepared object is pending: copy its symbol into the register.
        for (const auto& [label, amp] : s.terms()) {
            BasisLabel next = label;
            next.memory_part.push_back(next.object_part.back());
            out[std::move(next)] = amp;
        }
    }
    return StateVector::raw(s.object_alphabet(), s.memory_alphabet(), true, true,
                            std::move(out));
}

BranchEnsemble run_sequence(const Coefficients& coeffs, std::int64_t n) {
    if (n < 0) {
        throw InputError("negative measurement count");
    }
    std::int64_t branch_bound = 1;
    for (std::int64_t i = 0; i < n; ++i) {
        if (branch_bound > kExactModeGuard / static_cast<std::int64_t>(coeffs.size())) {
            throw InputError("use class mode: M^N exceeds the exact-mode guard 2^20");
        }
        branch_bound *= static_cast<std::int64_t>(coeffs.size());
    }

    const Alphabet outcomes = Alphabet::indexed("a", coeffs.size());
    StateVector state = make_state(outcomes, outcomes, {{BasisLabel{{}, {}}, 1.0}});
    for (std::int64_t step = 0; step < n; ++step) {
        state = measure_step(state, coeffs);
    }

    BranchEnsemble ensemble;
    ensemble.n_measurements = n;
    ensemble.coeffs = coeffs;
    ensemble.branches.reserve(state.terms().size());
    for (const auto& [label, amp] : state.terms()) {
        ensemble.branches.push_back(Branch{label.memory_part, amp});
    }
    return ensemble;
}

CountClass class_of(const Branch& branch, std::size_t m) {
    CountClass c;
    c.counts.assign(m, 0);
    for (Symbol s : branch.record) {
        if (s >= m) {
            throw InputError("invalid class: record symbol outside the outcome alphabet");
        }
        ++c.counts[s];
    }
    return c;
}

mpz_class class_count(const CountClass& c) {
    check_class(c);
    // Product of binomials over the partial sums stays exact and fast.
    mpz_class result = 1;
    unsigned long partial = 0;
    for (std::int64_t n : c.counts) {
        partial += static_cast<unsigned long>(n);
        mpz_class step;
        mpz_bin_uiui(step.get_mpz_t(), partial, static_cast<unsigned long>(n));
        result *= step;
    }
    return result;
}

double class_count_log(const CountClass& c) {
    check_class(c);
    double log_count = std::lgamma(static_cast<double>(c.total()) + 1.0);
    for (std::int64_t n : c.counts) {
        log_count -= std::lgamma(static_cast<double>(n) + 1.0);
    }
    return log_count;
}

bool class_is_reachable(const Coefficients& coeffs, const CountClass& c) {
    check_class_against(coeffs, c);
    for (std::size_t i = 0; i < c.counts.size(); ++i) {
        if (c.counts[i] > 0 && coeffs.measures()[i] == 0.0) {
            return false;
        }
    }
    return true;
}

MeasureValue class_measure(const Coefficients& coeffs, const CountClass& c) {
    if (!class_is_reachable(coeffs, c)) {
        return MeasureValue::zero();
    }
    double log_m = class_count_log(c);
    for (std::size_t i = 0; i < c.counts.size(); ++i) {
        if (c.counts[i] > 0) {
            log_m += static_cast<double>(c.counts[i]) * std::log(coeffs.measures()[i]);
        }
    }
    return MeasureValue::from_log(log_m);
}

void for_each_count_class(std::int64_t n, std::size_t m,
                          const std::function<void(const CountClass&)>& fn) {
    if (n < 0 || m == 0) {
        throw InputError("invalid class: empty alphabet or negative total");
    }
    CountClass c;
    c.counts.assign(m, 0);
    // Ascending lexicographic sweep over the first M-1 counts; the last
    // count absorbs the remainder.
    std::function<void(std::size_t, std::int64_t)> walk = [&](std::size_t i,
                                                              std::int64_t remaining) {
        if (i + 1 == m) {
            c.counts[i] = remaining;
            fn(c);
            return;
        }
        for (std::int64_t v = 0; v <= remaining; ++v) {
            c.counts[i] = v;
            walk(i + 1, remaining - v);
        }
    };
    walk(0, n);
}

double total_class_measure_log(const Coefficients& coeffs, std::int64_t n) {
    ClassMeasureTable table(coeffs, n);
    LogSumAccumulator acc;
    for_each_count_class(n, coeffs.size(),
                         [&](const CountClass& c) { acc.add(table.log_measure(c)); });
    return acc.log_total();
}

ClassMeasureTable::ClassMeasureTable(const Coefficients& coeffs, std::int64_t n) : n_(n) {
    if (n < 0) {
        throw InputError("invalid class: negative total");
    }
    log_factorial_.resize(static_cast<std::size_t>(n) + 1);
    log_factorial_[0] = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) {
        log_factorial_[static_cast<std::size_t>(k)] =
            std::lgamma(static_cast<double>(k) + 1.0);
    }
    log_outcome_.reserve(coeffs.size());
    for (double m : coeffs.measures()) {
        log_outcome_.push_back(m > 0.0 ? std::log(m) : kNegInf);
    }
}

double ClassMeasureTable::log_measure(const CountClass& c) const {
    double log_m = log_factorial_[static_cast<std::size_t>(n_)];
    for (std::size_t i = 0; i < c.counts.size(); ++i) {
        const std::int64_t n_i = c.counts[i];
        if (n_i == 0) {
            continue;
        }
        if (log_outcome_[i] == kNegInf) {
            return kNegInf;
        }
        log_m -= log_factorial_[static_cast<std::size_t>(n_i)];
        log_m += static_cast<double>(n_i) * log_outcome_[i];
    }
    return log_m;
}

}  // namespace everett
