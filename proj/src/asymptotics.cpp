#include "everett/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace everett {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Relative log-space tolerance for declaring two class measures tied.
// True ties differ only by summation order (a few ulps); distinct classes
// of random coefficients differ by far more.
double tie_tolerance(double best_log) {
    return 1e-11 * std::max(1.0, std::abs(best_log));
}

}  // namespace

AsymptoticSolution lagrange_fractions(const Coefficients& coeffs,
                                      std::optional<std::int64_t> n) {
    AsymptoticSolution solution;
    const std::vector<double> outcome = coeffs.measures();
    solution.fractions = outcome;
    if (n) {
        if (*n < 1) {
            throw InputError("measurement count must be positive");
        }
        solution.lagrange_multiplier = std::log(static_cast<double>(*n));
    }
    // Per-unit objective sum_i f_i (ln m_i - ln f_i) at the stationary
    // point; identically zero because the fractions equal the measures.
    double objective = 0.0;
    for (std::size_t i = 0; i < outcome.size(); ++i) {
        const double f = solution.fractions[i];
        if (f > 0.0 && outcome[i] > 0.0) {
            objective += f * (std::log(outcome[i]) - std::log(f));
        }
    }
    solution.objective = objective;
    return solution;
}

namespace {

// Keeps the lexicographically first maximizer; classes must arrive in
// ascending lexicographic order.
struct ModalAccumulator {
    ModalClassResult result;
    double best_log = kNegInf;
    bool first = true;

    void consider(const CountClass& c, double log_m) {
        if (first) {
            best_log = log_m;
            result.cls = c;
            first = false;
            return;
        }
        const double tol = tie_tolerance(std::max(best_log, log_m));
        if (log_m > best_log + tol) {
            best_log = log_m;
            result.cls = c;
            result.tie = false;
        } else if (log_m >= best_log - tol) {
            result.tie = true;
            best_log = std::max(best_log, log_m);
        }
    }
};

constexpr std::int64_t kExhaustiveModalLimit = 1000;

}  // namespace

ModalClassResult modal_class(const Coefficients& coeffs, std::int64_t n) {
    if (n < 1) {
        throw InputError("measurement count must be positive");
    }
    ClassMeasureTable table(coeffs, n);
    ModalAccumulator acc;

    if (n <= kExhaustiveModalLimit) {
        for_each_count_class(n, coeffs.size(), [&](const CountClass& c) {
            acc.consider(c, table.log_measure(c));
        });
        return acc.result;
    }

    // Beyond the exhaustive range: the maximizer lies within one count of
    // N |C_i|^2 per component, so a window sweep around that point finds
    // the same class. Windows are padded beyond the needed one count.
    const std::vector<double> fractions = coeffs.measures();
    const std::size_t m = fractions.size();
    std::vector<std::int64_t> lo(m), hi(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (fractions[i] == 0.0) {
            lo[i] = hi[i] = 0;
            continue;
        }
        const auto center =
            static_cast<std::int64_t>(std::floor(fractions[i] * static_cast<double>(n)));
        lo[i] = std::max<std::int64_t>(0, center - 2);
        hi[i] = std::min<std::int64_t>(n, center + 3);
    }
    CountClass c;
    c.counts.assign(m, 0);
    std::function<void(std::size_t, std::int64_t)> walk = [&](std::size_t i,
                                                              std::int64_t remaining) {
        if (i + 1 == m) {
            if (remaining >= lo[i] && remaining <= hi[i]) {
                c.counts[i] = remaining;
                acc.consider(c, table.log_measure(c));
            }
            return;
        }
        for (std::int64_t v = lo[i]; v <= std::min(hi[i], remaining); ++v) {
            c.counts[i] = v;
            walk(i + 1, remaining - v);
        }
    };
    walk(0, n);
    if (acc.first) {
        throw Error("modal window sweep found no candidate class");
    }
    return acc.result;
}

MeasureValue typicality_measure(const Coefficients& coeffs, std::int64_t n, double epsilon) {
    if (n < 1) {
        throw InputError("measurement count must be positive");
    }
    if (!(epsilon > 0.0)) {
        throw InputError("epsilon must be positive");
    }
    const std::vector<double> fractions = coeffs.measures();
    const std::size_t m = fractions.size();
    const double scale = static_cast<double>(n);

    // Component-wise bounds with one count of slack; the exact max-norm
    // test below makes the final call.
    std::vector<std::int64_t> lo(m), hi(m);
    for (std::size_t i = 0; i < m; ++i) {
        lo[i] = std::max<std::int64_t>(
            0, static_cast<std::int64_t>(std::ceil((fractions[i] - epsilon) * scale)) - 1);
        hi[i] = std::min<std::int64_t>(
            n, static_cast<std::int64_t>(std::floor((fractions[i] + epsilon) * scale)) + 1);
    }

    double volume = 1.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        volume *= static_cast<double>(hi[i] - lo[i] + 1);
    }
    if (volume > 5e7) {
        throw InputError(
            "typicality sweep too large; reduce epsilon, outcomes, or measurement count");
    }

    ClassMeasureTable table(coeffs, n);
    LogSumAccumulator acc;
    CountClass c;
    c.counts.assign(m, 0);

    auto within = [&](std::size_t i, std::int64_t count) {
        return std::abs(static_cast<double>(count) / scale - fractions[i]) <= epsilon;
    };

    std::function<void(std::size_t, std::int64_t)> walk = [&](std::size_t i,
                                                              std::int64_t remaining) {
        if (i + 1 == m) {
            if (remaining >= lo[i] && remaining <= hi[i] && within(i, remaining)) {
                c.counts[i] = remaining;
                acc.add(table.log_measure(c));
            }
            return;
        }
        const std::int64_t from = lo[i];
        const std::int64_t to = std::min(hi[i], remaining);
        for (std::int64_t v = from; v <= to; ++v) {
            if (!within(i, v)) {
                continue;
            }
            c.counts[i] = v;
            walk(i + 1, remaining - v);
        }
    };
    walk(0, n);

    if (acc.empty()) {
        return MeasureValue::zero();
    }
    return MeasureValue::from_log(std::min(acc.log_total(), 0.0));
}

double chebyshev_floor(const Coefficients& coeffs, std::int64_t n, double epsilon) {
    if (n < 1 || !(epsilon > 0.0)) {
        throw InputError("need positive measurement count and epsilon");
    }
    double variance_sum = 0.0;
    for (double f : coeffs.measures()) {
        variance_sum += f * (1.0 - f);
    }
    return 1.0 - variance_sum / (static_cast<double>(n) * epsilon * epsilon);
}

CountClass apportion_largest_remainder(const std::vector<double>& fractions, std::int64_t n) {
    if (fractions.empty() || n < 0) {
        throw InputError("invalid apportionment input");
    }
    const std::size_t m = fractions.size();
    CountClass c;
    c.counts.assign(m, 0);
    std::vector<double> remainder(m, 0.0);
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (!(fractions[i] >= 0.0)) {
            throw InputError("invalid apportionment input: negative fraction");
        }
        const double target = fractions[i] * static_cast<double>(n);
        c.counts[i] = static_cast<std::int64_t>(std::floor(target));
        remainder[i] = target - std::floor(target);
        assigned += c.counts[i];
    }

    std::int64_t deficit = n - assigned;
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return remainder[a] > remainder[b];
    });
    // Never hand a unit to an outcome with zero weight.
    for (std::size_t idx : order) {
        if (deficit == 0) {
            break;
        }
        if (fractions[idx] > 0.0) {
            ++c.counts[idx];
            --deficit;
        }
    }
    while (deficit > 0) {
        for (std::size_t i = 0; i < m && deficit > 0; ++i) {
            if (fractions[i] > 0.0) {
                ++c.counts[i];
                --deficit;
            }
        }
    }
    return c;
}

ResidualResult residual_measure(const Coefficients& coeffs, std::int64_t n) {
    if (n < 1) {
        throw InputError("measurement count must be positive");
    }
    ResidualResult result;
    result.modal_rounded = apportion_largest_remainder(coeffs.measures(), n);
    const MeasureValue modal = class_measure(coeffs, result.modal_rounded);
    result.residual = MeasureValue::from_linear(std::max(0.0, 1.0 - modal.linear));
    return result;
}

}  // namespace everett
