#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "everett/branching.hpp"

namespace everett {

/// Stationary point of the constrained log-measure maximization: the
/// occupation fractions n_i/N at the optimum. The multiplier satisfies
/// e^lambda = N, so it is ln N when a concrete N is given and is left
/// unset (per-unit form) otherwise. The objective is the per-unit value of
/// the maximized functional at the optimum; it vanishes analytically.
struct AsymptoticSolution {
    std::vector<double> fractions;
    std::optional<double> lagrange_multiplier;
    double objective = 0.0;
};

/// Closed-form solution of the measure maximization: fractions_i = |C_i|^2.
/// No iteration is involved.
AsymptoticSolution lagrange_fractions(const Coefficients& coeffs,
                                      std::optional<std::int64_t> n = std::nullopt);

struct ModalClassResult {
    CountClass cls;
    bool tie = false;
};

/// Argmax of class_measure over all classes at total N, by exhaustive
/// sweep in log space. Ties are flagged and broken lexicographically
/// (the lexicographically smallest maximizer is returned).
ModalClassResult modal_class(const Coefficients& coeffs, std::int64_t n);

/// Total measure of the classes whose frequencies all lie within epsilon
/// of |C_i|^2 in max norm. Monotone nondecreasing in epsilon.
MeasureValue typicality_measure(const Coefficients& coeffs, std::int64_t n, double epsilon);

/// 1 - sum_i |C_i|^2 (1-|C_i|^2) / (N epsilon^2); a variance lower bound
/// for typicality_measure. May be negative (then vacuous).
double chebyshev_floor(const Coefficients& coeffs, std::int64_t n, double epsilon);

/// Rounds fractions to integer counts summing to N by largest-remainder
/// apportionment. Deterministic; remainder ties resolve to lower index.
CountClass apportion_largest_remainder(const std::vector<double>& fractions, std::int64_t n);

struct ResidualResult {
    MeasureValue residual;
    CountClass modal_rounded;
};

/// The literal remainder 1 - m(rounded N |C_i|^2), reported together with
/// the class the rounding produced. Grows toward 1 with N rather than
/// vanishing; see typicality_measure for the neighborhood quantity that
/// does converge.
ResidualResult residual_measure(const Coefficients& coeffs, std::int64_t n);

}  // namespace everett
