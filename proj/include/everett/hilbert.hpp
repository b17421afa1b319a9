#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "everett/errors.hpp"

namespace everett {

using Amplitude = std::complex<double>;

/// Index into a declared alphabet. Alphabets are small (outcome symbols,
/// cat symbols), so one byte is plenty.
using Symbol = std::uint8_t;

/// Ordered list of recorded outcome symbols; the observer memory content.
/// Empty register = blank memory.
using RecordRegister = std::vector<Symbol>;

/// Squared modulus computed through |z| itself, so that sq_abs(x) and
/// sq_abs(|x|) are bitwise identical (phase blindness is exact).
inline double sq_abs(const Amplitude& z) {
    const double r = std::abs(z);
    return r * r;
}

/// A closed, ordered set of named symbols. Labels may only use symbols
/// declared here; states over different alphabets do not mix.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {}

    /// prefix "a", count 3 -> {a1, a2, a3}
    static Alphabet indexed(const std::string& prefix, std::size_t count);

    std::size_t size() const { return names_.size(); }
    bool empty() const { return names_.empty(); }
    const std::string& name(Symbol s) const { return names_.at(s); }
    std::optional<Symbol> find(const std::string& name) const;

    bool operator==(const Alphabet&) const = default;

private:
    std::vector<std::string> names_;
};

/// Basis label of one superposition term: the object content (outcome
/// symbols, one per measured system) and the memory content (the record
/// register). Distinct labels are orthonormal by construction.
struct BasisLabel {
    std::vector<Symbol> object_part;
    RecordRegister memory_part;

    auto operator<=>(const BasisLabel&) const = default;
};

std::string format_register(const RecordRegister& reg, const Alphabet& memory_alphabet);
std::string format_label(const BasisLabel& label, const Alphabet& object_alphabet,
                         const Alphabet& memory_alphabet);

/// Normalized complex vector over labeled orthonormal basis terms, stored
/// sparsely. Immutable after construction; all public factories normalize
/// and record the applied factor.
class StateVector {
public:
    using TermMap = std::map<BasisLabel, Amplitude>;

    const TermMap& terms() const { return terms_; }
    std::size_t dimension() const { return terms_.size(); }

    /// Amplitude of a label, zero if the label carries no weight.
    Amplitude amplitude(const BasisLabel& label) const;

    /// sqrt(sum |amplitude|^2). 1 for states produced by the factories;
    /// apply() with a non-unitary operator may return something else.
    double norm() const;

    /// The divisor applied when this state was normalized at construction
    /// (1 for results of operator application).
    double normalization_factor() const { return normalization_factor_; }

    bool has_object_role() const { return object_role_; }
    bool has_memory_role() const { return memory_role_; }
    const Alphabet& object_alphabet() const { return object_alphabet_; }
    const Alphabet& memory_alphabet() const { return memory_alphabet_; }

private:
    StateVector() = default;

    // Unnormalized construction, reserved for operator application.
    static StateVector raw(Alphabet object_alphabet, Alphabet memory_alphabet,
                           bool object_role, bool memory_role, TermMap terms);

    friend StateVector make_state(Alphabet, Alphabet, StateVector::TermMap);
    friend StateVector make_object_state(Alphabet, const std::map<std::vector<Symbol>, Amplitude>&);
    friend StateVector make_memory_state(Alphabet, const std::map<RecordRegister, Amplitude>&);
    friend StateVector tensor(const StateVector&, const StateVector&);
    friend class LinearOperator;
    friend StateVector apply(const class LinearOperator&, const StateVector&);
    friend StateVector measure_step(const StateVector&, const struct Coefficients&);

    Alphabet object_alphabet_;
    Alphabet memory_alphabet_;
    bool object_role_ = false;
    bool memory_role_ = false;
    TermMap terms_;
    double normalization_factor_ = 1.0;
};

/// Normalized joint state over object and memory labels.
/// Zero-amplitude terms are dropped; an all-zero input is rejected.
StateVector make_state(Alphabet object_alphabet, Alphabet memory_alphabet,
                       StateVector::TermMap terms);

/// Normalized state using only the object role.
StateVector make_object_state(Alphabet object_alphabet,
                              const std::map<std::vector<Symbol>, Amplitude>& terms);

/// Normalized state using only the memory role.
StateVector make_memory_state(Alphabet memory_alphabet,
                              const std::map<RecordRegister, Amplitude>& terms);

/// Product state. The operands must occupy disjoint roles (object vs
/// memory); per-role label parts concatenate.
StateVector tensor(const StateVector& s1, const StateVector& s2);

/// <s1|s2>, conjugate-linear in the first argument. Both states must be
/// over the same roles and alphabets.
Amplitude inner(const StateVector& s1, const StateVector& s2);

/// Dense square operator over an explicit ordered basis of labels.
/// Column j holds the image of basis label j.
class LinearOperator {
public:
    LinearOperator(std::vector<BasisLabel> basis, Eigen::MatrixXcd matrix,
                   Alphabet object_alphabet, Alphabet memory_alphabet,
                   bool object_role, bool memory_role);

    const std::vector<BasisLabel>& basis() const { return basis_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    std::size_t dimension() const { return basis_.size(); }
    std::optional<std::size_t> index_of(const BasisLabel& label) const;

    const Alphabet& object_alphabet() const { return object_alphabet_; }
    const Alphabet& memory_alphabet() const { return memory_alphabet_; }
    bool has_object_role() const { return object_role_; }
    bool has_memory_role() const { return memory_role_; }

    /// Set only by a passing is_unitary() check.
    bool verified_unitary() const { return verified_unitary_; }

private:
    friend bool is_unitary(LinearOperator&, double);

    std::vector<BasisLabel> basis_;
    std::map<BasisLabel, std::size_t> index_;
    Eigen::MatrixXcd matrix_;
    Alphabet object_alphabet_;
    Alphabet memory_alphabet_;
    bool object_role_ = false;
    bool memory_role_ = false;
    bool verified_unitary_ = false;
};

/// max |(U† U - I)_ij| over all entries.
double unitarity_residual(const LinearOperator& op);

/// True iff the residual is within tol; marks the operator verified.
bool is_unitary(LinearOperator& op, double tol);

/// Matrix-vector product. Every label of s must appear in op's basis.
/// Norm is preserved (to 1e-10) when op is verified unitary.
StateVector apply(const LinearOperator& op, const StateVector& s);

}  // namespace everett
