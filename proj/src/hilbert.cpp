#include "everett/hilbert.hpp"

#include <cmath>
#include <sstream>

namespace everett {

namespace {

constexpr double kUnitNormTol = 1e-10;

void check_finite(const Amplitude& a) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw InputError("non-finite amplitude");
    }
}

void check_label(const BasisLabel& label, const Alphabet& object_alphabet,
                 const Alphabet& memory_alphabet, bool object_role, bool memory_role) {
    if (!object_role && !label.object_part.empty()) {
        throw InputError("label error: object symbols in a state without the object role");
    }
    if (!memory_role && !label.memory_part.empty()) {
        throw InputError("label error: memory symbols in a state without the memory role");
    }
    for (Symbol s : label.object_part) {
        if (s >= object_alphabet.size()) {
            throw InputError("label error: object symbol outside the declared alphabet");
        }
    }
    for (Symbol s : label.memory_part) {
        if (s >= memory_alphabet.size()) {
            throw InputError("label error: memory symbol outside the declared alphabet");
        }
    }
}

// Validates labels and amplitudes, prunes exact zeros, scales the map to
// unit norm. Returns the map and the applied divisor.
std::pair<StateVector::TermMap, double> normalize_terms(const Alphabet& object_alphabet,
                                                        const Alphabet& memory_alphabet,
                                                        bool object_role, bool memory_role,
                                                        StateVector::TermMap terms) {
    double norm_sq = 0.0;
    for (auto it = terms.begin(); it != terms.end();) {
        check_finite(it->second);
        check_label(it->first, object_alphabet, memory_alphabet, object_role, memory_role);
        if (it->second == Amplitude{0.0, 0.0}) {
            it = terms.erase(it);
            continue;
        }
        norm_sq += sq_abs(it->second);
        ++it;
    }
    if (terms.empty()) {
        throw InputError("zero vector");
    }
    const double factor = std::sqrt(norm_sq);
    for (auto& [label, amp] : terms) {
        amp /= factor;
    }
    return {std::move(terms), factor};
}

}  // namespace

Alphabet Alphabet::indexed(const std::string& prefix, std::size_t count) {
    std::vector<std::string> names;
    names.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
        names.push_back(prefix + std::to_string(i));
    }
    return Alphabet(std::move(names));
}

std::optional<Symbol> Alphabet::find(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) {
            return static_cast<Symbol>(i);
        }
    }
    return std::nullopt;
}

std::string format_register(const RecordRegister& reg, const Alphabet& memory_alphabet) {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < reg.size(); ++i) {
        if (i > 0) {
            out << ' ';
        }
        out << memory_alphabet.name(reg[i]);
    }
    out << ']';
    return out.str();
}

std::string format_label(const BasisLabel& label, const Alphabet& object_alphabet,
                         const Alphabet& memory_alphabet) {
    std::ostringstream out;
    for (std::size_t i = 0; i < label.object_part.size(); ++i) {
        if (i > 0) {
            out << ' ';
        }
        out << object_alphabet.name(label.object_part[i]);
    }
    if (!label.object_part.empty()) {
        out << ' ';
    }
    out << format_register(label.memory_part, memory_alphabet);
    return out.str();
}

Amplitude StateVector::amplitude(const BasisLabel& label) const {
    auto it = terms_.find(label);
    return it == terms_.end() ? Amplitude{0.0, 0.0} : it->second;
}

double StateVector::norm() const {
    double norm_sq = 0.0;
    for (const auto& [label, amp] : terms_) {
        norm_sq += sq_abs(amp);
    }
    return std::sqrt(norm_sq);
}

StateVector StateVector::raw(Alphabet object_alphabet, Alphabet memory_alphabet,
                             bool object_role, bool memory_role, TermMap terms) {
    StateVector s;
    s.object_alphabet_ = std::move(object_alphabet);
    s.memory_alphabet_ = std::move(memory_alphabet);
    s.object_role_ = object_role;
    s.memory_role_ = memory_role;
    s.terms_ = std::move(terms);
    s.normalization_factor_ = 1.0;
    return s;
}

StateVector make_state(Alphabet object_alphabet, Alphabet memory_alphabet,
                       StateVector::TermMap terms) {
    auto [normalized, factor] =
        normalize_terms(object_alphabet, memory_alphabet, true, true, std::move(terms));
    StateVector s = StateVector::raw(std::move(object_alphabet), std::move(memory_alphabet),
                                     true, true, std::move(normalized));
    s.normalization_factor_ = factor;
    return s;
}

StateVector make_object_state(Alphabet object_alphabet,
                              const std::map<std::vector<Symbol>, Amplitude>& terms) {
    StateVector::TermMap labeled;
    for (const auto& [object_part, amp] : terms) {
        labeled[BasisLabel{object_part, {}}] = amp;
    }
    auto [normalized, factor] =
        normalize_terms(object_alphabet, Alphabet{}, true, false, std::move(labeled));
    StateVector s = StateVector::raw(std::move(object_alphabet), Alphabet{}, true, false,
                                     std::move(normalized));
    s.normalization_factor_ = factor;
    return s;
}

StateVector make_memory_state(Alphabet memory_alphabet,
                              const std::map<RecordRegister, Amplitude>& terms) {
    StateVector::TermMap labeled;
    for (const auto& [memory_part, amp] : terms) {
        labeled[BasisLabel{{}, memory_part}] = amp;
    }
    auto [normalized, factor] =
        normalize_terms(Alphabet{}, memory_alphabet, false, true, std::move(labeled));
    StateVector s = StateVector::raw(Alphabet{}, std::move(memory_alphabet), false, true,
                                     std::move(normalized));
    s.normalization_factor_ = factor;
    return s;
}

StateVector tensor(const StateVector& s1, const StateVector& s2) {
    if ((s1.has_object_role() && s2.has_object_role()) ||
        (s1.has_memory_role() && s2.has_memory_role())) {
        throw InputError("role collision: operands share a label role");
    }
    const Alphabet& object_alphabet =
        s1.has_object_role() ? s1.object_alphabet() : s2.object_alphabet();
    const Alphabet& memory_alphabet =
        s1.has_memory_role() ? s1.memory_alphabet() : s2.memory_alphabet();

    StateVector::TermMap product;
    for (const auto& [l1, a1] : s1.terms()) {
        for (const auto& [l2, a2] : s2.terms()) {
            BasisLabel joined;
            joined.object_part = l1.object_part;
            joined.object_part.insert(joined.object_part.end(), l2.object_part.begin(),
                                      l2.object_part.end());
            joined.memory_part = l1.memory_part;
            joined.memory_part.insert(joined.memory_part.end(), l2.memory_part.begin(),
                                      l2.memory_part.end());
            product[joined] = a1 * a2;
        }
    }
    StateVector out = StateVector::raw(object_alphabet, memory_alphabet,
                                       s1.has_object_role() || s2.has_object_role(),
                                       s1.has_memory_role() || s2.has_memory_role(),
                                       std::move(product));
    return out;
}

Amplitude inner(const StateVector& s1, const StateVector& s2) {
    if (s1.has_object_role() != s2.has_object_role() ||
        s1.has_memory_role() != s2.has_memory_role() ||
        (s1.has_object_role() && s1.object_alphabet() != s2.object_alphabet()) ||
        (s1.has_memory_role() && s1.memory_alphabet() != s2.memory_alphabet())) {
        throw InputError("label error: states are over different alphabets");
    }
    // Distinct labels are orthonormal, so only shared labels contribute.
    Amplitude sum{0.0, 0.0};
    for (const auto& [label, a1] : s1.terms()) {
        auto it = s2.terms().find(label);
        if (it != s2.terms().end()) {
            sum += std::conj(a1) * it->second;
        }
    }
    return sum;
}

LinearOperator::LinearOperator(std::vector<BasisLabel> basis, Eigen::MatrixXcd matrix,
                               Alphabet object_alphabet, Alphabet memory_alphabet,
                               bool object_role, bool memory_role)
    : basis_(std::move(basis)),
      matrix_(std::move(matrix)),
      object_alphabet_(std::move(object_alphabet)),
      memory_alphabet_(std::move(memory_alphabet)),
      object_role_(object_role),
      memory_role_(memory_role) {
    if (matrix_.rows() != matrix_.cols() ||
        static_cast<std::size_t>(matrix_.rows()) != basis_.size()) {
        throw InputError("operator matrix must be square over its basis");
    }
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        check_label(basis_[i], object_alphabet_, memory_alphabet_, object_role_, memory_role_);
        if (!index_.emplace(basis_[i], i).second) {
            throw InputError("label error: duplicate basis label");
        }
    }
}

std::optional<std::size_t> LinearOperator::index_of(const BasisLabel& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

double unitarity_residual(const LinearOperator& op) {
    const Eigen::MatrixXcd gram = op.matrix().adjoint() * op.matrix();
    const Eigen::MatrixXcd identity =
        Eigen::MatrixXcd::Identity(gram.rows(), gram.cols());
    return (gram - identity).cwiseAbs().maxCoeff();
}

bool is_unitary(LinearOperator& op, double tol) {
    const bool ok = unitarity_residual(op) <= tol;
    if (ok) {
        op.verified_unitary_ = true;
    }
    return ok;
}

StateVector apply(const LinearOperator& op, const StateVector& s) {
    if (op.has_object_role() != s.has_object_role() ||
        op.has_memory_role() != s.has_memory_role() ||
        (op.has_object_role() && op.object_alphabet() != s.object_alphabet()) ||
        (op.has_memory_role() && op.memory_alphabet() != s.memory_alphabet())) {
        throw InputError("basis coverage error: operator and state alphabets differ");
    }
    // Accumulate columns in the fixed basis order, then prune exact zeros.
    Eigen::VectorXcd in = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(op.dimension()));
    for (const auto& [label, amp] : s.terms()) {
        auto idx = op.index_of(label);
        if (!idx) {
            throw InputError("basis coverage error: state label " +
                             format_label(label, s.object_alphabet(), s.memory_alphabet()) +
                             " is outside the operator basis");
        }
        in[static_cast<Eigen::Index>(*idx)] = amp;
    }
    const Eigen::VectorXcd out = op.matrix() * in;
    StateVector::TermMap terms;
    for (std::size_t i = 0; i < op.dimension(); ++i) {
        const Amplitude a = out[static_cast<Eigen::Index>(i)];
        if (a != Amplitude{0.0, 0.0}) {
            terms[op.basis()[i]] = a;
        }
    }
    return StateVector::raw(s.object_alphabet(), s.memory_alphabet(), s.has_object_role(),
                            s.has_memory_role(), std::move(terms));
}

}  // namespace everett
