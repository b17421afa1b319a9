#include "everett/cat.hpp"

#include <array>
#include <cmath>
#include <cstdio>

namespace everett {
namespace cat {

namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr Symbol kLive = static_cast<Symbol>(CatState::live);
constexpr Symbol kDead = static_cast<Symbol>(CatState::dead);

// Joint index: object-major, memory slot 0 = blank, slot 1+s = record s.
constexpr std::size_t kMemorySlots = 5;

std::size_t joint_index(Symbol object, std::size_t memory_slot) {
    return static_cast<std::size_t>(object) * kMemorySlots + memory_slot;
}

BasisLabel joint_label(Symbol object, std::size_t memory_slot) {
    BasisLabel label;
    label.object_part = {object};
    if (memory_slot > 0) {
        label.memory_part = {static_cast<Symbol>(memory_slot - 1)};
    }
    return label;
}

LinearOperator make_joint_operator(Eigen::MatrixXcd matrix) {
    return LinearOperator(joint_basis(), std::move(matrix), object_alphabet(),
                          memory_alphabet(), true, true);
}

// Permutation recording object slot 0 into record_a and slot 1 into
// record_b: blank swaps with the matching record, everything else stays.
Eigen::MatrixXcd record_permutation(Symbol record_a, Symbol record_b) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(10, 10);
    const std::size_t slot_a = 1 + static_cast<std::size_t>(record_a);
    const std::size_t slot_b = 1 + static_cast<std::size_t>(record_b);
    for (Symbol object : {kLive, kDead}) {
        const std::size_t swap_slot = object == kLive ? slot_a : slot_b;
        for (std::size_t mem = 0; mem < kMemorySlots; ++mem) {
            std::size_t to = mem;
            if (mem == 0) {
                to = swap_slot;
            } else if (mem == swap_slot) {
                to = 0;
            }
            p(joint_index(object, to), joint_index(object, mem)) = 1.0;
        }
    }
    return p;
}

StateVector blank_memory() {
    return make_memory_state(memory_alphabet(), {{RecordRegister{}, 1.0}});
}

StateVector definite_object(CatState which) {
    const std::vector<Symbol> symbol{static_cast<Symbol>(which)};
    return make_object_state(object_alphabet(), {{symbol, 1.0}});
}

}  // namespace

const Alphabet& object_alphabet() {
    static const Alphabet alphabet(std::vector<std::string>{"live", "dead"});
    return alphabet;
}

const Alphabet& memory_alphabet() {
    static const Alphabet alphabet(std::vector<std::string>{"live", "dead", "plus", "minus"});
    return alphabet;
}

const std::vector<BasisLabel>& joint_basis() {
    static const std::vector<BasisLabel> basis = [] {
        std::vector<BasisLabel> labels;
        labels.reserve(10);
        for (Symbol object : {kLive, kDead}) {
            for (std::size_t mem = 0; mem < kMemorySlots; ++mem) {
                labels.push_back(joint_label(object, mem));
            }
        }
        return labels;
    }();
    return basis;
}

std::string record_name(const RecordRegister& reg) {
    if (reg.empty()) {
        return "blank";
    }
    if (reg.size() == 1) {
        return "rec_" + memory_alphabet().name(reg[0]);
    }
    return format_register(reg, memory_alphabet());
}

SuperpositionParams SuperpositionParams::make(Amplitude a, Amplitude b) {
    const double total = sq_abs(a) + sq_abs(b);
    if (std::abs(total - 1.0) > 1e-10) {
        throw InputError("superposition amplitudes are not normalized");
    }
    return SuperpositionParams{a, b};
}

double SuperpositionParams::phi_overlap() const {
    return sq_abs(a) - sq_abs(b);
}

LinearOperator build_record_unitary() {
    LinearOperator op = make_joint_operator(record_permutation(kRecLive, kRecDead));
    if (!is_unitary(op, kUnitaryTol)) {
        throw Error("record unitary completion failed the unitarity check");
    }
    return op;
}

StateVector observe_superposition(const SuperpositionParams& p) {
    std::map<std::vector<Symbol>, Amplitude> object_terms;
    if (p.a != Amplitude{0.0, 0.0}) {
        object_terms[{kLive}] = p.a;
    }
    if (p.b != Amplitude{0.0, 0.0}) {
        object_terms[{kDead}] = p.b;
    }
    const StateVector prepared =
        tensor(make_object_state(object_alphabet(), object_terms), blank_memory());
    const LinearOperator u = build_record_unitary();
    return apply(u, prepared);
}

LinearOperator build_superposition_observer(const SuperpositionParams& p) {
    if (p.a == Amplitude{0.0, 0.0} || p.b == Amplitude{0.0, 0.0}) {
        throw InputError("superposition observer needs both amplitudes non-zero");
    }
    const double overlap = p.phi_overlap();
    if (std::abs(overlap) > kUnitaryTol) {
        char message[128];
        std::snprintf(message, sizeof(message),
                      "non-orthogonal plus/minus basis: no unitary completion (overlap %.6g)",
                      overlap);
        throw ObstructionError(message, overlap);
    }

    // Rotate the object factor so the plus/minus pair plays the role the
    // definite states play for the record unitary, then permute records.
    Eigen::MatrixXcd rotation(2, 2);
    rotation(0, 0) = p.a;
    rotation(1, 0) = p.b;
    rotation(0, 1) = p.a;
    rotation(1, 1) = -p.b;

    Eigen::MatrixXcd rotation_joint = Eigen::MatrixXcd::Zero(10, 10);
    for (int object = 0; object < 2; ++object) {
        for (int column = 0; column < 2; ++column) {
            for (std::size_t mem = 0; mem < kMemorySlots; ++mem) {
                rotation_joint(joint_index(static_cast<Symbol>(object), mem),
                               joint_index(static_cast<Symbol>(column), mem)) =
                    rotation(object, column);
            }
        }
    }

    const Eigen::MatrixXcd permutation = record_permutation(kRecPlus, kRecMinus);
    LinearOperator op =
        make_joint_operator(rotation_joint * permutation * rotation_joint.adjoint());
    if (!is_unitary(op, kUnitaryTol)) {
        throw Error("superposition observer completion failed the unitarity check");
    }
    return op;
}

StateVector superposition_observer_on_definite(const SuperpositionParams& p, CatState which) {
    const LinearOperator observer = build_superposition_observer(p);
    const StateVector prepared = tensor(definite_object(which), blank_memory());
    return apply(observer, prepared);
}

std::map<RecordRegister, MeasureValue> branch_measures(const StateVector& s) {
    std::map<RecordRegister, double> totals;
    for (const auto& [label, amp] : s.terms()) {
        totals[label.memory_part] += sq_abs(amp);
    }
    std::map<RecordRegister, MeasureValue> measures;
    for (const auto& [reg, value] : totals) {
        measures[reg] = MeasureValue::from_linear(value);
    }
    return measures;
}

InvarianceCheckResult basis_invariance_check(const SuperpositionParams& p,
                                             const LinearOperator& v, double tol) {
    if (!v.verified_unitary()) {
        throw InputError("invalid basis transform: operator is not verified unitary");
    }
    if (!v.has_object_role() || v.has_memory_role() || v.dimension() != 2 ||
        v.object_alphabet() != object_alphabet()) {
        throw InputError("invalid basis transform: expected a 2x2 object-factor operator");
    }

    const StateVector state = observe_superposition(p);
    const auto direct = branch_measures(state);

    // Amplitudes per (object symbol, record) pair.
    std::map<RecordRegister, std::array<Amplitude, 2>> by_record;
    for (const auto& [label, amp] : state.terms()) {
        auto idx = v.index_of(BasisLabel{{label.object_part.at(0)}, {}});
        if (!idx) {
            throw InputError("invalid basis transform: operator does not cover the cat basis");
        }
        by_record[label.memory_part][*idx] += amp;
    }

    InvarianceCheckResult result;
    for (const auto& [reg, amps] : by_record) {
        // Expand over the rotated object basis e_k = sum_g V(g,k) |g> and
        // sum the squared moduli there.
        double rotated = 0.0;
        for (int k = 0; k < 2; ++k) {
            Amplitude component{0.0, 0.0};
            for (int g = 0; g < 2; ++g) {
                component += amps[static_cast<std::size_t>(g)] * std::conj(v.matrix()(g, k));
            }
            rotated += sq_abs(component);
        }
        const double deviation = std::abs(rotated - direct.at(reg).linear);
        result.max_deviation = std::max(result.max_deviation, deviation);
    }
    result.passed = result.max_deviation <= tol;
    return result;
}

LinearOperator object_operator(const Eigen::MatrixXcd& matrix) {
    std::vector<BasisLabel> basis{BasisLabel{{kLive}, {}}, BasisLabel{{kDead}, {}}};
    return LinearOperator(std::move(basis), matrix, object_alphabet(), Alphabet{}, true,
                          false);
}

}  // namespace cat
}  // namespace everett
