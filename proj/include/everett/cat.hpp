#pragma once

#include <map>
#include <string>

#include "everett/hilbert.hpp"
#include "everett/measure.hpp"

namespace everett {

/// The cat scenario basis. Object symbols are the two definite cat states;
/// memory symbols are the four possible record contents. Joint labels pair
/// one object symbol with a register of length 0 (blank) or 1, giving the
/// fixed ten-dimensional space all cat operators act on.
namespace cat {

enum class CatState : Symbol { live = 0, dead = 1 };

// Memory record symbols. plus/minus are the records produced when the
// observer registers a superposition as a definite outcome.
inline constexpr Symbol kRecLive = 0;
inline constexpr Symbol kRecDead = 1;
inline constexpr Symbol kRecPlus = 2;
inline constexpr Symbol kRecMinus = 3;

const Alphabet& object_alphabet();
const Alphabet& memory_alphabet();

/// The ten joint labels in canonical order: object-major, register order
/// blank, rec_live, rec_dead, rec_plus, rec_minus.
const std::vector<BasisLabel>& joint_basis();

/// "blank", "rec_live", "rec_dead", "rec_plus", "rec_minus".
std::string record_name(const RecordRegister& reg);

/// Nonzero superposition amplitudes (a, b) with |a|^2 + |b|^2 = 1.
struct SuperpositionParams {
    Amplitude a;
    Amplitude b;

    /// Validates normalization to 1e-10. Zero components are accepted
    /// here; operations that genuinely need both nonzero check that
    /// themselves.
    static SuperpositionParams make(Amplitude a, Amplitude b);

    /// <a l + b d | a l - b d> = |a|^2 - |b|^2; the obstruction to a
    /// unitary superposition observer.
    double phi_overlap() const;
};

/// The record interaction: blank memory copies the definite cat state into
/// the register (live -> rec_live, dead -> rec_dead); on non-blank memory
/// the completion swaps blank with the matching record and leaves every
/// other label alone, making the whole operator a basis permutation.
LinearOperator build_record_unitary();

/// Applies the record unitary to (a|live> + b|dead>) x blank. The result
/// is the two-branch state with the record correlated to the cat in each
/// branch; it is computed through the operator, never assembled.
StateVector observe_superposition(const SuperpositionParams& p);

/// The observer that records the superpositions a|l>+b|d> / a|l>-b|d> as
/// the definite outcomes rec_plus / rec_minus. Exists as a unitary only
/// for |a| = |b|; otherwise throws ObstructionError carrying the overlap.
LinearOperator build_superposition_observer(const SuperpositionParams& p);

/// Action of the superposition observer on a definite cat state: two
/// branches with records rec_plus and rec_minus, never a definite record.
StateVector superposition_observer_on_definite(const SuperpositionParams& p, CatState which);

/// Measure per memory record over the state's register values.
std::map<RecordRegister, MeasureValue> branch_measures(const StateVector& s);

struct InvarianceCheckResult {
    bool passed = false;
    double max_deviation = 0.0;
};

/// Re-expresses the object factor of the observed-superposition state in
/// the basis rotated by v (a verified-unitary 2x2 operator on the object
/// factor alone) and recomputes all record measures by summing over the
/// rotated basis. Passes iff no record measure moves by more than tol.
InvarianceCheckResult basis_invariance_check(const SuperpositionParams& p,
                                             const LinearOperator& v, double tol = 1e-10);

/// 2x2 object-factor operator from a matrix over (live, dead).
LinearOperator object_operator(const Eigen::MatrixXcd& matrix);

}  // namespace cat
}  // namespace everett
