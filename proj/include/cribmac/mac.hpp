#ifndef CRIBMAC_MAC_HPP
#define CRIBMAC_MAC_HPP

#include <optional>
#include <string>
#include <variant>

#include "cribmac/prob.hpp"

namespace cribmac {

enum class CribbingScenario {
    NonCooperating,
    DegradedMessageSets,
    NonCausal,
    StrictlyCausal,
    Causal,
};

std::string to_string(CribbingScenario s);
CribbingScenario scenario_from_string(std::string_view name);

// Two-encoder discrete memoryless channel W_{Z|X1,X2}. Input pairs are
// flattened row-major with x1 outer: row = x1 * x2_size + x2.
class MacChannel {
public:
    MacChannel(std::size_t x1_size, std::size_t x2_size, std::size_t z_size, Kernel w);

    std::size_t x1_size() const { return x1_size_; }
    std::size_t x2_size() const { return x2_size_; }
    std::size_t z_size() const { return z_size_; }
    const Kernel& w() const { return w_; }
    const ProbVector& row(std::size_t x1, std::size_t x2) const {
        return w_.row(x1 * x2_size_ + x2);
    }

private:
    std::size_t x1_size_, x2_size_, z_size_;
    Kernel w_;
};

// Wiretap version: joint law W_{YZ|X1,X2} with outputs flattened as
// y * z_size + z per row.
class WiretapMac {
public:
    WiretapMac(std::size_t x1_size, std::size_t x2_size, std::size_t y_size, std::size_t z_size,
               Kernel wyz);

    std::size_t x1_size() const { return x1_size_; }
    std::size_t x2_size() const { return x2_size_; }
    std::size_t y_size() const { return y_size_; }
    std::size_t z_size() const { return z_size_; }
    const Kernel& wyz() const { return wyz_; }
    const ProbVector& row(std::size_t x1, std::size_t x2) const {
        return wyz_.row(x1 * x2_size_ + x2);
    }

    // Marginalizing Y recovers the eavesdropper channel.
    MacChannel z_channel() const;
    // Marginalizing Z gives the legitimate-receiver channel.
    MacChannel y_channel() const;

private:
    std::size_t x1_size_, x2_size_, y_size_, z_size_;
    Kernel wyz_;
};

// Input law: either a joint pmf over X1 x X2, or the auxiliary-variable
// factorization P_U P_{X1|U} P_{X2|U}.
class InputLaw {
public:
    // degenerate single-symbol law; placeholder until a real law is assigned
    InputLaw() : v_(JointTable({"X1", "X2"}, {1, 1}, {1.0})) {}

    static InputLaw joint(JointTable p_x1x2);  // axes must be {"X1","X2"}
    static InputLaw with_aux(ProbVector p_u, Kernel p_x1_given_u, Kernel p_x2_given_u);

    bool has_aux() const { return std::holds_alternative<Aux>(v_); }
    std::size_t u_size() const { return has_aux() ? std::get<Aux>(v_).p_u.size() : 0; }
    std::size_t x1_size() const;
    std::size_t x2_size() const;

    // Joint variant contents; LawVariantError on the aux variant.
    const JointTable& joint_table() const;
    // Aux variant contents; LawVariantError on the joint variant.
    const ProbVector& p_u() const;
    const Kernel& p_x1_given_u() const;
    const Kernel& p_x2_given_u() const;

    // Expansion: {"U","X1","X2"} for the aux variant, {"X1","X2"} otherwise.
    JointTable expanded() const;
    // Marginal over X1 x X2 (identity for the joint variant).
    JointTable x1x2_marginal() const;

private:
    struct Aux {
        ProbVector p_u;
        Kernel x1_given_u;
        Kernel x2_given_u;
    };
    explicit InputLaw(JointTable t) : v_(std::move(t)) {}
    explicit InputLaw(Aux a) : v_(std::move(a)) {}

    std::variant<JointTable, Aux> v_;
};

struct TargetOutput {
    ProbVector q_z;
};

// Q_Z(z) = sum_{x1,x2} P(x1,x2) W(z|x1,x2).
ProbVector induced_output(const MacChannel& mac, const InputLaw& law);

// Exact joint over (U,)X1,X2,Z; Z-marginal equals induced_output.
JointTable full_joint(const MacChannel& mac, const InputLaw& law);
// Exact joint over (U,)X1,X2,Y,Z.
JointTable full_joint(const WiretapMac& wmac, const InputLaw& law);

// Max-abs deviation of the induced output from the target is <= tol
// (boundary accepts).
bool matches_target(const MacChannel& mac, const InputLaw& law, const TargetOutput& target,
                    double tol);

}  // namespace cribmac

#endif  // CRIBMAC_MAC_HPP
