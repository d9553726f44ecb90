#ifndef CRIBMAC_BLOCK_MARKOV_HPP
#define CRIBMAC_BLOCK_MARKOV_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "cribmac/mac.hpp"
#include "cribmac/prob.hpp"
#include "cribmac/regions.hpp"

namespace cribmac {

// Per-block codeword rates of the four-codebook construction plus the
// recycling split gamma and the rate slack epsilon.
struct RhoAllocation {
    double rho0 = 0.0;  // cooperative cloud index
    double rho1 = 0.0;  // non-recycled x1 satellite part (m1')
    double rho2 = 0.0;  // recycled x1 satellite part (m1'')
    double rho3 = 0.0;  // x2 satellite
    double gamma = 1.0;   // recycling split in [0,1]
    double epsilon = 0.0;

    // Enforces the decodability, resolvability and recycling inequalities
    // against the law's information quantities.
    void validate(const JointTable& joint_ux1x2z) const;
};

// rho0 = I(U;Z)+eps, rho1 = I(X1;Z|U)+eps, rho2 = H(X1|U)-I(X1;Z|U)-2eps,
// rho3 = I(X2;Z|U,X1)+eps. Throws InfeasibleLaw unless
// H(X1|U) > I(U,X1;Z) + 3 eps, which is what rho2 > rho0 needs.
RhoAllocation default_allocation(const JointTable& joint_ux1x2z, double epsilon,
                                 double gamma = 1.0);

// R1 = rho1 + (1-gamma) rho2 + gamma rho0, R2 = rho3 - (1-gamma)(rho2-rho0).
RatePoint effective_rates(const RhoAllocation& alloc);

struct BlockConfig {
    std::size_t r = 1;  // per-block length
    std::size_t B = 1;  // block count
    RhoAllocation alloc;
    InputLaw law;  // auxiliary-variable variant
    std::uint64_t seed = 1;
    double decode_epsilon = 0.2;       // cribbing list-decoder typicality slack
    bool estimate_coupling = true;     // also run the decoded coupling
};

struct BlockCodebooks {
    std::size_t r = 0, B = 0;
    std::size_t n0 = 0, n1 = 0, n2 = 0, n3 = 0;  // index-space sizes ceil(2^{r rho})
    // [block][m0] -> word / word list
    std::vector<std::vector<Word>> u_words;                 // B x n0
    std::vector<std::vector<std::vector<Word>>> x1_words;   // B x n0 x (n1*n2), j*n2+k
    std::vector<std::vector<std::vector<Word>>> x2_words;   // B x n0 x n3

    const Word& x1(std::size_t b, std::size_t m0, std::size_t j, std::size_t k) const {
        return x1_words[b][m0][j * n2 + k];
    }
};

// Layered structure, per block: ceil(2^{r rho0}) u-words from P_U, x1-words
// superposed on u indexed (m1', m1''), x2-words superposed on u.
BlockCodebooks build_block_codebooks(const BlockConfig& cfg);

// Fixed-width bit fields carved from m1'' of the previous block: w0 bits
// re-create m0, then w1 bits seed m1', the remainder w2 seeds m2. Widths are
// rounded down and capped by the receiving index spaces; the rounding
// residue is reported, not hidden.
struct RecyclePlan {
    std::size_t w0 = 0, w1 = 0, w2 = 0;
    std::size_t fresh1 = 1, fresh2 = 1;  // fresh multipliers for m1' / m2
    double residue0 = 0.0, residue1 = 0.0, residue2 = 0.0;
};

RecyclePlan recycle_plan(const BlockConfig& cfg, const BlockCodebooks& books);

struct ChainDiagnostics {
    double total_kl = 0.0;                  // D(P_{Z^n} || Q^{(x) rB})
    std::vector<double> per_block_kl;       // D(P_{Z_b^r} || Q^{(x) r})
    std::vector<double> cross_mi;           // I(Z_b^r ; Z_{b+1..B}^r)
    double eq_decomposition_gap = 0.0;      // |total - sum(per-block) - sum(cross)|
    std::vector<double> secrecy_kl;         // D(P_{Z_b, M1''} || Q^{(x)r} P_{M1''})
    std::vector<double> markov_lhs;         // I(Z_b ; Z_{b+1..B})
    std::vector<double> markov_rhs;         // I(Z_b ; M1''(b), M1''-hat(b))
    std::vector<double> p_error;            // cribbing list-decode error per block
    std::vector<double> mismatch;           // Pr[M1''(b) != M1''-hat(b)]
    std::vector<double> v_gap;              // V(P_{Z_b,M1''}, Pbar_{Z_b,M1''})
};

struct ChainResult {
    JointTable ideal_joint;  // axes M1pp_b1..bB, Z_b1..bB under the shared-m0 coupling
    ChainDiagnostics ideal;
    std::optional<ChainDiagnostics> estimated;
    RecyclePlan plan;
    std::size_t n0 = 0, n1 = 0, n2 = 0, n3 = 0;
};

// Exact chained law over B blocks. Block 1's m0 is drawn from the recorded
// shared-randomness stream (externally seeded initialization). The ideal
// coupling hands Encoder 2 the true m1''; the estimate coupling runs the
// strong-typicality cribbing decoder instead.
ChainResult simulate_chain(const BlockConfig& cfg, const MacChannel& mac,
                           const std::optional<TargetOutput>& target = std::nullopt);

// Single-block quantity D(Pbar_{Z^r, M1''} || Q^{(x)r} Pbar_{M1''}) for one
// seeded codebook, all messages uniform and m0 shared.
double per_block_secrecy_kl(const BlockConfig& cfg, const MacChannel& mac,
                            const std::optional<TargetOutput>& target = std::nullopt);

// Sampling fallback for chains whose exact state space exceeds the guard.
// Per-block output laws are Rao-Blackwellized over sampled trajectories
// (average of the exact conditional law of each block given its realized
// codewords), then plugged into the divergence; everything here is an
// estimate, never exact, and is flagged as such.
struct ChainSampleEstimate {
    std::size_t trajectories = 0;
    std::vector<double> per_block_kl_plugin;  // plug-in D(P-hat_{Z_b} || Q^{(x)r})
    std::vector<double> p_error;              // empirical cribbing-decoder error
    std::vector<double> mismatch;             // empirical Pr[M1'' != M1''-hat]
    RecyclePlan plan;
    bool sampled = true;
};

ChainSampleEstimate simulate_chain_mc(const BlockConfig& cfg, const MacChannel& mac,
                                      const std::optional<TargetOutput>& target,
                                      std::size_t trajectories);

// Product form P(x1) P(t) over strategies t : X1 -> X2 reproducing a joint
// P*(x1, x2). Strategy indices are mixed-radix over x1 (x1 = 0 most
// significant digit, base |X2|).
struct StrategyDecomposition {
    ProbVector p_x1;
    ProbVector p_t;
    std::size_t x1_size = 0, x2_size = 0;

    std::size_t strategy_image(std::size_t t, std::size_t x1) const;
    JointTable reconstruct() const;  // exact round trip back to P*
};

// Requires full support on X1; throws ZeroMarginal otherwise.
StrategyDecomposition shannon_strategy_decompose(const JointTable& pstar);

struct StrategyRegionReport {
    RegionSpec spec;
    bool extremal_case = false;  // H(X1|Z) = 0 branch
    double h_x1_given_z = 0.0;
};

// Causal thresholds through the strategy channel W+(z | x1, t): the
// strictly-causal formulas at |U| = 1 on the restricted product law, equal
// to the non-causal system on the original channel.
StrategyRegionReport causal_region_via_strategy(const MacChannel& mac, const InputLaw& law);

}  // namespace cribmac

#endif  // CRIBMAC_BLOCK_MARKOV_HPP
