#ifndef CRIBMAC_REGIONS_HPP
#define CRIBMAC_REGIONS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cribmac/mac.hpp"
#include "cribmac/prob.hpp"

namespace cribmac {

struct RatePoint {
    double r1 = 0.0;
    double r2 = 0.0;
};

enum class Sense { AtLeast, AtMost };

// a1*R1 + a2*R2 {>= or <=} bound, with a1, a2 in {0,1}.
struct RateConstraint {
    double a1;
    double a2;
    Sense sense;
    double bound;
    std::string name;
};

struct RegionSpec {
    std::vector<RateConstraint> constraints;
    // Strictly-causal inner bound: set iff H(X1|U) > I(U,X1;Z) holds with margin
    // 1e-9 (ties count as infeasible). Membership is false when unset.
    bool feasible = true;
    std::optional<double> feasibility_margin;
};

// Inner/outer distinction only matters for strictly-causal cribbing.
enum class BoundSide { Inner, Outer };

// All constraints satisfied within `slack`; the feasibility flag short-
// circuits membership to false.
bool contains(const RegionSpec& region, RatePoint pt, double slack);

// Half-space systems of the resolvability regions, one per distribution.
// Joint laws for degraded / non-causal / causal; auxiliary-variable laws for
// strictly-causal and non-cooperating. Negative R2 thresholds are retained
// unclamped so the causal / non-causal systems compare exactly.
RegionSpec resolvability_thresholds(const MacChannel& mac, const InputLaw& law,
                                    CribbingScenario scenario,
                                    BoundSide side = BoundSide::Inner);

// Achievable strong-secrecy systems, one per cribbing model.
RegionSpec secrecy_region(const WiretapMac& wmac, const InputLaw& law,
                          CribbingScenario scenario);

struct DistributionSearchConfig {
    enum class Mode { InducedQ, TargetQ };
    Mode mode = Mode::TargetQ;
    std::size_t grid_resolution = 4;  // simplex ticks, >= 2
    std::size_t samples = 64;         // seeded random draws, >= 1
    std::size_t u_cardinality_cap = 0;  // 0 -> |X1|*|X2| heuristic default
    double target_tol = 1e-9;
    std::uint64_t seed = 1;

    void validate() const;
};

struct FrontierPoint {
    RatePoint point;
    std::size_t law_id;
};

struct UnionRegionResult {
    std::vector<InputLaw> laws;        // contributing laws, deterministic order
    std::vector<RegionSpec> specs;     // parallel to laws
    std::vector<ProbVector> induced;   // induced Q_Z per law
    std::vector<FrontierPoint> frontier;  // per-law boundary corners / vertices
};

// Union-over-distributions sweep: deterministic simplex grid plus seeded
// draws. Enlarging `samples` with a fixed seed extends the law list and the
// frontier, never shrinks them. Throws NoFeasibleLaw in target-Q mode when
// nothing matches.
UnionRegionResult union_region_estimate(const MacChannel& mac, CribbingScenario scenario,
                                        const std::optional<TargetOutput>& target,
                                        const DistributionSearchConfig& cfg);
UnionRegionResult union_region_estimate(const WiretapMac& wmac, CribbingScenario scenario,
                                        const std::optional<TargetOutput>& target,
                                        const DistributionSearchConfig& cfg);

struct ConvexityTerm {
    std::string name;
    double mixture_value;
    double combo_value;  // lambda * endpoint A + (1 - lambda) * endpoint B
    bool ok;
};

struct ConvexityReport {
    std::vector<ConvexityTerm> terms;
    bool feasibility_preserved = true;  // strictly-causal inner bound only
    bool all_ok = true;
};

// Mixture-law construction of the convexity proofs: lambda-mixture of the
// joints for degraded / non-causal / causal; time-sharing auxiliary
// U = (U^(Q), Q) for strictly-causal. Asserts every mixture threshold is at
// most the lambda-combination of the endpoint thresholds.
ConvexityReport convexity_check(const MacChannel& mac, CribbingScenario scenario,
                                const InputLaw& law_a, const InputLaw& law_b, double lambda,
                                double tol = 1e-9);

struct FmeMismatch {
    RatePoint pt;
    bool in_region;
    bool witness_found;
};

struct FmeReport {
    std::size_t points_checked = 0;
    std::vector<FmeMismatch> mismatches;
};

// Membership in the eliminated secrecy region vs. existence of dither
// rates satisfying the pre-elimination error + resolvability system, checked
// on a rate grid with the witness searched on a finer auxiliary grid.
// Boundary effects are excused up to roughly one auxiliary step: a member
// must have a witness at slack of one aux step, and a witness forces
// membership within two aux steps. Degraded and non-causal scenarios only.
bool fme_cross_check(const WiretapMac& wmac, const InputLaw& law, CribbingScenario scenario,
                     double grid_step, double aux_step, FmeReport* report = nullptr);

}  // namespace cribmac

#endif  // CRIBMAC_REGIONS_HPP
