#ifndef CRIBMAC_RESOLVABILITY_HPP
#define CRIBMAC_RESOLVABILITY_HPP

#include <cstdint>
#include <vector>

#include "cribmac/mac.hpp"
#include "cribmac/prob.hpp"

namespace cribmac {

// Exact-enumeration guard: |Z|^n (and messages x |Z|^n for leakage) must stay
// within 2^26 states. Larger requests are rejected, never silently sampled.
inline constexpr std::uint64_t ENUMERATION_GUARD = 1ull << 26;

// Message count for a nominal rate: ceil(2^(n R)), with 1e-9 slack so that
// integer-valued n R does not round up spuriously.
std::size_t message_count(std::size_t n, double rate);

struct CodebookConfig {
    CribbingScenario scenario = CribbingScenario::DegradedMessageSets;
    std::size_t n = 1;
    double r1 = 0.0;
    double r2 = 0.0;
    InputLaw law;
    std::uint64_t seed = 1;
};

// A realized random codebook. x2 indexing per scenario: one sub-codebook per
// m1 for degraded message sets, one per distinct realized x1-word for
// non-causal / causal cribbing (colliding x1-words share their x2 book), a
// single shared book for non-cooperating encoders.
struct Codebook {
    CribbingScenario scenario;
    std::size_t n = 0;
    std::size_t m1_count = 0;
    std::size_t m2_count = 0;
    double realized_r1 = 0.0;  // log2(m1_count)/n
    double realized_r2 = 0.0;
    std::vector<Word> x1_words;               // indexed by m1
    std::vector<std::vector<Word>> x2_books;  // unique sub-codebooks
    std::vector<std::size_t> book_of_m1;      // m1 -> index into x2_books

    const Word& x1(std::size_t m1) const { return x1_words[m1]; }
    const Word& x2(std::size_t m1, std::size_t m2) const {
        return x2_books[book_of_m1[m1]][m2];
    }
};

struct SimReport {
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::vector<double> kl_per_trial;
    std::size_t n = 0;
    double nominal_r1 = 0.0, nominal_r2 = 0.0;
    double realized_r1 = 0.0, realized_r2 = 0.0;
    std::size_t m1_count = 0, m2_count = 0;
    std::uint64_t seed = 0;
    CribbingScenario scenario = CribbingScenario::DegradedMessageSets;
};

// Codewords drawn i.i.d. per symbol from P_{X1} and P_{X2|X1} of the law's
// X1 x X2 marginal; fully determined by cfg.seed.
Codebook sample_codebook(const CodebookConfig& cfg);

// Exact P_{Z^n} as the uniform mixture over message pairs of W^{(x) n}.
ProbVector induced_n_letter_output(const Codebook& cb, const MacChannel& mac);

// D(P_{Z^n} || Q^{(x) n}), exact.
double resolvability_kl(const Codebook& cb, const MacChannel& mac, const TargetOutput& target);

// Mean / stderr of the exact divergence over independent codebook draws;
// trial t uses derive_seed(cfg.seed, "trial", {t}).
SimReport mc_expected_kl(const CodebookConfig& cfg, const MacChannel& mac,
                         const TargetOutput& target, std::size_t trials);

// I(M1,M2; Z^n) with uniform messages, exact.
double exact_leakage(const Codebook& cb, const MacChannel& mac);

}  // namespace cribmac

#endif  // CRIBMAC_RESOLVABILITY_HPP
