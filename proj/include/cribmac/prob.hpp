#ifndef CRIBMAC_PROB_HPP
#define CRIBMAC_PROB_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cribmac/errors.hpp"

namespace cribmac {

// Validation tolerance for probability mass: entries >= 0 and sum within
// PROB_TOL of 1. Renormalization is never silent; invalid input throws.
inline constexpr double PROB_TOL = 1e-12;

// Compensated (Kahan) accumulator. Entropy / divergence sums over up to 2^26
// terms must stay trustworthy at 1e-12 tolerances.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

using Symbol = int;
using Word = std::vector<Symbol>;

// Probability mass function over a finite alphabet {0, .., size-1}.
class ProbVector {
public:
    explicit ProbVector(std::vector<double> probs);

    static ProbVector uniform(std::size_t n);
    static ProbVector point_mass(std::size_t index, std::size_t n);

    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const std::vector<double>& probs() const { return p_; }

    auto begin() const { return p_.begin(); }
    auto end() const { return p_.end(); }

    // Smallest strictly positive mass (the mu of the divergence bound).
    double min_positive() const;

    bool operator==(const ProbVector& o) const { return p_ == o.p_; }

private:
    std::vector<double> p_;
};

// One conditional law per conditioning symbol; all rows share one output
// alphabet.
class Kernel {
public:
    explicit Kernel(std::vector<ProbVector> rows);

    std::size_t input_size() const { return rows_.size(); }
    std::size_t output_size() const { return out_size_; }
    const ProbVector& row(std::size_t i) const { return rows_.at(i); }

private:
    std::vector<ProbVector> rows_;
    std::size_t out_size_;
};

// Dense joint pmf over a product of named finite alphabets. Row-major layout,
// first axis slowest.
class JointTable {
public:
    JointTable(std::vector<std::string> axes, std::vector<std::size_t> shape,
               std::vector<double> probs);

    std::size_t rank() const { return shape_.size(); }
    const std::vector<std::string>& axes() const { return axes_; }
    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t size() const { return t_.size(); }

    double flat(std::size_t i) const { return t_[i]; }
    const std::vector<double>& probs() const { return t_; }
    double at(std::span<const std::size_t> idx) const;

    std::size_t axis_index(std::string_view name) const;  // AxisError if unknown
    bool has_axis(std::string_view name) const;

    // Marginal over the named axes, keeping their relative order as in *this.
    JointTable marginal(const std::vector<std::string>& keep) const;

    // Flattened view as a pmf over the full product alphabet.
    ProbVector to_prob_vector() const;

private:
    std::vector<std::string> axes_;
    std::vector<std::size_t> shape_;
    std::vector<double> t_;
};

struct TypicalityParams {
    double epsilon;  // relative slack, in (0,1)
    std::size_t n;   // sequence length, >= 1

    TypicalityParams(double eps, std::size_t len);
};

// H(p) = -sum p log2 p, with 0 log 0 = 0. Result in [0, log2 |alphabet|].
double entropy(const ProbVector& p);

// Entropy of the marginal over the named axes (all axes if empty).
double entropy(const JointTable& joint, const std::vector<std::string>& axes = {});

// D(p || q) in bits. Throws AbsoluteContinuityViolation when p puts mass
// where q does not; p log(p/0) is an error here, never +inf.
double kl_divergence(const ProbVector& p, const ProbVector& q);

// sum_x |p(x) - q(x)|, in [0, 2].
double variational_distance(const ProbVector& p, const ProbVector& q);

// I(A; B | C) from exact marginals of `joint`. Axis sets must be disjoint
// and present. Values in [-1e-12, 0) are clamped to 0; anything more
// negative indicates a bug and throws.
double mutual_information(const JointTable& joint, const std::vector<std::string>& axes_a,
                          const std::vector<std::string>& axes_b,
                          const std::vector<std::string>& axes_cond = {});

// Returns (V(p,q), log2(1/mu) * V(p,q)) where mu is q's minimum positive
// mass, and checks D(p||q) <= log2(1/mu) * V(p,q) on the way out.
std::pair<double, double> pinsker_and_min_mass_bounds(const ProbVector& p, const ProbVector& q);

// |N(a|x^n)/n - p(a)| <= eps * p(a) for every a. Symbols with p(a) = 0 must
// not occur at all.
bool is_strongly_typical(std::span<const Symbol> seq, const ProbVector& p,
                         const TypicalityParams& params);

// Joint version: one sequence per axis of `joint`, tested against the joint
// empirical frequency of the symbol tuples.
bool is_strongly_typical(const std::vector<std::span<const Symbol>>& seqs,
                         const JointTable& joint, const TypicalityParams& params);

}  // namespace cribmac

#endif  // CRIBMAC_PROB_HPP
