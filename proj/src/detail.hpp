// Internal helpers shared by the codebook simulators. Not installed.
#ifndef CRIBMAC_SRC_DETAIL_HPP
#define CRIBMAC_SRC_DETAIL_HPP

#include <cmath>
#include <string>
#include <vector>

#include "cribmac/mac.hpp"
#include "cribmac/prob.hpp"
#include "cribmac/rng.hpp"

namespace cribmac::detail {

inline Word draw_word(Rng& rng, const ProbVector& pmf, std::size_t n) {
    Word w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<Symbol>(rng.sample(pmf.probs()));
    return w;
}

inline Word draw_conditional(Rng& rng, const Kernel& k, const Word& given) {
    Word w(given.size());
    for (std::size_t i = 0; i < given.size(); ++i)
        w[i] = static_cast<Symbol>(rng.sample(k.row(static_cast<std::size_t>(given[i])).probs()));
    return w;
}

struct LawFactors {
    ProbVector p_x1;
    Kernel x2_given_x1;
    bool product;  // joint == P(x1) P(x2) within 1e-12
};

// P(x1) and P(x2|x1) from the law's X1 x X2 marginal. Rows conditioned on a
// zero-mass x1 fall back to uniform; they are never transmitted.
inline LawFactors law_factors(const InputLaw& law) {
    JointTable j = law.x1x2_marginal();
    const std::size_t n1 = j.shape()[0], n2 = j.shape()[1];
    std::vector<double> p1(n1, 0.0), p2(n2, 0.0);
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) {
            p1[a] += j.flat(a * n2 + b);
            p2[b] += j.flat(a * n2 + b);
        }
    std::vector<ProbVector> rows;
    rows.reserve(n1);
    for (std::size_t a = 0; a < n1; ++a) {
        if (p1[a] > 0.0) {
            std::vector<double> row(n2);
            for (std::size_t b = 0; b < n2; ++b) row[b] = j.flat(a * n2 + b) / p1[a];
            double s = 0.0;
            for (double x : row) s += x;
            for (double& x : row) x /= s;
            rows.emplace_back(std::move(row));
        } else {
            rows.emplace_back(ProbVector::uniform(n2));
        }
    }
    bool product = true;
    for (std::size_t a = 0; a < n1 && product; ++a)
        for (std::size_t b = 0; b < n2; ++b)
            if (std::abs(j.flat(a * n2 + b) - p1[a] * p2[b]) > 1e-12) {
                product = false;
                break;
            }
    ProbVector px1(std::move(p1));
    return {std::move(px1), Kernel(std::move(rows)), product};
}

inline std::vector<double> tensor_power(const ProbVector& q, std::size_t m) {
    std::vector<double> acc{1.0};
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> next(acc.size() * q.size());
        for (std::size_t k = 0; k < acc.size(); ++k)
            for (std::size_t z = 0; z < q.size(); ++z) next[k * q.size() + z] = acc[k] * q[z];
        acc.swap(next);
    }
    return acc;
}

inline double kl_raw(const std::vector<double>& p, const std::vector<double>& q,
                     const char* what) {
    KahanSum d;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) throw AbsoluteContinuityViolation(std::string(what) + ": support leak");
        d.add(p[i] * std::log2(p[i] / q[i]));
    }
    return std::max(0.0, d.value());
}

// Accumulated exact laws sum to 1 up to enumeration round-off; divide the
// drift out after confirming it is round-off and not a weighting bug.
inline JointTable normalized_table(std::vector<std::string> axes, std::vector<std::size_t> shape,
                                   std::vector<double> mass) {
    KahanSum s;
    for (double x : mass) s.add(x);
    double total = s.value();
    if (std::abs(total - 1.0) > 1e-9)
        throw Error("enumerated law mass deviates from 1 beyond round-off");
    for (double& x : mass) x /= total;
    return JointTable(std::move(axes), std::move(shape), std::move(mass));
}

// Product law of a word pair over Z^n, built by repeated outer products.
inline std::vector<double> word_pair_output(const MacChannel& mac, const Word& w1,
                                            const Word& w2) {
    std::vector<double> buf{1.0}, next;
    for (std::size_t i = 0; i < w1.size(); ++i) {
        const ProbVector& row =
            mac.row(static_cast<std::size_t>(w1[i]), static_cast<std::size_t>(w2[i]));
        next.assign(buf.size() * mac.z_size(), 0.0);
        for (std::size_t k = 0; k < buf.size(); ++k)
            for (std::size_t z = 0; z < mac.z_size(); ++z)
                next[k * mac.z_size() + z] = buf[k] * row[z];
        buf.swap(next);
    }
    return buf;
}

}  // namespace cribmac::detail

#endif  // CRIBMAC_SRC_DETAIL_HPP
