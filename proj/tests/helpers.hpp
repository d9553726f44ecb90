// Shared fixtures and independent oracles for the test suites. Oracle code
// deliberately avoids the library's entropy/divergence implementations:
// plain loops, natural logs, no compensated summation.
#ifndef CRIBMAC_TESTS_HELPERS_HPP
#define CRIBMAC_TESTS_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "cribmac/mac.hpp"
#include "cribmac/prob.hpp"
#include "cribmac/rng.hpp"

namespace testutil {

using namespace cribmac;

// ---- channels ----------------------------------------------------------------

inline MacChannel xor_mac() {
    std::vector<ProbVector> rows;
    for (std::size_t x1 = 0; x1 < 2; ++x1)
        for (std::size_t x2 = 0; x2 < 2; ++x2)
            rows.push_back(ProbVector::point_mass((x1 + x2) % 2, 2));
    return MacChannel(2, 2, 2, Kernel(std::move(rows)));
}

inline MacChannel and_mac() {
    std::vector<ProbVector> rows;
    for (std::size_t x1 = 0; x1 < 2; ++x1)
        for (std::size_t x2 = 0; x2 < 2; ++x2)
            rows.push_back(ProbVector::point_mass(x1 & x2, 2));
    return MacChannel(2, 2, 2, Kernel(std::move(rows)));
}

// output ignores both inputs
inline MacChannel constant_mac(const std::vector<double>& q) {
    std::vector<ProbVector> rows(4, ProbVector(q));
    return MacChannel(2, 2, q.size(), Kernel(std::move(rows)));
}

// Z reveals the input pair: z = 2 x1 + x2
inline MacChannel identity_pair_mac() {
    std::vector<ProbVector> rows;
    for (std::size_t x1 = 0; x1 < 2; ++x1)
        for (std::size_t x2 = 0; x2 < 2; ++x2)
            rows.push_back(ProbVector::point_mass(2 * x1 + x2, 4));
    return MacChannel(2, 2, 4, Kernel(std::move(rows)));
}

// Y = x1 xor x2 noiselessly; Z = BSC(flip) of the same bit
inline WiretapMac xor_wiretap(double flip) {
    std::vector<ProbVector> rows;
    for (std::size_t x1 = 0; x1 < 2; ++x1)
        for (std::size_t x2 = 0; x2 < 2; ++x2) {
            std::size_t s = (x1 + x2) % 2;
            std::vector<double> yz(4, 0.0);  // index y*2+z
            yz[s * 2 + s] = 1.0 - flip;
            yz[s * 2 + (1 - s)] = flip;
            rows.emplace_back(std::move(yz));
        }
    return WiretapMac(2, 2, 2, 2, Kernel(std::move(rows)));
}

// Y = x1 xor x2 noiselessly; Z constant (no leakage)
inline WiretapMac z_constant_wiretap() {
    std::vector<ProbVector> rows;
    for (std::size_t x1 = 0; x1 < 2; ++x1)
        for (std::size_t x2 = 0; x2 < 2; ++x2) {
            std::size_t s = (x1 + x2) % 2;
            std::vector<double> yz(4, 0.0);
            yz[s * 2 + 0] = 1.0;
            rows.emplace_back(std::move(yz));
        }
    return WiretapMac(2, 2, 2, 2, Kernel(std::move(rows)));
}

// Y = Z = x1 xor x2 (eavesdropper sees what the decoder sees)
inline WiretapMac y_equals_z_wiretap() {
    std::vector<ProbVector> rows;
    for (std::size_t x1 = 0; x1 < 2; ++x1)
        for (std::size_t x2 = 0; x2 < 2; ++x2) {
            std::size_t s = (x1 + x2) % 2;
            std::vector<double> yz(4, 0.0);
            yz[s * 2 + s] = 1.0;
            rows.emplace_back(std::move(yz));
        }
    return WiretapMac(2, 2, 2, 2, Kernel(std::move(rows)));
}

// ---- laws --------------------------------------------------------------------

inline InputLaw uniform_joint_law(std::size_t n1 = 2, std::size_t n2 = 2) {
    return InputLaw::joint(JointTable(
        {"X1", "X2"}, {n1, n2},
        std::vector<double>(n1 * n2, 1.0 / static_cast<double>(n1 * n2))));
}

inline InputLaw joint_law(std::vector<double> cells, std::size_t n1 = 2, std::size_t n2 = 2) {
    return InputLaw::joint(JointTable({"X1", "X2"}, {n1, n2}, std::move(cells)));
}

inline InputLaw product_aux_law(std::vector<double> p1, std::vector<double> p2) {
    return InputLaw::with_aux(ProbVector::uniform(1), Kernel({ProbVector(std::move(p1))}),
                              Kernel({ProbVector(std::move(p2))}));
}

inline std::vector<double> dirichlet(Rng& rng, std::size_t d) {
    std::vector<double> v(d);
    double s = 0.0;
    for (auto& x : v) {
        x = -std::log(1.0 - rng.next_double());
        s += x;
    }
    for (auto& x : v) x /= s;
    return v;
}

inline MacChannel random_mac(Rng& rng, std::size_t n1 = 2, std::size_t n2 = 2,
                             std::size_t nz = 2) {
    std::vector<ProbVector> rows;
    for (std::size_t r = 0; r < n1 * n2; ++r) rows.emplace_back(dirichlet(rng, nz));
    return MacChannel(n1, n2, nz, Kernel(std::move(rows)));
}

inline WiretapMac random_wiretap(Rng& rng, std::size_t n1 = 2, std::size_t n2 = 2,
                                 std::size_t ny = 2, std::size_t nz = 2) {
    std::vector<ProbVector> rows;
    for (std::size_t r = 0; r < n1 * n2; ++r) rows.emplace_back(dirichlet(rng, ny * nz));
    return WiretapMac(n1, n2, ny, nz, Kernel(std::move(rows)));
}

// ---- oracles -----------------------------------------------------------------

inline double oracle_entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p)
        if (x > 0.0) h -= x * std::log(x);
    return h / std::log(2.0);
}

inline double oracle_kl(const std::vector<double>& p, const std::vector<double>& q) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) d += p[i] * std::log(p[i] / q[i]);
    return d / std::log(2.0);
}

inline double oracle_binary_entropy(double p) {
    return oracle_entropy({p, 1.0 - p});
}

// A law in the same-output fiber of `base`: perturb along the null space of
// the channel map, found by Gaussian elimination on W^T.
inline InputLaw same_output_perturbation(const MacChannel& mac, const std::vector<double>& base,
                                         Rng& rng) {
    const std::size_t d = mac.x1_size() * mac.x2_size();
    // rows: one per z plus the all-ones normalization row
    std::vector<std::vector<double>> m;
    for (std::size_t z = 0; z < mac.z_size(); ++z) {
        std::vector<double> row(d);
        for (std::size_t c = 0; c < d; ++c)
            row[c] = mac.w().row(c)[z];
        m.push_back(std::move(row));
    }
    // reduce and extract a null-space basis
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < d && rank < m.size(); ++col) {
        std::size_t piv = rank;
        for (std::size_t r = rank; r < m.size(); ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-12) continue;
        std::swap(m[rank], m[piv]);
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rank) continue;
            double f = m[r][col] / m[rank][col];
            for (std::size_t c = col; c < d; ++c) m[r][c] -= f * m[rank][c];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<double> dir(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        if (std::find(pivot_col.begin(), pivot_col.end(), c) != pivot_col.end()) continue;
        double coeff = rng.next_double() - 0.5;
        dir[c] += coeff;
        for (std::size_t r = 0; r < rank; ++r)
            dir[pivot_col[r]] -= coeff * m[r][c] / m[r][pivot_col[r]];
    }
    double norm = 0.0;
    for (double x : dir) norm += std::abs(x);
    if (norm < 1e-9) return joint_law(std::vector<double>(base), 2, 2);  // degenerate fallback
    // keep entries at least 1e-3 away from the boundary
    double t = 1e9;
    for (std::size_t c = 0; c < d; ++c)
        if (std::abs(dir[c]) > 1e-12) t = std::min(t, (base[c] - 1e-3) / std::abs(dir[c]));
    t = std::max(0.0, std::min(t, 0.5));
    std::vector<double> out(d);
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        out[c] = base[c] + t * dir[c];
        s += out[c];
    }
    for (double& x : out) x /= s;  // s == 1 analytically; harden against round-off
    return joint_law(std::move(out), mac.x1_size(), mac.x2_size());
}

inline InputLaw mixture_aux_law(double alpha, std::vector<double> a, std::vector<double> b,
                                std::vector<double> c, std::vector<double> d) {
    return InputLaw::with_aux(
        ProbVector({alpha, 1.0 - alpha}),
        Kernel({ProbVector(std::move(a)), ProbVector(std::move(c))}),
        Kernel({ProbVector(std::move(b)), ProbVector(std::move(d))}));
}

// Canonical U = X1 split of a 2x2 joint: P(u) = marginal X1, X1 = U
// deterministically, X2 ~ P(x2 | x1 = u).
inline InputLaw canonical_aux_law(const JointTable& m) {
    double p0 = m.flat(0) + m.flat(1);
    std::vector<double> row0{m.flat(0) / p0, m.flat(1) / p0};
    double p1 = m.flat(2) + m.flat(3);
    std::vector<double> row1{m.flat(2) / p1, m.flat(3) / p1};
    return InputLaw::with_aux(ProbVector({p0, p1}),
                              Kernel({ProbVector::point_mass(0, 2), ProbVector::point_mass(1, 2)}),
                              Kernel({ProbVector(row0), ProbVector(row1)}));
}

// Two genuinely different mixture-of-products decompositions of one interior
// 2x2 joint. Same joint means the same induced output for any channel, so
// the pair feeds the time-sharing convexity check. Falls back to the
// canonical U = X1 split for the second law when the root search fails.
inline std::pair<InputLaw, InputLaw> same_joint_aux_pair(Rng& rng) {
    auto interior = [&](std::size_t d) {
        std::vector<double> v = dirichlet(rng, d);
        for (double& x : v) x = 0.9 * x + 0.1 / static_cast<double>(d);
        return v;
    };
    double alpha = 0.25 + 0.5 * rng.next_double();
    std::vector<double> a = interior(2), b = interior(2), c = interior(2), d = interior(2);
    double m[2][2];
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            m[i][j] = alpha * a[i] * b[j] + (1.0 - alpha) * c[i] * d[j];
    InputLaw law_a = mixture_aux_law(alpha, a, b, c, d);
    JointTable joint({"X1", "X2"}, {2, 2}, {m[0][0], m[0][1], m[1][0], m[1][1]});

    for (int attempt = 0; attempt < 40; ++attempt) {
        double alpha2 = 0.2 + 0.6 * rng.next_double();
        std::vector<double> a2 = interior(2);
        auto det_at = [&](double beta) {
            double b2[2] = {beta, 1.0 - beta};
            double n[2][2];
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) n[i][j] = m[i][j] - alpha2 * a2[i] * b2[j];
            return n[0][0] * n[1][1] - n[0][1] * n[1][0];
        };
        // det is quadratic in beta; fit through three points and take roots
        double d0 = det_at(0.0), dh = det_at(0.5), d1 = det_at(1.0);
        double c2 = 2.0 * d1 + 2.0 * d0 - 4.0 * dh;
        double c1 = d1 - d0 - c2;
        double c0 = d0;
        std::vector<double> roots;
        if (std::abs(c2) < 1e-14) {
            if (std::abs(c1) > 1e-14) roots.push_back(-c0 / c1);
        } else {
            double disc = c1 * c1 - 4.0 * c2 * c0;
            if (disc >= 0.0) {
                roots.push_back((-c1 + std::sqrt(disc)) / (2.0 * c2));
                roots.push_back((-c1 - std::sqrt(disc)) / (2.0 * c2));
            }
        }
        for (double beta : roots) {
            if (!(beta > 0.02 && beta < 0.98)) continue;
            double b2[2] = {beta, 1.0 - beta};
            double n[2][2];
            bool ok = true;
            for (std::size_t i = 0; i < 2 && ok; ++i)
                for (std::size_t j = 0; j < 2; ++j) {
                    n[i][j] = m[i][j] - alpha2 * a2[i] * b2[j];
                    if (n[i][j] < 1e-6) {
                        ok = false;
                        break;
                    }
                }
            if (!ok) continue;
            double rest = n[0][0] + n[0][1] + n[1][0] + n[1][1];
            std::vector<double> c3{(n[0][0] + n[0][1]) / rest, (n[1][0] + n[1][1]) / rest};
            std::vector<double> d3{n[0][0] / (n[0][0] + n[0][1]),
                                   n[0][1] / (n[0][0] + n[0][1])};
            // rank-1 check: the second row must give the same conditional
            if (std::abs(n[1][0] / (n[1][0] + n[1][1]) - d3[0]) > 1e-7) continue;
            InputLaw law_b =
                mixture_aux_law(alpha2, a2, {b2[0], b2[1]}, c3, d3);
            return {law_a, law_b};
        }
    }
    return {law_a, canonical_aux_law(joint)};
}

}  // namespace testutil

#endif  // CRIBMAC_TESTS_HELPERS_HPP
