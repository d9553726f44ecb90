#include "cribmac/secrecy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "cribmac/resolvability.hpp"
#include "cribmac/rng.hpp"
#include "detail.hpp"

namespace cribmac {

namespace {

using detail::draw_conditional;
using detail::draw_word;
using detail::kl_raw;
using detail::law_factors;
using detail::tensor_power;
using detail::word_pair_output;

std::uint64_t word_hash(const Word& w) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Symbol s : w) h = fnv1a64(static_cast<std::uint64_t>(s), h);
    return h;
}

std::uint64_t pow_guarded(std::uint64_t base, std::size_t exp) {
    std::uint64_t v = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (v > ENUMERATION_GUARD / base) return ENUMERATION_GUARD + 1;
        v *= base;
    }
    return v;
}

bool single_shot(CribbingScenario s) {
    return s == CribbingScenario::DegradedMessageSets || s == CribbingScenario::NonCausal ||
           s == CribbingScenario::Causal;
}

}  // namespace

SecrecyCodebook build_secrecy_codebook(const SecrecyCodeConfig& cfg) {
    SecrecyCodebook cb;
    cb.scenario = cfg.scenario;

    if (single_shot(cfg.scenario)) {
        detail::LawFactors f = law_factors(cfg.law);
        cb.n = cfg.n;
        cb.m1_count = message_count(cfg.n, cfg.secret_r1);
        cb.m1p_count = message_count(cfg.n, cfg.dither_r1);
        cb.m2_count = message_count(cfg.n, cfg.secret_r2);
        cb.m2p_count = message_count(cfg.n, cfg.dither_r2);
        const std::size_t t1 = cb.m1_count * cb.m1p_count;
        const std::size_t t2 = cb.m2_count * cb.m2p_count;
        if (static_cast<std::uint64_t>(t1) * t2 > ENUMERATION_GUARD)
            throw GuardExceeded("build_secrecy_codebook: tuple space above guard");

        cb.x1_words.reserve(t1);
        for (std::size_t i = 0; i < t1; ++i) {
            Rng rng(derive_seed(cfg.seed, "sec/x1", {i}));
            cb.x1_words.push_back(draw_word(rng, f.p_x1, cfg.n));
        }
        cb.book_of_x1.assign(t1, 0);
        auto draw_book = [&](Rng& rng, const Word& given) {
            std::vector<Word> book;
            book.reserve(t2);
            for (std::size_t m = 0; m < t2; ++m)
                book.push_back(draw_conditional(rng, f.x2_given_x1, given));
            return book;
        };
        if (cfg.scenario == CribbingScenario::DegradedMessageSets) {
            for (std::size_t i = 0; i < t1; ++i) {
                Rng rng(derive_seed(cfg.seed, "sec/x2m", {i}));
                cb.x2_books.push_back(draw_book(rng, cb.x1_words[i]));
                cb.book_of_x1[i] = cb.x2_books.size() - 1;
            }
        } else {
            std::map<Word, std::size_t> seen;
            for (std::size_t i = 0; i < t1; ++i) {
                const Word& w = cb.x1_words[i];
                auto it = seen.find(w);
                if (it == seen.end()) {
                    Rng rng(derive_seed(cfg.seed, "sec/x2w", {word_hash(w)}));
                    cb.x2_books.push_back(draw_book(rng, w));
                    it = seen.emplace(w, cb.x2_books.size() - 1).first;
                }
                cb.book_of_x1[i] = it->second;
            }
        }
        return cb;
    }

    if (cfg.scenario != CribbingScenario::StrictlyCausal)
        throw Error("build_secrecy_codebook: no construction for " + to_string(cfg.scenario));
    if (!cfg.law.has_aux())
        throw LawVariantError("strictly-causal secrecy codebooks need an auxiliary-variable law");

    cb.r = cfg.r;
    cb.B = cfg.B;
    cb.c1 = message_count(cfg.r, cfg.secret_r1);
    cb.c1p = message_count(cfg.r, cfg.rho1p);
    cb.c1pp = message_count(cfg.r, cfg.rho1pp);
    cb.c2 = message_count(cfg.r, cfg.secret_r2);
    cb.c2p = message_count(cfg.r, cfg.rho2);
    const std::size_t clouds = cb.cloud_count();
    const std::size_t x2s = cb.x2_count();
    if (static_cast<std::uint64_t>(clouds) * (clouds + x2s + 1) * cfg.B * cfg.r >
        ENUMERATION_GUARD)
        throw GuardExceeded("build_secrecy_codebook: block codebook storage above guard");

    const ProbVector& pu = cfg.law.p_u();
    const Kernel& k1 = cfg.law.p_x1_given_u();
    const Kernel& k2 = cfg.law.p_x2_given_u();
    cb.u_words.resize(cfg.B);
    cb.x1_words_b.resize(cfg.B);
    cb.x2_words_b.resize(cfg.B);
    for (std::size_t b = 0; b < cfg.B; ++b) {
        cb.u_words[b].reserve(clouds);
        cb.x1_words_b[b].resize(clouds);
        cb.x2_words_b[b].resize(clouds);
        for (std::size_t c = 0; c < clouds; ++c) {
            Rng ru(derive_seed(cfg.seed, "sec/bm/u", {b, c}));
            cb.u_words[b].push_back(draw_word(ru, pu, cfg.r));
            Rng r1(derive_seed(cfg.seed, "sec/bm/x1", {b, c}));
            auto& sat = cb.x1_words_b[b][c];
            sat.reserve(clouds);
            for (std::size_t s = 0; s < clouds; ++s)
                sat.push_back(draw_conditional(r1, k1, cb.u_words[b][c]));
            Rng r2(derive_seed(cfg.seed, "sec/bm/x2", {b, c}));
            auto& xs = cb.x2_words_b[b][c];
            xs.reserve(x2s);
            for (std::size_t s = 0; s < x2s; ++s)
                xs.push_back(draw_conditional(r2, k2, cb.u_words[b][c]));
        }
    }
    return cb;
}

namespace {

// ---- single-shot path ------------------------------------------------------

SecrecyReport simulate_single_shot(const SecrecyCodeConfig& cfg, const WiretapMac& wmac) {
    SecrecyCodebook cb = build_secrecy_codebook(cfg);
    MacChannel ych = wmac.y_channel();
    MacChannel zch = wmac.z_channel();

    const std::size_t t1 = cb.m1_count * cb.m1p_count;
    const std::size_t t2 = cb.m2_count * cb.m2p_count;
    const std::size_t tuples = t1 * t2;
    const std::uint64_t y_states = pow_guarded(wmac.y_size(), cfg.n);
    const std::uint64_t z_states = pow_guarded(wmac.z_size(), cfg.n);
    if (y_states > ENUMERATION_GUARD || z_states > ENUMERATION_GUARD ||
        tuples > ENUMERATION_GUARD / std::max(y_states, z_states))
        throw GuardExceeded("simulate_secrecy: exact enumeration above guard");

    JointTable p_x1x2y = full_joint(wmac, cfg.law).marginal({"X1", "X2", "Y"});
    TypicalityParams tp(cfg.typ_epsilon, cfg.n);

    auto word_of = [&](std::size_t tuple) {
        const std::size_t i1 = tuple / t2;
        const std::size_t i2 = tuple % t2;
        return std::pair<const Word&, const Word&>(cb.x1_words[i1],
                                                   cb.x2_books[cb.book_of_x1[i1]][i2]);
    };

    // decode table: for every y^n the unique typical tuple, if any
    std::vector<long> decoded(static_cast<std::size_t>(y_states), -1);  // -2 = ambiguous
    {
        Word yseq(cfg.n, 0);
        for (std::size_t y = 0; y < y_states; ++y) {
            std::size_t rest = y;
            for (std::size_t i = cfg.n; i-- > 0;) {
                yseq[i] = static_cast<Symbol>(rest % wmac.y_size());
                rest /= wmac.y_size();
            }
            long found = -1;
            for (std::size_t t = 0; t < tuples; ++t) {
                auto [w1, w2] = word_of(t);
                std::vector<std::span<const Symbol>> triple{w1, w2, yseq};
                if (is_strongly_typical(triple, p_x1x2y, tp)) {
                    found = found == -1 ? static_cast<long>(t) : -2;
                    if (found == -2) break;
                }
            }
            decoded[y] = found;
        }
    }

    SecrecyReport rep;
    rep.scenario = cfg.scenario;
    rep.n = cfg.n;

    KahanSum pe;
    for (std::size_t t = 0; t < tuples; ++t) {
        auto [w1, w2] = word_of(t);
        std::vector<double> py = word_pair_output(ych, w1, w2);
        KahanSum wrong;
        for (std::size_t y = 0; y < y_states; ++y)
            if (decoded[y] != static_cast<long>(t)) wrong.add(py[y]);
        pe.add(wrong.value());
    }
    rep.p_error = pe.value() / static_cast<double>(tuples);

    // exact leakage over secret messages, dithers marginalized
    const std::size_t secrets = cb.m1_count * cb.m2_count;
    std::vector<std::vector<double>> cond(secrets,
                                          std::vector<double>(static_cast<std::size_t>(z_states),
                                                              0.0));
    for (std::size_t t = 0; t < tuples; ++t) {
        const std::size_t i1 = t / t2, i2 = t % t2;
        const std::size_t m1 = i1 / cb.m1p_count;
        const std::size_t m2 = i2 / cb.m2p_count;
        auto [w1, w2] = word_of(t);
        std::vector<double> pz = word_pair_output(zch, w1, w2);
        auto& c = cond[m1 * cb.m2_count + m2];
        for (std::size_t z = 0; z < pz.size(); ++z) c[z] += pz[z];
    }
    const double dither_norm = static_cast<double>(cb.m1p_count * cb.m2p_count);
    for (auto& c : cond)
        for (double& x : c) x /= dither_norm;

    std::vector<double> mix(static_cast<std::size_t>(z_states), 0.0);
    for (const auto& c : cond)
        for (std::size_t z = 0; z < mix.size(); ++z) mix[z] += c[z];
    for (double& x : mix) x /= static_cast<double>(secrets);

    ProbVector q = induced_output(zch, cfg.law);
    std::vector<double> qn = tensor_power(q, cfg.n);

    KahanSum leak, bound;
    for (const auto& c : cond) {
        leak.add(kl_raw(c, mix, "leakage"));
        bound.add(kl_raw(c, qn, "resolvability bound"));
    }
    rep.leakage_bits = leak.value() / static_cast<double>(secrets);
    rep.resolvability_bound_bits = bound.value() / static_cast<double>(secrets);
    rep.message_entropy_bits = std::log2(static_cast<double>(secrets));
    if (rep.leakage_bits > rep.resolvability_bound_bits + 1e-9)
        throw Error("simulate_secrecy: leakage exceeded its resolvability bound");
    return rep;
}

// ---- strictly-causal block path --------------------------------------------

SecrecyReport simulate_strictly_causal(const SecrecyCodeConfig& cfg, const WiretapMac& wmac) {
    SecrecyCodebook cb = build_secrecy_codebook(cfg);
    MacChannel ych = wmac.y_channel();
    MacChannel zch = wmac.z_channel();
    const std::size_t clouds = cb.cloud_count();
    const std::size_t x2s = cb.x2_count();
    const std::size_t B = cfg.B;

    const std::uint64_t yr = pow_guarded(wmac.y_size(), cfg.r);
    const std::uint64_t zr = pow_guarded(wmac.z_size(), cfg.r);
    std::uint64_t y_states = 1, z_states = 1, scenarios = clouds;
    for (std::size_t b = 0; b < B; ++b) {
        y_states *= yr;
        z_states *= zr;
        scenarios *= static_cast<std::uint64_t>(clouds) * x2s;
        if (y_states > ENUMERATION_GUARD || z_states > ENUMERATION_GUARD ||
            scenarios > ENUMERATION_GUARD)
            throw GuardExceeded("simulate_secrecy: strictly-causal enumeration above guard");
    }
    const std::size_t payload_blocks = B - 1;
    std::size_t secret_states = 1;
    for (std::size_t b = 0; b < payload_blocks; ++b) secret_states *= cb.c1 * cb.c2;
    if (secret_states > ENUMERATION_GUARD / z_states)
        throw GuardExceeded("simulate_secrecy: secret-message table above guard");

    JointTable p_ux1x2y = full_joint(wmac, cfg.law).marginal({"U", "X1", "X2", "Y"});
    JointTable p_ux1 = cfg.law.expanded().marginal({"U", "X1"});
    TypicalityParams tp(cfg.typ_epsilon, cfg.r);

    // typicality of (u(c), x1(c, s), x2(c, x), y^r) per block and index combo
    auto typical = [&](std::size_t b, std::size_t c, std::size_t s, std::size_t x,
                       const Word& yw) {
        std::vector<std::span<const Symbol>> quad{cb.u_words[b][c], cb.x1_words_b[b][c][s],
                                                  cb.x2_words_b[b][c][x], yw};
        return is_strongly_typical(quad, p_ux1x2y, tp);
    };

    // scenario = (cloud_1, sat_1..B, x2_1..B); clouds chain as cloud_{b+1} = sat_b
    std::vector<std::size_t> sat(B), x2t(B);
    std::vector<double> secret_table(secret_states * z_states, 0.0);
    KahanSum pe_sum, crib_err_sum;
    std::vector<std::vector<double>> py(B), pz(B);
    Word yw(cfg.r, 0);

    const double w_scenario = 1.0 / static_cast<double>(scenarios);
    std::vector<std::size_t> cloud(B, 0);

    std::function<void(std::size_t)> loop_blocks = [&](std::size_t b) {
        if (b == B) {
            for (std::size_t bb = 0; bb < B; ++bb) {
                const Word& w1 = cb.x1_words_b[bb][cloud[bb]][sat[bb]];
                const Word& w2 = cb.x2_words_b[bb][cloud[bb]][x2t[bb]];
                py[bb] = word_pair_output(ych, w1, w2);
                pz[bb] = word_pair_output(zch, w1, w2);
            }

            // leakage side: secret payload = (m1, m2) of blocks 1..B-1
            std::size_t secret_flat = 0;
            for (std::size_t bb = 0; bb < payload_blocks; ++bb) {
                std::size_t m1 = sat[bb] / (cb.c1p * cb.c1pp);
                std::size_t m2 = x2t[bb] / cb.c2p;
                secret_flat = (secret_flat * cb.c1 + m1) * cb.c2 + m2;
            }
            std::vector<double> zacc{w_scenario}, nxt;
            for (std::size_t bb = 0; bb < B; ++bb) {
                nxt.assign(zacc.size() * zr, 0.0);
                for (std::size_t a = 0; a < zacc.size(); ++a)
                    for (std::size_t z = 0; z < zr; ++z) nxt[a * zr + z] = zacc[a] * pz[bb][z];
                zacc.swap(nxt);
            }
            double* cell = secret_table.data() + secret_flat * z_states;
            for (std::size_t z = 0; z < z_states; ++z) cell[z] += zacc[z];

            // cribbing decode of the satellite tuple after blocks 1..B-1
            bool crib_fail = false;
            for (std::size_t bb = 0; bb + 1 < B; ++bb) {
                const Word& obs = cb.x1_words_b[bb][cloud[bb]][sat[bb]];
                std::vector<std::span<const Symbol>> pair{cb.u_words[bb][cloud[bb]], obs};
                std::size_t hits = 0;
                bool correct = false;
                if (is_strongly_typical(pair, p_ux1, tp)) {
                    for (std::size_t s = 0; s < clouds && hits < 2; ++s)
                        if (cb.x1_words_b[bb][cloud[bb]][s] == obs) {
                            ++hits;
                            if (s == sat[bb]) correct = true;
                        }
                }
                if (!(hits == 1 && correct)) {
                    crib_fail = true;
                    break;
                }
            }
            if (crib_fail) crib_err_sum.add(w_scenario);

            // error side: backward decoding over all y realizations
            std::vector<std::size_t> ydigit(B, 0);
            KahanSum pe_local;
            while (true) {
                double py_joint = w_scenario;
                for (std::size_t bb = 0; bb < B; ++bb) py_joint *= py[bb][ydigit[bb]];
                if (py_joint > 0.0) {
                    bool okall = true;
                    // block B: clouds searched, satellite and x2 tuple known
                    std::size_t known_sat = sat[B - 1], known_x2 = x2t[B - 1];
                    std::size_t est_cloud = 0, hits = 0;
                    {
                        std::size_t rest = ydigit[B - 1];
                        for (std::size_t i = cfg.r; i-- > 0;) {
                            yw[i] = static_cast<Symbol>(rest % wmac.y_size());
                            rest /= wmac.y_size();
                        }
                    }
                    for (std::size_t c = 0; c < clouds && hits < 2; ++c)
                        if (typical(B - 1, c, known_sat, known_x2, yw)) {
                            ++hits;
                            est_cloud = c;
                        }
                    okall = hits == 1 && est_cloud == cloud[B - 1];
                    // blocks B-1 .. 1: cloud and x2 tuple searched, satellite known
                    for (std::size_t bb = B - 1; bb-- > 0 && okall;) {
                        std::size_t rest = ydigit[bb];
                        for (std::size_t i = cfg.r; i-- > 0;) {
                            yw[i] = static_cast<Symbol>(rest % wmac.y_size());
                            rest /= wmac.y_size();
                        }
                        std::size_t sat_known = est_cloud;  // cloud_{bb+1} = sat_bb
                        std::size_t hc = 0, ec = 0, ex = 0;
                        if (bb == 0) {
                            // block-1 cloud is shared; search x2 only
                            for (std::size_t x = 0; x < x2s && hc < 2; ++x)
                                if (typical(0, cloud[0], sat_known, x, yw)) {
                                    ++hc;
                                    ec = cloud[0];
                                    ex = x;
                                }
                        } else {
                            for (std::size_t c = 0; c < clouds && hc < 2; ++c)
                                for (std::size_t x = 0; x < x2s && hc < 2; ++x)
                                    if (typical(bb, c, sat_known, x, yw)) {
                                        ++hc;
                                        ec = c;
                                        ex = x;
                                    }
                        }
                        okall = hc == 1 && ec == cloud[bb] && ex == x2t[bb];
                        est_cloud = ec;
                    }
                    if (!okall) pe_local.add(py_joint);
                }
                std::size_t pos = B;
                while (pos-- > 0) {
                    if (++ydigit[pos] < yr) break;
                    ydigit[pos] = 0;
                    if (pos == 0) {
                        pos = SIZE_MAX;
                        break;
                    }
                }
                if (pos == SIZE_MAX) break;
            }
            pe_sum.add(pe_local.value());
            return;
        }
        for (std::size_t s = 0; s < clouds; ++s) {
            sat[b] = s;
            if (b + 1 < B) cloud[b + 1] = s;
            for (std::size_t x = 0; x < x2s; ++x) {
                x2t[b] = x;
                loop_blocks(b + 1);
            }
        }
    };

    for (std::size_t c0 = 0; c0 < clouds; ++c0) {
        cloud[0] = c0;
        loop_blocks(0);
    }

    SecrecyReport rep;
    rep.scenario = cfg.scenario;
    rep.n = cfg.r * B;
    rep.p_error = pe_sum.value();
    rep.coupling_gap_bound = 2.0 * crib_err_sum.value();

    // leakage of the payload against the chained wiretap output
    double table_sum = 0.0;
    for (double x : secret_table) table_sum += x;
    for (double& x : secret_table) x /= table_sum;

    std::vector<double> mix(z_states, 0.0);
    for (std::size_t m = 0; m < secret_states; ++m)
        for (std::size_t z = 0; z < z_states; ++z) mix[z] += secret_table[m * z_states + z];

    ProbVector q = induced_output(zch, cfg.law);
    std::vector<double> qn = tensor_power(q, cfg.r * B);
    KahanSum leak, bound;
    const double msg_w = 1.0 / static_cast<double>(secret_states);
    for (std::size_t m = 0; m < secret_states; ++m) {
        std::vector<double> c(secret_table.begin() + m * z_states,
                              secret_table.begin() + (m + 1) * z_states);
        for (double& x : c) x /= msg_w;  // conditional on the uniform payload
        leak.add(kl_raw(c, mix, "leakage"));
        bound.add(kl_raw(c, qn, "resolvability bound"));
    }
    rep.leakage_bits = leak.value() * msg_w;
    rep.resolvability_bound_bits = bound.value() * msg_w;
    rep.message_entropy_bits = std::log2(static_cast<double>(secret_states));
    if (rep.leakage_bits > rep.resolvability_bound_bits + 1e-9)
        throw Error("simulate_secrecy: leakage exceeded its resolvability bound");
    return rep;
}

}  // namespace

SecrecyReport simulate_secrecy(const SecrecyCodeConfig& cfg, const WiretapMac& wmac) {
    if (single_shot(cfg.scenario)) return simulate_single_shot(cfg, wmac);
    if (cfg.scenario == CribbingScenario::StrictlyCausal)
        return simulate_strictly_causal(cfg, wmac);
    throw Error("simulate_secrecy: no construction for " + to_string(cfg.scenario));
}

// ---- secrecy-rate witnesses --------------------------------------------------

namespace {

struct Ineq {
    std::vector<double> a;
    Sense sense;
    double b;
};

// Vertex enumeration on a tightened closed polytope, then the vertex
// centroid. Dimensions 2 and 3 only, which covers both dither systems.
std::optional<std::vector<double>> strict_interior(std::vector<Ineq> sys, std::size_t dim,
                                                   double tighten) {
    // normalize to a.x <= b and tighten strict boundaries
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (const auto& q : sys) {
        std::vector<double> row = q.a;
        double rhs = q.b;
        if (q.sense == Sense::AtLeast) {
            for (double& x : row) x = -x;
            rhs = -rhs;
        }
        A.push_back(row);
        b.push_back(rhs - tighten);
    }
    const std::size_t m = A.size();
    std::vector<std::vector<double>> vertices;
    std::vector<std::size_t> pick(dim);
    std::function<void(std::size_t, std::size_t)> combos = [&](std::size_t start,
                                                               std::size_t k) {
        if (k == dim) {
            // solve the dim x dim system by Gaussian elimination
            std::vector<std::vector<double>> M(dim, std::vector<double>(dim + 1));
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t jj = 0; jj < dim; ++jj) M[i][jj] = A[pick[i]][jj];
                M[i][dim] = b[pick[i]];
            }
            for (std::size_t col = 0; col < dim; ++col) {
                std::size_t piv = col;
                for (std::size_t rr = col + 1; rr < dim; ++rr)
                    if (std::abs(M[rr][col]) > std::abs(M[piv][col])) piv = rr;
                if (std::abs(M[piv][col]) < 1e-12) return;
                std::swap(M[col], M[piv]);
                for (std::size_t rr = 0; rr < dim; ++rr) {
                    if (rr == col) continue;
                    double f = M[rr][col] / M[col][col];
                    for (std::size_t cc = col; cc <= dim; ++cc) M[rr][cc] -= f * M[col][cc];
                }
            }
            std::vector<double> x(dim);
            for (std::size_t i = 0; i < dim; ++i) x[i] = M[i][dim] / M[i][i];
            for (std::size_t i = 0; i < m; ++i) {
                double lhs = 0.0;
                for (std::size_t jj = 0; jj < dim; ++jj) lhs += A[i][jj] * x[jj];
                if (lhs > b[i] + 1e-9) return;
            }
            vertices.push_back(std::move(x));
            return;
        }
        for (std::size_t i = start; i < m; ++i) {
            pick[k] = i;
            combos(i + 1, k + 1);
        }
    };
    combos(0, 0);
    if (vertices.empty()) return std::nullopt;

    std::vector<double> centroid(dim, 0.0);
    for (const auto& v : vertices)
        for (std::size_t i = 0; i < dim; ++i) centroid[i] += v[i];
    for (double& x : centroid) x /= static_cast<double>(vertices.size());

    // verify strictly against the untightened system
    for (const auto& q : sys) {
        double lhs = 0.0;
        for (std::size_t i = 0; i < dim; ++i) lhs += q.a[i] * centroid[i];
        if (q.sense == Sense::AtMost ? lhs >= q.b : lhs <= q.b) return std::nullopt;
    }
    return centroid;
}

}  // namespace

std::optional<WitnessRates> secrecy_witness(const WiretapMac& wmac, const InputLaw& law,
                                                CribbingScenario scenario, RatePoint pt) {
    if (pt.r1 < 0 || pt.r2 < 0) throw Error("secrecy_witness: rates must be nonnegative");
    JointTable j = full_joint(wmac, law);

    std::vector<Ineq> sys;
    std::size_t dim;
    if (single_shot(scenario)) {
        dim = 2;
        double i_x2_y_given_x1 = mutual_information(j, {"X2"}, {"Y"}, {"X1"});
        double i_x1x2_y = mutual_information(j, {"X1", "X2"}, {"Y"});
        double i_x1_z = mutual_information(j, {"X1"}, {"Z"});
        double i_x1x2_z = mutual_information(j, {"X1", "X2"}, {"Z"});
        sys = {
            {{0, 1}, Sense::AtMost, i_x2_y_given_x1 - pt.r2},
            {{1, 1}, Sense::AtMost, i_x1x2_y - pt.r1 - pt.r2},
            {{1, 0}, Sense::AtLeast, i_x1_z},
            {{1, 1}, Sense::AtLeast, i_x1x2_z},
            {{1, 0}, Sense::AtLeast, 0.0},
            {{0, 1}, Sense::AtLeast, 0.0},
        };
        if (scenario != CribbingScenario::DegradedMessageSets) {
            double h_x1 = entropy(j, {"X1"});
            sys.push_back({{1, 0}, Sense::AtMost, h_x1 - pt.r1});
            sys.push_back({{0, 1}, Sense::AtLeast, i_x1x2_z - h_x1});
        }
    } else if (scenario == CribbingScenario::StrictlyCausal) {
        if (!law.has_aux())
            throw LawVariantError("secrecy_witness: strictly-causal needs an aux law");
        dim = 3;  // variables (rho1', rho1'', rho2)
        double h_x1_given_u = entropy(j, {"U", "X1"}) - entropy(j, {"U"});
        double i_u_z = mutual_information(j, {"U"}, {"Z"});
        double i_ux1_z = mutual_information(j, {"U", "X1"}, {"Z"});
        double i_ux2_z = mutual_information(j, {"U", "X2"}, {"Z"});
        double i_x1x2_z = mutual_information(j, {"X1", "X2"}, {"Z"});
        double i_x2_y_given_x1u = mutual_information(j, {"X2"}, {"Y"}, {"X1", "U"});
        double i_x1x2_y = mutual_information(j, {"X1", "X2"}, {"Y"});
        sys = {
            {{1, 1, 0}, Sense::AtMost, h_x1_given_u - pt.r1},
            {{0, 0, 1}, Sense::AtMost, i_x2_y_given_x1u - pt.r2},
            {{1, 1, 1}, Sense::AtMost, i_x1x2_y - pt.r1 - pt.r2},
            {{0, 1, 0}, Sense::AtLeast, i_u_z},
            {{1, 1, 0}, Sense::AtLeast, i_ux1_z},
            {{1, 1, 1}, Sense::AtLeast, i_x1x2_z},
            {{0, 1, 1}, Sense::AtLeast, i_ux2_z},
            {{1, 0, 0}, Sense::AtLeast, 0.0},
            {{0, 1, 0}, Sense::AtLeast, 0.0},
            {{0, 0, 1}, Sense::AtLeast, 0.0},
        };
    } else {
        throw Error("secrecy_witness: no pre-elimination system for " + to_string(scenario));
    }

    for (double tighten : {1e-3, 1e-6, 1e-9, 1e-12}) {
        auto sol = strict_interior(sys, dim, tighten);
        if (!sol) continue;
        WitnessRates w;
        if (dim == 2) {
            w.r1p = (*sol)[0];
            w.r2p = (*sol)[1];
        } else {
            w.block_structure = true;
            w.rho1p = (*sol)[0];
            w.rho1pp = (*sol)[1];
            w.rho2 = (*sol)[2];
        }
        return w;
    }
    return std::nullopt;
}

}  // namespace cribmac
