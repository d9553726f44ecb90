#include "cribmac/block_markov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>

#include "cribmac/resolvability.hpp"
#include "cribmac/rng.hpp"
#include "detail.hpp"

namespace cribmac {

namespace {

struct AuxTerms {
    double i_u_z, i_x1_z_given_u, h_x1_given_u, i_x2_z_given_ux1;
    double i_ux1_z, i_x1x2_z, i_ux2_z, i_ux1x2_z;
};

AuxTerms aux_terms(const JointTable& j) {
    AuxTerms t{};
    t.i_u_z = mutual_information(j, {"U"}, {"Z"});
    t.i_x1_z_given_u = mutual_information(j, {"X1"}, {"Z"}, {"U"});
    t.h_x1_given_u = entropy(j, {"U", "X1"}) - entropy(j, {"U"});
    t.i_x2_z_given_ux1 = mutual_information(j, {"X2"}, {"Z"}, {"U", "X1"});
    t.i_ux1_z = mutual_information(j, {"U", "X1"}, {"Z"});
    t.i_x1x2_z = mutual_information(j, {"X1", "X2"}, {"Z"});
    t.i_ux2_z = mutual_information(j, {"U", "X2"}, {"Z"});
    t.i_ux1x2_z = mutual_information(j, {"U", "X1", "X2"}, {"Z"});
    return t;
}

void require_strict(bool ok, const char* what) {
    if (!ok) throw Error(std::string("RhoAllocation: ") + what);
}

}  // namespace

void RhoAllocation::validate(const JointTable& joint_ux1x2z) const {
    require_strict(rho0 >= 0 && rho1 >= 0 && rho2 >= 0 && rho3 >= 0, "negative rate");
    require_strict(gamma >= 0.0 && gamma <= 1.0, "gamma outside [0,1]");
    require_strict(epsilon > 0.0, "epsilon must be positive");
    AuxTerms t = aux_terms(joint_ux1x2z);
    require_strict(rho1 + rho2 < t.h_x1_given_u, "decodability rho1+rho2 < H(X1|U) violated");
    require_strict(rho0 > t.i_u_z, "resolvability rho0 > I(U;Z) violated");
    require_strict(rho0 + rho1 > t.i_ux1_z, "resolvability rho0+rho1 > I(U,X1;Z) violated");
    require_strict(rho0 + rho1 + rho3 > t.i_x1x2_z,
                   "resolvability rho0+rho1+rho3 > I(X1,X2;Z) violated");
    require_strict(rho0 + rho3 > t.i_ux2_z, "resolvability rho0+rho3 > I(U,X2;Z) violated");
    require_strict(rho2 > rho0, "recycling rho2 > rho0 violated");
}

RhoAllocation default_allocation(const JointTable& joint_ux1x2z, double epsilon, double gamma) {
    if (!(epsilon > 0.0)) throw Error("default_allocation: epsilon must be positive");
    AuxTerms t = aux_terms(joint_ux1x2z);
    double margin = t.h_x1_given_u - t.i_ux1_z;
    if (margin <= 3 * epsilon + 1e-9) {
        std::ostringstream os;
        os << "default_allocation: needs H(X1|U) - I(U,X1;Z) > 3 eps, have margin " << margin;
        throw InfeasibleLaw(os.str());
    }

    RhoAllocation a;
    a.rho0 = t.i_u_z + epsilon;
    a.rho1 = t.i_x1_z_given_u + epsilon;
    a.rho2 = t.h_x1_given_u - t.i_x1_z_given_u - 2 * epsilon;
    a.rho3 = t.i_x2_z_given_ux1 + epsilon;
    a.gamma = gamma;
    a.epsilon = epsilon;

    // Numerical re-check of the compatibility chain, including
    // I(U,X1,X2;Z) = I(X1,X2;Z) which the sum inequality leans on.
    if (std::abs(t.i_ux1x2_z - t.i_x1x2_z) > 1e-9)
        throw Error("default_allocation: I(U,X1,X2;Z) != I(X1,X2;Z) beyond tolerance");
    double slack = epsilon - 1e-9;
    if (!(a.rho0 - t.i_u_z >= slack) || !(a.rho0 + a.rho1 - t.i_ux1_z >= slack) ||
        !(a.rho0 + a.rho1 + a.rho3 - t.i_x1x2_z >= slack) ||
        !(a.rho0 + a.rho3 - t.i_ux2_z >= slack))
        throw Error("default_allocation: an output-statistics inequality lost its margin");
    a.validate(joint_ux1x2z);
    return a;
}

RatePoint effective_rates(const RhoAllocation& a) {
    return {a.rho1 + (1.0 - a.gamma) * a.rho2 + a.gamma * a.rho0,
            a.rho3 - (1.0 - a.gamma) * (a.rho2 - a.rho0)};
}

namespace {

using detail::draw_conditional;
using detail::draw_word;
using detail::kl_raw;
using detail::normalized_table;
using detail::tensor_power;

std::size_t floor_log2(std::size_t v) {
    std::size_t w = 0;
    while ((std::size_t(1) << (w + 1)) <= v) ++w;
    return v ? w : 0;
}

std::size_t bits_of(std::size_t value, std::size_t offset, std::size_t width) {
    return (value >> offset) & ((std::size_t(1) << width) - 1);
}

}  // namespace

BlockCodebooks build_block_codebooks(const BlockConfig& cfg) {
    if (!cfg.law.has_aux())
        throw LawVariantError("block-Markov codebooks need an auxiliary-variable law");
    if (cfg.r == 0 || cfg.B == 0) throw Error("BlockConfig: r >= 1 and B >= 1 required");

    BlockCodebooks books;
    books.r = cfg.r;
    books.B = cfg.B;
    books.n0 = message_count(cfg.r, cfg.alloc.rho0);
    books.n1 = message_count(cfg.r, cfg.alloc.rho1);
    books.n2 = message_count(cfg.r, cfg.alloc.rho2);
    books.n3 = message_count(cfg.r, cfg.alloc.rho3);

    const std::uint64_t words_per_block =
        static_cast<std::uint64_t>(books.n0) * (books.n1 * books.n2 + books.n3 + 1);
    if (words_per_block * cfg.B * cfg.r > ENUMERATION_GUARD)
        throw GuardExceeded("build_block_codebooks: codebook storage above guard");

    const ProbVector& pu = cfg.law.p_u();
    const Kernel& k1 = cfg.law.p_x1_given_u();
    const Kernel& k2 = cfg.law.p_x2_given_u();

    books.u_words.resize(cfg.B);
    books.x1_words.resize(cfg.B);
    books.x2_words.resize(cfg.B);
    for (std::size_t b = 0; b < cfg.B; ++b) {
        books.u_words[b].reserve(books.n0);
        books.x1_words[b].resize(books.n0);
        books.x2_words[b].resize(books.n0);
        for (std::size_t i = 0; i < books.n0; ++i) {
            Rng ru(derive_seed(cfg.seed, "bm/u", {b, i}));
            books.u_words[b].push_back(draw_word(ru, pu, cfg.r));
            Rng r1(derive_seed(cfg.seed, "bm/x1", {b, i}));
            auto& x1s = books.x1_words[b][i];
            x1s.reserve(books.n1 * books.n2);
            for (std::size_t jk = 0; jk < books.n1 * books.n2; ++jk)
                x1s.push_back(draw_conditional(r1, k1, books.u_words[b][i]));
            Rng r2(derive_seed(cfg.seed, "bm/x2", {b, i}));
            auto& x2s = books.x2_words[b][i];
            x2s.reserve(books.n3);
            for (std::size_t l = 0; l < books.n3; ++l)
                x2s.push_back(draw_conditional(r2, k2, books.u_words[b][i]));
        }
    }
    return books;
}

RecyclePlan recycle_plan(const BlockConfig& cfg, const BlockCodebooks& books) {
    RecyclePlan p;
    const double r = static_cast<double>(cfg.r);
    const double to_m1p = cfg.alloc.gamma * (cfg.alloc.rho2 - cfg.alloc.rho0);
    const double to_m2 = (1.0 - cfg.alloc.gamma) * (cfg.alloc.rho2 - cfg.alloc.rho0);

    const std::size_t avail = floor_log2(books.n2);
    p.w0 = std::min({static_cast<std::size_t>(std::floor(r * cfg.alloc.rho0 + 1e-12)), avail,
                     floor_log2(books.n0)});
    p.w1 = std::min({static_cast<std::size_t>(std::floor(std::max(0.0, r * to_m1p) + 1e-12)),
                     avail - p.w0, floor_log2(books.n1)});
    p.w2 = std::min({static_cast<std::size_t>(std::floor(std::max(0.0, r * to_m2) + 1e-12)),
                     avail - p.w0 - p.w1, floor_log2(books.n3)});
    p.fresh1 = books.n1 >> p.w1;
    p.fresh2 = books.n3 >> p.w2;
    p.residue0 = r * cfg.alloc.rho0 - static_cast<double>(p.w0);
    p.residue1 = r * to_m1p - static_cast<double>(p.w1);
    p.residue2 = r * to_m2 - static_cast<double>(p.w2);
    return p;
}

namespace {

struct CribDecode {
    std::size_t k_hat = 0;
    bool unique_correct = false;
};

// Strong-typicality list decode of (j, k) from the observed x1-word under an
// assumed cloud. Unique-candidate rule; failure keeps the first candidate
// (or zero) and counts as a declared error.
CribDecode crib_list_decode(const BlockCodebooks& books, const JointTable& ux1, double eps,
                            std::size_t r, std::size_t b, std::size_t m0_hat, const Word& obs,
                            std::size_t true_m0, std::size_t true_j, std::size_t true_k) {
    CribDecode out;
    std::vector<std::pair<std::size_t, std::size_t>> list;
    TypicalityParams tp(eps, r);
    const Word& uw = books.u_words[b][m0_hat];
    std::vector<std::span<const Symbol>> pair{std::span<const Symbol>(uw),
                                              std::span<const Symbol>(obs)};
    if (is_strongly_typical(pair, ux1, tp)) {
        for (std::size_t j = 0; j < books.n1; ++j)
            for (std::size_t k = 0; k < books.n2; ++k)
                if (books.x1(b, m0_hat, j, k) == obs) list.emplace_back(j, k);
    }
    out.unique_correct = list.size() == 1 && m0_hat == true_m0 && list[0].first == true_j &&
                         list[0].second == true_k;
    out.k_hat = list.empty() ? 0 : list.front().second;
    return out;
}

struct ChainAccumulators {
    std::size_t B, n2, zr, z_states;
    std::vector<double> master;                    // (k_1..k_B, z-blocks)
    std::vector<double> est_z;                     // z-blocks under the decoded coupling
    std::vector<std::vector<double>> est_bm;       // per block: (k, k_hat, z_b)
    std::vector<double> p_error, mismatch;
};

struct BlockState {
    std::size_t m0, j, k, l;
    std::size_t m0_hat, l_hat, k_hat;
    std::vector<double> pz_ideal, pz_est;
};

class ChainEnumerator {
public:
    ChainEnumerator(const BlockConfig& cfg, const MacChannel& mac, const BlockCodebooks& books,
                    const RecyclePlan& plan, bool with_estimate)
        : cfg_(cfg), mac_(mac), books_(books), plan_(plan), with_estimate_(with_estimate) {
        zr_ = 1;
        for (std::size_t i = 0; i < cfg.r; ++i) zr_ *= mac.z_size();
        z_states_ = 1;
        for (std::size_t b = 0; b < cfg.B; ++b) z_states_ *= zr_;

        acc_.B = cfg.B;
        acc_.n2 = books.n2;
        acc_.zr = zr_;
        acc_.z_states = z_states_;
        std::size_t m_states = 1;
        for (std::size_t b = 0; b < cfg.B; ++b) m_states *= books.n2;
        acc_.master.assign(m_states * z_states_, 0.0);
        acc_.p_error.assign(cfg.B, 0.0);
        acc_.mismatch.assign(cfg.B, 0.0);
        if (with_estimate_) {
            acc_.est_z.assign(z_states_, 0.0);
            acc_.est_bm.assign(cfg.B, std::vector<double>(books.n2 * books.n2 * zr_, 0.0));
        }

        // typicality reference for the cribbing decoder
        ux1_ = std::make_unique<JointTable>(cfg.law.expanded().marginal({"U", "X1"}));
        states_.resize(cfg.B);
    }

    ChainAccumulators run() {
        recurse(0, 0, 0, 1.0);
        return std::move(acc_);
    }

private:
    std::vector<double> pair_output(const Word& w1, const Word& w2) const {
        std::vector<double> buf{1.0}, next;
        for (std::size_t i = 0; i < cfg_.r; ++i) {
            const ProbVector& row = mac_.row(static_cast<std::size_t>(w1[i]),
                                             static_cast<std::size_t>(w2[i]));
            next.assign(buf.size() * mac_.z_size(), 0.0);
            for (std::size_t k = 0; k < buf.size(); ++k)
                for (std::size_t z = 0; z < mac_.z_size(); ++z)
                    next[k * mac_.z_size() + z] = buf[k] * row[z];
            buf.swap(next);
        }
        return buf;
    }

    void decode(std::size_t b, const BlockState& st, std::size_t m0_hat, std::size_t& k_hat,
                bool& success) const {
        const Word& obs = books_.x1(b, st.m0, st.j, st.k);
        CribDecode d = crib_list_decode(books_, *ux1_, cfg_.decode_epsilon, cfg_.r, b, m0_hat,
                                        obs, st.m0, st.j, st.k);
        success = d.unique_correct;
        k_hat = d.k_hat;
    }

    void recurse(std::size_t b, std::size_t prev_k, std::size_t prev_khat, double weight) {
        if (b == cfg_.B) {
            flush(weight);
            return;
        }
        if (b == 0) {
            const double w =
                weight / static_cast<double>(books_.n0 * books_.n1 * books_.n2 * books_.n3);
            for (std::size_t m0 = 0; m0 < books_.n0; ++m0)
                for (std::size_t j = 0; j < books_.n1; ++j)
                    for (std::size_t k = 0; k < books_.n2; ++k)
                        for (std::size_t l = 0; l < books_.n3; ++l)
                            visit(b, {m0, j, k, l, m0, l, 0, {}, {}}, w);
        } else {
            const std::size_t combos = plan_.fresh1 * books_.n2 * plan_.fresh2;
            const double w = weight / static_cast<double>(combos);
            const std::size_t m0 = bits_of(prev_k, 0, plan_.w0);
            const std::size_t j_rec = bits_of(prev_k, plan_.w0, plan_.w1);
            const std::size_t l_rec = bits_of(prev_k, plan_.w0 + plan_.w1, plan_.w2);
            const std::size_t m0_hat = bits_of(prev_khat, 0, plan_.w0);
            const std::size_t l_rec_hat = bits_of(prev_khat, plan_.w0 + plan_.w1, plan_.w2);
            for (std::size_t f1 = 0; f1 < plan_.fresh1; ++f1) {
                const std::size_t j = j_rec | (f1 << plan_.w1);
                for (std::size_t k = 0; k < books_.n2; ++k)
                    for (std::size_t f2 = 0; f2 < plan_.fresh2; ++f2) {
                        const std::size_t l = l_rec | (f2 << plan_.w2);
                        const std::size_t l_hat = l_rec_hat | (f2 << plan_.w2);
                        visit(b, {m0, j, k, l, m0_hat, l_hat, 0, {}, {}}, w);
                    }
            }
        }
    }

    void visit(std::size_t b, BlockState st, double weight) {
        st.pz_ideal = pair_output(books_.x1(b, st.m0, st.j, st.k),
                                  books_.x2_words[b][st.m0][st.l]);
        bool success = true;
        if (with_estimate_) {
            st.pz_est = pair_output(books_.x1(b, st.m0, st.j, st.k),
                                    books_.x2_words[b][st.m0_hat][st.l_hat]);
            decode(b, st, st.m0_hat, st.k_hat, success);
            if (!success) acc_.p_error[b] += weight;
            if (st.k_hat != st.k) acc_.mismatch[b] += weight;
            const std::size_t cell = (st.k * books_.n2 + st.k_hat) * zr_;
            for (std::size_t z = 0; z < zr_; ++z) acc_.est_bm[b][cell + z] += weight * st.pz_est[z];
        } else {
            st.k_hat = st.k;
        }
        states_[b] = std::move(st);
        recurse(b + 1, states_[b].k, states_[b].k_hat, weight);
    }

    void flush(double weight) {
        std::size_t m_flat = 0;
        for (std::size_t b = 0; b < cfg_.B; ++b) m_flat = m_flat * books_.n2 + states_[b].k;

        // outer product of per-block laws across all B blocks
        std::vector<double> zi{weight}, ze, next;
        if (with_estimate_) ze.assign(1, weight);
        for (std::size_t b = 0; b < cfg_.B; ++b) {
            next.assign(zi.size() * zr_, 0.0);
            for (std::size_t a = 0; a < zi.size(); ++a)
                for (std::size_t z = 0; z < zr_; ++z)
                    next[a * zr_ + z] = zi[a] * states_[b].pz_ideal[z];
            zi.swap(next);
            if (with_estimate_) {
                next.assign(ze.size() * zr_, 0.0);
                for (std::size_t a = 0; a < ze.size(); ++a)
                    for (std::size_t z = 0; z < zr_; ++z)
                        next[a * zr_ + z] = ze[a] * states_[b].pz_est[z];
                ze.swap(next);
            }
        }
        double* master_cell = acc_.master.data() + m_flat * z_states_;
        for (std::size_t z = 0; z < z_states_; ++z) master_cell[z] += zi[z];
        if (with_estimate_)
            for (std::size_t z = 0; z < z_states_; ++z) acc_.est_z[z] += ze[z];
    }

    const BlockConfig& cfg_;
    const MacChannel& mac_;
    const BlockCodebooks& books_;
    const RecyclePlan& plan_;
    bool with_estimate_;
    std::size_t zr_ = 1, z_states_ = 1;
    std::unique_ptr<JointTable> ux1_;
    std::vector<BlockState> states_;
    ChainAccumulators acc_;
};

std::vector<std::string> block_axis_names(const char* stem, std::size_t B) {
    std::vector<std::string> names;
    for (std::size_t b = 1; b <= B; ++b) names.push_back(std::string(stem) + std::to_string(b));
    return names;
}

}  // namespace

ChainResult simulate_chain(const BlockConfig& cfg, const MacChannel& mac,
                           const std::optional<TargetOutput>& target) {
    if (!cfg.law.has_aux()) throw LawVariantError("simulate_chain: auxiliary-variable law needed");
    cfg.alloc.validate(full_joint(mac, cfg.law));

    BlockCodebooks books = build_block_codebooks(cfg);
    RecyclePlan plan = recycle_plan(cfg, books);

    std::uint64_t zr = 1;
    for (std::size_t i = 0; i < cfg.r; ++i) {
        zr *= mac.z_size();
        if (zr > ENUMERATION_GUARD) throw GuardExceeded("simulate_chain: |Z|^r above guard");
    }
    std::uint64_t z_states = 1, m_states = 1, scenarios = 1;
    for (std::size_t b = 0; b < cfg.B; ++b) {
        z_states *= zr;
        m_states *= books.n2;
        scenarios *= b == 0 ? static_cast<std::uint64_t>(books.n0) * books.n1 * books.n2 * books.n3
                            : static_cast<std::uint64_t>(plan.fresh1) * books.n2 * plan.fresh2;
        if (z_states > ENUMERATION_GUARD || m_states * z_states > ENUMERATION_GUARD ||
            scenarios > ENUMERATION_GUARD)
            throw GuardExceeded("simulate_chain: exact-analysis state space above guard");
    }

    ProbVector q = target ? target->q_z : induced_output(mac, cfg.law);
    if (q.size() != mac.z_size()) throw DimensionMismatch("simulate_chain: target alphabet");

    ChainEnumerator enumerator(cfg, mac, books, plan, cfg.estimate_coupling);
    ChainAccumulators acc = enumerator.run();

    std::vector<std::string> m_axes = block_axis_names("M1pp_b", cfg.B);
    std::vector<std::string> z_axes = block_axis_names("Z_b", cfg.B);
    std::vector<std::string> axes = m_axes;
    axes.insert(axes.end(), z_axes.begin(), z_axes.end());
    std::vector<std::size_t> shape(cfg.B, books.n2);
    shape.insert(shape.end(), cfg.B, static_cast<std::size_t>(zr));
    JointTable master = normalized_table(axes, shape, std::move(acc.master));

    std::vector<double> q_r = tensor_power(q, cfg.r);
    std::vector<double> q_rb = tensor_power(q, cfg.r * cfg.B);

    auto diagnostics_from = [&](const JointTable& z_joint,
                                const std::function<JointTable(std::size_t)>& zb_m_of,
                                ChainDiagnostics& d) {
        d.total_kl = kl_raw(z_joint.probs(), q_rb, "total D(P_{Z^n}||Q^{(x)n})");
        d.per_block_kl.resize(cfg.B);
        d.cross_mi.assign(cfg.B, 0.0);
        d.secrecy_kl.resize(cfg.B);
        d.markov_lhs.assign(cfg.B, 0.0);
        d.markov_rhs.assign(cfg.B, 0.0);
        for (std::size_t b = 0; b < cfg.B; ++b) {
            JointTable zb = z_joint.marginal({z_axes[b]});
            d.per_block_kl[b] = kl_raw(zb.probs(), q_r, "per-block D");
            if (b + 1 < cfg.B) {
                std::vector<std::string> later(z_axes.begin() + b + 1, z_axes.end());
                d.cross_mi[b] = mutual_information(z_joint, {z_axes[b]}, later);
            }
            d.markov_lhs[b] = d.cross_mi[b];

            JointTable bm = zb_m_of(b);  // axes (M[, Mhat], Z_b)
            std::vector<std::string> m_side(bm.axes().begin(), bm.axes().end() - 1);
            d.markov_rhs[b] = mutual_information(bm, {bm.axes().back()}, m_side);

            JointTable mz = bm.marginal({m_side[0], bm.axes().back()});
            JointTable m_only = bm.marginal({m_side[0]});
            KahanSum s;
            for (std::size_t m = 0; m < m_only.size(); ++m)
                for (std::size_t z = 0; z < q_r.size(); ++z) {
                    double pmz = mz.flat(m * q_r.size() + z);
                    if (pmz == 0.0) continue;
                    double ref = m_only.flat(m) * q_r[z];
                    if (ref == 0.0)
                        throw AbsoluteContinuityViolation("secrecy-style divergence: support leak");
                    s.add(pmz * std::log2(pmz / ref));
                }
            d.secrecy_kl[b] = std::max(0.0, s.value());
        }
        double rhs = 0.0;
        for (std::size_t b = 0; b < cfg.B; ++b) rhs += d.per_block_kl[b] + d.cross_mi[b];
        d.eq_decomposition_gap = std::abs(d.total_kl - rhs);
    };

    ChainResult result{std::move(master), {}, std::nullopt, plan, books.n0, books.n1,
                       books.n2, books.n3};

    JointTable ideal_z = result.ideal_joint.marginal(z_axes);
    diagnostics_from(ideal_z,
                     [&](std::size_t b) {
                         return result.ideal_joint.marginal({m_axes[b], z_axes[b]});
                     },
                     result.ideal);

    if (cfg.estimate_coupling) {
        ChainDiagnostics est;
        JointTable est_z = normalized_table(
            z_axes, std::vector<std::size_t>(cfg.B, static_cast<std::size_t>(zr)),
            std::move(acc.est_z));
        std::vector<JointTable> est_bm;
        for (std::size_t b = 0; b < cfg.B; ++b)
            est_bm.push_back(normalized_table(
                {m_axes[b], "Mhat_b" + std::to_string(b + 1), z_axes[b]},
                {books.n2, books.n2, static_cast<std::size_t>(zr)}, std::move(acc.est_bm[b])));
        diagnostics_from(est_z, [&](std::size_t b) { return est_bm[b]; }, est);
        est.p_error = acc.p_error;
        est.mismatch = acc.mismatch;
        est.v_gap.assign(cfg.B, 0.0);
        for (std::size_t b = 0; b < cfg.B; ++b) {
            JointTable ideal_bm = result.ideal_joint.marginal({m_axes[b], z_axes[b]});
            JointTable est_mz = est_bm[b].marginal({m_axes[b], z_axes[b]});
            KahanSum v;
            for (std::size_t i = 0; i < ideal_bm.size(); ++i)
                v.add(std::abs(ideal_bm.flat(i) - est_mz.flat(i)));
            est.v_gap[b] = v.value();
        }
        result.ideal.p_error = acc.p_error;
        result.ideal.mismatch = acc.mismatch;
        result.estimated = std::move(est);
    }
    return result;
}

double per_block_secrecy_kl(const BlockConfig& cfg, const MacChannel& mac,
                            const std::optional<TargetOutput>& target) {
    BlockConfig one = cfg;
    one.B = 1;
    one.estimate_coupling = false;
    return simulate_chain(one, mac, target).ideal.secrecy_kl.at(0);
}

ChainSampleEstimate simulate_chain_mc(const BlockConfig& cfg, const MacChannel& mac,
                                      const std::optional<TargetOutput>& target,
                                      std::size_t trajectories) {
    if (!cfg.law.has_aux())
        throw LawVariantError("simulate_chain_mc: auxiliary-variable law needed");
    if (trajectories == 0) throw Error("simulate_chain_mc: trajectories >= 1 required");
    cfg.alloc.validate(full_joint(mac, cfg.law));

    BlockCodebooks books = build_block_codebooks(cfg);
    RecyclePlan plan = recycle_plan(cfg, books);
    std::uint64_t zr = 1;
    for (std::size_t i = 0; i < cfg.r; ++i) {
        zr *= mac.z_size();
        if (zr > ENUMERATION_GUARD) throw GuardExceeded("simulate_chain_mc: |Z|^r above guard");
    }
    ProbVector q = target ? target->q_z : induced_output(mac, cfg.law);
    std::vector<double> q_r = tensor_power(q, cfg.r);
    JointTable ux1 = cfg.law.expanded().marginal({"U", "X1"});

    ChainSampleEstimate est;
    est.trajectories = trajectories;
    est.plan = plan;
    est.per_block_kl_plugin.assign(cfg.B, 0.0);
    est.p_error.assign(cfg.B, 0.0);
    est.mismatch.assign(cfg.B, 0.0);
    std::vector<std::vector<double>> phat(cfg.B,
                                          std::vector<double>(static_cast<std::size_t>(zr), 0.0));

    for (std::size_t t = 0; t < trajectories; ++t) {
        Rng rng(derive_seed(cfg.seed, "bm/traj", {t}));
        auto draw_index = [&](std::size_t n) {
            return std::min<std::size_t>(n - 1, static_cast<std::size_t>(
                                                    rng.next_double() * static_cast<double>(n)));
        };
        std::size_t prev_k = 0, prev_khat = 0;
        for (std::size_t b = 0; b < cfg.B; ++b) {
            std::size_t m0, j, k, l, m0_hat, l_hat;
            if (b == 0) {
                m0 = draw_index(books.n0);
                j = draw_index(books.n1);
                k = draw_index(books.n2);
                l = draw_index(books.n3);
                m0_hat = m0;
                l_hat = l;
            } else {
                m0 = bits_of(prev_k, 0, plan.w0);
                j = bits_of(prev_k, plan.w0, plan.w1) | (draw_index(plan.fresh1) << plan.w1);
                k = draw_index(books.n2);
                std::size_t f2 = draw_index(plan.fresh2);
                l = bits_of(prev_k, plan.w0 + plan.w1, plan.w2) | (f2 << plan.w2);
                m0_hat = bits_of(prev_khat, 0, plan.w0);
                l_hat = bits_of(prev_khat, plan.w0 + plan.w1, plan.w2) | (f2 << plan.w2);
            }
            // realized system: Encoder 2 works from its decoded cloud
            std::vector<double> pz = detail::word_pair_output(
                mac, books.x1(b, m0, j, k), books.x2_words[b][m0_hat][l_hat]);
            for (std::size_t z = 0; z < pz.size(); ++z) phat[b][z] += pz[z];

            CribDecode d = crib_list_decode(books, ux1, cfg.decode_epsilon, cfg.r, b, m0_hat,
                                            books.x1(b, m0, j, k), m0, j, k);
            if (!d.unique_correct) est.p_error[b] += 1.0;
            if (d.k_hat != k) est.mismatch[b] += 1.0;
            prev_k = k;
            prev_khat = d.k_hat;
        }
    }
    const double norm = static_cast<double>(trajectories);
    for (std::size_t b = 0; b < cfg.B; ++b) {
        for (double& x : phat[b]) x /= norm;
        est.per_block_kl_plugin[b] = kl_raw(phat[b], q_r, "plug-in per-block D");
        est.p_error[b] /= norm;
        est.mismatch[b] /= norm;
    }
    return est;
}

std::size_t StrategyDecomposition::strategy_image(std::size_t t, std::size_t x1) const {
    std::size_t div = 1;
    for (std::size_t i = x1 + 1; i < x1_size; ++i) div *= x2_size;
    return (t / div) % x2_size;
}

JointTable StrategyDecomposition::reconstruct() const {
    std::vector<double> out(x1_size * x2_size, 0.0);
    for (std::size_t t = 0; t < p_t.size(); ++t)
        for (std::size_t a = 0; a < x1_size; ++a)
            out[a * x2_size + strategy_image(t, a)] += p_x1[a] * p_t[t];
    return JointTable({"X1", "X2"}, {x1_size, x2_size}, std::move(out));
}

StrategyDecomposition shannon_strategy_decompose(const JointTable& pstar) {
    if (pstar.rank() != 2) throw AxisError("shannon_strategy_decompose: rank-2 table expected");
    const std::size_t n1 = pstar.shape()[0], n2 = pstar.shape()[1];

    std::vector<double> marg(n1, 0.0);
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) marg[a] += pstar.flat(a * n2 + b);
    for (std::size_t a = 0; a < n1; ++a)
        if (marg[a] == 0.0)
            throw ZeroMarginal("shannon_strategy_decompose: P*(x1=" + std::to_string(a) +
                               ") = 0; restrict to the support first");

    std::size_t t_count = 1;
    for (std::size_t a = 0; a < n1; ++a) {
        t_count *= n2;
        if (t_count > (std::size_t(1) << 20))
            throw GuardExceeded("shannon_strategy_decompose: strategy alphabet above guard");
    }

    StrategyDecomposition dec{ProbVector(marg), ProbVector::uniform(1), n1, n2};
    std::vector<double> pt(t_count, 1.0);
    for (std::size_t t = 0; t < t_count; ++t) {
        std::size_t rest = t;
        for (std::size_t a = n1; a-- > 0;) {
            std::size_t img = rest % n2;
            rest /= n2;
            pt[t] *= pstar.flat(a * n2 + img) / marg[a];
        }
    }
    dec.p_t = ProbVector(std::move(pt));
    return dec;
}

StrategyRegionReport causal_region_via_strategy(const MacChannel& mac, const InputLaw& law) {
    const JointTable& pstar = law.joint_table();
    const std::size_t n1 = mac.x1_size(), n2 = mac.x2_size();

    JointTable j0 = full_joint(mac, law);
    double h_x1_given_z = entropy(j0, {"X1", "Z"}) - entropy(j0, {"Z"});

    // strategies over the support of X1 only; zero-mass rows carry no law
    std::vector<double> marg(n1, 0.0);
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) marg[a] += pstar.flat(a * n2 + b);
    std::vector<std::size_t> support;
    for (std::size_t a = 0; a < n1; ++a)
        if (marg[a] > 0.0) support.push_back(a);

    std::size_t t_count = 1;
    for (std::size_t s = 0; s < support.size(); ++s) t_count *= n2;

    std::vector<double> pt(t_count, 1.0);
    for (std::size_t t = 0; t < t_count; ++t) {
        std::size_t rest = t;
        for (std::size_t s = support.size(); s-- > 0;) {
            std::size_t a = support[s];
            std::size_t img = rest % n2;
            rest /= n2;
            pt[t] *= pstar.flat(a * n2 + img) / marg[a];
        }
    }

    // strategy channel W+(z | x1, t) = W(z | x1, t(x1))
    std::vector<ProbVector> rows;
    rows.reserve(n1 * t_count);
    for (std::size_t a = 0; a < n1; ++a) {
        std::size_t pos = std::find(support.begin(), support.end(), a) - support.begin();
        for (std::size_t t = 0; t < t_count; ++t) {
            std::size_t img = 0;
            if (pos < support.size()) {
                std::size_t div = 1;
                for (std::size_t s = pos + 1; s < support.size(); ++s) div *= n2;
                img = (t / div) % n2;
            }
            rows.push_back(mac.row(a, img));
        }
    }
    MacChannel strategy_mac(n1, t_count, mac.z_size(), Kernel(std::move(rows)));
    InputLaw strategy_law = InputLaw::with_aux(ProbVector::uniform(1),
                                               Kernel({ProbVector(marg)}),
                                               Kernel({ProbVector(std::move(pt))}));

    RegionSpec sc = resolvability_thresholds(strategy_mac, strategy_law,
                                             CribbingScenario::StrictlyCausal, BoundSide::Inner);

    StrategyRegionReport report;
    report.h_x1_given_z = h_x1_given_z;
    report.extremal_case = h_x1_given_z <= 1e-9;
    report.spec.constraints = {
        {1, 0, Sense::AtLeast, sc.constraints[0].bound, "R1 >= I(X1;Z)"},
        {0, 1, Sense::AtLeast, sc.constraints[1].bound, "R2 >= I(X1,X2;Z)-H(X1)"},
        {1, 1, Sense::AtLeast, sc.constraints[2].bound, "R1+R2 >= I(X1,X2;Z)"},
    };
    // the extremal H(X1|Z) = 0 scheme covers the infeasible branch, so the
    // causal region itself carries no feasibility restriction
    report.spec.feasible = true;
    report.spec.feasibility_margin = sc.feasibility_margin;
    return report;
}

}  // namespace cribmac
