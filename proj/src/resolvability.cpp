#include "cribmac/resolvability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "cribmac/rng.hpp"
#include "detail.hpp"

namespace cribmac {

std::size_t message_count(std::size_t n, double rate) {
    if (rate < 0.0) throw Error("message_count: negative rate");
    double v = std::exp2(static_cast<double>(n) * rate);
    if (v > 1e18) throw GuardExceeded("message_count: 2^(nR) out of range");
    auto c = static_cast<std::size_t>(std::ceil(v - 1e-9));
    return std::max<std::size_t>(1, c);
}

namespace {

using detail::draw_conditional;
using detail::draw_word;
using detail::law_factors;
using detail::LawFactors;

std::uint64_t word_hash(const Word& w) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Symbol s : w) h = fnv1a64(static_cast<std::uint64_t>(s), h);
    return h;
}

std::uint64_t pow_u64_guarded(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (v > cap / base) return cap + 1;
        v *= base;
    }
    return v;
}

}  // namespace

Codebook sample_codebook(const CodebookConfig& cfg) {
    if (cfg.n == 0) throw Error("sample_codebook: n >= 1 required");
    if (cfg.scenario == CribbingScenario::StrictlyCausal)
        throw LawVariantError("strictly-causal codebooks live in the block-Markov simulator");

    LawFactors f = law_factors(cfg.law);
    if (cfg.scenario == CribbingScenario::NonCooperating && !f.product)
        throw LawVariantError("non-cooperating codebooks need a product law");

    Codebook cb;
    cb.scenario = cfg.scenario;
    cb.n = cfg.n;
    cb.m1_count = message_count(cfg.n, cfg.r1);
    cb.m2_count = message_count(cfg.n, cfg.r2);
    if (cb.m1_count > ENUMERATION_GUARD / cb.m2_count)
        throw GuardExceeded("sample_codebook: message space above guard");
    cb.realized_r1 = std::log2(static_cast<double>(cb.m1_count)) / static_cast<double>(cfg.n);
    cb.realized_r2 = std::log2(static_cast<double>(cb.m2_count)) / static_cast<double>(cfg.n);

    cb.x1_words.reserve(cb.m1_count);
    for (std::size_t m1 = 0; m1 < cb.m1_count; ++m1) {
        Rng rng(derive_seed(cfg.seed, "cb/x1", {m1}));
        cb.x1_words.push_back(draw_word(rng, f.p_x1, cfg.n));
    }

    cb.book_of_m1.assign(cb.m1_count, 0);
    auto draw_book = [&](Rng& rng, const Word& given) {
        std::vector<Word> book;
        book.reserve(cb.m2_count);
        for (std::size_t m2 = 0; m2 < cb.m2_count; ++m2)
            book.push_back(draw_conditional(rng, f.x2_given_x1, given));
        return book;
    };

    switch (cfg.scenario) {
        case CribbingScenario::DegradedMessageSets: {
            for (std::size_t m1 = 0; m1 < cb.m1_count; ++m1) {
                Rng rng(derive_seed(cfg.seed, "cb/x2m", {m1}));
                cb.x2_books.push_back(draw_book(rng, cb.x1_words[m1]));
                cb.book_of_m1[m1] = cb.x2_books.size() - 1;
            }
            break;
        }
        case CribbingScenario::NonCausal:
        case CribbingScenario::Causal: {
            // keyed on the realized x1-word, so colliding words share a book
            std::map<Word, std::size_t> seen;
            for (std::size_t m1 = 0; m1 < cb.m1_count; ++m1) {
                const Word& w = cb.x1_words[m1];
                auto it = seen.find(w);
                if (it == seen.end()) {
                    Rng rng(derive_seed(cfg.seed, "cb/x2w", {word_hash(w)}));
                    cb.x2_books.push_back(draw_book(rng, w));
                    it = seen.emplace(w, cb.x2_books.size() - 1).first;
                }
                cb.book_of_m1[m1] = it->second;
            }
            break;
        }
        case CribbingScenario::NonCooperating: {
            Rng rng(derive_seed(cfg.seed, "cb/x2shared", {}));
            std::vector<Word> book;
            book.reserve(cb.m2_count);
            for (std::size_t m2 = 0; m2 < cb.m2_count; ++m2)
                book.push_back(draw_word(rng, f.x2_given_x1.row(0), cfg.n));
            cb.x2_books.push_back(std::move(book));
            break;
        }
        case CribbingScenario::StrictlyCausal: break;  // unreachable
    }
    return cb;
}

namespace {

std::size_t zn_states_or_throw(const Codebook& cb, const MacChannel& mac) {
    std::uint64_t states = pow_u64_guarded(mac.z_size(), cb.n, ENUMERATION_GUARD);
    if (states > ENUMERATION_GUARD)
        throw GuardExceeded("n-letter output enumeration above |Z|^n <= 2^26 guard");
    return static_cast<std::size_t>(states);
}

// Product law of a word pair over Z^n, built by repeated outer products.
void pair_output(const Codebook& cb, const MacChannel& mac, std::size_t m1, std::size_t m2,
                 std::vector<double>& buf, std::vector<double>& scratch) {
    const Word& w1 = cb.x1(m1);
    const Word& w2 = cb.x2(m1, m2);
    buf.assign(1, 1.0);
    for (std::size_t i = 0; i < cb.n; ++i) {
        const ProbVector& row = mac.row(static_cast<std::size_t>(w1[i]),
                                        static_cast<std::size_t>(w2[i]));
        scratch.assign(buf.size() * mac.z_size(), 0.0);
        for (std::size_t k = 0; k < buf.size(); ++k) {
            if (buf[k] == 0.0) continue;
            for (std::size_t z = 0; z < mac.z_size(); ++z)
                scratch[k * mac.z_size() + z] = buf[k] * row[z];
        }
        buf.swap(scratch);
    }
}

}  // namespace

ProbVector induced_n_letter_output(const Codebook& cb, const MacChannel& mac) {
    const std::size_t states = zn_states_or_throw(cb, mac);
    std::vector<double> acc(states, 0.0);
    std::vector<double> buf, scratch;
    for (std::size_t m1 = 0; m1 < cb.m1_count; ++m1)
        for (std::size_t m2 = 0; m2 < cb.m2_count; ++m2) {
            pair_output(cb, mac, m1, m2, buf, scratch);
            for (std::size_t s = 0; s < states; ++s) acc[s] += buf[s];
        }
    const double norm = static_cast<double>(cb.m1_count) * static_cast<double>(cb.m2_count);
    for (double& x : acc) x /= norm;
    return ProbVector(std::move(acc));
}

double resolvability_kl(const Codebook& cb, const MacChannel& mac, const TargetOutput& target) {
    if (target.q_z.size() != mac.z_size())
        throw DimensionMismatch("resolvability_kl: target alphabet mismatch");
    ProbVector p = induced_n_letter_output(cb, mac);

    std::vector<double> logq(mac.z_size());
    std::vector<bool> qzero(mac.z_size());
    for (std::size_t z = 0; z < mac.z_size(); ++z) {
        qzero[z] = target.q_z[z] == 0.0;
        logq[z] = qzero[z] ? 0.0 : std::log2(target.q_z[z]);
    }

    // odometer over Z^n with incremental log q^{(x)n} and zero-support count
    const std::size_t n = cb.n, zs = mac.z_size();
    std::vector<std::size_t> digits(n, 0);
    double logq_seq = static_cast<double>(n) * logq[0];
    std::size_t zeros = qzero[0] ? n : 0;

    KahanSum d;
    const std::size_t states = p.size();
    for (std::size_t flat = 0;; ++flat) {
        double ps = p[flat];
        if (ps > 0.0) {
            if (zeros > 0)
                throw AbsoluteContinuityViolation(
                    "resolvability_kl: codebook reaches a zero-mass target sequence");
            d.add(ps * (std::log2(ps) - logq_seq));
        }
        if (flat + 1 == states) break;
        for (std::size_t pos = n; pos-- > 0;) {
            std::size_t old = digits[pos];
            logq_seq -= logq[old];
            zeros -= qzero[old] ? 1 : 0;
            if (old + 1 < zs) {
                digits[pos] = old + 1;
                logq_seq += logq[old + 1];
                zeros += qzero[old + 1] ? 1 : 0;
                break;
            }
            digits[pos] = 0;
            logq_seq += logq[0];
            zeros += qzero[0] ? 1 : 0;
        }
    }
    return std::max(0.0, d.value());
}

SimReport mc_expected_kl(const CodebookConfig& cfg, const MacChannel& mac,
                         const TargetOutput& target, std::size_t trials) {
    if (trials == 0) throw Error("mc_expected_kl: trials >= 1 required");
    SimReport rep;
    rep.kl_per_trial.assign(trials, 0.0);

    std::mutex failure_mutex;
    std::exception_ptr failure;
    auto run_range = [&](std::size_t lo, std::size_t hi) {
        try {
            for (std::size_t t = lo; t < hi; ++t) {
                CodebookConfig trial_cfg = cfg;
                trial_cfg.seed = derive_seed(cfg.seed, "trial", {t});
                Codebook cb = sample_codebook(trial_cfg);
                rep.kl_per_trial[t] = resolvability_kl(cb, mac, target);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    // Trials are independent; per-trial seeds make the result schedule-free.
    std::size_t workers = std::min<std::size_t>(std::thread::hardware_concurrency(), trials);
    if (workers > 1) {
        std::vector<std::thread> pool;
        std::size_t chunk = (trials + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            std::size_t lo = w * chunk, hi = std::min(trials, lo + chunk);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    } else {
        run_range(0, trials);
    }
    if (failure) std::rethrow_exception(failure);

    KahanSum s;
    for (double x : rep.kl_per_trial) s.add(x);
    rep.mean = s.value() / static_cast<double>(trials);
    if (trials > 1) {
        KahanSum sq;
        for (double x : rep.kl_per_trial) sq.add((x - rep.mean) * (x - rep.mean));
        double var = sq.value() / static_cast<double>(trials - 1);
        rep.stderr_mean = std::sqrt(var / static_cast<double>(trials));
    }

    Codebook cb0 = sample_codebook(cfg);
    rep.n = cfg.n;
    rep.nominal_r1 = cfg.r1;
    rep.nominal_r2 = cfg.r2;
    rep.realized_r1 = cb0.realized_r1;
    rep.realized_r2 = cb0.realized_r2;
    rep.m1_count = cb0.m1_count;
    rep.m2_count = cb0.m2_count;
    rep.seed = cfg.seed;
    rep.scenario = cfg.scenario;
    return rep;
}

double exact_leakage(const Codebook& cb, const MacChannel& mac) {
    const std::size_t states = zn_states_or_throw(cb, mac);
    const std::uint64_t pairs =
        static_cast<std::uint64_t>(cb.m1_count) * static_cast<std::uint64_t>(cb.m2_count);
    if (pairs > ENUMERATION_GUARD / states)
        throw GuardExceeded("exact_leakage: messages x |Z|^n above guard");

    std::vector<double> mix(states, 0.0);
    std::vector<double> buf, scratch;
    for (std::size_t m1 = 0; m1 < cb.m1_count; ++m1)
        for (std::size_t m2 = 0; m2 < cb.m2_count; ++m2) {
            pair_output(cb, mac, m1, m2, buf, scratch);
            for (std::size_t s = 0; s < states; ++s) mix[s] += buf[s];
        }
    const double norm = static_cast<double>(pairs);
    for (double& x : mix) x /= norm;

    // I(M; Z^n) = E_M[ D(P_{Z^n|M} || P_{Z^n}) ], every term exact
    KahanSum leak;
    for (std::size_t m1 = 0; m1 < cb.m1_count; ++m1)
        for (std::size_t m2 = 0; m2 < cb.m2_count; ++m2) {
            pair_output(cb, mac, m1, m2, buf, scratch);
            KahanSum d;
            for (std::size_t s = 0; s < states; ++s)
                if (buf[s] > 0.0) d.add(buf[s] * std::log2(buf[s] / mix[s]));
            leak.add(std::max(0.0, d.value()));
        }
    return leak.value() / norm;
}

}  // namespace cribmac
