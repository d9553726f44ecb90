#include "cribmac/mac.hpp"

#include <algorithm>
#include <cmath>

namespace cribmac {

std::string to_string(CribbingScenario s) {
    switch (s) {
        case CribbingScenario::NonCooperating: return "non-cooperating";
        case CribbingScenario::DegradedMessageSets: return "degraded";
        case CribbingScenario::NonCausal: return "non-causal";
        case CribbingScenario::StrictlyCausal: return "strictly-causal";
        case CribbingScenario::Causal: return "causal";
    }
    return "?";
}

CribbingScenario scenario_from_string(std::string_view name) {
    if (name == "non-cooperating") return CribbingScenario::NonCooperating;
    if (name == "degraded") return CribbingScenario::DegradedMessageSets;
    if (name == "non-causal") return CribbingScenario::NonCausal;
    if (name == "strictly-causal") return CribbingScenario::StrictlyCausal;
    if (name == "causal") return CribbingScenario::Causal;
    throw Error("unknown scenario: " + std::string(name));
}

MacChannel::MacChannel(std::size_t x1_size, std::size_t x2_size, std::size_t z_size, Kernel w)
    : x1_size_(x1_size), x2_size_(x2_size), z_size_(z_size), w_(std::move(w)) {
    if (x1_size_ == 0 || x2_size_ == 0 || z_size_ == 0)
        throw DimensionMismatch("MacChannel: zero-size alphabet");
    if (w_.input_size() != x1_size_ * x2_size_)
        throw DimensionMismatch("MacChannel: kernel must have x1_size*x2_size rows");
    if (w_.output_size() != z_size_)
        throw DimensionMismatch("MacChannel: kernel rows must cover Z");
}

WiretapMac::WiretapMac(std::size_t x1_size, std::size_t x2_size, std::size_t y_size,
                       std::size_t z_size, Kernel wyz)
    : x1_size_(x1_size), x2_size_(x2_size), y_size_(y_size), z_size_(z_size),
      wyz_(std::move(wyz)) {
    if (x1_size_ == 0 || x2_size_ == 0 || y_size_ == 0 || z_size_ == 0)
        throw DimensionMismatch("WiretapMac: zero-size alphabet");
    if (wyz_.input_size() != x1_size_ * x2_size_)
        throw DimensionMismatch("WiretapMac: kernel must have x1_size*x2_size rows");
    if (wyz_.output_size() != y_size_ * z_size_)
        throw DimensionMismatch("WiretapMac: kernel rows must cover Y x Z");
}

MacChannel WiretapMac::z_channel() const {
    std::vector<ProbVector> rows;
    rows.reserve(wyz_.input_size());
    for (std::size_t r = 0; r < wyz_.input_size(); ++r) {
        std::vector<double> pz(z_size_, 0.0);
        const ProbVector& row = wyz_.row(r);
        for (std::size_t y = 0; y < y_size_; ++y)
            for (std::size_t z = 0; z < z_size_; ++z) pz[z] += row[y * z_size_ + z];
        rows.emplace_back(std::move(pz));
    }
    return MacChannel(x1_size_, x2_size_, z_size_, Kernel(std::move(rows)));
}

MacChannel WiretapMac::y_channel() const {
    std::vector<ProbVector> rows;
    rows.reserve(wyz_.input_size());
    for (std::size_t r = 0; r < wyz_.input_size(); ++r) {
        std::vector<double> py(y_size_, 0.0);
        const ProbVector& row = wyz_.row(r);
        for (std::size_t y = 0; y < y_size_; ++y)
            for (std::size_t z = 0; z < z_size_; ++z) py[y] += row[y * z_size_ + z];
        rows.emplace_back(std::move(py));
    }
    return MacChannel(x1_size_, x2_size_, y_size_, Kernel(std::move(rows)));
}

InputLaw InputLaw::joint(JointTable p_x1x2) {
    if (p_x1x2.rank() != 2 || p_x1x2.axes()[0] != "X1" || p_x1x2.axes()[1] != "X2")
        throw AxisError("InputLaw::joint: table axes must be {X1, X2}");
    return InputLaw(std::move(p_x1x2));
}

InputLaw InputLaw::with_aux(ProbVector p_u, Kernel p_x1_given_u, Kernel p_x2_given_u) {
    if (p_x1_given_u.input_size() != p_u.size() || p_x2_given_u.input_size() != p_u.size())
        throw DimensionMismatch("InputLaw::with_aux: kernels must have one row per u");
    Aux a{std::move(p_u), std::move(p_x1_given_u), std::move(p_x2_given_u)};
    return InputLaw(std::move(a));
}

std::size_t InputLaw::x1_size() const {
    return has_aux() ? std::get<Aux>(v_).x1_given_u.output_size()
                     : std::get<JointTable>(v_).shape()[0];
}

std::size_t InputLaw::x2_size() const {
    return has_aux() ? std::get<Aux>(v_).x2_given_u.output_size()
                     : std::get<JointTable>(v_).shape()[1];
}

const JointTable& InputLaw::joint_table() const {
    if (has_aux()) throw LawVariantError("joint_table: law has an auxiliary variable");
    return std::get<JointTable>(v_);
}

const ProbVector& InputLaw::p_u() const {
    if (!has_aux()) throw LawVariantError("p_u: law is a plain joint");
    return std::get<Aux>(v_).p_u;
}

const Kernel& InputLaw::p_x1_given_u() const {
    if (!has_aux()) throw LawVariantError("p_x1_given_u: law is a plain joint");
    return std::get<Aux>(v_).x1_given_u;
}

const Kernel& InputLaw::p_x2_given_u() const {
    if (!has_aux()) throw LawVariantError("p_x2_given_u: law is a plain joint");
    return std::get<Aux>(v_).x2_given_u;
}

JointTable InputLaw::expanded() const {
    if (!has_aux()) return std::get<JointTable>(v_);
    const Aux& a = std::get<Aux>(v_);
    const std::size_t nu = a.p_u.size();
    const std::size_t n1 = a.x1_given_u.output_size();
    const std::size_t n2 = a.x2_given_u.output_size();
    std::vector<double> t(nu * n1 * n2);
    std::size_t flat = 0;
    for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t x1 = 0; x1 < n1; ++x1)
            for (std::size_t x2 = 0; x2 < n2; ++x2)
                t[flat++] = a.p_u[u] * a.x1_given_u.row(u)[x1] * a.x2_given_u.row(u)[x2];
    return JointTable({"U", "X1", "X2"}, {nu, n1, n2}, std::move(t));
}

JointTable InputLaw::x1x2_marginal() const {
    if (!has_aux()) return std::get<JointTable>(v_);
    return expanded().marginal({"X1", "X2"});
}

namespace {

void check_sizes(const MacChannel& mac, const InputLaw& law) {
    if (law.x1_size() != mac.x1_size() || law.x2_size() != mac.x2_size())
        throw DimensionMismatch("law / channel alphabet mismatch");
}

}  // namespace

ProbVector induced_output(const MacChannel& mac, const InputLaw& law) {
    check_sizes(mac, law);
    JointTable p = law.x1x2_marginal();
    std::vector<double> q(mac.z_size(), 0.0);
    std::size_t flat = 0;
    for (std::size_t x1 = 0; x1 < mac.x1_size(); ++x1)
        for (std::size_t x2 = 0; x2 < mac.x2_size(); ++x2) {
            const double mass = p.flat(flat++);
            if (mass == 0.0) continue;
            const ProbVector& row = mac.row(x1, x2);
            for (std::size_t z = 0; z < mac.z_size(); ++z) q[z] += mass * row[z];
        }
    return ProbVector(std::move(q));
}

JointTable full_joint(const MacChannel& mac, const InputLaw& law) {
    check_sizes(mac, law);
    JointTable base = law.expanded();
    std::vector<std::string> axes = base.axes();
    axes.push_back("Z");
    std::vector<std::size_t> shape = base.shape();
    shape.push_back(mac.z_size());
    std::vector<double> t(base.size() * mac.z_size());

    const std::size_t x2n = mac.x2_size();
    std::size_t flat = 0;
    for (std::size_t cell = 0; cell < base.size(); ++cell) {
        // trailing two axes of the expansion are always (X1, X2)
        const std::size_t x1 = (cell / x2n) % mac.x1_size();
        const std::size_t x2 = cell % x2n;
        const ProbVector& row = mac.row(x1, x2);
        const double mass = base.flat(cell);
        for (std::size_t z = 0; z < mac.z_size(); ++z) t[flat++] = mass * row[z];
    }
    return JointTable(std::move(axes), std::move(shape), std::move(t));
}

JointTable full_joint(const WiretapMac& wmac, const InputLaw& law) {
    if (law.x1_size() != wmac.x1_size() || law.x2_size() != wmac.x2_size())
        throw DimensionMismatch("law / channel alphabet mismatch");
    JointTable base = law.expanded();
    std::vector<std::string> axes = base.axes();
    axes.push_back("Y");
    axes.push_back("Z");
    std::vector<std::size_t> shape = base.shape();
    shape.push_back(wmac.y_size());
    shape.push_back(wmac.z_size());
    std::vector<double> t(base.size() * wmac.y_size() * wmac.z_size());

    const std::size_t x2n = wmac.x2_size();
    const std::size_t yz = wmac.y_size() * wmac.z_size();
    std::size_t flat = 0;
    for (std::size_t cell = 0; cell < base.size(); ++cell) {
        const std::size_t x1 = (cell / x2n) % wmac.x1_size();
        const std::size_t x2 = cell % x2n;
        const ProbVector& row = wmac.row(x1, x2);
        const double mass = base.flat(cell);
        for (std::size_t k = 0; k < yz; ++k) t[flat++] = mass * row[k];
    }
    return JointTable(std::move(axes), std::move(shape), std::move(t));
}

bool matches_target(const MacChannel& mac, const InputLaw& law, const TargetOutput& target,
                    double tol) {
    if (target.q_z.size() != mac.z_size())
        throw DimensionMismatch("matches_target: target alphabet mismatch");
    ProbVector q = induced_output(mac, law);
    double dev = 0.0;
    for (std::size_t z = 0; z < q.size(); ++z) dev = std::max(dev, std::abs(q[z] - target.q_z[z]));
    return dev <= tol;
}

}  // namespace cribmac
