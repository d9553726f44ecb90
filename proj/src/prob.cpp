#include "cribmac/prob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace cribmac {

namespace {

double checked_sum(const std::vector<double>& v) {
    KahanSum s;
    for (double x : v) s.add(x);
    return s.value();
}

void validate_mass(const std::vector<double>& v, const char* what) {
    if (v.empty()) throw DimensionMismatch(std::string(what) + ": empty alphabet");
    for (double x : v) {
        if (!(x >= 0.0) || !std::isfinite(x))
            throw Error(std::string(what) + ": negative or non-finite entry");
    }
    double s = checked_sum(v);
    if (std::abs(s - 1.0) > PROB_TOL) {
        std::ostringstream os;
        os << what << ": mass sums to " << s << ", outside 1 +/- " << PROB_TOL;
        throw Error(os.str());
    }
}

}  // namespace

ProbVector::ProbVector(std::vector<double> probs) : p_(std::move(probs)) {
    validate_mass(p_, "ProbVector");
}

ProbVector ProbVector::uniform(std::size_t n) {
    return ProbVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbVector ProbVector::point_mass(std::size_t index, std::size_t n) {
    std::vector<double> v(n, 0.0);
    v.at(index) = 1.0;
    return ProbVector(std::move(v));
}

double ProbVector::min_positive() const {
    double m = std::numeric_limits<double>::infinity();
    for (double x : p_)
        if (x > 0.0) m = std::min(m, x);
    return m;
}

Kernel::Kernel(std::vector<ProbVector> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw DimensionMismatch("Kernel: no rows");
    out_size_ = rows_.front().size();
    for (const auto& r : rows_)
        if (r.size() != out_size_) throw DimensionMismatch("Kernel: ragged rows");
}

JointTable::JointTable(std::vector<std::string> axes, std::vector<std::size_t> shape,
                       std::vector<double> probs)
    : axes_(std::move(axes)), shape_(std::move(shape)), t_(std::move(probs)) {
    if (axes_.size() != shape_.size()) throw AxisError("JointTable: axes/shape size mismatch");
    std::size_t total = 1;
    for (std::size_t s : shape_) {
        if (s == 0) throw DimensionMismatch("JointTable: zero-size axis");
        total *= s;
    }
    if (total != t_.size()) throw DimensionMismatch("JointTable: data size does not match shape");
    for (std::size_t i = 0; i < axes_.size(); ++i)
        for (std::size_t j = i + 1; j < axes_.size(); ++j)
            if (axes_[i] == axes_[j]) throw AxisError("JointTable: duplicate axis " + axes_[i]);
    validate_mass(t_, "JointTable");
}

double JointTable::at(std::span<const std::size_t> idx) const {
    if (idx.size() != shape_.size()) throw AxisError("JointTable::at: wrong index rank");
    std::size_t flat = 0;
    for (std::size_t d = 0; d < shape_.size(); ++d) {
        if (idx[d] >= shape_[d]) throw AxisError("JointTable::at: index out of range");
        flat = flat * shape_[d] + idx[d];
    }
    return t_[flat];
}

std::size_t JointTable::axis_index(std::string_view name) const {
    for (std::size_t i = 0; i < axes_.size(); ++i)
        if (axes_[i] == name) return i;
    throw AxisError("unknown axis: " + std::string(name));
}

bool JointTable::has_axis(std::string_view name) const {
    return std::any_of(axes_.begin(), axes_.end(),
                       [&](const std::string& a) { return a == name; });
}

JointTable JointTable::marginal(const std::vector<std::string>& keep) const {
    std::vector<std::size_t> keep_dims;
    keep_dims.reserve(keep.size());
    for (const auto& name : keep) keep_dims.push_back(axis_index(name));
    std::sort(keep_dims.begin(), keep_dims.end());
    if (std::adjacent_find(keep_dims.begin(), keep_dims.end()) != keep_dims.end())
        throw AxisError("marginal: duplicate axis");

    std::vector<std::string> out_axes;
    std::vector<std::size_t> out_shape;
    for (std::size_t d : keep_dims) {
        out_axes.push_back(axes_[d]);
        out_shape.push_back(shape_[d]);
    }
    std::size_t out_total = 1;
    for (std::size_t s : out_shape) out_total *= s;
    std::vector<double> out(out_total, 0.0);

    const std::size_t rank = shape_.size();
    std::vector<std::size_t> idx(rank, 0);
    for (std::size_t flat = 0; flat < t_.size(); ++flat) {
        std::size_t out_flat = 0;
        for (std::size_t d : keep_dims) out_flat = out_flat * shape_[d] + idx[d];
        out[out_flat] += t_[flat];
        for (std::size_t d = rank; d-- > 0;) {
            if (++idx[d] < shape_[d]) break;
            idx[d] = 0;
        }
    }
    return JointTable(std::move(out_axes), std::move(out_shape), std::move(out));
}

ProbVector JointTable::to_prob_vector() const { return ProbVector(t_); }

TypicalityParams::TypicalityParams(double eps, std::size_t len) : epsilon(eps), n(len) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error("TypicalityParams: epsilon must be in (0,1)");
    if (len == 0) throw Error("TypicalityParams: n must be >= 1");
}

namespace {

double entropy_of_mass(const std::vector<double>& v) {
    KahanSum h;
    for (double x : v)
        if (x > 0.0) h.add(-x * std::log2(x));
    return std::max(0.0, h.value());
}

}  // namespace

double entropy(const ProbVector& p) { return entropy_of_mass(p.probs()); }

double entropy(const JointTable& joint, const std::vector<std::string>& axes) {
    if (axes.empty()) return entropy_of_mass(joint.probs());
    return entropy_of_mass(joint.marginal(axes).probs());
}

double kl_divergence(const ProbVector& p, const ProbVector& q) {
    if (p.size() != q.size()) throw DimensionMismatch("kl_divergence: alphabet mismatch");
    KahanSum d;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0)
            throw AbsoluteContinuityViolation("kl_divergence: p(" + std::to_string(i) +
                                              ") > 0 but q = 0");
        d.add(p[i] * std::log2(p[i] / q[i]));
    }
    return std::max(0.0, d.value());
}

double variational_distance(const ProbVector& p, const ProbVector& q) {
    if (p.size() != q.size()) throw DimensionMismatch("variational_distance: alphabet mismatch");
    KahanSum v;
    for (std::size_t i = 0; i < p.size(); ++i) v.add(std::abs(p[i] - q[i]));
    return v.value();
}

double mutual_information(const JointTable& joint, const std::vector<std::string>& axes_a,
                          const std::vector<std::string>& axes_b,
                          const std::vector<std::string>& axes_cond) {
    if (axes_a.empty() || axes_b.empty()) throw AxisError("mutual_information: empty axis set");
    std::vector<std::string> all;
    auto add_all = [&](const std::vector<std::string>& v) {
        for (const auto& name : v) {
            joint.axis_index(name);  // existence check
            if (std::find(all.begin(), all.end(), name) != all.end())
                throw AxisError("mutual_information: overlapping axis " + name);
            all.push_back(name);
        }
    };
    add_all(axes_a);
    add_all(axes_b);
    add_all(axes_cond);

    // I(A;B|C) = H(A,C) + H(B,C) - H(C) - H(A,B,C), assembled from exact
    // marginals of one H(A,B,C)-sized table.
    JointTable abc = joint.marginal(all);
    auto concat = [](std::vector<std::string> x, const std::vector<std::string>& y) {
        x.insert(x.end(), y.begin(), y.end());
        return x;
    };
    double h_abc = entropy(abc);
    double h_ac = entropy(abc, concat(axes_a, axes_cond));
    double h_bc = entropy(abc, concat(axes_b, axes_cond));
    double h_c = axes_cond.empty() ? 0.0 : entropy(abc, axes_cond);
    double mi = h_ac + h_bc - h_c - h_abc;
    if (mi < 0.0) {
        if (mi < -1e-12) throw Error("mutual_information: negative beyond tolerance");
        mi = 0.0;
    }
    return mi;
}

std::pair<double, double> pinsker_and_min_mass_bounds(const ProbVector& p, const ProbVector& q) {
    double d = kl_divergence(p, q);  // also enforces absolute continuity
    double v = variational_distance(p, q);
    double mu = q.min_positive();
    double bound = std::log2(1.0 / mu) * v;
    if (d > bound + 1e-9)
        throw Error("divergence bound violated: D exceeds log2(1/mu) * V");
    return {v, bound};
}

bool is_strongly_typical(std::span<const Symbol> seq, const ProbVector& p,
                         const TypicalityParams& params) {
    if (seq.size() != params.n) throw LengthMismatch("is_strongly_typical: sequence length != n");
    std::vector<std::size_t> counts(p.size(), 0);
    for (Symbol s : seq) {
        if (s < 0 || static_cast<std::size_t>(s) >= p.size())
            throw DimensionMismatch("is_strongly_typical: symbol outside alphabet");
        ++counts[static_cast<std::size_t>(s)];
    }
    const double n = static_cast<double>(params.n);
    for (std::size_t a = 0; a < p.size(); ++a) {
        double freq = static_cast<double>(counts[a]) / n;
        if (std::abs(freq - p[a]) > params.epsilon * p[a]) return false;
    }
    return true;
}

bool is_strongly_typical(const std::vector<std::span<const Symbol>>& seqs,
                         const JointTable& joint, const TypicalityParams& params) {
    if (seqs.size() != joint.rank())
        throw AxisError("is_strongly_typical: one sequence per joint axis required");
    for (const auto& s : seqs)
        if (s.size() != params.n) throw LengthMismatch("is_strongly_typical: sequence length != n");

    std::vector<std::size_t> counts(joint.size(), 0);
    const auto& shape = joint.shape();
    for (std::size_t i = 0; i < params.n; ++i) {
        std::size_t flat = 0;
        for (std::size_t d = 0; d < seqs.size(); ++d) {
            Symbol s = seqs[d][i];
            if (s < 0 || static_cast<std::size_t>(s) >= shape[d])
                throw DimensionMismatch("is_strongly_typical: symbol outside alphabet");
            flat = flat * shape[d] + static_cast<std::size_t>(s);
        }
        ++counts[flat];
    }
    const double n = static_cast<double>(params.n);
    for (std::size_t c = 0; c < joint.size(); ++c) {
        double freq = static_cast<double>(counts[c]) / n;
        if (std::abs(freq - joint.flat(c)) > params.epsilon * joint.flat(c)) return false;
    }
    return true;
}

}  // namespace cribmac
