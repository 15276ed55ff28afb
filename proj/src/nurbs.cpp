#include "nurbsvo/nurbs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace nurbsvo {
namespace {

using Basis = std::array<std::array<double, kMaxDegree + 1>, 3>;

constexpr std::array<double, 8> kGl8Nodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGl8Weights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

constexpr double kTangentEpsilon = 1e-9;
constexpr double kCurvatureOffset = 1e-6;
constexpr double kKnotSnap = 1e-9;

// Basis functions and their derivatives up to `order` (Piegl & Tiller, A2.3).
void basis_derivatives(const std::vector<double>& knots, std::size_t span, double s, int degree, int order,
                       Basis& ders) {
    const int p = degree;
    double ndu[kMaxDegree + 1][kMaxDegree + 1];
    double left[kMaxDegree + 1];
    double right[kMaxDegree + 1];
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = s - knots[span + 1 - j];
        right[j] = knots[span + j] - s;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    for (int j = 0; j <= p; ++j) {
        ders[0][j] = ndu[j][p];
    }
    const int n = std::min(order, p);
    for (int k = n + 1; k <= order; ++k) {
        for (int j = 0; j <= p; ++j) {
            ders[k][j] = 0.0;
        }
    }
    double a[2][kMaxDegree + 1];
    for (int r = 0; r <= p; ++r) {
        int s1 = 0;
        int s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= n; ++k) {
            double d = 0.0;
            const int rk = r - k;
            const int pk = p - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = rk >= -1 ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int k = 1; k <= n; ++k) {
        for (int j = 0; j <= p; ++j) {
            ders[k][j] *= factor;
        }
        factor *= (p - k);
    }
}

double curvature_of(const Vec2& d1, const Vec2& d2) {
    const double speed_sq = d1.squaredNorm();
    if (speed_sq == 0.0) {
        return 0.0;
    }
    return std::abs(cross(d1, d2)) / (speed_sq * std::sqrt(speed_sq));
}

double speed_at(const NurbsCurve& curve, double s) { return curve.evaluate_with_tangent(s).second.norm(); }

double gauss_legendre(const NurbsCurve& curve, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < kGl8Nodes.size(); ++i) {
        sum += kGl8Weights[i] * speed_at(curve, mid + half * kGl8Nodes[i]);
    }
    return sum * half;
}

double adaptive_length(const NurbsCurve& curve, double a, double b, double whole, double rel_tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gauss_legendre(curve, a, mid);
    const double right = gauss_legendre(curve, mid, b);
    const double refined = left + right;
    if (depth >= 40 || std::abs(refined - whole) <= std::max(rel_tol * std::abs(refined), 1e-15)) {
        return refined;
    }
    return adaptive_length(curve, a, mid, left, rel_tol, depth + 1) +
           adaptive_length(curve, mid, b, right, rel_tol, depth + 1);
}

using Homogeneous = Eigen::Vector3d;

std::vector<Homogeneous> to_homogeneous(const NurbsCurve& curve) {
    std::vector<Homogeneous> pw(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const double w = curve.weights()[i];
        pw[i] = Homogeneous(w * curve.points()[i].x(), w * curve.points()[i].y(), w);
    }
    return pw;
}

NurbsCurve from_homogeneous(int degree, const std::vector<Homogeneous>& pw, std::vector<double> knots) {
    std::vector<Vec2> points(pw.size());
    std::vector<double> weights(pw.size());
    for (std::size_t i = 0; i < pw.size(); ++i) {
        weights[i] = pw[i].z();
        points[i] = Vec2(pw[i].x() / pw[i].z(), pw[i].y() / pw[i].z());
    }
    return NurbsCurve(degree, std::move(points), std::move(weights), KnotVector(std::move(knots), degree));
}

}  // namespace

// ---------------------------------------------------------------------------
// KnotVector

KnotVector::KnotVector(std::vector<double> knots, int degree) : knots_(std::move(knots)), degree_(degree) {
    if (degree < 1 || degree > kMaxDegree) {
        throw std::invalid_argument("knot vector: degree must be in [1, " + std::to_string(kMaxDegree) + "]");
    }
    const std::size_t clamp = static_cast<std::size_t>(degree) + 1;
    if (knots_.size() < 2 * clamp) {
        throw std::invalid_argument("knot vector: needs at least 2(degree+1) knots");
    }
    for (std::size_t i = 0; i < clamp; ++i) {
        if (knots_[i] != 0.0 || knots_[knots_.size() - 1 - i] != 1.0) {
            throw std::invalid_argument("knot vector: must be clamped on [0, 1]");
        }
    }
    std::size_t run = 1;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i]) || knots_[i] < knots_[i - 1]) {
            throw std::invalid_argument("knot vector: must be non-decreasing");
        }
        run = knots_[i] == knots_[i - 1] ? run + 1 : 1;
        if (knots_[i] > 0.0 && knots_[i] < 1.0 && run > static_cast<std::size_t>(degree)) {
            throw std::invalid_argument("knot vector: interior multiplicity exceeds degree");
        }
    }
}

KnotVector KnotVector::clamped_uniform(std::size_t n_points, int degree) {
    const std::size_t p = static_cast<std::size_t>(degree);
    if (n_points < p + 1) {
        throw std::invalid_argument("clamped_uniform: need at least degree+1 control points");
    }
    std::vector<double> knots(n_points + p + 1, 0.0);
    const std::size_t n_spans = n_points - p;
    for (std::size_t i = 1; i < n_spans; ++i) {
        knots[p + i] = static_cast<double>(i) / static_cast<double>(n_spans);
    }
    std::fill(knots.end() - static_cast<std::ptrdiff_t>(p + 1), knots.end(), 1.0);
    return KnotVector(std::move(knots), degree);
}

std::size_t KnotVector::find_span(double s, std::size_t n_points) const {
    const std::size_t p = static_cast<std::size_t>(degree_);
    if (s >= knots_[n_points]) {
        return n_points - 1;
    }
    if (s <= knots_[p]) {
        return p;
    }
    const auto first = knots_.begin() + static_cast<std::ptrdiff_t>(p);
    const auto last = knots_.begin() + static_cast<std::ptrdiff_t>(n_points + 1);
    return static_cast<std::size_t>(std::upper_bound(first, last, s) - knots_.begin()) - 1;
}

std::size_t KnotVector::multiplicity(double s) const {
    return static_cast<std::size_t>(std::count(knots_.begin(), knots_.end(), s));
}

std::vector<double> KnotVector::breakpoints() const {
    std::vector<double> out;
    for (double k : knots_) {
        if (out.empty() || k > out.back()) {
            out.push_back(k);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// NurbsCurve

NurbsCurve::NurbsCurve(int degree, std::vector<Vec2> points, std::vector<double> weights, KnotVector knots)
    : degree_(degree), points_(std::move(points)), weights_(std::move(weights)), knots_(std::move(knots)) {
    if (degree_ < 1 || degree_ > kMaxDegree) {
        throw std::invalid_argument("nurbs: degree must be in [1, " + std::to_string(kMaxDegree) + "]");
    }
    if (knots_.degree() != degree_) {
        throw std::invalid_argument("nurbs: knot vector degree mismatch");
    }
    if (points_.size() < static_cast<std::size_t>(degree_) + 1) {
        throw std::invalid_argument("nurbs: need at least degree+1 control points");
    }
    if (weights_.size() != points_.size()) {
        throw std::invalid_argument("nurbs: one weight per control point required");
    }
    if (knots_.size() != points_.size() + static_cast<std::size_t>(degree_) + 1) {
        throw std::invalid_argument("nurbs: knot count must equal points + degree + 1");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
            throw std::invalid_argument("nurbs: weights must be finite and strictly positive");
        }
        if (!points_[i].allFinite()) {
            throw std::invalid_argument("nurbs: control points must be finite");
        }
    }
}

NurbsCurve::NurbsCurve(int degree, std::vector<Vec2> points, std::vector<double> weights)
    : NurbsCurve(degree, points, std::move(weights),
                 KnotVector::clamped_uniform(points.size(), std::clamp(degree, 1, kMaxDegree))) {}

void NurbsCurve::homogeneous(double s, int order, Vec2* a, double* w) const {
    const std::size_t span = knots_.find_span(s, points_.size());
    Basis ders;
    basis_derivatives(knots_.values(), span, s, degree_, order, ders);
    for (int d = 0; d <= order; ++d) {
        a[d] = Vec2::Zero();
        w[d] = 0.0;
    }
    const std::size_t first = span - static_cast<std::size_t>(degree_);
    for (int j = 0; j <= degree_; ++j) {
        const std::size_t i = first + static_cast<std::size_t>(j);
        const double wi = weights_[i];
        for (int d = 0; d <= order; ++d) {
            const double nw = ders[d][j] * wi;
            a[d] += nw * points_[i];
            w[d] += nw;
        }
    }
}

Vec2 NurbsCurve::evaluate(double s) const {
    if (s <= 0.0) {
        return points_.front();
    }
    if (s >= 1.0) {
        return points_.back();
    }
    Vec2 a[1];
    double w[1];
    homogeneous(s, 0, a, w);
    return a[0] / w[0];
}

std::pair<Vec2, Vec2> NurbsCurve::evaluate_with_tangent(double s) const {
    s = std::clamp(s, 0.0, 1.0);
    Vec2 a[2];
    double w[2];
    homogeneous(s, 1, a, w);
    Vec2 point = a[0] / w[0];
    if (s == 0.0) {
        point = points_.front();
    } else if (s == 1.0) {
        point = points_.back();
    }
    const Vec2 d1 = (a[1] - w[1] * point) / w[0];
    return {point, d1};
}

CurveSample NurbsCurve::sample(double s) const {
    s = std::clamp(s, 0.0, 1.0);
    Vec2 a[3];
    double w[3];
    homogeneous(s, 2, a, w);
    CurveSample out;
    out.s = s;
    out.point = a[0] / w[0];
    if (s == 0.0) {
        out.point = points_.front();
    } else if (s == 1.0) {
        out.point = points_.back();
    }
    out.tangent = (a[1] - w[1] * out.point) / w[0];
    out.second = (a[2] - 2.0 * w[1] * out.tangent - w[2] * out.point) / w[0];
    if (out.tangent.norm() >= kTangentEpsilon) {
        out.curvature = curvature_of(out.tangent, out.second);
    } else {
        // Parametric stall: report the larger one-sided neighbour value.
        double best = 0.0;
        for (double offset : {-kCurvatureOffset, kCurvatureOffset}) {
            const double t = std::clamp(s + offset, 0.0, 1.0);
            if (t == s) {
                continue;
            }
            homogeneous(t, 2, a, w);
            const Vec2 p = a[0] / w[0];
            const Vec2 d1 = (a[1] - w[1] * p) / w[0];
            const Vec2 d2 = (a[2] - 2.0 * w[1] * d1 - w[2] * p) / w[0];
            best = std::max(best, curvature_of(d1, d2));
        }
        out.curvature = best;
    }
    return out;
}

std::vector<double> NurbsCurve::rational_basis(double s) const {
    s = std::clamp(s, 0.0, 1.0);
    const std::size_t span = knots_.find_span(s, points_.size());
    Basis ders;
    basis_derivatives(knots_.values(), span, s, degree_, 0, ders);
    std::vector<double> out(points_.size(), 0.0);
    double total = 0.0;
    const std::size_t first = span - static_cast<std::size_t>(degree_);
    for (int j = 0; j <= degree_; ++j) {
        const std::size_t i = first + static_cast<std::size_t>(j);
        out[i] = ders[0][j] * weights_[i];
        total += out[i];
    }
    for (double& v : out) {
        v /= total;
    }
    return out;
}

bool NurbsCurve::operator==(const NurbsCurve& other) const {
    return degree_ == other.degree_ && points_ == other.points_ && weights_ == other.weights_ &&
           knots_.values() == other.knots_.values();
}

// ---------------------------------------------------------------------------
// Arc length

double arc_length(const NurbsCurve& curve, double s0, double s1, double rel_tol) {
    if (s0 > s1) {
        throw std::invalid_argument("arc_length: s0 > s1");
    }
    if (s0 < 0.0 || s1 > 1.0) {
        throw std::invalid_argument("arc_length: interval outside [0, 1]");
    }
    if (s0 == s1) {
        return 0.0;
    }
    double total = 0.0;
    const std::vector<double> breaks = curve.knots().breakpoints();
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = std::max(s0, breaks[i]);
        const double b = std::min(s1, breaks[i + 1]);
        if (b <= a) {
            continue;
        }
        total += adaptive_length(curve, a, b, gauss_legendre(curve, a, b), rel_tol, 0);
    }
    return total;
}

ArcLengthTable::ArcLengthTable(const NurbsCurve& curve, int subdivisions_per_span) : curve_(&curve) {
    const int subdivisions = std::max(1, subdivisions_per_span);
    const std::vector<double> breaks = curve.knots().breakpoints();
    params_.reserve((breaks.size() - 1) * static_cast<std::size_t>(subdivisions) + 1);
    params_.push_back(0.0);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double width = breaks[i + 1] - breaks[i];
        for (int k = 1; k < subdivisions; ++k) {
            params_.push_back(breaks[i] + width * k / subdivisions);
        }
        params_.push_back(breaks[i + 1]);
    }
    cumulative_.resize(params_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < params_.size(); ++i) {
        cumulative_[i + 1] = cumulative_[i] + gauss_legendre(curve, params_[i], params_[i + 1]);
    }
    speeds_.reserve(params_.size());
    for (const double s : params_) {
        speeds_.push_back(speed_at(curve, s));
    }
}

double ArcLengthTable::partial(std::size_t interval, double s) const {
    if (s <= params_[interval]) {
        return 0.0;
    }
    return gauss_legendre(*curve_, params_[interval], s);
}

double ArcLengthTable::length_at(double s) const {
    s = std::clamp(s, 0.0, 1.0);
    if (s == 1.0) {
        return total();
    }
    const std::size_t i =
        static_cast<std::size_t>(std::upper_bound(params_.begin(), params_.end(), s) - params_.begin()) - 1;
    return cumulative_[i] + partial(i, s);
}

double ArcLengthTable::parameter_at(double length) const {
    if (length <= 0.0) {
        return 0.0;
    }
    if (length >= total()) {
        return 1.0;
    }
    std::size_t i = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), length) -
                                             cumulative_.begin()) -
                    1;
    i = std::min(i, params_.size() - 2);
    const double lo = params_[i];
    const double hi = params_[i + 1];
    const double span_len = cumulative_[i + 1] - cumulative_[i];
    double s = span_len > 0.0 ? lo + (length - cumulative_[i]) / span_len * (hi - lo) : lo;
    for (int it = 0; it < 4; ++it) {
        const double residual = cumulative_[i] + partial(i, s) - length;
        if (std::abs(residual) <= 1e-10 * std::max(1.0, total())) {
            break;
        }
        const double speed = speed_at(*curve_, s);
        if (speed <= 0.0) {
            break;
        }
        s = std::clamp(s - residual / speed, lo, hi);
    }
    return s;
}

double ArcLengthTable::approximate_parameter_at(double length) const {
    if (length <= 0.0) {
        return 0.0;
    }
    if (length >= total()) {
        return 1.0;
    }
    std::size_t i = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), length) -
                                             cumulative_.begin()) -
                    1;
    i = std::min(i, params_.size() - 2);
    const double h = cumulative_[i + 1] - cumulative_[i];
    const double lo = params_[i];
    const double hi = params_[i + 1];
    if (!(h > 0.0) || !(speeds_[i] > 0.0) || !(speeds_[i + 1] > 0.0)) {
        return h > 0.0 ? lo + (length - cumulative_[i]) / h * (hi - lo) : lo;
    }
    // Cubic Hermite in length with end slopes ds/dL = 1 / |C'|.
    const double t = (length - cumulative_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double s = (2 * t3 - 3 * t2 + 1) * lo + (t3 - 2 * t2 + t) * h / speeds_[i] + (-2 * t3 + 3 * t2) * hi +
                     (t3 - t2) * h / speeds_[i + 1];
    return std::clamp(s, lo, hi);
}

// ---------------------------------------------------------------------------
// Projection

namespace {

Projection refine_projection(const NurbsCurve& curve, const Vec2& q, double s, double lo, double hi) {
    for (int it = 0; it < 20; ++it) {
        const CurveSample cs = curve.sample(s);
        const Vec2 diff = cs.point - q;
        const double g = diff.dot(cs.tangent);
        if (std::abs(g) <= 1e-10) {
            break;
        }
        const double gp = cs.tangent.squaredNorm() + diff.dot(cs.second);
        if (!(gp > 0.0)) {
            break;
        }
        const double next = std::clamp(s - g / gp, lo, hi);
        if (next == s) {
            break;
        }
        s = next;
    }
    return {s, (curve.evaluate(s) - q).norm()};
}

bool better(const Projection& a, const Projection& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.s < b.s);
}

}  // namespace

Projection project_point(const NurbsCurve& curve, const Vec2& q, std::optional<double> hint) {
    double lo = 0.0;
    double hi = 1.0;
    if (hint) {
        const double center = std::clamp(*hint, 0.0, 1.0);
        lo = std::max(0.0, center - kProjectionWindow);
        hi = std::min(1.0, center + kProjectionWindow);
    }
    constexpr int m = kProjectionGrid;
    std::array<double, m + 1> grid_s;
    std::array<double, m + 1> grid_d;
    for (int k = 0; k <= m; ++k) {
        grid_s[k] = k == m ? hi : lo + (hi - lo) * k / m;
        grid_d[k] = (curve.evaluate(grid_s[k]) - q).norm();
    }

    // Newton-refine the three best grid local minima.
    std::vector<int> minima;
    for (int k = 0; k <= m; ++k) {
        const bool left_ok = k == 0 || grid_d[k] <= grid_d[k - 1];
        const bool right_ok = k == m || grid_d[k] <= grid_d[k + 1];
        if (left_ok && right_ok) {
            minima.push_back(k);
        }
    }
    std::stable_sort(minima.begin(), minima.end(), [&](int a, int b) { return grid_d[a] < grid_d[b]; });
    if (minima.size() > 3) {
        minima.resize(3);
    }

    Projection best{grid_s[0], grid_d[0]};
    for (int k = 1; k <= m; ++k) {
        const Projection candidate{grid_s[k], grid_d[k]};
        if (better(candidate, best)) {
            best = candidate;
        }
    }
    for (int k : minima) {
        const double a = grid_s[std::max(0, k - 1)];
        const double b = grid_s[std::min(m, k + 1)];
        const Projection refined = refine_projection(curve, q, grid_s[k], a, b);
        if (better(refined, best)) {
            best = refined;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Knot insertion and splitting

NurbsCurve insert_knot(const NurbsCurve& curve, double s, int times) {
    const int p = curve.degree();
    if (!(s > 0.0 && s < 1.0)) {
        throw std::invalid_argument("insert_knot: parameter must lie strictly inside (0, 1)");
    }
    if (times <= 0) {
        return curve;
    }
    const std::vector<double>& up = curve.knots().values();
    const int existing = static_cast<int>(curve.knots().multiplicity(s));
    if (existing + times > p) {
        throw std::invalid_argument("insert_knot: resulting multiplicity would exceed degree");
    }
    const std::vector<Homogeneous> pw = to_homogeneous(curve);
    const int np = static_cast<int>(pw.size()) - 1;
    const int mp = np + p + 1;
    const int k = static_cast<int>(curve.knots().find_span(s, pw.size()));
    const int r = times;

    // Piegl & Tiller, A5.1.
    std::vector<double> uq(static_cast<std::size_t>(mp + r + 1));
    std::vector<Homogeneous> qw(static_cast<std::size_t>(np + r + 1));
    for (int i = 0; i <= k; ++i) uq[i] = up[i];
    for (int i = 1; i <= r; ++i) uq[k + i] = s;
    for (int i = k + 1; i <= mp; ++i) uq[i + r] = up[i];
    for (int i = 0; i <= k - p; ++i) qw[i] = pw[i];
    for (int i = k - existing; i <= np; ++i) qw[i + r] = pw[i];
    std::vector<Homogeneous> rw(static_cast<std::size_t>(p + 1));
    for (int i = 0; i <= p - existing; ++i) rw[i] = pw[k - p + i];
    int l = 0;
    for (int j = 1; j <= r; ++j) {
        l = k - p + j;
        for (int i = 0; i <= p - j - existing; ++i) {
            const double alpha = (s - up[l + i]) / (up[i + k + 1] - up[l + i]);
            rw[i] = alpha * rw[i + 1] + (1.0 - alpha) * rw[i];
        }
        qw[l] = rw[0];
        qw[k + r - j - existing] = rw[p - j - existing];
    }
    for (int i = l + 1; i < k - existing; ++i) qw[i] = rw[i - l];

    return from_homogeneous(p, qw, std::move(uq));
}

NurbsCurve refine_to_count(const NurbsCurve& curve, std::size_t n_points) {
    NurbsCurve out = curve;
    while (out.size() < n_points) {
        const std::vector<double> breaks = out.knots().breakpoints();
        std::size_t widest = 0;
        for (std::size_t i = 1; i + 1 < breaks.size(); ++i) {
            if (breaks[i + 1] - breaks[i] > breaks[widest + 1] - breaks[widest]) {
                widest = i;
            }
        }
        out = insert_knot(out, 0.5 * (breaks[widest] + breaks[widest + 1]), 1);
    }
    return out;
}

std::pair<NurbsCurve, NurbsCurve> split(const NurbsCurve& curve, double s_cut) {
    if (!(s_cut > 0.0 && s_cut < 1.0)) {
        throw std::invalid_argument("split: s_cut must lie strictly inside (0, 1)");
    }
    for (double k : curve.knots().values()) {
        if (k > 0.0 && k < 1.0 && std::abs(k - s_cut) < kKnotSnap) {
            s_cut = k;
            break;
        }
    }
    const int p = curve.degree();
    const int existing = static_cast<int>(curve.knots().multiplicity(s_cut));
    const NurbsCurve refined = insert_knot(curve, s_cut, p - existing);
    const std::vector<double>& u = refined.knots().values();
    const std::size_t a =
        static_cast<std::size_t>(std::find(u.begin(), u.end(), s_cut) - u.begin());
    const std::size_t pp = static_cast<std::size_t>(p);
    const Vec2 joint = curve.evaluate(s_cut);

    std::vector<Vec2> left_points(refined.points().begin(), refined.points().begin() + static_cast<std::ptrdiff_t>(a));
    std::vector<double> left_weights(refined.weights().begin(),
                                     refined.weights().begin() + static_cast<std::ptrdiff_t>(a));
    std::vector<double> left_knots;
    left_knots.reserve(a + pp + 1);
    for (std::size_t i = 0; i < a + pp; ++i) {
        left_knots.push_back(u[i] >= s_cut ? 1.0 : u[i] / s_cut);
    }
    left_knots.push_back(1.0);
    left_points.back() = joint;

    std::vector<Vec2> right_points(refined.points().begin() + static_cast<std::ptrdiff_t>(a - 1),
                                   refined.points().end());
    std::vector<double> right_weights(refined.weights().begin() + static_cast<std::ptrdiff_t>(a - 1),
                                      refined.weights().end());
    std::vector<double> right_knots;
    right_knots.reserve(u.size() - a + 1);
    right_knots.push_back(0.0);
    for (std::size_t i = a; i < u.size(); ++i) {
        if (u[i] <= s_cut) {
            right_knots.push_back(0.0);
        } else if (u[i] >= 1.0) {
            right_knots.push_back(1.0);
        } else {
            right_knots.push_back((u[i] - s_cut) / (1.0 - s_cut));
        }
    }
    right_points.front() = joint;

    return {NurbsCurve(p, std::move(left_points), std::move(left_weights), KnotVector(std::move(left_knots), p)),
            NurbsCurve(p, std::move(right_points), std::move(right_weights), KnotVector(std::move(right_knots), p))};
}

// ---------------------------------------------------------------------------
// Curvature peak

CurvaturePeak refine_curvature_peak(const NurbsCurve& curve, double lo, double hi, double tolerance) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = curve.sample(x1).curvature;
    double f2 = curve.sample(x2).curvature;
    for (int it = 0; it < 80 && hi - lo > tolerance; ++it) {
        if (f1 > f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = curve.sample(x1).curvature;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = curve.sample(x2).curvature;
        }
    }
    return f1 > f2 ? CurvaturePeak{f1, x1} : CurvaturePeak{f2, x2};
}

CurvaturePeak max_curvature(const NurbsCurve& curve, int n_samples) {
    if (n_samples < 2) {
        throw std::invalid_argument("max_curvature: n_samples must be >= 2");
    }
    CurvaturePeak best{curve.sample(0.0).curvature, 0.0};
    int arg = 0;
    const double step = 1.0 / (n_samples - 1);
    for (int i = 1; i < n_samples; ++i) {
        const double s = i == n_samples - 1 ? 1.0 : i * step;
        const double k = curve.sample(s).curvature;
        if (k > best.curvature) {
            best = {k, s};
            arg = i;
        }
    }

    const CurvaturePeak refined =
        refine_curvature_peak(curve, std::max(0.0, (arg - 1) * step), std::min(1.0, (arg + 1) * step));
    if (refined.curvature > best.curvature) {
        best = refined;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Serialization

void to_json(nlohmann::json& j, const NurbsCurve& curve) {
    nlohmann::json points = nlohmann::json::array();
    for (const Vec2& p : curve.points()) {
        points.push_back({p.x(), p.y()});
    }
    j = nlohmann::json{{"degree", curve.degree()},
                       {"control_points", std::move(points)},
                       {"weights", curve.weights()},
                       {"knots", curve.knots().values()}};
}

NurbsCurve curve_from_json(const nlohmann::json& j) {
    const int degree = j.at("degree").get<int>();
    std::vector<Vec2> points;
    for (const auto& p : j.at("control_points")) {
        if (!p.is_array() || p.size() != 2) {
            throw std::invalid_argument("curve record: control point must be [x, y]");
        }
        points.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return NurbsCurve(degree, std::move(points), j.at("weights").get<std::vector<double>>(),
                      KnotVector(j.at("knots").get<std::vector<double>>(), degree));
}

}  // namespace nurbsvo
