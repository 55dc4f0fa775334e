#include "edpm/dist.hpp"

#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

namespace edpm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double norm_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double norm_quantile(double p) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p); }

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("quantile level must lie in (0,1), got " + std::to_string(alpha));
}

// ---- per-kind primitives ----

double kind_cdf(const Gaussian& g, double y) { return norm_cdf((y - g.mean) / g.stddev); }
double kind_cdf(const PointMass& d, double y) { return y >= d.value ? 1.0 : 0.0; }
double kind_cdf(const Uniform& u, double y) {
    if (y <= u.lo) return 0.0;
    if (y >= u.hi) return 1.0;
    return (y - u.lo) / (u.hi - u.lo);
}
double kind_cdf(const ScaledBernoulli& b, double y) {
    if (y >= b.hi) return 1.0;
    if (y >= b.lo) return 1.0 - b.p;
    return 0.0;
}
double kind_cdf(const PiecewiseCdf& pw, double y) {
    const auto& k = pw.knots;
    auto it = std::upper_bound(k.begin(), k.end(), y, [](double v, const Knot& kn) { return v < kn.y; });
    if (it == k.begin()) return 0.0;
    const Knot& a = *(it - 1);
    if (a.y == y || it == k.end()) return a.value;
    const Knot& b = *it;
    return a.value + (b.left - a.value) * (y - a.y) / (b.y - a.y);
}
double kind_cdf(const NegPareto& p, double y) {
    if (y >= -p.scale) return 1.0;
    return std::pow(p.scale / -y, p.shape);
}

double kind_cdf_left(const Gaussian& g, double y) { return kind_cdf(g, y); }
double kind_cdf_left(const PointMass& d, double y) { return y > d.value ? 1.0 : 0.0; }
double kind_cdf_left(const Uniform& u, double y) { return kind_cdf(u, y); }
double kind_cdf_left(const ScaledBernoulli& b, double y) {
    if (y > b.hi) return 1.0;
    if (y > b.lo) return 1.0 - b.p;
    return 0.0;
}
double kind_cdf_left(const PiecewiseCdf& pw, double y) {
    const auto& k = pw.knots;
    auto it = std::lower_bound(k.begin(), k.end(), y, [](const Knot& kn, double v) { return kn.y < v; });
    if (it != k.end() && it->y == y) return it->left;
    return kind_cdf(pw, y);
}
double kind_cdf_left(const NegPareto& p, double y) { return kind_cdf(p, y); }

// Move y to the exact boundary of the computed CDF: hit(F(y)) and not hit(F(prev y)).
template <class K>
double snap_quantile(const K& k, double y, double target, bool strict) {
    auto hit = [&](double v) { return strict ? v > target : v >= target; };
    double step = std::max(std::abs(y), 1.0) * 1e-15;
    double lo = y, hi = y;
    if (hit(kind_cdf(k, y))) {
        do {
            lo = hi - step;
            step *= 2.0;
            if (!hit(kind_cdf(k, lo))) break;
            hi = lo;
        } while (std::isfinite(lo));
    } else {
        do {
            hi = lo + step;
            step *= 2.0;
            if (hit(kind_cdf(k, hi))) break;
            lo = hi;
        } while (std::isfinite(hi));
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) return y;
    for (;;) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) return hi;
        (hit(kind_cdf(k, mid)) ? hi : lo) = mid;
    }
}

double kind_quantile(const Gaussian& g, double a) {
    return snap_quantile(g, g.mean + g.stddev * norm_quantile(a), a, false);
}
double kind_quantile(const PointMass& d, double) { return d.value; }
double kind_quantile(const Uniform& u, double a) { return snap_quantile(u, u.lo + a * (u.hi - u.lo), a, false); }
double kind_quantile(const ScaledBernoulli& b, double a) { return a <= 1.0 - b.p ? b.lo : b.hi; }
double piecewise_search(const PiecewiseCdf& pw, double target, bool strict) {
    auto hit = [&](double v) { return strict ? v > target : v >= target; };
    const auto& k = pw.knots;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i > 0 && hit(k[i].left)) {
            const Knot& a = k[i - 1];
            double y = a.y + (target - a.value) * (k[i].y - a.y) / (k[i].left - a.value);
            y = std::clamp(y, a.y, k[i].y);
            return snap_quantile(pw, y, target, strict);
        }
        if (hit(k[i].value)) return k[i].y;
    }
    return strict ? kInf : k.back().y;
}
double kind_quantile(const PiecewiseCdf& pw, double a) { return piecewise_search(pw, a, false); }
double kind_quantile(const NegPareto& p, double a) {
    return snap_quantile(p, -p.scale * std::pow(a, -1.0 / p.shape), a, false);
}

double kind_quantile_upper(const Gaussian& g, double b) {
    return b <= 0.0 ? -kInf : snap_quantile(g, g.mean + g.stddev * norm_quantile(b), b, true);
}
double kind_quantile_upper(const PointMass& d, double) { return d.value; }
double kind_quantile_upper(const Uniform& u, double b) {
    if (b <= 0.0) return u.lo;
    return snap_quantile(u, u.lo + b * (u.hi - u.lo), b, true);
}
double kind_quantile_upper(const ScaledBernoulli& b, double beta) { return beta < 1.0 - b.p ? b.lo : b.hi; }
double kind_quantile_upper(const PiecewiseCdf& pw, double b) { return piecewise_search(pw, b, true); }
double kind_quantile_upper(const NegPareto& p, double b) {
    return b <= 0.0 ? -kInf : snap_quantile(p, -p.scale * std::pow(b, -1.0 / p.shape), b, true);
}

double kind_flat_end(const Gaussian&, double x) { return x; }
double kind_flat_end(const PointMass& d, double x) { return x < d.value ? d.value : kInf; }
double kind_flat_end(const Uniform& u, double x) {
    if (x < u.lo) return u.lo;
    return x < u.hi ? x : kInf;
}
double kind_flat_end(const ScaledBernoulli& b, double x) {
    if (x < b.lo && b.p < 1.0) return b.lo;
    if (x < b.hi && b.p > 0.0) return b.hi;
    return kInf;
}
double kind_flat_end(const PiecewiseCdf& pw, double x) {
    const auto& k = pw.knots;
    const double fx = kind_cdf(pw, x);
    auto it = std::upper_bound(k.begin(), k.end(), x, [](double v, const Knot& kn) { return v < kn.y; });
    double start = x;
    for (; it != k.end(); ++it) {
        if (it->left > fx) return start;
        if (it->value > fx) return it->y;
        start = it->y;
    }
    return kInf;
}
double kind_flat_end(const NegPareto& p, double x) { return x < -p.scale ? x : kInf; }

double kind_cdf_integral(const Gaussian& g, double z) {
    double u = (z - g.mean) / g.stddev;
    return g.stddev * (u * norm_cdf(u) + norm_pdf(u));
}
double kind_cdf_integral(const PointMass& d, double z) { return std::max(0.0, z - d.value); }
double kind_cdf_integral(const Uniform& u, double z) {
    if (z <= u.lo) return 0.0;
    if (z >= u.hi) return 0.5 * (u.hi - u.lo) + (z - u.hi);
    return 0.5 * (z - u.lo) * (z - u.lo) / (u.hi - u.lo);
}
double kind_cdf_integral(const ScaledBernoulli& b, double z) {
    return (1.0 - b.p) * std::max(0.0, z - b.lo) + b.p * std::max(0.0, z - b.hi);
}
double kind_cdf_integral(const PiecewiseCdf& pw, double z) {
    const auto& k = pw.knots;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        if (z <= k[i].y) return acc;
        double w = k[i + 1].y - k[i].y;
        if (z >= k[i + 1].y) {
            acc += 0.5 * w * (k[i].value + k[i + 1].left);
        } else {
            double s = z - k[i].y;
            return acc + s * k[i].value + 0.5 * (k[i + 1].left - k[i].value) * s * s / w;
        }
    }
    if (z > k.back().y) acc += k.back().value * (z - k.back().y);
    return acc;
}
double kind_cdf_integral(const NegPareto& p, double z) {
    if (p.shape <= 1.0) return kInf;
    const double k = p.shape;
    if (z <= -p.scale) return std::pow(p.scale, k) * std::pow(-z, 1.0 - k) / (k - 1.0);
    return p.scale / (k - 1.0) + (z + p.scale);
}

// integral of g over [a, b] for the moment integrand g
double segment_integral(const Moment& m, double a, double b) {
    if (b <= a) return 0.0;
    switch (m.kind) {
        case Moment::Kind::Mean: return 0.5 * (b * b - a * a);
        case Moment::Kind::SecondMoment: return (b * b * b - a * a * a) / 3.0;
        case Moment::Kind::LowerTail: {
            if (a >= 0.0) return 0.0;
            double c = std::min(b, 0.0);
            return 0.5 * (c * c - a * a);
        }
        case Moment::Kind::UpperTail: {
            if (b <= 0.0) return 0.0;
            double c = std::max(a, 0.0);
            return 0.5 * (b * b - c * c);
        }
        case Moment::Kind::Semivariance: {
            double r = m.param;
            if (a >= r) return 0.0;
            double c = std::min(b, r);
            return (std::pow(c - r, 3) - std::pow(a - r, 3)) / 3.0;
        }
        case Moment::Kind::ExpMoment: {
            double t = m.param;
            if (t == 0.0) return b - a;
            return (std::exp(-t * a) - std::exp(-t * b)) / t;
        }
    }
    return 0.0;
}

double integrand(const Moment& m, double x) {
    switch (m.kind) {
        case Moment::Kind::Mean: return x;
        case Moment::Kind::SecondMoment: return x * x;
        case Moment::Kind::LowerTail: return x <= 0.0 ? x : 0.0;
        case Moment::Kind::UpperTail: return x > 0.0 ? x : 0.0;
        case Moment::Kind::Semivariance: return x <= m.param ? (x - m.param) * (x - m.param) : 0.0;
        case Moment::Kind::ExpMoment: return std::exp(-m.param * x);
    }
    return 0.0;
}

double kind_expectation(const Gaussian& g, const Moment& m) {
    const double mu = g.mean, s = g.stddev;
    switch (m.kind) {
        case Moment::Kind::Mean: return mu;
        case Moment::Kind::SecondMoment: return mu * mu + s * s;
        case Moment::Kind::LowerTail: {
            double d = -mu / s;
            return mu * norm_cdf(d) - s * norm_pdf(d);
        }
        case Moment::Kind::UpperTail: {
            double d = -mu / s;
            return mu * norm_cdf(-d) + s * norm_pdf(d);
        }
        case Moment::Kind::Semivariance: {
            double d = (m.param - mu) / s;
            return s * s * ((1.0 + d * d) * norm_cdf(d) + d * norm_pdf(d));
        }
        case Moment::Kind::ExpMoment: {
            double t = m.param;
            return std::exp(-t * mu + 0.5 * t * t * s * s);
        }
    }
    return 0.0;
}
double kind_expectation(const PointMass& d, const Moment& m) { return integrand(m, d.value); }
double kind_expectation(const Uniform& u, const Moment& m) { return segment_integral(m, u.lo, u.hi) / (u.hi - u.lo); }
double kind_expectation(const ScaledBernoulli& b, const Moment& m) {
    return (1.0 - b.p) * integrand(m, b.lo) + b.p * integrand(m, b.hi);
}
double kind_expectation(const PiecewiseCdf& pw, const Moment& m) {
    const auto& k = pw.knots;
    double acc = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        double jump = k[i].value - k[i].left;
        if (jump > 0.0) acc += jump * integrand(m, k[i].y);
        if (i + 1 < k.size()) {
            double mass = k[i + 1].left - k[i].value;
            if (mass > 0.0) acc += mass * segment_integral(m, k[i].y, k[i + 1].y) / (k[i + 1].y - k[i].y);
        }
    }
    return acc;
}
double kind_expectation(const NegPareto& p, const Moment& m) {
    const double k = p.shape, xm = p.scale;
    auto ey = [&]() { return k > 1.0 ? k * xm / (k - 1.0) : kInf; };
    auto ey2 = [&]() { return k > 2.0 ? k * xm * xm / (k - 2.0) : kInf; };
    switch (m.kind) {
        case Moment::Kind::Mean:
        case Moment::Kind::LowerTail: return -ey();
        case Moment::Kind::UpperTail: return 0.0;
        case Moment::Kind::SecondMoment: return ey2();
        case Moment::Kind::Semivariance: {
            if (k <= 2.0) return kInf;
            double r = m.param;
            if (r >= -xm) return ey2() + 2.0 * r * ey() + r * r;
            double s = -r;
            return std::pow(xm / s, k) * 2.0 * s * s / ((k - 1.0) * (k - 2.0));
        }
        case Moment::Kind::ExpMoment: return m.param > 0.0 ? kInf : (m.param == 0.0 ? 1.0 : 0.0);
    }
    return 0.0;
}

void kind_breakpoints(const Gaussian&, std::vector<double>&) {}
void kind_breakpoints(const PointMass& d, std::vector<double>& out) { out.push_back(d.value); }
void kind_breakpoints(const Uniform& u, std::vector<double>& out) {
    out.push_back(u.lo);
    out.push_back(u.hi);
}
void kind_breakpoints(const ScaledBernoulli& b, std::vector<double>& out) {
    out.push_back(b.lo);
    out.push_back(b.hi);
}
void kind_breakpoints(const PiecewiseCdf& pw, std::vector<double>& out) {
    for (const auto& k : pw.knots) out.push_back(k.y);
}
void kind_breakpoints(const NegPareto& p, std::vector<double>& out) { out.push_back(-p.scale); }

bool kind_curved(const Gaussian&) { return true; }
bool kind_curved(const NegPareto&) { return true; }
template <class K>
bool kind_curved(const K&) { return false; }

bool kind_has_density(const Gaussian&) { return true; }
bool kind_has_density(const Uniform&) { return true; }
bool kind_has_density(const NegPareto&) { return true; }
bool kind_has_density(const PiecewiseCdf& pw) {
    for (std::size_t i = 0; i + 1 < pw.knots.size(); ++i)
        if (pw.knots[i + 1].left > pw.knots[i].value) return true;
    return false;
}
template <class K>
bool kind_has_density(const K&) { return false; }

double kind_density(const Gaussian& g, double y) { return norm_pdf((y - g.mean) / g.stddev) / g.stddev; }
double kind_density(const Uniform& u, double y) { return (y > u.lo && y < u.hi) ? 1.0 / (u.hi - u.lo) : 0.0; }
double kind_density(const PiecewiseCdf& pw, double y) {
    const auto& k = pw.knots;
    auto it = std::upper_bound(k.begin(), k.end(), y, [](double v, const Knot& kn) { return v < kn.y; });
    if (it == k.begin() || it == k.end() || (it - 1)->y == y) return 0.0;
    const Knot& a = *(it - 1);
    return (it->left - a.value) / (it->y - a.y);
}
double kind_density(const NegPareto& p, double y) {
    if (y >= -p.scale) return 0.0;
    return p.shape * std::pow(p.scale, p.shape) * std::pow(-y, -p.shape - 1.0);
}
template <class K>
double kind_density(const K&, double) { return 0.0; }

void kind_probes(const Gaussian& g, std::vector<double>& out) {
    for (int i = -40 * 32; i <= 40 * 32; ++i) out.push_back(g.mean + g.stddev * (i / 32.0));
}
void kind_probes(const NegPareto& p, std::vector<double>& out) {
    for (int i = 1; i <= 60 * 32; ++i) out.push_back(-p.scale * std::exp(i / 32.0));
}
template <class K>
void kind_probes(const K&, std::vector<double>&) {}

bool kind_smooth_at(const Gaussian&, double) { return true; }
bool kind_smooth_at(const PointMass& d, double y) { return y != d.value; }
bool kind_smooth_at(const Uniform& u, double y) { return y != u.lo && y != u.hi; }
bool kind_smooth_at(const ScaledBernoulli& b, double y) { return y != b.lo && y != b.hi; }
bool kind_smooth_at(const PiecewiseCdf& pw, double y) {
    for (const auto& k : pw.knots)
        if (k.y == y) return false;
    return true;
}
bool kind_smooth_at(const NegPareto& p, double y) { return y != -p.scale; }

double kind_sample(const Gaussian& g, Rng& rng) { return std::normal_distribution<double>(g.mean, g.stddev)(rng); }
double kind_sample(const PointMass& d, Rng&) { return d.value; }
double kind_sample(const Uniform& u, Rng& rng) { return u.lo + (u.hi - u.lo) * uniform_open(rng); }
double kind_sample(const ScaledBernoulli& b, Rng& rng) { return uniform_open(rng) < b.p ? b.hi : b.lo; }
double kind_sample(const PiecewiseCdf& pw, Rng& rng) { return kind_quantile(pw, uniform_open(rng)); }
double kind_sample(const NegPareto& p, Rng& rng) { return kind_quantile(p, uniform_open(rng)); }

// ---- empirical primitives ----

double emp_cdf(const EmpiricalDistribution& e, double y) {
    auto s = e.samples();
    return static_cast<double>(std::upper_bound(s.begin(), s.end(), y) - s.begin()) / static_cast<double>(s.size());
}
double emp_cdf_left(const EmpiricalDistribution& e, double y) {
    auto s = e.samples();
    return static_cast<double>(std::lower_bound(s.begin(), s.end(), y) - s.begin()) / static_cast<double>(s.size());
}
// smallest k in [1, t] with k/t satisfying the predicate, as computed in floating point
template <class Pred>
std::size_t emp_rank(std::size_t t, double target, Pred hit) {
    const double td = static_cast<double>(t);
    double guess = std::ceil(target * td);
    std::size_t k = guess < 1.0 ? 1 : std::min<std::size_t>(t, static_cast<std::size_t>(guess));
    while (k > 1 && hit(static_cast<double>(k - 1) / td)) --k;
    while (k <= t && !hit(static_cast<double>(k) / td)) ++k;
    return k;
}

// ---- dispatch helpers ----

template <class Fn>
auto on_reward(const RewardDistribution& d, Fn&& fn) {
    return std::visit([&](const auto& k) { return fn(k); }, d.kind());
}

bool positive(double w) { return w > 0.0; }

double component_cdf(const MixtureComponent& c, double y) { return cdf(DistRef(c), y); }

double mixture_search(const MixtureDistribution& m, double target, bool strict) {
    auto hit = [&](double v) { return strict ? v > target : v >= target; };
    DistRef F(m);
    const std::vector<double> bps = breakpoints(F);
    const bool curved = has_curved_part(F);

    auto bisect = [&](double lo, double hi) {
        for (int it = 0; it < 4000; ++it) {
            double mid = lo + 0.5 * (hi - lo);
            if (!(mid > lo && mid < hi)) break;
            if (hit(cdf(F, mid))) hi = mid;
            else lo = mid;
        }
        return hi;
    };
    double anchor = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < m.components().size(); ++i) {
        if (!positive(m.weights()[i])) continue;
        if (const auto* rd = std::get_if<RewardDistribution>(&m.components()[i])) {
            if (const auto* g = std::get_if<Gaussian>(&rd->kind())) {
                anchor = g->mean;
                scale = std::max(scale, g->stddev);
            } else if (const auto* p = std::get_if<NegPareto>(&rd->kind())) {
                anchor = -p->scale;
                scale = std::max(scale, p->scale);
            }
        }
    }
    auto bracket_down = [&](double from) {
        double step = scale;
        double lo = from - step;
        for (int it = 0; it < 2100 && std::isfinite(lo) && hit(cdf(F, lo)); ++it) {
            step *= 2.0;
            lo = from - step;
        }
        return lo;
    };
    auto bracket_up = [&](double from) {
        double step = scale;
        double hi = from + step;
        for (int it = 0; it < 2100 && std::isfinite(hi) && !hit(cdf(F, hi)); ++it) {
            step *= 2.0;
            hi = from + step;
        }
        return hi;
    };

    if (bps.empty()) {
        double lo = bracket_down(anchor), hi = bracket_up(anchor);
        if (!std::isfinite(hi)) return strict ? kInf : hi;
        return bisect(lo, hi);
    }
    auto first = std::partition_point(bps.begin(), bps.end(), [&](double b) { return !hit(cdf(F, b)); });
    if (first == bps.end()) {
        if (!curved) return strict ? kInf : bps.back();
        double hi = bracket_up(bps.back());
        if (!std::isfinite(hi)) return strict ? kInf : hi;
        return bisect(bps.back(), hi);
    }
    const double b = *first;
    if (!hit(cdf_left(F, b))) return b;
    if (first == bps.begin()) {
        // only curved parts carry mass before the first breakpoint
        return bisect(bracket_down(b), b);
    }
    const double a = *(first - 1);
    if (curved) return bisect(a, b);
    const double fa = cdf(F, a), fb = cdf_left(F, b);
    double y = a + (target - fa) * (b - a) / (fb - fa);
    y = std::clamp(y, a, b);
    for (int s = 0; s < 64 && !hit(cdf(F, y)) && y < b; ++s) y = std::nextafter(y, kInf);
    for (int s = 0; s < 64; ++s) {
        double prev = std::nextafter(y, -kInf);
        if (prev <= a || !hit(cdf(F, prev))) break;
        y = prev;
    }
    return y;
}

}  // namespace

double uniform_open(Rng& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

// ---- construction ----

RewardDistribution RewardDistribution::gaussian(double mean, double stddev) {
    require(std::isfinite(mean) && std::isfinite(stddev) && stddev > 0.0, "gaussian needs finite mean and stddev > 0");
    return RewardDistribution(Gaussian{mean, stddev});
}

RewardDistribution RewardDistribution::point_mass(double value) {
    require(std::isfinite(value), "point-mass value must be finite");
    return RewardDistribution(PointMass{value});
}

RewardDistribution RewardDistribution::uniform(double lo, double hi) {
    require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "uniform needs finite lo < hi");
    return RewardDistribution(Uniform{lo, hi});
}

RewardDistribution RewardDistribution::scaled_bernoulli(double p, double lo, double hi) {
    require(p >= 0.0 && p <= 1.0, "bernoulli-scaled p must lie in [0,1]");
    require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "bernoulli-scaled needs finite lo < hi");
    return RewardDistribution(ScaledBernoulli{p, lo, hi});
}

RewardDistribution RewardDistribution::piecewise(std::vector<Knot> knots) {
    require(!knots.empty(), "piecewise cdf needs at least one knot");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const Knot& k = knots[i];
        require(std::isfinite(k.y), "piecewise knot locations must be finite");
        require(k.left >= 0.0 && k.left <= k.value && k.value <= 1.0,
                "piecewise knot " + std::to_string(i) + " needs 0 <= F(y-) <= F(y) <= 1");
        if (i > 0) {
            require(knots[i - 1].y < k.y, "piecewise knots must be strictly increasing in y");
            require(knots[i - 1].value <= k.left, "piecewise cdf must be non-decreasing at knot " + std::to_string(i));
        }
    }
    require(knots.front().left == 0.0, "piecewise cdf is 0 before the first knot, so its left limit must be 0");
    require(std::abs(knots.back().value - 1.0) <= 1e-12, "piecewise cdf must reach 1 at the last knot");
    knots.back().value = 1.0;
    knots.back().left = std::min(knots.back().left, 1.0);
    return RewardDistribution(PiecewiseCdf{std::move(knots)});
}

RewardDistribution RewardDistribution::piecewise_points(const std::vector<std::pair<double, double>>& knots) {
    std::vector<Knot> out;
    out.reserve(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i)
        out.push_back({knots[i].first, i == 0 ? 0.0 : knots[i].second, knots[i].second});
    return piecewise(std::move(out));
}

RewardDistribution RewardDistribution::neg_pareto(double scale, double shape) {
    require(std::isfinite(scale) && scale > 0.0 && std::isfinite(shape) && shape > 0.0,
            "neg-pareto needs scale > 0 and shape > 0");
    return RewardDistribution(NegPareto{scale, shape});
}

std::string RewardDistribution::describe() const {
    return std::visit(overloaded{
                          [](const Gaussian& g) { return "gaussian{" + detail::shortest(g.mean) + "," + detail::shortest(g.stddev) + "}"; },
                          [](const PointMass& d) { return "point-mass{" + detail::shortest(d.value) + "}"; },
                          [](const Uniform& u) { return "uniform{" + detail::shortest(u.lo) + "," + detail::shortest(u.hi) + "}"; },
                          [](const ScaledBernoulli& b) {
                              return "bernoulli-scaled{" + detail::shortest(b.p) + "," + detail::shortest(b.lo) + "," + detail::shortest(b.hi) + "}";
                          },
                          [](const PiecewiseCdf& pw) {
                              std::string s = "piecewise{";
                              for (std::size_t i = 0; i < pw.knots.size(); ++i) {
                                  const Knot& k = pw.knots[i];
                                  if (i) s += ";";
                                  s += detail::shortest(k.y) + ":";
                                  if (k.left != k.value) s += detail::shortest(k.left) + "->";
                                  s += detail::shortest(k.value);
                              }
                              return s + "}";
                          },
                          [](const NegPareto& p) { return "neg-pareto{" + detail::shortest(p.scale) + "," + detail::shortest(p.shape) + "}"; },
                      },
                      kind_);
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples) : sorted_(std::move(samples)) {
    require(!sorted_.empty(), "empirical distribution needs at least one sample");
    for (double v : sorted_) require(std::isfinite(v), "empirical samples must be finite");
    std::sort(sorted_.begin(), sorted_.end());
}

void EmpiricalDistribution::insert(double x) {
    require(std::isfinite(x), "empirical samples must be finite");
    sorted_.insert(std::upper_bound(sorted_.begin(), sorted_.end(), x), x);
}

EmpiricalDistribution empirical_from_samples(std::vector<double> values) { return EmpiricalDistribution(std::move(values)); }

MixtureDistribution::MixtureDistribution(std::vector<MixtureComponent> components, std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
    require(!components_.empty(), "mixture needs at least one component");
    require(components_.size() == weights_.size(), "mixture needs one weight per component");
    double total = 0.0;
    for (double w : weights_) {
        require(std::isfinite(w) && w >= 0.0, "mixture weights must be non-negative");
        total += w;
    }
    require(std::abs(total - 1.0) <= 1e-12, "mixture weights must sum to 1");
    for (double& w : weights_) w /= total;
}

MixtureDistribution mixture(std::span<const RewardDistribution> arms, std::span<const double> p) {
    require(arms.size() == p.size(), "mixture needs one weight per arm");
    return MixtureDistribution(std::vector<MixtureComponent>(arms.begin(), arms.end()),
                               std::vector<double>(p.begin(), p.end()));
}

MixtureDistribution proxy_distribution(std::span<const RewardDistribution> arms,
                                       std::span<const std::size_t> pull_counts, std::size_t T) {
    require(T >= 1, "proxy distribution needs T >= 1");
    require(arms.size() == pull_counts.size(), "proxy distribution needs one pull count per arm");
    std::size_t total = std::accumulate(pull_counts.begin(), pull_counts.end(), std::size_t{0});
    require(total == T, "pull counts must sum to T");
    std::vector<double> w;
    w.reserve(arms.size());
    for (std::size_t c : pull_counts) w.push_back(static_cast<double>(c) / static_cast<double>(T));
    return mixture(arms, w);
}

DistRef::DistRef(const Distribution& d) {
    std::visit([this](const auto& x) { p_ = &x; }, d);
}

DistRef::DistRef(const MixtureComponent& c) {
    std::visit([this](const auto& x) { p_ = &x; }, c);
}

// ---- evaluation ----

double cdf(DistRef F, double y) {
    return F.visit(overloaded{
        [&](const RewardDistribution& d) { return on_reward(d, [&](const auto& k) { return kind_cdf(k, y); }); },
        [&](const EmpiricalDistribution& e) { return emp_cdf(e, y); },
        [&](const MixtureDistribution& m) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m.components().size(); ++i)
                if (positive(m.weights()[i])) acc += m.weights()[i] * component_cdf(m.components()[i], y);
            return acc;
        },
    });
}

double cdf_left(DistRef F, double y) {
    return F.visit(overloaded{
        [&](const RewardDistribution& d) { return on_reward(d, [&](const auto& k) { return kind_cdf_left(k, y); }); },
        [&](const EmpiricalDistribution& e) { return emp_cdf_left(e, y); },
        [&](const MixtureDistribution& m) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m.components().size(); ++i)
                if (positive(m.weights()[i])) acc += m.weights()[i] * cdf_left(DistRef(m.components()[i]), y);
            return acc;
        },
    });
}

double quantile(DistRef F, double alpha) {
    check_alpha(alpha);
    return F.visit(overloaded{
        [&](const RewardDistribution& d) { return on_reward(d, [&](const auto& k) { return kind_quantile(k, alpha); }); },
        [&](const EmpiricalDistribution& e) {
            std::size_t k = emp_rank(e.size(), alpha, [&](double v) { return v >= alpha; });
            return e.samples()[std::min(k, e.size()) - 1];
        },
        [&](const MixtureDistribution& m) { return mixture_search(m, alpha, false); },
    });
}

double quantile_upper(DistRef F, double beta) {
    if (beta >= 1.0) return kInf;
    require(beta >= 0.0, "upper quantile level must lie in [0,1)");
    return F.visit(overloaded{
        [&](const RewardDistribution& d) {
            return on_reward(d, [&](const auto& k) { return kind_quantile_upper(k, beta); });
        },
        [&](const EmpiricalDistribution& e) {
            std::size_t k = emp_rank(e.size(), beta, [&](double v) { return v > beta; });
            return k > e.size() ? kInf : e.samples()[k - 1];
        },
        [&](const MixtureDistribution& m) { return mixture_search(m, beta, true); },
    });
}

double flat_end(DistRef F, double x) {
    return F.visit(overloaded{
        [&](const RewardDistribution& d) { return on_reward(d, [&](const auto& k) { return kind_flat_end(k, x); }); },
        [&](const EmpiricalDistribution& e) {
            auto s = e.samples();
            auto it = std::upper_bound(s.begin(), s.end(), x);
            return it == s.end() ? kInf : *it;
        },
        [&](const MixtureDistribution& m) {
            double best = kInf;
            for (std::size_t i = 0; i < m.components().size(); ++i)
                if (positive(m.weights()[i])) best = std::min(best, flat_end(DistRef(m.components()[i]), x));
            return best;
        },
    });
}

double cdf_integral(DistRef F, double z) {
    return F.visit(overloaded{
        [&](const RewardDistribution& d) {
            return on_reward(d, [&](const auto& k) { return kind_cdf_integral(k, z); });
        },
        [&](const EmpiricalDistribution& e) {
            double acc = 0.0;
            for (double x : e.samples()) {
                if (x > z) break;
                acc += z - x;
            }
            return acc / static_cast<double>(e.size());
        },
        [&](const MixtureDistribution& m) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m.components().size(); ++i)
                if (positive(m.weights()[i])) acc += m.weights()[i] * cdf_integral(DistRef(m.components()[i]), z);
            return acc;
        },
    });
}

double sample_one(DistRef F, Rng& rng) {
    return F.visit(overloaded{
        [&](const RewardDistribution& d) { return on_reward(d, [&](const auto& k) { return kind_sample(k, rng); }); },
        [&](const EmpiricalDistribution& e) {
            std::uniform_int_distribution<std::size_t> pick(0, e.size() - 1);
            return e.samples()[pick(rng)];
        },
        [&](const MixtureDistribution& m) {
            double u = uniform_open(rng), acc = 0.0;
            std::size_t chosen = 0;
            for (std::size_t i = 0; i < m.weights().size(); ++i) {
                if (!positive(m.weights()[i])) continue;
                chosen = i;
                acc += m.weights()[i];
                if (u < acc) break;
            }
            return sample_one(DistRef(m.components()[chosen]), rng);
        },
    });
}

std::vector<double> sample(DistRef F, Rng& rng, std::size_t n) {
    require(n >= 1, "sample count must be at least 1");
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_one(F, rng));
    return out;
}

std::string Moment::name() const {
    switch (kind) {
        case Kind::Mean: return "mean";
        case Kind::SecondMoment: return "second-moment";
        case Kind::LowerTail: return "lower-tail";
        case Kind::UpperTail: return "upper-tail";
        case Kind::Semivariance: return "tsv{" + detail::shortest(param) + "}";
        case Kind::ExpMoment: return "exp-moment{" + detail::shortest(param) + "}";
    }
    return "?";
}

double expectation(DistRef F, const Moment& m) {
    return F.visit(overloaded{
        [&](const RewardDistribution& d) {
            return on_reward(d, [&](const auto& k) { return kind_expectation(k, m); });
        },
        [&](const EmpiricalDistribution& e) {
            double acc = 0.0;
            for (double x : e.samples()) acc += integrand(m, x);
            return acc / static_cast<double>(e.size());
        },
        [&](const MixtureDistribution& mix) {
            double acc = 0.0;
            for (std::size_t i = 0; i < mix.components().size(); ++i)
                if (positive(mix.weights()[i])) acc += mix.weights()[i] * expectation(DistRef(mix.components()[i]), m);
            return acc;
        },
    });
}

double tail_integral(DistRef F, TailSide side) {
    if (side == TailSide::Lower) return -expectation(F, Moment::lower_tail());
    return expectation(F, Moment::upper_tail());
}

std::vector<double> breakpoints(DistRef F) {
    std::vector<double> out;
    F.visit(overloaded{
        [&](const RewardDistribution& d) { on_reward(d, [&](const auto& k) { kind_breakpoints(k, out); return 0; }); },
        [&](const EmpiricalDistribution& e) { out.assign(e.samples().begin(), e.samples().end()); },
        [&](const MixtureDistribution& m) {
            for (std::size_t i = 0; i < m.components().size(); ++i) {
                if (!positive(m.weights()[i])) continue;
                auto part = breakpoints(DistRef(m.components()[i]));
                out.insert(out.end(), part.begin(), part.end());
            }
        },
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool has_curved_part(DistRef F) {
    return F.visit(overloaded{
        [&](const RewardDistribution& d) { return on_reward(d, [](const auto& k) { return kind_curved(k); }); },
        [&](const EmpiricalDistribution&) { return false; },
        [&](const MixtureDistribution& m) {
            for (std::size_t i = 0; i < m.components().size(); ++i)
                if (positive(m.weights()[i]) && has_curved_part(DistRef(m.components()[i]))) return true;
            return false;
        },
    });
}

bool has_density(DistRef F) {
    return F.visit(overloaded{
        [&](const RewardDistribution& d) { return on_reward(d, [](const auto& k) { return kind_has_density(k); }); },
        [&](const EmpiricalDistribution&) { return false; },
        [&](const MixtureDistribution& m) {
            for (std::size_t i = 0; i < m.components().size(); ++i)
                if (positive(m.weights()[i]) && has_density(DistRef(m.components()[i]))) return true;
            return false;
        },
    });
}

double density(DistRef F, double y) {
    return F.visit(overloaded{
        [&](const RewardDistribution& d) { return on_reward(d, [&](const auto& k) { return kind_density(k, y); }); },
        [&](const EmpiricalDistribution&) { return 0.0; },
        [&](const MixtureDistribution& m) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m.components().size(); ++i)
                if (positive(m.weights()[i])) acc += m.weights()[i] * density(DistRef(m.components()[i]), y);
            return acc;
        },
    });
}

std::vector<double> curved_probe_points(DistRef F) {
    std::vector<double> out;
    F.visit(overloaded{
        [&](const RewardDistribution& d) { on_reward(d, [&](const auto& k) { kind_probes(k, out); return 0; }); },
        [&](const EmpiricalDistribution&) {},
        [&](const MixtureDistribution& m) {
            for (std::size_t i = 0; i < m.components().size(); ++i) {
                if (!positive(m.weights()[i])) continue;
                auto part = curved_probe_points(DistRef(m.components()[i]));
                out.insert(out.end(), part.begin(), part.end());
            }
        },
    });
    return out;
}

bool is_smooth_at(DistRef F, double y) {
    return F.visit(overloaded{
        [&](const RewardDistribution& d) { return on_reward(d, [&](const auto& k) { return kind_smooth_at(k, y); }); },
        [&](const EmpiricalDistribution&) { return false; },
        [&](const MixtureDistribution& m) {
            for (std::size_t i = 0; i < m.components().size(); ++i)
                if (positive(m.weights()[i]) && !is_smooth_at(DistRef(m.components()[i]), y)) return false;
            return true;
        },
    });
}

}  // namespace edpm
