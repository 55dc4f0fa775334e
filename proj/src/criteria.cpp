#include "edpm/criteria.hpp"

#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace edpm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_level(double alpha, const char* what) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError(std::string(what) + " level must lie in (0,1)");
}

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

double bad2_value(DistRef F) {
    auto plus = [&](double v) { return cdf(F, v) == 1.0 ? v : flat_end(F, v); };
    const double vpp = plus(plus(quantile(F, 0.1)));
    const bool flag = cdf_left(F, 10.0) - cdf(F, 1.0) > 0.0 || cdf_left(F, 1.0) > 0.0;
    return vpp + (flag ? 5.0 : 0.0);
}

// compositions of n into k non-negative parts, earlier arms taking the larger share first
void for_each_composition(std::size_t k, std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> c(k, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
        if (i + 1 == k) {
            c[i] = left;
            fn(c);
            return;
        }
        for (std::size_t v = left + 1; v-- > 0;) {
            c[i] = v;
            rec(i + 1, left - v);
        }
    };
    rec(0, n);
}

}  // namespace

std::string to_string(ConvexityClass c) {
    switch (c) {
        case ConvexityClass::Linear: return "linear";
        case ConvexityClass::Convex: return "convex";
        case ConvexityClass::Quasiconvex: return "quasiconvex";
        case ConvexityClass::None: return "none";
    }
    return "?";
}

std::string to_string(LevelSet s) {
    switch (s) {
        case LevelSet::Empty: return "empty";
        case LevelSet::SinglePoint: return "single-point";
        case LevelSet::Interval: return "interval";
    }
    return "?";
}

void StabilityCertificate::validate() const {
    if (!(a > 0.0 && std::isfinite(a))) throw DomainError("stability certificate needs a > 0");
    if (!(b > 0.0 && std::isfinite(b))) throw DomainError("stability certificate needs b > 0");
    if (!(q >= 1.0 && std::isfinite(q))) throw DomainError("stability certificate needs q >= 1");
}

double modulus(const StabilityCertificate& cert, double x) {
    if (x < 0.0) throw DomainError("modulus argument must be non-negative");
    return cert.b * (x + std::pow(x, cert.q));
}

void SmoothnessCertificate::validate() const {
    if (!(d1 >= 0.0) || !(d2 >= 0.0)) throw DomainError("smoothness certificate needs d1, d2 >= 0");
    if (!(M0 > 0.0)) throw DomainError("smoothness certificate needs M0 > 0");
}

// ---- construction ----

RiskCriterion RiskCriterion::mean() { return {CriterionKind::Mean, NormSpec::parse("sup+mean")}; }

RiskCriterion RiskCriterion::second_moment() { return {CriterionKind::SecondMoment, NormSpec::parse("sup+second-moment")}; }

RiskCriterion RiskCriterion::neg_tsv(double r) {
    check_finite(r, "neg-tsv target r");
    RiskCriterion c(CriterionKind::NegTsv, NormSpec{true, {Moment::semivariance(r)}});
    c.r_ = r;
    return c;
}

RiskCriterion RiskCriterion::entropic(double theta) {
    if (!(theta > 0.0 && std::isfinite(theta))) throw DomainError("entropic needs theta > 0");
    RiskCriterion c(CriterionKind::Entropic, NormSpec{true, {Moment::exp_moment(theta)}});
    c.theta_ = theta;
    return c;
}

RiskCriterion RiskCriterion::neg_variance() {
    return {CriterionKind::NegVariance, NormSpec::parse("sup+mean+second-moment")};
}

RiskCriterion RiskCriterion::mean_variance(double rho) {
    if (!(rho >= 0.0 && std::isfinite(rho))) throw DomainError("mean-variance needs rho >= 0");
    RiskCriterion c(CriterionKind::MeanVariance, NormSpec::parse("sup+mean+second-moment"));
    c.rho_ = rho;
    return c;
}

RiskCriterion RiskCriterion::sharpe(double r, double eps) {
    check_finite(r, "sharpe target r");
    if (!(eps > 0.0 && std::isfinite(eps))) throw DomainError("sharpe needs eps_sigma > 0");
    RiskCriterion c(CriterionKind::Sharpe, NormSpec::parse("sup+mean+second-moment"));
    c.r_ = r;
    c.eps_ = eps;
    return c;
}

RiskCriterion RiskCriterion::sortino(double r, double eps) {
    check_finite(r, "sortino target r");
    if (!(eps > 0.0 && std::isfinite(eps))) throw DomainError("sortino needs eps_sigma > 0");
    RiskCriterion c(CriterionKind::Sortino, NormSpec{true, {Moment::mean(), Moment::semivariance(r)}});
    c.r_ = r;
    c.eps_ = eps;
    return c;
}

RiskCriterion RiskCriterion::value_at_risk(double alpha) {
    check_level(alpha, "var");
    RiskCriterion c(CriterionKind::VaR, NormSpec::parse("sup+both-tails"));
    c.alpha_ = alpha;
    return c;
}

RiskCriterion RiskCriterion::cvar(double alpha) {
    check_level(alpha, "cvar");
    RiskCriterion c(CriterionKind::CVaR, NormSpec::parse("sup+both-tails"));
    c.alpha_ = alpha;
    return c;
}

RiskCriterion RiskCriterion::bad1() { return {CriterionKind::Bad1, NormSpec::parse("sup")}; }
RiskCriterion RiskCriterion::bad2() { return {CriterionKind::Bad2, NormSpec::parse("sup")}; }

RiskCriterion RiskCriterion::parse(std::string_view text) {
    std::string s(text);
    std::string head = s, inner;
    std::vector<double> args;
    if (auto brace = s.find('{'); brace != std::string::npos) {
        if (s.back() != '}') throw DomainError("malformed criterion '" + s + "'");
        head = s.substr(0, brace);
        inner = s.substr(brace + 1, s.size() - brace - 2);
        std::stringstream ss(inner);
        std::string part;
        while (std::getline(ss, part, ',')) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(part, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != part.size()) throw DomainError("bad criterion parameter '" + part + "' in '" + s + "'");
            args.push_back(v);
        }
    }
    auto want = [&](std::size_t n) {
        if (args.size() != n)
            throw DomainError("criterion '" + head + "' takes " + std::to_string(n) + " parameter(s), got '" + s + "'");
    };
    if (head == "mean") return want(0), mean();
    if (head == "second-moment") return want(0), second_moment();
    if (head == "neg-tsv") return want(1), neg_tsv(args[0]);
    if (head == "entropic") return want(1), entropic(args[0]);
    if (head == "neg-variance") return want(0), neg_variance();
    if (head == "mean-variance") return want(1), mean_variance(args[0]);
    if (head == "sharpe") return want(2), sharpe(args[0], args[1]);
    if (head == "sortino") return want(2), sortino(args[0], args[1]);
    if (head == "var") return want(1), value_at_risk(args[0]);
    if (head == "cvar") return want(1), cvar(args[0]);
    if (head == "bad1") return want(0), bad1();
    if (head == "bad2") return want(0), bad2();
    throw DomainError("unknown criterion '" + s + "'");
}

ConvexityClass RiskCriterion::convexity() const {
    switch (kind_) {
        case CriterionKind::Mean:
        case CriterionKind::SecondMoment:
        case CriterionKind::NegTsv: return ConvexityClass::Linear;
        case CriterionKind::Entropic:
        case CriterionKind::NegVariance:
        case CriterionKind::MeanVariance:
        case CriterionKind::CVaR: return ConvexityClass::Convex;
        case CriterionKind::Sharpe:
        case CriterionKind::Sortino:
        case CriterionKind::VaR: return ConvexityClass::Quasiconvex;
        case CriterionKind::Bad1:
        case CriterionKind::Bad2: return ConvexityClass::None;
    }
    return ConvexityClass::None;
}

std::string RiskCriterion::name() const {
    switch (kind_) {
        case CriterionKind::Mean: return "mean";
        case CriterionKind::SecondMoment: return "second-moment";
        case CriterionKind::NegTsv: return "neg-tsv{" + detail::shortest(r_) + "}";
        case CriterionKind::Entropic: return "entropic{" + detail::shortest(theta_) + "}";
        case CriterionKind::NegVariance: return "neg-variance";
        case CriterionKind::MeanVariance: return "mean-variance{" + detail::shortest(rho_) + "}";
        case CriterionKind::Sharpe: return "sharpe{" + detail::shortest(r_) + "," + detail::shortest(eps_) + "}";
        case CriterionKind::Sortino: return "sortino{" + detail::shortest(r_) + "," + detail::shortest(eps_) + "}";
        case CriterionKind::VaR: return "var{" + detail::shortest(alpha_) + "}";
        case CriterionKind::CVaR: return "cvar{" + detail::shortest(alpha_) + "}";
        case CriterionKind::Bad1: return "bad1";
        case CriterionKind::Bad2: return "bad2";
    }
    return "?";
}

double RiskCriterion::default_concentration_rate() const {
    const double m = static_cast<double>(norm_.dimension());
    return 2.0 * std::log(2.0) / std::log(2.0 * (m + 1.0));
}

void RiskCriterion::set_stability(std::optional<StabilityCertificate> c) {
    if (c) c->validate();
    stability_ = c;
}

void RiskCriterion::set_smoothness(std::optional<SmoothnessCertificate> c) {
    if (c) c->validate();
    smoothness_ = c;
}

std::vector<Moment> RiskCriterion::functionals() const {
    switch (kind_) {
        case CriterionKind::Mean: return {Moment::mean()};
        case CriterionKind::SecondMoment: return {Moment::second_moment()};
        case CriterionKind::NegTsv: return {Moment::semivariance(r_)};
        case CriterionKind::Entropic: return {Moment::exp_moment(theta_)};
        case CriterionKind::NegVariance:
        case CriterionKind::MeanVariance:
        case CriterionKind::Sharpe: return {Moment::mean(), Moment::second_moment()};
        // second coordinate is the semivariance itself, so h uses eps + x2
        case CriterionKind::Sortino: return {Moment::mean(), Moment::semivariance(r_)};
        default: return {};
    }
}

double RiskCriterion::compose(std::span<const double> x) const {
    switch (kind_) {
        case CriterionKind::Mean:
        case CriterionKind::SecondMoment: return x[0];
        case CriterionKind::NegTsv: return -x[0];
        case CriterionKind::Entropic: return -std::log(x[0]) / theta_;
        case CriterionKind::NegVariance: return -(x[1] - x[0] * x[0]);
        case CriterionKind::MeanVariance: return x[0] - rho_ * x[1] + rho_ * x[0] * x[0];
        case CriterionKind::Sharpe: return (x[0] - r_) / std::sqrt(eps_ + x[1] - x[0] * x[0]);
        case CriterionKind::Sortino: return (x[0] - r_) / std::sqrt(eps_ + x[1]);
        default: throw UnsupportedOperation(name() + " is not a composition of moment functionals");
    }
}

std::vector<double> RiskCriterion::gradient(std::span<const double> x) const {
    switch (kind_) {
        case CriterionKind::Mean:
        case CriterionKind::SecondMoment: return {1.0};
        case CriterionKind::NegTsv: return {-1.0};
        case CriterionKind::Entropic: return {-1.0 / (theta_ * x[0])};
        case CriterionKind::NegVariance: return {2.0 * x[0], -1.0};
        case CriterionKind::MeanVariance: return {1.0 + 2.0 * rho_ * x[0], -rho_};
        case CriterionKind::Sharpe: {
            const double w = eps_ + x[1] - x[0] * x[0], u = x[0] - r_;
            return {1.0 / std::sqrt(w) + u * x[0] / (w * std::sqrt(w)), -0.5 * u / (w * std::sqrt(w))};
        }
        case CriterionKind::Sortino: {
            const double w = eps_ + x[1], u = x[0] - r_;
            return {1.0 / std::sqrt(w), -0.5 * u / (w * std::sqrt(w))};
        }
        default: throw UnsupportedOperation(name() + " is not a composition of moment functionals");
    }
}

Evaluation RiskCriterion::evaluate_checked(DistRef F) const {
    Evaluation out;
    switch (kind_) {
        case CriterionKind::VaR: out.value = quantile(F, alpha_); return out;
        case CriterionKind::CVaR: {
            const double v = quantile(F, alpha_);
            const double area = cdf_integral(F, v);
            if (!std::isfinite(area)) throw CriterionDomainError("cvar requires an integrable lower tail");
            out.value = v - area / alpha_;
            return out;
        }
        case CriterionKind::Bad1: out.value = quantile(F, 0.1) + quantile(F, 0.9); return out;
        case CriterionKind::Bad2: out.value = bad2_value(F); return out;
        default: break;
    }
    const auto fs = functionals();
    std::vector<double> x;
    x.reserve(fs.size());
    for (const Moment& m : fs) {
        double v = expectation(F, m);
        if (!std::isfinite(v)) throw CriterionDomainError(name() + " requires a finite " + m.name());
        x.push_back(v);
    }
    switch (kind_) {
        case CriterionKind::Entropic:
            if (!(x[0] > 0.0)) throw CriterionDomainError("entropic requires 0 < E[exp(-theta X)] < inf");
            break;
        case CriterionKind::Sharpe:
            if (!(eps_ + x[1] - x[0] * x[0] > 0.0))
                throw CriterionDomainError("sharpe requires eps_sigma + x2 - x1^2 > 0");
            if (x[0] < r_) {
                out.warning = true;
                out.note = "sharpe evaluated with x1 < r";
            }
            break;
        case CriterionKind::Sortino:
            if (!(eps_ + x[1] > 0.0)) throw CriterionDomainError("sortino requires eps_sigma - x2 > 0");
            if (x[0] < r_) {
                out.warning = true;
                out.note = "sortino evaluated with x1 < r";
            }
            break;
        default: break;
    }
    out.value = compose(x);
    return out;
}

double RiskCriterion::evaluate(DistRef F) const { return evaluate_checked(F).value; }

double RiskCriterion::linear_term(DistRef F, DistRef G) const {
    if (kind_ == CriterionKind::CVaR) {
        const double v = quantile(F, alpha_);
        return (cdf_integral(F, v) - cdf_integral(G, v)) / alpha_;
    }
    if (!is_composite()) throw UnsupportedOperation(name() + " has no linear approximation A_F");
    const auto fs = functionals();
    std::vector<double> xf, dx;
    for (const Moment& m : fs) {
        double a = expectation(F, m), b = expectation(G, m);
        xf.push_back(a);
        dx.push_back(b - a);
    }
    const auto g = gradient(xf);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * dx[i];
    return acc;
}

double RiskCriterion::residual(DistRef G, DistRef F) const {
    const double a = linear_term(F, G);
    return evaluate(G) - evaluate(F) - a;
}

// ---- conditions ----

double default_growth_radius(double alpha) {
    check_level(alpha, "growth condition");
    return 0.5 * std::min(alpha, 1.0 - alpha);
}

LevelSetReport check_level_set_c3(DistRef F, double alpha) {
    check_level(alpha, "level set");
    const double v = quantile(F, alpha);
    if (std::abs(cdf(F, v) - alpha) > 1e-12) return {LevelSet::Empty, v, v};
    const double e = flat_end(F, v);
    if (e > v) return {LevelSet::Interval, v, e};
    return {LevelSet::SinglePoint, v, v};
}

GrowthCheck check_growth_condition_c4(DistRef F, double alpha, double b_alpha, double M_alpha, double grid_step) {
    check_level(alpha, "growth condition");
    if (!(b_alpha > 0.0) || !(M_alpha > 0.0) || !(grid_step > 0.0))
        throw DomainError("growth check needs b_alpha, M_alpha and grid_step > 0");
    GrowthCheck out;
    out.pass = true;
    out.worst_slack = kInf;
    const LevelSetReport level = check_level_set_c3(F, alpha);
    if (level.kind == LevelSet::Interval) {
        // F(VaR + b y) = alpha for all small y > 0, whatever b is
        out.pass = false;
        out.worst_slack = -std::min(M_alpha, (level.hi - level.lo) / b_alpha);
        out.worst_y = std::min(M_alpha, 0.5 * (level.hi - level.lo) / b_alpha);
        return out;
    }
    const double v = quantile(F, alpha);
    const auto steps = static_cast<long>(std::floor(M_alpha / grid_step + 1e-9));
    for (long j = -steps; j <= steps; ++j) {
        if (j == 0) continue;
        const double y = static_cast<double>(j) * grid_step;
        const double slack = std::abs(cdf(F, v + b_alpha * y) - alpha) - std::abs(y);
        if (slack < out.worst_slack) {
            out.worst_slack = slack;
            out.worst_y = y;
        }
    }
    out.pass = out.worst_slack >= 0.0;
    return out;
}

double fit_growth_constant(DistRef F, double alpha, double M_alpha, double grid_step) {
    check_level(alpha, "growth condition");
    if (check_level_set_c3(F, alpha).kind == LevelSet::Interval) return kInf;
    const double v = quantile(F, alpha);
    const auto steps = static_cast<long>(std::floor(M_alpha / grid_step + 1e-9));
    double b = 0.0;
    for (long j = 1; j <= steps; ++j) {
        const double y = static_cast<double>(j) * grid_step;
        if (alpha + y >= 1.0 || alpha - y <= 0.0) return kInf;
        b = std::max(b, (quantile(F, alpha + y) - v) / y);
        b = std::max(b, (v - quantile_upper(F, alpha - y)) / y);
    }
    return b;
}

bool tail_integrable_c1(DistRef F) {
    return std::isfinite(tail_integral(F, TailSide::Lower)) && std::isfinite(tail_integral(F, TailSide::Upper));
}

bool sub_gaussian_c2(const RewardDistribution& F) { return !std::holds_alternative<NegPareto>(F.kind()); }

bool smooth_at_quantile_c5(DistRef F, double alpha) { return is_smooth_at(F, quantile(F, alpha)); }

// ---- default certificates ----

GrowthFit fit_growth_over_mixtures(std::span<const RewardDistribution> arms, double alpha) {
    if (arms.empty()) throw DomainError("growth fit needs at least one arm");
    GrowthFit out;
    out.M_alpha = default_growth_radius(alpha);
    const double step = out.M_alpha / 100.0;
    const std::size_t K = arms.size();
    const std::size_t n = K == 1 ? 1 : (K <= 3 ? 10 : (K == 4 ? 6 : 1));
    auto visit_point = [&](const std::vector<double>& p) {
        MixtureDistribution m = mixture(arms, p);
        out.b_alpha = std::max(out.b_alpha, fit_growth_constant(m, alpha, out.M_alpha, step));
        out.max_abs_quantile = std::max(out.max_abs_quantile, std::abs(quantile(m, alpha)));
    };
    if (K <= 4) {
        for_each_composition(K, n, [&](const std::vector<std::size_t>& c) {
            std::vector<double> p(K);
            for (std::size_t i = 0; i < K; ++i) p[i] = static_cast<double>(c[i]) / static_cast<double>(n);
            visit_point(p);
        });
    } else {
        for (std::size_t i = 0; i < K; ++i) {
            std::vector<double> p(K, 0.0);
            p[i] = 1.0;
            visit_point(p);
        }
        visit_point(std::vector<double>(K, 1.0 / static_cast<double>(K)));
    }
    out.b_alpha *= kGrowthFitMargin;
    return out;
}

DefaultCertificates default_certificates(const RiskCriterion& criterion, std::span<const RewardDistribution> arms) {
    DefaultCertificates out;
    if (arms.empty()) throw DomainError("certificates need at least one arm");
    const double a = criterion.default_concentration_rate();

    double mu_hi = -kInf, mu_lo = kInf;
    for (const auto& arm : arms) {
        double m = expectation(arm, Moment::mean());
        mu_hi = std::max(mu_hi, m);
        mu_lo = std::min(mu_lo, m);
    }
    const double X = std::max(std::abs(mu_hi), std::abs(mu_lo));
    auto functionals_finite = [&]() {
        for (const auto& arm : arms)
            for (const Moment& m : criterion.functionals())
                if (!std::isfinite(expectation(arm, m))) return false;
        return true;
    };
    const double r = criterion.target(), eps = criterion.eps();

    switch (criterion.kind()) {
        case CriterionKind::Mean:
        case CriterionKind::SecondMoment:
        case CriterionKind::NegTsv:
            if (!functionals_finite()) break;
            out.stability = StabilityCertificate{a, 0.5, 1.0};
            out.smoothness = SmoothnessCertificate{1.0, 0.0, kInf};
            break;
        case CriterionKind::Entropic: {
            if (!functionals_finite()) break;
            double xmin = kInf;
            for (const auto& arm : arms) xmin = std::min(xmin, expectation(arm, Moment::exp_moment(criterion.theta())));
            const double th = criterion.theta();
            out.smoothness = SmoothnessCertificate{1.0 / (th * xmin), 4.0 / (th * xmin * xmin), 0.5 * xmin};
            out.note = "entropic: log is singular at 0, no global polynomial modulus";
            break;
        }
        case CriterionKind::NegVariance:
            if (!functionals_finite()) break;
            out.stability = StabilityCertificate{a, 1.0 + 2.0 * X, 2.0};
            out.smoothness = SmoothnessCertificate{1.0 + 2.0 * X, 2.0, kInf};
            break;
        case CriterionKind::MeanVariance: {
            if (!functionals_finite()) break;
            const double rho = criterion.rho();
            const double b = rho + std::max(std::abs(1.0 + 2.0 * rho * mu_hi), std::abs(1.0 + 2.0 * rho * mu_lo));
            out.stability = StabilityCertificate{a, b, 2.0};
            out.smoothness = SmoothnessCertificate{b, 2.0 * rho, kInf};
            break;
        }
        case CriterionKind::Sharpe: {
            if (!functionals_finite()) break;
            const double U = std::max(std::abs(mu_hi - r), std::abs(mu_lo - r));
            const double e12 = std::sqrt(eps), e32 = eps * e12, e52 = e32 * eps;
            const double c1 = 1.0 / e12 + U * (1.0 + 2.0 * X) / (2.0 * e32);
            const double c2 = (U + 1.0 + 2.0 * X) / (2.0 * e32);
            const double c3 = 1.0 / (2.0 * e32);
            out.stability = StabilityCertificate{a, std::max(c1 + c2, c2 + c3), 3.0};
            const double M0 = 1.0, XM = X + M0, UM = U + M0;
            const double h11 = (2.0 * XM + UM) / e32 + 3.0 * UM * XM * XM / e52;
            const double h12 = 0.5 / e32 + 1.5 * UM * XM / e52;
            const double h22 = 0.75 * UM / e52;
            const double d1 = 1.0 / e12 + U * X / e32 + 0.5 * U / e32;
            out.smoothness = SmoothnessCertificate{d1, h11 + 2.0 * h12 + h22, M0};
            break;
        }
        case CriterionKind::Sortino: {
            if (!functionals_finite()) break;
            const double U = std::max(std::abs(mu_hi - r), std::abs(mu_lo - r));
            const double e32 = eps * std::sqrt(eps), e52 = e32 * eps;
            const double b = std::max(1.0, 2.0 * eps + U) / (2.0 * e32);
            out.stability = StabilityCertificate{a, b, 2.0};
            const double M0 = 1.0;
            const double d2 = 1.0 / e32 + 3.0 * std::max(mu_hi + M0 - r, r + M0 - mu_lo) / (4.0 * e52);
            out.smoothness = SmoothnessCertificate{b, d2, M0};
            break;
        }
        case CriterionKind::VaR:
        case CriterionKind::CVaR: {
            double cstar = 1.0;
            for (const auto& arm : arms) {
                if (!tail_integrable_c1(arm)) {
                    out.note = "an arm has a non-integrable tail";
                    return out;
                }
                cstar = std::max(cstar, norm_of(arm, criterion.norm()));
            }
            const double al = criterion.alpha(), amin = std::min(al, 1.0 - al);
            const GrowthFit fit = fit_growth_over_mixtures(arms, al);
            if (criterion.kind() == CriterionKind::CVaR) {
                out.stability = StabilityCertificate{a, (1.0 + std::max(1.0, 3.0 * cstar) / amin) / al, 2.0};
                if (std::isfinite(fit.b_alpha))
                    out.smoothness = SmoothnessCertificate{(1.0 + fit.max_abs_quantile) / al, 2.0 * fit.b_alpha / al,
                                                           0.5 * fit.M_alpha};
                else
                    out.note = "growth condition fails on the mixture set; no smoothness certificate";
            } else {
                if (std::isfinite(fit.b_alpha))
                    out.stability = StabilityCertificate{
                        a, std::max(fit.b_alpha, (fit.M_alpha + 2.0 * cstar) / (amin * fit.M_alpha)), 1.0};
                else
                    out.note = "growth condition fails on the mixture set; no stability certificate";
            }
            break;
        }
        case CriterionKind::Bad1:
        case CriterionKind::Bad2: break;
    }
    return out;
}

RiskCriterion with_default_certificates(RiskCriterion criterion, std::span<const RewardDistribution> arms) {
    DefaultCertificates d = default_certificates(criterion, arms);
    criterion.set_stability(d.stability);
    criterion.set_smoothness(d.smoothness);
    return criterion;
}

}  // namespace edpm
