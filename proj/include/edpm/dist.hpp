#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "edpm/error.hpp"

namespace edpm {

using Rng = std::mt19937_64;

// Uniform draw on the open interval (0, 1).
double uniform_open(Rng& rng);

// ---- analytic arm models -------------------------------------------------

struct Gaussian {
    double mean = 0.0;
    double stddev = 1.0;
};

struct PointMass {
    double value = 0.0;
};

struct Uniform {
    double lo = 0.0;
    double hi = 1.0;
};

// lo with probability 1-p, hi with probability p.
struct ScaledBernoulli {
    double p = 0.5;
    double lo = 0.0;
    double hi = 1.0;
};

// F(y-) = left, F(y) = value. Between consecutive knots the CDF is linear
// from value_k to left_{k+1}; left < value marks a jump.
struct Knot {
    double y = 0.0;
    double left = 0.0;
    double value = 0.0;
};

struct PiecewiseCdf {
    std::vector<Knot> knots;
};

// Negated Pareto: X = -Y with Y ~ Pareto(scale, shape). Lower tail is
// polynomial, so moments of order >= shape diverge.
struct NegPareto {
    double scale = 1.0;
    double shape = 2.0;
};

class RewardDistribution {
public:
    using Kind = std::variant<Gaussian, PointMass, Uniform, ScaledBernoulli, PiecewiseCdf, NegPareto>;

    static RewardDistribution gaussian(double mean, double stddev);
    static RewardDistribution point_mass(double value);
    static RewardDistribution uniform(double lo, double hi);
    static RewardDistribution scaled_bernoulli(double p, double lo, double hi);
    static RewardDistribution piecewise(std::vector<Knot> knots);
    // Continuous knots (y, F(y)); a first knot with F > 0 is a jump from 0.
    static RewardDistribution piecewise_points(const std::vector<std::pair<double, double>>& knots);
    static RewardDistribution neg_pareto(double scale, double shape);

    const Kind& kind() const { return kind_; }
    std::string describe() const;

private:
    explicit RewardDistribution(Kind k) : kind_(std::move(k)) {}
    Kind kind_;
};

// Step CDF with mass 1/t on every stored sample.
class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::vector<double> samples);

    void insert(double x);
    std::size_t size() const { return sorted_.size(); }
    std::span<const double> samples() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

EmpiricalDistribution empirical_from_samples(std::vector<double> values);

using MixtureComponent = std::variant<RewardDistribution, EmpiricalDistribution>;

class MixtureDistribution {
public:
    MixtureDistribution(std::vector<MixtureComponent> components, std::vector<double> weights);

    std::span<const MixtureComponent> components() const { return components_; }
    std::span<const double> weights() const { return weights_; }

private:
    std::vector<MixtureComponent> components_;
    std::vector<double> weights_;
};

using Distribution = std::variant<RewardDistribution, EmpiricalDistribution, MixtureDistribution>;

// Non-owning handle so the free functions below accept any representation
// without copying sample vectors.
class DistRef {
public:
    DistRef(const RewardDistribution& d) : p_(&d) {}
    DistRef(const EmpiricalDistribution& d) : p_(&d) {}
    DistRef(const MixtureDistribution& d) : p_(&d) {}
    DistRef(const Distribution& d);
    DistRef(const MixtureComponent& c);

    template <class F>
    decltype(auto) visit(F&& f) const {
        return std::visit([&](auto* p) -> decltype(auto) { return f(*p); }, p_);
    }

private:
    std::variant<const RewardDistribution*, const EmpiricalDistribution*, const MixtureDistribution*> p_;
};

MixtureDistribution mixture(std::span<const RewardDistribution> arms, std::span<const double> p);
MixtureDistribution proxy_distribution(std::span<const RewardDistribution> arms,
                                       std::span<const std::size_t> pull_counts, std::size_t T);

// ---- evaluation ----------------------------------------------------------

double cdf(DistRef F, double y);
double cdf_left(DistRef F, double y);

// inf{y : F(y) >= alpha}, alpha in (0,1).
double quantile(DistRef F, double alpha);
// inf{y : F(y) > beta}, beta in [0,1); +inf when beta >= 1.
double quantile_upper(DistRef F, double beta);

// sup{y >= x : F(y) = F(x)}; +inf when F stays constant forever after x.
double flat_end(DistRef F, double x);

// Integral of F over (-inf, z]. Infinite when the lower tail is not integrable.
double cdf_integral(DistRef F, double z);

std::vector<double> sample(DistRef F, Rng& rng, std::size_t n);
double sample_one(DistRef F, Rng& rng);

// Linear functionals B(F) = E_F[g(X)] used by norms and composite criteria.
struct Moment {
    enum class Kind { Mean, SecondMoment, LowerTail, UpperTail, Semivariance, ExpMoment };
    Kind kind = Kind::Mean;
    double param = 0.0;  // target r for Semivariance, theta for ExpMoment

    static Moment mean() { return {Kind::Mean, 0.0}; }
    static Moment second_moment() { return {Kind::SecondMoment, 0.0}; }
    static Moment lower_tail() { return {Kind::LowerTail, 0.0}; }
    static Moment upper_tail() { return {Kind::UpperTail, 0.0}; }
    // E[(X - r)^2 1{X <= r}]
    static Moment semivariance(double r) { return {Kind::Semivariance, r}; }
    // E[exp(-theta X)]
    static Moment exp_moment(double theta) { return {Kind::ExpMoment, theta}; }

    std::string name() const;
    bool operator==(const Moment&) const = default;
};

// Signed expectation; +-inf when divergent.
double expectation(DistRef F, const Moment& m);

enum class TailSide { Lower, Upper };
// |E[X 1{X <= 0}]| or E[X 1{X > 0}]; +inf when divergent.
double tail_integral(DistRef F, TailSide side);

// ---- structure queries used by exact sup-distance and condition checks ----

// Sorted, de-duplicated locations of knots, jumps and atoms.
std::vector<double> breakpoints(DistRef F);
// True when some positive-weight part has a non-linear CDF (gaussian, pareto).
bool has_curved_part(DistRef F);
// True when some positive-weight part carries an absolutely continuous density.
bool has_density(DistRef F);
// Density of the absolutely continuous part (zero for atoms).
double density(DistRef F, double y);
// Points covering the region where curved parts have mass, for critical-point search.
std::vector<double> curved_probe_points(DistRef F);
// CDF twice differentiable in a neighbourhood of y.
bool is_smooth_at(DistRef F, double y);

}  // namespace edpm
