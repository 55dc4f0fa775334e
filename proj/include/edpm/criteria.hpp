#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edpm/dist.hpp"
#include "edpm/norms.hpp"

namespace edpm {

enum class CriterionKind {
    Mean,
    SecondMoment,
    NegTsv,
    Entropic,
    NegVariance,
    MeanVariance,
    Sharpe,
    Sortino,
    VaR,
    CVaR,
    Bad1,
    Bad2,
};

enum class ConvexityClass { Linear, Convex, Quasiconvex, None };

std::string to_string(ConvexityClass c);

// psi(x) = b (x + x^q) together with the concentration rate a of
// P(||F_hat_t - F|| >= x) <= 2 exp(-a t x^2).
struct StabilityCertificate {
    double a = 2.0;
    double b = 1.0;
    double q = 1.0;

    void validate() const;
};

double modulus(const StabilityCertificate& cert, double x);

// |A_F(G - F)| <= d1 ||G - F|| and |Res(G, F)| <= d2/2 ||G - F||^2 whenever ||G - F|| <= M0.
struct SmoothnessCertificate {
    double d1 = 0.0;
    double d2 = 0.0;
    double M0 = 1.0;

    void validate() const;
};

struct Evaluation {
    double value = 0.0;
    bool warning = false;  // evaluated outside the criterion's nominal guard
    std::string note;
};

class RiskCriterion {
public:
    static RiskCriterion mean();
    static RiskCriterion second_moment();
    static RiskCriterion neg_tsv(double r);
    static RiskCriterion entropic(double theta);
    static RiskCriterion neg_variance();
    static RiskCriterion mean_variance(double rho);
    static RiskCriterion sharpe(double r, double eps);
    static RiskCriterion sortino(double r, double eps);
    static RiskCriterion value_at_risk(double alpha);
    static RiskCriterion cvar(double alpha);
    static RiskCriterion bad1();
    static RiskCriterion bad2();

    // "mean", "cvar{0.1}", "sharpe{0,0.01}", ... as produced by name().
    static RiskCriterion parse(std::string_view text);

    CriterionKind kind() const { return kind_; }
    ConvexityClass convexity() const;
    std::string name() const;

    double alpha() const { return alpha_; }
    double rho() const { return rho_; }
    double target() const { return r_; }
    double eps() const { return eps_; }
    double theta() const { return theta_; }

    const NormSpec& norm() const { return norm_; }
    void set_norm(NormSpec spec) { norm_ = std::move(spec); }
    // a = 2 log 2 / log(2(m+1)) for the bound norm's functional count m.
    double default_concentration_rate() const;

    const std::optional<StabilityCertificate>& stability() const { return stability_; }
    const std::optional<SmoothnessCertificate>& smoothness() const { return smoothness_; }
    void set_stability(std::optional<StabilityCertificate> c);
    void set_smoothness(std::optional<SmoothnessCertificate> c);

    // Functionals B for criteria of the form h(B(F)); empty otherwise.
    std::vector<Moment> functionals() const;
    bool is_composite() const { return !functionals().empty(); }
    double compose(std::span<const double> x) const;                // h(x)
    std::vector<double> gradient(std::span<const double> x) const;  // grad h(x)

    double evaluate(DistRef F) const;
    Evaluation evaluate_checked(DistRef F) const;

    // A_F(G - F); throws UnsupportedOperation for VaR and the counter-examples.
    double linear_term(DistRef F, DistRef G) const;
    // Res(G, F) = R(G) - R(F) - A_F(G - F)
    double residual(DistRef G, DistRef F) const;

private:
    RiskCriterion(CriterionKind k, NormSpec n) : kind_(k), norm_(std::move(n)) {}

    CriterionKind kind_;
    NormSpec norm_;
    double alpha_ = 0.0, rho_ = 0.0, r_ = 0.0, eps_ = 0.0, theta_ = 0.0;
    std::optional<StabilityCertificate> stability_;
    std::optional<SmoothnessCertificate> smoothness_;
};

// ---- default certificates ----

struct GrowthFit {
    double b_alpha = 0.0;  // +inf when no finite constant works
    double M_alpha = 0.0;
    double max_abs_quantile = 0.0;  // v* over the fitted mixtures
};

// Safety factor applied on top of the grid-fitted growth constant.
inline constexpr double kGrowthFitMargin = 1.25;

// Fits b_alpha over the arm vertices and a lattice of their mixtures.
GrowthFit fit_growth_over_mixtures(std::span<const RewardDistribution> arms, double alpha);

// Certificates computed from the arm set; entries stay empty where no
// certificate is available (entropic stability, VaR smoothness, bad1/bad2,
// or arms violating the tail conditions).
struct DefaultCertificates {
    std::optional<StabilityCertificate> stability;
    std::optional<SmoothnessCertificate> smoothness;
    std::string note;
};

DefaultCertificates default_certificates(const RiskCriterion& criterion, std::span<const RewardDistribution> arms);
RiskCriterion with_default_certificates(RiskCriterion criterion, std::span<const RewardDistribution> arms);

// ---- conditions on arm distributions ----

struct GrowthCheck {
    bool pass = false;
    double worst_slack = 0.0;  // min over the grid of |F(VaR + b y) - alpha| - |y|
    double worst_y = 0.0;
};

// |F(VaR + b y) - alpha| >= |y| on a symmetric grid over [-M, M].
GrowthCheck check_growth_condition_c4(DistRef F, double alpha, double b_alpha, double M_alpha, double grid_step);
// Smallest b passing the grid check, +inf when none exists.
double fit_growth_constant(DistRef F, double alpha, double M_alpha, double grid_step);
double default_growth_radius(double alpha);

enum class LevelSet { Empty, SinglePoint, Interval };
std::string to_string(LevelSet s);

struct LevelSetReport {
    LevelSet kind = LevelSet::Empty;
    double lo = 0.0;
    double hi = 0.0;
};

// Shape of {y : F(y) = alpha}.
LevelSetReport check_level_set_c3(DistRef F, double alpha);

bool tail_integrable_c1(DistRef F);
bool sub_gaussian_c2(const RewardDistribution& F);
bool smooth_at_quantile_c5(DistRef F, double alpha);

}  // namespace edpm
