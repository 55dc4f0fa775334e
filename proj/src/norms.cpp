#include "edpm/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace edpm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

double braced_param(const std::string& token, const std::string& head) {
    if (token.size() < head.size() + 3 || token.back() != '}')
        throw DomainError("norm functional '" + token + "' needs a parameter, e.g. " + head + "{0}");
    std::string inner = token.substr(head.size() + 1, token.size() - head.size() - 2);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(inner, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != inner.size() || !std::isfinite(v)) throw DomainError("bad numeric parameter in '" + token + "'");
    return v;
}

}  // namespace

NormSpec NormSpec::parse(std::string_view text) {
    NormSpec spec;
    spec.sup = false;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t plus = text.find('+', start);
        // a '+' inside braces belongs to a number such as 1e+3
        std::size_t brace = text.find('{', start);
        if (plus != std::string_view::npos && brace != std::string_view::npos && brace < plus) {
            std::size_t close = text.find('}', brace);
            plus = close == std::string_view::npos ? std::string_view::npos : text.find('+', close);
        }
        std::string tok = trim(text.substr(start, plus == std::string_view::npos ? std::string_view::npos : plus - start));
        if (tok == "sup") spec.sup = true;
        else if (tok == "mean") spec.functionals.push_back(Moment::mean());
        else if (tok == "second-moment") spec.functionals.push_back(Moment::second_moment());
        else if (tok == "lower-tail") spec.functionals.push_back(Moment::lower_tail());
        else if (tok == "upper-tail") spec.functionals.push_back(Moment::upper_tail());
        else if (tok == "both-tails") {
            spec.functionals.push_back(Moment::lower_tail());
            spec.functionals.push_back(Moment::upper_tail());
        } else if (tok.rfind("tsv{", 0) == 0) spec.functionals.push_back(Moment::semivariance(braced_param(tok, "tsv")));
        else if (tok.rfind("exp-moment{", 0) == 0) {
            double theta = braced_param(tok, "exp-moment");
            if (!(theta > 0.0)) throw DomainError("exp-moment needs theta > 0");
            spec.functionals.push_back(Moment::exp_moment(theta));
        } else throw DomainError("unknown norm component '" + tok + "' in \"" + std::string(text) + "\"");
        if (plus == std::string_view::npos) break;
        start = plus + 1;
    }
    if (!spec.sup) throw DomainError("norm spec must include the sup baseline: \"" + std::string(text) + "\"");
    return spec;
}

std::string NormSpec::name() const {
    std::string out = sup ? "sup" : "";
    for (std::size_t i = 0; i < functionals.size(); ++i) {
        const Moment& m = functionals[i];
        if (m.kind == Moment::Kind::LowerTail && i + 1 < functionals.size() &&
            functionals[i + 1].kind == Moment::Kind::UpperTail) {
            out += "+both-tails";
            ++i;
            continue;
        }
        out += (out.empty() ? "" : "+") + m.name();
    }
    return out;
}

double sup_distance(DistRef F, DistRef G) {
    std::vector<double> pts = breakpoints(F);
    {
        std::vector<double> g = breakpoints(G);
        pts.insert(pts.end(), g.begin(), g.end());
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    }
    auto diff = [&](double y) { return cdf(F, y) - cdf(G, y); };
    double best = 0.0;
    for (double b : pts) {
        best = std::max(best, std::abs(diff(b)));
        best = std::max(best, std::abs(cdf_left(F, b) - cdf_left(G, b)));
    }
    const bool curved = has_curved_part(F) || has_curved_part(G);
    // Without curved parts the difference is linear between breakpoints; when
    // one side is purely atomic the difference is monotone between them.
    if (!curved || !has_density(F) || !has_density(G)) return best;

    std::vector<double> probes = curved_probe_points(F);
    {
        std::vector<double> g = curved_probe_points(G);
        probes.insert(probes.end(), g.begin(), g.end());
    }
    for (double b : pts) {
        probes.push_back(std::nextafter(b, -kInf));
        probes.push_back(std::nextafter(b, kInf));
    }
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
    probes.erase(std::remove_if(probes.begin(), probes.end(),
                                [&](double y) { return std::binary_search(pts.begin(), pts.end(), y); }),
                 probes.end());

    auto slope = [&](double y) { return density(F, y) - density(G, y); };
    double prev_y = 0.0, prev_s = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const double y = probes[i];
        best = std::max(best, std::abs(diff(y)));
        const double s = slope(y);
        if (i > 0) {
            auto nb = std::upper_bound(pts.begin(), pts.end(), prev_y);
            const bool crosses_breakpoint = nb != pts.end() && *nb < y;
            if (!crosses_breakpoint && ((prev_s > 0.0 && s < 0.0) || (prev_s < 0.0 && s > 0.0))) {
                double lo = prev_y, hi = y;
                // oriented so that swapping F and G takes the same path
                const double orient = prev_s > 0.0 ? 1.0 : -1.0;
                for (int it = 0; it < 200; ++it) {
                    double mid = lo + 0.5 * (hi - lo);
                    if (!(mid > lo && mid < hi)) break;
                    if (orient * slope(mid) > 0.0) lo = mid;
                    else hi = mid;
                }
                best = std::max({best, std::abs(diff(lo)), std::abs(diff(hi))});
            }
        }
        prev_y = y;
        prev_s = s;
    }
    return best;
}

double seminorm_value(DistRef F, const Moment& functional) { return expectation(F, functional); }

double norm_distance(DistRef F, DistRef G, const NormSpec& spec) {
    double best = spec.sup ? sup_distance(F, G) : 0.0;
    for (const Moment& m : spec.functionals) {
        double a = seminorm_value(F, m), b = seminorm_value(G, m);
        if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
        best = std::max(best, std::abs(a - b));
    }
    return best;
}

double norm_of(DistRef F, const NormSpec& spec) {
    double best = spec.sup ? 1.0 : 0.0;
    for (const Moment& m : spec.functionals) {
        double v = seminorm_value(F, m);
        if (!std::isfinite(v)) return kInf;
        best = std::max(best, std::abs(v));
    }
    return best;
}

}  // namespace edpm
