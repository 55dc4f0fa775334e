#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "edpm/dist.hpp"

namespace edpm {

// ||F|| = max{ ||F||_inf, |B_1(F)|, ..., |B_m(F)| }
struct NormSpec {
    bool sup = true;
    std::vector<Moment> functionals;

    // "sup", "sup+lower-tail", "sup+both-tails", "sup+mean+second-moment",
    // "sup+mean+tsv{r}", or any '+'-joined list of: sup, mean, second-moment,
    // lower-tail, upper-tail, both-tails, tsv{r}, exp-moment{theta}.
    static NormSpec parse(std::string_view text);
    std::string name() const;
    std::size_t dimension() const { return functionals.size(); }
};

// Exact sup_y |F(y) - G(y)|.
double sup_distance(DistRef F, DistRef G);

// B(F) for one functional; +-inf when divergent.
double seminorm_value(DistRef F, const Moment& functional);

// Infinite when a functional diverges on either side.
double norm_distance(DistRef F, DistRef G, const NormSpec& spec);

// ||F|| itself; the sup part of a CDF is 1.
double norm_of(DistRef F, const NormSpec& spec);

}  // namespace edpm
