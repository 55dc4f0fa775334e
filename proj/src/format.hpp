#pragma once

#include <sstream>
#include <string>

namespace edpm::detail {

// Shortest decimal form that parses back to the same double.
inline std::string shortest(double v) {
    for (int prec = 6; prec <= 17; ++prec) {
        std::ostringstream os;
        os.precision(prec);
        os << v;
        if (prec == 17 || std::stod(os.str()) == v) return os.str();
    }
    return {};
}

}  // namespace edpm::detail
