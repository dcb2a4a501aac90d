#include "mcone/rng.hpp"

#include <sstream>

namespace mcone {

DiagonalLaw DiagonalLaw::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    double param = 1.0;
    if (colon != std::string::npos) {
        try {
            param = std::stod(text.substr(colon + 1));
        } catch (const std::exception&) {
            throw ValueError("cannot parse law parameter in '" + text + "'");
        }
    }
    if (name == "exp" || name == "exponential") {
        if (param <= 0) throw ValueError("exponential law needs a positive mean");
        return exponential(param);
    }
    if (name == "halfnormal") {
        if (param <= 0) throw ValueError("half-normal law needs a positive sigma");
        return half_normal(param);
    }
    if (name == "point") {
        if (param < 0) throw ValueError("point-mass law needs a nonnegative value");
        return point_mass(param);
    }
    throw ValueError("unknown diagonal law '" + name + "' (use exp:M, halfnormal:S or point:V)");
}

std::string DiagonalLaw::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Exponential: os << "exp:"; break;
        case Kind::HalfNormal: os << "halfnormal:"; break;
        case Kind::PointMass: os << "point:"; break;
    }
    os << param;
    return os.str();
}

} // namespace mcone
