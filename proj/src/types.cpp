#include "osrec/types.hpp"

#include <cmath>

namespace osrec {

std::string PropertySample::check(double stiffness, double viscosity,
                                  double restitution, double friction) {
    const double v[kPropertyDims] = {stiffness, viscosity, restitution, friction};
    for (int i = 0; i < kPropertyDims; ++i) {
        if (!std::isfinite(v[i]))
            return std::string(property_name(i)) + " is not finite";
    }
    if (stiffness < 0.0) return "stiffness is negative";
    if (viscosity < 0.0) return "viscosity is negative";
    if (restitution < 0.0 || restitution > 1.0)
        return "restitution outside [0,1]";
    if (friction < 0.0) return "friction is negative";
    return {};
}

}  // namespace osrec
