#include "nurbsvo/types.hpp"

#include <cmath>
#include <numbers>

namespace nurbsvo {

double wrap_angle(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double wrapped = std::remainder(angle, two_pi);  // [-pi, pi]
    if (wrapped <= -std::numbers::pi) {
        wrapped = std::numbers::pi;
    }
    return wrapped;
}

}  // namespace nurbsvo
