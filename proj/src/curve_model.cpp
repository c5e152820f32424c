#include "curvecast/curve_model.hpp"

#include <cmath>
#include <string>

#include "curvecast/errors.hpp"

namespace curvecast {

namespace {

void require_positive_size(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("training size must be positive and finite, got " + std::to_string(x));
    }
}

} // namespace

CurveParams::CurveParams(double b1, double b2) : b1_(b1), b2_(b2) {
    if (!std::isfinite(b1) || !std::isfinite(b2)) {
        throw ContractError("curve parameters must be finite");
    }
    if (b1 > 0.0) {
        throw ContractError("b1 must be <= 0, got " + std::to_string(b1));
    }
    if (b2 >= 0.0) {
        throw ContractError("b2 must be < 0, got " + std::to_string(b2));
    }
}

double eval(const CurveParams& params, double x) {
    require_positive_size(x);
    return kAsymptote + params.b1() * std::pow(x, params.b2());
}

JacobianRow jacobian_row(const CurveParams& params, double x) {
    require_positive_size(x);
    const double power = std::pow(x, params.b2());
    return {power, params.b1() * power * std::log(x)};
}

SizeInversion invert_for_size(const CurveParams& params, double target) {
    if (params.b1() == 0.0) {
        throw FlatCurveError("curve is flat at 100 (b1 = 0); no finite size reaches " +
                             std::to_string(target));
    }
    if (!std::isfinite(target)) {
        throw DomainError("target accuracy must be finite");
    }
    if (target >= kAsymptote) {
        throw UnreachableTargetError("target " + std::to_string(target) +
                                     " is not below the 100% asymptote");
    }
    const double size = std::pow((target - kAsymptote) / params.b1(), 1.0 / params.b2());
    return {size, size < 1.0 ? SizeStatus::sub_unit_size : SizeStatus::ok};
}

} // namespace curvecast
