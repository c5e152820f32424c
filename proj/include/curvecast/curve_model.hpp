#pragma once

// Inverse power law learning curve
//
//     y(x) = 100 + b1 * x^b2,   b1 <= 0, b2 < 0
//
// y is accuracy in percent and x the training-set size per class. The
// asymptote is fixed at 100.

namespace curvecast {

inline constexpr double kAsymptote = 100.0;

class CurveParams {
public:
    // Throws ContractError unless b1 <= 0 and b2 < 0 (both finite).
    CurveParams(double b1, double b2);

    double b1() const noexcept { return b1_; }
    double b2() const noexcept { return b2_; }

    friend bool operator==(const CurveParams&, const CurveParams&) = default;

private:
    double b1_;
    double b2_;
};

struct JacobianRow {
    double d_b1; ///< x^b2
    double d_b2; ///< b1 * x^b2 * ln(x)
};

// Raw model value; not clamped, can go negative for small x.
double eval(const CurveParams& params, double x);

JacobianRow jacobian_row(const CurveParams& params, double x);

enum class SizeStatus { ok, sub_unit_size };

struct SizeInversion {
    double size;
    SizeStatus status;
};

// Solves eval(params, x) == target for x. Results below one sample are
// returned with status sub_unit_size rather than rejected.
SizeInversion invert_for_size(const CurveParams& params, double target);

} // namespace curvecast
