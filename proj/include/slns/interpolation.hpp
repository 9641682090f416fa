#pragma once

#include <stdexcept>
#include <string_view>

#include "slns/field.hpp"

namespace slns {

enum class InterpolationScheme { Bilinear, MonotonizedBicubic, CubicSpline };

std::string_view to_string(InterpolationScheme s);
InterpolationScheme parse_interpolation_scheme(std::string_view name);

class InterpolationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Second-derivative tables of the tensor-product cubic spline through a
/// field: fxx along x for every grid row, fyy along y for every column, and
/// the mixed fxxyy. Walls use natural end conditions, periodic axes periodic ones.
struct SplineCoefficients {
  ScalarField fxx;
  ScalarField fyy;
  ScalarField fxxyy;
};

SplineCoefficients build_spline_coefficients(const ScalarField& f);

/// Evaluates a field at arbitrary points of the domain closure.
///
/// Holds a reference to the field, which must outlive the interpolator.
/// Spline tables are built in the constructor; after that, evaluation is a
/// pure read and may run concurrently.
class Interpolator {
 public:
  Interpolator(const ScalarField& f, InterpolationScheme scheme);

  double operator()(Vec2 p) const;
  InterpolationScheme scheme() const { return scheme_; }
  const ScalarField& field() const { return *f_; }

 private:
  double bilinear(const CellLocation& cx, const CellLocation& cy) const;
  double bicubic(const CellLocation& cx, const CellLocation& cy) const;
  double spline(const CellLocation& cx, const CellLocation& cy) const;
  double node_or_ghost(long i, long j) const;

  const ScalarField* f_;
  InterpolationScheme scheme_;
  SplineCoefficients spline_;
  double slack_x_;
  double slack_y_;
};

/// One-shot evaluation; builds spline tables on every call, so prefer an
/// Interpolator for repeated queries.
double interpolate(const ScalarField& f, Vec2 p, InterpolationScheme scheme);

}  // namespace slns
