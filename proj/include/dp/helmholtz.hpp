#pragma once

#include "dp/grid.hpp"
#include "dp/spectral.hpp"

namespace dp {

/// The field u together with the derived quantities the analysis runs on:
/// momentum density y = (1-dxx) u, smooth variable v = (4-dxx)^{-1} u and
/// the convolution field h = (1-dxx)^{-1} u^2.
struct DerivedFields {
  Field u;
  Field y;
  Field v;
  Field h;
};

DerivedFields derived_fields(const Field& u);

/// v and its first two derivatives (the weighted-functional integrands).
struct SmoothVariable {
  Field v;
  Field vx;
  Field vxx;
};

SmoothVariable smooth_variable(const Field& u);
SmoothVariable smooth_variable(const Spectrum& u_hat);

}  // namespace dp
