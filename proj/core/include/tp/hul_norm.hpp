#pragma once

#include "tp/spectral_field.hpp"

namespace tp {

// Uniformly local Sobolev norm: max over window centers y (spaced by stride)
// of sqrt( sum_{j<=theta} int_{y-w/2}^{y+w/2} |d^j u|^2 dx ), with the window
// integrals taken by the trapezoid rule on the collocation grid.
// Defaults: window = 1, stride = dx.
double hul_norm(const SpectralField& f, int theta, double window = 1.0, double stride = 0.0);

} // namespace tp
