#pragma once

#include <string>

namespace tp {

// Human-readable dump of the modulation hierarchy at order n: per-index
// operator stencils and cubic term lists, for inspection and golden tests.
std::string derive_document(int order_n);

} // namespace tp
