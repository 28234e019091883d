#pragma once

#include <cstdint>

#include "corrkit/rotgraph.hpp"

namespace corrkit::rotgraph {

struct SpectralEstimate {
  double lambda_hat = 0.0;  // |lambda_2| / Delta, in [0,1]
  std::int64_t iterations = 0;
  double residual = 0.0;
};

// Materializes the normalized adjacency operator from the rotation map
// (requires D*Delta <= 2^22), deflates the uniform eigenvector and power
// iterates on the squared operator so that +/- eigenvalue pairs converge.
SpectralEstimate second_eigenvalue(const GraphPtr& g, double tol = 1e-7);

}  // namespace corrkit::rotgraph
