#pragma once

#include <Eigen/Core>

namespace gkdv::fft {

// Real <-> half-spectrum transforms. Forward is unnormalized,
// c_j = sum_i u_i exp(-2 pi i i j / n); inverse includes the 1/n factor.
// Each thread keeps its own plan cache, so calls are thread-safe.

void forward(const Eigen::ArrayXd& in, Eigen::ArrayXcd& out);
void inverse(const Eigen::ArrayXcd& in, int n, Eigen::ArrayXd& out);

/// Smallest size >= n of the form 2^a 3^b 5^c that is a multiple of 4.
int good_size(int n);

}  // namespace gkdv::fft
