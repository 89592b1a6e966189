#include "gkdv/fft.hpp"

#include <unsupported/Eigen/FFT>

#include <stdexcept>

namespace gkdv::fft {

namespace {
Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    return f;
  }();
  return fft;
}
}  // namespace

void forward(const Eigen::ArrayXd& in, Eigen::ArrayXcd& out) {
  const auto n = in.size();
  out.resize(n / 2 + 1);
  engine().fwd(out.data(), in.data(), n);
}

void inverse(const Eigen::ArrayXcd& in, int n, Eigen::ArrayXd& out) {
  if (in.size() != n / 2 + 1) throw std::invalid_argument("fft::inverse: spectrum size mismatch");
  out.resize(n);
  engine().inv(out.data(), in.data(), n);
}

int good_size(int n) {
  for (int m = (n + 3) / 4 * 4;; m += 4) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace gkdv::fft
