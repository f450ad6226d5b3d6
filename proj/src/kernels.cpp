#include "sdc/kernels.hpp"

#include <cmath>

#include "sdc/errors.hpp"

namespace sdc::models {

void validate_kernel(const KernelSpec& spec) {
  switch (spec.family) {
    case KernelFamily::Polynomial:
      if (spec.degree < 1) throw InvalidArgument("polynomial kernel needs degree >= 1");
      if (spec.tau < 0.0) throw InvalidArgument("polynomial kernel needs tau >= 0");
      return;
    case KernelFamily::Rbf:
      if (!(spec.sigma > 0.0)) throw InvalidArgument("rbf kernel needs sigma > 0");
      return;
    case KernelFamily::GaussianLaplace:
      if (!(spec.gamma > 0.0)) throw InvalidArgument("gaussian kernel needs gamma > 0");
      return;
  }
  throw InvalidArgument("unknown kernel family");
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y) {
  if (x.size() != y.size())
    throw InvalidArgument("kernel_eval: dimension mismatch (" + std::to_string(x.size()) +
                          " vs " + std::to_string(y.size()) + ")");
  switch (spec.family) {
    case KernelFamily::Polynomial: {
      double dot = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
      double base = spec.tau + dot;
      double out = 1.0;
      for (int d = 0; d < spec.degree; ++d) out *= base;
      return out;
    }
    case KernelFamily::Rbf: {
      double dist2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        dist2 += d * d;
      }
      return std::exp(-dist2 / (2.0 * spec.sigma * spec.sigma));
    }
    case KernelFamily::GaussianLaplace: {
      double dist2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        dist2 += d * d;
      }
      return std::exp(-spec.gamma * std::sqrt(dist2));
    }
  }
  throw InvalidArgument("unknown kernel family");
}

std::string kernel_family_name(KernelFamily family) {
  switch (family) {
    case KernelFamily::Polynomial: return "polynomial";
    case KernelFamily::Rbf: return "rbf";
    case KernelFamily::GaussianLaplace: return "gaussian_laplace";
  }
  return "unknown";
}

KernelFamily kernel_family_from_name(const std::string& name) {
  if (name == "polynomial") return KernelFamily::Polynomial;
  if (name == "rbf") return KernelFamily::Rbf;
  if (name == "gaussian_laplace") return KernelFamily::GaussianLaplace;
  throw InvalidArgument("unknown kernel family: " + name);
}

}  // namespace sdc::models
