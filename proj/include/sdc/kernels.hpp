#pragma once

#include <span>
#include <string>

namespace sdc::models {

// The three kernel families used by the classifier comparison. Note the
// naming: "gaussian_laplace" is the exponential of the plain (non-squared)
// Euclidean distance, while "rbf" squares it. They are distinct kernels and
// both are provided.
enum class KernelFamily { Polynomial, Rbf, GaussianLaplace };

struct KernelSpec {
  KernelFamily family = KernelFamily::Rbf;
  double tau = 1.0;     // polynomial offset
  int degree = 3;       // polynomial degree, >= 1
  double sigma = 1.0;   // rbf width, > 0
  double gamma = 1.0;   // gaussian_laplace rate, > 0
};

void validate_kernel(const KernelSpec& spec);

// K(x, y); symmetric in its arguments. Throws on dimension mismatch.
double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y);

std::string kernel_family_name(KernelFamily family);
KernelFamily kernel_family_from_name(const std::string& name);

}  // namespace sdc::models
