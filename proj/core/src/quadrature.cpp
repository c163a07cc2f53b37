#include "subjet/quadrature.hpp"

#include "subjet/errors.hpp"

namespace subjet {

namespace {

void require_even(std::size_t panels) {
  if (panels == 0 || panels % 2 != 0) {
    throw InvalidArgument("Simpson rule needs a positive even panel count, got " + std::to_string(panels));
  }
}

double weight(std::size_t k, std::size_t panels) {
  if (k == 0 || k == panels) return 1.0;
  return k % 2 == 1 ? 4.0 : 2.0;
}

}  // namespace

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t panels) {
  require_even(panels);
  const double h = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t k = 0; k <= panels; ++k) {
    const double x = k == panels ? b : a + static_cast<double>(k) * h;
    sum += weight(k, panels) * f(x);
  }
  return sum * h / 3.0;
}

double simpson_2d(const std::function<double(double, double)>& f, double u0, double u1, double v0, double v1,
                  std::size_t panels_u, std::size_t panels_v) {
  require_even(panels_u);
  require_even(panels_v);
  const double hu = (u1 - u0) / static_cast<double>(panels_u);
  const double hv = (v1 - v0) / static_cast<double>(panels_v);
  double sum = 0.0;
  for (std::size_t i = 0; i <= panels_u; ++i) {
    const double u = i == panels_u ? u1 : u0 + static_cast<double>(i) * hu;
    double row = 0.0;
    for (std::size_t j = 0; j <= panels_v; ++j) {
      const double v = j == panels_v ? v1 : v0 + static_cast<double>(j) * hv;
      row += weight(j, panels_v) * f(u, v);
    }
    sum += weight(i, panels_u) * row;
  }
  return sum * hu * hv / 9.0;
}

std::vector<double> cumulative_simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  for (std::size_t k = 2; k < n; k += 2) {
    out[k] = out[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
  }
  for (std::size_t k = 1; k < n; k += 2) {
    if (k + 1 < n) {
      out[k] = out[k - 1] + h / 12.0 * (5.0 * f[k - 1] + 8.0 * f[k] - f[k + 1]);
    } else {
      out[k] = out[k - 1] + h / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
    }
  }
  return out;
}

}  // namespace subjet
